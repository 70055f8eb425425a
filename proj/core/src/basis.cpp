#include "drmel/basis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "drmel/error.hpp"

namespace drmel {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\n' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\n' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

std::string BasisTerm::token() const {
  switch (kind) {
    case TermKind::Constant: return "const";
    case TermKind::Identity: return "x";
    case TermKind::Power: return "x^" + std::to_string(power);
    case TermKind::Log: return "log";
    case TermKind::Sqrt: return "sqrt";
  }
  return "?";
}

BasisTerm BasisTerm::parse(std::string_view token) {
  token = trim(token);
  if (token == "const" || token == "1") return constant();
  if (token == "x") return identity();
  if (token == "log") return log();
  if (token == "sqrt") return sqrt();
  if (token.starts_with("x^")) {
    int k = 0;
    auto digits = token.substr(2);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
      throw ConfigError("invalid basis power term '" + std::string(token) + "'");
    }
    if (k == 1) return identity();
    if (k < 2) {
      throw ConfigError("basis power must be >= 2, got '" + std::string(token) + "'");
    }
    return pow(k);
  }
  throw ConfigError("unknown basis term '" + std::string(token) +
                    "' (expected const, x, x^K, log, sqrt)");
}

double BasisTerm::eval(double x) const {
  switch (kind) {
    case TermKind::Constant: return 1.0;
    case TermKind::Identity: return x;
    case TermKind::Power: {
      double r = 1.0;
      for (int i = 0; i < power; ++i) r *= x;
      return r;
    }
    case TermKind::Log: return std::log(x);
    case TermKind::Sqrt: return std::sqrt(x);
  }
  return 0.0;
}

BasisSpec::BasisSpec(std::vector<BasisTerm> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw ConfigError("basis must have at least one term");
  if (terms_.front().kind != TermKind::Constant) {
    throw ConfigError("first basis term must be the constant 'const'");
  }
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    for (std::size_t j = i + 1; j < terms_.size(); ++j) {
      if (terms_[i] == terms_[j]) {
        throw ConfigError("duplicate basis term '" + terms_[i].token() + "'");
      }
    }
    needs_positive_ |= terms_[i].kind == TermKind::Log;
    needs_nonnegative_ |= terms_[i].kind == TermKind::Sqrt;
  }
}

BasisSpec BasisSpec::from_tokens(const std::vector<std::string>& tokens) {
  std::vector<BasisTerm> terms;
  terms.reserve(tokens.size());
  for (const auto& t : tokens) terms.push_back(BasisTerm::parse(t));
  return BasisSpec(std::move(terms));
}

BasisSpec BasisSpec::parse(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '[') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("basis is not valid JSON: ") + e.what());
    }
    return from_json(j);
  }
  std::vector<std::string> tokens;
  std::stringstream ss{std::string(text)};
  std::string tok;
  while (std::getline(ss, tok, ',')) tokens.emplace_back(trim(tok));
  return from_tokens(tokens);
}

BasisSpec BasisSpec::from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ConfigError("basis JSON must be an array of term tokens");
  std::vector<std::string> tokens;
  for (const auto& e : j) {
    if (!e.is_string()) throw ConfigError("basis JSON entries must be strings");
    tokens.push_back(e.get<std::string>());
  }
  return from_tokens(tokens);
}

nlohmann::json BasisSpec::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& t : terms_) j.push_back(t.token());
  return j;
}

BasisSpec BasisSpec::gamma_family() {
  return BasisSpec({BasisTerm::constant(), BasisTerm::identity(), BasisTerm::log()});
}

BasisSpec BasisSpec::normal_family() {
  return BasisSpec({BasisTerm::constant(), BasisTerm::identity(), BasisTerm::pow(2)});
}

std::optional<std::size_t> BasisSpec::find(const BasisTerm& term) const {
  auto it = std::find(terms_.begin(), terms_.end(), term);
  if (it == terms_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - terms_.begin());
}

bool BasisSpec::in_domain(double x) const {
  if (!std::isfinite(x)) return false;
  if (needs_positive_ && !(x > 0.0)) return false;
  if (needs_nonnegative_ && !(x >= 0.0)) return false;
  return true;
}

std::optional<std::string> BasisSpec::domain_violation(double x) const {
  if (!std::isfinite(x)) return "value is not finite";
  if (needs_positive_ && !(x > 0.0)) return "log term requires x > 0";
  if (needs_nonnegative_ && !(x >= 0.0)) return "sqrt term requires x >= 0";
  return std::nullopt;
}

Eigen::VectorXd BasisSpec::eval(double x) const {
  if (auto why = domain_violation(x)) {
    std::ostringstream os;
    os << "observation " << x << " outside basis domain: " << *why;
    throw DataError(os.str());
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(dim()));
  eval_into(x, {out.data(), dim()});
  return out;
}

void BasisSpec::eval_into(double x, std::span<double> out) const {
  for (std::size_t i = 0; i < terms_.size(); ++i) out[i] = terms_[i].eval(x);
}

}  // namespace drmel
