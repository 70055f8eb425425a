#include "drmel/functional.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "drmel/csv_writer.hpp"
#include "drmel/error.hpp"
#include "drmel/estimators.hpp"

namespace drmel {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::size_t parse_index(std::string_view s, std::string_view whole) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError("bad index '" + std::string(s) + "' in functional '" + std::string(whole) + "'");
  }
  return v;
}

double parse_real(std::string_view s, std::string_view whole) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError("bad number '" + std::string(s) + "' in functional '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

FunctionalSpec FunctionalSpec::parse(std::string_view text) {
  auto parts = split(text, ':');
  if (parts.size() != 3) {
    throw ConfigError("functional '" + std::string(text) +
                      "' must look like theta:R:S, cdf:R:X, quantile:R:P or dominance:R:S");
  }
  const auto kind = parts[0];
  if (kind == "theta") return theta(parse_index(parts[1], text), parse_index(parts[2], text));
  if (kind == "cdf") return cdf(parse_index(parts[1], text), parse_real(parts[2], text));
  if (kind == "quantile") return quantile(parse_index(parts[1], text), parse_real(parts[2], text));
  if (kind == "dominance") return dominance(parse_index(parts[1], text), parse_index(parts[2], text));
  throw ConfigError("unknown functional kind '" + std::string(kind) + "'");
}

std::string FunctionalSpec::to_string() const {
  return std::visit(
      overloaded{
          [](const ThetaComponent& t) { return "theta:" + std::to_string(t.r) + ":" + std::to_string(t.s); },
          [](const CdfAt& c) { return "cdf:" + std::to_string(c.r) + ":" + format_double(c.x); },
          [](const QuantileAt& q) { return "quantile:" + std::to_string(q.r) + ":" + format_double(q.p); },
          [](const DominanceOf& g) { return "dominance:" + std::to_string(g.r) + ":" + std::to_string(g.s); },
      },
      kind_);
}

void FunctionalSpec::validate(std::size_t m, std::size_t d) const {
  auto fail = [&](const std::string& why) { throw ConfigError("functional " + to_string() + ": " + why); };
  std::visit(overloaded{
                 [&](const ThetaComponent& t) {
                   if (t.r < 1 || t.r > m) fail("group must be in 1.." + std::to_string(m));
                   if (t.s < 1 || t.s > d) fail("coordinate must be in 1.." + std::to_string(d));
                 },
                 [&](const CdfAt& c) {
                   if (c.r > m) fail("group must be in 0.." + std::to_string(m));
                   if (!std::isfinite(c.x)) fail("x must be finite");
                 },
                 [&](const QuantileAt& q) {
                   if (q.r > m) fail("group must be in 0.." + std::to_string(m));
                   if (!(q.p > 0.0 && q.p < 1.0)) fail("p must be in (0,1)");
                 },
                 [&](const DominanceOf& g) {
                   if (g.r > m || g.s > m) fail("groups must be in 0.." + std::to_string(m));
                 },
             },
             kind_);
}

FunctionalEvaluator::FunctionalEvaluator(const DrmFit& fit)
    : fit_(fit), cdfs_(fit.data_ref().num_groups()) {}

const StepCdf& FunctionalEvaluator::cdf(std::size_t r) {
  if (r >= cdfs_.size()) throw ConfigError("group index out of range");
  if (!cdfs_[r]) {
    // The first request computes every group's CDF in one pass.
    auto all = cdf_estimates(fit_);
    for (std::size_t k = 0; k < all.size(); ++k) {
      if (!cdfs_[k]) cdfs_[k].emplace(std::move(all[k]));
    }
  }
  return *cdfs_[r];
}

double FunctionalEvaluator::operator()(const FunctionalSpec& spec) {
  return std::visit(overloaded{
                        [&](const ThetaComponent& t) { return fit_.theta_hat(t.r, t.s - 1); },
                        [&](const CdfAt& c) { return cdf(c.r)(c.x); },
                        [&](const QuantileAt& q) { return cdf(q.r).quantile(q.p); },
                        [&](const DominanceOf& g) { return dominance_index(cdf(g.r), cdf(g.s)); },
                    },
                    spec.kind());
}

}  // namespace drmel
