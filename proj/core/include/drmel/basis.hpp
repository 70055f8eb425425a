#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

namespace drmel {

enum class TermKind { Constant, Identity, Power, Log, Sqrt };

struct BasisTerm {
  TermKind kind = TermKind::Constant;
  int power = 1;  // only meaningful for TermKind::Power, always >= 2 there

  static BasisTerm constant() { return {TermKind::Constant, 1}; }
  static BasisTerm identity() { return {TermKind::Identity, 1}; }
  static BasisTerm pow(int k) { return {TermKind::Power, k}; }
  static BasisTerm log() { return {TermKind::Log, 1}; }
  static BasisTerm sqrt() { return {TermKind::Sqrt, 1}; }

  // Token form used in JSON: "const", "x", "x^K" (K >= 2), "log", "sqrt".
  std::string token() const;
  static BasisTerm parse(std::string_view token);

  double eval(double x) const;

  friend bool operator==(const BasisTerm&, const BasisTerm&) = default;
};

// The vector basis q(x) of the density ratio exponent. The first term is
// always the constant 1; terms are unique. Immutable once built.
class BasisSpec {
 public:
  explicit BasisSpec(std::vector<BasisTerm> terms);

  static BasisSpec from_tokens(const std::vector<std::string>& tokens);
  // Accepts a JSON array of tokens, e.g. ["const","x","log"], or a
  // comma-separated token list "const,x,log".
  static BasisSpec parse(std::string_view text);
  static BasisSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  // (1, x, log x)
  static BasisSpec gamma_family();
  // (1, x, x^2)
  static BasisSpec normal_family();

  std::size_t dim() const { return terms_.size(); }
  const std::vector<BasisTerm>& terms() const { return terms_; }

  // Index of a term kind in this basis, if present.
  std::optional<std::size_t> find(const BasisTerm& term) const;

  bool in_domain(double x) const;
  // Human-readable reason when x is outside the domain of some term.
  std::optional<std::string> domain_violation(double x) const;

  // Throws DataError if x is outside the domain.
  Eigen::VectorXd eval(double x) const;
  // Unchecked; out.size() must equal dim().
  void eval_into(double x, std::span<double> out) const;

  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;

 private:
  std::vector<BasisTerm> terms_;
  bool needs_positive_ = false;
  bool needs_nonnegative_ = false;
};

}  // namespace drmel
