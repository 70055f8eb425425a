#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "drmel/optimizer.hpp"
#include "drmel/step_cdf.hpp"

namespace drmel {

// theta_{rs}: group r in 1..m, basis coordinate s in 1..d (1-based, so
// s = 1 is the constant term).
struct ThetaComponent {
  std::size_t r = 1;
  std::size_t s = 1;
};
// F_r(x), r in 0..m.
struct CdfAt {
  std::size_t r = 0;
  double x = 0.0;
};
// Q_r(p), r in 0..m, p in (0,1).
struct QuantileAt {
  std::size_t r = 0;
  double p = 0.5;
};
// gamma(F_r, F_s) = measure{p : Q_r(p) > Q_s(p)}.
struct DominanceOf {
  std::size_t r = 0;
  std::size_t s = 1;
};

// A scalar functional of (F_0, ..., F_m) and theta. Text form:
//   theta:R:S   cdf:R:X   quantile:R:P   dominance:R:S
class FunctionalSpec {
 public:
  using Kind = std::variant<ThetaComponent, CdfAt, QuantileAt, DominanceOf>;

  FunctionalSpec(Kind kind) : kind_(kind) {}  // NOLINT(google-explicit-constructor)

  static FunctionalSpec theta(std::size_t r, std::size_t s) { return Kind{ThetaComponent{r, s}}; }
  static FunctionalSpec cdf(std::size_t r, double x) { return Kind{CdfAt{r, x}}; }
  static FunctionalSpec quantile(std::size_t r, double p) { return Kind{QuantileAt{r, p}}; }
  static FunctionalSpec dominance(std::size_t r, std::size_t s) { return Kind{DominanceOf{r, s}}; }

  static FunctionalSpec parse(std::string_view text);
  std::string to_string() const;

  const Kind& kind() const { return kind_; }

  // Throws ConfigError when an index is out of range for m groups beyond
  // the baseline and d basis terms.
  void validate(std::size_t m, std::size_t d) const;

 private:
  Kind kind_;
};

// Evaluates functionals on one fit, computing each F_r at most once.
class FunctionalEvaluator {
 public:
  explicit FunctionalEvaluator(const DrmFit& fit);

  double operator()(const FunctionalSpec& spec);
  const StepCdf& cdf(std::size_t r);

 private:
  const DrmFit& fit_;
  std::vector<std::optional<StepCdf>> cdfs_;
};

}  // namespace drmel
