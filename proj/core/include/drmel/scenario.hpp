#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "drmel/basis.hpp"
#include "drmel/data.hpp"
#include "drmel/functional.hpp"
#include "drmel/rng.hpp"

namespace drmel {

enum class FamilyKind { Gamma, Normal };

// Gamma(shape, scale) or Normal(mean, variance).
struct Family {
  FamilyKind kind = FamilyKind::Normal;
  double a = 0.0;
  double b = 1.0;

  static Family gamma(double shape, double scale) { return {FamilyKind::Gamma, shape, scale}; }
  static Family normal(double mean, double variance) { return {FamilyKind::Normal, mean, variance}; }

  double cdf(double x) const;
  double quantile(double p) const;
  double sample(RngStream& rng) const;
  std::string describe() const;
};

enum class ScenarioId { GammaI, NormalII, Custom };

struct ScenarioSpec {
  ScenarioId id = ScenarioId::Custom;
  std::string name;
  std::vector<Family> groups;
  std::vector<std::size_t> sizes;
  BasisSpec basis{{BasisTerm::constant()}};

  // Five Gamma groups, basis (1, x, log x).
  static ScenarioSpec gamma1();
  // Seven Normal groups, basis (1, x, x^2).
  static ScenarioSpec normal2();
  // "gamma1" or "normal2".
  static ScenarioSpec by_name(std::string_view name);

  std::size_t m() const { return groups.size() - 1; }
  // Same families with every group size multiplied by factor (rounded).
  ScenarioSpec scaled(double factor) const;
};

// Analytic DRM coefficients of each group against group 0. Throws ConfigError
// when a log density ratio needs a term the basis lacks.
ParamBlock true_theta(const ScenarioSpec& spec);

// Group k draws from RngStream::substream(seed, {k}).
MultiSampleData generate(const ScenarioSpec& spec, std::uint64_t seed);

// gamma(F_a, F_b) for continuous families, via sign changes of Q_a - Q_b.
double true_dominance(const Family& a, const Family& b);

// Population value of a functional under the scenario.
double true_value(const ScenarioSpec& spec, const FunctionalSpec& functional);

}  // namespace drmel
