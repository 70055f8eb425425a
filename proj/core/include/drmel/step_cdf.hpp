#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace drmel {

// Right-continuous step CDF on a strictly increasing support. Total mass
// must be 1 within kMassTolerance.
class StepCdf {
 public:
  static constexpr double kMassTolerance = 1e-6;
  // Slack applied when comparing cum values against a probability level.
  static constexpr double kLevelTolerance = 1e-12;

  StepCdf(std::vector<double> support, std::vector<double> jumps);

  // Sorts atoms and merges equal values.
  static StepCdf from_atoms(std::span<const double> values, std::span<const double> weights);
  // Atoms already sorted by value (ties allowed, merged).
  static StepCdf from_sorted_atoms(std::span<const double> values, std::span<const double> weights);

  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& jumps() const { return jumps_; }
  const std::vector<double>& cum() const { return cum_; }
  std::size_t size() const { return support_.size(); }

  // F(x) = sum of jumps at support points <= x.
  double operator()(double x) const;

  // Q(p) = smallest support value v with F(v) >= p - kLevelTolerance.
  double quantile(double p) const;

  // Index of the atom that Q(p) lands on, without the level slack; levels
  // past the final cum clamp to the last atom.
  std::size_t atom_at_level(double p) const;

  // Two-column CSV "x,F" with a header row.
  void write_csv(std::ostream& os) const;

 private:
  std::vector<double> support_;
  std::vector<double> jumps_;
  std::vector<double> cum_;
};

double quantile(const StepCdf& cdf, double p);

// Lebesgue measure of { p in (0,1) : Q_a(p) > Q_b(p) }, computed exactly by
// sweeping the merged cum breakpoints.
double dominance_index(const StepCdf& a, const StepCdf& b);

}  // namespace drmel
