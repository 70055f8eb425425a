#include "drmel/step_cdf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "drmel/csv_writer.hpp"
#include "drmel/error.hpp"

namespace drmel {

StepCdf::StepCdf(std::vector<double> support, std::vector<double> jumps)
    : support_(std::move(support)), jumps_(std::move(jumps)) {
  if (support_.empty() || support_.size() != jumps_.size()) {
    throw DataError("step CDF needs matching, non-empty support and jump arrays");
  }
  cum_.resize(jumps_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < jumps_.size(); ++i) {
    if (!(jumps_[i] >= 0.0) || !std::isfinite(jumps_[i])) {
      throw DataError("step CDF jumps must be finite and nonnegative");
    }
    if (!std::isfinite(support_[i]) || (i > 0 && !(support_[i] > support_[i - 1]))) {
      throw DataError("step CDF support must be finite and strictly increasing");
    }
    acc += jumps_[i];
    cum_[i] = acc;
  }
  if (std::abs(acc - 1.0) > kMassTolerance) {
    std::ostringstream os;
    os << "step CDF total mass " << acc << " is not 1";
    throw DataError(os.str());
  }
}

StepCdf StepCdf::from_sorted_atoms(std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size()) throw DataError("atom values and weights differ in length");
  std::vector<double> support, jumps;
  support.reserve(values.size());
  jumps.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!support.empty() && values[i] == support.back()) {
      jumps.back() += weights[i];
    } else {
      support.push_back(values[i]);
      jumps.push_back(weights[i]);
    }
  }
  return StepCdf(std::move(support), std::move(jumps));
}

StepCdf StepCdf::from_atoms(std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size()) throw DataError("atom values and weights differ in length");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> v(values.size()), w(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    v[i] = values[order[i]];
    w[i] = weights[order[i]];
  }
  return from_sorted_atoms(v, w);
}

double StepCdf::operator()(double x) const {
  auto it = std::upper_bound(support_.begin(), support_.end(), x);
  if (it == support_.begin()) return 0.0;
  return cum_[static_cast<std::size_t>(it - support_.begin()) - 1];
}

double StepCdf::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    std::ostringstream os;
    os << "quantile level " << p << " is outside (0,1)";
    throw ConfigError(os.str());
  }
  const double level = p - kLevelTolerance;
  auto it = std::lower_bound(cum_.begin(), cum_.end(), level);
  if (it == cum_.end()) return support_.back();
  return support_[static_cast<std::size_t>(it - cum_.begin())];
}

std::size_t StepCdf::atom_at_level(double p) const {
  auto it = std::lower_bound(cum_.begin(), cum_.end(), p);
  if (it == cum_.end()) return support_.size() - 1;
  return static_cast<std::size_t>(it - cum_.begin());
}

void StepCdf::write_csv(std::ostream& os) const {
  os << "x,F\n";
  for (std::size_t i = 0; i < support_.size(); ++i) {
    os << format_double(support_[i]) << ',' << format_double(cum_[i]) << '\n';
  }
}

double quantile(const StepCdf& cdf, double p) { return cdf.quantile(p); }

double dominance_index(const StepCdf& a, const StepCdf& b) {
  // Q_a and Q_b are constant on each open interval between consecutive
  // breakpoints drawn from both cum arrays.
  std::vector<double> breaks;
  breaks.reserve(a.size() + b.size() + 2);
  breaks.push_back(0.0);
  for (double c : a.cum()) {
    if (c > 0.0 && c < 1.0) breaks.push_back(c);
  }
  for (double c : b.cum()) {
    if (c > 0.0 && c < 1.0) breaks.push_back(c);
  }
  breaks.push_back(1.0);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  double measure = 0.0;
  std::size_t ia = 0, ib = 0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = breaks[i], hi = breaks[i + 1];
    const double mid = 0.5 * (lo + hi);
    // Both cursors only move forward as mid increases.
    while (ia + 1 < a.size() && a.cum()[ia] < mid) ++ia;
    while (ib + 1 < b.size() && b.cum()[ib] < mid) ++ib;
    if (a.support()[ia] > b.support()[ib]) measure += hi - lo;
  }
  return measure;
}

}  // namespace drmel
