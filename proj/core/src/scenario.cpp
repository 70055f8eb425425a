#include "drmel/scenario.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/normal.hpp>

#include "drmel/error.hpp"

namespace drmel {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// log density as c0 + c1 x + c2 x^2 + c3 log x.
std::array<double, 4> log_density_coefficients(const Family& f) {
  if (f.kind == FamilyKind::Gamma) {
    return {-std::lgamma(f.a) - f.a * std::log(f.b), -1.0 / f.b, 0.0, f.a - 1.0};
  }
  const double mu = f.a, v = f.b;
  return {-0.5 * std::log(2.0 * M_PI * v) - mu * mu / (2.0 * v), mu / v, -1.0 / (2.0 * v), 0.0};
}

}  // namespace

double Family::cdf(double x) const {
  if (kind == FamilyKind::Gamma) {
    if (x <= 0.0) return 0.0;
    return boost::math::cdf(boost::math::gamma_distribution<>(a, b), x);
  }
  return boost::math::cdf(boost::math::normal_distribution<>(a, std::sqrt(b)), x);
}

double Family::quantile(double p) const {
  if (kind == FamilyKind::Gamma) return boost::math::quantile(boost::math::gamma_distribution<>(a, b), p);
  return boost::math::quantile(boost::math::normal_distribution<>(a, std::sqrt(b)), p);
}

double Family::sample(RngStream& rng) const {
  if (kind == FamilyKind::Gamma) return rng.gamma(a, b);
  return a + std::sqrt(b) * rng.normal();
}

std::string Family::describe() const {
  std::ostringstream os;
  os << (kind == FamilyKind::Gamma ? "Gamma(" : "Normal(") << a << "," << b << ")";
  return os.str();
}

ScenarioSpec ScenarioSpec::gamma1() {
  ScenarioSpec s;
  s.id = ScenarioId::GammaI;
  s.name = "gamma1";
  s.groups = {Family::gamma(5, 1.5), Family::gamma(5, 1.4), Family::gamma(6, 1.3),
              Family::gamma(6, 1.2), Family::gamma(7, 1.1)};
  s.sizes = {500, 450, 550, 650, 675};
  s.basis = BasisSpec::gamma_family();
  return s;
}

ScenarioSpec ScenarioSpec::normal2() {
  ScenarioSpec s;
  s.id = ScenarioId::NormalII;
  s.name = "normal2";
  s.groups = {Family::normal(11, 1),   Family::normal(11.5, 2), Family::normal(12, 3),
              Family::normal(12.5, 4), Family::normal(13, 5),   Family::normal(13.5, 6),
              Family::normal(14, 7)};
  s.sizes = {300, 320, 340, 330, 350, 370, 400};
  s.basis = BasisSpec::normal_family();
  return s;
}

ScenarioSpec ScenarioSpec::by_name(std::string_view name) {
  if (name == "gamma1" || name == "gammaI" || name == "gamma") return gamma1();
  if (name == "normal2" || name == "normalII" || name == "normal") return normal2();
  throw ConfigError("unknown scenario '" + std::string(name) + "' (expected gamma1 or normal2)");
}

ScenarioSpec ScenarioSpec::scaled(double factor) const {
  ScenarioSpec out = *this;
  for (auto& n : out.sizes) {
    n = static_cast<std::size_t>(std::llround(static_cast<double>(n) * factor));
    if (n == 0) n = 1;
  }
  return out;
}

ParamBlock true_theta(const ScenarioSpec& spec) {
  if (spec.groups.size() < 2) throw ConfigError("scenario needs at least two groups");
  const std::array<BasisTerm, 4> terms{BasisTerm::constant(), BasisTerm::identity(), BasisTerm::pow(2),
                                       BasisTerm::log()};
  const auto base = log_density_coefficients(spec.groups[0]);
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(spec.m()),
                                                static_cast<Eigen::Index>(spec.basis.dim()));
  for (std::size_t k = 1; k < spec.groups.size(); ++k) {
    const auto coef = log_density_coefficients(spec.groups[k]);
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const double c = coef[t] - base[t];
      if (c == 0.0) continue;
      auto idx = spec.basis.find(terms[t]);
      if (!idx) {
        throw ConfigError("log density ratio of " + spec.groups[k].describe() + " to " +
                          spec.groups[0].describe() + " needs basis term '" + terms[t].token() + "'");
      }
      theta(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(*idx)) = c;
    }
  }
  return ParamBlock(std::move(theta));
}

MultiSampleData generate(const ScenarioSpec& spec, std::uint64_t seed) {
  if (spec.groups.size() != spec.sizes.size()) throw ConfigError("scenario sizes do not match groups");
  std::vector<std::vector<double>> groups(spec.groups.size());
  for (std::size_t k = 0; k < spec.groups.size(); ++k) {
    RngStream rng = RngStream::substream(seed, {k});
    groups[k].resize(spec.sizes[k]);
    for (auto& x : groups[k]) x = spec.groups[k].sample(rng);
  }
  return MultiSampleData::build(groups, spec.basis);
}

double true_dominance(const Family& a, const Family& b) {
  constexpr int kGrid = 20000;
  auto positive = [&](double p) { return a.quantile(p) > b.quantile(p); };
  auto level = [](int i) { return (i + 0.5) / kGrid; };

  // Sign of Q_a - Q_b on a midpoint grid; each sign change is refined by
  // bisection into a cut point.
  std::vector<double> cuts{0.0};
  std::vector<bool> signs{positive(level(0))};
  for (int i = 1; i < kGrid; ++i) {
    const bool s = positive(level(i));
    if (s == signs.back()) continue;
    double lo = level(i - 1), hi = level(i);
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (positive(mid) == s ? hi : lo) = mid;
    }
    cuts.push_back(0.5 * (lo + hi));
    signs.push_back(s);
  }
  cuts.push_back(1.0);

  double measure = 0.0;
  for (std::size_t j = 0; j < signs.size(); ++j) {
    if (signs[j]) measure += cuts[j + 1] - cuts[j];
  }
  return measure;
}

double true_value(const ScenarioSpec& spec, const FunctionalSpec& functional) {
  functional.validate(spec.m(), spec.basis.dim());
  return std::visit(overloaded{
                        [&](const ThetaComponent& t) { return true_theta(spec)(t.r, t.s - 1); },
                        [&](const CdfAt& c) { return spec.groups[c.r].cdf(c.x); },
                        [&](const QuantileAt& q) { return spec.groups[q.r].quantile(q.p); },
                        [&](const DominanceOf& g) { return true_dominance(spec.groups[g.r], spec.groups[g.s]); },
                    },
                    functional.kind());
}

}  // namespace drmel
