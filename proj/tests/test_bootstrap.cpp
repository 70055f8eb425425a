#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "drmel/bootstrap.hpp"
#include "drmel/error.hpp"
#include "drmel/rng.hpp"
#include "drmel/scenario.hpp"

using namespace drmel;

namespace {

std::shared_ptr<const MultiSampleData> share(MultiSampleData d) {
  return std::make_shared<const MultiSampleData>(std::move(d));
}

BootstrapSummary summary_of(double xi_hat, std::vector<double> reps) {
  BootstrapSummary s;
  s.xi_hat = xi_hat;
  s.B_requested = reps.size();
  s.replicates = std::move(reps);
  return s;
}

}  // namespace

TEST(Resample, SingletonGroupIsFixed) {
  const auto d = MultiSampleData::build({{2.5}, {1.0, 2.0, 3.0}}, BasisSpec::parse("const,x"));
  RngStream rng(1);
  for (int i = 0; i < 50; ++i) {
    const auto r = resample(d, rng);
    ASSERT_EQ(r.group_size(0), 1u);
    EXPECT_EQ(r.values()[0], 2.5);
  }
}

TEST(Resample, SeededStreamIsReproducible) {
  const auto d = generate(ScenarioSpec::gamma1(), 3);
  RngStream a(77), b(77);
  const auto ra = resample(d, a);
  const auto rb = resample(d, b);
  EXPECT_EQ(ra.values(), rb.values());
  EXPECT_TRUE(ra.Q() == rb.Q());
}

TEST(Resample, GroupSizesAndRowsPreserved) {
  const auto d = generate(ScenarioSpec::normal2(), 4);
  RngStream rng(5);
  for (int i = 0; i < 20; ++i) {
    const auto r = resample(d, rng);
    ASSERT_EQ(r.num_groups(), d.num_groups());
    for (std::size_t k = 0; k < d.num_groups(); ++k) {
      EXPECT_EQ(r.group_size(k), d.group_size(k));
      EXPECT_EQ(r.rho()[k], d.rho()[k]);
    }
    // Each gathered basis row matches a fresh evaluation of its value.
    for (std::size_t j = 0; j < r.n(); ++j) {
      const auto q = d.basis().eval(r.values()[j]);
      for (Eigen::Index c = 0; c < q.size(); ++c) EXPECT_EQ(r.Q()(static_cast<Eigen::Index>(j), c), q(c));
    }
  }
}

TEST(Resample, InclusionFrequencyMatchesBinomialOracle) {
  // Distinct values let us identify the first observation of each group.
  std::vector<double> g0(12), g1(7);
  std::iota(g0.begin(), g0.end(), 1.0);
  std::iota(g1.begin(), g1.end(), 100.0);
  const auto d = MultiSampleData::build({g0, g1}, BasisSpec::parse("const,x"));
  const int reps = 10000;
  std::array<int, 2> hits{0, 0};
  RngStream rng(2718);
  for (int i = 0; i < reps; ++i) {
    const auto r = resample(d, rng);
    for (std::size_t k = 0; k < 2; ++k) {
      const double target = k == 0 ? g0[0] : g1[0];
      const auto off = r.group_offset(k);
      bool seen = false;
      for (std::size_t j = 0; j < r.group_size(k); ++j) seen |= r.values()[off + j] == target;
      hits[k] += seen ? 1 : 0;
    }
  }
  for (std::size_t k = 0; k < 2; ++k) {
    const double nk = static_cast<double>(d.group_size(k));
    const double p = 1.0 - std::pow(1.0 - 1.0 / nk, nk);
    const double se = std::sqrt(p * (1.0 - p) / reps);
    EXPECT_NEAR(hits[k] / static_cast<double>(reps), p, 3.0 * se) << "group " << k;
  }
}

TEST(BootstrapRun, DeterministicAndWorkerIndependent) {
  const auto data = share(generate(ScenarioSpec::gamma1(), 8));
  const auto fit = fit_mele(data);
  ASSERT_TRUE(fit.converged);
  const std::vector<FunctionalSpec> fs{FunctionalSpec::theta(2, 3), FunctionalSpec::quantile(0, 0.5),
                                       FunctionalSpec::dominance(1, 3)};
  BootstrapOptions opts;
  opts.B = 40;
  opts.seed = 11;
  opts.workers = 1;
  const auto a = bootstrap_run(fit, fs, opts);
  const auto b = bootstrap_run(fit, fs, opts);
  opts.workers = 4;
  const auto c = bootstrap_run(fit, fs, opts);
  ASSERT_EQ(a.summaries.size(), fs.size());
  for (std::size_t f = 0; f < fs.size(); ++f) {
    EXPECT_EQ(a.summaries[f].replicates, b.summaries[f].replicates);
    EXPECT_EQ(a.summaries[f].replicates, c.summaries[f].replicates);
    EXPECT_EQ(a.summaries[f].replicates.size(), a.summaries[f].B_requested - a.summaries[f].B_failed);
    ASSERT_EQ(a.summaries[f].ci.size(), 1u);
    EXPECT_LE(a.summaries[f].ci[0].lower, a.summaries[f].ci[0].upper);
  }
  EXPECT_EQ(a.replicate_ids, c.replicate_ids);

  std::ostringstream sa, sc;
  write_replicates_csv(sa, a);
  write_replicates_csv(sc, c);
  EXPECT_EQ(sa.str(), sc.str());
  EXPECT_EQ(sa.str().substr(0, sa.str().find('\n')), "replicate,theta:2:3,quantile:0:0.5,dominance:1:3");

  opts.seed = 12;
  const auto other = bootstrap_run(fit, fs, opts);
  EXPECT_NE(other.summaries[0].replicates, a.summaries[0].replicates);
}

TEST(BootstrapRun, IdenticalGroupsCentredAtZero) {
  RngStream rng(31);
  std::vector<double> pts(30);
  for (auto& x : pts) x = rng.normal();
  const auto data = share(MultiSampleData::build({pts, pts}, BasisSpec::parse("const,x")));
  const auto fit = fit_mele(data);
  ASSERT_TRUE(fit.converged);
  BootstrapOptions opts;
  opts.B = 2000;
  opts.seed = 4;
  opts.workers = 0;
  const auto res = bootstrap_run(fit, {FunctionalSpec::theta(1, 1)}, opts);
  const auto& s = res.summaries[0];
  ASSERT_GE(s.replicates.size(), 1900u);
  double mean = 0.0;
  for (double v : s.replicates) mean += v - s.xi_hat;
  mean /= static_cast<double>(s.replicates.size());
  double var = 0.0;
  for (double v : s.replicates) var += std::pow(v - s.xi_hat - mean, 2);
  var /= static_cast<double>(s.replicates.size() - 1);
  EXPECT_LT(std::abs(mean), 3.0 * std::sqrt(var / static_cast<double>(s.replicates.size())));
}

TEST(BootstrapRun, DisjointSupportsDominateInEveryReplicate) {
  std::vector<double> hi, lo;
  for (int i = 0; i < 15; ++i) {
    hi.push_back(20.0 + 0.7 * i);
    lo.push_back(1.0 + 0.5 * i);
  }
  const auto data = share(MultiSampleData::build({hi, lo}, BasisSpec::parse("const,x")));

  // Perfect separation has no finite maximizer. Newton stops once the
  // gradient is below grad_tol * n, which leaves wrong-side masses of that
  // order, so the gap to 1 is bounded by the tolerance and shrinks with it.
  auto worst_gap = [&](double grad_tol) {
    FitOptions fo;
    fo.grad_tol = grad_tol;
    const auto fit = fit_mele(data, fo);
    EXPECT_TRUE(fit.converged);
    BootstrapOptions opts;
    opts.B = 100;
    opts.seed = 9;
    opts.fit = fo;
    const auto res = bootstrap_run(fit, {FunctionalSpec::dominance(0, 1)}, opts);
    const auto& s = res.summaries[0];
    EXPECT_TRUE(res.failures.empty());
    EXPECT_EQ(s.replicates.size(), 100u);
    double gap = 1.0 - s.xi_hat;
    for (double v : s.replicates) {
      EXPECT_LE(v, 1.0);
      gap = std::max(gap, 1.0 - v);
    }
    return gap;
  };
  const double loose = worst_gap(1e-8);
  const double tight = worst_gap(1e-11);
  EXPECT_LE(loose, 1e-8 * static_cast<double>(data->n()));
  EXPECT_LE(tight, 1e-11 * static_cast<double>(data->n()));
  EXPECT_LT(tight, loose);
}

TEST(BootstrapRun, RejectsBadInputs) {
  const auto data = share(generate(ScenarioSpec::gamma1(), 2));
  const auto fit = fit_mele(data);
  BootstrapOptions opts;
  opts.B = 0;
  EXPECT_THROW(bootstrap_run(fit, {FunctionalSpec::theta(1, 1)}, opts), ConfigError);
  opts.B = 5;
  EXPECT_THROW(bootstrap_run(fit, {FunctionalSpec::theta(5, 1)}, opts), ConfigError);
  opts.alphas = {1.0};
  EXPECT_THROW(bootstrap_run(fit, {FunctionalSpec::theta(1, 1)}, opts), ConfigError);

  FitOptions capped;
  capped.max_iter = 1;
  const auto rough = fit_mele(data, capped);
  ASSERT_FALSE(rough.converged);
  EXPECT_THROW(bootstrap_run(rough, {FunctionalSpec::theta(1, 1)}, BootstrapOptions{}), ConfigError);
}

TEST(PercentileCi, AllReplicatesEqualGivesPoint) {
  const auto ci = percentile_ci(summary_of(3.25, std::vector<double>(50, 3.25)), 0.05);
  EXPECT_EQ(ci.lower, 3.25);
  EXPECT_EQ(ci.upper, 3.25);
}

TEST(PercentileCi, HandComputedOrderStatistics) {
  std::vector<double> reps;
  for (int i = 0; i < 25; ++i) reps.push_back(10.0 - 2.0);
  for (int i = 0; i < 950; ++i) reps.push_back(10.0);
  for (int i = 0; i < 25; ++i) reps.push_back(10.0 + 3.0);
  std::mt19937_64 gen(1);
  std::shuffle(reps.begin(), reps.end(), gen);
  const auto ci = percentile_ci(summary_of(10.0, reps), 0.05);
  EXPECT_EQ(ci.lower, 7.0);
  EXPECT_EQ(ci.upper, 12.0);
  EXPECT_EQ(ci.alpha, 0.05);
}

TEST(PercentileCi, LevelsNest) {
  std::mt19937_64 gen(6);
  std::normal_distribution<double> z(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> reps(20 + trial * 7);
    for (auto& v : reps) v = 1.0 + z(gen);
    const auto s = summary_of(z(gen), reps);
    const auto wide = percentile_ci(s, 0.01);
    const auto narrow = percentile_ci(s, 0.05);
    EXPECT_LE(wide.lower, narrow.lower);
    EXPECT_GE(wide.upper, narrow.upper);
    EXPECT_LE(narrow.lower, narrow.upper);
  }
}

TEST(PercentileCi, ShiftEquivariant) {
  // Dyadic values keep every subtraction exact.
  std::mt19937_64 gen(8);
  std::uniform_int_distribution<int> u(-64, 64);
  std::vector<double> reps(200);
  for (auto& v : reps) v = u(gen) / 8.0;
  const auto base = percentile_ci(summary_of(0.5, reps), 0.1);
  const double c = 4.0;
  for (auto& v : reps) v += c;
  const auto shifted = percentile_ci(summary_of(0.5 + c, reps), 0.1);
  EXPECT_EQ(shifted.lower, base.lower + c);
  EXPECT_EQ(shifted.upper, base.upper + c);
}

TEST(PercentileCi, Errors) {
  EXPECT_THROW(percentile_ci(summary_of(1.0, {1.0}), 0.05), BootstrapError);
  EXPECT_THROW(percentile_ci(summary_of(1.0, {}), 0.05), BootstrapError);
  EXPECT_THROW(percentile_ci(summary_of(1.0, {1.0, 2.0}), 0.0), ConfigError);
  EXPECT_THROW(percentile_ci(summary_of(1.0, {1.0, 2.0}), 1.0), ConfigError);
}

TEST(FunctionalSpec, ParseAndPrint) {
  for (const char* text : {"theta:1:2", "cdf:0:1.5", "quantile:3:0.25", "dominance:0:1"}) {
    EXPECT_EQ(FunctionalSpec::parse(text).to_string(), text);
  }
  const auto q = FunctionalSpec::parse("quantile:2:0.9");
  ASSERT_TRUE(std::holds_alternative<QuantileAt>(q.kind()));
  EXPECT_EQ(std::get<QuantileAt>(q.kind()).r, 2u);
  EXPECT_EQ(std::get<QuantileAt>(q.kind()).p, 0.9);
}

TEST(FunctionalSpec, RejectsMalformedText) {
  for (const char* text : {"theta:1", "theta:a:1", "cdf:0:x", "median:0:1", "quantile:1:0.5:2", "", "cdf:0:inf"}) {
    EXPECT_THROW(FunctionalSpec::parse(text), ConfigError) << text;
  }
}

TEST(FunctionalSpec, ValidatesRanges) {
  EXPECT_NO_THROW(FunctionalSpec::theta(2, 3).validate(2, 3));
  EXPECT_THROW(FunctionalSpec::theta(0, 1).validate(2, 3), ConfigError);
  EXPECT_THROW(FunctionalSpec::theta(1, 4).validate(2, 3), ConfigError);
  EXPECT_THROW(FunctionalSpec::cdf(3, 0.0).validate(2, 3), ConfigError);
  EXPECT_THROW(FunctionalSpec::quantile(0, 1.0).validate(2, 3), ConfigError);
  EXPECT_THROW(FunctionalSpec::quantile(0, 0.0).validate(2, 3), ConfigError);
  EXPECT_THROW(FunctionalSpec::dominance(0, 3).validate(2, 3), ConfigError);
  EXPECT_NO_THROW(FunctionalSpec::dominance(2, 0).validate(2, 3));
}
