#include <stdexcept>
#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "gaugemc/analysis.hpp"

using namespace gaugemc;

TEST_CASE("skewness: hand-computed values and degenerate cases") {
  const std::vector<double> symmetric{-1, 1, -1, 1, -1, 1};
  CHECK(*skewness(symmetric) == doctest::Approx(0.0).epsilon(1e-15));

  // {1,1,1,-1}: m2 = 0.75, m3 = -0.75, skew = -1.1547...
  const std::vector<double> skewed{1, 1, 1, -1};
  CHECK(*skewness(skewed) == doctest::Approx(-0.75 / std::pow(0.75, 1.5)));
  CHECK(*skewness(skewed) == doctest::Approx(-1.1547005383792515));

  CHECK(!skewness(std::vector<double>{2, 2, 2, 2}).has_value());
  CHECK_THROWS_AS(skewness(std::vector<double>{1, 2}), std::invalid_argument);
}

TEST_CASE("quadratic peak fit recovers a sampled parabola vertex exactly") {
  std::vector<double> T, c;
  for (int i = 0; i < 11; ++i) {
    T.push_back(0.8 + 0.1 * i);
    c.push_back(1.0 - (T.back() - 1.3) * (T.back() - 1.3));
  }
  const TcEstimate est = fit_peak(T, c);
  REQUIRE(!est.inconclusive);
  CHECK(est.tc == doctest::Approx(1.3).epsilon(1e-12));
}

TEST_CASE("peak at the grid boundary is inconclusive") {
  std::vector<double> T, rising;
  for (int i = 0; i < 9; ++i) {
    T.push_back(1.0 + 0.1 * i);
    rising.push_back(double(i));
  }
  CHECK(fit_peak(T, rising).inconclusive);
  std::vector<double> falling(rising.rbegin(), rising.rend());
  CHECK(fit_peak(T, falling).inconclusive);
  CHECK(fit_peak(std::vector<double>{1, 2, 3},
                 std::vector<double>{0, 1, 0}).inconclusive);
}

TEST_CASE("steepest skewness change locates a step feature") {
  std::vector<double> T, skew;
  std::vector<std::uint8_t> defined;
  for (int i = 0; i < 21; ++i) {
    const double t = 1.0 + 0.05 * i;
    T.push_back(t);
    skew.push_back(-2.0 / (1.0 + std::exp((t - 1.5) / 0.02)));  // step near 1.5
    defined.push_back(1);
  }
  const TcEstimate est = steepest_skew_change(T, skew, defined);
  REQUIRE(!est.inconclusive);
  CHECK(std::abs(est.tc - 1.5) <= 0.05);

  // convex ramps put the steepest change at a grid boundary: inconclusive
  std::vector<double> rising(T.size()), falling(T.size());
  for (std::size_t i = 0; i < T.size(); ++i) {
    rising[i] = std::exp(3.0 * T[i]);
    falling[i] = std::exp(-3.0 * T[i]);
  }
  CHECK(steepest_skew_change(T, rising, defined).inconclusive);
  CHECK(steepest_skew_change(T, falling, defined).inconclusive);
}

TEST_CASE("bootstrap error of the mean shrinks like 1/sqrt(n)") {
  std::mt19937_64 gen(12345);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> ns{64, 256, 1024, 4096};
  std::vector<double> errs;
  for (double n : ns) {
    std::vector<double> values;
    for (int i = 0; i < int(n); ++i) values.push_back(noise(gen));
    errs.push_back(bootstrap_error_of_mean(values, 500, 7));
  }
  // regression of log(err) on log(n): slope in [-0.6, -0.4]
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double x = std::log(ns[i]), y = std::log(errs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = double(ns.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope < -0.4);
  CHECK(slope > -0.6);
}

namespace {

MeasurementSet synthetic_set(std::uint64_t index, double shift) {
  MeasurementSet ms;
  ms.family = Family::Toric;
  ms.L = ms.M = 2;
  ms.p = ms.q = 0.1;
  ms.master_seed = 9;
  ms.sample_index = index;
  ms.equilibrated = true;
  ms.eq_bin = 8;
  ms.total_sweeps = 511;
  ms.swap_acceptance = {0.5};
  rng::Xoshiro256pp gen(rng::derive_key({index, 0xFACE}));
  for (int i = 0; i < 8; ++i) {
    TemperatureMeasurement t;
    t.T = 1.0 + 0.1 * i;
    t.n_sweeps = 256;
    t.mean_energy = -20.0 + shift + i + 0.01 * gen.u01();
    t.mean_energy_sq = t.mean_energy * t.mean_energy + 4.0 + 0.01 * gen.u01();
    t.mean_wilson = 0.5;
    for (int b = 0; b < 4; ++b) {
      t.block_energy.push_back(t.mean_energy + 0.05 * (b - 1.5));
      t.block_energy_sq.push_back(t.mean_energy_sq + 0.1 * (b - 1.5));
      t.block_wilson.push_back(0.5);
    }
    t.wilson_samples = {0.25, 0.5, 0.5, 0.75, 0.25, 0.5};
    ms.per_t.push_back(std::move(t));
  }
  return ms;
}

}  // namespace

TEST_CASE("collect_point: flagged samples excluded and counted; order of the "
          "input list is irrelevant") {
  std::vector<MeasurementSet> sets;
  for (int i = 0; i < 5; ++i) sets.push_back(synthetic_set(i, 0.1 * i));
  sets[3].equilibrated = false;

  const PointData a = collect_point(sets, 0.9);
  CHECK(a.n_total == 5);
  CHECK(a.n_flagged == 1);
  CHECK(a.n_samples() == 4);

  std::reverse(sets.begin(), sets.end());
  const PointData b = collect_point(sets, 0.9);
  CHECK(a.sample_indices == b.sample_indices);

  const ObservableTable ta = aggregate_point(a, 200, 3);
  const ObservableTable tb = aggregate_point(b, 200, 3);
  for (std::size_t i = 0; i < ta.T.size(); ++i) {
    CHECK(ta.energy_per_term[i].value == tb.energy_per_term[i].value);
    CHECK(ta.energy_per_term[i].error == tb.energy_per_term[i].error);
    CHECK(ta.specific_heat[i].value == tb.specific_heat[i].value);
    CHECK(ta.wilson_skew[i].value == tb.wilson_skew[i].value);
  }
  CHECK(observables_csv(ta) == observables_csv(tb));
}

TEST_CASE("ordered_at_nishimori verdicts") {
  const double t_n = 0.575;
  auto conclusive = [](double tc, double err) {
    TcEstimate e;
    e.tc = tc;
    e.error = err;
    e.inconclusive = false;
    return e;
  };
  SUBCASE("clear gap above: ordered") {
    CHECK(ordered_at_nishimori({{6, 6, conclusive(0.70, 0.02)}}, t_n) ==
          Verdict::Ordered);
  }
  SUBCASE("within 2 sigma: marginal") {
    CHECK(ordered_at_nishimori({{6, 6, conclusive(0.57, 0.02)}}, t_n) ==
          Verdict::Marginal);
  }
  SUBCASE("clear gap below: disordered") {
    CHECK(ordered_at_nishimori({{6, 6, conclusive(0.50, 0.02)}}, t_n) ==
          Verdict::Disordered);
  }
  SUBCASE("inconclusive largest size: marginal") {
    CHECK(ordered_at_nishimori({{6, 6, conclusive(0.70, 0.02)}, {9, 8, {}}},
                               t_n) == Verdict::Marginal);
  }
  SUBCASE("gap must not shrink with size") {
    CHECK(ordered_at_nishimori({{6, 6, conclusive(0.80, 0.01)},
                                {9, 8, conclusive(0.65, 0.01)}},
                               t_n) == Verdict::Marginal);
    CHECK(ordered_at_nishimori({{6, 6, conclusive(0.70, 0.01)},
                                {9, 8, conclusive(0.71, 0.01)}},
                               t_n) == Verdict::Ordered);
  }
}

TEST_CASE("threshold_scan interpolates the sign change of Tc - T_N") {
  auto point = [](double p, double tc, double err) {
    ThresholdPoint pt;
    pt.p = p;
    pt.q = p;
    pt.t_n = 0.575;
    pt.tc.tc = tc;
    pt.tc.error = err;
    pt.tc.inconclusive = false;
    return pt;
  };
  // Tc(p) = 0.7 - 10 (p - 0.04): crossing of 0.575 at p* = 0.0525
  std::vector<ThresholdPoint> pts;
  for (double p : {0.04, 0.05, 0.06})
    pts.push_back(point(p, 0.7 - 10 * (p - 0.04), 0.0));

  const ThresholdEstimate est = threshold_scan(1.0, pts, 100, 5);
  REQUIRE(est.bracketed);
  CHECK(est.p_star == doctest::Approx(0.0525).epsilon(1e-12));

  // invariance under reordering of the grid
  std::vector<ThresholdPoint> shuffled{pts[2], pts[0], pts[1]};
  const ThresholdEstimate est2 = threshold_scan(1.0, shuffled, 100, 5);
  CHECK(est2.p_star == est.p_star);
  CHECK(est2.p_star_err == est.p_star_err);

  // bracket failures come with a direction hint
  std::vector<ThresholdPoint> ordered_only{point(0.01, 1.2, 0.01),
                                           point(0.02, 1.1, 0.01)};
  const ThresholdEstimate fail = threshold_scan(1.0, ordered_only, 100, 5);
  CHECK(!fail.bracketed);
  CHECK(fail.hint.find("larger p") != std::string::npos);

  std::vector<ThresholdPoint> disordered_only{point(0.1, 0.2, 0.01),
                                              point(0.2, 0.1, 0.01)};
  CHECK(threshold_scan(1.0, disordered_only, 100, 5)
            .hint.find("smaller p") != std::string::npos);
}

TEST_CASE("fluctuation specific heat matches d<E>/dT on an exact curve, and "
          "the peak fit lands within a grid spacing of the true maximum") {
  const GaugeModel m = build_toric(2, 2);
  const DisorderSample s = generate_disorder(m, 0.05, 0.05, 41, 0);
  const Couplings c{1.0, 1.0};
  const WilsonPatch patch = make_wilson_patch(m, 1, 0, 0, 0);
  const EnumerationHistogram hist = enumerate_histogram(m, s, patch);

  // C * N_terms = dE/dT at fixed couplings
  const double dt = 1e-3;
  for (double T : {0.9, 1.2, 1.5, 1.9}) {
    const ExactResult lo = averages_from_histogram(m, hist, c, {T - dt});
    const ExactResult hi = averages_from_histogram(m, hist, c, {T + dt});
    const ExactResult mid = averages_from_histogram(m, hist, c, {T});
    const double de_dt = (hi.mean_energy[0] - lo.mean_energy[0]) / (2 * dt);
    CHECK(mid.specific_heat[0] * m.num_terms() ==
          doctest::Approx(de_dt).epsilon(1e-4));
  }

  // coarse-grid peak fit vs fine-grid maximum
  std::vector<double> coarse_t;
  for (int i = 0; i < 15; ++i) coarse_t.push_back(0.7 + 0.1 * i);
  const ExactResult coarse = averages_from_histogram(m, hist, c, coarse_t);
  const TcEstimate fit = fit_peak(coarse_t, coarse.specific_heat);
  REQUIRE(!fit.inconclusive);

  std::vector<double> fine_t;
  for (int i = 0; i <= 1400; ++i) fine_t.push_back(0.7 + 0.001 * i);
  const ExactResult fine = averages_from_histogram(m, hist, c, fine_t);
  const auto it =
      std::max_element(fine.specific_heat.begin(), fine.specific_heat.end());
  const double true_peak = fine_t[it - fine.specific_heat.begin()];
  CHECK(std::abs(fit.tc - true_peak) <= 0.1);  // one coarse grid spacing
}

TEST_CASE("csv schema") {
  std::vector<MeasurementSet> sets{synthetic_set(0, 0.0), synthetic_set(1, 0.1)};
  const ObservableTable t = aggregate_point(collect_point(sets, 0.9), 100, 3);
  const std::string csv = observables_csv(t);
  CHECK(csv.rfind("family,L,M,p,q,T,observable,value,error,n_samples\n", 0) ==
        0);
  CHECK(csv.find("toric,2,2,0.1,0.1,1,energy_per_term,") != std::string::npos);
  CHECK(csv.find("wilson_skewness") != std::string::npos);
}
