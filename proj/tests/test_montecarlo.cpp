#include <stdexcept>
#include <cmath>
#include <filesystem>
#include <numeric>

#include "doctest.h"
#include "gaugemc/montecarlo.hpp"
#include "gaugemc/oracle.hpp"

using namespace gaugemc;

TEST_CASE("metropolis acceptance rule") {
  CHECK(metropolis_probability(-3.0, 2.0) == 1.0);
  CHECK(metropolis_probability(0.0, 2.0) == 1.0);
  CHECK(metropolis_probability(8.0, 0.25) == doctest::Approx(std::exp(-2.0)));
  CHECK(metropolis_probability(8.0, 1e9) == 0.0);  // frozen cold limit
  // beta -> 0 limit: everything is accepted
  CHECK(metropolis_probability(8.0, 1e-12) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("empirical acceptance of a Delta E = 8 move at beta = 1/4 is "
          "exp(-2) within 3 sigma over 1e5 trials") {
  const double p_ref = std::exp(-2.0);
  rng::Xoshiro256pp gen(rng::derive_key({2024, 8}));
  const int n = 100000;
  int accepted = 0;
  for (int i = 0; i < n; ++i)
    if (gen.u01() < metropolis_probability(8.0, 0.25)) ++accepted;
  const double sigma = std::sqrt(p_ref * (1 - p_ref) * n);
  CHECK(std::abs(accepted - p_ref * n) < 3 * sigma);
}

TEST_CASE("infinite-temperature limit accepts every proposal") {
  const GaugeModel m = build_toric(2, 2);
  const DisorderSample s = generate_disorder(m, 0.2, 0.2, 5, 0);
  PTEnsemble ens(m, s, {1.0, 1.0}, linear_ladder(1e8, 2e8, 2), 5, 0);
  for (int sweep = 0; sweep < 10; ++sweep) {
    const auto before = ens.spins_of(0);
    ens.metropolis_sweep(0);
    // every proposed flip accepted: the configuration is fully negated
    const auto& after = ens.spins_of(0);
    for (std::size_t i = 0; i < before.size(); ++i)
      CHECK(after[i] == -before[i]);
  }
}

TEST_CASE("swap acceptance formula") {
  CHECK(swap_probability(0.5, 0.4, -10.0, -10.0) == 1.0);  // equal energies
  // (beta_i - beta_j)(E_i - E_j) = (-0.1)(-10) = 1 -> accept surely
  CHECK(swap_probability(0.8, 0.9, -100.0, -90.0) == 1.0);
  CHECK(swap_probability(0.8, 0.9, -90.0, -100.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("two-temperature ensemble reproduces the exact Boltzmann marginals "
          "at both slots (detailed-balance sanity)") {
  const GaugeModel m = build_toric(2, 2);
  const DisorderSample s = generate_disorder(m, 0.1, 0.15, 31, 0);
  const Couplings c{1.0, 1.0};
  const std::vector<double> temps{1.1, 1.9};
  const ExactResult exact = enumerate_exact(m, s, c, temps,
                                            make_wilson_patch(m, 1, 0, 0, 0));

  PTEnsemble ens(m, s, c, TemperatureLadder{temps}, 31, 0);
  const int warmup = 512, n = 1 << 14;
  for (int i = 0; i < warmup; ++i) {
    ens.sweep_all();
    ens.pt_swap_pass();
  }
  std::vector<std::vector<double>> e_series(2);
  for (int i = 0; i < n; ++i) {
    ens.sweep_all();
    ens.pt_swap_pass();
    for (int slot = 0; slot < 2; ++slot)
      e_series[slot].push_back(ens.energy_of(slot));
  }
  for (int slot = 0; slot < 2; ++slot) {
    // blocked standard error to absorb autocorrelation
    const int blocks = 32, len = n / blocks;
    std::vector<double> bm(blocks, 0.0);
    for (int b = 0; b < blocks; ++b) {
      for (int k = 0; k < len; ++k) bm[b] += e_series[slot][b * len + k];
      bm[b] /= len;
    }
    const double mean = std::accumulate(bm.begin(), bm.end(), 0.0) / blocks;
    double var = 0.0;
    for (double v : bm) var += (v - mean) * (v - mean);
    const double sem = std::sqrt(var / (blocks - 1) / blocks);
    CHECK(std::abs(mean - exact.mean_energy[slot]) < 3 * std::max(sem, 1e-12));
  }
  // swaps actually happen at these parameters
  CHECK(ens.swap_acceptance()[0] > 0.05);
  CHECK(ens.swap_acceptance()[0] < 0.999);
}

TEST_CASE("incremental energy audit passes over long runs") {
  const GaugeModel m = build_color(2, 2);
  const DisorderSample s = generate_disorder(m, 0.25, 0.25, 77, 0);
  PTEnsemble ens(m, s, {1.2, 0.8}, linear_ladder(0.8, 2.0, 4), 77, 0);
  for (int i = 0; i < 2048; ++i) {
    ens.sweep_all();
    ens.pt_swap_pass();
    if ((i & 255) == 0)
      for (int slot = 0; slot < 4; ++slot) ens.audit(slot);
  }
  for (int slot = 0; slot < 4; ++slot) ens.audit(slot);
}

TEST_CASE("zero couplings give uniform spins (chi-square over streams)") {
  const GaugeModel m = build_toric(2, 2);
  const int runs = 200;
  std::vector<int> plus_count(m.num_spins, 0);
  for (int r = 0; r < runs; ++r) {
    const DisorderSample s = generate_disorder(m, 0.0, 0.0, 999, r);
    PTEnsemble ens(m, s, {0.0, 0.0}, linear_ladder(1.0, 2.0, 2), 999, r);
    for (int i = 0; i < 3; ++i) {
      ens.sweep_all();
      ens.pt_swap_pass();
    }
    for (std::int32_t i = 0; i < m.num_spins; ++i)
      if (ens.spins_of(0)[i] > 0) ++plus_count[i];
  }
  double chi2 = 0.0;
  for (auto n : plus_count) {
    const double d = n - runs / 2.0;
    chi2 += d * d / (runs * 0.25);
  }
  // chi-square with 24 dof, 0.001 quantile is 51.18
  CHECK(chi2 < 51.18);
}

TEST_CASE("log-binned equilibration detector") {
  SUBCASE("constant series converges (zero variance handled exactly)") {
    const std::vector<double> series(1 << 9, 3.25);
    const EquilibrationStatus st = check_equilibration(series);
    CHECK(st.converged);
    CHECK(st.bins.size() == 9);
  }
  SUBCASE("strong drift does not converge") {
    std::vector<double> series;
    rng::Xoshiro256pp gen(4);
    for (int i = 0; i < (1 << 9); ++i)
      series.push_back(1e-2 * i + 1e-4 * (gen.u01() - 0.5));
    CHECK(!check_equilibration(series).converged);
  }
  SUBCASE("insufficient history throws") {
    CHECK_THROWS_AS(check_equilibration(std::vector<double>(100, 1.0)),
                    std::invalid_argument);
  }
  SUBCASE("independent draws from the exact 24-spin distribution converge") {
    // sample energies i.i.d. from the exact Boltzmann cell distribution
    const GaugeModel m = build_toric(2, 2);
    const DisorderSample s = generate_disorder(m, 0.1, 0.1, 3, 0);
    const EnumerationHistogram h =
        enumerate_histogram(m, s, make_wilson_patch(m, 1, 0, 0, 0));
    const double beta = 1.0 / 1.3;
    std::vector<double> energy_of_cell, cdf;
    double z = 0.0;
    for (std::int32_t a = 0; a <= h.nq; ++a)
      for (std::int32_t b = 0; b <= h.nm; ++b) {
        const auto idx = std::size_t(a) * (h.nm + 1) + b;
        if (!h.count[idx]) continue;
        const double e = -(h.nq - 2.0 * a) - (h.nm - 2.0 * b);
        z += double(h.count[idx]) * std::exp(-beta * (e + 24.0));
        energy_of_cell.push_back(e);
        cdf.push_back(z);
      }
    rng::Xoshiro256pp gen(8);
    std::vector<double> series;
    for (int i = 0; i < (1 << 10); ++i) {
      const double u = gen.u01() * z;
      const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
      series.push_back(energy_of_cell[it - cdf.begin()]);
    }
    CHECK(check_equilibration(series).converged);
  }
}

TEST_CASE("run_sample is deterministic and its checkpoints resume bit-exactly") {
  const GaugeModel m = build_toric(2, 2);
  const DisorderSample s = generate_disorder(m, 0.1, 0.1, 55, 0);
  const Couplings c{1.0, 1.0};
  const TemperatureLadder ladder = linear_ladder(1.0, 2.0, 3);
  SweepSchedule schedule;
  schedule.max_bin = 10;

  const MeasurementSet a = run_sample(m, s, c, ladder, schedule);
  const MeasurementSet b = run_sample(m, s, c, ladder, schedule);
  CHECK(a.to_json() == b.to_json());
  CHECK(a.equilibrated);

  // interrupt + resume through a checkpoint must reproduce the same bytes
  SampleRunner partial(m, s, c, ladder, schedule);
  partial.advance(300);
  const std::string ckpt = "/tmp/gaugemc_test.ckpt";
  partial.save_checkpoint(ckpt);

  SampleRunner resumed(m, s, c, ladder, schedule);
  resumed.load_checkpoint(ckpt);
  CHECK(resumed.sweeps_done() == 300);
  while (!resumed.advance(1 << 12)) {
  }
  CHECK(resumed.result().to_json() == a.to_json());

  // a checkpoint from different parameters is refused
  SweepSchedule other = schedule;
  other.max_bin = 11;
  SampleRunner mismatched(m, s, c, ladder, other);
  CHECK_THROWS_AS(mismatched.load_checkpoint(ckpt), std::runtime_error);
  std::filesystem::remove(ckpt);
}

TEST_CASE("run_sample with periodic checkpointing matches the direct run") {
  const GaugeModel m = build_color(2, 2);
  const DisorderSample s = generate_disorder(m, 0.15, 0.15, 91, 1);
  const Couplings c{1.0, 1.0};
  const TemperatureLadder ladder = linear_ladder(1.2, 2.4, 3);
  SweepSchedule schedule;
  schedule.max_bin = 9;

  const std::string ckpt = "/tmp/gaugemc_test_periodic.ckpt";
  std::filesystem::remove(ckpt);
  const MeasurementSet direct = run_sample(m, s, c, ladder, schedule);
  const MeasurementSet chunked = run_sample(m, s, c, ladder, schedule, ckpt, 64);
  CHECK(direct.to_json() == chunked.to_json());
  std::filesystem::remove(ckpt);
}

TEST_CASE("sweep cap flags the sample instead of silently averaging") {
  // a tiny cap with a drifting low-T relaxation cannot converge: bins 8..cap
  const GaugeModel m = build_toric(3, 3);
  const DisorderSample s = generate_disorder(m, 0.3, 0.3, 17, 0);
  const Couplings c{1.0, 1.0};
  SweepSchedule schedule;
  schedule.max_bin = 8;  // first possible check is also the cap
  const MeasurementSet ms =
      run_sample(m, s, c, linear_ladder(0.05, 0.2, 2), schedule);
  CHECK(ms.eq_bin == 8);
  CHECK(ms.total_sweeps == (1 << 9) - 1);
  // equilibrated or not, the flag is explicit and measurements exist
  CHECK(ms.per_t.size() == 2);
  CHECK(ms.per_t[0].n_sweeps == (1 << 8));
}

TEST_CASE("temperature ladders are validated") {
  CHECK_THROWS_AS(linear_ladder(0.0, 1.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(linear_ladder(1.0, 0.5, 4), std::invalid_argument);
  CHECK_THROWS_AS(linear_ladder(1.0, 2.0, 1), std::invalid_argument);
  const TemperatureLadder l = linear_ladder(0.9, 1.8, 52);
  CHECK(l.size() == 52);
  CHECK(l.temperatures.front() == 0.9);
  CHECK(l.temperatures.back() == 1.8);
}
