#include <stdexcept>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "gaugemc/disorder.hpp"
#include "gaugemc/io_util.hpp"

using namespace gaugemc;

TEST_CASE("zero rates give all-plus signs and empirical rates (0, 0)") {
  const GaugeModel m = build_toric(3, 3);
  const DisorderSample s = generate_disorder(m, 0.0, 0.0, 42, 0);
  for (auto t : s.tau) CHECK(t == 1);
  const auto [p_hat, q_hat] = empirical_rates(s);
  CHECK(p_hat == 0.0);
  CHECK(q_hat == 0.0);
}

TEST_CASE("identical inputs reproduce identical tau sequences") {
  const GaugeModel m = build_color(3, 2);
  const DisorderSample a = generate_disorder(m, 0.2, 0.35, 123, 7);
  const DisorderSample b = generate_disorder(m, 0.2, 0.35, 123, 7);
  CHECK(a.tau == b.tau);
  const DisorderSample c = generate_disorder(m, 0.2, 0.35, 123, 8);
  CHECK(a.tau != c.tau);
}

TEST_CASE("flip fractions concentrate at the requested rates (4 sigma)") {
  // ~1.7e5 qubit terms: binomial concentration at p = 0.5 - eps and q = 0.2
  const GaugeModel m = build_toric(12, 12);  // 41472 qubit, 20736 meas terms
  const double p = 0.49, q = 0.2;
  const DisorderSample s = generate_disorder(m, p, q, 2024, 3);
  const auto [p_hat, q_hat] = empirical_rates(s);
  const double sig_p = std::sqrt(p * (1 - p) / m.num_qubit_terms);
  const double sig_q = std::sqrt(q * (1 - q) / m.num_meas_terms);
  CHECK(std::abs(p_hat - p) < 4 * sig_p);
  CHECK(std::abs(q_hat - q) < 4 * sig_q);
}

TEST_CASE("chi-square goodness of fit for the qubit flip count") {
  // pooled over samples so N * N_Q >= 1e4; one-cell chi-square at the 0.001
  // level is |z| < 3.29
  const GaugeModel m = build_toric(6, 6);
  const double p = 0.1;
  std::int64_t flipped = 0, total = 0;
  for (int s = 0; s < 40; ++s) {
    const DisorderSample d = generate_disorder(m, p, 0.3, 555, s);
    for (std::int32_t t = 0; t < d.num_qubit_terms; ++t)
      if (d.tau[t] < 0) ++flipped;
    total += d.num_qubit_terms;
  }
  REQUIRE(total >= 10000);
  const double z = (double(flipped) - p * total) / std::sqrt(p * (1 - p) * total);
  CHECK(std::abs(z) < 3.29);
}

TEST_CASE("hierarchical keying: each term is independent of the others") {
  const GaugeModel m = build_toric(2, 2);
  const DisorderSample s = generate_disorder(m, 0.3, 0.3, 9, 4);
  for (std::int32_t t = 0; t < m.num_terms(); ++t)
    CHECK(regenerate_tau(m, 0.3, 0.3, 9, 4, t) == s.tau[t]);
}

TEST_CASE("counting example: 3 of 16 qubit signs flipped") {
  const GaugeModel m = build_toric(2, 2);
  DisorderSample s = generate_disorder(m, 0.0, 0.0, 1, 0);
  s.tau[2] = s.tau[5] = s.tau[11] = -1;
  const auto [p_hat, q_hat] = empirical_rates(s);
  CHECK(p_hat == doctest::Approx(0.1875).epsilon(1e-15));
  CHECK(q_hat == 0.0);
}

TEST_CASE("rates outside [0, 0.5) are rejected") {
  const GaugeModel m = build_toric(2, 2);
  CHECK_THROWS_AS(generate_disorder(m, 0.5, 0.1, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(generate_disorder(m, -0.1, 0.1, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(generate_disorder(m, 0.1, 0.7, 1, 0), std::invalid_argument);
}

TEST_CASE("disorder file round trip is bit exact") {
  const GaugeModel m = build_color(3, 2);
  const DisorderSample s = generate_disorder(m, 0.123456789, 0.3333333333333,
                                             0xDEADBEEFCAFEULL, 31);
  const std::string path = "/tmp/gaugemc_test_disorder.json";
  save_disorder(s, path);
  const DisorderSample r = load_disorder(path);
  CHECK(r.family == s.family);
  CHECK(r.L == s.L);
  CHECK(r.M == s.M);
  CHECK(r.p == s.p);  // exact double round trip
  CHECK(r.q == s.q);
  CHECK(r.master_seed == s.master_seed);
  CHECK(r.sample_index == s.sample_index);
  CHECK(r.tau == s.tau);
  // a second save produces identical bytes
  const std::string first = io::read_file(path);
  save_disorder(r, path);
  CHECK(io::read_file(path) == first);
  std::filesystem::remove(path);
}
