// Disorder-averaged observables, transition-temperature location and
// phase-diagram assembly.
//
// Error bars come from bootstrap resampling (10^3 resamples by default) over
// disorder samples; for a single-sample (clean) point the thermal blocks of
// that sample are resampled instead.  "Susceptibility" is operationalized as
// the energy-fluctuation specific heat C(T) = beta^2 (<E^2>-<E>^2) / N_terms;
// the C-peak and Wilson-skewness locators are reported side by side and must
// agree within twice their combined errors for an unflagged Tc.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gaugemc/montecarlo.hpp"
#include "gaugemc/oracle.hpp"

namespace gaugemc {

// Population skewness m3 / m2^(3/2).  Throws on fewer than 3 values; returns
// nullopt (undefined, not 0) for a zero-variance sample.
std::optional<double> skewness(std::span<const double> values);

// Bootstrap standard error of the mean of `values` (deterministic).
double bootstrap_error_of_mean(std::span<const double> values, int n_boot,
                               std::uint64_t seed);

struct PointKey {
  Family family = Family::Toric;
  int L = 0, M = 0;
  double p = 0.0, q = 0.0;
};

// Per-(p,q,L,M) data pooled over unflagged disorder samples, ordered by
// sample index (so results do not depend on input order).
struct PointData {
  PointKey key;
  double t_n = 0.0;     // Nishimori temperature; NaN for the clean point
  int n_terms = 0;
  std::vector<double> T;
  int n_total = 0, n_flagged = 0;
  std::vector<std::uint64_t> sample_indices;
  // [sample][temperature]
  std::vector<std::vector<double>> energy_per_term;
  std::vector<std::vector<double>> specific_heat;
  std::vector<std::vector<double>> wilson_mean;
  // [sample][temperature][...]
  std::vector<std::vector<std::vector<double>>> wilson_samples;
  std::vector<std::vector<std::vector<double>>> block_energy;
  std::vector<std::vector<std::vector<double>>> block_energy_sq;
  std::vector<std::vector<std::vector<double>>> block_wilson;

  int n_samples() const { return static_cast<int>(sample_indices.size()); }
};

PointData collect_point(const std::vector<MeasurementSet>& sets, double t_n);

struct ValueErr {
  double value = 0.0, error = 0.0;
};

struct ObservableTable {
  PointKey key;
  double t_n = 0.0;
  int n_samples = 0, n_flagged = 0;
  std::vector<double> T;
  std::vector<ValueErr> energy_per_term;
  std::vector<ValueErr> specific_heat;
  std::vector<ValueErr> wilson_mean;
  std::vector<ValueErr> wilson_skew;
  std::vector<std::uint8_t> skew_defined;
};

ObservableTable aggregate_point(const PointData& data, int n_boot = 1000,
                                std::uint64_t seed = 1);

// CSV schema: family,L,M,p,q,T,observable,value,error,n_samples
std::string observables_csv(const ObservableTable& table);
std::string exact_csv(const PointKey& key, const ExactResult& exact);

struct TcEstimate {
  double tc = 0.0;
  double error = 0.0;
  bool inconclusive = true;
  std::string note;
};

// Quadratic fit to the 5 grid points around the maximum; inconclusive when
// the maximum sits within 2 points of the grid boundary.
TcEstimate fit_peak(std::span<const double> T, std::span<const double> values);

// Temperature of the steepest change of |skewness| on a 3-point-smoothed
// series (finite differences at grid midpoints).
TcEstimate steepest_skew_change(std::span<const double> T,
                                std::span<const double> skew,
                                std::span<const std::uint8_t> defined);

struct TcResult {
  TcEstimate peak;
  TcEstimate skew;
  bool methods_agree = false;
};

// Both locators with bootstrap errors over disorder samples (thermal blocks
// for a single-sample point).
TcResult locate_tc(const PointData& data, int n_boot = 1000,
                   std::uint64_t seed = 1);

enum class Verdict { Ordered, Disordered, Marginal };
const char* verdict_name(Verdict v);

struct SizeTc {
  int L = 0, M = 0;
  TcEstimate tc;
};

// Ordered iff Tc - T_N > 2x error for the largest size and the gap does not
// shrink with size; disordered iff Tc - T_N < -2x error; otherwise marginal.
// Inconclusive Tc at the largest size propagates to marginal.  With a single
// size the gap-shrink guard is skipped.
Verdict ordered_at_nishimori(std::vector<SizeTc> sizes, double t_n);

struct ThresholdPoint {
  double p = 0.0, q = 0.0;
  double t_n = 0.0;
  TcEstimate tc;
};

struct ThresholdEstimate {
  double alpha = 1.0;
  std::vector<ThresholdPoint> points;  // sorted by p
  bool bracketed = false;
  double p_star = 0.0, p_star_err = 0.0;
  double bracket_fraction = 0.0;  // fraction of bootstrap resamples bracketed
  std::string hint;
};

// p* from the sign change of Tc(p) - T_N(p) along the path q = alpha*p,
// linearly interpolated; uncertainty by resampling the per-point Tc errors.
ThresholdEstimate threshold_scan(double alpha,
                                 std::vector<ThresholdPoint> points,
                                 int n_boot = 1000, std::uint64_t seed = 1);

}  // namespace gaugemc
