// Metropolis + parallel tempering sampler with automated equilibration
// detection by logarithmic data binning.
//
// One sweep proposes one flip per spin in index order; each sweep is followed
// by one replica-exchange pass over alternating even/odd adjacent temperature
// pairs.  RNG streams are attached to temperature slots (configurations move
// between slots on a swap), so a run is reproducible bit-for-bit from
// (master_seed, sample_index) regardless of thread count.
//
// Equilibration: per-sweep observables are accumulated into bins covering
// sweeps [2^k, 2^{k+1}).  Once the last three complete bins of every tracked
// observable at every temperature pairwise agree within twice their combined
// standard errors, the run switches to a measurement phase of equal length
// (the next power-of-two bin).  Samples that hit the sweep cap without
// converging are flagged, never silently averaged.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gaugemc/model.hpp"

namespace gaugemc {

struct TemperatureLadder {
  std::vector<double> temperatures;  // strictly increasing, all > 0
  int size() const { return static_cast<int>(temperatures.size()); }
};

// N_T points evenly spaced in T on [t_min, t_max].
TemperatureLadder linear_ladder(double t_min, double t_max, int n_t);

struct SweepSchedule {
  int max_bin = 22;        // sweep cap 2^max_bin (equilibration phase)
  int min_bins = 8;        // first convergence check needs this many bins
  int wilson_stride = 4;   // sweeps between Wilson-loop measurements
  int n_blocks = 16;       // measurement-phase blocking for error bars
  int max_wilson_keep = 256;  // thinned Wilson samples kept per temperature
  int audit_interval = 1024;  // incremental-vs-full energy audit cadence
};

struct BinStat {
  std::uint64_t count = 0;
  double mean = 0.0;
  double sem = 0.0;  // standard error of the bin mean
};

struct EquilibrationStatus {
  std::vector<BinStat> bins;
  bool converged = false;
};

// Log-binned accumulator over a step-indexed series (steps start at 1).
class LogBinAccumulator {
 public:
  void add(std::uint64_t step, double value);
  // Bins fully contained in [1, last_step].
  std::vector<BinStat> complete_bins(std::uint64_t last_step) const;

  const std::vector<std::uint64_t>& counts() const { return count_; }
  const std::vector<double>& sums() const { return sum_; }
  const std::vector<double>& sum_squares() const { return sum2_; }
  void restore(std::vector<std::uint64_t> counts, std::vector<double> sums,
               std::vector<double> sum2);

 private:
  std::vector<std::uint64_t> count_;
  std::vector<double> sum_;
  std::vector<double> sum2_;
};

// The "last three bins agree" rule: pairwise |mean_i - mean_j| within
// 2 * sqrt(sem_i^2 + sem_j^2).  Constant series agree exactly.
bool last_three_bins_agree(const std::vector<BinStat>& bins);

// Standalone detector over a raw series (value i is step i+1); throws
// std::invalid_argument if fewer than 8 complete bins are available.
EquilibrationStatus check_equilibration(const std::vector<double>& series);

// Metropolis acceptance probability for an energy change at inverse
// temperature beta, and the replica-exchange acceptance for configurations
// at (beta_i, E_i), (beta_j, E_j).
double metropolis_probability(double delta_e, double beta);
double swap_probability(double beta_i, double beta_j, double e_i, double e_j);

class PTEnsemble {
 public:
  PTEnsemble(const GaugeModel& model, const DisorderSample& sample,
             const Couplings& couplings, const TemperatureLadder& ladder,
             std::uint64_t master_seed, std::uint64_t sample_index);

  int num_replicas() const { return static_cast<int>(slots_.size()); }
  // One Metropolis sweep (one proposed flip per spin, index order).
  void metropolis_sweep(int slot);
  void sweep_all();
  // One replica-exchange pass; pair parity alternates with the pass counter.
  void pt_swap_pass();

  double temperature(int slot) const { return temperatures_[slot]; }
  double energy_of(int slot) const;
  double energy_per_term(int slot) const;
  UnsatCounts counts_of(int slot) const {
    return {slots_[slot].unsat_q, slots_[slot].unsat_m};
  }
  const std::vector<std::int8_t>& spins_of(int slot) const {
    return slots_[slot].spins;
  }
  // Patch product from the maintained term signs (cheap).
  double wilson_mean(int slot, const std::vector<WilsonPatch>& patches) const;

  // Verify incremental counters against a full recount; throws on mismatch.
  void audit(int slot) const;

  std::uint64_t sweeps_done() const { return sweeps_done_; }
  std::uint64_t swap_passes_done() const { return swap_passes_done_; }
  std::vector<double> swap_acceptance() const;

  const GaugeModel& model() const { return model_; }
  const Couplings& couplings() const { return couplings_; }

  void serialize(std::ostream& out) const;
  void deserialize(std::istream& in);

 private:
  struct Replica {
    std::vector<std::int8_t> spins;
    std::vector<std::int8_t> term_sign;
    std::int64_t unsat_q = 0, unsat_m = 0;
  };
  void rebuild_acceptance_tables();
  void init_replica(Replica& r, rng::Xoshiro256pp& gen) const;

  const GaugeModel& model_;
  const DisorderSample& sample_;
  Couplings couplings_;
  std::vector<double> temperatures_;
  std::vector<Replica> slots_;
  std::vector<rng::Xoshiro256pp> slot_rng_;
  rng::Xoshiro256pp swap_rng_;
  std::uint64_t sweeps_done_ = 0;
  std::uint64_t swap_passes_done_ = 0;
  // acceptance lookup per slot: index (sq+6)*13 + (sm+6)
  std::vector<std::vector<double>> accept_table_;
  std::vector<std::uint64_t> swap_attempt_, swap_accept_;  // per adjacent pair
};

struct TemperatureMeasurement {
  double T = 0.0;
  std::uint64_t n_sweeps = 0;       // measurement sweeps
  double mean_energy = 0.0;         // <E> (extensive)
  double mean_energy_sq = 0.0;      // <E^2>
  double mean_wilson = 0.0;         // patch-set mean
  std::vector<double> block_energy;
  std::vector<double> block_energy_sq;
  std::vector<double> block_wilson;
  std::vector<double> wilson_samples;  // thinned patch-set means
};

struct MeasurementSet {
  Family family = Family::Toric;
  int L = 0, M = 0;
  double p = 0.0, q = 0.0;
  std::uint64_t master_seed = 0, sample_index = 0;
  double J = 1.0, K = 1.0;
  bool equilibrated = false;
  int eq_bin = -1;                  // measurement phase = bin eq_bin
  std::uint64_t total_sweeps = 0;
  std::vector<TemperatureMeasurement> per_t;
  std::vector<double> swap_acceptance;  // per adjacent ladder pair

  std::string to_json(int indent = -1) const;
  static MeasurementSet from_json(const std::string& text);
};

// Resumable driver for one disorder sample.
class SampleRunner {
 public:
  SampleRunner(const GaugeModel& model, const DisorderSample& sample,
               const Couplings& couplings, const TemperatureLadder& ladder,
               const SweepSchedule& schedule);

  // Advance at most n sweeps; returns true when the run is finished.
  bool advance(std::uint64_t n);
  bool finished() const { return phase_ == Phase::Done; }
  MeasurementSet result() const;

  std::uint64_t sweeps_done() const { return ensemble_.sweeps_done(); }
  bool flagged() const { return flagged_; }

  void save_checkpoint(const std::string& path) const;
  // Restores state from a checkpoint; throws if the checkpoint was written
  // for a different (model, sample, couplings, ladder, schedule).
  void load_checkpoint(const std::string& path);
  std::uint64_t fingerprint() const;

 private:
  enum class Phase : std::uint8_t { Equilibrate, Measure, Done };

  void step_one_sweep();
  void record_equilibration_observables();
  void begin_measurement(int bin);
  bool all_series_converged() const;

  const GaugeModel& model_;
  const DisorderSample& sample_;
  Couplings couplings_;
  TemperatureLadder ladder_;
  SweepSchedule schedule_;
  PTEnsemble ensemble_;
  std::vector<WilsonPatch> patches_;

  Phase phase_ = Phase::Equilibrate;
  bool flagged_ = false;
  int eq_bin_ = -1;
  std::uint64_t meas_begin_ = 0, meas_end_ = 0;

  // per temperature: energy-per-term and Wilson-mean equilibration series
  std::vector<LogBinAccumulator> eq_energy_, eq_wilson_;

  struct MeasAccum {
    double sum_e = 0.0, sum_e2 = 0.0, sum_w = 0.0;
    std::uint64_t n_e = 0, n_w = 0;
    std::vector<double> block_e, block_e2, block_w;
    std::vector<std::uint64_t> block_ne, block_nw;
    // deterministic decimating buffer of Wilson samples
    std::vector<double> w_kept;
    std::uint64_t w_seen = 0;
    std::uint64_t w_stride = 1;
  };
  std::vector<MeasAccum> meas_;
};

// Run one disorder sample to completion.  If checkpoint_path is non-empty the
// state is checkpointed every checkpoint_every sweeps (atomically).
MeasurementSet run_sample(const GaugeModel& model, const DisorderSample& sample,
                          const Couplings& couplings,
                          const TemperatureLadder& ladder,
                          const SweepSchedule& schedule,
                          const std::string& checkpoint_path = {},
                          std::uint64_t checkpoint_every = 0);

}  // namespace gaugemc
