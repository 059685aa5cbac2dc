#include "gaugemc/montecarlo.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gaugemc/io_util.hpp"
#include "json.hpp"

namespace gaugemc {

namespace {

// binary checkpoint primitives, little-endian
void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw std::runtime_error("truncated checkpoint");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
  return v;
}

void put_f64(std::ostream& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

double get_f64(std::istream& in) {
  return std::bit_cast<double>(get_u64(in));
}

void put_f64v(std::ostream& out, const std::vector<double>& v) {
  put_u64(out, v.size());
  for (double x : v) put_f64(out, x);
}

std::vector<double> get_f64v(std::istream& in) {
  std::vector<double> v(get_u64(in));
  for (auto& x : v) x = get_f64(in);
  return v;
}

void put_u64v(std::ostream& out, const std::vector<std::uint64_t>& v) {
  put_u64(out, v.size());
  for (auto x : v) put_u64(out, x);
}

std::vector<std::uint64_t> get_u64v(std::istream& in) {
  std::vector<std::uint64_t> v(get_u64(in));
  for (auto& x : v) x = get_u64(in);
  return v;
}

int bin_of_step(std::uint64_t step) { return 63 - std::countl_zero(step); }

}  // namespace

TemperatureLadder linear_ladder(double t_min, double t_max, int n_t) {
  if (!(t_min > 0.0)) throw std::invalid_argument("ladder needs T_min > 0");
  if (!(t_max > t_min)) throw std::invalid_argument("ladder needs T_max > T_min");
  if (n_t < 2) throw std::invalid_argument("ladder needs at least 2 temperatures");
  TemperatureLadder ladder;
  ladder.temperatures.resize(n_t);
  for (int i = 0; i < n_t; ++i)
    ladder.temperatures[i] = t_min + (t_max - t_min) * double(i) / (n_t - 1);
  return ladder;
}

void LogBinAccumulator::add(std::uint64_t step, double value) {
  const int b = bin_of_step(step);
  if (static_cast<int>(count_.size()) <= b) {
    count_.resize(b + 1, 0);
    sum_.resize(b + 1, 0.0);
    sum2_.resize(b + 1, 0.0);
  }
  ++count_[b];
  sum_[b] += value;
  sum2_[b] += value * value;
}

std::vector<BinStat> LogBinAccumulator::complete_bins(
    std::uint64_t last_step) const {
  // bin k is complete once step 2^{k+1}-1 has been recorded
  const int n_complete = last_step ? bin_of_step(last_step + 1) : 0;
  std::vector<BinStat> bins;
  bins.reserve(n_complete);
  for (int b = 0; b < n_complete; ++b) {
    BinStat stat;
    if (b < static_cast<int>(count_.size()) && count_[b] > 0) {
      const double n = static_cast<double>(count_[b]);
      stat.count = count_[b];
      stat.mean = sum_[b] / n;
      if (count_[b] >= 2) {
        const double var = std::max(0.0, (sum2_[b] - n * stat.mean * stat.mean) /
                                             (n - 1.0));
        stat.sem = std::sqrt(var / n);
      }
    }
    bins.push_back(stat);
  }
  return bins;
}

void LogBinAccumulator::restore(std::vector<std::uint64_t> counts,
                                std::vector<double> sums,
                                std::vector<double> sum2) {
  count_ = std::move(counts);
  sum_ = std::move(sums);
  sum2_ = std::move(sum2);
}

bool last_three_bins_agree(const std::vector<BinStat>& bins) {
  const int n = static_cast<int>(bins.size());
  if (n < 3) return false;
  const BinStat* last3[3] = {&bins[n - 3], &bins[n - 2], &bins[n - 1]};
  for (const auto* b : last3)
    if (b->count == 0) return false;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const double tol =
          2.0 * std::hypot(last3[i]->sem, last3[j]->sem);
      if (std::abs(last3[i]->mean - last3[j]->mean) > tol) return false;
    }
  return true;
}

EquilibrationStatus check_equilibration(const std::vector<double>& series) {
  LogBinAccumulator acc;
  for (std::size_t i = 0; i < series.size(); ++i) acc.add(i + 1, series[i]);
  EquilibrationStatus status;
  status.bins = acc.complete_bins(series.size());
  if (status.bins.size() < 8)
    throw std::invalid_argument(
        "check_equilibration: insufficient history (need 8 complete bins, "
        "i.e. at least 255 samples)");
  status.converged = last_three_bins_agree(status.bins);
  return status;
}

double metropolis_probability(double delta_e, double beta) {
  return std::min(1.0, std::exp(-beta * delta_e));
}

double swap_probability(double beta_i, double beta_j, double e_i, double e_j) {
  return std::min(1.0, std::exp((beta_i - beta_j) * (e_i - e_j)));
}

PTEnsemble::PTEnsemble(const GaugeModel& model, const DisorderSample& sample,
                       const Couplings& couplings,
                       const TemperatureLadder& ladder,
                       std::uint64_t master_seed, std::uint64_t sample_index)
    : model_(model),
      sample_(sample),
      couplings_(couplings),
      temperatures_(ladder.temperatures) {
  if (temperatures_.size() < 2)
    throw std::invalid_argument("parallel tempering needs at least 2 replicas");
  for (std::size_t i = 0; i + 1 < temperatures_.size(); ++i)
    if (!(temperatures_[i] > 0.0 && temperatures_[i] < temperatures_[i + 1]))
      throw std::invalid_argument("temperatures must be positive and increasing");
  if (sample_.num_terms() != model_.num_terms())
    throw std::invalid_argument("disorder sample does not match model");
  if (!(couplings_.J >= 0.0) || !(couplings_.K >= 0.0) ||
      !std::isfinite(couplings_.J) || !std::isfinite(couplings_.K))
    throw std::invalid_argument("couplings must be finite and non-negative");

  const int n_t = static_cast<int>(temperatures_.size());
  slot_rng_.reserve(n_t);
  for (int slot = 0; slot < n_t; ++slot)
    slot_rng_.emplace_back(rng::derive_key({master_seed, sample_index,
                                            rng::kTagSweep,
                                            static_cast<std::uint64_t>(slot)}));
  swap_rng_ = rng::Xoshiro256pp(
      rng::derive_key({master_seed, sample_index, rng::kTagSwap}));

  slots_.resize(n_t);
  for (int slot = 0; slot < n_t; ++slot)
    init_replica(slots_[slot], slot_rng_[slot]);

  swap_attempt_.assign(n_t - 1, 0);
  swap_accept_.assign(n_t - 1, 0);
  rebuild_acceptance_tables();
}

void PTEnsemble::init_replica(Replica& r, rng::Xoshiro256pp& gen) const {
  // hot start: random spins
  r.spins.resize(model_.num_spins);
  for (auto& s : r.spins) s = (gen.next() & 1) ? 1 : -1;
  r.term_sign.resize(model_.num_terms());
  r.unsat_q = r.unsat_m = 0;
  for (std::int32_t t = 0; t < model_.num_terms(); ++t) {
    int sign = sample_.tau[t];
    for (auto s : model_.terms[t].spins) sign *= r.spins[s];
    r.term_sign[t] = static_cast<std::int8_t>(sign);
    if (sign < 0) (model_.is_qubit_term(t) ? r.unsat_q : r.unsat_m)++;
  }
}

void PTEnsemble::rebuild_acceptance_tables() {
  accept_table_.assign(temperatures_.size(), std::vector<double>(13 * 13));
  for (std::size_t slot = 0; slot < temperatures_.size(); ++slot) {
    const double beta = 1.0 / temperatures_[slot];
    for (int sq = -6; sq <= 6; ++sq)
      for (int sm = -6; sm <= 6; ++sm) {
        const double delta_e = 2.0 * (couplings_.J * sq + couplings_.K * sm);
        accept_table_[slot][(sq + 6) * 13 + (sm + 6)] =
            metropolis_probability(delta_e, beta);
      }
  }
}

void PTEnsemble::metropolis_sweep(int slot) {
  Replica& r = slots_[slot];
  auto& gen = slot_rng_[slot];
  const double* table = accept_table_[slot].data();
  const std::int32_t* off = model_.incidence_offset.data();
  const std::int32_t* inc = model_.incidence_term.data();
  const std::int32_t nq = model_.num_qubit_terms;
  const std::int32_t n = model_.num_spins;
  for (std::int32_t s = 0; s < n; ++s) {
    int sq = 0, sm = 0;
    for (std::int32_t k = off[s]; k < off[s + 1]; ++k) {
      const std::int32_t t = inc[k];
      if (t < nq)
        sq += r.term_sign[t];
      else
        sm += r.term_sign[t];
    }
    if (gen.u01() < table[(sq + 6) * 13 + (sm + 6)]) {
      r.spins[s] = static_cast<std::int8_t>(-r.spins[s]);
      r.unsat_q += sq;
      r.unsat_m += sm;
      for (std::int32_t k = off[s]; k < off[s + 1]; ++k) {
        const std::int32_t t = inc[k];
        r.term_sign[t] = static_cast<std::int8_t>(-r.term_sign[t]);
      }
    }
  }
}

void PTEnsemble::sweep_all() {
  for (int slot = 0; slot < num_replicas(); ++slot) metropolis_sweep(slot);
  ++sweeps_done_;
}

void PTEnsemble::pt_swap_pass() {
  const int parity = static_cast<int>(swap_passes_done_ & 1);
  for (int i = parity; i + 1 < num_replicas(); i += 2) {
    const double beta_i = 1.0 / temperatures_[i];
    const double beta_j = 1.0 / temperatures_[i + 1];
    const double e_i = energy_of(i);
    const double e_j = energy_of(i + 1);
    const double prob = swap_probability(beta_i, beta_j, e_i, e_j);
    ++swap_attempt_[i];
    if (swap_rng_.u01() < prob) {
      std::swap(slots_[i], slots_[i + 1]);
      ++swap_accept_[i];
    }
  }
  ++swap_passes_done_;
}

double PTEnsemble::energy_of(int slot) const {
  return energy_from_counts(model_, couplings_, counts_of(slot));
}

double PTEnsemble::energy_per_term(int slot) const {
  return energy_of(slot) / static_cast<double>(model_.num_terms());
}

double PTEnsemble::wilson_mean(int slot,
                               const std::vector<WilsonPatch>& patches) const {
  const Replica& r = slots_[slot];
  double sum = 0.0;
  for (const auto& patch : patches) {
    int w = 1;
    for (auto t : patch.terms) w *= r.term_sign[t];
    sum += w;
  }
  return patches.empty() ? 0.0 : sum / static_cast<double>(patches.size());
}

void PTEnsemble::audit(int slot) const {
  const Replica& r = slots_[slot];
  std::int64_t uq = 0, um = 0;
  for (std::int32_t t = 0; t < model_.num_terms(); ++t) {
    int sign = sample_.tau[t];
    for (auto s : model_.terms[t].spins) sign *= r.spins[s];
    if (sign != r.term_sign[t])
      throw std::logic_error("incremental term sign diverged from recount");
    if (sign < 0) (model_.is_qubit_term(t) ? uq : um)++;
  }
  if (uq != r.unsat_q || um != r.unsat_m)
    throw std::logic_error("incremental energy diverged from full recount");
}

std::vector<double> PTEnsemble::swap_acceptance() const {
  std::vector<double> acc(swap_attempt_.size(), 0.0);
  for (std::size_t i = 0; i < acc.size(); ++i)
    if (swap_attempt_[i]) acc[i] = double(swap_accept_[i]) / double(swap_attempt_[i]);
  return acc;
}

void PTEnsemble::serialize(std::ostream& out) const {
  put_u64(out, sweeps_done_);
  put_u64(out, swap_passes_done_);
  for (const auto& r : slots_)
    out.write(reinterpret_cast<const char*>(r.spins.data()), r.spins.size());
  for (const auto& gen : slot_rng_)
    for (auto w : gen.state()) put_u64(out, w);
  for (auto w : swap_rng_.state()) put_u64(out, w);
  put_u64v(out, swap_attempt_);
  put_u64v(out, swap_accept_);
}

void PTEnsemble::deserialize(std::istream& in) {
  sweeps_done_ = get_u64(in);
  swap_passes_done_ = get_u64(in);
  for (auto& r : slots_) {
    in.read(reinterpret_cast<char*>(r.spins.data()), r.spins.size());
    if (!in) throw std::runtime_error("truncated checkpoint (spins)");
    // recompute derived state from the spins
    r.unsat_q = r.unsat_m = 0;
    for (std::int32_t t = 0; t < model_.num_terms(); ++t) {
      int sign = sample_.tau[t];
      for (auto s : model_.terms[t].spins) sign *= r.spins[s];
      r.term_sign[t] = static_cast<std::int8_t>(sign);
      if (sign < 0) (model_.is_qubit_term(t) ? r.unsat_q : r.unsat_m)++;
    }
  }
  for (auto& gen : slot_rng_) {
    std::array<std::uint64_t, 4> s;
    for (auto& w : s) w = get_u64(in);
    gen.set_state(s);
  }
  std::array<std::uint64_t, 4> s;
  for (auto& w : s) w = get_u64(in);
  swap_rng_.set_state(s);
  swap_attempt_ = get_u64v(in);
  swap_accept_ = get_u64v(in);
  if (swap_attempt_.size() != std::size_t(num_replicas() - 1) ||
      swap_accept_.size() != swap_attempt_.size())
    throw std::runtime_error("checkpoint replica count mismatch");
}

// ---------------------------------------------------------------------------
// SampleRunner

SampleRunner::SampleRunner(const GaugeModel& model,
                           const DisorderSample& sample,
                           const Couplings& couplings,
                           const TemperatureLadder& ladder,
                           const SweepSchedule& schedule)
    : model_(model),
      sample_(sample),
      couplings_(couplings),
      ladder_(ladder),
      schedule_(schedule),
      ensemble_(model, sample, couplings, ladder, sample.master_seed,
                sample.sample_index),
      patches_(default_wilson_patches(model)) {
  if (schedule_.max_bin < schedule_.min_bins)
    throw std::invalid_argument("sweep cap below the first convergence check");
  if (schedule_.wilson_stride < 1 || schedule_.n_blocks < 1)
    throw std::invalid_argument("bad schedule");
  eq_energy_.resize(1);
  eq_wilson_.resize(1);
  meas_.resize(ladder_.size());
}

bool SampleRunner::all_series_converged() const {
  // Tracked at the lowest temperature, which has the slowest dynamics;
  // requiring joint agreement across every ladder slot would turn the
  // per-observable 2-sigma rule into a multiplicity test that rarely passes
  // even on equilibrated data.
  const std::uint64_t s = ensemble_.sweeps_done();
  const auto bins_e = eq_energy_[0].complete_bins(s);
  if (static_cast<int>(bins_e.size()) < schedule_.min_bins) return false;
  if (!last_three_bins_agree(bins_e)) return false;
  return last_three_bins_agree(eq_wilson_[0].complete_bins(s));
}

void SampleRunner::begin_measurement(int bin) {
  eq_bin_ = bin;
  meas_begin_ = 1ULL << bin;
  meas_end_ = 2ULL << bin;
  const int n_t = ladder_.size();
  for (int slot = 0; slot < n_t; ++slot) {
    auto& a = meas_[slot];
    a = MeasAccum{};
    a.block_e.assign(schedule_.n_blocks, 0.0);
    a.block_e2.assign(schedule_.n_blocks, 0.0);
    a.block_w.assign(schedule_.n_blocks, 0.0);
    a.block_ne.assign(schedule_.n_blocks, 0);
    a.block_nw.assign(schedule_.n_blocks, 0);
  }
  phase_ = Phase::Measure;
}

void SampleRunner::record_equilibration_observables() {
  const std::uint64_t s = ensemble_.sweeps_done();
  eq_energy_[0].add(s, ensemble_.energy_per_term(0));
  if (s % std::uint64_t(schedule_.wilson_stride) == 0)
    eq_wilson_[0].add(s, ensemble_.wilson_mean(0, patches_));
}

void SampleRunner::step_one_sweep() {
  ensemble_.sweep_all();
  ensemble_.pt_swap_pass();
  const std::uint64_t s = ensemble_.sweeps_done();

  if (schedule_.audit_interval > 0 &&
      s % std::uint64_t(schedule_.audit_interval) == 0)
    for (int slot = 0; slot < ladder_.size(); ++slot) ensemble_.audit(slot);

  record_equilibration_observables();

  if (phase_ == Phase::Measure) {
    const bool measure_wilson = (s % std::uint64_t(schedule_.wilson_stride)) == 0;
    const std::uint64_t span = meas_end_ - meas_begin_;
    const std::size_t block = std::size_t((s - meas_begin_) *
                                          std::uint64_t(schedule_.n_blocks) / span);
    for (int slot = 0; slot < ladder_.size(); ++slot) {
      auto& a = meas_[slot];
      const double e = ensemble_.energy_of(slot);
      a.sum_e += e;
      a.sum_e2 += e * e;
      ++a.n_e;
      a.block_e[block] += e;
      a.block_e2[block] += e * e;
      ++a.block_ne[block];
      if (measure_wilson) {
        const double w = ensemble_.wilson_mean(slot, patches_);
        a.sum_w += w;
        ++a.n_w;
        a.block_w[block] += w;
        ++a.block_nw[block];
        ++a.w_seen;
        if (a.w_seen % a.w_stride == 0) {
          a.w_kept.push_back(w);
          if (a.w_kept.size() >=
              2 * static_cast<std::size_t>(schedule_.max_wilson_keep)) {
            // halve the kept set deterministically, doubling the stride
            std::vector<double> thinned;
            thinned.reserve(a.w_kept.size() / 2);
            for (std::size_t i = 1; i < a.w_kept.size(); i += 2)
              thinned.push_back(a.w_kept[i]);
            a.w_kept = std::move(thinned);
            a.w_stride *= 2;
          }
        }
      }
    }
    if (s + 1 == meas_end_) phase_ = Phase::Done;
    return;
  }

  // equilibration phase: check at step 2^m - 1, i.e. when bins 0..m-1 close
  if ((s & (s + 1)) == 0) {  // s = 2^m - 1
    const int m = bin_of_step(s + 1);
    if (m >= schedule_.min_bins) {
      if (all_series_converged()) {
        begin_measurement(m);
      } else if (m >= schedule_.max_bin) {
        flagged_ = true;  // sweep cap hit; measure anyway, caller sees the flag
        begin_measurement(m);
      }
    }
  }
}

bool SampleRunner::advance(std::uint64_t n) {
  for (std::uint64_t i = 0; i < n && phase_ != Phase::Done; ++i) step_one_sweep();
  return phase_ == Phase::Done;
}

MeasurementSet SampleRunner::result() const {
  if (phase_ != Phase::Done)
    throw std::logic_error("result() before the run finished");
  MeasurementSet out;
  out.family = model_.family;
  out.L = model_.L;
  out.M = model_.M;
  out.p = sample_.p;
  out.q = sample_.q;
  out.master_seed = sample_.master_seed;
  out.sample_index = sample_.sample_index;
  out.J = couplings_.J;
  out.K = couplings_.K;
  out.equilibrated = !flagged_;
  out.eq_bin = eq_bin_;
  out.total_sweeps = ensemble_.sweeps_done();
  out.swap_acceptance = ensemble_.swap_acceptance();
  for (int slot = 0; slot < ladder_.size(); ++slot) {
    const auto& a = meas_[slot];
    TemperatureMeasurement t;
    t.T = ladder_.temperatures[slot];
    t.n_sweeps = a.n_e;
    t.mean_energy = a.sum_e / double(a.n_e);
    t.mean_energy_sq = a.sum_e2 / double(a.n_e);
    t.mean_wilson = a.n_w ? a.sum_w / double(a.n_w) : 0.0;
    for (int b = 0; b < schedule_.n_blocks; ++b) {
      t.block_energy.push_back(a.block_e[b] / double(a.block_ne[b]));
      t.block_energy_sq.push_back(a.block_e2[b] / double(a.block_ne[b]));
      t.block_wilson.push_back(a.block_nw[b] ? a.block_w[b] / double(a.block_nw[b])
                                             : 0.0);
    }
    t.wilson_samples = a.w_kept;
    out.per_t.push_back(std::move(t));
  }
  return out;
}

std::uint64_t SampleRunner::fingerprint() const {
  std::ostringstream ss;
  ss << family_name(model_.family) << '|' << model_.L << '|' << model_.M << '|'
     << std::bit_cast<std::uint64_t>(sample_.p) << '|'
     << std::bit_cast<std::uint64_t>(sample_.q) << '|' << sample_.master_seed
     << '|' << sample_.sample_index << '|'
     << std::bit_cast<std::uint64_t>(couplings_.J) << '|'
     << std::bit_cast<std::uint64_t>(couplings_.K) << '|' << ladder_.size();
  for (double t : ladder_.temperatures)
    ss << ',' << std::bit_cast<std::uint64_t>(t);
  ss << '|' << schedule_.max_bin << '|' << schedule_.min_bins << '|'
     << schedule_.wilson_stride << '|' << schedule_.n_blocks << '|'
     << schedule_.max_wilson_keep;
  return io::fnv1a64(ss.str());
}

void SampleRunner::save_checkpoint(const std::string& path) const {
  std::ostringstream out(std::ios::binary);
  out.write("GMCKPT01", 8);
  put_u64(out, fingerprint());
  put_u64(out, static_cast<std::uint64_t>(phase_));
  put_u64(out, flagged_ ? 1 : 0);
  put_u64(out, static_cast<std::uint64_t>(std::int64_t(eq_bin_)));
  put_u64(out, meas_begin_);
  put_u64(out, meas_end_);
  ensemble_.serialize(out);
  for (const auto& acc : eq_energy_) {
    put_u64v(out, acc.counts());
    put_f64v(out, acc.sums());
    put_f64v(out, acc.sum_squares());
  }
  for (const auto& acc : eq_wilson_) {
    put_u64v(out, acc.counts());
    put_f64v(out, acc.sums());
    put_f64v(out, acc.sum_squares());
  }
  for (const auto& a : meas_) {
    put_f64(out, a.sum_e);
    put_f64(out, a.sum_e2);
    put_f64(out, a.sum_w);
    put_u64(out, a.n_e);
    put_u64(out, a.n_w);
    put_f64v(out, a.block_e);
    put_f64v(out, a.block_e2);
    put_f64v(out, a.block_w);
    put_u64v(out, a.block_ne);
    put_u64v(out, a.block_nw);
    put_f64v(out, a.w_kept);
    put_u64(out, a.w_seen);
    put_u64(out, a.w_stride);
  }
  io::atomic_write_file(path, out.str());
}

void SampleRunner::load_checkpoint(const std::string& path) {
  std::istringstream in(io::read_file(path), std::ios::binary);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, "GMCKPT01", 8) != 0)
    throw std::runtime_error("not a gaugemc checkpoint: " + path);
  if (get_u64(in) != fingerprint())
    throw std::runtime_error(
        "checkpoint was written for a different run configuration: " + path);
  phase_ = static_cast<Phase>(get_u64(in));
  flagged_ = get_u64(in) != 0;
  eq_bin_ = static_cast<int>(static_cast<std::int64_t>(get_u64(in)));
  meas_begin_ = get_u64(in);
  meas_end_ = get_u64(in);
  ensemble_.deserialize(in);
  for (auto& acc : eq_energy_) {
    auto counts = get_u64v(in);
    auto sums = get_f64v(in);
    auto sum2 = get_f64v(in);
    acc.restore(std::move(counts), std::move(sums), std::move(sum2));
  }
  for (auto& acc : eq_wilson_) {
    auto counts = get_u64v(in);
    auto sums = get_f64v(in);
    auto sum2 = get_f64v(in);
    acc.restore(std::move(counts), std::move(sums), std::move(sum2));
  }
  for (auto& a : meas_) {
    a.sum_e = get_f64(in);
    a.sum_e2 = get_f64(in);
    a.sum_w = get_f64(in);
    a.n_e = get_u64(in);
    a.n_w = get_u64(in);
    a.block_e = get_f64v(in);
    a.block_e2 = get_f64v(in);
    a.block_w = get_f64v(in);
    a.block_ne = get_u64v(in);
    a.block_nw = get_u64v(in);
    a.w_kept = get_f64v(in);
    a.w_seen = get_u64(in);
    a.w_stride = get_u64(in);
  }
}

// ---------------------------------------------------------------------------
// MeasurementSet JSON

std::string MeasurementSet::to_json(int indent) const {
  nlohmann::json j;
  j["format"] = "gaugemc-measurement";
  j["version"] = 1;
  j["family"] = family_name(family);
  j["L"] = L;
  j["M"] = M;
  j["p"] = p;
  j["q"] = q;
  j["master_seed"] = master_seed;
  j["sample_index"] = sample_index;
  j["J"] = J;
  j["K"] = K;
  j["equilibrated"] = equilibrated;
  j["eq_bin"] = eq_bin;
  j["total_sweeps"] = total_sweeps;
  j["swap_acceptance"] = swap_acceptance;
  auto& arr = j["per_t"] = nlohmann::json::array();
  for (const auto& t : per_t)
    arr.push_back(nlohmann::json{{"T", t.T},
                                 {"n_sweeps", t.n_sweeps},
                                 {"mean_energy", t.mean_energy},
                                 {"mean_energy_sq", t.mean_energy_sq},
                                 {"mean_wilson", t.mean_wilson},
                                 {"block_energy", t.block_energy},
                                 {"block_energy_sq", t.block_energy_sq},
                                 {"block_wilson", t.block_wilson},
                                 {"wilson_samples", t.wilson_samples}});
  return indent >= 0 ? j.dump(indent) : j.dump();
}

MeasurementSet MeasurementSet::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.at("format") != "gaugemc-measurement" || j.at("version") != 1)
    throw std::runtime_error("not a gaugemc measurement file");
  MeasurementSet m;
  m.family = family_from_name(j.at("family").get<std::string>());
  m.L = j.at("L").get<int>();
  m.M = j.at("M").get<int>();
  m.p = j.at("p").get<double>();
  m.q = j.at("q").get<double>();
  m.master_seed = j.at("master_seed").get<std::uint64_t>();
  m.sample_index = j.at("sample_index").get<std::uint64_t>();
  m.J = j.at("J").get<double>();
  m.K = j.at("K").get<double>();
  m.equilibrated = j.at("equilibrated").get<bool>();
  m.eq_bin = j.at("eq_bin").get<int>();
  m.total_sweeps = j.at("total_sweeps").get<std::uint64_t>();
  m.swap_acceptance = j.at("swap_acceptance").get<std::vector<double>>();
  for (const auto& t : j.at("per_t")) {
    TemperatureMeasurement tm;
    tm.T = t.at("T").get<double>();
    tm.n_sweeps = t.at("n_sweeps").get<std::uint64_t>();
    tm.mean_energy = t.at("mean_energy").get<double>();
    tm.mean_energy_sq = t.at("mean_energy_sq").get<double>();
    tm.mean_wilson = t.at("mean_wilson").get<double>();
    tm.block_energy = t.at("block_energy").get<std::vector<double>>();
    tm.block_energy_sq = t.at("block_energy_sq").get<std::vector<double>>();
    tm.block_wilson = t.at("block_wilson").get<std::vector<double>>();
    tm.wilson_samples = t.at("wilson_samples").get<std::vector<double>>();
    m.per_t.push_back(std::move(tm));
  }
  return m;
}

MeasurementSet run_sample(const GaugeModel& model, const DisorderSample& sample,
                          const Couplings& couplings,
                          const TemperatureLadder& ladder,
                          const SweepSchedule& schedule,
                          const std::string& checkpoint_path,
                          std::uint64_t checkpoint_every) {
  SampleRunner runner(model, sample, couplings, ladder, schedule);
  if (!checkpoint_path.empty() &&
      std::ifstream(checkpoint_path, std::ios::binary).good())
    runner.load_checkpoint(checkpoint_path);
  const std::uint64_t chunk =
      (checkpoint_every && !checkpoint_path.empty())
          ? checkpoint_every
          : std::numeric_limits<std::uint64_t>::max();
  while (!runner.advance(chunk))
    if (!checkpoint_path.empty()) runner.save_checkpoint(checkpoint_path);
  return runner.result();
}

}  // namespace gaugemc
