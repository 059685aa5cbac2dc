#include "gaugemc/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gaugemc {

void EnumerationHistogram::merge(const EnumerationHistogram& other) {
  if (nq != other.nq || nm != other.nm)
    throw std::invalid_argument("histogram shape mismatch");
  for (std::size_t i = 0; i < count.size(); ++i) {
    count[i] += other.count[i];
    wilson_sum[i] += other.wilson_sum[i];
  }
}

EnumerationHistogram enumerate_histogram(const GaugeModel& model,
                                         const DisorderSample& sample,
                                         const WilsonPatch& patch,
                                         int prefix_bits, std::uint32_t prefix) {
  const int n = model.num_spins;
  if (n > kEnumerateMaxSpins)
    throw std::invalid_argument("enumerate: instance exceeds the spin cap");
  if (prefix_bits < 0 || prefix_bits > n)
    throw std::invalid_argument("enumerate: bad prefix");

  EnumerationHistogram hist;
  hist.nq = model.num_qubit_terms;
  hist.nm = model.num_meas_terms;
  hist.count.assign(std::size_t(hist.nq + 1) * (hist.nm + 1), 0);
  hist.wilson_sum.assign(hist.count.size(), 0);

  // Parity of patch membership per spin: flipping a spin with odd membership
  // flips the patch product.
  std::vector<std::uint8_t> patch_parity(n, 0);
  for (auto t : patch.terms)
    for (auto s : model.terms[t].spins) patch_parity[s] ^= 1;

  SpinConfiguration config = all_plus_config(model);
  const int free_bits = n - prefix_bits;
  for (int i = 0; i < prefix_bits; ++i)
    if (prefix & (1u << i)) config.spins[free_bits + i] = -1;

  std::vector<std::int8_t> term_sign_now(model.num_terms());
  std::int64_t uq = 0, um = 0;
  for (std::int32_t t = 0; t < model.num_terms(); ++t) {
    const int sign = term_sign(model, sample, config, t);
    term_sign_now[t] = static_cast<std::int8_t>(sign);
    if (sign < 0) (model.is_qubit_term(t) ? uq : um)++;
  }
  int w = 1;
  for (auto t : patch.terms) w *= term_sign_now[t];

  const auto record = [&] {
    const std::size_t cell = std::size_t(uq) * (hist.nm + 1) + std::size_t(um);
    ++hist.count[cell];
    hist.wilson_sum[cell] += w;
  };
  record();

  // Gray-code walk over the free spins: step k flips spin ctz(k).
  const std::uint64_t total = 1ULL << free_bits;
  for (std::uint64_t k = 1; k < total; ++k) {
    const int s = std::countr_zero(k);
    config.spins[s] = -config.spins[s];
    for (std::int32_t idx = model.incidence_offset[s];
         idx < model.incidence_offset[s + 1]; ++idx) {
      const std::int32_t t = model.incidence_term[idx];
      const std::int8_t sign = term_sign_now[t];
      term_sign_now[t] = static_cast<std::int8_t>(-sign);
      if (model.is_qubit_term(t))
        uq += sign;
      else
        um += sign;
    }
    if (patch_parity[s]) w = -w;
    record();
  }
  return hist;
}

ExactResult averages_from_histogram(const GaugeModel& model,
                                    const EnumerationHistogram& hist,
                                    const Couplings& couplings,
                                    const std::vector<double>& temperatures) {
  const std::int32_t nq = hist.nq, nm = hist.nm;
  const double n_terms = nq + nm;
  ExactResult r;
  r.temperatures = temperatures;
  for (double T : temperatures) {
    if (!(T > 0)) throw std::invalid_argument("temperature must be positive");
    const double beta = 1.0 / T;

    // log weight of a histogram cell, including its state count
    double max_lw = -std::numeric_limits<double>::infinity();
    for (std::int32_t a = 0; a <= nq; ++a)
      for (std::int32_t b = 0; b <= nm; ++b) {
        const std::size_t cell = std::size_t(a) * (nm + 1) + b;
        if (hist.count[cell] == 0) continue;
        const double e = -couplings.J * (nq - 2.0 * a) - couplings.K * (nm - 2.0 * b);
        max_lw = std::max(max_lw, -beta * e + std::log(double(hist.count[cell])));
      }

    double z = 0.0, se = 0.0, se2 = 0.0, sw = 0.0;
    for (std::int32_t a = 0; a <= nq; ++a)
      for (std::int32_t b = 0; b <= nm; ++b) {
        const std::size_t cell = std::size_t(a) * (nm + 1) + b;
        if (hist.count[cell] == 0) continue;
        const double e = -couplings.J * (nq - 2.0 * a) - couplings.K * (nm - 2.0 * b);
        const double lw = -beta * e - max_lw;
        const double wgt = std::exp(lw);
        const double cw = double(hist.count[cell]) * wgt;
        z += cw;
        se += cw * e;
        se2 += cw * e * e;
        sw += double(hist.wilson_sum[cell]) * wgt;
      }

    const double mean_e = se / z;
    const double mean_e2 = se2 / z;
    r.log_z.push_back(std::log(z) + max_lw);
    r.mean_energy.push_back(mean_e);
    r.mean_energy2.push_back(mean_e2);
    r.specific_heat.push_back(beta * beta * (mean_e2 - mean_e * mean_e) / n_terms);
    r.mean_wilson.push_back(sw / z);
  }
  return r;
}

ExactResult enumerate_exact(const GaugeModel& model,
                            const DisorderSample& sample,
                            const Couplings& couplings,
                            const std::vector<double>& temperatures,
                            const WilsonPatch& patch) {
  return averages_from_histogram(
      model, enumerate_histogram(model, sample, patch), couplings, temperatures);
}

GaugeOrbitReport gauge_orbit_check(const GaugeModel& model) {
  GaugeOrbitReport report;
  report.num_generators = static_cast<int>(model.gauge_generators.size());

  // even-overlap check via the incidence map
  std::vector<int> hits(model.num_terms(), 0);
  for (int g = 0; g < report.num_generators; ++g) {
    std::vector<std::int32_t> touched;
    for (auto s : model.gauge_generators[g])
      for (std::int32_t k = model.incidence_offset[s];
           k < model.incidence_offset[s + 1]; ++k) {
        const std::int32_t t = model.incidence_term[k];
        if (hits[t] == 0) touched.push_back(t);
        ++hits[t];
      }
    bool ok = true;
    for (auto t : touched) {
      if (hits[t] % 2 != 0) ok = false;
      hits[t] = 0;
    }
    if (!ok) report.violations.push_back(g);
  }
  report.all_preserve = report.violations.empty();

  // rank of the generator set over GF(2), spins as bit positions
  const std::size_t words = (std::size_t(model.num_spins) + 63) / 64;
  std::vector<std::vector<std::uint64_t>> rows;
  rows.reserve(model.gauge_generators.size());
  for (const auto& gen : model.gauge_generators) {
    std::vector<std::uint64_t> row(words, 0);
    for (auto s : gen) row[std::size_t(s) / 64] ^= 1ULL << (s % 64);
    rows.push_back(std::move(row));
  }
  int rank = 0;
  for (std::size_t col = 0; col < std::size_t(model.num_spins); ++col) {
    const std::size_t w = col / 64;
    const std::uint64_t bit = 1ULL << (col % 64);
    std::size_t pivot = rows.size();
    for (std::size_t r = rank; r < rows.size(); ++r)
      if (rows[r][w] & bit) {
        pivot = r;
        break;
      }
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != std::size_t(rank) && (rows[r][w] & bit))
        for (std::size_t k = 0; k < words; ++k) rows[r][k] ^= rows[rank][k];
    ++rank;
    if (rank == static_cast<int>(rows.size())) break;
  }
  report.rank = rank;
  return report;
}

}  // namespace gaugemc
