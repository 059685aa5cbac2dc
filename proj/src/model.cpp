#include "gaugemc/model.hpp"

#include <stdexcept>

namespace gaugemc {

namespace {

void check_shapes(const GaugeModel& model, const DisorderSample& sample,
                  const SpinConfiguration& config) {
  if (sample.num_terms() != model.num_terms())
    throw std::invalid_argument("disorder sample does not match model terms");
  if (static_cast<std::int32_t>(config.spins.size()) != model.num_spins)
    throw std::invalid_argument("spin configuration does not match model");
}

}  // namespace

SpinConfiguration all_plus_config(const GaugeModel& model) {
  return SpinConfiguration{
      std::vector<std::int8_t>(static_cast<std::size_t>(model.num_spins), 1)};
}

SpinConfiguration random_config(const GaugeModel& model,
                                rng::Xoshiro256pp& gen) {
  SpinConfiguration c;
  c.spins.resize(static_cast<std::size_t>(model.num_spins));
  for (auto& s : c.spins) s = (gen.next() & 1) ? 1 : -1;
  return c;
}

int term_sign(const GaugeModel& model, const DisorderSample& sample,
              const SpinConfiguration& config, std::int32_t term) {
  int sign = sample.tau[term];
  for (auto s : model.terms[term].spins) sign *= config.spins[s];
  return sign;
}

UnsatCounts count_unsatisfied(const GaugeModel& model,
                              const DisorderSample& sample,
                              const SpinConfiguration& config) {
  check_shapes(model, sample, config);
  UnsatCounts u;
  for (std::int32_t t = 0; t < model.num_terms(); ++t) {
    if (term_sign(model, sample, config, t) < 0) {
      if (model.is_qubit_term(t))
        ++u.qubit;
      else
        ++u.meas;
    }
  }
  return u;
}

double energy_from_counts(const GaugeModel& model, const Couplings& c,
                          const UnsatCounts& u) {
  return -c.J * static_cast<double>(model.num_qubit_terms - 2 * u.qubit) -
         c.K * static_cast<double>(model.num_meas_terms - 2 * u.meas);
}

double energy(const GaugeModel& model, const DisorderSample& sample,
              const Couplings& c, const SpinConfiguration& config) {
  return energy_from_counts(model, c, count_unsatisfied(model, sample, config));
}

IncidentSigns incident_signs(const GaugeModel& model,
                             const DisorderSample& sample,
                             const SpinConfiguration& config,
                             std::int32_t spin) {
  IncidentSigns d;
  for (std::int32_t k = model.incidence_offset[spin];
       k < model.incidence_offset[spin + 1]; ++k) {
    const std::int32_t t = model.incidence_term[k];
    const int sign = term_sign(model, sample, config, t);
    if (model.is_qubit_term(t))
      d.qubit += sign;
    else
      d.meas += sign;
  }
  return d;
}

double delta_energy(const GaugeModel& model, const DisorderSample& sample,
                    const Couplings& c, const SpinConfiguration& config,
                    std::int32_t spin) {
  if (spin < 0 || spin >= model.num_spins)
    throw std::out_of_range("spin index out of range");
  const IncidentSigns d = incident_signs(model, sample, config, spin);
  return 2.0 * (c.J * d.qubit + c.K * d.meas);
}

void apply_gauge(SpinConfiguration& config,
                 const std::vector<std::int32_t>& generator) {
  for (auto s : generator) config.spins[s] = -config.spins[s];
}

WilsonPatch make_wilson_patch(const GaugeModel& model, int ell, int x0, int y0,
                              int t0) {
  if (ell < 1 || ell > model.L)
    throw std::invalid_argument("wilson patch size must satisfy 1 <= ell <= L");
  if (t0 < 0 || t0 >= model.M)
    throw std::invalid_argument("wilson patch slice outside the lattice");
  const int L = model.L;
  auto wrap = [L](int v) { return ((v % L) + L) % L; };

  WilsonPatch patch;
  patch.ell = ell;
  patch.origin = LatticeCoords{static_cast<std::int16_t>(x0),
                               static_cast<std::int16_t>(y0),
                               static_cast<std::int16_t>(t0), 0};
  for (int j = 0; j < ell; ++j)
    for (int i = 0; i < ell; ++i) {
      const int x = wrap(x0 + i), y = wrap(y0 + j);
      const std::int32_t cell = ((t0 * L + y) * L + x) * 2;
      if (model.family == Family::Toric) {
        patch.terms.push_back(cell);  // x-oriented edge term
      } else {
        patch.terms.push_back(cell);      // A-vertex qubit term
        patch.terms.push_back(cell + 1);  // B-vertex qubit term
      }
    }
  return patch;
}

std::vector<WilsonPatch> default_wilson_patches(const GaugeModel& model) {
  const int ell = std::max(1, model.L / 2);
  std::vector<int> origins{0};
  if (ell < model.L) origins.push_back(ell);
  std::vector<WilsonPatch> patches;
  for (int t = 0; t < model.M; ++t)
    for (int y0 : origins)
      for (int x0 : origins)
        patches.push_back(make_wilson_patch(model, ell, x0, y0, t));
  return patches;
}

int wilson_loop(const GaugeModel& model, const DisorderSample& sample,
                const SpinConfiguration& config, const WilsonPatch& patch) {
  int w = 1;
  for (auto t : patch.terms) w *= term_sign(model, sample, config, t);
  return w;
}

}  // namespace gaugemc
