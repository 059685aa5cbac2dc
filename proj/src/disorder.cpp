#include "gaugemc/disorder.hpp"

#include <stdexcept>

#include "gaugemc/io_util.hpp"
#include "gaugemc/rng.hpp"
#include "json.hpp"

namespace gaugemc {

namespace {

void check_rates(double p, double q) {
  if (!(p >= 0.0 && p < 0.5))
    throw std::invalid_argument("bit-flip rate p must satisfy 0 <= p < 0.5");
  if (!(q >= 0.0 && q < 0.5))
    throw std::invalid_argument("measurement rate q must satisfy 0 <= q < 0.5");
}

std::int8_t draw_tau(double rate, std::uint64_t master_seed,
                     std::uint64_t sample_index, std::int32_t term) {
  const std::uint64_t bits = rng::derive_key(
      {master_seed, sample_index, rng::kTagTau,
       static_cast<std::uint64_t>(term)});
  return rng::to_unit(bits) < rate ? -1 : 1;
}

}  // namespace

DisorderSample generate_disorder(const GaugeModel& model, double p, double q,
                                 std::uint64_t master_seed,
                                 std::uint64_t sample_index) {
  check_rates(p, q);
  DisorderSample s;
  s.family = model.family;
  s.L = model.L;
  s.M = model.M;
  s.p = p;
  s.q = q;
  s.master_seed = master_seed;
  s.sample_index = sample_index;
  s.num_qubit_terms = model.num_qubit_terms;
  s.tau.resize(model.terms.size());
  for (std::int32_t t = 0; t < model.num_terms(); ++t)
    s.tau[t] = draw_tau(model.is_qubit_term(t) ? p : q, master_seed,
                        sample_index, t);
  return s;
}

std::int8_t regenerate_tau(const GaugeModel& model, double p, double q,
                           std::uint64_t master_seed,
                           std::uint64_t sample_index, std::int32_t term) {
  check_rates(p, q);
  if (term < 0 || term >= model.num_terms())
    throw std::out_of_range("term index out of range");
  return draw_tau(model.is_qubit_term(term) ? p : q, master_seed, sample_index,
                  term);
}

std::pair<double, double> empirical_rates(const DisorderSample& sample) {
  std::int64_t flipped_q = 0, flipped_m = 0;
  for (std::int32_t t = 0; t < sample.num_terms(); ++t) {
    if (sample.tau[t] < 0) {
      if (t < sample.num_qubit_terms)
        ++flipped_q;
      else
        ++flipped_m;
    }
  }
  const std::int32_t n_m = sample.num_terms() - sample.num_qubit_terms;
  return {sample.num_qubit_terms ? double(flipped_q) / sample.num_qubit_terms : 0.0,
          n_m ? double(flipped_m) / n_m : 0.0};
}

void save_disorder(const DisorderSample& s, const std::string& path) {
  nlohmann::json j;
  j["format"] = "gaugemc-disorder";
  j["version"] = 1;
  j["family"] = family_name(s.family);
  j["L"] = s.L;
  j["M"] = s.M;
  j["p"] = s.p;
  j["q"] = s.q;
  j["master_seed"] = s.master_seed;
  j["sample_index"] = s.sample_index;
  j["num_terms"] = s.num_terms();
  j["num_qubit_terms"] = s.num_qubit_terms;
  j["tau_packing"] = "bit per term, LSB first, set bit = -1, base64";
  j["tau"] = io::base64_encode(io::pack_signs(s.tau));
  io::atomic_write_file(path, j.dump(2) + "\n");
}

DisorderSample load_disorder(const std::string& path) {
  const auto j = nlohmann::json::parse(io::read_file(path));
  if (j.at("format") != "gaugemc-disorder" || j.at("version") != 1)
    throw std::runtime_error("not a gaugemc disorder file: " + path);
  DisorderSample s;
  s.family = family_from_name(j.at("family").get<std::string>());
  s.L = j.at("L").get<int>();
  s.M = j.at("M").get<int>();
  s.p = j.at("p").get<double>();
  s.q = j.at("q").get<double>();
  s.master_seed = j.at("master_seed").get<std::uint64_t>();
  s.sample_index = j.at("sample_index").get<std::uint64_t>();
  s.num_qubit_terms = j.at("num_qubit_terms").get<std::int32_t>();
  const auto count = j.at("num_terms").get<std::size_t>();
  s.tau = io::unpack_signs(io::base64_decode(j.at("tau").get<std::string>()),
                           count);
  return s;
}

}  // namespace gaugemc
