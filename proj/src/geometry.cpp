// Construction of the toric and color interaction graphs.
//
// Index conventions (fixed; disorder files depend on them):
//   * All lattice objects are indexed row-major over (t, y, x, orientation).
//   * Spins:  index = ((t*L + y)*L + x)*3 + o.
//   * Terms:  qubit terms first, ((t*L + y)*L + x)*2 + o,
//             then measurement terms N_Q + ((t*L + y)*L + x).
//
// Toric family ("o" = orientation):
//   spin  o=0: xy-face (horizontal plaquette, sigma_h) of cell (x,y,t)
//   spin  o=1: xt-face (vertical plaquette, sigma_v)
//   spin  o=2: yt-face (vertical plaquette, sigma_v)
//   qubit term o=0: x-edge at (x,y,t), o=1: y-edge; measurement term: t-edge.
//   An edge couples the 4 faces of the cubic lattice that contain it.
//   Gauge generator: the 6 faces of the elementary cube at (x,y,t).
//
// Color family:
//   The honeycomb layer is the dual of a triangular lattice of hexagon
//   centers H(x,y).  Each cell (x,y) owns two vertices (qubits): A = the
//   up-triangle site, B = the down-triangle site.
//     hexagon H(x,y) vertices: A(x,y) A(x-1,y) A(x,y-1) B(x-1,y-1) B(x-1,y) B(x,y-1)
//     A(x,y) lies on hexagons H(x,y), H(x+1,y), H(x,y+1)
//     B(x,y) lies on hexagons H(x+1,y), H(x,y+1), H(x+1,y+1)
//   spin  o=0: sigma_h of (plaquette H(x,y), slice t)
//   spin  o=1: sigma_v of (vertex A(x,y), gap t);  o=2: same for B(x,y).
//   Gap g sits between slices g and g+1 (mod M).
//   qubit term (vertex v, slice t): 3 sigma_h of v's plaquettes at slice t
//     plus sigma_v(v, gap t-1) and sigma_v(v, gap t).
//   measurement term (plaquette P, gap g): the 6 sigma_v of P's vertices.
//   Gauge generator (P, g): sigma_h(P, slice g), sigma_h(P, slice g+1), and
//     the 6 sigma_v of P's vertices at gap g.

#include "gaugemc/geometry.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

namespace gaugemc {

namespace {

int wrap(int v, int n) { return ((v % n) + n) % n; }

struct Indexer {
  int L, M, per_cell;
  std::int32_t operator()(int x, int y, int t, int o) const {
    x = wrap(x, L);
    y = wrap(y, L);
    t = wrap(t, M);
    return static_cast<std::int32_t>(((t * L + y) * L + x) * per_cell + o);
  }
};

void check_distinct(const std::vector<std::int32_t>& ids, const char* what) {
  std::set<std::int32_t> seen(ids.begin(), ids.end());
  if (seen.size() != ids.size())
    throw std::invalid_argument(std::string("degenerate lattice size: ") +
                                what + " references a spin twice");
}

void finalize(GaugeModel& m) {
  // incidence map spin -> terms
  std::vector<std::int32_t> degree(m.num_spins, 0);
  for (const auto& term : m.terms) {
    check_distinct(term.spins, term.kind == TermKind::Qubit
                                   ? "a qubit term"
                                   : "a measurement term");
    for (auto s : term.spins) {
      if (s < 0 || s >= m.num_spins)
        throw std::logic_error("term references out-of-range spin");
      ++degree[s];
    }
  }
  m.incidence_offset.assign(m.num_spins + 1, 0);
  for (std::int32_t s = 0; s < m.num_spins; ++s)
    m.incidence_offset[s + 1] = m.incidence_offset[s] + degree[s];
  m.incidence_term.resize(m.incidence_offset.back());
  std::vector<std::int32_t> cursor(m.incidence_offset.begin(),
                                   m.incidence_offset.end() - 1);
  for (std::int32_t t = 0; t < m.num_terms(); ++t)
    for (auto s : m.terms[t].spins) m.incidence_term[cursor[s]++] = t;

  for (std::int32_t s = 0; s < m.num_spins; ++s)
    if (degree[s] == 0) throw std::logic_error("isolated spin in model");

  // Every gauge generator must flip an even number of spins in every term;
  // cheap via the incidence map, so check exhaustively at construction.
  std::vector<int> hits(m.num_terms(), 0);
  for (const auto& gen : m.gauge_generators) {
    check_distinct(gen, "a gauge generator");
    std::vector<std::int32_t> touched;
    for (auto s : gen)
      for (std::int32_t k = m.incidence_offset[s]; k < m.incidence_offset[s + 1];
           ++k) {
        if (hits[m.incidence_term[k]] == 0) touched.push_back(m.incidence_term[k]);
        ++hits[m.incidence_term[k]];
      }
    for (auto t : touched) {
      if (hits[t] % 2 != 0)
        throw std::logic_error("gauge generator does not preserve a term");
      hits[t] = 0;
    }
  }
}

}  // namespace

const char* family_name(Family f) {
  return f == Family::Toric ? "toric" : "color";
}

Family family_from_name(std::string_view name) {
  if (name == "toric") return Family::Toric;
  if (name == "color") return Family::Color;
  throw std::invalid_argument("unknown code family: " + std::string(name));
}

int GaugeModel::max_spin_degree() const {
  int best = 0;
  for (std::int32_t s = 0; s < num_spins; ++s)
    best = std::max(best,
                    static_cast<int>(incidence_offset[s + 1] - incidence_offset[s]));
  return best;
}

GaugeModel build_toric(int L, int M) {
  if (L < 2 || M < 2)
    throw std::invalid_argument("toric model requires L >= 2 and M >= 2");

  GaugeModel m;
  m.family = Family::Toric;
  m.L = L;
  m.M = M;
  m.num_spins = 3 * L * L * M;
  m.num_qubit_terms = 2 * L * L * M;
  m.num_meas_terms = L * L * M;

  const Indexer spin{L, M, 3};
  constexpr int kXY = 0, kXT = 1, kYT = 2;

  m.spin_coords.resize(m.num_spins);
  for (int t = 0; t < M; ++t)
    for (int y = 0; y < L; ++y)
      for (int x = 0; x < L; ++x)
        for (int o = 0; o < 3; ++o)
          m.spin_coords[spin(x, y, t, o)] =
              LatticeCoords{static_cast<std::int16_t>(x),
                            static_cast<std::int16_t>(y),
                            static_cast<std::int16_t>(t),
                            static_cast<std::int16_t>(o)};

  m.terms.reserve(m.num_qubit_terms + m.num_meas_terms);
  // qubit terms: one per spatial edge, coupling the 4 incident faces
  for (int t = 0; t < M; ++t)
    for (int y = 0; y < L; ++y)
      for (int x = 0; x < L; ++x) {
        // x-edge: 2 horizontal faces (y, y-1) + 2 vertical xt faces (t, t-1)
        m.terms.push_back(CouplingTerm{
            TermKind::Qubit,
            {spin(x, y, t, kXY), spin(x, y - 1, t, kXY), spin(x, y, t, kXT),
             spin(x, y, t - 1, kXT)},
            {static_cast<std::int16_t>(x), static_cast<std::int16_t>(y),
             static_cast<std::int16_t>(t), 0}});
        // y-edge
        m.terms.push_back(CouplingTerm{
            TermKind::Qubit,
            {spin(x, y, t, kXY), spin(x - 1, y, t, kXY), spin(x, y, t, kYT),
             spin(x, y, t - 1, kYT)},
            {static_cast<std::int16_t>(x), static_cast<std::int16_t>(y),
             static_cast<std::int16_t>(t), 1}});
      }
  // measurement terms: one per time-like edge, coupling the 4 vertical faces
  for (int t = 0; t < M; ++t)
    for (int y = 0; y < L; ++y)
      for (int x = 0; x < L; ++x)
        m.terms.push_back(CouplingTerm{
            TermKind::Measurement,
            {spin(x, y, t, kXT), spin(x - 1, y, t, kXT), spin(x, y, t, kYT),
             spin(x, y - 1, t, kYT)},
            {static_cast<std::int16_t>(x), static_cast<std::int16_t>(y),
             static_cast<std::int16_t>(t), 2}});

  // gauge generators: the 6 faces of every elementary cube
  m.gauge_generators.reserve(L * L * M);
  for (int t = 0; t < M; ++t)
    for (int y = 0; y < L; ++y)
      for (int x = 0; x < L; ++x)
        m.gauge_generators.push_back(
            {spin(x, y, t, kXY), spin(x, y, t + 1, kXY), spin(x, y, t, kXT),
             spin(x, y + 1, t, kXT), spin(x, y, t, kYT), spin(x + 1, y, t, kYT)});

  finalize(m);
  return m;
}

GaugeModel build_color(int L, int M) {
  if (L < 2 || M < 2)
    throw std::invalid_argument("color model requires L >= 2 and M >= 2");

  GaugeModel m;
  m.family = Family::Color;
  m.L = L;
  m.M = M;
  m.num_spins = 3 * L * L * M;
  m.num_qubit_terms = 2 * L * L * M;
  m.num_meas_terms = L * L * M;

  const Indexer spin{L, M, 3};
  constexpr int kH = 0;  // sigma_h; o=1 -> sigma_v of A vertex, o=2 -> B vertex

  m.spin_coords.resize(m.num_spins);
  for (int t = 0; t < M; ++t)
    for (int y = 0; y < L; ++y)
      for (int x = 0; x < L; ++x)
        for (int o = 0; o < 3; ++o)
          m.spin_coords[spin(x, y, t, o)] =
              LatticeCoords{static_cast<std::int16_t>(x),
                            static_cast<std::int16_t>(y),
                            static_cast<std::int16_t>(t),
                            static_cast<std::int16_t>(o)};

  // vertex -> its three plaquettes (as cell offsets)
  //   A(x,y): H(x,y), H(x+1,y), H(x,y+1)
  //   B(x,y): H(x+1,y), H(x,y+1), H(x+1,y+1)
  const int plaq_of_vertex[2][3][2] = {{{0, 0}, {1, 0}, {0, 1}},
                                       {{1, 0}, {0, 1}, {1, 1}}};
  // hexagon H(x,y) -> its six vertices as (sublattice, dx, dy)
  const int verts_of_plaq[6][3] = {{0, 0, 0},  {0, -1, 0}, {0, 0, -1},
                                   {1, -1, -1}, {1, -1, 0}, {1, 0, -1}};

  m.terms.reserve(m.num_qubit_terms + m.num_meas_terms);
  // qubit terms: one per (vertex, slice)
  for (int t = 0; t < M; ++t)
    for (int y = 0; y < L; ++y)
      for (int x = 0; x < L; ++x)
        for (int s = 0; s < 2; ++s) {
          std::vector<std::int32_t> spins;
          spins.reserve(5);
          for (const auto& d : plaq_of_vertex[s])
            spins.push_back(spin(x + d[0], y + d[1], t, kH));
          spins.push_back(spin(x, y, t - 1, 1 + s));  // gap below slice t
          spins.push_back(spin(x, y, t, 1 + s));      // gap above slice t
          m.terms.push_back(CouplingTerm{
              TermKind::Qubit, std::move(spins),
              {static_cast<std::int16_t>(x), static_cast<std::int16_t>(y),
               static_cast<std::int16_t>(t), static_cast<std::int16_t>(s)}});
        }
  // measurement terms: one per (plaquette, gap)
  for (int g = 0; g < M; ++g)
    for (int y = 0; y < L; ++y)
      for (int x = 0; x < L; ++x) {
        std::vector<std::int32_t> spins;
        spins.reserve(6);
        for (const auto& v : verts_of_plaq)
          spins.push_back(spin(x + v[1], y + v[2], g, 1 + v[0]));
        m.terms.push_back(CouplingTerm{
            TermKind::Measurement, std::move(spins),
            {static_cast<std::int16_t>(x), static_cast<std::int16_t>(y),
             static_cast<std::int16_t>(g), 2}});
      }

  // gauge generators: one per (plaquette, gap)
  m.gauge_generators.reserve(L * L * M);
  for (int g = 0; g < M; ++g)
    for (int y = 0; y < L; ++y)
      for (int x = 0; x < L; ++x) {
        std::vector<std::int32_t> gen;
        gen.reserve(8);
        gen.push_back(spin(x, y, g, kH));      // slice below the gap
        gen.push_back(spin(x, y, g + 1, kH));  // slice above
        for (const auto& v : verts_of_plaq)
          gen.push_back(spin(x + v[1], y + v[2], g, 1 + v[0]));
        m.gauge_generators.push_back(std::move(gen));
      }

  finalize(m);
  return m;
}

std::string export_graph_json(const GaugeModel& m, int indent) {
  nlohmann::json j;
  j["format"] = "gaugemc-graph";
  j["version"] = 1;
  j["family"] = family_name(m.family);
  j["L"] = m.L;
  j["M"] = m.M;
  j["num_spins"] = m.num_spins;
  j["num_qubit_terms"] = m.num_qubit_terms;
  j["num_measurement_terms"] = m.num_meas_terms;
  j["indexing"] = "row-major over (t, y, x, orientation); qubit terms first";

  auto coords_json = [](const LatticeCoords& c) {
    return nlohmann::json{{"x", c.x}, {"y", c.y}, {"t", c.t}, {"o", c.orientation}};
  };
  auto& spins = j["spins"] = nlohmann::json::array();
  for (const auto& c : m.spin_coords) spins.push_back(coords_json(c));
  auto& terms = j["terms"] = nlohmann::json::array();
  for (const auto& term : m.terms)
    terms.push_back(nlohmann::json{
        {"kind", term.kind == TermKind::Qubit ? "qubit" : "measurement"},
        {"spins", term.spins},
        {"coords", coords_json(term.coords)}});
  j["generators"] = m.gauge_generators;
  return indent >= 0 ? j.dump(indent) : j.dump();
}

}  // namespace gaugemc
