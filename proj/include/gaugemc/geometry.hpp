// Interaction graphs of the two mapped lattice gauge theories.
//
// Both code families map to a classical spin model on a stack of M layers:
// one Ising spin per local equivalence, one coupling term per qubit and per
// stabilizer measurement.  A term is the product of the spins of all
// equivalences that affect it, dressed by a quenched sign.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gaugemc {

enum class Family : std::uint8_t { Toric, Color };
enum class TermKind : std::uint8_t { Qubit, Measurement };

const char* family_name(Family f);
Family family_from_name(std::string_view name);

// Lattice coordinates, kept for debugging and the exported graph.
// The meaning of `orientation` is family-specific; see geometry.cpp.
struct LatticeCoords {
  std::int16_t x = 0, y = 0, t = 0, orientation = 0;
};

struct CouplingTerm {
  TermKind kind;
  std::vector<std::int32_t> spins;
  LatticeCoords coords;
};

struct GaugeModel {
  Family family = Family::Toric;
  int L = 0;  // lattice cells per spatial dimension
  int M = 0;  // time slices

  std::int32_t num_spins = 0;
  std::int32_t num_qubit_terms = 0;
  std::int32_t num_meas_terms = 0;

  // Qubit terms first (indices [0, num_qubit_terms)), then measurement terms.
  std::vector<CouplingTerm> terms;
  std::vector<std::vector<std::int32_t>> gauge_generators;
  std::vector<LatticeCoords> spin_coords;

  // CSR incidence map: spin -> indices of terms containing it.
  std::vector<std::int32_t> incidence_offset;  // num_spins + 1 entries
  std::vector<std::int32_t> incidence_term;

  std::int32_t num_terms() const {
    return static_cast<std::int32_t>(terms.size());
  }
  bool is_qubit_term(std::int32_t term) const {
    return term < num_qubit_terms;
  }
  int max_spin_degree() const;
};

// Build the mapped model of the fault-tolerant toric code: spins on the faces
// of an L x L x M cubic lattice, qubit terms on spatial edges, measurement
// terms on time-like edges, periodic in all three directions.
GaugeModel build_toric(int L, int M);

// Build the mapped model of the fault-tolerant color code on a honeycomb
// layer with L x L hexagonal plaquettes and M time slices, periodic.
GaugeModel build_color(int L, int M);

// Serialize the interaction graph as JSON for cross-implementation diffing.
std::string export_graph_json(const GaugeModel& model, int indent = -1);

}  // namespace gaugemc
