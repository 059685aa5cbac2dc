#include <stdexcept>
#include <set>

#include "doctest.h"
#include "gaugemc/geometry.hpp"
#include "json.hpp"

using namespace gaugemc;

namespace {

// |generator ∩ term| for every (generator, term) pair must be even
bool generators_preserve_all_terms(const GaugeModel& m) {
  for (const auto& gen : m.gauge_generators) {
    const std::set<std::int32_t> gs(gen.begin(), gen.end());
    for (const auto& term : m.terms) {
      int overlap = 0;
      for (auto s : term.spins) overlap += gs.count(s);
      if (overlap % 2 != 0) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("toric counts: L=2 M=2") {
  const GaugeModel m = build_toric(2, 2);
  CHECK(m.num_spins == 24);
  CHECK(m.num_qubit_terms == 16);
  CHECK(m.num_meas_terms == 8);
  CHECK(m.gauge_generators.size() == 8);
  for (const auto& g : m.gauge_generators) CHECK(g.size() == 6);
}

TEST_CASE("toric counts: L=6 M=6 (reference-scale size)") {
  const GaugeModel m = build_toric(6, 6);
  CHECK(m.num_spins == 648);
  CHECK(m.num_qubit_terms == 432);
  CHECK(m.num_meas_terms == 216);
}

TEST_CASE("every toric edge term references 4 distinct incident faces") {
  const GaugeModel m = build_toric(4, 3);
  for (const auto& term : m.terms) {
    CHECK(term.spins.size() == 4);
    CHECK(std::set<std::int32_t>(term.spins.begin(), term.spins.end()).size() ==
          4);
    if (term.kind == TermKind::Qubit) {
      // 2 horizontal + 2 vertical faces
      int horizontal = 0;
      for (auto s : term.spins)
        if (m.spin_coords[s].orientation == 0) ++horizontal;
      CHECK(horizontal == 2);
    } else {
      for (auto s : term.spins) CHECK(m.spin_coords[s].orientation != 0);
    }
  }
}

TEST_CASE("color counts: L=6 M=6 with the family arities") {
  const GaugeModel m = build_color(6, 6);
  CHECK(m.num_spins == 648);  // 216 sigma_h + 432 sigma_v
  int sigma_h = 0;
  for (const auto& c : m.spin_coords)
    if (c.orientation == 0) ++sigma_h;
  CHECK(sigma_h == 216);
  CHECK(m.num_qubit_terms == 432);
  CHECK(m.num_meas_terms == 216);
  for (std::int32_t t = 0; t < m.num_terms(); ++t)
    CHECK(m.terms[t].spins.size() == (m.is_qubit_term(t) ? 5 : 6));
  for (const auto& g : m.gauge_generators) CHECK(g.size() == 8);
}

TEST_CASE("color incidence: sigma_v sits in 2 qubit and 3 measurement terms, "
          "sigma_h in 6 qubit terms") {
  const GaugeModel m = build_color(3, 3);
  for (std::int32_t s = 0; s < m.num_spins; ++s) {
    int qubit = 0, meas = 0;
    for (std::int32_t k = m.incidence_offset[s]; k < m.incidence_offset[s + 1];
         ++k)
      (m.is_qubit_term(m.incidence_term[k]) ? qubit : meas)++;
    if (m.spin_coords[s].orientation == 0) {
      CHECK(qubit == 6);
      CHECK(meas == 0);
    } else {
      CHECK(qubit == 2);
      CHECK(meas == 3);
    }
  }
}

TEST_CASE("gauge generators preserve every term exhaustively") {
  for (auto [L, M] : {std::pair{2, 2}, {3, 2}, {2, 3}, {4, 4}}) {
    CHECK(generators_preserve_all_terms(build_toric(L, M)));
    CHECK(generators_preserve_all_terms(build_color(L, M)));
  }
}

TEST_CASE("color gauge generator flips 2 spins per affected qubit term and "
          "6 or 2 per affected measurement term") {
  const GaugeModel m = build_color(3, 2);
  for (const auto& gen : m.gauge_generators) {
    const std::set<std::int32_t> gs(gen.begin(), gen.end());
    for (const auto& term : m.terms) {
      int overlap = 0;
      for (auto s : term.spins) overlap += gs.count(s);
      if (overlap == 0) continue;
      if (term.kind == TermKind::Qubit)
        CHECK(overlap == 2);
      else
        CHECK((overlap == 6 || overlap == 2));
    }
  }
}

TEST_CASE("closed-form counts hold across the size grid") {
  for (int L = 2; L <= 12; L += 2)
    for (int M = 2; M <= 12; M += 5) {
      for (const auto& m : {build_toric(L, M), build_color(L, M)}) {
        CHECK(m.num_spins == 3 * L * L * M);
        CHECK(m.num_qubit_terms == 2 * L * L * M);
        CHECK(m.num_meas_terms == L * L * M);
        CHECK(static_cast<int>(m.gauge_generators.size()) == L * L * M);
        // every spin appears in at least one term
        for (std::int32_t s = 0; s < m.num_spins; ++s)
          CHECK(m.incidence_offset[s + 1] > m.incidence_offset[s]);
      }
    }
}

TEST_CASE("construction is deterministic") {
  const GaugeModel a = build_color(4, 3);
  const GaugeModel b = build_color(4, 3);
  REQUIRE(a.num_terms() == b.num_terms());
  for (std::int32_t t = 0; t < a.num_terms(); ++t)
    CHECK(a.terms[t].spins == b.terms[t].spins);
  CHECK(a.gauge_generators == b.gauge_generators);
}

TEST_CASE("degenerate sizes are rejected") {
  CHECK_THROWS_AS(build_toric(1, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_toric(4, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_color(1, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_color(2, 0), std::invalid_argument);
}

TEST_CASE("graph export round-trips through JSON") {
  const GaugeModel m = build_toric(2, 2);
  const auto j = nlohmann::json::parse(export_graph_json(m));
  CHECK(j.at("format") == "gaugemc-graph");
  CHECK(j.at("num_spins") == 24);
  CHECK(j.at("terms").size() == 24);
  CHECK(j.at("generators").size() == 8);
  // term spins in the export match the model
  for (std::int32_t t = 0; t < m.num_terms(); ++t)
    CHECK(j.at("terms")[t].at("spins").get<std::vector<std::int32_t>>() ==
          m.terms[t].spins);
}
