#include <stdexcept>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "gaugemc/driver.hpp"
#include "gaugemc/io_util.hpp"
#include "json.hpp"

using namespace gaugemc;
namespace fs = std::filesystem;

namespace {

RunConfig tiny_config(const std::string& out) {
  RunConfig cfg;
  cfg.family = Family::Toric;
  cfg.alpha = 1.0;
  cfg.points = {PointSpec{0.05, 0.05, 1.0, 2.0, 6, 9},
                PointSpec{0.10, 0.10, 1.0, 2.0, 6, 9}};
  cfg.sizes = {{2, 2}};
  cfg.n_sa = 3;
  cfg.master_seed = 4242;
  cfg.workers = 2;
  cfg.n_boot = 100;
  cfg.checkpoint_every = 128;
  cfg.out_dir = out;
  return cfg;
}

std::string slurp(const fs::path& p) { return io::read_file(p.string()); }

}  // namespace

TEST_CASE("run config round-trips losslessly through its file form") {
  const RunConfig cfg = tiny_config("/tmp/x");
  const RunConfig back = RunConfig::from_json(cfg.to_json());
  CHECK(back.to_json() == cfg.to_json());
  CHECK(back.points.size() == 2);
  CHECK(back.alpha.has_value());
  CHECK(*back.alpha == 1.0);
  CHECK(back.master_seed == 4242);
}

TEST_CASE("config validation rejects the unsimulable limits") {
  RunConfig cfg = tiny_config("/tmp/x");
  cfg.points[0].p = 0.6;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = tiny_config("/tmp/x");
  cfg.points[0] = PointSpec{0.05, 0.0, 1.0, 2.0, 4, 9};  // q = 0, p > 0
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = tiny_config("/tmp/x");
  cfg.points[0] = PointSpec{0.0, 0.05, 1.0, 2.0, 4, 9};  // p = 0: J infinite
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = tiny_config("/tmp/x");
  cfg.sizes = {{1, 6}};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = tiny_config("");
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  // the clean point is allowed
  cfg = tiny_config("/tmp/x");
  cfg.points[0] = PointSpec{0.0, 0.0, 1.2, 2.0, 4, 9};
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("table defaults mirror the reference parameter rows") {
  CHECK(table_defaults(0.0, 6).t_min == 1.20);
  CHECK(table_defaults(0.0, 6).t_max == 2.00);
  CHECK(table_defaults(0.0, 6).n_t == 64);
  CHECK(table_defaults(0.0, 6).n_sa == 1600);
  CHECK(table_defaults(0.0, 12).n_sa == 800);
  CHECK(table_defaults(0.02, 6).t_min == 0.90);
  CHECK(table_defaults(0.02, 6).b == 16);
  CHECK(table_defaults(0.02, 12).b == 17);
  CHECK(table_defaults(0.035, 9).t_min == 0.70);
  CHECK(table_defaults(0.035, 12).b == 19);
  CHECK(table_defaults(0.05, 6).t_min == 0.50);
  CHECK(table_defaults(0.05, 6).t_max == 1.20);
  CHECK(table_defaults(0.05, 12).b == 20);
}

TEST_CASE("end-to-end run: deterministic artifacts, resume semantics, "
          "manifest hashes") {
  const std::string dir_a = "/tmp/gaugemc_run_a";
  const std::string dir_b = "/tmp/gaugemc_run_b";
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);

  RunConfig a = tiny_config(dir_a);
  REQUIRE(run(a) == 0);
  RunConfig b = tiny_config(dir_b);
  REQUIRE(run(b) == 0);

  // identical seeds -> byte-identical data artifacts
  for (const auto& entry : fs::recursive_directory_iterator(dir_a)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), dir_a);
    if (rel == "config.json" || rel == "manifest.json") continue;  // carry paths/wall times
    CAPTURE(rel.string());
    CHECK(slurp(entry.path()) == slurp(dir_b / rel));
  }

  // every emitted file is referenced by the manifest with its content hash
  const auto manifest = nlohmann::json::parse(slurp(dir_a + "/manifest.json"));
  CHECK(manifest.at("status") == "complete");
  for (const auto& f : manifest.at("files")) {
    const std::string rel = f.at("path").get<std::string>();
    CHECK(io::hash_hex(io::file_hash(dir_a + "/" + rel)) ==
          f.at("fnv1a64").get<std::string>());
  }
  // all sample files are listed
  int sample_files = 0;
  for (const auto& f : manifest.at("files"))
    if (f.at("path").get<std::string>().find("samples/sample_") !=
        std::string::npos)
      ++sample_files;
  CHECK(sample_files == 6);

  // threshold scan artifacts exist (2-point path)
  CHECK(fs::exists(dir_a + "/analysis/phase_diagram.json"));
  CHECK(fs::exists(dir_a + "/analysis/thresholds.csv"));

  SUBCASE("resume on a completed run changes no data bytes") {
    const std::string before =
        slurp(dir_a + "/points/toric_L2_M2_p0.050000_q0.050000/observables.csv");
    REQUIRE(resume(dir_a) == 0);
    CHECK(slurp(dir_a +
                "/points/toric_L2_M2_p0.050000_q0.050000/observables.csv") ==
          before);
  }

  SUBCASE("analyze rewrites identical aggregates from the sample files") {
    const std::string tc_before =
        slurp(dir_a + "/points/toric_L2_M2_p0.100000_q0.100000/tc.json");
    REQUIRE(analyze(dir_a) == 0);
    CHECK(slurp(dir_a + "/points/toric_L2_M2_p0.100000_q0.100000/tc.json") ==
          tc_before);
  }

  SUBCASE("an edited config is refused on resume") {
    auto cfg_text = slurp(dir_a + "/config.json");
    cfg_text.replace(cfg_text.find("4242"), 4, "4243");
    {
      std::ofstream out(dir_a + "/config.json");
      out << cfg_text;
    }
    CHECK_THROWS_AS(resume(dir_a), std::invalid_argument);
  }

  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("resume on an empty directory reports nothing to resume") {
  const std::string dir = "/tmp/gaugemc_empty_dir";
  fs::remove_all(dir);
  fs::create_directories(dir);
  CHECK_THROWS_WITH_AS(resume(dir),
                       doctest::Contains("nothing to resume"),
                       std::invalid_argument);
  fs::remove_all(dir);
}

TEST_CASE("graph export writes the requested file") {
  const std::string path = "/tmp/gaugemc_graph.json";
  fs::remove(path);
  REQUIRE(export_graph(Family::Color, 2, 2, path) == 0);
  const auto j = nlohmann::json::parse(slurp(path));
  CHECK(j.at("family") == "color");
  CHECK(j.at("num_spins") == 24);
  fs::remove(path);
}

TEST_CASE("point physics resolution") {
  const PointPhysics clean = resolve_point_physics(0.0, 0.0);
  CHECK(clean.couplings.J == 1.0);
  CHECK(clean.couplings.K == 1.0);
  CHECK(!std::isfinite(clean.t_n));
  const PointPhysics mixed = resolve_point_physics(0.02, 0.04);
  CHECK(mixed.couplings.J == doctest::Approx(1.224592).epsilon(1e-5));
  CHECK(mixed.t_n == doctest::Approx(0.629316).epsilon(1e-5));
  CHECK_THROWS_AS(resolve_point_physics(0.02, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(resolve_point_physics(0.0, 0.05), std::invalid_argument);
}
