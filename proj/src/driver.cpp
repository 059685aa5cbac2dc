#include "gaugemc/driver.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "gaugemc/io_util.hpp"
#include "gaugemc/nishimori.hpp"
#include "gaugemc/oracle.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace gaugemc {

namespace {

constexpr const char* kToolVersion = "0.1.0";

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

std::string point_tag(Family family, int L, int M, double p, double q) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s_L%d_M%d_p%.6f_q%.6f", family_name(family),
                L, M, p, q);
  return buf;
}

std::string sample_name(int idx, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "sample_%05d.%s", idx, ext);
  return buf;
}

nlohmann::json tc_estimate_json(const TcEstimate& e) {
  nlohmann::json j;
  j["inconclusive"] = e.inconclusive;
  j["note"] = e.note;
  if (!e.inconclusive) {
    j["tc"] = e.tc;
    j["error"] = e.error;
  }
  return j;
}

// The reported Tc of a point: the C(T)-peak estimate, valid only when both
// locators are conclusive and agree; its error also covers the method spread.
TcEstimate combined_tc(const TcResult& r) {
  TcEstimate e;
  if (r.peak.inconclusive) {
    e.note = "peak locator: " + r.peak.note;
    return e;
  }
  if (r.skew.inconclusive) {
    e.note = "skewness locator: " + r.skew.note;
    return e;
  }
  if (!r.methods_agree) {
    e.note = "locator methods disagree beyond combined errors";
    return e;
  }
  e.tc = r.peak.tc;
  e.error = std::max(r.peak.error, 0.5 * std::abs(r.peak.tc - r.skew.tc));
  e.inconclusive = false;
  return e;
}

struct PointResult {
  PointSpec spec;
  PointPhysics physics;
  int L = 0, M = 0;
  int n_samples = 0, n_flagged = 0, n_failed = 0;
  TcResult tc;
  double wall_seconds = 0.0;
  std::vector<double> mean_swap_acceptance;
};

struct Registry {
  std::vector<std::string> files;  // relative paths
  void add(const std::string& rel) { files.push_back(rel); }
};

void write_manifest(const RunConfig& cfg, const std::string& status,
                    const Registry& registry,
                    const std::vector<PointResult>& results,
                    double wall_seconds) {
  nlohmann::json j;
  j["format"] = "gaugemc-manifest";
  j["version"] = 1;
  j["tool_version"] = kToolVersion;
  j["status"] = status;
  j["config_hash"] =
      io::hash_hex(io::fnv1a64(io::read_file(cfg.out_dir + "/config.json")));
  j["master_seed"] = cfg.master_seed;
  j["wall_seconds"] = wall_seconds;
  int flagged = 0, failed = 0;
  auto& points = j["points"] = nlohmann::json::array();
  for (const auto& r : results) {
    flagged += r.n_flagged;
    failed += r.n_failed;
    points.push_back(nlohmann::json{
        {"dir", point_tag(cfg.family, r.L, r.M, r.spec.p, r.spec.q)},
        {"L", r.L},
        {"M", r.M},
        {"p", r.spec.p},
        {"q", r.spec.q},
        {"n_samples", r.n_samples},
        {"n_flagged", r.n_flagged},
        {"n_failed", r.n_failed},
        {"wall_seconds", r.wall_seconds}});
  }
  j["flagged_samples"] = flagged;
  j["failed_samples"] = failed;
  auto& files = j["files"] = nlohmann::json::array();
  for (const auto& rel : registry.files) {
    const std::string full = cfg.out_dir + "/" + rel;
    files.push_back(nlohmann::json{
        {"path", rel},
        {"fnv1a64", io::hash_hex(io::file_hash(full))},
        {"bytes", fs::file_size(full)}});
  }
  io::atomic_write_file(cfg.out_dir + "/manifest.json", j.dump(2) + "\n");
}

}  // namespace

PointDefaults table_defaults(double p, int L) {
  const bool small = L <= 9;
  if (p == 0.0) return {1.20, 2.00, 64, 15, small ? 1600 : 800};
  if (p < 0.03) return {0.90, 1.80, 52, small ? 16 : 17, small ? 1600 : 800};
  if (p < 0.04) return {0.70, 1.40, 52, small ? 17 : 19, small ? 1600 : 800};
  return {0.50, 1.20, 52, small ? 18 : 20, small ? 1600 : 800};
}

PointPhysics resolve_point_physics(double p, double q) {
  if (p == 0.0 && q == 0.0)
    return {Couplings{1.0, 1.0}, std::numeric_limits<double>::quiet_NaN()};
  if (q == 0.0)
    throw std::invalid_argument(
        "q = 0 with p > 0 is the measurement-perfect limit; the stacked model "
        "collapses to its 2D single-round form and is not simulated here");
  const NishimoriPoint n = nishimori_point(p, q);
  if (!std::isfinite(n.J))
    throw std::invalid_argument(
        "p = 0 with q > 0 gives an infinite qubit coupling; the point is not "
        "simulable");
  return {Couplings{n.J, n.K}, n.T_N};
}

void RunConfig::validate() const {
  if (points.empty()) throw std::invalid_argument("no (p, q) points configured");
  if (sizes.empty()) throw std::invalid_argument("no (L, M) sizes configured");
  if (out_dir.empty()) throw std::invalid_argument("output directory not set");
  if (n_sa < 1) throw std::invalid_argument("n_sa must be at least 1");
  if (workers < 1) throw std::invalid_argument("workers must be at least 1");
  if (wilson_stride < 1 || n_blocks < 1 || max_wilson_keep < 1 || n_boot < 1)
    throw std::invalid_argument("bad schedule parameter");
  for (const auto& [L, M] : sizes) {
    if (L < 2 || M < 2)
      throw std::invalid_argument("sizes must satisfy L >= 2 and M >= 2");
  }
  for (const auto& pt : points) {
    if (!(pt.p >= 0.0 && pt.p < 0.5) || !(pt.q >= 0.0 && pt.q < 0.5))
      throw std::invalid_argument("rates must lie in [0, 0.5)");
    resolve_point_physics(pt.p, pt.q);  // rejects the unsimulable limits
    if (!(pt.t_min > 0.0) || !(pt.t_max > pt.t_min) || pt.n_t < 2)
      throw std::invalid_argument("bad temperature ladder");
    if (pt.b < 8 || pt.b > 30)
      throw std::invalid_argument("sweep budget exponent b must be in [8, 30]");
  }
  if (alpha && !(*alpha > 0.0))
    throw std::invalid_argument("alpha must be positive");
}

std::string RunConfig::to_json(int indent) const {
  nlohmann::json j;
  j["format"] = "gaugemc-config";
  j["version"] = 1;
  j["family"] = family_name(family);
  if (alpha)
    j["alpha"] = *alpha;
  else
    j["alpha"] = nullptr;
  auto& pts = j["points"] = nlohmann::json::array();
  for (const auto& pt : points)
    pts.push_back(nlohmann::json{{"p", pt.p},
                                 {"q", pt.q},
                                 {"t_min", pt.t_min},
                                 {"t_max", pt.t_max},
                                 {"n_t", pt.n_t},
                                 {"b", pt.b}});
  auto& sz = j["sizes"] = nlohmann::json::array();
  for (const auto& [L, M] : sizes)
    sz.push_back(nlohmann::json{{"L", L}, {"M", M}});
  j["n_sa"] = n_sa;
  j["master_seed"] = master_seed;
  j["workers"] = workers;
  j["wilson_stride"] = wilson_stride;
  j["n_blocks"] = n_blocks;
  j["max_wilson_keep"] = max_wilson_keep;
  j["checkpoint_every"] = checkpoint_every;
  j["n_boot"] = n_boot;
  j["out_dir"] = out_dir;
  return j.dump(indent) + "\n";
}

RunConfig RunConfig::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.at("format") != "gaugemc-config" || j.at("version") != 1)
    throw std::runtime_error("not a gaugemc config file");
  RunConfig cfg;
  cfg.family = family_from_name(j.at("family").get<std::string>());
  if (!j.at("alpha").is_null()) cfg.alpha = j.at("alpha").get<double>();
  for (const auto& pt : j.at("points"))
    cfg.points.push_back(PointSpec{pt.at("p").get<double>(),
                                   pt.at("q").get<double>(),
                                   pt.at("t_min").get<double>(),
                                   pt.at("t_max").get<double>(),
                                   pt.at("n_t").get<int>(),
                                   pt.at("b").get<int>()});
  for (const auto& sz : j.at("sizes"))
    cfg.sizes.emplace_back(sz.at("L").get<int>(), sz.at("M").get<int>());
  cfg.n_sa = j.at("n_sa").get<int>();
  cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  cfg.workers = j.at("workers").get<int>();
  cfg.wilson_stride = j.at("wilson_stride").get<int>();
  cfg.n_blocks = j.at("n_blocks").get<int>();
  cfg.max_wilson_keep = j.at("max_wilson_keep").get<int>();
  cfg.checkpoint_every = j.at("checkpoint_every").get<std::uint64_t>();
  cfg.n_boot = j.at("n_boot").get<int>();
  cfg.out_dir = j.at("out_dir").get<std::string>();
  return cfg;
}

namespace {

// Simulate the missing samples of one (size, point); returns per-point stats.
PointResult simulate_point(const RunConfig& cfg, const GaugeModel& model,
                           const PointSpec& spec) {
  const double t0 = now_seconds();
  PointResult result;
  result.spec = spec;
  result.physics = resolve_point_physics(spec.p, spec.q);
  result.L = model.L;
  result.M = model.M;

  const std::string tag = point_tag(cfg.family, model.L, model.M, spec.p, spec.q);
  const std::string samples_dir = cfg.out_dir + "/points/" + tag + "/samples";
  fs::create_directories(samples_dir);

  const TemperatureLadder ladder = linear_ladder(spec.t_min, spec.t_max, spec.n_t);
  SweepSchedule schedule;
  schedule.max_bin = spec.b;
  schedule.wilson_stride = cfg.wilson_stride;
  schedule.n_blocks = cfg.n_blocks;
  schedule.max_wilson_keep = cfg.max_wilson_keep;

  std::atomic<int> next{0};
  std::vector<std::string> errors(cfg.n_sa);
  auto worker = [&] {
    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= cfg.n_sa) return;
      const std::string json_path = samples_dir + "/" + sample_name(idx, "json");
      if (fs::exists(json_path)) continue;  // completed earlier; never rewritten
      const std::string ckpt_path = samples_dir + "/" + sample_name(idx, "ckpt");
      try {
        const DisorderSample sample = generate_disorder(
            model, spec.p, spec.q, cfg.master_seed, std::uint64_t(idx));
        const MeasurementSet ms =
            run_sample(model, sample, result.physics.couplings, ladder, schedule,
                       ckpt_path, cfg.checkpoint_every);
        io::atomic_write_file(json_path, ms.to_json(1) + "\n");
        std::error_code ec;
        fs::remove(ckpt_path, ec);
      } catch (const std::exception& e) {
        errors[idx] = e.what();
      }
    }
  };

  const int n_workers = std::max(1, std::min(cfg.workers, cfg.n_sa));
  std::vector<std::thread> pool;
  for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  for (int i = 0; i < cfg.n_sa; ++i)
    if (!errors[i].empty()) {
      ++result.n_failed;
      std::cerr << "sample " << i << " of " << tag << " failed: " << errors[i]
                << "\n";
    }
  result.wall_seconds = now_seconds() - t0;
  return result;
}

// Load every completed sample of a point and aggregate it; emits
// observables.csv and tc.json, and fills the Tc fields of `result`.
void aggregate_point_dir(const RunConfig& cfg, PointResult& result,
                         Registry& registry) {
  const std::string tag =
      point_tag(cfg.family, result.L, result.M, result.spec.p, result.spec.q);
  const std::string point_dir = cfg.out_dir + "/points/" + tag;

  std::vector<MeasurementSet> sets;
  for (int i = 0; i < cfg.n_sa; ++i) {
    const std::string rel = "points/" + tag + "/samples/" + sample_name(i, "json");
    const std::string path = cfg.out_dir + "/" + rel;
    if (!fs::exists(path)) continue;
    sets.push_back(MeasurementSet::from_json(io::read_file(path)));
    registry.add(rel);
  }
  if (sets.empty())
    throw std::runtime_error("no completed samples for point " + tag);

  const PointData data = collect_point(sets, result.physics.t_n);
  result.n_samples = data.n_samples();
  result.n_flagged = data.n_flagged;

  const ObservableTable table =
      aggregate_point(data, cfg.n_boot, cfg.master_seed);
  io::atomic_write_file(point_dir + "/observables.csv", observables_csv(table));
  registry.add("points/" + tag + "/observables.csv");

  result.tc = locate_tc(data, cfg.n_boot, cfg.master_seed);

  // mean swap acceptance per adjacent pair; warn when a pair leaves (.05,.95)
  if (!sets.empty() && !sets.front().swap_acceptance.empty()) {
    std::vector<double> acc(sets.front().swap_acceptance.size(), 0.0);
    for (const auto& s : sets)
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += s.swap_acceptance[i];
    for (auto& a : acc) a /= double(sets.size());
    result.mean_swap_acceptance = acc;
    for (std::size_t i = 0; i < acc.size(); ++i)
      if (acc[i] <= 0.05 || acc[i] >= 0.95)
        std::cerr << "warning: " << tag << " swap acceptance of pair " << i
                  << " is " << acc[i]
                  << " (ladder too coarse or too fine there)\n";
  }

  nlohmann::json j;
  j["format"] = "gaugemc-tc";
  j["version"] = 1;
  j["family"] = family_name(cfg.family);
  j["L"] = result.L;
  j["M"] = result.M;
  j["p"] = result.spec.p;
  j["q"] = result.spec.q;
  j["J"] = result.physics.couplings.J;
  j["K"] = result.physics.couplings.K;
  if (std::isfinite(result.physics.t_n))
    j["t_nishimori"] = result.physics.t_n;
  else
    j["t_nishimori"] = nullptr;
  j["n_samples"] = result.n_samples;
  j["n_flagged"] = result.n_flagged;
  j["tc_peak"] = tc_estimate_json(result.tc.peak);
  j["tc_skewness"] = tc_estimate_json(result.tc.skew);
  j["methods_agree"] = result.tc.methods_agree;
  j["tc"] = tc_estimate_json(combined_tc(result.tc));
  io::atomic_write_file(point_dir + "/tc.json", j.dump(2) + "\n");
  registry.add("points/" + tag + "/tc.json");
}

// Cross-size verdicts and the path threshold scan.
void emit_phase_diagram(const RunConfig& cfg,
                        const std::vector<PointResult>& results,
                        Registry& registry) {
  nlohmann::json j;
  j["format"] = "gaugemc-phase-diagram";
  j["version"] = 1;
  j["family"] = family_name(cfg.family);
  if (cfg.alpha)
    j["alpha"] = *cfg.alpha;
  else
    j["alpha"] = nullptr;
  auto& sizes = j["sizes"] = nlohmann::json::array();
  for (const auto& [L, M] : cfg.sizes)
    sizes.push_back(nlohmann::json{{"L", L}, {"M", M}});

  std::string csv =
      "family,L,M,alpha,p_star,p_star_err,bracketed,bracket_fraction,hint\n";

  auto& points = j["points"] = nlohmann::json::array();
  for (const auto& spec : cfg.points) {
    nlohmann::json pj;
    pj["p"] = spec.p;
    pj["q"] = spec.q;
    const PointPhysics physics = resolve_point_physics(spec.p, spec.q);
    pj["J"] = physics.couplings.J;
    pj["K"] = physics.couplings.K;
    if (std::isfinite(physics.t_n))
      pj["t_nishimori"] = physics.t_n;
    else
      pj["t_nishimori"] = nullptr;

    std::vector<SizeTc> size_tcs;
    auto& per_size = pj["per_size"] = nlohmann::json::array();
    for (const auto& r : results) {
      if (r.spec.p != spec.p || r.spec.q != spec.q) continue;
      const TcEstimate tc = combined_tc(r.tc);
      per_size.push_back(nlohmann::json{{"L", r.L},
                                        {"M", r.M},
                                        {"tc_peak", tc_estimate_json(r.tc.peak)},
                                        {"tc_skewness", tc_estimate_json(r.tc.skew)},
                                        {"methods_agree", r.tc.methods_agree},
                                        {"tc", tc_estimate_json(tc)},
                                        {"n_flagged", r.n_flagged}});
      size_tcs.push_back(SizeTc{r.L, r.M, tc});
    }
    if (!std::isfinite(physics.t_n)) {
      // clean point: ordered by definition below its transition
      pj["verdict"] = "ordered";
    } else if (size_tcs.empty()) {
      pj["verdict"] = "marginal";
    } else {
      pj["verdict"] =
          verdict_name(ordered_at_nishimori(size_tcs, physics.t_n));
    }
    points.push_back(std::move(pj));
  }

  auto& thresholds = j["thresholds"] = nlohmann::json::array();
  if (cfg.alpha) {
    for (const auto& [L, M] : cfg.sizes) {
      std::vector<ThresholdPoint> pts;
      for (const auto& r : results) {
        if (r.L != L || r.M != M) continue;
        if (!std::isfinite(r.physics.t_n)) continue;  // clean point: no sheet
        pts.push_back(ThresholdPoint{r.spec.p, r.spec.q, r.physics.t_n,
                                     combined_tc(r.tc)});
      }
      if (pts.size() < 2) continue;
      const ThresholdEstimate est =
          threshold_scan(*cfg.alpha, pts, cfg.n_boot, cfg.master_seed);
      nlohmann::json tj;
      tj["L"] = L;
      tj["M"] = M;
      tj["bracketed"] = est.bracketed;
      tj["hint"] = est.hint;
      if (est.bracketed) {
        tj["p_star"] = est.p_star;
        tj["p_star_err"] = est.p_star_err;
        tj["bracket_fraction"] = est.bracket_fraction;
      }
      thresholds.push_back(tj);
      char line[256];
      std::snprintf(line, sizeof line, "%s,%d,%d,%.12g,%.12g,%.12g,%d,%.12g,%s\n",
                    family_name(cfg.family), L, M, *cfg.alpha,
                    est.bracketed ? est.p_star : std::nan(""),
                    est.bracketed ? est.p_star_err : std::nan(""),
                    est.bracketed ? 1 : 0, est.bracket_fraction,
                    est.hint.c_str());
      csv += line;
    }
  }

  fs::create_directories(cfg.out_dir + "/analysis");
  io::atomic_write_file(cfg.out_dir + "/analysis/phase_diagram.json",
                        j.dump(2) + "\n");
  registry.add("analysis/phase_diagram.json");
  io::atomic_write_file(cfg.out_dir + "/analysis/thresholds.csv", csv);
  registry.add("analysis/thresholds.csv");
}

int run_impl(const RunConfig& cfg, bool simulate) {
  cfg.validate();
  const double t0 = now_seconds();
  fs::create_directories(cfg.out_dir);

  const std::string config_path = cfg.out_dir + "/config.json";
  if (!fs::exists(config_path))
    io::atomic_write_file(config_path, cfg.to_json(2));

  Registry registry;
  registry.add("config.json");
  std::vector<PointResult> results;
  write_manifest(cfg, "running", registry, results, now_seconds() - t0);

  int failed = 0;
  for (const auto& [L, M] : cfg.sizes) {
    const GaugeModel model = cfg.family == Family::Toric ? build_toric(L, M)
                                                         : build_color(L, M);
    for (const auto& spec : cfg.points) {
      PointResult r;
      if (simulate) {
        r = simulate_point(cfg, model, spec);
      } else {
        r.spec = spec;
        r.physics = resolve_point_physics(spec.p, spec.q);
        r.L = L;
        r.M = M;
      }
      aggregate_point_dir(cfg, r, registry);
      failed += r.n_failed;
      std::cout << point_tag(cfg.family, L, M, spec.p, spec.q) << ": samples="
                << r.n_samples << " flagged=" << r.n_flagged
                << " failed=" << r.n_failed;
      const TcEstimate tc = combined_tc(r.tc);
      if (!tc.inconclusive)
        std::cout << " Tc=" << tc.tc << "(" << tc.error << ")";
      else
        std::cout << " Tc=inconclusive[" << tc.note << "]";
      if (std::isfinite(r.physics.t_n)) std::cout << " T_N=" << r.physics.t_n;
      std::cout << "\n";
      results.push_back(std::move(r));
      write_manifest(cfg, "running", registry, results, now_seconds() - t0);
    }
  }

  emit_phase_diagram(cfg, results, registry);
  write_manifest(cfg, failed ? "partial" : "complete", registry, results,
                 now_seconds() - t0);
  return failed ? 1 : 0;
}

}  // namespace

int run(const RunConfig& cfg) { return run_impl(cfg, true); }

int analyze(const std::string& out_dir) {
  RunConfig cfg = RunConfig::from_json(io::read_file(out_dir + "/config.json"));
  cfg.out_dir = out_dir;
  return run_impl(cfg, false);
}

int resume(const std::string& out_dir) {
  const std::string config_path = out_dir + "/config.json";
  const std::string manifest_path = out_dir + "/manifest.json";
  if (!fs::exists(config_path) || !fs::exists(manifest_path))
    throw std::invalid_argument("nothing to resume in " + out_dir);
  const auto manifest = nlohmann::json::parse(io::read_file(manifest_path));
  const std::string recorded = manifest.at("config_hash").get<std::string>();
  const std::string actual =
      io::hash_hex(io::fnv1a64(io::read_file(config_path)));
  if (recorded != actual)
    throw std::invalid_argument(
        "config.json was edited after the run started (hash " + actual +
        ", manifest records " + recorded + "); refusing to resume");
  RunConfig cfg = RunConfig::from_json(io::read_file(config_path));
  cfg.out_dir = out_dir;
  return run_impl(cfg, true);
}

int export_graph(Family family, int L, int M, const std::string& path) {
  const GaugeModel model =
      family == Family::Toric ? build_toric(L, M) : build_color(L, M);
  const std::string json = export_graph_json(model, 2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << json;
  } else {
    io::atomic_write_file(path, json);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// verify suite

namespace {

bool report(std::ostream& out, const char* name, bool ok,
            const std::string& detail = {}) {
  out << (ok ? "[PASS] " : "[FAIL] ") << name;
  if (!detail.empty()) out << " (" << detail << ")";
  out << "\n";
  return ok;
}

bool check_rng(std::ostream& out) {
  bool ok = rng::sm_mix(0x9E3779B97F4A7C15ULL) == 0xE220A8397B1DCDAFULL;
  ok = ok && rng::derive_key({1, 2, 3}) == 0xD0734750FDE362B3ULL;
  rng::Xoshiro256pp gen(0x123456789ABCDEF0ULL);
  ok = ok && gen.next() == 0x4D4F7607A97A1BD6ULL;
  ok = ok && gen.next() == 0x9BA027C76910D021ULL;
  return report(out, "rng test vectors", ok);
}

bool check_nishimori(std::ostream& out) {
  double worst = 0.0;
  for (int i = 1; i <= 31; ++i)
    for (int k = 1; k <= 32; ++k) {
      const double p = i / 64.0, q = k / 66.0;
      const NishimoriPoint n = nishimori_point(p, q);
      const double lhs_j = std::exp(-2.0 * n.J / n.T_N);
      const double lhs_k = std::exp(-2.0 * n.K / n.T_N);
      worst = std::max(worst, std::abs(lhs_j - p / (1 - p)) / (p / (1 - p)));
      worst = std::max(worst, std::abs(lhs_k - q / (1 - q)) / (q / (1 - q)));
    }
  return report(out, "nishimori identities on a 992-point grid", worst <= 1e-12,
                "worst rel err " + std::to_string(worst));
}

bool check_gauge(std::ostream& out) {
  bool ok = true;
  rng::Xoshiro256pp gen(7);
  for (Family family : {Family::Toric, Family::Color}) {
    const GaugeModel model =
        family == Family::Toric ? build_toric(3, 2) : build_color(3, 2);
    const DisorderSample sample = generate_disorder(model, 0.2, 0.2, 11, 0);
    const Couplings c{1.3, 0.7};
    const auto patches = default_wilson_patches(model);
    for (int trial = 0; trial < 2000 && ok; ++trial) {
      SpinConfiguration config = random_config(model, gen);
      const double e0 = energy(model, sample, c, config);
      std::vector<int> w0;
      for (const auto& patch : patches)
        w0.push_back(wilson_loop(model, sample, config, patch));
      const auto& generator =
          model.gauge_generators[gen.below(model.gauge_generators.size())];
      apply_gauge(config, generator);
      ok = ok && energy(model, sample, c, config) == e0;
      for (std::size_t i = 0; i < patches.size(); ++i)
        ok = ok && wilson_loop(model, sample, config, patches[i]) == w0[i];
    }
  }
  return report(out, "gauge invariance of energy and wilson loops", ok);
}

bool check_delta(std::ostream& out) {
  bool ok = true;
  rng::Xoshiro256pp gen(13);
  for (Family family : {Family::Toric, Family::Color}) {
    const GaugeModel model =
        family == Family::Toric ? build_toric(2, 3) : build_color(2, 3);
    const DisorderSample sample = generate_disorder(model, 0.15, 0.3, 5, 1);
    const Couplings c{1.0, 0.5};
    for (int trial = 0; trial < 200 && ok; ++trial) {
      SpinConfiguration config = random_config(model, gen);
      const auto spin = static_cast<std::int32_t>(gen.below(model.num_spins));
      const double before = energy(model, sample, c, config);
      const double dlt = delta_energy(model, sample, c, config, spin);
      config.spins[spin] = -config.spins[spin];
      ok = ok && dlt == energy(model, sample, c, config) - before;
    }
  }
  return report(out, "incremental energy equals full re-evaluation", ok);
}

bool check_oracle_mc(std::ostream& out) {
  const GaugeModel model = build_toric(2, 2);
  const std::vector<double> temps{1.0, 1.3, 1.6, 1.9, 2.2, 2.5};
  TemperatureLadder ladder{temps};
  SweepSchedule schedule;
  schedule.max_bin = 13;
  int within = 0, total = 0;
  for (int s = 0; s < 2; ++s) {
    const DisorderSample sample = generate_disorder(model, 0.1, 0.1, 99, s);
    const Couplings c{1.0, 1.0};
    const ExactResult exact = enumerate_exact(
        model, sample, c, temps, make_wilson_patch(model, 1, 0, 0, 0));
    const MeasurementSet ms = run_sample(model, sample, c, ladder, schedule);
    for (std::size_t i = 0; i < temps.size(); ++i) {
      const auto& t = ms.per_t[i];
      const double sem = bootstrap_error_of_mean(t.block_energy, 200, 3);
      ++total;
      if (std::abs(t.mean_energy - exact.mean_energy[i]) <=
          3.0 * std::max(sem, 1e-9))
        ++within;
    }
  }
  return report(out, "monte carlo <E> matches exact enumeration (3 sigma)",
                within >= total - 1,
                std::to_string(within) + "/" + std::to_string(total));
}

bool check_detector(std::ostream& out) {
  std::vector<double> flat, drift;
  rng::Xoshiro256pp gen(3);
  for (int i = 0; i < (1 << 10); ++i) {
    flat.push_back(5.0);
    drift.push_back(1e-2 * i + 1e-4 * gen.u01());
  }
  bool ok = check_equilibration(flat).converged;
  ok = ok && !check_equilibration(drift).converged;
  return report(out, "equilibration detector sanity", ok);
}

}  // namespace

bool verify_suite(std::ostream& out, bool include_oracle_mc) {
  bool ok = true;
  ok &= check_rng(out);
  ok &= check_nishimori(out);
  ok &= check_gauge(out);
  ok &= check_delta(out);
  ok &= check_detector(out);
  if (include_oracle_mc) ok &= check_oracle_mc(out);
  out << (ok ? "verify: all checks passed\n" : "verify: FAILURES\n");
  return ok;
}

}  // namespace gaugemc
