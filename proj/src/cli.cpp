#include "fieldgen/cli.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "fieldgen/errors.hpp"

namespace fieldgen {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Curvatures this close are reported as a tie (1/m).
constexpr double kCurvatureTie = 1e-9;

std::vector<DiversityLevel> parse_levels(const std::string& csv) {
  std::vector<DiversityLevel> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_diversity_level(item));
  }
  if (out.empty()) throw ConfigError("--compare needs at least one diversity level");
  return out;
}

int rank(DiversityLevel l) { return static_cast<int>(l); }

}  // namespace

unsigned default_jobs() {
  if (const char* env = std::getenv("FIELDGEN_JOBS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

GenerateSummary cmd_generate(const ScenarioConfig& cfg, const fs::path& out, unsigned jobs) {
  const auto t0 = std::chrono::steady_clock::now();
  if (cfg.level != DiversityLevel::high && cfg.scenario.settings.reward_mode != RewardMode::off) {
    throw ConfigError("reward labelling is only available for diversity_level high");
  }
  DatasetManifest header;
  header.config = cfg.resolved;
  header.config_text = cfg.text;
  header.master_seed = cfg.master_seed;
  DatasetWriter writer(out, header);

  const std::uint64_t total = cfg.total_episodes();
  std::atomic<std::uint64_t> frames{0};

  if (cfg.level == DiversityLevel::high) {
    OrderedRecordSink sink(writer);
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&] {
      while (!stop.load()) {
        const std::uint64_t i = next.fetch_add(1);
        if (i >= total) break;
        try {
          Episode ep = generate_indexed_episode(cfg.scenario, cfg.master_seed, i);
          frames += ep.trajectory.waypoints.size();
          sink.submit(i, std::move(ep.records));
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
          stop = true;
        }
      }
    };
    const unsigned n = static_cast<unsigned>(std::min<std::uint64_t>(std::max(jobs, 1u), std::max<std::uint64_t>(total, 1)));
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  } else if (total > 0) {
    const auto trajs = generate_baseline(cfg.level, cfg.scenario, total, cfg.master_seed);
    for (std::uint64_t i = 0; i < trajs.size(); ++i) {
      const Provenance prov{trajs[i].meta.seed, cfg.scenario.settings.curve, cfg.level, cfg.scenario.settings.beta};
      frames += trajs[i].waypoints.size();
      for (const auto& rec : make_records(trajs[i], i, cfg.scenario.settings.chunk_stride, prov)) writer.write(rec);
    }
  }

  GenerateSummary s;
  s.manifest = writer.finalize();
  s.episodes = s.manifest.episode_count;
  s.records = s.manifest.record_count;
  s.frames = frames.load();
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return s;
}

std::vector<Polyline> polylines_from_records(const std::vector<SerializedRecord>& records) {
  // Each record covers waypoints [step, step + 30] of its episode. Records of one
  // episode are stitched by waypoint index; a gap between chunks starts a new line.
  std::vector<Polyline> out;
  Polyline line;
  std::uint64_t episode = 0;
  std::uint64_t base = 0;
  auto flush = [&] {
    if (!line.empty()) out.push_back(std::move(line));
    line.clear();
  };
  for (const auto& r : records) {
    if (line.empty() || r.episode != episode || r.step > base + line.size() - 1) {
      flush();
      episode = r.episode;
      base = r.step;
    }
    Vec3 p(r.pose[0], r.pose[1], r.pose[2]);
    std::size_t at = r.step - base;
    if (at == line.size()) line.push_back(p);
    for (std::size_t i = 0; i < kChunkSize; ++i) {
      const double* row = r.actions.data() + i * kActionWidth;
      const Vec3 dp(row[0], row[1], row[2]);
      if (dp.isZero(0.0)) break;  // padding: real steps always move
      p += dp;
      if (++at == line.size()) line.push_back(p);
    }
  }
  flush();
  return out;
}

CoverageComparison compare_coverage(const ScenarioConfig& cfg, const std::vector<DiversityLevel>& levels,
                                    std::size_t resolution, bool fixed_cube) {
  if (cfg.episodes == 0) throw ConfigError("coverage comparison needs at least one episode per level");
  std::vector<std::vector<Polyline>> sets;
  for (const auto level : levels) {
    const auto trajs = generate_baseline(level, cfg.scenario, cfg.episodes, cfg.master_seed);
    sets.push_back(polylines(trajs));
  }
  std::vector<Polyline> all;
  for (const auto& s : sets) all.insert(all.end(), s.begin(), s.end());
  const BoundingCube shared = bounding_cube(all);

  CoverageComparison cmp;
  cmp.levels = levels;
  for (const auto& s : sets) {
    cmp.reports.push_back(fixed_cube ? coverage(s, resolution, shared) : coverage(s, resolution));
  }
  // Order by level, then require strictly larger coverage for each more diverse level.
  std::vector<std::size_t> idx(levels.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return rank(levels[a]) < rank(levels[b]); });
  cmp.ordered = true;
  for (std::size_t k = 1; k < idx.size(); ++k) {
    if (!(cmp.reports[idx[k]].ratio > cmp.reports[idx[k - 1]].ratio)) cmp.ordered = false;
  }
  return cmp;
}

json cmd_coverage(const ScenarioConfig& cfg, const CoverageRequest& req) {
  if (!req.compare.empty()) {
    const auto cmp = compare_coverage(cfg, req.compare, req.resolution, req.fixed_cube);
    json levels = json::object();
    for (std::size_t i = 0; i < cmp.levels.size(); ++i) levels[to_string(cmp.levels[i])] = to_json(cmp.reports[i]);
    return {{"mode", "compare"},
            {"fixed_cube", req.fixed_cube},
            {"episodes_per_level", cfg.episodes},
            {"master_seed", cfg.master_seed},
            {"resolution", req.resolution},
            {"levels", levels},
            {"ordering_high_gt_middle_gt_low", cmp.ordered}};
  }

  std::vector<Polyline> lines;
  json source;
  if (req.dataset) {
    const auto [manifest, records] = read_dataset(*req.dataset);
    if (records.empty()) throw DatasetError("dataset " + req.dataset->string() + " holds no records");
    lines = polylines_from_records(records);
    source = {{"dataset", req.dataset->string()}, {"records", records.size()}, {"checksum", manifest.checksum}};
  } else {
    if (cfg.episodes == 0) throw ConfigError("coverage needs at least one episode");
    const auto trajs = generate_baseline(cfg.level, cfg.scenario, cfg.episodes, cfg.master_seed);
    lines = polylines(trajs);
    source = {{"generated", to_string(cfg.level)}, {"episodes", cfg.episodes}, {"master_seed", cfg.master_seed}};
  }
  return {{"mode", "single"},
          {"source", source},
          {"coverage", to_json(coverage(lines, req.resolution))},
          {"diversity", to_json(diversity_summary(lines))}};
}

CurvePair compare_curves(const ConeField& field, const Vec3& start, std::size_t samples) {
  const Path3D cyc = build_reach_path(field, start, samples);
  const Path3D bez = build_bezier_path(field, start, samples);
  CurvePair p;
  p.cycloid_curvature = cyc.size() >= 3 ? max_discrete_curvature(cyc) : 0.0;
  p.bezier_curvature = bez.size() >= 3 ? max_discrete_curvature(bez) : 0.0;
  p.cycloid_length = cyc.length();
  p.bezier_length = bez.length();
  p.tie = std::abs(p.cycloid_curvature - p.bezier_curvature) <= kCurvatureTie;
  return p;
}

CurveAblation ablate_curves(const ScenarioConfig& cfg, std::size_t count, std::size_t samples) {
  if (count == 0) throw ConfigError("curve ablation needs at least one seed");
  CurveAblation out;
  out.samples = samples;
  std::size_t not_sharper = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t seed = derive_seed(cfg.master_seed, i);
    const Pose start = sample_start_pose(cfg.scenario.workspace, cfg.scenario.field, derive_seed(seed, 0));
    CurvePair p = compare_curves(cfg.scenario.field.position, start.position, samples);
    p.seed = seed;
    if (p.tie || p.cycloid_curvature <= p.bezier_curvature) ++not_sharper;
    out.pairs.push_back(p);
  }
  const double n = static_cast<double>(count);
  const double f = static_cast<double>(not_sharper) / n;
  const double z = 1.96;
  const double denom = 1.0 + z * z / n;
  const double centre = (f + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(f * (1.0 - f) / n + z * z / (4.0 * n * n)) / denom;
  out.cycloid_not_sharper = f;
  out.ci_low = std::max(0.0, centre - half);
  out.ci_high = std::min(1.0, centre + half);
  return out;
}

json cmd_ablate_curve(const ScenarioConfig& cfg, std::size_t count) {
  const CurveAblation a = ablate_curves(cfg, count);
  json pairs = json::array();
  for (const auto& p : a.pairs) {
    pairs.push_back({{"seed", p.seed},
                     {"cycloid_max_curvature", p.cycloid_curvature},
                     {"bezier_max_curvature", p.bezier_curvature},
                     {"cycloid_length_m", p.cycloid_length},
                     {"bezier_length_m", p.bezier_length},
                     {"tie", p.tie}});
  }
  return {{"seeds", count},
          {"master_seed", cfg.master_seed},
          {"beta_m", cfg.scenario.settings.beta},
          {"cone_half_angle_rad", cfg.scenario.field.position.half_angle()},
          {"curve_samples", a.samples},
          {"fraction_cycloid_curvature_le_bezier", a.cycloid_not_sharper},
          {"wilson95", {a.ci_low, a.ci_high}},
          {"pairs", pairs}};
}

json cmd_inspect(const fs::path& dataset, std::size_t limit) {
  DatasetReader reader(dataset);
  json records = json::array();
  SerializedRecord r;
  for (std::size_t i = 0; i < limit && reader.next(r); ++i) records.push_back(json::parse(encode_record(r)));
  return {{"manifest", to_json(reader.manifest())}, {"records", records}};
}

int run_cli(int argc, char** argv) {
  CLI::App app{"fieldgen: field-guided reach trajectory and dataset generator"};
  app.footer("\n" + config_key_help() +
             "\nExit codes: 0 ok, 1 internal error, 2 usage, 3 config, 4 generation, 5 dataset.\n"
             "Environment: FIELDGEN_JOBS sets the default --jobs.\n");
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> episodes;
  std::string curve;
  std::string reward;

  auto add_scenario_flags = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "scenario config file (JSON); defaults when omitted");
    cmd->add_option("--seed", seed, "master seed (overrides master_seed)");
    cmd->add_option("--episodes", episodes, "episode count (overrides episodes)");
    cmd->add_option("--curve", curve, "cycloid | bezier (overrides curve_type)")
        ->check(CLI::IsMember({"cycloid", "bezier"}));
    cmd->add_option("--reward", reward, "off | uniform_reward | uniform_volume (overrides reward_mode)")
        ->check(CLI::IsMember({"off", "uniform_reward", "uniform_volume"}));
  };

  auto* gen = app.add_subcommand("generate", "generate an episode dataset");
  add_scenario_flags(gen);
  std::string out_dir;
  unsigned jobs = default_jobs();
  gen->add_option("--out", out_dir, "output dataset directory")->required();
  gen->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  auto* cov = app.add_subcommand("coverage", "voxel coverage of a dataset, a generated set, or the three baselines");
  add_scenario_flags(cov);
  std::string dataset_dir;
  std::optional<std::size_t> resolution;
  bool fixed_cube = true;
  std::string compare;
  std::string scatter;
  cov->add_option("--dataset", dataset_dir, "dataset directory to analyse");
  cov->add_option("--resolution", resolution, "voxels per cube edge (overrides coverage_resolution)")
      ->check(CLI::PositiveNumber);
  cov->add_option("--fixed-cube", fixed_cube, "share one bounding cube across compared sets")->default_val(true);
  cov->add_option("--compare", compare, "comma-separated levels, e.g. low,middle,high");
  cov->add_option("--scatter", scatter, "write XY scatter CSV of all waypoints to this file");

  auto* abl = app.add_subcommand("ablate-curve", "cycloid vs Bezier curvature over seeded start geometries");
  add_scenario_flags(abl);
  std::size_t seeds = 100;
  abl->add_option("--seeds", seeds, "number of start geometries")->check(CLI::PositiveNumber);

  auto* ins = app.add_subcommand("inspect", "print the manifest and the first records of a dataset");
  std::string inspect_dir;
  std::size_t limit = 3;
  ins->add_option("--dataset", inspect_dir, "dataset directory")->required();
  ins->add_option("--limit", limit, "records to print");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ExitCode::usage);
  }

  try {
    auto scenario = [&] {
      ScenarioConfig cfg = config_path.empty() ? default_config() : load_config(config_path);
      json patch = json::object();
      if (seed) patch["master_seed"] = *seed;
      if (episodes) patch["episodes"] = *episodes;
      if (!curve.empty()) patch["curve_type"] = curve;
      if (!reward.empty()) patch["reward_mode"] = reward;
      return patch.empty() ? cfg : with_overrides(cfg, patch);
    };

    if (*gen) {
      const auto cfg = scenario();
      const auto s = cmd_generate(cfg, out_dir, jobs);
      std::cout << "episodes: " << s.episodes << "\nrecords: " << s.records << "\nframes: " << s.frames
                << "\nseconds: " << s.seconds
                << "\nframes/sec: " << (s.seconds > 0 ? static_cast<double>(s.frames) / s.seconds : 0.0)
                << "\nrecords/sec: " << (s.seconds > 0 ? static_cast<double>(s.records) / s.seconds : 0.0)
                << "\nchecksum: " << s.manifest.checksum << "\n";
    } else if (*cov) {
      const auto cfg = scenario();
      CoverageRequest req;
      if (!dataset_dir.empty()) req.dataset = dataset_dir;
      req.resolution = resolution.value_or(cfg.coverage_resolution);
      req.fixed_cube = fixed_cube;
      if (!compare.empty()) req.compare = parse_levels(compare);
      std::cout << cmd_coverage(cfg, req).dump(2) << "\n";
      if (!scatter.empty()) {
        std::vector<Polyline> lines = req.dataset
                                          ? polylines_from_records(read_dataset(*req.dataset).second)
                                          : polylines(generate_baseline(cfg.level, cfg.scenario, cfg.episodes,
                                                                        cfg.master_seed));
        std::ofstream csv(scatter);
        write_scatter_csv(csv, diversity_summary(lines));
        if (!csv) throw DatasetError("cannot write " + scatter);
      }
    } else if (*abl) {
      std::cout << cmd_ablate_curve(scenario(), seeds).dump(2) << "\n";
    } else if (*ins) {
      std::cout << cmd_inspect(inspect_dir, limit).dump(2) << "\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::config);
  } catch (const GenerationError& e) {
    std::cerr << "generation error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::generation);
  } catch (const DatasetError& e) {
    std::cerr << "dataset error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::dataset);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::internal);
  }
  return static_cast<int>(ExitCode::ok);
}

}  // namespace fieldgen
