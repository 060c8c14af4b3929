// wayref: command-line front end for the waterway trajectory toolkit.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "wayref/errors.hpp"
#include "wayref/io.hpp"
#include "wayref/kilometerization.hpp"
#include "wayref/navigation_stats.hpp"
#include "wayref/pipeline.hpp"
#include "wayref/preprocess.hpp"
#include "wayref/synthetic.hpp"

namespace fs = std::filesystem;
using namespace wayref;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
  Config config;
  fs::path config_dir;

  // A path option: the flag wins, else the config key (relative to the config file).
  fs::path path(const std::string& flag, const std::string& key) const {
    if (!flag.empty()) return flag;
    if (const auto v = config.raw(key)) {
      const fs::path p(*v);
      return p.is_absolute() ? p : config_dir / p;
    }
    throw ValidationError("missing --" + key + " (no flag and no '" + key + "' in the config)");
  }
  std::uint64_t seed_value() const {
    if (seed) return *seed;
    return static_cast<std::uint64_t>(config.get_int("seed", 42));
  }
};

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

std::ifstream open_in(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ParseError("cannot open input file: " + p.string());
  return in;
}

IndexOptions index_options(const Config& c, double flag) {
  IndexOptions o;
  o.max_lateral = flag > 0.0 ? flag : c.get_double("index.max_lateral", 0.0);
  return o;
}

PreprocessParams preprocess_params(const Config& c) {
  PreprocessParams p;
  p.step = c.get_double("preprocess.step", p.step);
  p.gap_limit = c.get_double("preprocess.gap_limit", p.gap_limit);
  return p;
}

AisLoadOptions ais_options(const Config& c) {
  AisLoadOptions o;
  o.utm_zone = static_cast<int>(c.get_int("ais.utm_zone", 0));
  o.zone_tag = static_cast<int>(c.get_int("ais.zone_tag", 0));
  return o;
}

void report_rejections(const AisLoadResult& ais) {
  if (ais.rejected.count == 0 && ais.duplicates_dropped == 0) return;
  std::cerr << "ais: " << ais.rejected.count << " rows rejected";
  if (!ais.rejected.first_lines.empty()) {
    std::cerr << " (lines";
    for (auto l : ais.rejected.first_lines) std::cerr << ' ' << l;
    std::cerr << ')';
  }
  std::cerr << ", " << ais.duplicates_dropped << " duplicates dropped\n";
}

// --- subcommands -----------------------------------------------------------

void gen_synthetic(const Globals& g, const std::string& spec_path, const std::string& out_dir) {
  Config spec = Config::load(spec_path);
  for (const auto& [k, v] : g.config.values())
    if (!spec.has(k)) spec.set(k, v);
  const std::uint64_t seed =
      g.seed ? *g.seed : static_cast<std::uint64_t>(spec.get_int("seed", 42));
  const SyntheticRiver river = gen_river(river_spec_from(spec));
  const auto tracks = gen_traffic(river, traffic_spec_from(spec), seed);
  write_dataset(out_dir, river, tracks);
  std::size_t records = 0;
  for (const auto& t : tracks) records += t.records.size();
  std::cout << "wrote " << river.axis().profiles.size() << " profiles, " << tracks.size() << " tracks, "
            << records << " AIS records to " << out_dir << '\n';
}

void build_index(const Globals& g, const fs::path& axis_path, const std::string& report_path, double max_lateral) {
  const KilometerIndex idx = KilometerIndex::build(load_axis(axis_path), index_options(g.config, max_lateral));
  const auto& official = idx.shift_map().official_labels();
  std::ostringstream r;
  r << "waterway_id = " << idx.axis().waterway_id << '\n';
  r << "profiles = " << official.size() << '\n';
  r << "official_km_min = " << format_double(official.front()) << '\n';
  r << "official_km_max = " << format_double(official.back()) << '\n';
  r << "internal_km_min = " << format_double(idx.km_min()) << '\n';
  r << "internal_km_max = " << format_double(idx.km_max()) << '\n';
  r << "shift_identity = " << (idx.shift_map().is_identity() ? "true" : "false") << '\n';
  r << "tree_depth = " << idx.tree().depth() << '\n';
  r << "max_lateral_m = " << format_double(idx.max_lateral()) << '\n';
  std::size_t gaps = 0;
  std::ostringstream list;
  for (std::size_t i = 1; i < official.size(); ++i) {
    const double step = official[i] - official[i - 1];
    if (std::abs(step - 0.1) > 1e-9) {
      ++gaps;
      list << "gap = " << format_double(official[i - 1]) << " -> " << format_double(official[i]) << '\n';
    }
  }
  r << "label_gaps = " << gaps << '\n' << list.str();
  if (report_path.empty()) {
    std::cout << r.str();
  } else {
    auto out = open_out(report_path);
    out << r.str();
  }
}

void kilometrize_points(const Globals& g, const fs::path& axis_path, const fs::path& points_path,
                        const std::string& out_path, double max_lateral) {
  const KilometerIndex idx = KilometerIndex::build(load_axis(axis_path), index_options(g.config, max_lateral));
  auto in = open_in(points_path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty points file " + points_path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);
  std::ptrdiff_t ie = -1, in_ = -1, iid = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "easting") ie = static_cast<std::ptrdiff_t>(i);
    if (header[i] == "northing") in_ = static_cast<std::ptrdiff_t>(i);
    if (header[i] == "id") iid = static_cast<std::ptrdiff_t>(i);
  }
  if (ie < 0 || in_ < 0) throw ParseError("points file needs easting and northing columns", 1);

  std::ostringstream out;
  out << "id,easting,northing,waterway_id,km,internal_km,axis_distance,axis_side,status\n";
  std::size_t number = 1, outside = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) throw ParseError("wrong column count", number);
    GeoPoint p;
    auto num = [&](std::string_view c) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc() || ptr != c.data() + c.size()) throw ParseError("not a number: " + std::string(c), number);
      return v;
    };
    p.easting = num(cells[static_cast<std::size_t>(ie)]);
    p.northing = num(cells[static_cast<std::size_t>(in_)]);
    const std::string id = iid >= 0 ? std::string(cells[static_cast<std::size_t>(iid)]) : std::to_string(number - 1);
    out << id << ',' << format_double(p.easting) << ',' << format_double(p.northing) << ',';
    try {
      const KmFix f = idx.kilometrize(p);
      out << f.waterway_id << ',' << format_double(f.official_km) << ',' << format_double(f.km) << ','
          << format_double(f.axis_distance) << ',' << to_string(f.axis_side) << ",ok\n";
    } catch (const OutOfCorridorError& e) {
      ++outside;
      out << idx.axis().waterway_id << ',' << format_double(e.nearest_km()) << ",,,,out_of_corridor\n";
    }
  }
  if (out_path.empty()) {
    std::cout << out.str();
  } else {
    auto f = open_out(out_path);
    f << out.str();
  }
  if (outside) std::cerr << outside << " points outside the corridor\n";
}

void extract_stats(const Globals& g, const fs::path& ais_path, const fs::path& axis_path,
                   const std::optional<fs::path>& boundaries_path, Direction dir, const fs::path& out_dir) {
  const KilometerIndex idx = KilometerIndex::build(load_axis(axis_path), index_options(g.config, 0.0));
  const AisLoadResult ais = load_ais(ais_path, ais_options(g.config));
  report_rejections(ais);
  const NavStatsParams params = nav_params_from(g.config);
  const TypicalRoute route = extract_typical_route(ais.tracks, dir, idx, params);
  const SpeedProfile speed = extract_speed_profile(resample_all(ais.tracks, preprocess_params(g.config)), dir, idx, params);
  const std::string suffix(to_string(dir));
  fs::create_directories(out_dir);
  {
    auto out = open_out(out_dir / ("route_" + suffix + ".csv"));
    write_route_csv(out, route, idx.shift_map());
  }
  {
    auto out = open_out(out_dir / ("speed_" + suffix + ".csv"));
    write_speed_csv(out, speed, idx.shift_map());
  }
  if (boundaries_path) {
    const BoundaryPair b = load_boundary_pair(*boundaries_path, idx.shift_map());
    const RouteContext ctx = route_context(route, Fairway::for_direction(b.right, b.left, dir), params);
    auto out = open_out(out_dir / ("context_" + suffix + ".csv"));
    write_context_csv(out, ctx, idx.shift_map());
  }
  for (const auto& h : route.holes)
    std::cerr << "coverage hole: km " << format_double(idx.shift_map().to_official(h.from)) << " - "
              << format_double(idx.shift_map().to_official(h.to)) << '\n';
  std::cout << "typical route: " << route.knots().size() << " knots, speed profile: " << speed.knots().size()
            << " knots, rejected points: " << route.rejected_points << '\n';
}

void extract_features(const Globals& g, const fs::path& ais_path, const fs::path& axis_path,
                      const fs::path& boundaries_path, System system, const fs::path& out_dir,
                      std::optional<double> train_ratio, std::optional<std::size_t> stride) {
  const IndexOptions io = index_options(g.config, 0.0);
  const KilometerIndex idx = KilometerIndex::build(load_axis(axis_path), io);
  const AisLoadResult ais = load_ais(ais_path, ais_options(g.config));
  report_rejections(ais);
  const BoundaryPair boundaries = load_boundary_pair(boundaries_path, idx.shift_map());

  ExtractOptions eo;
  eo.system = system;
  eo.train_ratio = train_ratio.value_or(g.config.get_double("train_ratio", 0.87));
  eo.stride = stride.value_or(static_cast<std::size_t>(g.config.get_int("stride", 1)));
  eo.seed = g.seed_value();
  eo.jobs = g.jobs;
  eo.preprocess = preprocess_params(g.config);
  eo.nav = nav_params_from(g.config);
  const FeatureSet set = extract_feature_set(ais.tracks, idx, boundaries, eo);

  fs::create_directories(out_dir);
  // copies keep the output directory self-contained for later subcommands
  fs::copy_file(axis_path, out_dir / "axis.csv", fs::copy_options::overwrite_existing);
  fs::copy_file(boundaries_path, out_dir / "boundaries.csv", fs::copy_options::overwrite_existing);
  Config manifest;
  manifest.set("system", std::string(to_string(system)));
  manifest.set("axis", "axis.csv");
  manifest.set("boundaries", "boundaries.csv");
  manifest.set("codebook", "codebook.json");
  manifest.set("train", "train.jsonl");
  manifest.set("test", "test.jsonl");
  manifest.set("seed", std::to_string(eo.seed));
  manifest.set("train_ratio", format_double(eo.train_ratio));
  manifest.set("stride", std::to_string(eo.stride));
  manifest.set("index.max_lateral", format_double(io.max_lateral));
  manifest.set("stats.sgf_window", std::to_string(eo.nav.smoothing.window));
  manifest.set("stats.sgf_order", std::to_string(eo.nav.smoothing.order));
  manifest.set("stats.max_gap_bins", std::to_string(eo.nav.max_gap_bins));
  manifest.set("stats.straight_threshold", format_double(eo.nav.straight_threshold));
  for (const DirectionalGeometry& d : set.geometry) {
    const std::string suffix(to_string(d.direction));
    {
      auto out = open_out(out_dir / ("route_" + suffix + ".csv"));
      write_route_csv(out, d.route, idx.shift_map());
    }
    {
      auto out = open_out(out_dir / ("speed_" + suffix + ".csv"));
      write_speed_csv(out, d.speed, idx.shift_map());
    }
    {
      auto out = open_out(out_dir / ("context_" + suffix + ".csv"));
      write_context_csv(out, d.context, idx.shift_map());
    }
    manifest.set("route_" + suffix, "route_" + suffix + ".csv");
    manifest.set("speed_" + suffix, "speed_" + suffix + ".csv");
  }
  {
    auto out = open_out(out_dir / "codebook.json");
    out << codebook_to_json(set.codebook);
  }
  for (const auto& [name, records] : {std::pair{"train.jsonl", &set.train}, std::pair{"test.jsonl", &set.test}}) {
    auto out = open_out(out_dir / name);
    for (const FeatureRecord& r : *records) out << to_json_line(r) << '\n';
  }
  {
    auto out = open_out(out_dir / "manifest.cfg");
    out << to_text(manifest);
  }
  for (const auto& note : set.notes) std::cerr << note << '\n';
  std::cout << "tracks: " << set.train_tracks << " train / " << set.test_tracks << " test; samples: "
            << set.train.size() << " train / " << set.test.size() << " test; skipped " << set.skipped_samples
            << '\n';
}

fs::path manifest_for(const std::string& flag, const fs::path& features) {
  if (!flag.empty()) return flag;
  return features.parent_path() / "manifest.cfg";
}

std::vector<FeatureRecord> load_features(const fs::path& p) {
  auto in = open_in(p);
  return read_feature_records(in);
}

void baseline_predict(const Globals& g, const fs::path& features_path, const std::string& manifest_flag,
                      const fs::path& out_path) {
  const LoadedGeometry geo = load_manifest_geometry(manifest_for(manifest_flag, features_path));
  const auto records = load_features(features_path);
  std::size_t truncated = 0, uncovered = 0;
  const auto preds = baseline_predictions(records, geo.bundle, g.jobs, &truncated, &uncovered);
  auto out = open_out(out_path);
  for (const PredictionRecord& p : preds) out << to_json_line(p) << '\n';
  std::cout << "baseline predictions: " << preds.size() << " (" << truncated << " truncated, " << uncovered
            << " skipped outside typical-route coverage)\n";
}

void evaluate_cmd(const Globals& g, const fs::path& predictions_path, const fs::path& features_path,
                  const std::string& manifest_flag, const fs::path& out_dir) {
  const LoadedGeometry geo = load_manifest_geometry(manifest_for(manifest_flag, features_path));
  const auto features = load_features(features_path);
  std::vector<PredictionRecord> preds;
  {
    auto in = open_in(predictions_path);
    preds = read_prediction_records(in);
  }
  const EvalReport report = evaluate_records(preds, features, geo, g.jobs);
  write_report(out_dir, report);
  for (const HorizonStat& h : report.horizons)
    std::cout << "ATE " << h.horizon << " min: " << format_double(std::round(h.mean * 100) / 100) << " +- "
              << format_double(std::round(h.std * 100) / 100) << " m\n";
  if (!report.calibrated) std::cerr << "calibration skipped: " << report.calibration_note << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Waterway-referenced vessel trajectory toolkit"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed = 42;
  auto* seed_opt = app.add_option("--seed", seed, "Random seed (default 42)");
  app.add_option("--config", g.config_path, "Flat key = value config file; flags override it");
  app.add_option("--jobs", g.jobs, "Worker threads (0 = all cores)")->default_val(1);

  std::string spec, out, axis, points, ais, boundaries, direction, system, features, predictions, manifest;
  std::string report;
  double max_lateral = 0.0;
  std::optional<double> train_ratio;
  std::optional<std::size_t> stride;

  auto* gen = app.add_subcommand("gen-synthetic", "Generate a synthetic river with traffic");
  gen->add_option("--spec", spec, "River/traffic spec (config format)")->required();
  gen->add_option("--out", out, "Output directory")->required();

  auto* bi = app.add_subcommand("build-index", "Build the kilometer index and report its statistics");
  bi->add_option("--axis", axis, "Profile CSV");
  bi->add_option("--out-report", report, "Report file (default: stdout)");
  bi->add_option("--max-lateral", max_lateral, "Corridor half width in meters");

  auto* km = app.add_subcommand("kilometrize", "Kilometerize points");
  km->add_option("--axis", axis, "Profile CSV");
  km->add_option("--points", points, "CSV with easting,northing (optional id)")->required();
  km->add_option("--out", out, "Output CSV (default: stdout)");
  km->add_option("--max-lateral", max_lateral, "Corridor half width in meters");

  auto* es = app.add_subcommand("extract-stats", "Typical route and speed profile for one direction");
  es->add_option("--ais", ais, "AIS CSV");
  es->add_option("--axis", axis, "Profile CSV");
  es->add_option("--boundaries", boundaries, "Boundary CSV (enables the hectometer context table)");
  es->add_option("--direction", direction, "up or down")->required();
  es->add_option("--out", out, "Output directory")->required();

  auto* ef = app.add_subcommand("extract-features", "Encode train/test feature JSONL");
  ef->add_option("--ais", ais, "AIS CSV");
  ef->add_option("--axis", axis, "Profile CSV");
  ef->add_option("--boundaries", boundaries, "Boundary CSV");
  ef->add_option("--system", system, "glob, riv or nav");
  ef->add_option("--out", out, "Output directory")->required();
  ef->add_option("--train-ratio", train_ratio, "Share of tracks used for training (default 0.87)");
  ef->add_option("--stride", stride, "Window stride in steps (default 1)");

  auto* bp = app.add_subcommand("baseline-predict", "Statistical baseline predictions");
  bp->add_option("--features", features, "Feature JSONL")->required();
  bp->add_option("--manifest", manifest, "Manifest (default: manifest.cfg beside the features)");
  bp->add_option("--out", out, "Prediction JSONL")->required();

  auto* ev = app.add_subcommand("evaluate", "ATE/ATU report for a prediction file");
  ev->add_option("--predictions", predictions, "Prediction JSONL")->required();
  ev->add_option("--features", features, "Feature JSONL")->required();
  ev->add_option("--manifest", manifest, "Manifest (default: manifest.cfg beside the features)");
  ev->add_option("--out", out, "Report directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (*seed_opt) g.seed = seed;

  try {
    if (!g.config_path.empty()) {
      g.config = Config::load(g.config_path);
      g.config_dir = fs::path(g.config_path).parent_path();
    }
    auto opt_path = [&](const std::string& flag, const std::string& key) -> std::optional<fs::path> {
      if (flag.empty() && !g.config.has(key)) return std::nullopt;
      return g.path(flag, key);
    };
    if (*gen) {
      gen_synthetic(g, spec, out);
    } else if (*bi) {
      build_index(g, g.path(axis, "axis"), report, max_lateral);
    } else if (*km) {
      kilometrize_points(g, g.path(axis, "axis"), points, out, max_lateral);
    } else if (*es) {
      const auto dir = parse_direction(direction);
      if (!dir) {
        std::cerr << "error: --direction must be up or down\n";
        return kUsage;
      }
      extract_stats(g, g.path(ais, "ais"), g.path(axis, "axis"), opt_path(boundaries, "boundaries"), *dir, out);
    } else if (*ef) {
      const std::string sys_text = system.empty() ? g.config.get_string("system", "") : system;
      const auto sys = parse_system(sys_text);
      if (!sys) {
        std::cerr << "error: --system must be glob, riv or nav\n";
        return kUsage;
      }
      extract_features(g, g.path(ais, "ais"), g.path(axis, "axis"), g.path(boundaries, "boundaries"), *sys, out,
                       train_ratio, stride);
    } else if (*bp) {
      baseline_predict(g, features, manifest, out);
    } else if (*ev) {
      evaluate_cmd(g, predictions, features, manifest, out);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const CoverageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}
