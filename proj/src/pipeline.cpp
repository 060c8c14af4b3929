#include "wayref/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <fstream>
#include <sstream>

#include "wayref/baseline.hpp"
#include "wayref/errors.hpp"
#include "wayref/io.hpp"
#include "wayref/parallel.hpp"
#include "wayref/synthetic.hpp"

namespace wayref {

namespace {

std::vector<std::vector<double>> read_numeric_csv(std::istream& in, const std::string& header) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty file, expected header " + header);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw ParseError("expected header '" + header + "', got '" + line + "'", 1);
  std::vector<std::vector<double>> rows;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    for (std::string_view cell : split_csv_line(line)) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size())
        throw ParseError("not a number: '" + std::string(cell) + "'", number);
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ParseError("cannot open " + p.string());
  return in;
}

std::string cell(double v) { return std::isnan(v) ? std::string() : format_double(v); }

}  // namespace

void write_route_csv(std::ostream& out, const TypicalRoute& route, const KmShiftMap& shift) {
  out << "km,easting,northing\n";
  for (const auto& k : route.knots())
    out << format_double(shift.to_official(k.km)) << ',' << format_double(k.position.easting) << ','
        << format_double(k.position.northing) << '\n';
}

TypicalRoute read_route_csv(std::istream& in, Direction direction, const KmShiftMap& shift, int zone) {
  std::vector<TypicalRoute::Knot> knots;
  for (const auto& r : read_numeric_csv(in, "km,easting,northing")) {
    if (r.size() != 3) throw ParseError("route rows need 3 columns");
    knots.push_back({shift.to_internal(r[0]), GeoPoint{r[1], r[2], zone}});
  }
  if (knots.size() < 2) throw ValidationError("typical route file has fewer than 2 knots");
  return TypicalRoute(direction, knots, zone);
}

void write_speed_csv(std::ostream& out, const SpeedProfile& speed, const KmShiftMap& shift) {
  out << "km,z\n";
  for (const auto& k : speed.knots()) out << format_double(shift.to_official(k.km)) << ',' << format_double(k.z) << '\n';
}

SpeedProfile read_speed_csv(std::istream& in, Direction direction, const KmShiftMap& shift) {
  std::vector<SpeedProfile::Knot> knots;
  for (const auto& r : read_numeric_csv(in, "km,z")) {
    if (r.size() != 2) throw ParseError("speed rows need 2 columns");
    knots.push_back({shift.to_internal(r[0]), r[1]});
  }
  if (knots.size() < 2) throw ValidationError("speed profile file has fewer than 2 knots");
  return SpeedProfile(direction, knots);
}

void write_context_csv(std::ostream& out, const RouteContext& ctx, const KmShiftMap& shift) {
  out << "km,curvature,orientation,hecto_euclid,f_nav\n";
  for (const HectoContext& e : ctx.entries()) {
    const char* orient = e.orientation == Orientation::left    ? "left"
                         : e.orientation == Orientation::right ? "right"
                                                               : "straight";
    out << format_double(shift.to_official(e.km)) << ',' << format_double(e.curvature) << ',' << orient << ','
        << format_double(e.hecto_euclid) << ',' << format_double(e.f_nav) << '\n';
  }
}

BoundaryPair load_boundary_pair(const std::filesystem::path& path, const KmShiftMap& shift) {
  BoundaryPair b;
  b.right = fit_boundary(load_boundaries(path, Side::right), shift);
  b.left = fit_boundary(load_boundaries(path, Side::left), shift);
  return b;
}

DirectionalGeometry make_directional(Direction direction, const BoundaryPair& boundaries, TypicalRoute route,
                                     SpeedProfile speed, const NavStatsParams& params) {
  DirectionalGeometry d;
  d.direction = direction;
  d.fairway = Fairway::for_direction(boundaries.right, boundaries.left, direction);
  d.route = std::move(route);
  d.speed = std::move(speed);
  d.context = route_context(d.route, d.fairway, params);
  return d;
}

NavStatsParams nav_params_from(const Config& c) {
  NavStatsParams p;
  p.smoothing.window = static_cast<std::size_t>(c.get_int("stats.sgf_window", 21));
  p.smoothing.order = static_cast<std::size_t>(c.get_int("stats.sgf_order", 3));
  p.max_gap_bins = static_cast<std::size_t>(c.get_int("stats.max_gap_bins", 10));
  p.straight_threshold = c.get_double("stats.straight_threshold", 1e-4);
  if (p.smoothing.window % 2 == 0 || p.smoothing.order >= p.smoothing.window)
    throw ValidationError("stats.sgf_window must be odd and larger than stats.sgf_order");
  return p;
}

void split_tracks(std::size_t n, double train_ratio, std::uint64_t seed, std::vector<std::size_t>& train,
                  std::vector<std::size_t>& test) {
  if (!(train_ratio > 0.0 && train_ratio <= 1.0)) throw ValidationError("train ratio must be in (0, 1]");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  SyntheticRng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.next() % i);
    std::swap(order[i - 1], order[j]);
  }
  auto n_train = static_cast<std::size_t>(std::llround(train_ratio * static_cast<double>(n)));
  if (n > 0) n_train = std::max<std::size_t>(n_train, 1);
  train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
}

FeatureSet extract_feature_set(const std::vector<Track>& tracks, const KilometerIndex& index,
                               const BoundaryPair& boundaries, const ExtractOptions& options) {
  FeatureSet fs;
  std::vector<std::size_t> train_ids, test_ids;
  split_tracks(tracks.size(), options.train_ratio, options.seed, train_ids, test_ids);
  fs.train_tracks = train_ids.size();
  fs.test_tracks = test_ids.size();
  std::vector<Track> train_tracks, test_tracks;
  for (std::size_t i : train_ids) train_tracks.push_back(tracks[i]);
  for (std::size_t i : test_ids) test_tracks.push_back(tracks[i]);
  const auto train_rt = resample_all(train_tracks, options.preprocess);
  const auto test_rt = resample_all(test_tracks, options.preprocess);

  GeometryBundle bundle;
  bundle.index = &index;
  for (const Direction dir : {Direction::up, Direction::down}) {
    const bool present = std::any_of(train_tracks.begin(), train_tracks.end(),
                                     [&](const Track& t) { return t.direction == dir; });
    if (!present) continue;
    try {
      TypicalRoute route = extract_typical_route(train_tracks, dir, index, options.nav);
      SpeedProfile speed = extract_speed_profile(train_rt, dir, index, options.nav);
      DirectionalGeometry d = make_directional(dir, boundaries, std::move(route), std::move(speed), options.nav);
      (dir == Direction::up ? bundle.up : bundle.down) = d;
      fs.geometry.push_back(std::move(d));
    } catch (const ValidationError& e) {
      fs.notes.push_back("direction " + std::string(to_string(dir)) + " skipped: " + e.what());
    } catch (const CoverageError& e) {
      fs.notes.push_back("direction " + std::string(to_string(dir)) + " skipped: " + e.what());
    }
  }
  if (fs.geometry.empty()) throw ValidationError("no direction has enough training data");

  auto samples_of = [&](const std::vector<ResampledTrack>& rts) {
    std::vector<SequenceSample> out;
    for (const ResampledTrack& rt : rts) {
      const bool has_geometry = rt.direction == Direction::up ? bundle.up.has_value() : bundle.down.has_value();
      if (!has_geometry) continue;
      for (auto& s : extract_sequences(rt, options.stride)) out.push_back(std::move(s));
    }
    return out;
  };
  const auto train_samples = samples_of(train_rt);
  const auto test_samples = samples_of(test_rt);

  auto encode_all = [&](const std::vector<SequenceSample>& samples) {
    std::vector<std::optional<EncodedSample>> enc(samples.size());
    parallel_for(samples.size(), options.jobs, [&](std::size_t i) {
      try {
        enc[i] = encode_sample(options.system, samples[i], bundle);
      } catch (const CoverageError&) {
      }
    });
    return enc;
  };
  const auto train_enc = encode_all(train_samples);
  const auto test_enc = encode_all(test_samples);

  std::vector<DislocationSeq> fit_seqs;
  for (const auto& e : train_enc)
    if (e) {
      fit_seqs.push_back(e->observed);
      fit_seqs.push_back(e->future);
    }
  if (fit_seqs.empty()) throw ValidationError("no encodable training samples");
  fs.codebook = Codebook::fit(options.system, fit_seqs);

  auto to_records = [&](const std::vector<SequenceSample>& samples,
                        const std::vector<std::optional<EncodedSample>>& enc, std::vector<FeatureRecord>& out) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (!enc[i]) {
        ++fs.skipped_samples;
        continue;
      }
      const SequenceSample& s = samples[i];
      FeatureRecord r;
      r.id = s.id;
      r.vessel_id = s.vessel_id;
      r.system = options.system;
      r.direction = s.direction;
      r.t0 = s.t0;
      r.observed_classes = discretize(enc[i]->observed, fs.codebook).steps;
      r.future_classes = discretize(enc[i]->future, fs.codebook).steps;
      r.context = enc[i]->context;
      r.anchor = enc[i]->future.anchor;
      r.anchor_official_km = index.shift_map().to_official(r.anchor.km);
      const auto obs = s.observed(), fut = s.future();
      r.observed_positions.assign(obs.begin(), obs.end());
      r.future_positions.assign(fut.begin(), fut.end());
      out.push_back(std::move(r));
    }
  };
  to_records(train_samples, train_enc, fs.train);
  to_records(test_samples, test_enc, fs.test);
  return fs;
}

LoadedGeometry load_manifest_geometry(const std::filesystem::path& manifest) {
  const Config c = Config::load(manifest);
  const auto base = manifest.parent_path();
  auto path_of = [&](const char* key) {
    const auto v = c.raw(key);
    if (!v) throw ValidationError("manifest " + manifest.string() + " lacks key '" + key + "'");
    return base / *v;
  };
  LoadedGeometry lg;
  const auto sys = parse_system(c.get_string("system", ""));
  if (!sys) throw ValidationError("manifest has no valid 'system'");
  lg.system = *sys;
  IndexOptions io;
  io.max_lateral = c.get_double("index.max_lateral", 0.0);
  lg.index = std::make_unique<KilometerIndex>(KilometerIndex::build(load_axis(path_of("axis")), io));
  const KmShiftMap& shift = lg.index->shift_map();
  const BoundaryPair boundaries = load_boundary_pair(path_of("boundaries"), shift);
  const NavStatsParams params = nav_params_from(c);
  lg.bundle.index = lg.index.get();
  for (const Direction dir : {Direction::up, Direction::down}) {
    const std::string suffix(to_string(dir));
    if (!c.has("route_" + suffix)) continue;
    auto rin = open_in(base / *c.raw("route_" + suffix));
    auto sin = open_in(base / *c.raw("speed_" + suffix));
    TypicalRoute route = read_route_csv(rin, dir, shift, lg.index->zone());
    SpeedProfile speed = read_speed_csv(sin, dir, shift);
    (dir == Direction::up ? lg.bundle.up : lg.bundle.down) =
        make_directional(dir, boundaries, std::move(route), std::move(speed), params);
  }
  if (c.has("codebook")) {
    auto in = open_in(path_of("codebook"));
    std::stringstream text;
    text << in.rdbuf();
    lg.codebook = codebook_from_json(text.str());
  }
  return lg;
}

namespace {

SequenceSample sample_of(const FeatureRecord& r) {
  SequenceSample s;
  s.id = r.id;
  s.vessel_id = r.vessel_id;
  s.direction = r.direction;
  s.t0 = r.t0;
  s.positions = r.observed_positions;
  s.positions.insert(s.positions.end(), r.future_positions.begin(), r.future_positions.end());
  if (s.positions.size() != kWindowSteps)
    throw ValidationError("record " + r.id + " does not hold " + std::to_string(kWindowSteps) + " positions");
  return s;
}

}  // namespace

std::vector<PredictionRecord> baseline_predictions(const std::vector<FeatureRecord>& records,
                                                   const GeometryBundle& g, std::size_t jobs,
                                                   std::size_t* truncated, std::size_t* uncovered) {
  std::vector<PredictionRecord> all(records.size());
  std::vector<char> state(records.size(), 0);  // 0 ok, 1 truncated, 2 observed outside route coverage
  parallel_for(records.size(), jobs, [&](std::size_t i) {
    BaselinePrediction p;
    try {
      p = baseline_predict(sample_of(records[i]), g);
    } catch (const CoverageError&) {
      state[i] = 2;
      return;
    }
    all[i].id = records[i].id;
    all[i].system = System::nav;
    all[i].units = PredictionUnits::continuous;
    all[i].mc_samples.push_back(p.features.steps);
    state[i] = p.truncated ? 1 : 0;
  });
  std::vector<PredictionRecord> out;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (state[i] != 2) out.push_back(std::move(all[i]));
  if (truncated) *truncated = static_cast<std::size_t>(std::count(state.begin(), state.end(), 1));
  if (uncovered) *uncovered = static_cast<std::size_t>(std::count(state.begin(), state.end(), 2));
  return out;
}

EvalReport evaluate_records(const std::vector<PredictionRecord>& predictions,
                            const std::vector<FeatureRecord>& features, const LoadedGeometry& geometry,
                            std::size_t jobs) {
  std::map<std::string, const FeatureRecord*> by_id;
  for (const FeatureRecord& r : features) by_id[r.id] = &r;

  std::vector<const PredictionRecord*> matched;
  std::size_t missing = 0;
  for (const PredictionRecord& p : predictions) {
    if (by_id.count(p.id))
      matched.push_back(&p);
    else
      ++missing;
  }
  std::vector<PredictionBundle> bundles(matched.size());
  std::vector<std::vector<GeoPoint>> truths(matched.size());
  parallel_for(matched.size(), jobs, [&](std::size_t i) {
    const PredictionRecord& p = *matched[i];
    const FeatureRecord& r = *by_id.at(p.id);
    std::vector<DislocationSeq> seqs;
    for (const auto& member : p.mc_samples) {
      if (p.units == PredictionUnits::classes) {
        if (!geometry.codebook || geometry.codebook->system != p.system)
          throw ValidationError("prediction " + p.id + " is in classes but no matching codebook is available");
        ClassSeq cs;
        cs.system = p.system;
        cs.direction = r.direction;
        cs.anchor = r.anchor;
        for (const FeatureStep& s : member)
          cs.steps.push_back({static_cast<std::int64_t>(std::llround(s.lon)), static_cast<std::int64_t>(std::llround(s.lat))});
        seqs.push_back(undiscretize(cs, *geometry.codebook));
      } else {
        DislocationSeq seq = anchor_sequence(r, member);
        seq.system = p.system;
        seqs.push_back(std::move(seq));
      }
    }
    bundles[i] = make_bundle(p.id, std::move(seqs), geometry.bundle);
    truths[i] = r.future_positions;
  });
  EvalReport report = evaluate(bundles, truths);
  report.missing = missing;
  return report;
}

void write_report(const std::filesystem::path& dir, const EvalReport& report) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "ate_by_horizon.csv");
    out << "horizon_min,ate_mean_m,ate_std_m,samples\n";
    for (const HorizonStat& h : report.horizons)
      out << h.horizon << ',' << format_double(h.mean) << ',' << format_double(h.std) << ',' << report.samples.size()
          << '\n';
  }
  {
    auto out = open_out(dir / "uncertainty_by_step.csv");
    out << "step,mean_u_m\n";
    for (std::size_t t = 0; t < report.mean_u.size(); ++t) out << t + 1 << ',' << format_double(report.mean_u[t]) << '\n';
  }
  {
    auto out = open_out(dir / "per_sample.csv");
    out << "id,ate_1,ate_3,ate_5,ate_10,atu,norm_ate,norm_atu\n";
    for (std::size_t i = 0; i < report.samples.size(); ++i) {
      const SampleEval& s = report.samples[i];
      out << s.sample_id;
      for (double a : s.ate) out << ',' << format_double(a);
      out << ',' << format_double(s.atu);
      if (report.calibrated)
        out << ',' << format_double(report.calibration.norm_ate[i]) << ','
            << format_double(report.calibration.norm_atu[i]);
      else
        out << ",,";
      out << '\n';
    }
  }
  {
    auto out = open_out(dir / "calibration_bins.csv");
    out << "atu_lower,atu_upper,count,norm_ate_mean,norm_ate_std\n";
    for (const CalibrationBin& b : report.calibration.bins)
      out << format_double(b.lower) << ',' << format_double(b.upper) << ',' << b.count << ',' << cell(b.mean_ate)
          << ',' << cell(b.std_ate) << '\n';
  }
  {
    auto out = open_out(dir / "reference_ate.csv");
    out << "river,horizon_min,model,ate_mean_m,ate_std_m\n";
    for (const ReferenceAte& r : reference_ate())
      out << r.river << ',' << r.horizon << ',' << r.model << ',' << format_double(r.mean) << ','
          << format_double(r.std) << '\n';
  }
  {
    auto out = open_out(dir / "reference_discretization.csv");
    out << "system,lon_resolution,lon_unit,lat_resolution,lat_unit,error_m\n";
    for (const ReferenceDiscretization& r : reference_discretization())
      out << r.system << ',' << format_double(r.lon_resolution) << ',' << r.lon_unit << ','
          << format_double(r.lat_resolution) << ',' << r.lat_unit << ',' << format_double(r.error_m) << '\n';
  }
  {
    auto out = open_out(dir / "summary.txt");
    out << "samples_evaluated = " << report.samples.size() << '\n';
    out << "samples_truncated = " << report.truncated << '\n';
    out << "predictions_without_features = " << report.missing << '\n';
    out << "calibrated = " << (report.calibrated ? "true" : "false") << '\n';
    if (!report.calibrated) out << "calibration_note = " << report.calibration_note << '\n';
  }
}

}  // namespace wayref
