#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <numeric>
#include <random>
#include <sstream>

#include "support.hpp"
#include "wayref/baseline.hpp"
#include "wayref/config.hpp"
#include "wayref/errors.hpp"
#include "wayref/evaluation.hpp"
#include "wayref/parallel.hpp"
#include "wayref/pipeline.hpp"
#include "wayref/records.hpp"

using namespace wayref;
using wayref::test::RiverFixture;

namespace {

SequenceSample constant_deviation_window(const RiverFixture& fx, Direction dir, double km0, double rate,
                                         double offset) {
  SequenceSample s;
  s.id = "c";
  s.direction = dir;
  for (std::size_t t = 0; t < kWindowSteps; ++t)
    s.positions.push_back(fx.travel_point(km0 + direction_sense(dir) * rate * static_cast<double>(t), offset, dir));
  return s;
}

std::vector<std::vector<GeoPoint>> ensemble(std::initializer_list<std::initializer_list<GeoPoint>> members) {
  std::vector<std::vector<GeoPoint>> out;
  for (auto m : members) out.emplace_back(m);
  return out;
}

}  // namespace

// --- baseline -------------------------------------------------------------------

TEST(Baseline, OnRouteFollowsRoute) {
  RiverFixture fx(test::arc_spec(), 8.0, 0.06);
  for (Direction dir : {Direction::up, Direction::down}) {
    const SequenceSample s = constant_deviation_window(fx, dir, dir == Direction::up ? 10.2 : 11.3, 0.06, 8.0);
    const BaselinePrediction p = baseline_predict(s, fx.bundle());
    ASSERT_FALSE(p.truncated);
    ASSERT_EQ(p.positions.size(), kFutureSteps);
    EXPECT_LT(ate(p.positions, s.future(), kFutureSteps), 0.5);
  }
}

TEST(Baseline, DeviationArithmetic) {
  RiverFixture fx(test::straight_spec(), 0.0, 0.020);
  const SequenceSample s = constant_deviation_window(fx, Direction::up, 10.1, 0.030, 0.0);
  const BaselineState b = baseline_state(s.observed(), fx.bundle(), Direction::up);
  EXPECT_NEAR(b.mean_dev, 0.010, 1e-12);
  EXPECT_NEAR(b.mean_off, 0.0, 1e-9);
  const BaselinePrediction p = baseline_predict(s, fx.bundle());
  double km = b.km_last;
  for (const GeoPoint& q : p.positions) {
    const double next = fx.index().kilometrize(q).km;
    EXPECT_NEAR(next - km, 0.030, 1e-9);
    km = next;
  }
}

TEST(Baseline, OffsetJumpsToObservedMean) {
  RiverFixture fx(test::straight_spec(), 0.0, 0.05);
  SequenceSample s = constant_deviation_window(fx, Direction::up, 10.2, 0.05, 0.0);
  // drift from 10 m to 2 m right of the route over the observed window
  for (std::size_t t = 0; t < kObservedSteps; ++t) s.positions[t].easting = 10.0 - 2.0 * static_cast<double>(t);
  const BaselineState b = baseline_state(s.observed(), fx.bundle(), Direction::up);
  EXPECT_NEAR(b.mean_off, -6.0, 1e-9);  // right of travel is negative
  EXPECT_NEAR(b.s_last, -2.0, 1e-9);
  const BaselinePrediction p = baseline_predict(s, fx.bundle());
  for (const GeoPoint& q : p.positions) EXPECT_NEAR(q.easting, 6.0, 1e-9);
  EXPECT_EQ(p.features.steps[0].lat, -4.0);
  EXPECT_EQ(p.features.steps[1].lat, 0.0);
}

TEST(Baseline, ConstantDeviationTrafficIsExact) {
  RiverFixture fx(test::arc_spec(), 0.0, 0.05);
  for (Direction dir : {Direction::up, Direction::down})
    for (double offset : {-20.0, 0.0, 15.0}) {
      const SequenceSample s =
          constant_deviation_window(fx, dir, dir == Direction::up ? 10.2 : 11.3, 0.05 + 0.013, offset);
      const BaselinePrediction p = baseline_predict(s, fx.bundle());
      ASSERT_FALSE(p.truncated);
      EXPECT_LT(ate(p.positions, s.future(), kFutureSteps), 1.0);
    }
}

// --- evaluation metrics -----------------------------------------------------------

TEST(Metrics, AteCases) {
  const std::vector<GeoPoint> truth{{0, 0}, {10, 0}, {20, 0}};
  EXPECT_EQ(ate(truth, truth, 3), 0.0);
  std::vector<GeoPoint> shifted = truth;
  for (auto& p : shifted) p.northing += 3.0;
  for (std::size_t h = 1; h <= 3; ++h) EXPECT_NEAR(ate(shifted, truth, h), 3.0, 1e-12);
  const std::vector<GeoPoint> pred{{3, 0}, {10, 4}, {0, 0}};
  EXPECT_NEAR(ate(pred, truth, 2), 3.5355339059327378, 1e-9);
  EXPECT_THROW(ate(pred, truth, 4), ValidationError);
  EXPECT_THROW(ate(pred, truth, 0), ValidationError);
}

TEST(Metrics, AteScalesLinearly) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 5.0);
  std::vector<GeoPoint> truth(10), pred(10), scaled(10);
  for (std::size_t i = 0; i < 10; ++i) {
    truth[i] = {n(rng), n(rng)};
    pred[i] = {truth[i].easting + n(rng), truth[i].northing + n(rng)};
    scaled[i] = {truth[i].easting + 3.0 * (pred[i].easting - truth[i].easting),
                 truth[i].northing + 3.0 * (pred[i].northing - truth[i].northing)};
  }
  EXPECT_GT(ate(pred, truth, 10), 0.0);
  EXPECT_NEAR(ate(scaled, truth, 10), 3.0 * ate(pred, truth, 10), 1e-9);
}

TEST(Metrics, UncertaintyUnitCases) {
  const auto same = ensemble({{{5, 5}}, {{5, 5}}, {{5, 5}}});
  EXPECT_EQ(uncertainty(same, 0), 0.0);
  const auto pm = ensemble({{{-1, 7}}, {{1, 7}}});
  EXPECT_NEAR(uncertainty(pm, 0), 1.0, 1e-12);
  const auto corners = ensemble({{{-1, -1}}, {{1, -1}}, {{-1, 1}}, {{1, 1}}});
  EXPECT_NEAR(uncertainty(corners, 0), std::sqrt(2.0), 1e-12);
  EXPECT_EQ(uncertainty(ensemble({{{3, 4}}}), 0), 0.0);
}

TEST(Metrics, AtuCases) {
  EXPECT_EQ(atu(ensemble({{{1, 1}, {2, 2}}, {{1, 1}, {2, 2}}})), 0.0);
  EXPECT_NEAR(atu(ensemble({{{-2, 0}, {5, -2}}, {{2, 0}, {5, 2}}})), 2.0, 1e-12);
  // u = {1, sqrt(3)} over two steps
  const double r3 = std::sqrt(3.0);
  EXPECT_NEAR(atu(ensemble({{{-1, 0}, {-r3, 0}}, {{1, 0}, {r3, 0}}})), std::sqrt(2.0), 1e-12);
}

TEST(Metrics, AggregateCases) {
  DislocationSeq a, b;
  a.steps.assign(3, {0.0, 0.0});
  b.steps.assign(3, {2.0, 2.0});
  b.anchor.heading = 99.0;
  const DislocationSeq m = aggregate(std::vector<DislocationSeq>{a, b});
  for (const auto& s : m.steps) {
    EXPECT_EQ(s.lon, 1.0);
    EXPECT_EQ(s.lat, 1.0);
  }
  EXPECT_EQ(m.anchor.heading, 0.0);
  const DislocationSeq one = aggregate(std::vector<DislocationSeq>{b});
  EXPECT_EQ(one.steps[2].lon, 2.0);

  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> u(-50, 50);
  std::vector<DislocationSeq> seqs(7);
  for (auto& s : seqs)
    for (int t = 0; t < 10; ++t) s.steps.push_back({u(rng) * 0.001, u(rng) * 0.005});
  const DislocationSeq ref = aggregate(seqs);
  std::shuffle(seqs.begin(), seqs.end(), rng);
  const DislocationSeq perm = aggregate(seqs);
  for (std::size_t t = 0; t < 10; ++t) {
    EXPECT_NEAR(perm.steps[t].lon, ref.steps[t].lon, 1e-15);
    EXPECT_NEAR(perm.steps[t].lat, ref.steps[t].lat, 1e-15);
  }
  DislocationSeq shorter;
  shorter.steps.resize(2);
  seqs.push_back(shorter);
  EXPECT_THROW(aggregate(seqs), ValidationError);
}

TEST(Calibration, BinEdges) {
  EXPECT_EQ(calibration_bin(0.0), 0u);
  EXPECT_EQ(calibration_bin(0.1), 1u);
  EXPECT_EQ(calibration_bin(0.3), 3u);
  EXPECT_EQ(calibration_bin(0.7), 7u);
  EXPECT_EQ(calibration_bin(0.09999999999999999), 0u);
  EXPECT_EQ(calibration_bin(0.95), 9u);
  EXPECT_EQ(calibration_bin(1.0), 9u);
}

TEST(Calibration, CorrelatedAndConstantAte) {
  std::vector<double> v;
  for (int i = 0; i <= 40; ++i) v.push_back(0.37 * i + 1.0);
  const Calibration c = calibration_bins(v, v);
  for (std::size_t b = 1; b < 10; ++b) EXPECT_GT(c.bins[b].mean_ate, c.bins[b - 1].mean_ate);

  std::vector<double> flat(v.size(), 4.0);
  flat[0] = 3.0;  // ATE needs a nonzero range; the outlier sits in bin 0
  const Calibration d = calibration_bins(flat, v);
  for (std::size_t b = 1; b < 10; ++b) EXPECT_EQ(d.bins[b].mean_ate, 1.0);
  EXPECT_THROW(calibration_bins(std::vector<double>(5, 1.0), v), ValidationError);
  EXPECT_THROW(calibration_bins(std::vector<double>{1.0}, std::vector<double>{1.0}), ValidationError);
}

TEST(Calibration, EvaluateReportsZeroRange) {
  DislocationSeq s;
  s.system = System::glob;
  s.steps.assign(10, {10.0, 0.0});
  std::vector<PredictionBundle> bundles;
  std::vector<std::vector<GeoPoint>> truths;
  for (int i = 0; i < 3; ++i) {
    bundles.push_back(make_bundle("s" + std::to_string(i), {s}, GeometryBundle{}));
    truths.push_back(bundles.back().mean_positions);
    truths.back()[9].easting += i;
  }
  const EvalReport r = evaluate(bundles, truths);
  EXPECT_EQ(r.samples.size(), 3u);
  EXPECT_FALSE(r.calibrated);
  EXPECT_NE(r.calibration_note.find("ATU"), std::string::npos);
  EXPECT_EQ(r.horizons.size(), kReportHorizons.size());
  EXPECT_EQ(r.horizons[0].mean, 0.0);
  EXPECT_NEAR(r.horizons[3].mean, (0.0 + std::sqrt(0.1) + std::sqrt(0.4)) / 3.0, 1e-12);
}

TEST(Reference, TablesPresent) {
  EXPECT_EQ(reference_ate().size(), 32u);
  bool found = false;
  for (const auto& r : reference_ate())
    if (std::string(r.river) == "Rhine" && r.horizon == 10 && std::string(r.model) == "Baseline") {
      EXPECT_EQ(r.mean, 46.89);
      EXPECT_EQ(r.std, 41.13);
      found = true;
    }
  EXPECT_TRUE(found);
  EXPECT_EQ(reference_discretization()[0].error_m, 5.15);
}

// --- records and config ------------------------------------------------------------

TEST(Records, FeatureRoundTrip) {
  FeatureRecord r;
  r.id = "V1-up-1700000060";
  r.vessel_id = "V1";
  r.system = System::nav;
  r.direction = Direction::down;
  r.t0 = 1700000060.0;
  r.observed_classes = {{1, -2}, {0, 0}};
  r.future_classes = {{-3, 4}};
  r.context = {0.002, -1.0, 101.25};
  r.anchor = {{391234.5, 5512345.25, 32}, 123.5, 10.4567, 0.31, -7.125};
  r.anchor_official_km = 10.5567;
  r.observed_positions = {{1.5, 2.5, 32}};
  r.future_positions = {{3.5, 4.5, 32}, {5.5, 6.5, 32}};
  const std::string line = to_json_line(r);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  const FeatureRecord back = parse_feature_record(line);
  EXPECT_EQ(back.id, r.id);
  EXPECT_EQ(back.system, r.system);
  EXPECT_EQ(back.direction, r.direction);
  EXPECT_EQ(back.future_classes[0].lat, 4);
  EXPECT_EQ(back.context, r.context);
  EXPECT_EQ(back.anchor.position, r.anchor.position);
  EXPECT_EQ(back.anchor.s, r.anchor.s);
  EXPECT_EQ(back.anchor_official_km, r.anchor_official_km);
  EXPECT_EQ(back.future_positions[1], r.future_positions[1]);
  EXPECT_EQ(to_json_line(back), line);
}

TEST(Records, PredictionRoundTripAndErrors) {
  PredictionRecord p;
  p.id = "x";
  p.system = System::riv;
  p.units = PredictionUnits::classes;
  p.mc_samples = {{{1, 2}, {3, 4}}, {{5, 6}, {7, 8}}};
  const PredictionRecord back = parse_prediction_record(to_json_line(p));
  EXPECT_EQ(back.units, PredictionUnits::classes);
  EXPECT_EQ(back.mc_samples[1][1].lat, 8.0);
  std::istringstream in(to_json_line(p) + "\n\n{not json}\n");
  try {
    read_prediction_records(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_prediction_record(R"({"id":"a","system":"glob","units":"continuous","mc_samples":[]})"),
               ParseError);
}

TEST(Records, CodebookJson) {
  Codebook cb;
  cb.system = System::nav;
  cb.lon = {0.001, -40, 55};
  cb.lat = {1.0, -12, 9};
  const Codebook back = codebook_from_json(codebook_to_json(cb));
  EXPECT_EQ(back.system, System::nav);
  EXPECT_EQ(back.lon.resolution, 0.001);
  EXPECT_EQ(back.lon.max_class, 55);
  EXPECT_EQ(back.lat.min_class, -12);
  EXPECT_THROW(codebook_from_json("[]"), ParseError);
}

TEST(Config, ParseAndTypes) {
  std::istringstream in("# comment\nseed = 7\n\nratio=0.5 # trailing\nname = hello world\nflag = true\nseed = 9\n");
  const Config c = Config::parse(in);
  EXPECT_EQ(c.get_int("seed", 0), 9);
  EXPECT_EQ(c.get_double("ratio", 0.0), 0.5);
  EXPECT_EQ(c.get_string("name", ""), "hello world");
  EXPECT_TRUE(c.get_bool("flag", false));
  EXPECT_EQ(c.get_int("missing", 3), 3);
  EXPECT_THROW(c.get_int("name", 0), ValidationError);
  std::istringstream bad("just a line\n");
  try {
    Config::parse(bad);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  std::istringstream again(to_text(c));
  EXPECT_EQ(Config::parse(again).values(), c.values());
}

// --- plumbing ---------------------------------------------------------------------

TEST(Parallel, CoversAllIndicesAndRethrowsLowest) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  EXPECT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  try {
    parallel_for(100, 3, [](std::size_t i) {
      if (i == 17 || i == 60) throw std::runtime_error("fail " + std::to_string(i));
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "fail 17");
  }
}

TEST(Split, WholeTracksSeeded) {
  std::vector<std::size_t> tr, te, tr2, te2;
  split_tracks(100, 0.87, 42, tr, te);
  EXPECT_EQ(tr.size(), 87u);
  EXPECT_EQ(te.size(), 13u);
  split_tracks(100, 0.87, 42, tr2, te2);
  EXPECT_EQ(tr, tr2);
  std::vector<std::size_t> all = tr;
  all.insert(all.end(), te.begin(), te.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i], i);
  split_tracks(100, 0.87, 43, tr2, te2);
  EXPECT_NE(tr, tr2);
  EXPECT_THROW(split_tracks(10, 0.0, 1, tr, te), ValidationError);
}
