#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "support.hpp"
#include "wayref/errors.hpp"
#include "wayref/features.hpp"
#include "wayref/preprocess.hpp"

using namespace wayref;
using wayref::test::RiverFixture;

namespace {

constexpr System kSystems[] = {System::glob, System::riv, System::nav};

// Window of 15 positions for a vessel at a constant right-of-travel offset
// and constant km rate.
SequenceSample window(const RiverFixture& fx, Direction dir, double km0, double rate, double offset,
                      double offset_drift = 0.0) {
  SequenceSample s;
  s.id = "w";
  s.vessel_id = "w";
  s.direction = dir;
  const double sigma = direction_sense(dir);
  for (std::size_t t = 0; t < kWindowSteps; ++t) {
    const double km = km0 + sigma * rate * static_cast<double>(t);
    s.positions.push_back(fx.travel_point(km, offset + offset_drift * static_cast<double>(t), dir));
  }
  return s;
}

double max_error(const std::vector<GeoPoint>& a, std::span<const GeoPoint> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, distance(a[i], b[i]));
  return worst;
}

}  // namespace

TEST(Codec, StationaryVessel) {
  RiverFixture fx(test::arc_spec(), 5.0, 0.2);
  const GeoPoint p = fx.travel_point(10.7, 12.0, Direction::up);
  const std::vector<GeoPoint> still(4, p);
  const auto glob = encode(System::glob, still, fx.bundle(), Direction::up, 37.0);
  const auto riv = encode(System::riv, still, fx.bundle(), Direction::up);
  const auto nav = encode(System::nav, still, fx.bundle(), Direction::up);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(glob.steps[i].lon, 0.0);
    EXPECT_EQ(glob.steps[i].lat, 0.0);
    EXPECT_EQ(riv.steps[i].lon, 0.0);
    EXPECT_EQ(riv.steps[i].lat, 0.0);
    EXPECT_DOUBLE_EQ(nav.steps[i].lon, -0.2);
    EXPECT_EQ(nav.steps[i].lat, 0.0);
  }
}

TEST(Codec, OnRouteAtTypicalSpeedIsZero) {
  for (Direction dir : {Direction::up, Direction::down}) {
    RiverFixture fx(test::arc_spec(), 10.0, 0.05);
    const double km0 = dir == Direction::up ? 10.2 : 11.3;
    const SequenceSample s = window(fx, dir, km0, 0.05, 10.0);
    const auto nav = encode(System::nav, s.positions, fx.bundle(), dir);
    EXPECT_NEAR(nav.anchor.s, 0.0, 1e-3);
    for (const FeatureStep& st : nav.steps) {
      EXPECT_NEAR(st.lon, 0.0, 1e-7);
      EXPECT_NEAR(st.lat, 0.0, 1e-3);
    }
  }
}

TEST(Codec, NavOffsetSignIsTravelLeft) {
  RiverFixture fx(test::straight_spec(), 0.0, 0.05);
  // 8 m right of travel going up = 8 m right of the route
  EXPECT_NEAR(nav_state(fx.travel_point(10.5, 8.0, Direction::up), fx.bundle(), Direction::up).s, -8.0, 1e-9);
  EXPECT_NEAR(nav_state(fx.travel_point(10.5, -8.0, Direction::down), fx.bundle(), Direction::down).s, 8.0, 1e-9);
}

TEST(Codec, RightAngleTurnGlob) {
  const std::vector<GeoPoint> p{{0, 0}, {100, 0}, {100, 100}};
  const GeometryBundle none;
  const auto seq = encode(System::glob, p, none, Direction::up, 90.0);
  ASSERT_EQ(seq.steps.size(), 2u);
  EXPECT_DOUBLE_EQ(seq.steps[0].lon, 100.0);
  EXPECT_DOUBLE_EQ(seq.steps[0].lat, 0.0);
  EXPECT_DOUBLE_EQ(seq.steps[1].lon, 100.0);
  EXPECT_DOUBLE_EQ(seq.steps[1].lat, -90.0);
}

TEST(Codec, GlobDecodeNorth) {
  DislocationSeq seq;
  seq.system = System::glob;
  seq.anchor.position = {500.0, 1000.0};
  seq.anchor.heading = 0.0;
  seq.steps.assign(3, {100.0, 0.0});
  const auto out = decode(seq, GeometryBundle{});
  ASSERT_EQ(out.positions.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(out.positions[i].easting, 500.0, 1e-12);
    EXPECT_NEAR(out.positions[i].northing, 1000.0 + 100.0 * static_cast<double>(i + 1), 1e-12);
  }
}

TEST(Codec, RoundTripStraightAllSystems) {
  RiverFixture fx(test::straight_spec(), 3.0, 0.2);
  std::mt19937_64 rng(31);
  std::normal_distribution<double> jitter(0.0, 4.0);
  for (System sys : kSystems)
    for (Direction dir : {Direction::up, Direction::down}) {
      SequenceSample s = window(fx, dir, dir == Direction::up ? 10.3 : 11.7, 0.09, -6.0, 0.7);
      for (auto& p : s.positions) {
        p.easting += jitter(rng);
        p.northing += jitter(rng);
      }
      const auto seq = encode(sys, s.positions, fx.bundle(), dir, 10.0);
      const auto dec = decode(seq, fx.bundle());
      ASSERT_FALSE(dec.truncated);
      EXPECT_LT(max_error(dec.positions, std::span(s.positions).subspan(1)), 0.05)
          << to_string(sys) << " " << to_string(dir);
    }
}

TEST(Codec, RoundTripCurvedWithinBound) {
  RiverFixture fx(test::arc_spec(), 10.0, 0.1);
  std::mt19937_64 rng(32);
  std::normal_distribution<double> jitter(0.0, 3.0);
  for (System sys : kSystems)
    for (Direction dir : {Direction::up, Direction::down}) {
      SequenceSample s = window(fx, dir, dir == Direction::up ? 10.1 : 11.4, 0.08, 15.0, -1.0);
      for (auto& p : s.positions) {
        p.easting += jitter(rng);
        p.northing += jitter(rng);
      }
      const EncodedSample enc = encode_sample(sys, s, fx.bundle());
      const auto dec = decode(enc.future, fx.bundle());
      ASSERT_FALSE(dec.truncated);
      ASSERT_EQ(dec.positions.size(), kFutureSteps);
      EXPECT_LT(max_error(dec.positions, s.future()), 1.5) << to_string(sys);
    }
}

TEST(Codec, EncodeSampleLayout) {
  RiverFixture fx(test::arc_spec(), 0.0, 0.1);
  const SequenceSample s = window(fx, Direction::up, 10.3, 0.08, 0.0);
  for (System sys : kSystems) {
    const EncodedSample enc = encode_sample(sys, s, fx.bundle());
    EXPECT_EQ(enc.observed.steps.size(), kObservedSteps);
    EXPECT_EQ(enc.future.steps.size(), kFutureSteps);
    EXPECT_EQ(enc.future.anchor.position, s.positions[kObservedSteps - 1]);
    EXPECT_EQ(enc.observed.anchor.position.easting, 2 * s.positions[0].easting - s.positions[1].easting);
    EXPECT_EQ(enc.context.size(), sys == System::glob ? 1u : sys == System::riv ? 2u : 3u);
    EXPECT_NEAR(enc.future.anchor.km, 10.62, 1e-9);
    EXPECT_NEAR(enc.future.anchor.rel, 0.5, 1e-6);
    EXPECT_NEAR(enc.context[0], 1.0 / 500.0, 0.02 / 500.0);
    if (sys != System::glob) EXPECT_EQ(enc.context[1], 1.0);
  }
  // a constant-velocity lead-in makes the first observed step equal the second
  const EncodedSample g = encode_sample(System::glob, s, fx.bundle());
  EXPECT_NEAR(g.observed.steps[0].lon, distance(s.positions[0], s.positions[1]), 1e-9);
}

TEST(Codec, OutOfCoverageNamesPosition) {
  RiverFixture fx(test::straight_spec(), 0.0, 0.1);
  const std::vector<GeoPoint> p{fx.travel_point(10.5, 0, Direction::up), {0.0, 9000.0}};
  try {
    encode(System::riv, p, fx.bundle(), Direction::up);
    FAIL();
  } catch (const CoverageError& e) {
    EXPECT_NE(std::string(e.what()).find("position 1"), std::string::npos);
  }
  DislocationSeq seq = encode(System::riv, std::span(p).first(1), fx.bundle(), Direction::up);
  seq.steps.assign(10, {0.5, 0.0});
  const DecodeResult r = decode(seq, fx.bundle());
  EXPECT_TRUE(r.truncated);
  EXPECT_LT(r.positions.size(), 10u);
}

// --- discretization -------------------------------------------------------------

TEST(Discretize, RoundingExamples) {
  Codebook cb;
  cb.system = System::riv;
  cb.lon = {1.0, -100, 100};
  cb.lat = {0.005, -100, 100};
  DislocationSeq seq;
  seq.system = System::riv;
  seq.steps = {{0.37, -0.0567}};
  const ClassSeq cs = discretize(seq, cb);
  EXPECT_EQ(cs.steps[0].lon, 0);
  EXPECT_EQ(cs.steps[0].lat, -11);
  const DislocationSeq back = undiscretize(cs, cb);
  EXPECT_EQ(back.steps[0].lon, 0.0);
  EXPECT_NEAR(back.steps[0].lat, -0.055, 1e-15);
}

TEST(Discretize, SaturationIsCounted) {
  Codebook cb;
  cb.lon = {1.0, -2, 2};
  cb.lat = {1.0, -2, 2};
  DislocationSeq seq;
  seq.steps = {{5.0, 0.0}, {-9.0, 1.0}, {1.0, 3.0}};
  SaturationCounter sat;
  const ClassSeq cs = discretize(seq, cb, &sat);
  EXPECT_EQ(sat.count, 3u);
  EXPECT_EQ(cs.steps[0].lon, 2);
  EXPECT_EQ(cs.steps[1].lon, -2);
}

TEST(Discretize, HalfResolutionPropertyFuzzed) {
  std::mt19937_64 rng(77);
  for (System sys : kSystems) {
    const FeatureStep res = Codebook::default_resolution(sys);
    Codebook cb;
    cb.system = sys;
    cb.lon = {res.lon, -100000, 100000};
    cb.lat = {res.lat, -100000, 100000};
    std::uniform_real_distribution<double> ulon(-90000 * res.lon, 90000 * res.lon),
        ulat(-90000 * res.lat, 90000 * res.lat);
    DislocationSeq seq;
    seq.system = sys;
    for (int i = 0; i < 20000; ++i) seq.steps.push_back({ulon(rng), ulat(rng)});
    const DislocationSeq back = undiscretize(discretize(seq, cb), cb);
    for (std::size_t i = 0; i < seq.steps.size(); ++i) {
      ASSERT_LE(std::abs(back.steps[i].lon - seq.steps[i].lon), res.lon / 2 * (1 + 1e-12));
      ASSERT_LE(std::abs(back.steps[i].lat - seq.steps[i].lat), res.lat / 2 * (1 + 1e-12));
    }
  }
}

TEST(Discretize, CodebookFitRange) {
  DislocationSeq seq;
  seq.steps = {{0.0104, -0.02}, {0.0251, 0.013}};
  const Codebook cb = Codebook::fit(System::riv, std::vector<DislocationSeq>{seq});
  EXPECT_EQ(cb.lon.resolution, 0.001);
  EXPECT_EQ(cb.lon.min_class, 10 - 3);
  EXPECT_EQ(cb.lon.max_class, 25 + 3);
  EXPECT_EQ(cb.lat.min_class, -4 - 3);
  EXPECT_EQ(cb.lat.max_class, 3 + 3);
  EXPECT_THROW(Codebook::fit(System::riv, std::vector<DislocationSeq>{}), ValidationError);
  EXPECT_EQ(Codebook::default_resolution(System::glob).lat, 0.5);
  EXPECT_EQ(Codebook::default_resolution(System::nav).lat, 1.0);
}

TEST(Discretize, AlignedGlobMotionHasNoError) {
  RiverFixture fx(test::straight_spec(), 0.0, 0.12);
  SequenceSample s;
  s.direction = Direction::up;
  for (std::size_t t = 0; t < kWindowSteps; ++t) s.positions.push_back({0.0, 100.0 + 120.0 * static_cast<double>(t)});
  Codebook cb;
  cb.system = System::glob;
  cb.lon = {1.0, -500, 500};
  cb.lat = {0.5, -400, 400};
  const std::vector<SequenceSample> samples{s};
  EXPECT_NEAR(measure_discretization_error(samples, System::glob, fx.bundle(), cb), 0.0, 1e-9);
}

TEST(Discretize, FineResolutionLimit) {
  RiverFixture fx(test::arc_spec(), 4.0, 0.1);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> jitter(0.0, 2.0);
  std::vector<SequenceSample> samples;
  for (int i = 0; i < 10; ++i) {
    SequenceSample s = window(fx, Direction::up, 10.1 + 0.02 * i, 0.07, 5.0);
    for (auto& p : s.positions) p.easting += jitter(rng);
    samples.push_back(s);
  }
  for (System sys : kSystems) {
    double continuous = 0.0;
    std::vector<DislocationSeq> seqs;
    for (const auto& s : samples) {
      const EncodedSample enc = encode_sample(sys, s, fx.bundle());
      continuous += distance(decode(enc.future, fx.bundle()).positions.back(), s.positions.back());
      seqs.push_back(enc.future);
    }
    continuous /= static_cast<double>(samples.size());
    const Codebook fine = Codebook::fit(sys, seqs, {1e-12, 1e-12});
    EXPECT_NEAR(measure_discretization_error(samples, sys, fx.bundle(), fine), continuous, 1e-6) << to_string(sys);
  }
}
