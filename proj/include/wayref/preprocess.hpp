#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wayref/domain.hpp"

namespace wayref {

inline constexpr std::size_t kObservedSteps = 5;
inline constexpr std::size_t kFutureSteps = 10;
inline constexpr std::size_t kWindowSteps = kObservedSteps + kFutureSteps;

struct ResampledTrack {
  std::string vessel_id;
  Direction direction = Direction::up;
  double t0 = 0.0;    // epoch seconds of positions[0]
  double step = 60.0;
  std::vector<GeoPoint> positions;
  std::vector<double> cogs;  // bearing positions[t] -> positions[t+1]; the last repeats
};

struct PreprocessParams {
  double step = 60.0;
  double gap_limit = 300.0;  // raw gaps above this split the track
};

// Splits a track wherever consecutive records are more than gap_limit apart.
std::vector<Track> split_on_gaps(const Track& track, double gap_limit);

// Cubic Hermite resampling on the grid t0 + k*step, t0 = first timestamp rounded
// up to a multiple of step. Knot tangents are three-point finite differences on
// the non-uniform time grid (exact for quadratic motion). Never extrapolates;
// fewer than two grid points give an empty track.
ResampledTrack resample(const Track& track, double step = 60.0);

// split_on_gaps + resample, dropping empty results.
std::vector<ResampledTrack> resample_all(std::span<const Track> tracks, const PreprocessParams& params = {});

// 15 consecutive grid positions: 5 observed, 10 to predict.
struct SequenceSample {
  std::string id;
  std::string vessel_id;
  Direction direction = Direction::up;
  double t0 = 0.0;
  std::vector<GeoPoint> positions;

  std::span<const GeoPoint> observed() const { return std::span(positions).first(kObservedSteps); }
  std::span<const GeoPoint> future() const { return std::span(positions).last(kFutureSteps); }
};

std::vector<SequenceSample> extract_sequences(const ResampledTrack& rt, std::size_t stride = 1);

}  // namespace wayref
