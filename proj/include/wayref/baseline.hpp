#pragma once

#include <span>
#include <vector>

#include "wayref/features.hpp"

namespace wayref {

// Statistical extrapolation: the mean deviation from the typical km progress
// and the mean signed distance from the typical route over the observed
// window are carried forward unchanged.
struct BaselineState {
  double mean_dev = 0.0;  // km/min, travel direction
  double mean_off = 0.0;  // m, positive towards travel-left
  double km_last = 0.0;
  double s_last = 0.0;
};

BaselineState baseline_state(std::span<const GeoPoint> observed, const GeometryBundle& g, Direction direction);

struct BaselinePrediction {
  DislocationSeq features;  // nav system, continuous, anchored at the last observed position
  std::vector<GeoPoint> positions;
  bool truncated = false;
};

BaselinePrediction baseline_predict(const SequenceSample& sample, const GeometryBundle& g);

}  // namespace wayref
