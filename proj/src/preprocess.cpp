#include "wayref/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wayref/io.hpp"

namespace wayref {

std::vector<Track> split_on_gaps(const Track& track, double gap_limit) {
  std::vector<Track> parts;
  for (std::size_t i = 0; i < track.records.size(); ++i) {
    if (i == 0 || track.records[i].timestamp - track.records[i - 1].timestamp > gap_limit)
      parts.push_back(Track{track.vessel_id, track.direction, {}});
    parts.back().records.push_back(track.records[i]);
  }
  return parts;
}

namespace {

// Derivative at knot i from three neighbouring knots (a, b, c) = (i-1, i, i+1)
// style stencils on a non-uniform grid.
Vec2 knot_derivative(std::span<const double> t, std::span<const Vec2> p, std::size_t i) {
  const std::size_t n = t.size();
  if (n == 2) return (1.0 / (t[1] - t[0])) * (p[1] - p[0]);
  if (i == 0) {
    const double h0 = t[1] - t[0], h1 = t[2] - t[1];
    return (-(2.0 * h0 + h1) / (h0 * (h0 + h1))) * p[0] + ((h0 + h1) / (h0 * h1)) * p[1] +
           (-h0 / (h1 * (h0 + h1))) * p[2];
  }
  if (i == n - 1) {
    const double h0 = t[n - 2] - t[n - 3], h1 = t[n - 1] - t[n - 2];
    return (h1 / (h0 * (h0 + h1))) * p[n - 3] + (-(h0 + h1) / (h0 * h1)) * p[n - 2] +
           ((2.0 * h1 + h0) / (h1 * (h0 + h1))) * p[n - 1];
  }
  const double h0 = t[i] - t[i - 1], h1 = t[i + 1] - t[i];
  return (1.0 / (h0 * h1 * (h0 + h1))) * (h1 * h1 * (p[i] - p[i - 1]) + h0 * h0 * (p[i + 1] - p[i]));
}

}  // namespace

ResampledTrack resample(const Track& track, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("resample: step must be positive");
  ResampledTrack rt;
  rt.vessel_id = track.vessel_id;
  rt.direction = track.direction;
  rt.step = step;
  const std::size_t n = track.records.size();
  if (n < 2) return rt;

  std::vector<double> t(n);
  std::vector<Vec2> p(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = track.records[i].timestamp;
    p[i] = to_vec(track.records[i].position);
  }
  std::vector<Vec2> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = knot_derivative(t, p, i);

  const int zone = track.records.front().position.zone;
  rt.t0 = std::ceil(t.front() / step) * step;
  std::vector<GeoPoint> out;
  for (std::size_t k = 0;; ++k) {
    const double tk = rt.t0 + static_cast<double>(k) * step;
    if (tk > t.back()) break;
    const auto it = std::upper_bound(t.begin(), t.end(), tk);
    const std::size_t i = std::min(static_cast<std::size_t>(it - t.begin()) - 1, n - 2);
    const double h = t[i + 1] - t[i];
    const double u = (tk - t[i]) / h;
    if (u == 0.0) {
      out.push_back(to_point(p[i], zone));
      continue;
    }
    if (u == 1.0) {
      out.push_back(to_point(p[i + 1], zone));
      continue;
    }
    const double u2 = u * u, u3 = u2 * u;
    const double h00 = 2 * u3 - 3 * u2 + 1, h10 = u3 - 2 * u2 + u;
    const double h01 = -2 * u3 + 3 * u2, h11 = u3 - u2;
    out.push_back(to_point(h00 * p[i] + (h10 * h) * m[i] + h01 * p[i + 1] + (h11 * h) * m[i + 1], zone));
  }
  if (out.size() < 2) return rt;

  rt.positions = std::move(out);
  rt.cogs.resize(rt.positions.size());
  for (std::size_t k = 0; k + 1 < rt.positions.size(); ++k)
    rt.cogs[k] = bearing_deg(rt.positions[k], rt.positions[k + 1]);
  rt.cogs.back() = rt.cogs[rt.cogs.size() - 2];
  return rt;
}

std::vector<ResampledTrack> resample_all(std::span<const Track> tracks, const PreprocessParams& params) {
  std::vector<ResampledTrack> out;
  for (const Track& track : tracks)
    for (const Track& part : split_on_gaps(track, params.gap_limit)) {
      ResampledTrack rt = resample(part, params.step);
      if (!rt.positions.empty()) out.push_back(std::move(rt));
    }
  return out;
}

std::vector<SequenceSample> extract_sequences(const ResampledTrack& rt, std::size_t stride) {
  if (stride == 0) throw std::invalid_argument("extract_sequences: stride must be positive");
  std::vector<SequenceSample> samples;
  if (rt.positions.size() < kWindowSteps) return samples;
  for (std::size_t s = 0; s + kWindowSteps <= rt.positions.size(); s += stride) {
    SequenceSample sample;
    sample.vessel_id = rt.vessel_id;
    sample.direction = rt.direction;
    sample.t0 = rt.t0 + static_cast<double>(s) * rt.step;
    sample.id = rt.vessel_id + "-" + std::string(to_string(rt.direction)) + "-" + format_double(sample.t0);
    sample.positions.assign(rt.positions.begin() + static_cast<std::ptrdiff_t>(s),
                            rt.positions.begin() + static_cast<std::ptrdiff_t>(s + kWindowSteps));
    samples.push_back(std::move(sample));
  }
  return samples;
}

}  // namespace wayref
