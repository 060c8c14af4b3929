#include "wayref/kilometerization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wayref/errors.hpp"
#include "wayref/io.hpp"
#include "wayref/kernels.hpp"

namespace wayref {

namespace {

constexpr double kLabelStep = 0.1;

Vec2 polyline_midpoint(const std::vector<GeoPoint>& pts) {
  double total = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) total += distance(pts[i - 1], pts[i]);
  double remaining = 0.5 * total;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double len = distance(pts[i - 1], pts[i]);
    if (remaining <= len) {
      const double t = remaining / len;
      const Vec2 a = to_vec(pts[i - 1]);
      return a + t * (to_vec(pts[i]) - a);
    }
    remaining -= len;
  }
  return to_vec(pts.back());
}

double polyline_length(const std::vector<GeoPoint>& pts) {
  double total = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) total += distance(pts[i - 1], pts[i]);
  return total;
}

double interpolate(const std::vector<double>& from, const std::vector<double>& to, double v) {
  if (v <= from.front()) return to.front() + (v - from.front());
  if (v >= from.back()) return to.back() + (v - from.back());
  const auto it = std::upper_bound(from.begin(), from.end(), v);
  const std::size_t i = static_cast<std::size_t>(it - from.begin()) - 1;
  const double t = v - from[i];
  if (t == 0.0) return to[i];
  return to[i] + t * (to[i + 1] - to[i]) / (from[i + 1] - from[i]);
}

}  // namespace

KmShiftMap::KmShiftMap(std::span<const double> official_labels)
    : official_(official_labels.begin(), official_labels.end()) {
  if (official_.empty()) throw ValidationError("shift map needs at least one label");
  internal_.resize(official_.size());
  identity_ = true;
  for (std::size_t i = 0; i < official_.size(); ++i) {
    internal_[i] = official_[0] + kLabelStep * static_cast<double>(i);
    if (std::abs(internal_[i] - official_[i]) > 1e-9) identity_ = false;
  }
  if (identity_) internal_ = official_;
}

double KmShiftMap::to_internal(double official_km) const {
  if (identity_) return official_km;
  return interpolate(official_, internal_, official_km);
}

double KmShiftMap::to_official(double internal_km) const {
  if (identity_) return internal_km;
  return interpolate(internal_, official_, internal_km);
}

// ---------------------------------------------------------------------------

KilometerIndex KilometerIndex::build(WaterwayAxis axis, const IndexOptions& options) {
  validate(axis);
  const std::size_t n = axis.profiles.size();
  if (n < 2) throw ValidationError("kilometerization needs at least 2 profiles, got " + std::to_string(n));

  KilometerIndex idx;
  idx.zone_ = axis.profiles.front().points.front().zone;
  std::vector<double> labels;
  double longest = 0.0;
  for (const auto& prof : axis.profiles) {
    labels.push_back(prof.km);
    idx.reps_.push_back(polyline_midpoint(prof.points));
    longest = std::max(longest, polyline_length(prof.points));
  }
  for (std::size_t i = 1; i < n; ++i)
    if (norm(idx.reps_[i] - idx.reps_[i - 1]) <= 0.0)
      throw ValidationError("profiles " + format_double(labels[i - 1]) + " and " +
                            format_double(labels[i]) + " share a representative point");
  idx.shift_ = KmShiftMap(labels);
  idx.max_lateral_ = options.max_lateral > 0.0 ? options.max_lateral : longest;

  for (std::size_t i = 0; i < n; ++i) {
    const auto& pts = axis.profiles[i].points;
    const Vec2 chord = normalized(to_vec(pts.back()) - to_vec(pts.front()));
    Vec2 t{chord.y, -chord.x};
    const Vec2 along = idx.reps_[std::min(i + 1, n - 1)] - idx.reps_[i > 0 ? i - 1 : 0];
    if (dot(t, along) < 0.0) t = -1.0 * t;
    if (std::abs(dot(normalized(along), t)) < 0.2)
      throw ValidationError("profile " + format_double(labels[i]) +
                            " is nearly parallel to the axis direction");
    idx.tangents_.push_back(t);
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Vec2 p0 = idx.reps_[i], p1 = idx.reps_[i + 1];
    const Vec2 t0 = idx.tangents_[i], t1 = idx.tangents_[i + 1];
    const double chord = norm(p1 - p0);
    const double theta = std::abs(std::atan2(cross(t0, t1), dot(t0, t1)));
    double magnitude = chord;
    if (theta > 1e-9) {
      // exact for circular arcs: arc length from the chord, then the
      // circle-fitting Hermite derivative 4 tan(theta/4) R
      const double arc = chord * (0.5 * theta) / std::sin(0.5 * theta);
      magnitude = 4.0 * std::tan(0.25 * theta) * arc / theta;
    }
    HermiteSegment seg{p0, p1, magnitude * t0, magnitude * t1};
    idx.segments_.push_back(seg);
    idx.seg_length_.push_back(seg.length());
  }

  for (const Vec2& r : idx.reps_) {
    idx.rep_x_.push_back(r.x);
    idx.rep_y_.push_back(r.y);
  }
  idx.tree_ = KdTree2(idx.reps_);
  idx.axis_ = std::move(axis);
  return idx;
}

double KilometerIndex::side_of(std::size_t profile, Vec2 p) const {
  return dot(p - reps_[profile], tangents_[profile]);
}

std::ptrdiff_t KilometerIndex::enclosing_segment(Vec2 p, std::size_t nearest) const {
  const auto last_profile = static_cast<std::ptrdiff_t>(reps_.size()) - 1;
  auto encloses = [&](std::ptrdiff_t i) {
    if (i < 0 || i >= last_profile) return false;
    const double a = side_of(static_cast<std::size_t>(i), p);
    const double b = side_of(static_cast<std::size_t>(i + 1), p);
    return a >= 0.0 && (b < 0.0 || (i + 1 == last_profile && b <= 0.0));
  };
  const auto j = static_cast<std::ptrdiff_t>(nearest);
  if (encloses(j - 1)) return j - 1;
  if (encloses(j)) return j;
  for (std::ptrdiff_t i = j - 3; i <= j + 2; ++i)
    if (encloses(i)) return i;
  return -1;
}

std::size_t KilometerIndex::nearest_profile(const GeoPoint& p) const {
  return tree_.nearest(to_vec(p)).index;
}

std::size_t KilometerIndex::nearest_profile_linear(const GeoPoint& p) const {
  return kernels::nearest(rep_x_, rep_y_, p.easting, p.northing).index;
}

KmFix KilometerIndex::kilometrize(const GeoPoint& gp) const {
  const Vec2 p = to_vec(gp);
  const std::size_t nearest = nearest_profile(gp);
  const auto& labels = internal_labels();
  const std::size_t last = reps_.size() - 1;

  KmFix fix;
  fix.waterway_id = axis_.waterway_id;
  double lateral = 0.0;

  const std::ptrdiff_t seg_id = enclosing_segment(p, nearest);
  if (seg_id >= 0) {
    const auto i = static_cast<std::size_t>(seg_id);
    const HermiteSegment& seg = segments_[i];
    const double a = side_of(i, p);
    const double b = -side_of(i + 1, p);
    double u = (a + b) > 0.0 ? a / (a + b) : 0.0;
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 50; ++iter) {
      const Vec2 c = seg.point(u), d1 = seg.d1(u), d2 = seg.d2(u);
      const double g = dot(c - p, d1);
      if (g < 0.0) lo = u; else hi = u;
      const double dg = dot(d1, d1) + dot(c - p, d2);
      double next = dg > 0.0 ? u - g / dg : 0.5 * (lo + hi);
      if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
      const bool done = std::abs(next - u) < 1e-14;
      u = next;
      if (done) break;
    }
    const Vec2 foot = seg.point(u);
    const Vec2 t = normalized(seg.d1(u));
    lateral = -cross(t, p - foot);
    fix.km = labels[i] + kLabelStep * seg.length(u) / seg_length_[i];
    if (u == 0.0) fix.km = labels[i];
    if (u == 1.0) fix.km = labels[i + 1];
  } else {
    const bool before = nearest <= 3 && side_of(0, p) < 0.0;
    const bool after = nearest + 3 >= last && side_of(last, p) > 0.0;
    const std::size_t end = before ? 0 : last;
    const double seg_len = before ? seg_length_.front() : seg_length_.back();
    const double along = (before || after) ? side_of(end, p) : 0.0;
    if ((!before && !after) || std::abs(along) > seg_len * (1.0 + 1e-12))
      throw OutOfCorridorError("point (" + format_double(gp.easting) + ", " +
                                   format_double(gp.northing) + ") outside axis coverage",
                               shift_.to_official(labels[nearest]));
    fix.km = labels[end] + kLabelStep * along / seg_len;
    lateral = -cross(tangents_[end], p - reps_[end]);
  }

  if (std::abs(lateral) > max_lateral_)
    throw OutOfCorridorError("point (" + format_double(gp.easting) + ", " + format_double(gp.northing) +
                                 ") is " + format_double(std::abs(lateral)) +
                                 " m from the axis, beyond the corridor",
                             shift_.to_official(fix.km));
  fix.lateral = lateral;
  fix.axis_distance = std::abs(lateral);
  fix.axis_side = lateral >= 0.0 ? Side::right : Side::left;
  fix.official_km = shift_.to_official(fix.km);
  return fix;
}

std::size_t KilometerIndex::segment_for_km(double km) const {
  const auto& labels = internal_labels();
  const auto it = std::upper_bound(labels.begin(), labels.end(), km);
  const auto k = static_cast<std::ptrdiff_t>(it - labels.begin()) - 1;
  return static_cast<std::size_t>(
      std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(segments_.size()) - 1));
}

GeoPoint KilometerIndex::inverse_kilometrize(double km, double lateral_offset,
                                             Direction direction) const {
  const auto& labels = internal_labels();
  const double offset = direction == Direction::up ? lateral_offset : -lateral_offset;
  const double tol = 1e-9;
  if (!std::isfinite(km) || km < labels.front() - kLabelStep - tol || km > labels.back() + kLabelStep + tol)
    throw CoverageError("km " + format_double(shift_.to_official(km)) + " outside axis coverage");

  Vec2 base, t;
  if (km < labels.front() || km > labels.back()) {
    const bool before = km < labels.front();
    const std::size_t end = before ? 0 : labels.size() - 1;
    const double seg_len = before ? seg_length_.front() : seg_length_.back();
    t = tangents_[end];
    base = reps_[end] + ((km - labels[end]) / kLabelStep * seg_len) * t;
  } else {
    const std::size_t i = segment_for_km(km);
    const double frac = std::clamp((km - labels[i]) / kLabelStep, 0.0, 1.0);
    const HermiteSegment& seg = segments_[i];
    const double u = seg.param_at_length(frac * seg_length_[i]);
    base = seg.point(u);
    t = normalized(seg.d1(u));
  }
  return to_point(base + offset * right_normal(t), zone_);
}

Vec2 KilometerIndex::axis_tangent(double km) const {
  const auto& labels = internal_labels();
  if (km <= labels.front()) return tangents_.front();
  if (km >= labels.back()) return tangents_.back();
  const std::size_t i = segment_for_km(km);
  const double frac = std::clamp((km - labels[i]) / kLabelStep, 0.0, 1.0);
  const HermiteSegment& seg = segments_[i];
  return normalized(seg.d1(seg.param_at_length(frac * seg_length_[i])));
}

double KilometerIndex::meters_per_km(double km) const {
  return seg_length_[segment_for_km(km)] / kLabelStep;
}

}  // namespace wayref
