#include "wayref/navigation_stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>

#include "wayref/errors.hpp"
#include "wayref/io.hpp"
#include "wayref/preprocess.hpp"

namespace wayref {

namespace {

constexpr double kBinKm = 0.01;
constexpr double kHecto = 0.1;
constexpr double kSlack = 1e-9;

std::int64_t decameter_bin(double km) { return static_cast<std::int64_t>(std::floor(km / kBinKm + 1e-9)); }

struct BinnedRows {
  std::vector<std::int64_t> bins;
  std::vector<std::vector<double>> rows;  // per bin, one aggregate per channel
};

// Groups consecutive bins into coverage intervals. Short runs of empty bins
// are filled by linear interpolation (in bin index) of all channels; longer
// runs close the interval and are reported as holes. Each channel is then
// smoothed per interval.
std::vector<CoveredSeries::Interval> build_intervals(const BinnedRows& binned, std::size_t km_channel,
                                                     const NavStatsParams& params,
                                                     std::vector<KmRange>& holes) {
  std::vector<std::vector<std::vector<double>>> groups;  // interval -> knot -> channels
  for (std::size_t b = 0; b < binned.bins.size(); ++b) {
    const auto& row = binned.rows[b];
    if (b > 0) {
      const std::int64_t missing = binned.bins[b] - binned.bins[b - 1] - 1;
      if (missing > static_cast<std::int64_t>(params.max_gap_bins)) {
        holes.push_back({binned.rows[b - 1][km_channel], row[km_channel]});
        groups.emplace_back();
      } else {
        const auto& prev = binned.rows[b - 1];
        for (std::int64_t g = 1; g <= missing; ++g) {
          const double f = static_cast<double>(g) / static_cast<double>(missing + 1);
          std::vector<double> fill(row.size());
          for (std::size_t c = 0; c < row.size(); ++c) fill[c] = prev[c] + f * (row[c] - prev[c]);
          groups.back().push_back(std::move(fill));
        }
      }
    } else {
      groups.emplace_back();
    }
    groups.back().push_back(row);
  }

  std::vector<CoveredSeries::Interval> intervals;
  for (auto& group : groups) {
    if (group.size() < 2) {
      if (!group.empty()) holes.push_back({group.front()[km_channel], group.front()[km_channel]});
      continue;
    }
    const std::size_t channels = group.front().size();
    std::vector<std::vector<double>> series(channels, std::vector<double>(group.size()));
    for (std::size_t k = 0; k < group.size(); ++k)
      for (std::size_t c = 0; c < channels; ++c) series[c][k] = group[k][c];
    CoveredSeries::Interval iv;
    for (std::size_t c = 0; c < channels; ++c) {
      auto smoothed = savgol_filter(series[c], params.smoothing);
      if (c == km_channel)
        iv.km = std::move(smoothed);
      else
        iv.channels.push_back(std::move(smoothed));
    }
    for (std::size_t k = 1; k < iv.km.size(); ++k)
      if (!(iv.km[k] > iv.km[k - 1]))
        throw ValidationError("smoothed kilometers not increasing near km " + format_double(iv.km[k]));
    intervals.push_back(std::move(iv));
  }
  std::sort(holes.begin(), holes.end(), [](const KmRange& a, const KmRange& b) { return a.from < b.from; });
  return intervals;
}

// Splits a knot sequence wherever the spacing exceeds 1.5 bins.
std::vector<CoveredSeries::Interval> intervals_from_knots(std::span<const double> km,
                                                          const std::vector<std::vector<double>>& channels) {
  std::vector<CoveredSeries::Interval> out;
  for (std::size_t k = 0; k < km.size(); ++k) {
    if (k == 0 || km[k] - km[k - 1] > 1.5 * kBinKm) {
      out.emplace_back();
      out.back().channels.resize(channels.size());
    }
    out.back().km.push_back(km[k]);
    for (std::size_t c = 0; c < channels.size(); ++c) out.back().channels[c].push_back(channels[c][k]);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

CoveredSeries::CoveredSeries(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  std::sort(intervals_.begin(), intervals_.end(),
            [](const Interval& a, const Interval& b) { return a.km.front() < b.km.front(); });
  for (const Interval& iv : intervals_) {
    if (iv.km.size() < 2) throw ValidationError("coverage interval needs at least 2 knots");
    std::vector<Pchip> curves;
    for (const auto& ch : iv.channels) {
      if (ch.size() != iv.km.size()) throw ValidationError("channel length differs from knot count");
      curves.emplace_back(iv.km, ch);
    }
    curves_.push_back(std::move(curves));
  }
}

bool CoveredSeries::covers(double km) const {
  for (const Interval& iv : intervals_)
    if (km >= iv.km.front() - kSlack && km <= iv.km.back() + kSlack) return true;
  return false;
}

const std::vector<Pchip>& CoveredSeries::interval_for(double km) const {
  for (std::size_t i = 0; i < intervals_.size(); ++i)
    if (km >= intervals_[i].km.front() - kSlack && km <= intervals_[i].km.back() + kSlack) return curves_[i];
  throw CoverageError("km " + format_double(km) + " outside typical-route coverage");
}

double CoveredSeries::value(std::size_t channel, double km) const {
  const Pchip& c = interval_for(km).at(channel);
  return c(std::clamp(km, c.x_min(), c.x_max()));
}

double CoveredSeries::derivative(std::size_t channel, double km) const {
  const Pchip& c = interval_for(km).at(channel);
  return c.derivative(std::clamp(km, c.x_min(), c.x_max()));
}

std::vector<std::pair<double, double>> CoveredSeries::coverage() const {
  std::vector<std::pair<double, double>> out;
  for (const Interval& iv : intervals_) out.emplace_back(iv.km.front(), iv.km.back());
  return out;
}

// ---------------------------------------------------------------------------

TypicalRoute::TypicalRoute(Direction direction, std::span<const Knot> knots, int zone)
    : direction_(direction), zone_(zone) {
  std::vector<double> km;
  std::vector<std::vector<double>> ch(2);
  for (const Knot& k : knots) {
    km.push_back(k.km);
    ch[0].push_back(k.position.easting);
    ch[1].push_back(k.position.northing);
  }
  series_ = CoveredSeries(intervals_from_knots(km, ch));
}

GeoPoint TypicalRoute::operator()(double km) const {
  return {series_.value(0, km), series_.value(1, km), zone_};
}

Vec2 TypicalRoute::tangent(double km) const {
  const Vec2 d{series_.derivative(0, km), series_.derivative(1, km)};
  return direction_sense(direction_) * normalized(d);
}

std::vector<TypicalRoute::Knot> TypicalRoute::knots() const {
  std::vector<Knot> out;
  for (const auto& iv : series_.intervals())
    for (std::size_t k = 0; k < iv.km.size(); ++k)
      out.push_back({iv.km[k], GeoPoint{iv.channels[0][k], iv.channels[1][k], zone_}});
  return out;
}

SpeedProfile::SpeedProfile(Direction direction, std::span<const Knot> knots) : direction_(direction) {
  std::vector<double> km;
  std::vector<std::vector<double>> ch(1);
  for (const Knot& k : knots) {
    if (!(k.z > 0.0)) throw ValidationError("typical speed must be positive at km " + format_double(k.km));
    km.push_back(k.km);
    ch[0].push_back(k.z);
  }
  series_ = CoveredSeries(intervals_from_knots(km, ch));
}

double SpeedProfile::operator()(double km) const { return series_.value(0, km); }

std::vector<SpeedProfile::Knot> SpeedProfile::knots() const {
  std::vector<Knot> out;
  for (const auto& iv : series_.intervals())
    for (std::size_t k = 0; k < iv.km.size(); ++k) out.push_back({iv.km[k], iv.channels[0][k]});
  return out;
}

// ---------------------------------------------------------------------------

RouteContext::RouteContext(Direction direction, std::vector<HectoContext> entries, double straight_threshold)
    : direction_(direction), entries_(std::move(entries)), straight_threshold_(straight_threshold) {
  if (entries_.empty()) throw ValidationError("route context needs at least one hectometer");
  std::sort(entries_.begin(), entries_.end(),
            [](const HectoContext& a, const HectoContext& b) { return a.km < b.km; });
}

HectoContext RouteContext::at(double km) const {
  if (km <= entries_.front().km) return entries_.front();
  if (km >= entries_.back().km) return entries_.back();
  const auto it = std::upper_bound(entries_.begin(), entries_.end(), km,
                                   [](double v, const HectoContext& e) { return v < e.km; });
  const HectoContext& b = *it;
  const HectoContext& a = *(it - 1);
  const double f = (km - a.km) / (b.km - a.km);
  HectoContext out;
  out.km = km;
  out.curvature = a.curvature + f * (b.curvature - a.curvature);
  out.orientation = classify_orientation(out.curvature, straight_threshold_);
  out.hecto_euclid = a.hecto_euclid + f * (b.hecto_euclid - a.hecto_euclid);
  out.f_nav = a.f_nav + f * (b.f_nav - a.f_nav);
  return out;
}

// ---------------------------------------------------------------------------

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return lower + 0.5 * (upper - lower);
}

double three_point_curvature(Vec2 a, Vec2 b, Vec2 c) {
  const double ab = norm(b - a), bc = norm(c - b), ca = norm(a - c);
  const double denom = ab * bc * ca;
  if (denom == 0.0) return 0.0;
  return 2.0 * cross(b - a, c - b) / denom;
}

Orientation classify_orientation(double curvature, double straight_threshold) {
  if (std::abs(curvature) < straight_threshold) return Orientation::straight;
  return curvature > 0.0 ? Orientation::left : Orientation::right;
}

TypicalRoute extract_typical_route(std::span<const Track> tracks, Direction direction,
                                   const KilometerIndex& index, const NavStatsParams& params) {
  std::map<std::int64_t, std::vector<std::array<double, 3>>> bins;
  std::size_t used_tracks = 0, rejected = 0;
  for (const Track& track : tracks) {
    if (track.direction != direction) continue;
    ++used_tracks;
    for (const AisRecord& r : track.records) {
      try {
        const KmFix fix = index.kilometrize(r.position);
        bins[decameter_bin(fix.km)].push_back({fix.km, r.position.easting, r.position.northing});
      } catch (const OutOfCorridorError&) {
        ++rejected;
      }
    }
  }
  if (used_tracks == 0)
    throw ValidationError("no tracks in direction " + std::string(to_string(direction)));
  if (bins.empty()) throw ValidationError("no kilometerizable positions for the typical route");

  BinnedRows binned;
  for (const auto& [bin, samples] : bins) {
    std::vector<double> km, e, n;
    for (const auto& s : samples) {
      km.push_back(s[0]);
      e.push_back(s[1]);
      n.push_back(s[2]);
    }
    binned.bins.push_back(bin);
    binned.rows.push_back({median(km), median(e), median(n)});
  }
  std::vector<KmRange> holes;
  const auto intervals = build_intervals(binned, 0, params, holes);
  if (intervals.empty()) throw ValidationError("typical route has no coverage interval with 2 or more bins");

  std::vector<TypicalRoute::Knot> knots;
  for (const auto& iv : intervals)
    for (std::size_t k = 0; k < iv.km.size(); ++k)
      knots.push_back({iv.km[k], GeoPoint{iv.channels[0][k], iv.channels[1][k], index.zone()}});
  TypicalRoute route(direction, knots, index.zone());
  route.holes = std::move(holes);
  route.rejected_points = rejected;
  return route;
}

SpeedProfile extract_speed_profile(std::span<const ResampledTrack> tracks, Direction direction,
                                   const KilometerIndex& index, const NavStatsParams& params) {
  const double sense = direction_sense(direction);
  std::map<std::int64_t, std::vector<double>> bins;
  std::size_t used_tracks = 0, rejected = 0;
  for (const ResampledTrack& rt : tracks) {
    if (rt.direction != direction) continue;
    ++used_tracks;
    std::vector<double> km(rt.positions.size());
    std::vector<bool> ok(rt.positions.size(), true);
    for (std::size_t t = 0; t < rt.positions.size(); ++t) {
      try {
        km[t] = index.kilometrize(rt.positions[t]).km;
      } catch (const OutOfCorridorError&) {
        ok[t] = false;
        ++rejected;
      }
    }
    for (std::size_t t = 0; t + 1 < km.size(); ++t)
      if (ok[t] && ok[t + 1]) bins[decameter_bin(km[t])].push_back(sense * (km[t + 1] - km[t]));
  }
  if (used_tracks == 0)
    throw ValidationError("no tracks in direction " + std::string(to_string(direction)));
  if (bins.empty()) throw ValidationError("no kilometerizable steps for the speed profile");

  BinnedRows binned;
  for (auto& [bin, samples] : bins) {
    binned.bins.push_back(bin);
    binned.rows.push_back({(static_cast<double>(bin) + 0.5) * kBinKm, median(std::move(samples))});
  }
  std::vector<KmRange> holes;
  const auto intervals = build_intervals(binned, 0, params, holes);
  if (intervals.empty()) throw ValidationError("speed profile has no coverage interval with 2 or more bins");

  std::vector<SpeedProfile::Knot> knots;
  for (const auto& iv : intervals)
    for (std::size_t k = 0; k < iv.km.size(); ++k) knots.push_back({iv.km[k], iv.channels[0][k]});
  SpeedProfile profile(direction, knots);
  profile.holes = std::move(holes);
  profile.rejected_points = rejected;
  return profile;
}

RouteContext route_context(const TypicalRoute& route, const Fairway& fairway, const NavStatsParams& params) {
  const double sense = direction_sense(route.direction());
  const double f_lo = fairway.km_min(), f_hi = fairway.km_max();
  std::vector<HectoContext> entries;
  for (const auto& [lo_raw, hi_raw] : route.coverage()) {
    const double lo = std::max(lo_raw, f_lo), hi = std::min(hi_raw, f_hi);
    const auto first = static_cast<std::int64_t>(std::ceil((lo + kHecto) / kHecto - 1e-6));
    const auto last = static_cast<std::int64_t>(std::floor((hi - kHecto) / kHecto + 1e-6));
    for (std::int64_t m = first; m <= last; ++m) {
      const double km = static_cast<double>(m) / 10.0;
      if (!route.covers(km - kHecto) || !route.covers(km + kHecto) || km < f_lo || km > f_hi) continue;
      const Vec2 prev = to_vec(route(km - kHecto));
      const Vec2 here = to_vec(route(km));
      const Vec2 next = to_vec(route(km + kHecto));
      HectoContext e;
      e.km = km;
      e.curvature = sense * three_point_curvature(prev, here, next);
      e.orientation = classify_orientation(e.curvature, params.straight_threshold);
      e.hecto_euclid = norm((sense > 0.0 ? next : prev) - here);
      e.f_nav = fairway.frame(route(km), km).offset;
      entries.push_back(e);
    }
  }
  if (entries.empty())
    throw CoverageError("typical route and fairway share no hectometer with both neighbours covered");
  return RouteContext(route.direction(), std::move(entries), params.straight_threshold);
}

}  // namespace wayref
