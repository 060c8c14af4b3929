#include "wayref/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wayref/errors.hpp"
#include "wayref/kernels.hpp"

namespace wayref {

DislocationSeq aggregate(std::span<const DislocationSeq> mc_seqs) {
  if (mc_seqs.empty()) throw ValidationError("aggregate needs at least one sequence");
  const DislocationSeq& first = mc_seqs.front();
  for (const DislocationSeq& s : mc_seqs) {
    if (s.steps.size() != first.steps.size()) throw ValidationError("ensemble sequences differ in length");
    if (s.system != first.system) throw ValidationError("ensemble sequences mix reference systems");
  }
  DislocationSeq mean = first;
  const double n = static_cast<double>(mc_seqs.size());
  for (std::size_t t = 0; t < first.steps.size(); ++t) {
    double lon = 0.0, lat = 0.0;
    for (const DislocationSeq& s : mc_seqs) {
      lon += s.steps[t].lon;
      lat += s.steps[t].lat;
    }
    mean.steps[t] = {lon / n, lat / n};
  }
  return mean;
}

double ate(std::span<const GeoPoint> predicted, std::span<const GeoPoint> truth, std::size_t horizon) {
  if (predicted.size() != truth.size()) throw ValidationError("ATE: prediction and truth lengths differ");
  if (horizon == 0 || horizon > predicted.size()) throw ValidationError("ATE: horizon out of range");
  std::vector<double> ax(horizon), ay(horizon), bx(horizon), by(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    ax[t] = predicted[t].easting;
    ay[t] = predicted[t].northing;
    bx[t] = truth[t].easting;
    by[t] = truth[t].northing;
  }
  return std::sqrt(kernels::sum_squared_distance(ax, ay, bx, by) / static_cast<double>(horizon));
}

double uncertainty(const std::vector<std::vector<GeoPoint>>& mc_positions, std::size_t t) {
  if (mc_positions.empty()) throw ValidationError("uncertainty needs at least one ensemble member");
  std::vector<double> e, n;
  for (const auto& member : mc_positions) {
    if (t >= member.size()) throw ValidationError("uncertainty: step beyond member length");
    e.push_back(member[t].easting);
    n.push_back(member[t].northing);
  }
  return kernels::ensemble_spread(e, n);
}

double atu(const std::vector<std::vector<GeoPoint>>& mc_positions) {
  if (mc_positions.empty()) throw ValidationError("ATU needs at least one ensemble member");
  const std::size_t steps = mc_positions.front().size();
  for (const auto& m : mc_positions)
    if (m.size() != steps) throw ValidationError("ATU: ensemble members differ in length");
  if (steps == 0) throw ValidationError("ATU: empty sequences");
  double sum = 0.0;
  for (std::size_t t = 0; t < steps; ++t) {
    const double u = uncertainty(mc_positions, t);
    sum += u * u;
  }
  return std::sqrt(sum / static_cast<double>(steps));
}

PredictionBundle make_bundle(std::string sample_id, std::vector<DislocationSeq> mc_seqs, const GeometryBundle& g) {
  PredictionBundle b;
  b.sample_id = std::move(sample_id);
  b.mean_seq = aggregate(mc_seqs);
  b.system = b.mean_seq.system;
  DecodeResult mean = decode(b.mean_seq, g);
  b.truncated = mean.truncated;
  b.mean_positions = std::move(mean.positions);
  for (const DislocationSeq& s : mc_seqs) {
    DecodeResult d = decode(s, g);
    b.truncated = b.truncated || d.truncated;
    b.mc_positions.push_back(std::move(d.positions));
  }
  b.mc_seqs = std::move(mc_seqs);
  return b;
}

std::size_t calibration_bin(double x) {
  auto b = static_cast<std::ptrdiff_t>(std::floor(x * 10.0));
  b = std::clamp<std::ptrdiff_t>(b, 0, 9);
  if (b > 0 && x < static_cast<double>(b) / 10.0) --b;
  if (b < 9 && x >= static_cast<double>(b + 1) / 10.0) ++b;
  return static_cast<std::size_t>(b);
}

namespace {

std::vector<double> min_max_normalize(std::span<const double> v, const char* what) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) throw ValidationError(std::string(what) + " has zero range; cannot normalize");
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - *lo) / range;
  return out;
}

}  // namespace

Calibration calibration_bins(std::span<const double> ate_values, std::span<const double> atu_values) {
  if (ate_values.size() != atu_values.size()) throw ValidationError("ATE and ATU counts differ");
  if (ate_values.size() < 2) throw ValidationError("calibration needs at least 2 samples");
  Calibration c;
  c.norm_ate = min_max_normalize(ate_values, "ATE");
  c.norm_atu = min_max_normalize(atu_values, "ATU");

  std::vector<std::vector<std::size_t>> members(10);
  for (std::size_t i = 0; i < c.norm_atu.size(); ++i) members[calibration_bin(c.norm_atu[i])].push_back(i);
  for (std::size_t b = 0; b < 10; ++b) {
    CalibrationBin bin;
    bin.lower = static_cast<double>(b) / 10.0;
    bin.upper = static_cast<double>(b + 1) / 10.0;
    bin.count = members[b].size();
    if (bin.count == 0) {
      bin.mean_ate = bin.std_ate = std::numeric_limits<double>::quiet_NaN();
    } else {
      double sum = 0.0;
      for (std::size_t i : members[b]) sum += c.norm_ate[i];
      bin.mean_ate = sum / static_cast<double>(bin.count);
      double sq = 0.0;
      for (std::size_t i : members[b]) sq += (c.norm_ate[i] - bin.mean_ate) * (c.norm_ate[i] - bin.mean_ate);
      bin.std_ate = std::sqrt(sq / static_cast<double>(bin.count));
    }
    c.bins.push_back(bin);
  }
  return c;
}

EvalReport evaluate(std::span<const PredictionBundle> bundles, std::span<const std::vector<GeoPoint>> truths) {
  if (bundles.size() != truths.size()) throw ValidationError("evaluate: bundle and truth counts differ");
  EvalReport report;
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    const PredictionBundle& b = bundles[i];
    if (b.truncated || b.mean_positions.size() != truths[i].size()) {
      ++report.truncated;
      continue;
    }
    SampleEval se;
    se.sample_id = b.sample_id;
    for (std::size_t h = 0; h < kReportHorizons.size(); ++h)
      se.ate[h] = ate(b.mean_positions, truths[i], std::min(kReportHorizons[h], truths[i].size()));
    for (std::size_t t = 0; t < b.mean_positions.size(); ++t) se.u.push_back(uncertainty(b.mc_positions, t));
    se.atu = atu(b.mc_positions);
    report.samples.push_back(std::move(se));
  }

  const double n = static_cast<double>(report.samples.size());
  for (std::size_t h = 0; h < kReportHorizons.size(); ++h) {
    HorizonStat hs;
    hs.horizon = kReportHorizons[h];
    if (!report.samples.empty()) {
      for (const SampleEval& s : report.samples) hs.mean += s.ate[h];
      hs.mean /= n;
      double sq = 0.0;
      for (const SampleEval& s : report.samples) sq += (s.ate[h] - hs.mean) * (s.ate[h] - hs.mean);
      hs.std = std::sqrt(sq / n);
    }
    report.horizons.push_back(hs);
  }
  if (!report.samples.empty()) {
    const std::size_t steps = report.samples.front().u.size();
    report.mean_u.assign(steps, 0.0);
    for (const SampleEval& s : report.samples)
      for (std::size_t t = 0; t < steps && t < s.u.size(); ++t) report.mean_u[t] += s.u[t];
    for (double& u : report.mean_u) u /= n;
  }

  std::vector<double> ate10, atus;
  for (const SampleEval& s : report.samples) {
    ate10.push_back(s.ate.back());
    atus.push_back(s.atu);
  }
  try {
    report.calibration = calibration_bins(ate10, atus);
    report.calibrated = true;
  } catch (const ValidationError& e) {
    report.calibration_note = e.what();
  }
  return report;
}

namespace {

constexpr ReferenceAte kReferenceAte[] = {
    {"Danube", 1, "G-CSCT", 6.08, 7.71},    {"Danube", 1, "R-CSCT", 9.73, 8.55},
    {"Danube", 1, "N-CSCT", 8.18, 8.08},    {"Danube", 1, "Baseline", 11.44, 9.95},
    {"Danube", 3, "G-CSCT", 22.74, 18.01},  {"Danube", 3, "R-CSCT", 22.41, 18.15},
    {"Danube", 3, "N-CSCT", 16.69, 16.97},  {"Danube", 3, "Baseline", 19.54, 19.44},
    {"Danube", 5, "G-CSCT", 43.48, 29.79},  {"Danube", 5, "R-CSCT", 37.75, 30.05},
    {"Danube", 5, "N-CSCT", 25.30, 18.10},  {"Danube", 5, "Baseline", 28.41, 30.92},
    {"Danube", 10, "G-CSCT", 107.34, 61.55}, {"Danube", 10, "R-CSCT", 80.44, 61.51},
    {"Danube", 10, "N-CSCT", 48.02, 51.11}, {"Danube", 10, "Baseline", 52.36, 61.08},
    {"Rhine", 1, "G-CSCT", 3.94, 4.65},     {"Rhine", 1, "R-CSCT", 8.71, 6.87},
    {"Rhine", 1, "N-CSCT", 8.47, 7.02},     {"Rhine", 1, "Baseline", 16.26, 14.27},
    {"Rhine", 3, "G-CSCT", 16.03, 11.74},   {"Rhine", 3, "R-CSCT", 17.68, 13.09},
    {"Rhine", 3, "N-CSCT", 16.46, 13.35},   {"Rhine", 3, "Baseline", 22.45, 17.56},
    {"Rhine", 5, "G-CSCT", 30.53, 20.18},   {"Rhine", 5, "R-CSCT", 26.56, 19.66},
    {"Rhine", 5, "N-CSCT", 23.55, 19.66},   {"Rhine", 5, "Baseline", 29.06, 23.03},
    {"Rhine", 10, "G-CSCT", 93.88, 49.46},  {"Rhine", 10, "R-CSCT", 52.46, 40.30},
    {"Rhine", 10, "N-CSCT", 41.17, 37.11},  {"Rhine", 10, "Baseline", 46.89, 41.13},
};

constexpr ReferenceDiscretization kReferenceDiscretization[] = {
    {"glob", 1.0, "m", 0.5, "deg", 5.15},
    {"riv", 0.001, "km", 0.005, "fraction", 1.00},
    {"nav", 0.001, "km", 1.0, "m", 1.19},
};

}  // namespace

std::span<const ReferenceAte> reference_ate() { return kReferenceAte; }
std::span<const ReferenceDiscretization> reference_discretization() { return kReferenceDiscretization; }

}  // namespace wayref
