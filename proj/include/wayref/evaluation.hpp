#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wayref/features.hpp"

namespace wayref {

inline constexpr std::array<std::size_t, 4> kReportHorizons{1, 3, 5, 10};

// Componentwise mean of N equally long sequences; the anchor is taken from the first.
DislocationSeq aggregate(std::span<const DislocationSeq> mc_seqs);

// Root mean square position error over the first `horizon` steps.
double ate(std::span<const GeoPoint> predicted, std::span<const GeoPoint> truth, std::size_t horizon);

// Euclidean norm of the population standard deviations of easting and
// northing across the N ensemble members at step t.
double uncertainty(const std::vector<std::vector<GeoPoint>>& mc_positions, std::size_t t);

// Root mean square of u_t over all steps.
double atu(const std::vector<std::vector<GeoPoint>>& mc_positions);

struct PredictionBundle {
  std::string sample_id;
  System system = System::glob;
  std::vector<DislocationSeq> mc_seqs;
  DislocationSeq mean_seq;
  std::vector<GeoPoint> mean_positions;              // decode(mean_seq)
  std::vector<std::vector<GeoPoint>> mc_positions;   // decode of every member
  bool truncated = false;
};

PredictionBundle make_bundle(std::string sample_id, std::vector<DislocationSeq> mc_seqs, const GeometryBundle& g);

struct CalibrationBin {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;
  double mean_ate = 0.0;  // normalized; NaN for empty bins
  double std_ate = 0.0;
};

struct Calibration {
  std::vector<double> norm_ate, norm_atu;  // per sample, min-max normalized
  std::vector<CalibrationBin> bins;        // ten bins, edges k / 10
};

// Normalized-ATU bin of a value in [0, 1]; the last bin includes 1.
std::size_t calibration_bin(double normalized_atu);

// Throws ValidationError for fewer than 2 samples or a zero metric range.
Calibration calibration_bins(std::span<const double> ate_values, std::span<const double> atu_values);

struct SampleEval {
  std::string sample_id;
  std::array<double, kReportHorizons.size()> ate{};
  double atu = 0.0;
  std::vector<double> u;  // per step
};

struct HorizonStat {
  std::size_t horizon = 0;
  double mean = 0.0;
  double std = 0.0;  // population
};

struct EvalReport {
  std::vector<SampleEval> samples;
  std::vector<HorizonStat> horizons;
  std::vector<double> mean_u;  // per step average u_t
  std::size_t truncated = 0;   // bundles skipped because decoding left the coverage
  std::size_t missing = 0;     // predictions without a matching truth
  bool calibrated = false;
  std::string calibration_note;
  Calibration calibration;
};

// truths[i] holds the true future positions of bundles[i].
EvalReport evaluate(std::span<const PredictionBundle> bundles, std::span<const std::vector<GeoPoint>> truths);

// Published reference errors (meters) for comparison tables.
struct ReferenceAte {
  const char* river;
  std::size_t horizon;
  const char* model;
  double mean;
  double std;
};
std::span<const ReferenceAte> reference_ate();

struct ReferenceDiscretization {
  const char* system;
  double lon_resolution;
  const char* lon_unit;
  double lat_resolution;
  const char* lat_unit;
  double error_m;
};
std::span<const ReferenceDiscretization> reference_discretization();

}  // namespace wayref
