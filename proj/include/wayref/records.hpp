#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "wayref/features.hpp"

namespace wayref {

// One line of the feature JSONL file.
struct FeatureRecord {
  std::string id;
  std::string vessel_id;
  System system = System::glob;
  Direction direction = Direction::up;
  double t0 = 0.0;
  std::vector<ClassStep> observed_classes;
  std::vector<ClassStep> future_classes;
  std::vector<double> context;
  Anchor anchor;
  double anchor_official_km = 0.0;
  std::vector<GeoPoint> observed_positions;
  std::vector<GeoPoint> future_positions;
};

enum class PredictionUnits { continuous, classes };

// One line of the prediction JSONL file: N ensemble members of n steps.
struct PredictionRecord {
  std::string id;
  System system = System::glob;
  PredictionUnits units = PredictionUnits::continuous;
  std::vector<std::vector<FeatureStep>> mc_samples;  // class indices stored as exact doubles
};

std::string to_json_line(const FeatureRecord& r);
FeatureRecord parse_feature_record(std::string_view line);
std::string to_json_line(const PredictionRecord& r);
PredictionRecord parse_prediction_record(std::string_view line);

// Read a whole JSONL file; blank lines are skipped. Errors carry the line number.
std::vector<FeatureRecord> read_feature_records(std::istream& in);
std::vector<PredictionRecord> read_prediction_records(std::istream& in);

std::string codebook_to_json(const Codebook& cb);
Codebook codebook_from_json(std::string_view text);

// Rebuilds the sequences that a record describes.
DislocationSeq anchor_sequence(const FeatureRecord& r, const std::vector<FeatureStep>& steps);

}  // namespace wayref
