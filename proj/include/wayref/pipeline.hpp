#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wayref/config.hpp"
#include "wayref/evaluation.hpp"
#include "wayref/features.hpp"
#include "wayref/navigation_stats.hpp"
#include "wayref/records.hpp"

namespace wayref {

// Typical route / speed profile CSVs carry official kilometers.
void write_route_csv(std::ostream& out, const TypicalRoute& route, const KmShiftMap& shift);
TypicalRoute read_route_csv(std::istream& in, Direction direction, const KmShiftMap& shift, int zone);
void write_speed_csv(std::ostream& out, const SpeedProfile& speed, const KmShiftMap& shift);
SpeedProfile read_speed_csv(std::istream& in, Direction direction, const KmShiftMap& shift);
void write_context_csv(std::ostream& out, const RouteContext& ctx, const KmShiftMap& shift);

struct BoundaryPair {
  BoundaryCurve right, left;  // file sides (increasing km perspective), internal km
};
BoundaryPair load_boundary_pair(const std::filesystem::path& path, const KmShiftMap& shift);

DirectionalGeometry make_directional(Direction direction, const BoundaryPair& boundaries, TypicalRoute route,
                                     SpeedProfile speed, const NavStatsParams& params);

NavStatsParams nav_params_from(const Config& c);

struct ExtractOptions {
  System system = System::nav;
  double train_ratio = 0.87;
  std::uint64_t seed = 42;
  std::size_t stride = 1;
  std::size_t jobs = 1;
  PreprocessParams preprocess;
  NavStatsParams nav;
};

// Everything feature extraction produces, kept in memory for tests.
struct FeatureSet {
  std::vector<FeatureRecord> train, test;
  Codebook codebook;
  std::size_t skipped_samples = 0;
  std::size_t train_tracks = 0, test_tracks = 0;
  std::vector<DirectionalGeometry> geometry;  // one per direction with training data
  std::vector<std::string> notes;             // skipped directions and similar
};

// Split by whole track, statistics and codebook from training tracks only,
// then windows of every resampled track are encoded and discretized.
FeatureSet extract_feature_set(const std::vector<Track>& tracks, const KilometerIndex& index,
                               const BoundaryPair& boundaries, const ExtractOptions& options);

// Whole-track shuffled split: the first round(ratio * n) shuffled tracks train.
void split_tracks(std::size_t n, double train_ratio, std::uint64_t seed, std::vector<std::size_t>& train,
                  std::vector<std::size_t>& test);

// Geometry loaded from a feature manifest (paths relative to the manifest).
struct LoadedGeometry {
  std::unique_ptr<KilometerIndex> index;
  GeometryBundle bundle;
  std::optional<Codebook> codebook;
  System system = System::glob;
};
LoadedGeometry load_manifest_geometry(const std::filesystem::path& manifest);

std::vector<PredictionRecord> baseline_predictions(const std::vector<FeatureRecord>& records,
                                                   const GeometryBundle& g, std::size_t jobs,
                                                   std::size_t* truncated = nullptr,
                                                   std::size_t* uncovered = nullptr);

EvalReport evaluate_records(const std::vector<PredictionRecord>& predictions,
                            const std::vector<FeatureRecord>& features, const LoadedGeometry& geometry,
                            std::size_t jobs);

void write_report(const std::filesystem::path& dir, const EvalReport& report);

}  // namespace wayref
