#pragma once

#include <optional>
#include <string>
#include <vector>

#include "frecl/fda_core.hpp"

namespace frecl::cli {

/// Where a dataset lives and how to prepare it. Paths are relative to the
/// manifest's directory unless absolute.
struct DatasetManifest {
  std::string response;
  std::vector<std::string> predictors;
  /// Explicit grid for every curve file; empty means "from header".
  std::vector<double> grid;
  bool median_collapse = false;
  std::optional<double> filter_threshold;
  int filter_min_points = 20;
  /// Extra curve files (same ids as the response) that must each pass the filter.
  std::vector<std::string> filter_seasons;
  std::optional<double> loess_span;
  int loess_degree = 2;
  bool midpoints = false;
  bool center = false;
};

DatasetManifest read_manifest(const std::string& path);
void write_manifest(const std::string& path, const DatasetManifest& m);

/// Reads and preprocesses the curves: median collapse of repeated ids,
/// expression filter, loess (optionally onto the midpoint grid), centering.
FunctionalDataset load_dataset(const std::string& manifest_path);

}  // namespace frecl::cli
