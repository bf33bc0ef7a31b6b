#pragma once

// JSON (de)serialization of every configurable structure. Absent keys keep
// their defaults; unknown keys are rejected so typos do not go unnoticed.
// config/defaults.json lists every key with its default value.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pdet/alignment.hpp"
#include "pdet/corpus.hpp"
#include "pdet/retrieval.hpp"

namespace pdet::config {

using Json = nlohmann::ordered_json;

/// Settings of `detect` and `align`.
struct PipelineConfig {
  retrieval::RetrievalConfig retrieval;
  alignment::AlignmentConfig alignment;
  std::string resources;  // language resource directory; empty = use the index's

  void validate() const;
};

/// One lab experiment: a detector with a concrete n and threshold.
struct GridPoint {
  alignment::AlignmentConfig alignment;
};

struct Grid {
  PipelineConfig base;
  std::vector<GridPoint> points;  // declaration order
};

Json to_json(const retrieval::RetrievalConfig& c);
Json to_json(const alignment::AlignmentConfig& c);
Json to_json(const PipelineConfig& c);

retrieval::RetrievalConfig retrieval_from_json(const Json& j);
alignment::AlignmentConfig alignment_from_json(const Json& j, alignment::AlignmentConfig base = {});
PipelineConfig pipeline_from_json(const Json& j);

/// {"base": {...pipeline...}, "experiments": [{"method": "...", "n": [...],
/// "threshold": [...]}, ...]}. Each experiment expands to n x threshold
/// points (n is ignored for VSM). Throws ConfigError on an empty grid.
Grid grid_from_json(const Json& j);

/// Word lists may be given inline or as a path relative to `base_dir`.
corpus::GenSpec genspec_from_json(const Json& j, const std::filesystem::path& base_dir);
Json to_json(const corpus::GenSpec& s);

/// Parses a JSON file; relative "resources" paths resolve against its directory.
Json read_json(const std::filesystem::path& path);
PipelineConfig load_pipeline(const std::filesystem::path& path);
Grid load_grid(const std::filesystem::path& path);
corpus::GenSpec load_genspec(const std::filesystem::path& path);

}  // namespace pdet::config
