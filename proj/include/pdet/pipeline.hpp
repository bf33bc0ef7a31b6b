#pragma once

// End-to-end composition: candidate retrieval followed by text alignment
// against every candidate, parameter sweeps over a corpus, and the run
// manifest written next to every output.

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "pdet/alignment.hpp"
#include "pdet/config.hpp"
#include "pdet/corpus.hpp"
#include "pdet/evaluation.hpp"
#include "pdet/index.hpp"
#include "pdet/textnorm.hpp"

namespace pdet::pipeline {

/// Pre-processes indexed source documents on first use. Thread-safe.
class SourceStore {
 public:
  SourceStore(const index::InvertedIndex& index, const text::LanguageResources& res);
  const text::NormalizedDocument& get(std::uint32_t ordinal);

 private:
  const index::InvertedIndex& index_;
  const text::LanguageResources& res_;
  std::vector<std::unique_ptr<std::once_flag>> once_;
  std::vector<std::optional<text::NormalizedDocument>> docs_;
};

/// Retrieval then alignment with each candidate, for one suspicious document.
std::vector<alignment::Detection> detect_document(const text::NormalizedDocument& susp,
                                                  const index::InvertedIndex& index,
                                                  const text::LanguageResources& res, SourceStore& sources,
                                                  const config::PipelineConfig& cfg);

/// Runs detect_document over all inputs (in parallel) and returns the
/// detections in canonical order.
std::vector<alignment::Detection> detect_all(std::span<const corpus::Document> susp,
                                             const index::InvertedIndex& index,
                                             const text::LanguageResources& res,
                                             const config::PipelineConfig& cfg);

/// Preprocesses and indexes a directory of source documents.
index::InvertedIndex index_directory(const std::filesystem::path& src_dir,
                                     const std::filesystem::path& resources_dir);

/// Loads the resources the index was built with (or cfg.resources when
/// set) and checks the bundle id.
text::LanguageResources resources_for(const index::InvertedIndex& index, const config::PipelineConfig& cfg);

struct LabRow {
  alignment::Method method = alignment::Method::kVsm;
  std::size_t n = 0;  // 0 for VSM
  double threshold = 0.0;
  evaluation::EvalSummary summary;
};

/// Aligns every (susp, src) pair of the corpus at each grid point and
/// evaluates against the corpus gold.
std::vector<LabRow> run_lab(const corpus::Corpus& corpus, const text::LanguageResources& res,
                            const config::Grid& grid);

void write_lab_csv(std::ostream& out, std::span<const LabRow> rows);

struct RunManifest {
  config::Json config;
  std::string resources_id;
  std::string index_digest;
  std::string started_at;   // UTC, ISO 8601
  std::string finished_at;

  config::Json to_json() const;
};

std::string utc_now();

/// Writes `<output>.manifest.json`.
void write_manifest(const std::filesystem::path& output, const RunManifest& m);

}  // namespace pdet::pipeline
