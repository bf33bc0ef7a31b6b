#include "pdet/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <exception>
#include <ostream>

#include "pdet/error.hpp"
#include "pdet/retrieval.hpp"
#include "pdet/utf8.hpp"

namespace pdet::pipeline {

namespace fs = std::filesystem;
using alignment::Detection;

namespace {

// Runs body(i) for i in [0, n) across OpenMP threads and rethrows the
// first exception on the calling thread.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(pdet_pipeline_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

std::vector<text::NormalizedDocument> preprocess_all(std::span<const corpus::Document> docs,
                                                     const text::LanguageResources& res) {
  std::vector<text::NormalizedDocument> out(docs.size());
  parallel_for(docs.size(), [&](std::size_t i) { out[i] = text::preprocess_utf8(docs[i].doc_id, docs[i].text, res); });
  return out;
}

}  // namespace

SourceStore::SourceStore(const index::InvertedIndex& index, const text::LanguageResources& res)
    : index_(index), res_(res), docs_(index.size()) {
  once_.reserve(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) once_.push_back(std::make_unique<std::once_flag>());
}

const text::NormalizedDocument& SourceStore::get(std::uint32_t ordinal) {
  std::call_once(*once_[ordinal], [&] {
    const auto& entry = index_.doc(ordinal);
    const fs::path path = fs::path(index_.source_root) / entry.path;
    docs_[ordinal] = text::preprocess_utf8(entry.doc_id, utf8::read_file(path), res_);
  });
  return *docs_[ordinal];
}

std::vector<Detection> detect_document(const text::NormalizedDocument& susp, const index::InvertedIndex& index,
                                       const text::LanguageResources& res, SourceStore& sources,
                                       const config::PipelineConfig& cfg) {
  std::vector<Detection> out;
  const auto retrieved = retrieval::retrieve_candidates(susp, index, res, cfg.retrieval);
  for (const auto& candidate : retrieved.candidates) {
    const auto ordinal = index.doc_ordinal(candidate.doc_id);
    if (!ordinal) continue;
    auto found = alignment::align(susp, sources.get(*ordinal), index, cfg.alignment);
    out.insert(out.end(), found.begin(), found.end());
  }
  return out;
}

std::vector<Detection> detect_all(std::span<const corpus::Document> susp, const index::InvertedIndex& index,
                                  const text::LanguageResources& res, const config::PipelineConfig& cfg) {
  cfg.validate();
  SourceStore sources(index, res);
  std::vector<std::vector<Detection>> per_doc(susp.size());
  parallel_for(susp.size(), [&](std::size_t i) {
    const auto doc = text::preprocess_utf8(susp[i].doc_id, susp[i].text, res);
    per_doc[i] = detect_document(doc, index, res, sources, cfg);
  });
  std::vector<Detection> out;
  for (auto& d : per_doc) out.insert(out.end(), d.begin(), d.end());
  alignment::sort_detections(out);
  return out;
}

index::InvertedIndex index_directory(const fs::path& src_dir, const fs::path& resources_dir) {
  const auto res = text::LanguageResources::load(resources_dir);
  const auto docs = corpus::read_documents(src_dir);
  const auto normalized = preprocess_all(docs, res);
  std::vector<std::string> paths;
  for (const auto& d : docs) paths.push_back(d.path.filename().string());
  auto index = index::build_index(normalized, paths);
  index.source_root = fs::absolute(src_dir).lexically_normal().string();
  index.resources_dir = fs::absolute(resources_dir).lexically_normal().string();
  index.resources_id = res.bundle_id;
  return index;
}

text::LanguageResources resources_for(const index::InvertedIndex& index, const config::PipelineConfig& cfg) {
  const fs::path dir = cfg.resources.empty() ? fs::path(index.resources_dir) : fs::path(cfg.resources);
  auto res = text::LanguageResources::load(dir);
  if (!index.resources_id.empty() && res.bundle_id != index.resources_id)
    throw ConfigError("language resources " + res.bundle_id + " differ from those the index was built with (" +
                      index.resources_id + ")");
  return res;
}

std::vector<LabRow> run_lab(const corpus::Corpus& corpus, const text::LanguageResources& res,
                            const config::Grid& grid) {
  if (grid.points.empty()) throw ConfigError("grid has no experiments");
  const auto src = preprocess_all(corpus.src_docs, res);
  const auto susp = preprocess_all(corpus.susp_docs, res);
  const auto idf_source = index::build_index(src);

  struct Pair {
    std::size_t susp, src;
  };
  std::vector<Pair> pairs;
  for (const auto& [s, r] : corpus.pairs) {
    pairs.push_back({static_cast<std::size_t>(corpus.find_susp(s) - corpus.susp_docs.data()),
                     static_cast<std::size_t>(corpus.find_src(r) - corpus.src_docs.data())});
  }

  std::vector<LabRow> rows;
  for (const auto& point : grid.points) {
    std::vector<std::vector<Detection>> per_pair(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t k) {
      per_pair[k] = alignment::align(susp[pairs[k].susp], src[pairs[k].src], idf_source, point.alignment);
    });
    std::vector<Detection> det;
    for (auto& d : per_pair) det.insert(det.end(), d.begin(), d.end());
    alignment::sort_detections(det);

    LabRow row;
    row.method = point.alignment.method;
    row.n = point.alignment.method == alignment::Method::kVsm ? 0 : point.alignment.n();
    row.threshold = point.alignment.threshold;
    row.summary = evaluation::evaluate(corpus.gold, det);
    rows.push_back(row);
  }
  return rows;
}

void write_lab_csv(std::ostream& out, std::span<const LabRow> rows) {
  out << "method,n,theta,precision,recall,granularity,plagdet\n";
  char buf[256];
  for (const auto& r : rows) {
    const std::string n = r.method == alignment::Method::kVsm ? "" : std::to_string(r.n);
    std::snprintf(buf, sizeof buf, ",%.4f,%.6f,%.6f,%.6f,%.6f\n", r.threshold, r.summary.precision, r.summary.recall,
                  r.summary.granularity, r.summary.plagdet);
    out << alignment::to_string(r.method) << ',' << n << buf;
  }
}

config::Json RunManifest::to_json() const {
  config::Json j;
  j["config"] = config;
  j["resources_id"] = resources_id;
  j["index_digest"] = index_digest;
  j["started_at"] = started_at;
  j["finished_at"] = finished_at;
  return j;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const fs::path& output, const RunManifest& m) {
  utf8::write_file(fs::path(output.string() + ".manifest.json"), m.to_json().dump(2) + "\n");
}

}  // namespace pdet::pipeline
