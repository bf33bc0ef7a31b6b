#pragma once

// Shared helpers for the unit tests: repository paths, frozen oracle data
// and fixture loaders.

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

#include "pdet/alignment.hpp"
#include "pdet/corpus.hpp"
#include "pdet/evaluation.hpp"
#include "pdet/index.hpp"
#include "pdet/textnorm.hpp"
#include "pdet/utf8.hpp"

namespace testing {

namespace fs = std::filesystem;
using nlohmann::json;

inline fs::path repo() { return fs::path(PDET_SOURCE_DIR); }
inline fs::path data() { return repo() / "tests" / "data"; }
inline fs::path fixture() { return data() / "fixture"; }
inline fs::path latin_dir() { return repo() / "resources" / "latin"; }
inline fs::path persian_dir() { return repo() / "resources" / "persian"; }

inline const pdet::text::LanguageResources& latin() {
  static const auto res = pdet::text::LanguageResources::load(latin_dir());
  return res;
}

inline const pdet::text::LanguageResources& persian() {
  static const auto res = pdet::text::LanguageResources::load(persian_dir());
  return res;
}

inline const json& golden() {
  static const json j = json::parse(pdet::utf8::read_file(data() / "fixture_golden.json"));
  return j;
}

inline const json& metric_cases() {
  static const json j = json::parse(pdet::utf8::read_file(data() / "metric_cases.json"));
  return j;
}

/// Pre-processed fixture documents, sources first, each group sorted by id.
struct Fixture {
  std::vector<pdet::text::NormalizedDocument> src;
  std::vector<pdet::text::NormalizedDocument> susp;
  pdet::index::InvertedIndex index;

  const pdet::text::NormalizedDocument& doc(const std::string& id) const {
    for (const auto& d : src)
      if (d.doc_id == id) return d;
    for (const auto& d : susp)
      if (d.doc_id == id) return d;
    throw std::runtime_error("no fixture document " + id);
  }
};

inline const Fixture& fixture_docs() {
  static const Fixture f = [] {
    Fixture out;
    for (const auto& d : pdet::corpus::read_documents(fixture() / "src"))
      out.src.push_back(pdet::text::preprocess_utf8(d.doc_id, d.text, latin()));
    for (const auto& d : pdet::corpus::read_documents(fixture() / "susp"))
      out.susp.push_back(pdet::text::preprocess_utf8(d.doc_id, d.text, latin()));
    out.index = pdet::index::build_index(out.src);
    return out;
  }();
  return f;
}

/// Fresh empty directory under the system temp dir.
inline fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("pdet-test-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

inline pdet::alignment::Detection detection_from(const json& j) {
  pdet::alignment::Detection d;
  d.susp_doc_id = j.at("susp_doc_id").get<std::string>();
  d.src_doc_id = j.at("src_doc_id").get<std::string>();
  d.susp_range = {j.at("susp")[0].get<std::size_t>(), j.at("susp")[1].get<std::size_t>()};
  d.src_range = {j.at("src")[0].get<std::size_t>(), j.at("src")[1].get<std::size_t>()};
  if (j.contains("score")) d.score = j.at("score").get<double>();
  return d;
}

inline pdet::evaluation::GoldCase gold_from(const json& j) {
  const auto d = detection_from(j);
  return {d.susp_doc_id, d.susp_range, d.src_doc_id, d.src_range};
}

inline std::string tag_name(pdet::text::PosTag t) { return std::string(pdet::text::to_string(t)); }

}  // namespace testing
