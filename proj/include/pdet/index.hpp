#pragma once

// Inverted index over stemmed, stopword-free terms with TF-IDF cosine
// search. An index is immutable once built or loaded and may be searched
// from many threads.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pdet/textnorm.hpp"

namespace pdet::index {

struct Posting {
  std::uint32_t doc = 0;  // document ordinal (ascending doc_id order)
  std::uint32_t tf = 0;
  bool operator==(const Posting&) const = default;
};

struct DocEntry {
  std::string doc_id;
  std::string path;  // relative to InvertedIndex::source_root
  std::uint64_t token_count = 0;
  bool operator==(const DocEntry&) const = default;
};

struct SearchHit {
  std::string doc_id;
  std::uint32_t doc = 0;
  double score = 0.0;
};

/// Per-document term counts; the input to index construction.
struct TermCounts {
  std::string doc_id;
  std::string path;
  std::uint64_t token_count = 0;
  std::vector<std::pair<std::string, std::uint32_t>> counts;  // sorted by term
};

/// Counts non-stopword stems of a pre-processed document.
TermCounts count_terms(const text::NormalizedDocument& doc, std::string path = {});

class InvertedIndex {
 public:
  InvertedIndex() = default;

  std::size_t size() const { return docs_.size(); }
  std::size_t term_count() const { return terms_.size(); }
  std::size_t posting_count() const;

  std::optional<std::uint32_t> term_id(std::string_view term) const;
  const std::string& term(std::uint32_t id) const { return terms_[id]; }
  const std::vector<std::string>& terms() const { return terms_; }

  std::uint32_t df(std::uint32_t id) const { return static_cast<std::uint32_t>(postings_[id].size()); }
  std::uint32_t df(std::string_view term) const;
  std::span<const Posting> postings(std::uint32_t id) const { return postings_[id]; }

  const DocEntry& doc(std::uint32_t ordinal) const { return docs_[ordinal]; }
  const std::vector<DocEntry>& docs() const { return docs_; }
  std::optional<std::uint32_t> doc_ordinal(std::string_view doc_id) const;
  double doc_norm(std::uint32_t ordinal) const { return norms_[ordinal]; }
  const std::vector<double>& doc_norms() const { return norms_; }

  /// Sorted distinct term ids of a document (its term digest).
  std::span<const std::uint32_t> doc_terms(std::uint32_t ordinal) const;

  std::string source_root;
  std::string resources_dir;
  std::string resources_id;

  bool operator==(const InvertedIndex& o) const;

  /// Throws DuplicateDocumentError on a repeated doc_id.
  static InvertedIndex build(std::vector<TermCounts> docs);

 private:
  friend InvertedIndex load(const std::filesystem::path& dir);
  friend void persist(const InvertedIndex& index, const std::filesystem::path& dir);
  void finish();  // recompute lookups, forward index and norms

  std::vector<std::string> terms_;  // lexicographic
  std::vector<std::vector<Posting>> postings_;
  std::vector<DocEntry> docs_;
  std::vector<double> norms_;

  std::unordered_map<std::string, std::uint32_t> term_lookup_;
  std::unordered_map<std::string, std::uint32_t> doc_lookup_;
  std::vector<std::size_t> forward_offsets_;
  std::vector<std::uint32_t> forward_terms_;
};

InvertedIndex build_index(std::span<const text::NormalizedDocument> corpus,
                          std::span<const std::string> paths = {});

/// ln((N + 1) / (df + 1)) + 1; unseen terms use df = 0.
double idf(const InvertedIndex& index, std::string_view term);
double idf_value(std::size_t n_docs, std::size_t df);

/// Cosine between the query's TF-IDF vector and each document's TF-IDF
/// vector. Documents with no shared term are omitted. Ordered by score
/// descending, then doc_id ascending.
std::vector<SearchHit> search(const InvertedIndex& index, std::span<const std::string> terms,
                              std::size_t k);

void persist(const InvertedIndex& index, const std::filesystem::path& dir);
InvertedIndex load(const std::filesystem::path& dir);

/// FNV-1a digest over the index files, for run manifests.
std::string directory_digest(const std::filesystem::path& dir);

inline constexpr std::uint32_t kFormatVersion = 1;

}  // namespace pdet::index
