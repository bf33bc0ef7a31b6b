#pragma once

// Sentence-level text alignment between a suspicious and a source
// document: per-sentence similarity (TF-IDF cosine or n-gram Jaccard),
// thresholding, and merging of neighbouring sentence pairs into passages.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pdet/index.hpp"
#include "pdet/kernels.hpp"
#include "pdet/textnorm.hpp"

namespace pdet::alignment {

enum class Method { kVsm, kCharNgram, kWordNgram };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view name);

struct AlignmentConfig {
  Method method = Method::kVsm;
  double threshold = 0.65;
  std::size_t char_n = 4;
  std::size_t word_n = 2;
  std::size_t merge_gap = 1;  // sentences

  std::size_t n() const { return method == Method::kWordNgram ? word_n : char_n; }
  void validate() const;  // throws ConfigError
};

struct TermWeight {
  std::uint32_t term = 0;
  double weight = 0.0;
};

struct SentenceVector {
  std::vector<TermWeight> weights;  // sorted by term id
  double norm = 0.0;
};

/// Term ids shared by the vectors of one alignment: index ids for known
/// terms, fresh ids past the index vocabulary for unseen ones.
class TermIds {
 public:
  explicit TermIds(const index::InvertedIndex& index) : index_(index) {}
  std::uint32_t id(const std::string& term);

 private:
  const index::InvertedIndex& index_;
  std::unordered_map<std::string, std::uint32_t> extra_;
};

struct MatchedPair {
  std::uint32_t susp = 0;  // sentence index
  std::uint32_t src = 0;
  double sim = 0.0;
  bool operator==(const MatchedPair&) const = default;
};

struct Detection {
  std::string susp_doc_id;
  text::Span susp_range;  // raw text code points
  std::string src_doc_id;
  text::Span src_range;
  double score = 0.0;
  std::size_t pair_count = 0;
  Method method = Method::kVsm;
};

/// One vector per sentence over non-stopword stems; tf is the in-sentence
/// count, idf comes from `idf_source`.
std::vector<SentenceVector> sentence_vectors(const text::NormalizedDocument& doc,
                                             const index::InvertedIndex& idf_source, TermIds& ids);

/// Zero-norm inputs give 0.
double cosine(const SentenceVector& u, const SentenceVector& v);

std::vector<MatchedPair> match_sentences(std::span<const SentenceVector> susp,
                                         std::span<const SentenceVector> src,
                                         const AlignmentConfig& cfg);
std::vector<MatchedPair> match_sentences_serial(std::span<const SentenceVector> susp,
                                                std::span<const SentenceVector> src,
                                                const AlignmentConfig& cfg);

/// Pairs are connected when both their suspicious and their source
/// sentence indices differ by at most 1 + merge_gap; each connected group
/// becomes one Detection spanning its extreme sentences.
std::vector<Detection> merge_matches(std::span<const MatchedPair> pairs,
                                     const text::NormalizedDocument& susp,
                                     const text::NormalizedDocument& src,
                                     const AlignmentConfig& cfg);

using NgramSet = std::vector<std::u32string>;  // sorted, unique

NgramSet char_ngrams(std::u32string_view sentence, std::size_t n);
NgramSet word_ngrams(std::span<const std::string> words, std::size_t n);
double jaccard(const NgramSet& a, const NgramSet& b);

/// Jaccard of character n-grams; runs of whitespace count as one space.
double char_ngram_similarity(std::u32string_view a, std::u32string_view b, std::size_t n);
/// Jaccard of word n-grams over the given stems.
double word_ngram_similarity(std::span<const std::string> a, std::span<const std::string> b,
                             std::size_t n);

/// Per-sentence similarity table under the configured method.
class SentenceSimilarity {
 public:
  SentenceSimilarity(const text::NormalizedDocument& susp, const text::NormalizedDocument& src,
                     const index::InvertedIndex& idf_source, const AlignmentConfig& cfg);
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t i, std::size_t j) const;
  std::vector<MatchedPair> pairs_at_or_above(double threshold) const;

 private:
  Method method_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<SentenceVector> susp_vecs_, src_vecs_;
  std::vector<NgramSet> susp_grams_, src_grams_;
};

std::vector<Detection> align(const text::NormalizedDocument& susp, const text::NormalizedDocument& src,
                             const index::InvertedIndex& idf_source, const AlignmentConfig& cfg);

/// Sorts by (susp_doc_id, susp offset, src_doc_id, src offset).
void sort_detections(std::vector<Detection>& detections);

/// Tab-separated with header: susp_doc_id, susp_offset, susp_length,
/// src_doc_id, src_offset, src_length, score, method.
void write_detections(std::ostream& out, std::span<const Detection> detections);
std::vector<Detection> read_detections(std::istream& in);

}  // namespace pdet::alignment
