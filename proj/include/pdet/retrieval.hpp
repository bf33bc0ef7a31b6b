#pragma once

// Candidate source retrieval for one suspicious document: chunk the
// document, keep content-rich sentences, extract keywords and noun
// phrases, turn them into queries, drop queries already covered by
// earlier results, and aggregate search hits into a candidate list.

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "pdet/index.hpp"
#include "pdet/textnorm.hpp"

namespace pdet::retrieval {

struct RetrievalConfig {
  std::size_t chunk_len = 500;            // tokens
  std::size_t min_tail = 100;             // shorter final chunks merge into their predecessor
  double discard_ratio = 0.20;
  std::size_t top_sentences = 3;
  std::size_t max_query_terms = 10;
  std::size_t candidates_per_doc = 25;
  double tfidf_high_percentile = 0.75;
  double search_control_overlap = 0.60;
  std::size_t hits_per_query = 10;

  void validate() const;  // throws ConfigError
};

struct Chunk {
  std::size_t id = 0;
  text::Span tokens;                  // token index range
  text::Span chars;                   // norm_text range covered by those tokens
  std::vector<std::size_t> sentences;  // sentences whose first token is in this chunk
};

enum class QueryOrigin { kKeywordSentence, kNounPhrase };

struct Query {
  std::vector<std::string> terms;  // stems
  std::size_t chunk_id = 0;
  QueryOrigin origin = QueryOrigin::kKeywordSentence;
};

/// TF-IDF of every token of a chunk: tf counted over the chunk's
/// sentences, idf from the background index. Stopwords weigh 0.
struct ChunkWeights {
  std::vector<double> token_tfidf;  // indexed by document token index
  double high_threshold = std::numeric_limits<double>::infinity();
};

struct SentenceKeywords {
  std::size_t sentence = 0;
  std::vector<std::string> terms;
};

struct KeywordSelection {
  std::vector<SentenceKeywords> sentences;  // best sentence first
  bool fallback = false;                    // chunk had no nouns
};

struct NounPhrase {
  std::vector<std::string> terms;
  double score = 0.0;
  std::size_t first_token = 0;
};

enum class Decision { kKeep, kDrop };

struct Candidate {
  std::string doc_id;
  double aggregate_score = 0.0;
  std::size_t query_count = 0;
};

struct RetrievalResult {
  std::vector<Candidate> candidates;
  std::vector<Query> issued;
  std::size_t dropped = 0;
};

std::vector<Chunk> chunk_document(const text::NormalizedDocument& doc, const RetrievalConfig& cfg);

/// Kept sentence indices in document order.
std::vector<std::size_t> rank_sentences(const text::NormalizedDocument& doc, const Chunk& chunk,
                                        const RetrievalConfig& cfg);

/// Linear-interpolation percentile of `values` (q in [0, 1]).
double percentile(std::vector<double> values, double q);

ChunkWeights chunk_weights(const text::NormalizedDocument& doc, const Chunk& chunk,
                           const index::InvertedIndex& background, const RetrievalConfig& cfg);

KeywordSelection extract_keywords(const text::NormalizedDocument& doc, const Chunk& chunk,
                                  std::span<const std::size_t> kept, const ChunkWeights& weights,
                                  const RetrievalConfig& cfg);

/// Maximal left-to-right matches of the pattern, best score first.
std::vector<NounPhrase> extract_noun_phrases(const text::NormalizedDocument& doc,
                                             std::span<const std::size_t> kept,
                                             const ChunkWeights& weights,
                                             const text::NounPhrasePattern& pattern);

std::vector<Query> formulate_queries(const KeywordSelection& keywords,
                                     std::span<const NounPhrase> phrases, std::size_t chunk_id,
                                     const RetrievalConfig& cfg);

/// Drops the query when one downloaded document holds at least
/// search_control_overlap of its distinct terms.
Decision search_control(const Query& query, std::span<const std::uint32_t> downloaded,
                        const index::InvertedIndex& index, const RetrievalConfig& cfg);

RetrievalResult retrieve_candidates(const text::NormalizedDocument& doc,
                                    const index::InvertedIndex& index,
                                    const text::LanguageResources& res, const RetrievalConfig& cfg);

/// Line-delimited candidate records: susp_doc_id, source_doc_id, aggregate_score, query_count.
void write_candidates(std::ostream& out, const std::string& susp_doc_id,
                      std::span<const Candidate> candidates);

}  // namespace pdet::retrieval
