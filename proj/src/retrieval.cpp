#include "pdet/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "pdet/error.hpp"

namespace pdet::retrieval {

using text::NormalizedDocument;
using text::PosTag;

void RetrievalConfig::validate() const {
  if (!(discard_ratio > 0.0 && discard_ratio < 1.0)) throw ConfigError("discard_ratio must be in (0, 1)");
  if (min_tail < 1 || chunk_len < min_tail) throw ConfigError("need chunk_len >= min_tail >= 1");
  if (candidates_per_doc < 1) throw ConfigError("candidates_per_doc must be >= 1");
  if (top_sentences < 1) throw ConfigError("top_sentences must be >= 1");
  if (max_query_terms < 1) throw ConfigError("max_query_terms must be >= 1");
  if (hits_per_query < 1) throw ConfigError("hits_per_query must be >= 1");
  if (!(tfidf_high_percentile >= 0.0 && tfidf_high_percentile <= 1.0))
    throw ConfigError("tfidf_high_percentile must be in [0, 1]");
  if (!(search_control_overlap > 0.0 && search_control_overlap <= 1.0))
    throw ConfigError("search_control_overlap must be in (0, 1]");
}

std::vector<Chunk> chunk_document(const NormalizedDocument& doc, const RetrievalConfig& cfg) {
  const std::size_t n = doc.tokens.size();
  std::vector<Chunk> chunks;
  for (std::size_t begin = 0; begin < n; begin += cfg.chunk_len) {
    const std::size_t end = std::min(n, begin + cfg.chunk_len);
    if (end - begin < cfg.min_tail && !chunks.empty()) {
      chunks.back().tokens.end = end;
      break;
    }
    Chunk c;
    c.id = chunks.size();
    c.tokens = {begin, end};
    chunks.push_back(std::move(c));
  }
  std::size_t ci = 0;
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    const std::size_t first = doc.sentence_tokens[s].first;
    while (ci < chunks.size() && chunks[ci].tokens.end <= first) ++ci;
    if (ci < chunks.size()) chunks[ci].sentences.push_back(s);
  }
  for (auto& c : chunks)
    c.chars = {doc.tokens[c.tokens.begin].span.begin, doc.tokens[c.tokens.end - 1].span.end};
  return chunks;
}

std::vector<std::size_t> rank_sentences(const NormalizedDocument& doc, const Chunk& chunk,
                                        const RetrievalConfig& cfg) {
  const std::size_t n = chunk.sentences.size();
  if (n == 0) return {};
  std::vector<std::size_t> length(n), nouns(n, 0);
  std::size_t max_len = 0, max_nouns = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto [first, last] = doc.sentence_tokens[chunk.sentences[k]];
    length[k] = last - first;
    for (std::size_t t = first; t < last; ++t) nouns[k] += doc.tokens[t].tag == PosTag::kNoun;
    max_len = std::max(max_len, length[k]);
    max_nouns = std::max(max_nouns, nouns[k]);
  }
  std::vector<double> score(n);
  for (std::size_t k = 0; k < n; ++k)
    score[k] = static_cast<double>(length[k]) / static_cast<double>(max_len) +
               static_cast<double>(nouns[k]) / static_cast<double>(std::max<std::size_t>(1, max_nouns));

  std::size_t discard = static_cast<std::size_t>(std::floor(cfg.discard_ratio * n + 1e-9));
  discard = std::min(discard, n - 1);
  // worst first: lowest score, later position on ties
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (score[a] != score[b]) return score[a] < score[b];
    return a > b;
  });
  std::vector<bool> dropped(n, false);
  for (std::size_t k = 0; k < discard; ++k) dropped[order[k]] = true;
  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < n; ++k)
    if (!dropped[k]) kept.push_back(chunk.sentences[k]);
  return kept;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::infinity();
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (values[hi] - values[lo]) * (pos - static_cast<double>(lo));
}

ChunkWeights chunk_weights(const NormalizedDocument& doc, const Chunk& chunk,
                           const index::InvertedIndex& background, const RetrievalConfig& cfg) {
  ChunkWeights w;
  w.token_tfidf.assign(doc.tokens.size(), 0.0);
  std::unordered_map<std::string, std::size_t> tf;
  for (std::size_t s : chunk.sentences) {
    const auto [first, last] = doc.sentence_tokens[s];
    for (std::size_t t = first; t < last; ++t)
      if (!doc.tokens[t].is_stopword) ++tf[doc.tokens[t].stem];
  }
  std::unordered_map<std::string, double> idf;
  for (const auto& [term, count] : tf) idf[term] = index::idf(background, term);
  std::vector<double> values;
  for (std::size_t s : chunk.sentences) {
    const auto [first, last] = doc.sentence_tokens[s];
    for (std::size_t t = first; t < last; ++t) {
      const auto& tok = doc.tokens[t];
      if (tok.is_stopword) continue;
      w.token_tfidf[t] = static_cast<double>(tf[tok.stem]) * idf[tok.stem];
      values.push_back(w.token_tfidf[t]);
    }
  }
  w.high_threshold = percentile(std::move(values), cfg.tfidf_high_percentile);
  return w;
}

KeywordSelection extract_keywords(const NormalizedDocument& doc, const Chunk& chunk,
                                  std::span<const std::size_t> kept, const ChunkWeights& weights,
                                  const RetrievalConfig& cfg) {
  struct Ranked {
    std::size_t sentence;
    double max = 0.0;
    double sum = 0.0;
  };
  std::vector<Ranked> ranked;
  for (std::size_t s : kept) {
    Ranked r{s};
    const auto [first, last] = doc.sentence_tokens[s];
    for (std::size_t t = first; t < last; ++t) {
      if (doc.tokens[t].is_stopword) continue;
      r.max = std::max(r.max, weights.token_tfidf[t]);
      r.sum += weights.token_tfidf[t];
    }
    ranked.push_back(r);
  }
  // ties on the maximum fall back to the sentence's total weight, then position
  std::stable_sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.max != b.max) return a.max > b.max;
    if (a.sum != b.sum) return a.sum > b.sum;
    return a.sentence < b.sentence;
  });
  ranked.resize(std::min(ranked.size(), cfg.top_sentences));

  bool chunk_has_nouns = false;
  for (std::size_t s : chunk.sentences) {
    const auto [first, last] = doc.sentence_tokens[s];
    for (std::size_t t = first; t < last; ++t)
      chunk_has_nouns |= !doc.tokens[t].is_stopword && doc.tokens[t].tag == PosTag::kNoun;
  }

  KeywordSelection out;
  out.fallback = !chunk_has_nouns;
  const double thr = weights.high_threshold;
  for (const auto& r : ranked) {
    SentenceKeywords kw{r.sentence, {}};
    std::unordered_set<std::string> seen;
    const auto [first, last] = doc.sentence_tokens[r.sentence];
    std::size_t best = first;
    for (std::size_t t = first; t < last; ++t) {
      const auto& tok = doc.tokens[t];
      if (tok.is_stopword) continue;
      const double w = weights.token_tfidf[t];
      if (doc.tokens[best].is_stopword || w > weights.token_tfidf[best]) best = t;
      bool take = false;
      if (chunk_has_nouns) {
        take = tok.tag == PosTag::kNoun ||
               ((tok.tag == PosTag::kAdj || tok.tag == PosTag::kVerb) && w >= thr);
      } else {
        take = w >= thr;
      }
      if (take && seen.insert(tok.stem).second) kw.terms.push_back(tok.stem);
    }
    if (out.fallback && kw.terms.empty() && !doc.tokens[best].is_stopword)
      kw.terms.push_back(doc.tokens[best].stem);
    out.sentences.push_back(std::move(kw));
  }
  return out;
}

std::vector<NounPhrase> extract_noun_phrases(const NormalizedDocument& doc,
                                             std::span<const std::size_t> kept,
                                             const ChunkWeights& weights,
                                             const text::NounPhrasePattern& pattern) {
  std::vector<NounPhrase> out;
  for (std::size_t s : kept) {
    const auto [first, last] = doc.sentence_tokens[s];
    std::size_t i = first;
    while (i < last) {
      const auto& head = doc.tokens[i];
      if (head.is_stopword || !pattern.is_head(head.tag)) {
        ++i;
        continue;
      }
      std::size_t j = i + 1;
      while (j < last && j - i - 1 < pattern.max_tail && !doc.tokens[j].is_stopword &&
             pattern.is_tail(doc.tokens[j].tag))
        ++j;
      NounPhrase np;
      np.first_token = i;
      for (std::size_t t = i; t < j; ++t) {
        np.terms.push_back(doc.tokens[t].stem);
        np.score += weights.token_tfidf[t];
      }
      out.push_back(std::move(np));
      i = j;
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const NounPhrase& a, const NounPhrase& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.first_token < b.first_token;
  });
  return out;
}

std::vector<Query> formulate_queries(const KeywordSelection& keywords,
                                     std::span<const NounPhrase> phrases, std::size_t chunk_id,
                                     const RetrievalConfig& cfg) {
  std::vector<Query> out;
  for (const auto& kw : keywords.sentences) {
    if (kw.terms.empty()) continue;
    Query q{kw.terms, chunk_id, QueryOrigin::kKeywordSentence};
    if (q.terms.size() > cfg.max_query_terms) q.terms.resize(cfg.max_query_terms);
    out.push_back(std::move(q));
  }
  Query np{{}, chunk_id, QueryOrigin::kNounPhrase};
  std::unordered_set<std::string> seen;
  for (const auto& phrase : phrases) {
    for (const auto& term : phrase.terms) {
      if (np.terms.size() == cfg.max_query_terms) break;
      if (seen.insert(term).second) np.terms.push_back(term);
    }
    if (np.terms.size() == cfg.max_query_terms) break;
  }
  if (!np.terms.empty()) out.push_back(std::move(np));
  return out;
}

Decision search_control(const Query& query, std::span<const std::uint32_t> downloaded,
                        const index::InvertedIndex& index, const RetrievalConfig& cfg) {
  std::set<std::string> distinct(query.terms.begin(), query.terms.end());
  if (distinct.empty() || downloaded.empty()) return Decision::kKeep;
  std::vector<std::uint32_t> ids;
  for (const auto& t : distinct)
    if (auto id = index.term_id(t)) ids.push_back(*id);
  const double need = cfg.search_control_overlap * static_cast<double>(distinct.size());
  for (std::uint32_t d : downloaded) {
    const auto terms = index.doc_terms(d);
    std::size_t covered = 0;
    for (auto id : ids) covered += std::binary_search(terms.begin(), terms.end(), id);
    if (static_cast<double>(covered) >= need - 1e-12) return Decision::kDrop;
  }
  return Decision::kKeep;
}

RetrievalResult retrieve_candidates(const NormalizedDocument& doc, const index::InvertedIndex& index,
                                    const text::LanguageResources& res, const RetrievalConfig& cfg) {
  RetrievalResult result;
  std::vector<std::uint32_t> downloaded;
  std::map<std::uint32_t, Candidate> agg;

  for (const auto& chunk : chunk_document(doc, cfg)) {
    const auto kept = rank_sentences(doc, chunk, cfg);
    const auto weights = chunk_weights(doc, chunk, index, cfg);
    const auto keywords = extract_keywords(doc, chunk, kept, weights, cfg);
    // noun phrases come from the kept sentences not used for keyword queries
    std::vector<std::size_t> remaining;
    for (std::size_t sent : kept) {
      const bool selected = std::any_of(keywords.sentences.begin(), keywords.sentences.end(),
                                        [&](const SentenceKeywords& k) { return k.sentence == sent; });
      if (!selected) remaining.push_back(sent);
    }
    const auto phrases = extract_noun_phrases(doc, remaining, weights, res.np_pattern);
    std::set<std::uint32_t> chunk_hits;
    for (auto& query : formulate_queries(keywords, phrases, chunk.id, cfg)) {
      if (search_control(query, downloaded, index, cfg) == Decision::kDrop) {
        ++result.dropped;
        continue;
      }
      for (const auto& hit : index::search(index, query.terms, cfg.hits_per_query)) {
        auto& c = agg[hit.doc];
        c.doc_id = hit.doc_id;
        c.aggregate_score += hit.score;
        ++c.query_count;
        chunk_hits.insert(hit.doc);
      }
      result.issued.push_back(std::move(query));
    }
    for (auto d : chunk_hits)
      if (std::find(downloaded.begin(), downloaded.end(), d) == downloaded.end()) downloaded.push_back(d);
  }

  for (auto& [ord, c] : agg) result.candidates.push_back(std::move(c));
  std::stable_sort(result.candidates.begin(), result.candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     if (a.aggregate_score != b.aggregate_score) return a.aggregate_score > b.aggregate_score;
                     return a.doc_id < b.doc_id;
                   });
  if (result.candidates.size() > cfg.candidates_per_doc) result.candidates.resize(cfg.candidates_per_doc);
  return result;
}

void write_candidates(std::ostream& out, const std::string& susp_doc_id,
                      std::span<const Candidate> candidates) {
  char score[32];
  for (const auto& c : candidates) {
    std::snprintf(score, sizeof score, "%.6f", c.aggregate_score);
    out << susp_doc_id << '\t' << c.doc_id << '\t' << score << '\t' << c.query_count << '\n';
  }
}

}  // namespace pdet::retrieval
