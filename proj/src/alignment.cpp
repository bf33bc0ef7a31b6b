#include "pdet/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "pdet/error.hpp"
#include "pdet/utf8.hpp"

namespace pdet::alignment {

using text::NormalizedDocument;

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kVsm: return "VSM";
    case Method::kCharNgram: return "CHAR_NGRAM";
    case Method::kWordNgram: return "WORD_NGRAM";
  }
  return "VSM";
}

std::optional<Method> parse_method(std::string_view name) {
  if (name == "VSM") return Method::kVsm;
  if (name == "CHAR_NGRAM") return Method::kCharNgram;
  if (name == "WORD_NGRAM") return Method::kWordNgram;
  return std::nullopt;
}

void AlignmentConfig::validate() const {
  if (!(threshold > 0.0 && threshold <= 1.0)) throw ConfigError("threshold must be in (0, 1]");
  if (char_n < 1 || word_n < 1) throw ConfigError("n-gram order must be >= 1");
}

std::uint32_t TermIds::id(const std::string& term) {
  if (auto known = index_.term_id(term)) return *known;
  auto [it, inserted] =
      extra_.emplace(term, static_cast<std::uint32_t>(index_.term_count() + extra_.size()));
  return it->second;
}

std::vector<SentenceVector> sentence_vectors(const NormalizedDocument& doc,
                                             const index::InvertedIndex& idf_source, TermIds& ids) {
  std::vector<SentenceVector> out(doc.sentences.size());
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    std::map<std::uint32_t, std::pair<std::uint32_t, const std::string*>> tf;
    const auto [first, last] = doc.sentence_tokens[s];
    for (std::size_t t = first; t < last; ++t) {
      const auto& tok = doc.tokens[t];
      if (tok.is_stopword) continue;
      auto& slot = tf[ids.id(tok.stem)];
      ++slot.first;
      slot.second = &tok.stem;
    }
    auto& vec = out[s];
    double sq = 0.0;
    for (const auto& [term, entry] : tf) {
      const double w = entry.first * index::idf(idf_source, *entry.second);
      vec.weights.push_back({term, w});
      sq += w * w;
    }
    vec.norm = std::sqrt(sq);
  }
  return out;
}

double cosine(const SentenceVector& u, const SentenceVector& v) {
  if (u.norm <= 0.0 || v.norm <= 0.0) return 0.0;
  double dot = 0.0;
  auto a = u.weights.begin();
  auto b = v.weights.begin();
  while (a != u.weights.end() && b != v.weights.end()) {
    if (a->term < b->term) {
      ++a;
    } else if (b->term < a->term) {
      ++b;
    } else {
      dot += a->weight * b->weight;
      ++a;
      ++b;
    }
  }
  return std::clamp(dot / (u.norm * v.norm), 0.0, 1.0);
}

namespace {

std::vector<MatchedPair> to_matched(const std::vector<kernels::ScoredPair>& scored) {
  std::vector<MatchedPair> out;
  out.reserve(scored.size());
  for (const auto& p : scored) out.push_back({p.i, p.j, p.sim});
  return out;
}

}  // namespace

std::vector<MatchedPair> match_sentences(std::span<const SentenceVector> susp,
                                         std::span<const SentenceVector> src,
                                         const AlignmentConfig& cfg) {
  auto sim = [&](std::size_t i, std::size_t j) { return cosine(susp[i], src[j]); };
  return to_matched(kernels::threshold_pairs(susp.size(), src.size(), sim, cfg.threshold));
}

std::vector<MatchedPair> match_sentences_serial(std::span<const SentenceVector> susp,
                                                std::span<const SentenceVector> src,
                                                const AlignmentConfig& cfg) {
  auto sim = [&](std::size_t i, std::size_t j) { return cosine(susp[i], src[j]); };
  return to_matched(kernels::threshold_pairs_serial(susp.size(), src.size(), sim, cfg.threshold));
}

std::vector<Detection> merge_matches(std::span<const MatchedPair> input, const NormalizedDocument& susp,
                                     const NormalizedDocument& src, const AlignmentConfig& cfg) {
  std::vector<MatchedPair> pairs(input.begin(), input.end());
  std::sort(pairs.begin(), pairs.end(), [](const MatchedPair& a, const MatchedPair& b) {
    return a.susp != b.susp ? a.susp < b.susp : a.src < b.src;
  });
  const std::size_t n = pairs.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  const std::size_t reach = 1 + cfg.merge_gap;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n && pairs[b].susp - pairs[a].susp <= reach; ++b) {
      const std::size_t dj = pairs[a].src > pairs[b].src ? pairs[a].src - pairs[b].src
                                                         : pairs[b].src - pairs[a].src;
      if (dj <= reach) parent[find(a)] = find(b);
    }
  }

  struct Group {
    std::uint32_t i_min = UINT32_MAX, i_max = 0, j_min = UINT32_MAX, j_max = 0;
    double sum = 0.0;
    std::size_t count = 0;
  };
  std::map<std::size_t, Group> groups;  // keyed by root
  for (std::size_t k = 0; k < n; ++k) {
    auto& g = groups[find(k)];
    g.i_min = std::min(g.i_min, pairs[k].susp);
    g.i_max = std::max(g.i_max, pairs[k].susp);
    g.j_min = std::min(g.j_min, pairs[k].src);
    g.j_max = std::max(g.j_max, pairs[k].src);
    g.sum += pairs[k].sim;
    ++g.count;
  }

  std::vector<Detection> out;
  for (const auto& [root, g] : groups) {
    Detection d;
    d.susp_doc_id = susp.doc_id;
    d.src_doc_id = src.doc_id;
    d.susp_range = susp.to_raw({susp.sentences[g.i_min].begin, susp.sentences[g.i_max].end});
    d.src_range = src.to_raw({src.sentences[g.j_min].begin, src.sentences[g.j_max].end});
    d.score = g.sum / static_cast<double>(g.count);
    d.pair_count = g.count;
    d.method = cfg.method;
    out.push_back(std::move(d));
  }
  sort_detections(out);
  return out;
}

NgramSet char_ngrams(std::u32string_view sentence, std::size_t n) {
  std::u32string collapsed;
  collapsed.reserve(sentence.size());
  for (char32_t c : sentence) {
    if (text::is_space(c)) {
      if (!collapsed.empty() && collapsed.back() != U' ') collapsed.push_back(U' ');
    } else {
      collapsed.push_back(c);
    }
  }
  while (!collapsed.empty() && collapsed.back() == U' ') collapsed.pop_back();
  NgramSet out;
  if (collapsed.empty()) return out;
  // a text shorter than n becomes a single sub-length unit; it can only
  // ever match an identical short text
  if (collapsed.size() < n) return {collapsed};
  for (std::size_t i = 0; i + n <= collapsed.size(); ++i) out.push_back(collapsed.substr(i, n));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

NgramSet word_ngrams(std::span<const std::string> words, std::size_t n) {
  NgramSet out;
  if (words.empty()) return out;
  auto join = [&](std::size_t from, std::size_t count) {
    std::u32string g;
    for (std::size_t k = 0; k < count; ++k) {
      if (k > 0) g.push_back(0x1F);
      g += utf8::decode(words[from + k]);
    }
    return g;
  };
  if (words.size() < n) return {join(0, words.size())};
  for (std::size_t i = 0; i + n <= words.size(); ++i) out.push_back(join(i, n));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double jaccard(const NgramSet& a, const NgramSet& b) {
  if (a.empty() || b.empty()) return 0.0;
  std::size_t inter = 0;
  auto x = a.begin();
  auto y = b.begin();
  while (x != a.end() && y != b.end()) {
    if (*x < *y) {
      ++x;
    } else if (*y < *x) {
      ++y;
    } else {
      ++inter;
      ++x;
      ++y;
    }
  }
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

double char_ngram_similarity(std::u32string_view a, std::u32string_view b, std::size_t n) {
  return jaccard(char_ngrams(a, n), char_ngrams(b, n));
}

double word_ngram_similarity(std::span<const std::string> a, std::span<const std::string> b,
                             std::size_t n) {
  return jaccard(word_ngrams(a, n), word_ngrams(b, n));
}

namespace {

std::vector<NgramSet> sentence_grams(const NormalizedDocument& doc, const AlignmentConfig& cfg) {
  std::vector<NgramSet> out(doc.sentences.size());
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    if (cfg.method == Method::kCharNgram) {
      const auto& span = doc.sentences[s];
      out[s] = char_ngrams(std::u32string_view(doc.norm_text).substr(span.begin, span.size()), cfg.char_n);
    } else {
      std::vector<std::string> stems;
      const auto [first, last] = doc.sentence_tokens[s];
      for (std::size_t t = first; t < last; ++t)
        if (!doc.tokens[t].is_stopword) stems.push_back(doc.tokens[t].stem);
      out[s] = word_ngrams(stems, cfg.word_n);
    }
  }
  return out;
}

}  // namespace

SentenceSimilarity::SentenceSimilarity(const NormalizedDocument& susp, const NormalizedDocument& src,
                                       const index::InvertedIndex& idf_source, const AlignmentConfig& cfg)
    : method_(cfg.method), rows_(susp.sentences.size()), cols_(src.sentences.size()) {
  if (method_ == Method::kVsm) {
    TermIds ids(idf_source);
    susp_vecs_ = sentence_vectors(susp, idf_source, ids);
    src_vecs_ = sentence_vectors(src, idf_source, ids);
  } else {
    susp_grams_ = sentence_grams(susp, cfg);
    src_grams_ = sentence_grams(src, cfg);
  }
}

double SentenceSimilarity::operator()(std::size_t i, std::size_t j) const {
  if (method_ == Method::kVsm) return cosine(susp_vecs_[i], src_vecs_[j]);
  return jaccard(susp_grams_[i], src_grams_[j]);
}

std::vector<MatchedPair> SentenceSimilarity::pairs_at_or_above(double threshold) const {
  if (method_ == Method::kVsm) {
    AlignmentConfig cfg;
    cfg.threshold = threshold;
    return match_sentences(susp_vecs_, src_vecs_, cfg);
  }
  auto sim = [this](std::size_t i, std::size_t j) { return (*this)(i, j); };
  return to_matched(kernels::threshold_pairs(rows_, cols_, sim, threshold));
}

std::vector<Detection> align(const NormalizedDocument& susp, const NormalizedDocument& src,
                             const index::InvertedIndex& idf_source, const AlignmentConfig& cfg) {
  const SentenceSimilarity sim(susp, src, idf_source, cfg);
  const auto pairs = sim.pairs_at_or_above(cfg.threshold);
  return merge_matches(pairs, susp, src, cfg);
}

void sort_detections(std::vector<Detection>& detections) {
  std::stable_sort(detections.begin(), detections.end(), [](const Detection& a, const Detection& b) {
    if (a.susp_doc_id != b.susp_doc_id) return a.susp_doc_id < b.susp_doc_id;
    if (a.susp_range.begin != b.susp_range.begin) return a.susp_range.begin < b.susp_range.begin;
    if (a.src_doc_id != b.src_doc_id) return a.src_doc_id < b.src_doc_id;
    if (a.src_range.begin != b.src_range.begin) return a.src_range.begin < b.src_range.begin;
    return a.susp_range.end < b.susp_range.end;
  });
}

namespace {

constexpr std::string_view kDetectionHeader =
    "susp_doc_id\tsusp_offset\tsusp_length\tsrc_doc_id\tsrc_offset\tsrc_length\tscore\tmethod";

std::size_t parse_size(const std::string& field, std::size_t line) {
  if (!field.empty() && field[0] == '-')
    throw InvalidDetectionError("detections line " + std::to_string(line) + ": negative value");
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(field, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != field.size())
    throw FormatError("detections line " + std::to_string(line) + ": bad integer '" + field + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace

void write_detections(std::ostream& out, std::span<const Detection> detections) {
  out << kDetectionHeader << '\n';
  char score[32];
  for (const auto& d : detections) {
    std::snprintf(score, sizeof score, "%.6f", d.score);
    out << d.susp_doc_id << '\t' << d.susp_range.begin << '\t' << d.susp_range.size() << '\t'
        << d.src_doc_id << '\t' << d.src_range.begin << '\t' << d.src_range.size() << '\t' << score
        << '\t' << to_string(d.method) << '\n';
  }
}

std::vector<Detection> read_detections(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kDetectionHeader)
    throw FormatError("detections: missing or unexpected header");
  std::vector<Detection> out;
  for (std::size_t number = 2; std::getline(in, line); ++number) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream fields(line);
    for (std::string x; std::getline(fields, x, '\t');) f.push_back(x);
    if (f.size() != 8) throw FormatError("detections line " + std::to_string(number) + ": expected 8 fields");
    Detection d;
    d.susp_doc_id = f[0];
    const std::size_t so = parse_size(f[1], number), sl = parse_size(f[2], number);
    d.src_doc_id = f[3];
    const std::size_t ro = parse_size(f[4], number), rl = parse_size(f[5], number);
    if (sl == 0 || rl == 0)
      throw InvalidDetectionError("detections line " + std::to_string(number) + ": empty range");
    d.susp_range = {so, so + sl};
    d.src_range = {ro, ro + rl};
    try {
      d.score = std::stod(f[6]);
    } catch (const std::exception&) {
      throw FormatError("detections line " + std::to_string(number) + ": bad score");
    }
    auto m = parse_method(f[7]);
    if (!m) throw FormatError("detections line " + std::to_string(number) + ": unknown method");
    d.method = *m;
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace pdet::alignment
