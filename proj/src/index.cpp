#include "pdet/index.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "pdet/error.hpp"
#include "pdet/kernels.hpp"

namespace pdet::index {

double idf_value(std::size_t n_docs, std::size_t df) {
  return std::log((static_cast<double>(n_docs) + 1.0) / (static_cast<double>(df) + 1.0)) + 1.0;
}

double idf(const InvertedIndex& index, std::string_view term) {
  return idf_value(index.size(), index.df(term));
}

TermCounts count_terms(const text::NormalizedDocument& doc, std::string path) {
  TermCounts out;
  out.doc_id = doc.doc_id;
  out.path = path.empty() ? doc.doc_id : std::move(path);
  out.token_count = doc.tokens.size();
  std::map<std::string, std::uint32_t> counts;
  for (const auto& tok : doc.tokens)
    if (!tok.is_stopword) ++counts[tok.stem];
  out.counts.assign(counts.begin(), counts.end());
  return out;
}

std::size_t InvertedIndex::posting_count() const {
  std::size_t n = 0;
  for (const auto& p : postings_) n += p.size();
  return n;
}

std::optional<std::uint32_t> InvertedIndex::term_id(std::string_view term) const {
  auto it = term_lookup_.find(std::string(term));
  if (it == term_lookup_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t InvertedIndex::df(std::string_view term) const {
  auto id = term_id(term);
  return id ? df(*id) : 0;
}

std::optional<std::uint32_t> InvertedIndex::doc_ordinal(std::string_view doc_id) const {
  auto it = doc_lookup_.find(std::string(doc_id));
  if (it == doc_lookup_.end()) return std::nullopt;
  return it->second;
}

std::span<const std::uint32_t> InvertedIndex::doc_terms(std::uint32_t ordinal) const {
  return std::span<const std::uint32_t>(forward_terms_)
      .subspan(forward_offsets_[ordinal], forward_offsets_[ordinal + 1] - forward_offsets_[ordinal]);
}

bool InvertedIndex::operator==(const InvertedIndex& o) const {
  return terms_ == o.terms_ && postings_ == o.postings_ && docs_ == o.docs_ && norms_ == o.norms_ &&
         source_root == o.source_root && resources_dir == o.resources_dir &&
         resources_id == o.resources_id;
}

void InvertedIndex::finish() {
  term_lookup_.clear();
  term_lookup_.reserve(terms_.size());
  for (std::uint32_t t = 0; t < terms_.size(); ++t) term_lookup_.emplace(terms_[t], t);
  doc_lookup_.clear();
  for (std::uint32_t d = 0; d < docs_.size(); ++d) doc_lookup_.emplace(docs_[d].doc_id, d);

  std::vector<std::size_t> lengths(docs_.size(), 0);
  for (const auto& plist : postings_)
    for (const auto& p : plist) ++lengths[p.doc];
  forward_offsets_.assign(docs_.size() + 1, 0);
  for (std::size_t d = 0; d < docs_.size(); ++d) forward_offsets_[d + 1] = forward_offsets_[d] + lengths[d];
  forward_terms_.assign(forward_offsets_.back(), 0);
  std::vector<std::size_t> cursor(forward_offsets_.begin(), forward_offsets_.end() - 1);
  for (std::uint32_t t = 0; t < postings_.size(); ++t)
    for (const auto& p : postings_[t]) forward_terms_[cursor[p.doc]++] = t;
}

InvertedIndex InvertedIndex::build(std::vector<TermCounts> docs) {
  std::sort(docs.begin(), docs.end(),
            [](const TermCounts& a, const TermCounts& b) { return a.doc_id < b.doc_id; });
  for (std::size_t i = 1; i < docs.size(); ++i) {
    if (docs[i].doc_id == docs[i - 1].doc_id)
      throw DuplicateDocumentError("duplicate document id: " + docs[i].doc_id);
  }

  InvertedIndex index;
  std::map<std::string, std::vector<Posting>> by_term;
  for (std::uint32_t d = 0; d < docs.size(); ++d) {
    for (const auto& [term, tf] : docs[d].counts) by_term[term].push_back({d, tf});
    index.docs_.push_back({docs[d].doc_id, docs[d].path, docs[d].token_count});
  }
  index.terms_.reserve(by_term.size());
  index.postings_.reserve(by_term.size());
  for (auto& [term, plist] : by_term) {
    index.terms_.push_back(term);
    index.postings_.push_back(std::move(plist));
  }
  index.finish();

  kernels::SparseRows rows;
  std::vector<double> weight(index.terms_.size());
  for (std::uint32_t t = 0; t < index.terms_.size(); ++t) weight[t] = idf_value(index.size(), index.df(t));
  rows.offsets = index.forward_offsets_;
  rows.cols = index.forward_terms_;
  rows.vals.resize(rows.cols.size());
  std::vector<std::size_t> cursor(rows.offsets.begin(), rows.offsets.end() - 1);
  for (const auto& plist : index.postings_)
    for (const auto& p : plist) rows.vals[cursor[p.doc]++] = p.tf;
  index.norms_ = kernels::weighted_row_norms(rows, weight);
  return index;
}

InvertedIndex build_index(std::span<const text::NormalizedDocument> corpus,
                          std::span<const std::string> paths) {
  std::vector<TermCounts> counts;
  counts.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i)
    counts.push_back(count_terms(corpus[i], i < paths.size() ? paths[i] : std::string{}));
  return InvertedIndex::build(std::move(counts));
}

std::vector<SearchHit> search(const InvertedIndex& index, std::span<const std::string> terms,
                              std::size_t k) {
  std::map<std::string_view, std::uint32_t> query_tf;
  for (const auto& t : terms) ++query_tf[t];
  if (query_tf.empty() || k == 0) return {};

  std::vector<double> acc(index.size(), 0.0);
  std::vector<std::uint32_t> touched;
  double query_norm_sq = 0.0;
  for (const auto& [term, count] : query_tf) {
    const auto id = index.term_id(term);
    const double w_idf = idf_value(index.size(), id ? index.df(*id) : 0);
    const double qw = count * w_idf;
    query_norm_sq += qw * qw;
    if (!id) continue;
    for (const auto& p : index.postings(*id)) {
      if (acc[p.doc] == 0.0) touched.push_back(p.doc);
      acc[p.doc] += qw * (p.tf * w_idf);
    }
  }
  const double query_norm = std::sqrt(query_norm_sq);

  std::vector<SearchHit> hits;
  hits.reserve(touched.size());
  for (auto d : touched) {
    const double denom = query_norm * index.doc_norm(d);
    if (denom <= 0.0) continue;
    hits.push_back({index.doc(d).doc_id, d, std::min(1.0, acc[d] / denom)});
  }
  auto order = [](const SearchHit& a, const SearchHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  };
  if (hits.size() > k) {
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(k), hits.end(), order);
    hits.resize(k);
  } else {
    std::sort(hits.begin(), hits.end(), order);
  }
  return hits;
}

}  // namespace pdet::index
