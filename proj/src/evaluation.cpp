#include "pdet/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <nlohmann/json.hpp>
#include <tuple>

#include "pdet/error.hpp"

namespace pdet::evaluation {

using alignment::Detection;
using text::Span;

namespace {

enum class Side { kSusp, kSrc };
// Characters belong to a document pair: (suspicious id, source id, side).
using Key = std::tuple<std::string, std::string, Side>;

// Sorted, disjoint intervals per key.
class CharSets {
 public:
  void add(const Key& key, Span r) { raw_[key].push_back(r); }

  void finalize() {
    for (auto& [key, spans] : raw_) {
      std::sort(spans.begin(), spans.end());
      std::vector<Span> merged;
      for (const auto& s : spans) {
        if (!merged.empty() && s.begin <= merged.back().end) {
          merged.back().end = std::max(merged.back().end, s.end);
        } else {
          merged.push_back(s);
        }
      }
      spans = std::move(merged);
    }
  }

  std::size_t overlap(const Key& key, Span r) const {
    auto it = raw_.find(key);
    if (it == raw_.end()) return 0;
    const auto& spans = it->second;
    auto pos = std::upper_bound(spans.begin(), spans.end(), r.begin,
                                [](std::size_t x, const Span& s) { return x < s.end; });
    std::size_t total = 0;
    for (; pos != spans.end() && pos->begin < r.end; ++pos)
      total += std::min(r.end, pos->end) - std::max(r.begin, pos->begin);
    return total;
  }

 private:
  std::map<Key, std::vector<Span>> raw_;
};

bool intersects(Span a, Span b) { return a.begin < b.end && b.begin < a.end; }

void check_detection(const Detection& d) {
  if (d.susp_range.empty() || d.src_range.empty())
    throw InvalidDetectionError("detection with an empty range in " + d.susp_doc_id);
  if (d.susp_doc_id == d.src_doc_id && intersects(d.susp_range, d.src_range))
    throw InvalidDetectionError("detection maps text of " + d.susp_doc_id + " onto itself");
}

bool detects(const Detection& d, const GoldCase& g) {
  return d.susp_doc_id == g.susp_doc_id && d.src_doc_id == g.src_doc_id &&
         intersects(d.susp_range, g.susp_range) && intersects(d.src_range, g.src_range);
}

template <typename T>
Key susp_key(const T& x) {
  return {x.susp_doc_id, x.src_doc_id, Side::kSusp};
}
template <typename T>
Key src_key(const T& x) {
  return {x.susp_doc_id, x.src_doc_id, Side::kSrc};
}

}  // namespace

PrecisionRecall macro_precision_recall(std::span<const GoldCase> gold, std::span<const Detection> det) {
  for (const auto& d : det) check_detection(d);
  if (gold.empty() && det.empty()) return {1.0, 1.0};

  CharSets gold_chars, det_chars;
  for (const auto& g : gold) {
    gold_chars.add(susp_key(g), g.susp_range);
    gold_chars.add(src_key(g), g.src_range);
  }
  for (const auto& d : det) {
    det_chars.add(susp_key(d), d.susp_range);
    det_chars.add(src_key(d), d.src_range);
  }
  gold_chars.finalize();
  det_chars.finalize();

  PrecisionRecall out;
  if (gold.empty()) {
    out.recall = 1.0;
  } else {
    double sum = 0.0;
    for (const auto& g : gold) {
      const std::size_t hit = det_chars.overlap(susp_key(g), g.susp_range) +
                              det_chars.overlap(src_key(g), g.src_range);
      sum += static_cast<double>(hit) / static_cast<double>(g.susp_range.size() + g.src_range.size());
    }
    out.recall = sum / static_cast<double>(gold.size());
  }
  if (!det.empty()) {
    double sum = 0.0;
    for (const auto& d : det) {
      const std::size_t hit = gold_chars.overlap(susp_key(d), d.susp_range) +
                              gold_chars.overlap(src_key(d), d.src_range);
      sum += static_cast<double>(hit) / static_cast<double>(d.susp_range.size() + d.src_range.size());
    }
    out.precision = sum / static_cast<double>(det.size());
  }
  return out;
}

double granularity(std::span<const GoldCase> gold, std::span<const Detection> det) {
  std::size_t detected = 0, total = 0;
  for (const auto& g : gold) {
    std::size_t count = 0;
    for (const auto& d : det) count += detects(d, g);
    if (count > 0) {
      ++detected;
      total += count;
    }
  }
  if (detected == 0) return 1.0;
  return static_cast<double>(total) / static_cast<double>(detected);
}

double f_measure(double precision, double recall) {
  if (precision + recall <= 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double plagdet(double precision, double recall, double granularity) {
  return f_measure(precision, recall) / std::log2(1.0 + granularity);
}

EvalSummary evaluate(std::span<const GoldCase> gold, std::span<const Detection> det) {
  const auto pr = macro_precision_recall(gold, det);
  EvalSummary s;
  s.precision = pr.precision;
  s.recall = pr.recall;
  s.granularity = granularity(gold, det);
  s.f_measure = f_measure(pr.precision, pr.recall);
  s.plagdet = plagdet(pr.precision, pr.recall, s.granularity);
  return s;
}

std::string to_json(const EvalSummary& s) {
  nlohmann::ordered_json j;
  j["recall"] = s.recall;
  j["precision"] = s.precision;
  j["granularity"] = s.granularity;
  j["f_measure"] = s.f_measure;
  j["plagdet"] = s.plagdet;
  return j.dump(2);
}

}  // namespace pdet::evaluation
