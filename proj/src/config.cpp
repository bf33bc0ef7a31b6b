#include "pdet/config.hpp"

#include <set>
#include <type_traits>

#include "pdet/error.hpp"
#include "pdet/utf8.hpp"

namespace pdet::config {

namespace fs = std::filesystem;
using alignment::AlignmentConfig;
using retrieval::RetrievalConfig;

namespace {

bool is_count(const Json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

// Reads keys of one JSON object and rejects the keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected a JSON object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    const Json& v = j_.at(key);
    if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
      if (!is_count(v)) throw ConfigError(path(key) + ": expected a non-negative integer");
      out = v.get<T>();
    } else if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ConfigError(path(key) + ": expected a number");
      out = v.get<double>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(path(key) + ": expected a string");
      out = v.get<std::string>();
    } else {
      static_assert(std::is_same_v<T, Json>);
      out = v;
    }
  }

  bool has(const char* key) const { return j_.contains(key); }

  void finish() const {
    for (const auto& [key, _] : j_.items())
      if (!seen_.count(key)) throw ConfigError(path(key.c_str()) + ": unknown key");
  }

  std::string path(const char* key) const { return where_ + "." + key; }

 private:
  const Json& j_;
  std::string where_;
  std::set<std::string, std::less<>> seen_;
};

alignment::Method method_from(const std::string& name, const std::string& where) {
  auto m = alignment::parse_method(name);
  if (!m) throw ConfigError(where + ": unknown method '" + name + "' (VSM, CHAR_NGRAM, WORD_NGRAM)");
  return *m;
}

template <typename T>
std::vector<T> list_of(const Json& v, const std::string& where) {
  std::vector<T> out;
  if (!v.is_array()) throw ConfigError(where + ": expected an array");
  for (const auto& x : v) {
    if constexpr (std::is_same_v<T, std::size_t>) {
      if (!is_count(x)) throw ConfigError(where + ": expected non-negative integers");
    } else if constexpr (std::is_same_v<T, double>) {
      if (!x.is_number()) throw ConfigError(where + ": expected numbers");
    } else {
      if (!x.is_string()) throw ConfigError(where + ": expected strings");
    }
    out.push_back(x.get<T>());
  }
  return out;
}

std::vector<std::string> word_list(const Json& v, const fs::path& base_dir, const std::string& where) {
  if (v.is_string()) {
    fs::path p = v.get<std::string>();
    return corpus::read_word_list(p.is_absolute() ? p : base_dir / p);
  }
  return list_of<std::string>(v, where);
}

}  // namespace

Json to_json(const RetrievalConfig& c) {
  Json j;
  j["chunk_len"] = c.chunk_len;
  j["min_tail"] = c.min_tail;
  j["discard_ratio"] = c.discard_ratio;
  j["top_sentences"] = c.top_sentences;
  j["max_query_terms"] = c.max_query_terms;
  j["candidates_per_doc"] = c.candidates_per_doc;
  j["tfidf_high_percentile"] = c.tfidf_high_percentile;
  j["search_control_overlap"] = c.search_control_overlap;
  j["hits_per_query"] = c.hits_per_query;
  return j;
}

Json to_json(const AlignmentConfig& c) {
  Json j;
  j["method"] = std::string(alignment::to_string(c.method));
  j["threshold"] = c.threshold;
  j["char_n"] = c.char_n;
  j["word_n"] = c.word_n;
  j["merge_gap"] = c.merge_gap;
  return j;
}

Json to_json(const PipelineConfig& c) {
  Json j;
  j["retrieval"] = to_json(c.retrieval);
  j["alignment"] = to_json(c.alignment);
  j["resources"] = c.resources;
  return j;
}

RetrievalConfig retrieval_from_json(const Json& j) {
  RetrievalConfig c;
  ObjectReader r(j, "retrieval");
  r.get("chunk_len", c.chunk_len);
  r.get("min_tail", c.min_tail);
  r.get("discard_ratio", c.discard_ratio);
  r.get("top_sentences", c.top_sentences);
  r.get("max_query_terms", c.max_query_terms);
  r.get("candidates_per_doc", c.candidates_per_doc);
  r.get("tfidf_high_percentile", c.tfidf_high_percentile);
  r.get("search_control_overlap", c.search_control_overlap);
  r.get("hits_per_query", c.hits_per_query);
  r.finish();
  c.validate();
  return c;
}

AlignmentConfig alignment_from_json(const Json& j, AlignmentConfig c) {
  ObjectReader r(j, "alignment");
  std::string method(alignment::to_string(c.method));
  r.get("method", method);
  c.method = method_from(method, r.path("method"));
  r.get("threshold", c.threshold);
  r.get("char_n", c.char_n);
  r.get("word_n", c.word_n);
  r.get("merge_gap", c.merge_gap);
  r.finish();
  c.validate();
  return c;
}

PipelineConfig pipeline_from_json(const Json& j) {
  PipelineConfig c;
  ObjectReader r(j, "config");
  Json sub;
  if (r.has("retrieval")) {
    r.get("retrieval", sub);
    c.retrieval = retrieval_from_json(sub);
  } else {
    r.get("retrieval", sub);
  }
  if (r.has("alignment")) {
    r.get("alignment", sub);
    c.alignment = alignment_from_json(sub);
  } else {
    r.get("alignment", sub);
  }
  r.get("resources", c.resources);
  r.finish();
  return c;
}

void PipelineConfig::validate() const {
  retrieval.validate();
  alignment.validate();
}

Grid grid_from_json(const Json& j) {
  Grid g;
  ObjectReader r(j, "grid");
  Json base, experiments;
  r.get("base", base);
  r.get("experiments", experiments);
  r.finish();
  if (!base.is_null()) g.base = pipeline_from_json(base);
  if (experiments.is_null()) throw ConfigError("grid.experiments: missing");
  if (!experiments.is_array()) throw ConfigError("grid.experiments: expected an array");

  for (std::size_t e = 0; e < experiments.size(); ++e) {
    const std::string where = "grid.experiments[" + std::to_string(e) + "]";
    ObjectReader x(experiments[e], where);
    std::string method;
    Json ns, thresholds;
    std::size_t merge_gap = g.base.alignment.merge_gap;
    x.get("method", method);
    x.get("n", ns);
    x.get("threshold", thresholds);
    x.get("merge_gap", merge_gap);
    x.finish();
    AlignmentConfig proto = g.base.alignment;
    proto.method = method_from(method, x.path("method"));
    proto.merge_gap = merge_gap;

    std::vector<std::size_t> n_values;
    if (proto.method == alignment::Method::kVsm || ns.is_null()) {
      n_values.push_back(proto.n());
    } else {
      n_values = ns.is_array() ? list_of<std::size_t>(ns, x.path("n"))
                               : std::vector<std::size_t>{list_of<std::size_t>(Json::array({ns}), x.path("n"))};
    }
    std::vector<double> theta_values;
    if (thresholds.is_null()) {
      theta_values.push_back(proto.threshold);
    } else {
      theta_values = thresholds.is_array() ? list_of<double>(thresholds, x.path("threshold"))
                                           : list_of<double>(Json::array({thresholds}), x.path("threshold"));
    }
    for (auto n : n_values) {
      for (auto theta : theta_values) {
        GridPoint p{proto};
        if (p.alignment.method == alignment::Method::kWordNgram) p.alignment.word_n = n;
        if (p.alignment.method == alignment::Method::kCharNgram) p.alignment.char_n = n;
        p.alignment.threshold = theta;
        p.alignment.validate();
        g.points.push_back(p);
      }
    }
  }
  if (g.points.empty()) throw ConfigError("grid has no experiments");
  return g;
}

corpus::GenSpec genspec_from_json(const Json& j, const fs::path& base_dir) {
  corpus::GenSpec s;
  ObjectReader r(j, "gen");
  std::string obfuscation(corpus::to_string(s.obfuscation));
  Json vocabulary, function_words;
  r.get("seed", s.seed);
  r.get("n_src", s.n_src);
  r.get("n_susp", s.n_susp);
  r.get("cases_per_susp", s.cases_per_susp);
  r.get("passage_len", s.passage_len);
  r.get("obfuscation", obfuscation);
  r.get("vocabulary", vocabulary);
  r.get("function_words", function_words);
  r.get("function_word_rate", s.function_word_rate);
  r.get("synonym_rate", s.synonym_rate);
  r.get("src_sentences_min", s.src_sentences_min);
  r.get("src_sentences_max", s.src_sentences_max);
  r.get("sentence_len_min", s.sentence_len_min);
  r.get("sentence_len_max", s.sentence_len_max);
  r.get("filler_max", s.filler_max);
  r.finish();
  auto o = corpus::parse_obfuscation(obfuscation);
  if (!o) throw ConfigError("gen.obfuscation: expected NONE, SHUFFLE or SYNONYM");
  s.obfuscation = *o;
  if (!vocabulary.is_null()) s.vocabulary = word_list(vocabulary, base_dir, r.path("vocabulary"));
  if (!function_words.is_null()) s.function_words = word_list(function_words, base_dir, r.path("function_words"));
  s.validate();
  return s;
}

Json to_json(const corpus::GenSpec& s) {
  Json j;
  j["seed"] = s.seed;
  j["n_src"] = s.n_src;
  j["n_susp"] = s.n_susp;
  j["cases_per_susp"] = s.cases_per_susp;
  j["passage_len"] = s.passage_len;
  j["obfuscation"] = std::string(corpus::to_string(s.obfuscation));
  j["vocabulary"] = s.vocabulary;
  j["function_words"] = s.function_words;
  j["function_word_rate"] = s.function_word_rate;
  j["synonym_rate"] = s.synonym_rate;
  j["src_sentences_min"] = s.src_sentences_min;
  j["src_sentences_max"] = s.src_sentences_max;
  j["sentence_len_min"] = s.sentence_len_min;
  j["sentence_len_max"] = s.sentence_len_max;
  j["filler_max"] = s.filler_max;
  return j;
}

Json read_json(const fs::path& path) {
  const std::string text = utf8::read_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

namespace {

void resolve_resources(PipelineConfig& c, const fs::path& file) {
  if (!c.resources.empty() && fs::path(c.resources).is_relative())
    c.resources = (file.parent_path() / c.resources).lexically_normal().string();
}

}  // namespace

PipelineConfig load_pipeline(const fs::path& path) {
  auto c = pipeline_from_json(read_json(path));
  resolve_resources(c, path);
  return c;
}

Grid load_grid(const fs::path& path) {
  auto g = grid_from_json(read_json(path));
  resolve_resources(g.base, path);
  return g;
}

corpus::GenSpec load_genspec(const fs::path& path) { return genspec_from_json(read_json(path), path.parent_path()); }

}  // namespace pdet::config
