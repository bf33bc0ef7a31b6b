#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "pdet/corpus.hpp"
#include "pdet/error.hpp"
#include "pdet/utf8.hpp"

namespace pdet::corpus {

namespace fs = std::filesystem;
using text::Span;

namespace {

// mt19937_64 output is fixed by the standard; the distributions are not,
// so sampling is done by hand to keep corpora identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do x = eng_(); while (x >= limit);
    return x % n;
  }
  std::size_t range(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return uniform() < p; }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 eng_;
};

struct Sentence {
  std::vector<std::size_t> words;  // indices into the word table
};

struct GenDoc {
  std::u32string text;
  std::vector<Span> spans;
  std::vector<Sentence> sentences;
};

class Generator {
 public:
  explicit Generator(const GenSpec& spec) : spec_(spec), rng_(spec.seed) {
    for (const auto& w : spec.vocabulary) words_.push_back(utf8::decode(w));
    n_content_ = words_.size();
    for (const auto& w : spec.function_words) words_.push_back(utf8::decode(w));
    for (const auto& [a, b] : synonym_table(spec)) {
      auto ia = std::find(spec.vocabulary.begin(), spec.vocabulary.end(), a) - spec.vocabulary.begin();
      auto ib = std::find(spec.vocabulary.begin(), spec.vocabulary.end(), b) - spec.vocabulary.begin();
      synonyms_[static_cast<std::size_t>(ia)] = static_cast<std::size_t>(ib);
    }
  }

  std::size_t content_word() { return rng_.below(n_content_); }

  Sentence make_sentence() {
    Sentence s;
    const std::size_t len = rng_.range(spec_.sentence_len_min, spec_.sentence_len_max);
    bool has_content = false;
    for (std::size_t k = 0; k < len; ++k) {
      const bool function = words_.size() > n_content_ && rng_.chance(spec_.function_word_rate);
      if (function) {
        s.words.push_back(n_content_ + rng_.below(words_.size() - n_content_));
      } else {
        s.words.push_back(content_word());
        has_content = true;
      }
    }
    if (!has_content) s.words.back() = content_word();
    return s;
  }

  std::u32string render(const Sentence& s) const {
    std::u32string out;
    for (std::size_t k = 0; k < s.words.size(); ++k) {
      if (k > 0) out.push_back(U' ');
      out += words_[s.words[k]];
    }
    out.push_back(U'.');
    return out;
  }

  GenDoc make_source() {
    std::size_t n = rng_.range(spec_.src_sentences_min, spec_.src_sentences_max);
    for (int retry = 0; n < spec_.passage_len; ++retry) {
      if (retry == 16)
        throw GenerationError("cannot fit a " + std::to_string(spec_.passage_len) +
                              "-sentence passage into generated sources");
      n = rng_.range(spec_.src_sentences_min, spec_.src_sentences_max);
    }
    GenDoc doc;
    std::size_t until_break = rng_.range(4, 7);
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) {
        if (--until_break == 0) {
          doc.text += U"\n\n";
          until_break = rng_.range(4, 7);
        } else {
          doc.text.push_back(U' ');
        }
      }
      Sentence s = make_sentence();
      const std::size_t begin = doc.text.size();
      doc.text += render(s);
      doc.spans.push_back({begin, doc.text.size()});
      doc.sentences.push_back(std::move(s));
    }
    doc.text.push_back(U'\n');
    return doc;
  }

  std::u32string obfuscate(const GenDoc& src, std::size_t first) {
    const std::size_t last = first + spec_.passage_len - 1;
    const Span whole{src.spans[first].begin, src.spans[last].end};
    if (spec_.obfuscation == Obfuscation::kNone) return src.text.substr(whole.begin, whole.size());
    std::u32string out;
    for (std::size_t i = first; i <= last; ++i) {
      if (i > first) {
        const std::size_t gap = src.spans[i - 1].end;
        out += src.text.substr(gap, src.spans[i].begin - gap);
      }
      Sentence s = src.sentences[i];
      if (spec_.obfuscation == Obfuscation::kShuffle) {
        rng_.shuffle(s.words);
      } else {
        for (auto& w : s.words) {
          auto it = synonyms_.find(w);
          if (it != synonyms_.end() && rng_.chance(spec_.synonym_rate)) w = it->second;
        }
      }
      out += render(s);
    }
    return out;
  }

  std::uint64_t below(std::uint64_t n) { return rng_.below(n); }
  std::size_t range(std::size_t lo, std::size_t hi) { return rng_.range(lo, hi); }
  bool chance(double p) { return rng_.chance(p); }

 private:
  const GenSpec& spec_;
  Rng rng_;
  std::vector<std::u32string> words_;
  std::size_t n_content_ = 0;
  std::unordered_map<std::size_t, std::size_t> synonyms_;
};

std::string numbered(const char* stem, std::size_t i, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%05zu%s", stem, i, ext);
  return buf;
}

}  // namespace

void GenSpec::validate() const {
  if (n_src < 1 || n_susp < 1 || cases_per_susp < 1 || passage_len < 1)
    throw ConfigError("generator counts must be >= 1");
  if (vocabulary.empty()) throw ConfigError("generator vocabulary is empty");
  if (sentence_len_min < 1 || sentence_len_min > sentence_len_max)
    throw ConfigError("need 1 <= sentence_len_min <= sentence_len_max");
  if (src_sentences_min < 1 || src_sentences_min > src_sentences_max)
    throw ConfigError("need 1 <= src_sentences_min <= src_sentences_max");
  if (!(function_word_rate >= 0.0 && function_word_rate < 1.0)) throw ConfigError("function_word_rate must be in [0, 1)");
  if (!(synonym_rate >= 0.0 && synonym_rate <= 1.0)) throw ConfigError("synonym_rate must be in [0, 1]");
}

std::vector<std::pair<std::string, std::string>> synonym_table(const GenSpec& spec) {
  std::vector<std::string> words = spec.vocabulary;
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  Rng rng(spec.seed ^ 0x9E3779B97F4A7C15ULL);
  rng.shuffle(words);
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i + 1 < words.size(); i += 2) {
    out.emplace_back(words[i], words[i + 1]);
    out.emplace_back(words[i + 1], words[i]);
  }
  return out;
}

Corpus generate(const GenSpec& spec, const fs::path& out_dir) {
  spec.validate();
  Generator gen(spec);

  std::vector<GenDoc> sources;
  for (std::size_t i = 0; i < spec.n_src; ++i) sources.push_back(gen.make_source());

  struct Susp {
    std::u32string text;
    std::vector<evaluation::GoldCase> cases;
    std::set<std::size_t> sources;
  };
  std::vector<Susp> susps;
  for (std::size_t d = 0; d < spec.n_susp; ++d) {
    Susp s;
    const std::string susp_id = numbered("suspicious-document", d + 1, ".txt");
    bool first_piece = true;
    auto separate = [&] {
      if (!first_piece) s.text += gen.chance(0.2) ? U"\n\n" : U" ";
      first_piece = false;
    };
    auto filler = [&] {
      const std::size_t k = gen.range(0, spec.filler_max);
      for (std::size_t i = 0; i < k; ++i) {
        separate();
        s.text += gen.render(gen.make_sentence());
      }
    };
    for (std::size_t c = 0; c < spec.cases_per_susp; ++c) {
      filler();
      const std::size_t src = gen.below(spec.n_src);
      const GenDoc& source = sources[src];
      const std::size_t first = gen.below(source.spans.size() - spec.passage_len + 1);
      const std::u32string passage = gen.obfuscate(source, first);
      separate();
      evaluation::GoldCase g;
      g.susp_doc_id = susp_id;
      g.susp_range = {s.text.size(), s.text.size() + passage.size()};
      g.src_doc_id = numbered("source-document", src + 1, ".txt");
      g.src_range = {source.spans[first].begin, source.spans[first + spec.passage_len - 1].end};
      s.text += passage;
      s.cases.push_back(std::move(g));
      s.sources.insert(src);
    }
    filler();
    s.text.push_back(U'\n');
    susps.push_back(std::move(s));
  }

  // (re)create the managed parts of the output directory
  std::error_code ec;
  for (const char* sub : {"src", "susp", "xml"}) fs::remove_all(out_dir / sub, ec);
  fs::remove(out_dir / "pairs", ec);
  for (const char* sub : {"src", "susp", "xml"}) {
    fs::create_directories(out_dir / sub, ec);
    if (ec) throw IoError("cannot create " + (out_dir / sub).string() + ": " + ec.message());
  }

  for (std::size_t i = 0; i < sources.size(); ++i)
    utf8::write_file(out_dir / "src" / numbered("source-document", i + 1, ".txt"), utf8::encode(sources[i].text));

  std::ostringstream pairs;
  for (std::size_t d = 0; d < susps.size(); ++d) {
    const std::string susp_id = numbered("suspicious-document", d + 1, ".txt");
    utf8::write_file(out_dir / "susp" / susp_id, utf8::encode(susps[d].text));
    std::ostringstream xml;
    evaluation::write_gold_xml(xml, susp_id, susps[d].cases);
    utf8::write_file(out_dir / "xml" / numbered("suspicious-document", d + 1, ".xml"), xml.str());

    std::set<std::size_t> paired = susps[d].sources;
    if (paired.size() < spec.n_src) {
      std::size_t neg = gen.below(spec.n_src);
      while (paired.count(neg)) neg = (neg + 1) % spec.n_src;
      paired.insert(neg);
    }
    for (auto src : paired) pairs << susp_id << ' ' << numbered("source-document", src + 1, ".txt") << '\n';
  }
  utf8::write_file(out_dir / "pairs", pairs.str());

  return load_corpus(out_dir);
}

}  // namespace pdet::corpus
