#include "support.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "pdet/config.hpp"
#include "pdet/error.hpp"

using namespace pdet;
namespace fs = std::filesystem;

namespace {

corpus::GenSpec small_spec(corpus::Obfuscation o, std::uint64_t seed = 5) {
  auto s = config::load_genspec(testing::repo() / "config" / "gen-none.json");
  s.seed = seed;
  s.n_src = 12;
  s.n_susp = 4;
  s.cases_per_susp = 2;
  s.obfuscation = o;
  return s;
}

std::string slice(const std::string& utf8_text, text::Span r) {
  const auto t = utf8::decode(utf8_text);
  return utf8::encode(std::u32string_view(t).substr(r.begin, r.size()));
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) {
    while (!w.empty() && w.back() == '.') w.pop_back();
    if (!w.empty()) out.push_back(w);
  }
  return out;
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = utf8::read_file(e.path());
  return out;
}

}  // namespace

TEST_CASE("corpus: fixture layout") {
  const auto c = corpus::load_corpus(testing::fixture());
  CHECK(c.src_docs.size() == 4);
  CHECK(c.susp_docs.size() == 2);
  CHECK(c.pairs.size() == 3);
  CHECK(c.gold.size() == 2);
  CHECK(c.find_src("source-a.txt") != nullptr);
  CHECK(c.find_src("susp-1.txt") == nullptr);
  CHECK(std::is_sorted(c.src_docs.begin(), c.src_docs.end(),
                       [](const auto& a, const auto& b) { return a.doc_id < b.doc_id; }));
  // the second case is a verbatim copy; the first leaves out one source sentence
  CHECK(slice(c.find_susp("susp-1.txt")->text, c.gold[1].susp_range) ==
        slice(c.find_src("source-a.txt")->text, c.gold[1].src_range));
  CHECK(c.gold[0].susp_range.size() < c.gold[0].src_range.size());
}

TEST_CASE("corpus: loader errors") {
  const auto dir = testing::scratch("corpus-errors");
  SUBCASE("missing directories") { CHECK_THROWS_AS(corpus::load_corpus(dir), MissingDirectoryError); }
  fs::create_directories(dir / "src");
  fs::create_directories(dir / "susp");
  utf8::write_file(dir / "src" / "a.txt", "alpha beta.");
  utf8::write_file(dir / "susp" / "s.txt", "gamma delta.");
  SUBCASE("pairs and gold are optional") {
    const auto c = corpus::load_corpus(dir);
    CHECK(c.pairs.empty());
    CHECK(c.gold.empty());
  }
  SUBCASE("pairs naming unknown files") {
    utf8::write_file(dir / "pairs", "s.txt b.txt\n");
    CHECK_THROWS_AS(corpus::load_corpus(dir), DanglingReferenceError);
  }
  SUBCASE("malformed pairs line") {
    utf8::write_file(dir / "pairs", "s.txt\n");
    CHECK_THROWS_AS(corpus::load_corpus(dir), FormatError);
  }
  SUBCASE("gold past the end of a document") {
    fs::create_directories(dir / "xml");
    std::ostringstream xml;
    const std::vector<evaluation::GoldCase> g{{"s.txt", {0, 50}, "a.txt", {0, 5}}};
    evaluation::write_gold_xml(xml, "s.txt", g);
    utf8::write_file(dir / "xml" / "s.xml", xml.str());
    CHECK_THROWS_AS(corpus::load_corpus(dir), FormatError);
  }
  SUBCASE("gold naming an unknown source") {
    fs::create_directories(dir / "xml");
    std::ostringstream xml;
    const std::vector<evaluation::GoldCase> g{{"s.txt", {0, 5}, "zz.txt", {0, 5}}};
    evaluation::write_gold_xml(xml, "s.txt", g);
    utf8::write_file(dir / "xml" / "s.xml", xml.str());
    CHECK_THROWS_AS(corpus::load_corpus(dir), DanglingReferenceError);
  }
  fs::remove_all(dir);
}

TEST_CASE("corpus: word lists skip comments and keep the first field") {
  const auto dir = testing::scratch("wordlist");
  utf8::write_file(dir / "w.txt", "# comment\nalpha NOUN\n\n  beta\n");
  CHECK(corpus::read_word_list(dir / "w.txt") == std::vector<std::string>{"alpha", "beta"});
  fs::remove_all(dir);
}

TEST_CASE("generator: identical specs give byte-identical corpora") {
  const auto dir = testing::scratch("gen-det");
  const auto spec = small_spec(corpus::Obfuscation::kShuffle);
  corpus::generate(spec, dir / "a");
  corpus::generate(spec, dir / "b");
  CHECK(read_tree(dir / "a") == read_tree(dir / "b"));
  auto other = spec;
  other.seed += 1;
  corpus::generate(other, dir / "c");
  CHECK(read_tree(dir / "a") != read_tree(dir / "c"));
  fs::remove_all(dir);
}

TEST_CASE("generator: layout and gold annotations") {
  const auto dir = testing::scratch("gen-layout");
  const auto spec = small_spec(corpus::Obfuscation::kNone);
  const auto c = corpus::generate(spec, dir);
  CHECK(c.src_docs.size() == spec.n_src);
  CHECK(c.susp_docs.size() == spec.n_susp);
  CHECK(c.gold.size() == spec.n_susp * spec.cases_per_susp);
  CHECK(c.src_docs.front().doc_id == "source-document00001.txt");
  CHECK(c.susp_docs.front().doc_id == "suspicious-document00001.txt");
  std::set<std::pair<std::string, std::string>> pairs(c.pairs.begin(), c.pairs.end());
  for (const auto& g : c.gold) {
    CHECK(pairs.count({g.susp_doc_id, g.src_doc_id}) == 1);
    // verbatim copies are exact
    CHECK(slice(c.find_susp(g.susp_doc_id)->text, g.susp_range) == slice(c.find_src(g.src_doc_id)->text, g.src_range));
  }
  // every suspicious document also has a pair without plagiarism
  for (const auto& s : c.susp_docs) {
    std::size_t negatives = 0;
    for (const auto& [susp, src] : c.pairs) {
      if (susp != s.doc_id) continue;
      const bool has_case = std::any_of(c.gold.begin(), c.gold.end(), [&](const auto& g) {
        return g.susp_doc_id == susp && g.src_doc_id == src;
      });
      negatives += !has_case;
    }
    CHECK(negatives >= 1);
  }
  // the loader agrees with what the generator returned
  const auto reloaded = corpus::load_corpus(dir);
  CHECK(reloaded.gold == c.gold);
  CHECK(reloaded.pairs == c.pairs);
  fs::remove_all(dir);
}

TEST_CASE("generator: shuffled passages keep each sentence's words") {
  const auto dir = testing::scratch("gen-shuffle");
  const auto c = corpus::generate(small_spec(corpus::Obfuscation::kShuffle), dir);
  std::size_t changed = 0;
  for (const auto& g : c.gold) {
    const auto a = slice(c.find_susp(g.susp_doc_id)->text, g.susp_range);
    const auto b = slice(c.find_src(g.src_doc_id)->text, g.src_range);
    auto wa = words(a), wb = words(b);
    changed += wa != wb;
    std::sort(wa.begin(), wa.end());
    std::sort(wb.begin(), wb.end());
    CHECK(wa == wb);
    CHECK(std::count(a.begin(), a.end(), '.') == std::count(b.begin(), b.end(), '.'));
  }
  CHECK(changed == c.gold.size());
  fs::remove_all(dir);
}

TEST_CASE("generator: synonym passages substitute through the synonym table") {
  const auto dir = testing::scratch("gen-synonym");
  const auto spec = small_spec(corpus::Obfuscation::kSynonym);
  const auto c = corpus::generate(spec, dir);
  std::map<std::string, std::string> syn;
  for (const auto& [a, b] : corpus::synonym_table(spec)) {
    syn[a] = b;
    syn[b] = a;
  }
  std::size_t replaced = 0, total = 0;
  for (const auto& g : c.gold) {
    const auto wa = words(slice(c.find_susp(g.susp_doc_id)->text, g.susp_range));
    const auto wb = words(slice(c.find_src(g.src_doc_id)->text, g.src_range));
    REQUIRE(wa.size() == wb.size());
    for (std::size_t k = 0; k < wa.size(); ++k) {
      ++total;
      if (wa[k] == wb[k]) continue;
      CHECK(syn.at(wb[k]) == wa[k]);
      ++replaced;
    }
  }
  const double rate = static_cast<double>(replaced) / total;
  CHECK(rate > 0.1);
  CHECK(rate < 0.5);
  fs::remove_all(dir);
}

TEST_CASE("generator: synonym table is a deterministic pairing") {
  const auto spec = small_spec(corpus::Obfuscation::kSynonym);
  const auto t = corpus::synonym_table(spec);
  CHECK(t == corpus::synonym_table(spec));
  // both directions are listed and every word has at most one partner
  std::map<std::string, std::string> partner;
  for (const auto& [a, b] : t) {
    CHECK(a != b);
    CHECK(partner.emplace(a, b).second);
  }
  for (const auto& [a, b] : partner) CHECK(partner.at(b) == a);
  CHECK(partner.size() + 1 >= spec.vocabulary.size());
}

TEST_CASE("generator: specification checks") {
  auto s = small_spec(corpus::Obfuscation::kNone);
  CHECK_NOTHROW(s.validate());
  auto bad = s;
  bad.vocabulary.clear();
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = s;
  bad.n_src = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = s;
  bad.sentence_len_min = 20;
  bad.sentence_len_max = 10;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = s;
  bad.synonym_rate = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = s;
  bad.passage_len = 100;
  const auto dir = testing::scratch("gen-too-long");
  CHECK_THROWS_AS(corpus::generate(bad, dir), GenerationError);
  fs::remove_all(dir);
}
