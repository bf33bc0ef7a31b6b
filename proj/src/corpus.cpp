#include "pdet/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "pdet/error.hpp"
#include "pdet/utf8.hpp"

namespace pdet::corpus {

namespace fs = std::filesystem;

namespace {

const Document* find_doc(const std::vector<Document>& docs, std::string_view id) {
  auto it = std::lower_bound(docs.begin(), docs.end(), id,
                             [](const Document& d, std::string_view x) { return d.doc_id < x; });
  return it != docs.end() && it->doc_id == id ? &*it : nullptr;
}

void require_dir(const fs::path& p) {
  if (!fs::is_directory(p)) throw MissingDirectoryError("missing corpus directory: " + p.string());
}

}  // namespace

const Document* Corpus::find_src(std::string_view doc_id) const { return find_doc(src_docs, doc_id); }
const Document* Corpus::find_susp(std::string_view doc_id) const { return find_doc(susp_docs, doc_id); }

std::vector<Document> read_documents(const fs::path& dir) {
  require_dir(dir);
  std::vector<Document> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
    Document d;
    d.doc_id = entry.path().filename().string();
    d.path = entry.path();
    d.text = utf8::read_file(entry.path());
    d.length = utf8::length(d.text);
    out.push_back(std::move(d));
  }
  std::sort(out.begin(), out.end(), [](const Document& a, const Document& b) { return a.doc_id < b.doc_id; });
  return out;
}

Corpus load_corpus(const fs::path& dir) {
  require_dir(dir);
  Corpus c;
  c.root = dir;
  c.src_docs = read_documents(dir / "src");
  c.susp_docs = read_documents(dir / "susp");

  if (fs::exists(dir / "pairs")) {
    std::istringstream in(utf8::read_file(dir / "pairs"));
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
      std::istringstream fields(line);
      std::string susp, src, extra;
      if (!(fields >> susp)) continue;
      if (!(fields >> src) || (fields >> extra))
        throw FormatError("pairs line " + std::to_string(n) + ": expected 'suspicious-file source-file'");
      if (!c.find_susp(susp)) throw DanglingReferenceError("pairs line " + std::to_string(n) + ": no suspicious file " + susp);
      if (!c.find_src(src)) throw DanglingReferenceError("pairs line " + std::to_string(n) + ": no source file " + src);
      c.pairs.emplace_back(susp, src);
    }
  }

  if (fs::is_directory(dir / "xml")) c.gold = evaluation::load_gold(dir / "xml");
  for (const auto& g : c.gold) {
    const Document* susp = c.find_susp(g.susp_doc_id);
    const Document* src = c.find_src(g.src_doc_id);
    if (!susp || !src)
      throw DanglingReferenceError("gold case references unknown document " + (susp ? g.src_doc_id : g.susp_doc_id));
    if (g.susp_range.end > susp->length || g.src_range.end > src->length)
      throw FormatError("gold case range exceeds document length in " + g.susp_doc_id);
  }
  return c;
}

std::string_view to_string(Obfuscation o) {
  switch (o) {
    case Obfuscation::kNone: return "NONE";
    case Obfuscation::kShuffle: return "SHUFFLE";
    case Obfuscation::kSynonym: return "SYNONYM";
  }
  return "NONE";
}

std::optional<Obfuscation> parse_obfuscation(std::string_view name) {
  if (name == "NONE") return Obfuscation::kNone;
  if (name == "SHUFFLE") return Obfuscation::kShuffle;
  if (name == "SYNONYM") return Obfuscation::kSynonym;
  return std::nullopt;
}

std::vector<std::string> read_word_list(const fs::path& path) {
  std::istringstream in(utf8::read_file(path));
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    std::istringstream fields(line);
    std::string w;
    if (fields >> w) out.push_back(w);
  }
  return out;
}

}  // namespace pdet::corpus
