// On-disk layout: see docs/index-format.md.

#include <bit>
#include <cstring>
#include <sstream>

#include "pdet/error.hpp"
#include "pdet/hash.hpp"
#include "pdet/index.hpp"
#include "pdet/utf8.hpp"

namespace pdet::index {

namespace fs = std::filesystem;

namespace {

constexpr char kHeaderMagic[8] = {'P', 'D', 'E', 'T', 'H', 'D', 'R', '\0'};
constexpr char kTermsMagic[8] = {'P', 'D', 'E', 'T', 'T', 'R', 'M', '\0'};
constexpr char kPostingsMagic[8] = {'P', 'D', 'E', 'T', 'P', 'S', 'T', '\0'};

class Writer {
 public:
  void bytes(const void* p, std::size_t n) { buf_.append(static_cast<const char*>(p), n); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  void preamble(const char (&magic)[8]) {
    bytes(magic, 8);
    u32(kFormatVersion);
    u32(0);
  }
  const std::string& data() const { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  Reader(std::string data, std::string name) : data_(std::move(data)), name_(std::move(name)) {}

  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw IndexTruncatedError(name_ + ": truncated");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  void preamble(const char (&magic)[8]) {
    need(8);
    if (std::memcmp(data_.data(), magic, 8) != 0) throw IndexCorruptError(name_ + ": bad magic bytes");
    pos_ = 8;
    const std::uint32_t version = u32();
    if (version != kFormatVersion)
      throw IndexVersionError(name_ + ": format version " + std::to_string(version) + ", expected " +
                              std::to_string(kFormatVersion));
    u32();
  }
  void expect_end() const {
    if (pos_ != data_.size()) throw IndexCorruptError(name_ + ": trailing bytes");
  }

 private:
  std::string data_;
  std::string name_;
  std::size_t pos_ = 0;
};

Reader open(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("missing index file: " + path.string());
  return Reader(utf8::read_file(path), path.filename().string());
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (true) {
    std::size_t j = line.find('\t', i);
    out.push_back(line.substr(i, j == std::string::npos ? std::string::npos : j - i));
    if (j == std::string::npos) break;
    i = j + 1;
  }
  return out;
}

}  // namespace

void persist(const InvertedIndex& index, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create index directory " + dir.string() + ": " + ec.message());

  Writer header;
  header.preamble(kHeaderMagic);
  header.u64(index.size());
  header.u64(index.term_count());
  header.u64(index.posting_count());
  header.str(index.source_root);
  header.str(index.resources_dir);
  header.str(index.resources_id);
  for (double n : index.norms_) header.f64(n);

  Writer terms;
  terms.preamble(kTermsMagic);
  terms.u64(index.term_count());
  for (std::uint32_t t = 0; t < index.term_count(); ++t) {
    terms.str(index.terms_[t]);
    terms.u32(index.df(t));
  }

  Writer postings;
  postings.preamble(kPostingsMagic);
  postings.u64(index.posting_count());
  for (const auto& plist : index.postings_) {
    for (const auto& p : plist) {
      postings.u32(p.doc);
      postings.u32(p.tf);
    }
  }

  std::string docs = "doc_id\tpath\ttoken_count\n";
  for (const auto& d : index.docs_)
    docs += d.doc_id + "\t" + d.path + "\t" + std::to_string(d.token_count) + "\n";

  utf8::write_file(dir / "header.bin", header.data());
  utf8::write_file(dir / "terms.dat", terms.data());
  utf8::write_file(dir / "postings.dat", postings.data());
  utf8::write_file(dir / "docs.tsv", docs);
}

InvertedIndex load(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("index directory not found: " + dir.string());
  InvertedIndex index;

  Reader header = open(dir / "header.bin");
  header.preamble(kHeaderMagic);
  const std::uint64_t n_docs = header.u64();
  const std::uint64_t n_terms = header.u64();
  const std::uint64_t n_postings = header.u64();
  index.source_root = header.str();
  index.resources_dir = header.str();
  index.resources_id = header.str();
  header.need(n_docs * 8);
  index.norms_.resize(n_docs);
  for (auto& n : index.norms_) n = header.f64();
  header.expect_end();

  Reader terms = open(dir / "terms.dat");
  terms.preamble(kTermsMagic);
  if (terms.u64() != n_terms) throw IndexCorruptError("terms.dat: term count disagrees with header");
  std::vector<std::uint32_t> dfs(n_terms);
  index.terms_.resize(n_terms);
  std::uint64_t df_total = 0;
  for (std::uint64_t t = 0; t < n_terms; ++t) {
    index.terms_[t] = terms.str();
    dfs[t] = terms.u32();
    df_total += dfs[t];
    if (dfs[t] == 0 || dfs[t] > n_docs) throw IndexCorruptError("terms.dat: document frequency out of range");
    if (t > 0 && !(index.terms_[t - 1] < index.terms_[t])) throw IndexCorruptError("terms.dat: terms not sorted");
  }
  terms.expect_end();
  if (df_total != n_postings) throw IndexCorruptError("terms.dat: frequencies disagree with posting count");

  Reader postings = open(dir / "postings.dat");
  postings.preamble(kPostingsMagic);
  if (postings.u64() != n_postings) throw IndexCorruptError("postings.dat: count disagrees with header");
  postings.need(n_postings * 8);
  index.postings_.resize(n_terms);
  for (std::uint64_t t = 0; t < n_terms; ++t) {
    auto& plist = index.postings_[t];
    plist.resize(dfs[t]);
    for (std::uint32_t k = 0; k < dfs[t]; ++k) {
      plist[k].doc = postings.u32();
      plist[k].tf = postings.u32();
      if (plist[k].doc >= n_docs || plist[k].tf == 0 || (k > 0 && plist[k - 1].doc >= plist[k].doc))
        throw IndexCorruptError("postings.dat: invalid posting for term '" + index.terms_[t] + "'");
    }
  }
  postings.expect_end();

  const fs::path docs_path = dir / "docs.tsv";
  if (!fs::exists(docs_path)) throw IoError("missing index file: " + docs_path.string());
  std::istringstream docs(utf8::read_file(docs_path));
  std::string line;
  if (!std::getline(docs, line) || line != "doc_id\tpath\ttoken_count")
    throw IndexCorruptError("docs.tsv: bad header");
  while (std::getline(docs, line)) {
    if (line.empty()) continue;
    auto f = split_tabs(line);
    if (f.size() != 3) throw IndexCorruptError("docs.tsv: expected 3 columns");
    DocEntry e{f[0], f[1], 0};
    try {
      e.token_count = std::stoull(f[2]);
    } catch (const std::exception&) {
      throw IndexCorruptError("docs.tsv: bad token count '" + f[2] + "'");
    }
    if (!index.docs_.empty() && !(index.docs_.back().doc_id < e.doc_id))
      throw IndexCorruptError("docs.tsv: document ids not strictly ascending");
    index.docs_.push_back(std::move(e));
  }
  if (index.docs_.size() != n_docs) throw IndexTruncatedError("docs.tsv: expected " + std::to_string(n_docs) + " rows");

  index.finish();
  return index;
}

std::string directory_digest(const fs::path& dir) {
  Fnv1a h;
  for (const char* name : {"header.bin", "terms.dat", "postings.dat", "docs.tsv"}) {
    h.update(name);
    h.update(utf8::read_file(dir / name));
  }
  return h.hex();
}

}  // namespace pdet::index
