#include <charconv>
#include <sstream>

#include "pdet/error.hpp"
#include "pdet/hash.hpp"
#include "pdet/textnorm.hpp"
#include "pdet/utf8.hpp"

namespace pdet::text {

namespace fs = std::filesystem;

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string> fields;
};

// Splits on ASCII whitespace only: resource entries may contain U+200C.
std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<Line> read_lines(const fs::path& path, Fnv1a& digest) {
  const std::string bytes = utf8::read_file(path);
  digest.update(path.filename().string());
  digest.update(bytes);
  std::vector<Line> out;
  std::istringstream in(bytes);
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (!line.empty() && line[0] == '#') continue;
    auto fields = split_fields(line);
    if (!fields.empty()) out.push_back({n, std::move(fields)});
  }
  return out;
}

[[noreturn]] void bad_line(const fs::path& path, std::size_t line, const std::string& what) {
  throw ConfigError(path.string() + ":" + std::to_string(line) + ": " + what);
}

char32_t parse_hex(const fs::path& path, const Line& l, const std::string& s) {
  unsigned long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
  if (ec != std::errc() || ptr != s.data() + s.size() || v > 0x10FFFF)
    bad_line(path, l.number, "bad code point '" + s + "'");
  return static_cast<char32_t>(v);
}

std::size_t parse_count(const fs::path& path, const Line& l, const std::string& s) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) bad_line(path, l.number, "bad number '" + s + "'");
  return v;
}

std::vector<PosTag> parse_tag_set(const fs::path& path, const Line& l, const std::string& s) {
  std::vector<PosTag> out;
  std::size_t i = 0;
  while (i <= s.size()) {
    std::size_t j = s.find('|', i);
    if (j == std::string::npos) j = s.size();
    auto tag = parse_tag(std::string_view(s).substr(i, j - i));
    if (!tag) bad_line(path, l.number, "unknown tag in '" + s + "'");
    out.push_back(*tag);
    i = j + 1;
  }
  return out;
}

}  // namespace

void LanguageResources::validate() const {
  for (const auto& [from, to] : char_map) {
    if (to && *to != from && char_map.count(*to) != 0)
      throw ConfigError("char_map is not single-pass: output code point " +
                        std::to_string(static_cast<unsigned>(*to)) + " is also an input");
  }
  for (std::size_t i = 1; i < suffix_rules.size(); ++i) {
    if (suffix_rules[i].suffix.size() > suffix_rules[i - 1].suffix.size())
      throw ConfigError("suffix rules must be ordered longest first");
  }
  for (const auto& rule : suffix_rules) {
    if (rule.suffix.empty()) throw ConfigError("empty suffix rule");
    if (rule.min_stem_len == 0) throw ConfigError("suffix rule min stem length must be >= 1");
  }
}

LanguageResources LanguageResources::load(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("resource directory not found: " + dir.string());
  LanguageResources res;
  Fnv1a digest;

  const fs::path charmap = dir / "charmap.txt";
  for (const auto& l : read_lines(charmap, digest)) {
    if (l.fields.size() != 2) bad_line(charmap, l.number, "expected 'SRC_HEX DST_HEX|DEL'");
    const char32_t src = parse_hex(charmap, l, l.fields[0]);
    if (l.fields[1] == "DEL") {
      res.char_map[src] = std::nullopt;
    } else {
      res.char_map[src] = parse_hex(charmap, l, l.fields[1]);
    }
  }

  auto normalized = [&res](const std::string& word) {
    return utf8::encode(normalize(utf8::decode(word), res).text);
  };

  for (const auto& l : read_lines(dir / "stopwords.txt", digest))
    res.stopwords.insert(normalized(l.fields[0]));

  const fs::path suffixes = dir / "suffixes.txt";
  for (const auto& l : read_lines(suffixes, digest)) {
    if (l.fields.size() < 2 || l.fields.size() > 3)
      bad_line(suffixes, l.number, "expected 'SUFFIX MIN_LEN [CLASS]'");
    SuffixRule rule;
    rule.suffix = normalize(utf8::decode(l.fields[0]), res).text;
    rule.min_stem_len = parse_count(suffixes, l, l.fields[1]);
    if (l.fields.size() == 3) {
      const auto& c = l.fields[2];
      if (c == "PLURAL") rule.cls = SuffixClass::kPlural;
      else if (c == "SUPERLATIVE") rule.cls = SuffixClass::kSuperlative;
      else if (c == "COMPARATIVE") rule.cls = SuffixClass::kComparative;
      else if (c != "NONE") bad_line(suffixes, l.number, "unknown suffix class '" + c + "'");
    }
    res.suffix_rules.push_back(std::move(rule));
  }

  const fs::path lexicon = dir / "lexicon.txt";
  for (const auto& l : read_lines(lexicon, digest)) {
    if (l.fields.size() != 2) bad_line(lexicon, l.number, "expected 'SURFACE TAG'");
    auto tag = parse_tag(l.fields[1]);
    if (!tag) bad_line(lexicon, l.number, "unknown tag '" + l.fields[1] + "'");
    res.pos_lexicon[normalized(l.fields[0])] = *tag;
  }

  const fs::path np = dir / "nppattern.txt";
  if (fs::exists(np)) {
    auto lines = read_lines(np, digest);
    if (lines.size() != 1 || lines[0].fields.size() != 3)
      bad_line(np, lines.empty() ? 0 : lines[0].number, "expected 'HEAD_TAGS TAIL_TAGS MAX_TAIL'");
    res.np_pattern.head = parse_tag_set(np, lines[0], lines[0].fields[0]);
    res.np_pattern.tail = parse_tag_set(np, lines[0], lines[0].fields[1]);
    res.np_pattern.max_tail = parse_count(np, lines[0], lines[0].fields[2]);
  }

  res.validate();
  fs::path name = fs::absolute(dir).lexically_normal();
  if (name.filename().empty()) name = name.parent_path();
  res.bundle_id = name.filename().string() + "-" + digest.hex();
  return res;
}

}  // namespace pdet::text
