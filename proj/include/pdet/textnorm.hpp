#pragma once

// Offset-preserving normalization, segmentation, light stemming and
// lexicon-based tagging for Arabic-script (and test Latin-script) text.
//
// All character positions are Unicode code point indices.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace pdet::text {

enum class PosTag : std::uint8_t { kNoun, kAdj, kVerb, kOther };

std::string_view to_string(PosTag tag);
std::optional<PosTag> parse_tag(std::string_view name);

/// Half-open code point range [begin, end).
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return end <= begin; }
  bool contains(const Span& o) const { return begin <= o.begin && o.end <= end; }
  auto operator<=>(const Span&) const = default;
};

enum class SuffixClass : std::uint8_t { kNone, kPlural, kSuperlative, kComparative };

struct SuffixRule {
  std::u32string suffix;
  std::size_t min_stem_len = 1;
  SuffixClass cls = SuffixClass::kNone;
};

/// Tag pattern HEAD TAIL{0,max_tail}; the default is NOUN (NOUN|ADJ){0,3}.
struct NounPhrasePattern {
  std::vector<PosTag> head{PosTag::kNoun};
  std::vector<PosTag> tail{PosTag::kNoun, PosTag::kAdj};
  std::size_t max_tail = 3;

  bool is_head(PosTag t) const;
  bool is_tail(PosTag t) const;
};

/// Language data for one script. Immutable once loaded; share freely
/// across threads.
struct LanguageResources {
  // A mapped value of nullopt deletes the code point.
  std::unordered_map<char32_t, std::optional<char32_t>> char_map;
  std::unordered_set<std::string> stopwords;
  std::vector<SuffixRule> suffix_rules;  // longest suffix first
  std::unordered_map<std::string, PosTag> pos_lexicon;
  NounPhrasePattern np_pattern;
  std::string bundle_id;

  /// Reads charmap.txt, stopwords.txt, suffixes.txt, lexicon.txt and the
  /// optional nppattern.txt. Word lists are passed through char_map so
  /// they compare equal to normalized text.
  static LanguageResources load(const std::filesystem::path& dir);

  /// Throws ConfigError when char_map is not single-pass or suffix_rules
  /// are not ordered longest-first.
  void validate() const;

  bool is_stopword(std::string_view surface) const {
    return stopwords.count(std::string(surface)) != 0;
  }
};

struct NormalizedText {
  std::u32string text;
  std::vector<std::size_t> offset_map;  // norm index -> raw index
};

struct Token {
  std::string surface;  // UTF-8
  std::string stem;     // UTF-8
  PosTag tag = PosTag::kOther;
  Span span;            // in norm text
  bool is_stopword = false;
  std::size_t sentence = 0;
};

struct Segmentation {
  std::vector<Span> sentences;
  std::vector<Token> tokens;
};

struct NormalizedDocument {
  std::string doc_id;
  std::u32string raw_text;
  std::u32string norm_text;
  std::vector<std::size_t> offset_map;
  std::vector<Span> sentences;
  std::vector<Token> tokens;
  // token index range [first, second) of each sentence
  std::vector<std::pair<std::size_t, std::size_t>> sentence_tokens;

  /// Maps a non-empty norm-text range to the raw-text range it came from.
  Span to_raw(const Span& norm) const;
};

NormalizedText normalize(std::u32string_view raw, const LanguageResources& res);

/// Sentence spans are trimmed of surrounding whitespace and include their
/// terminator; sentences without any token are dropped.
Segmentation segment(std::u32string_view norm, const LanguageResources& res);

std::u32string stem(std::u32string_view surface, const LanguageResources& res);
std::string stem(std::string_view surface_utf8, const LanguageResources& res);

std::vector<Token> pos_tag(std::vector<Token> tokens, const LanguageResources& res);

/// normalize -> segment -> stem -> pos_tag.
NormalizedDocument preprocess(std::string doc_id, std::u32string raw,
                              const LanguageResources& res);
NormalizedDocument preprocess_utf8(std::string doc_id, std::string_view raw_utf8,
                                   const LanguageResources& res);

bool is_space(char32_t c);
bool is_punct(char32_t c);
bool is_terminator(char32_t c);

}  // namespace pdet::text
