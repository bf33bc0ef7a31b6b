#include "pdet/textnorm.hpp"

#include <algorithm>

#include "pdet/utf8.hpp"

namespace pdet::text {

std::string_view to_string(PosTag tag) {
  switch (tag) {
    case PosTag::kNoun: return "NOUN";
    case PosTag::kAdj: return "ADJ";
    case PosTag::kVerb: return "VERB";
    case PosTag::kOther: return "OTHER";
  }
  return "OTHER";
}

std::optional<PosTag> parse_tag(std::string_view name) {
  if (name == "NOUN") return PosTag::kNoun;
  if (name == "ADJ") return PosTag::kAdj;
  if (name == "VERB") return PosTag::kVerb;
  if (name == "OTHER") return PosTag::kOther;
  return std::nullopt;
}

bool NounPhrasePattern::is_head(PosTag t) const {
  return std::find(head.begin(), head.end(), t) != head.end();
}

bool NounPhrasePattern::is_tail(PosTag t) const {
  return std::find(tail.begin(), tail.end(), t) != tail.end();
}

bool is_space(char32_t c) {
  switch (c) {
    case U' ': case U'\t': case U'\n': case U'\r': case U'\v': case U'\f':
    case 0x00A0: case 0x1680: case 0x2028: case 0x2029: case 0x202F:
    case 0x205F: case 0x3000: case 0xFEFF:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

bool is_terminator(char32_t c) {
  return c == U'.' || c == U'!' || c == U'?' || c == 0x061F;
}

bool is_punct(char32_t c) {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
           (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
  }
  switch (c) {
    case 0x00AB: case 0x00BB:                 // guillemets
    case 0x060C: case 0x061B: case 0x061F:    // Arabic comma, semicolon, question
    case 0x066A: case 0x066B: case 0x066C: case 0x066D:
    case 0x06D4:
      return true;
    default:
      // general punctuation block, excluding the zero-width joiners
      return c >= 0x2010 && c <= 0x205E;
  }
}

namespace {

bool is_word_char(char32_t c) { return !is_space(c) && !is_punct(c); }

bool is_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

// "3.5" stays one token and does not end a sentence.
bool is_decimal_point(std::u32string_view s, std::size_t i) {
  return s[i] == U'.' && i > 0 && i + 1 < s.size() && is_digit(s[i - 1]) && is_digit(s[i + 1]);
}

bool ends_with(std::u32string_view s, std::u32string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

const SuffixRule* applicable_rule(std::u32string_view w, const LanguageResources& res) {
  for (const auto& rule : res.suffix_rules) {
    if (!ends_with(w, rule.suffix)) continue;
    // longest match decides; a failed length guard leaves the word unchanged
    if (w.size() - rule.suffix.size() >= rule.min_stem_len) return &rule;
    return nullptr;
  }
  return nullptr;
}

}  // namespace

Span NormalizedDocument::to_raw(const Span& norm) const {
  return {offset_map[norm.begin], offset_map[norm.end - 1] + 1};
}

NormalizedText normalize(std::u32string_view raw, const LanguageResources& res) {
  NormalizedText out;
  out.text.reserve(raw.size());
  out.offset_map.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    char32_t c = raw[i];
    if (auto it = res.char_map.find(c); it != res.char_map.end()) {
      if (!it->second) continue;
      c = *it->second;
    }
    out.text.push_back(c);
    out.offset_map.push_back(i);
  }
  return out;
}

Segmentation segment(std::u32string_view norm, const LanguageResources& res) {
  Segmentation out;
  const std::size_t n = norm.size();

  // sentences
  std::size_t start = n;  // n = no open sentence
  std::size_t last_nonspace = 0;
  auto close = [&](std::size_t end) {
    if (start < n && end > start) out.sentences.push_back({start, end});
    start = n;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const char32_t c = norm[i];
    if (is_space(c)) {
      if (c == U'\n' && start < n) {
        std::size_t j = i + 1;
        while (j < n && is_space(norm[j]) && norm[j] != U'\n') ++j;
        if (j < n && norm[j] == U'\n') close(last_nonspace + 1);
      }
      continue;
    }
    if (start == n) start = i;
    last_nonspace = i;
    if (is_terminator(c) && !is_decimal_point(norm, i)) {
      std::size_t j = i + 1;
      while (j < n && is_terminator(norm[j])) ++j;
      close(j);
      i = j - 1;
    }
  }
  if (start < n) close(last_nonspace + 1);

  // tokens
  std::size_t sentence = 0;
  for (std::size_t i = 0; i < n;) {
    if (!is_word_char(norm[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && (is_word_char(norm[j]) || is_decimal_point(norm, j))) ++j;
    while (sentence < out.sentences.size() && out.sentences[sentence].end <= i) ++sentence;
    Token tok;
    tok.span = {i, j};
    tok.surface = utf8::encode(norm.substr(i, j - i));
    tok.is_stopword = res.is_stopword(tok.surface);
    tok.sentence = sentence;
    out.tokens.push_back(std::move(tok));
    i = j;
  }

  // drop token-less sentences and renumber
  std::vector<std::size_t> count(out.sentences.size(), 0);
  for (const auto& t : out.tokens) ++count[t.sentence];
  std::vector<std::size_t> remap(out.sentences.size(), 0);
  std::vector<Span> kept;
  for (std::size_t s = 0; s < out.sentences.size(); ++s) {
    remap[s] = kept.size();
    if (count[s] > 0) kept.push_back(out.sentences[s]);
  }
  for (auto& t : out.tokens) t.sentence = remap[t.sentence];
  out.sentences = std::move(kept);
  return out;
}

std::u32string stem(std::u32string_view surface, const LanguageResources& res) {
  const SuffixRule* rule = applicable_rule(surface, res);
  if (rule == nullptr) return std::u32string(surface);
  std::u32string out(surface.substr(0, surface.size() - rule->suffix.size()));
  while (out.size() > 1 && out.back() == 0x200C) out.pop_back();
  return out;
}

std::string stem(std::string_view surface_utf8, const LanguageResources& res) {
  return utf8::encode(stem(utf8::decode(surface_utf8), res));
}

std::vector<Token> pos_tag(std::vector<Token> tokens, const LanguageResources& res) {
  for (auto& tok : tokens) {
    if (auto it = res.pos_lexicon.find(tok.surface); it != res.pos_lexicon.end()) {
      tok.tag = it->second;
      continue;
    }
    if (tok.is_stopword) {
      tok.tag = PosTag::kOther;
      continue;
    }
    if (auto it = res.pos_lexicon.find(tok.stem); it != res.pos_lexicon.end()) {
      tok.tag = it->second;
      continue;
    }
    tok.tag = PosTag::kOther;
    if (const SuffixRule* rule = applicable_rule(utf8::decode(tok.surface), res)) {
      switch (rule->cls) {
        case SuffixClass::kPlural: tok.tag = PosTag::kNoun; break;
        case SuffixClass::kSuperlative:
        case SuffixClass::kComparative: tok.tag = PosTag::kAdj; break;
        case SuffixClass::kNone: break;
      }
    }
  }
  return tokens;
}

NormalizedDocument preprocess(std::string doc_id, std::u32string raw,
                              const LanguageResources& res) {
  NormalizedDocument doc;
  doc.doc_id = std::move(doc_id);
  doc.raw_text = std::move(raw);
  auto norm = normalize(doc.raw_text, res);
  doc.norm_text = std::move(norm.text);
  doc.offset_map = std::move(norm.offset_map);
  auto seg = segment(doc.norm_text, res);
  doc.sentences = std::move(seg.sentences);
  for (auto& tok : seg.tokens) tok.stem = stem(tok.surface, res);
  doc.tokens = pos_tag(std::move(seg.tokens), res);

  doc.sentence_tokens.assign(doc.sentences.size(), {0, 0});
  for (std::size_t s = 0, t = 0; s < doc.sentences.size(); ++s) {
    const std::size_t first = t;
    while (t < doc.tokens.size() && doc.tokens[t].sentence == s) ++t;
    doc.sentence_tokens[s] = {first, t};
  }
  return doc;
}

NormalizedDocument preprocess_utf8(std::string doc_id, std::string_view raw_utf8,
                                   const LanguageResources& res) {
  return preprocess(std::move(doc_id), utf8::decode(raw_utf8), res);
}

}  // namespace pdet::text
