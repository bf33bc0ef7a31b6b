#pragma once

// PAN-style corpus directories (src/, susp/, pairs, xml/) and a seeded
// generator of synthetic corpora with exact gold annotations.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pdet/evaluation.hpp"

namespace pdet::corpus {

struct Document {
  std::string doc_id;  // file name, e.g. source-document00003.txt
  std::filesystem::path path;
  std::string text;    // UTF-8
  std::size_t length = 0;  // code points
};

struct Corpus {
  std::filesystem::path root;
  std::vector<Document> src_docs;   // sorted by doc_id
  std::vector<Document> susp_docs;  // sorted by doc_id
  std::vector<std::pair<std::string, std::string>> pairs;  // (susp, src)
  std::vector<evaluation::GoldCase> gold;

  const Document* find_src(std::string_view doc_id) const;
  const Document* find_susp(std::string_view doc_id) const;
};

/// Requires src/ and susp/; `pairs` and xml/ may be absent (no pairs, no gold).
Corpus load_corpus(const std::filesystem::path& dir);

/// Reads every *.txt file of a directory, sorted by name.
std::vector<Document> read_documents(const std::filesystem::path& dir);

enum class Obfuscation { kNone, kShuffle, kSynonym };

std::string_view to_string(Obfuscation o);
std::optional<Obfuscation> parse_obfuscation(std::string_view name);

struct GenSpec {
  std::uint64_t seed = 1;
  std::size_t n_src = 50;
  std::size_t n_susp = 10;
  std::size_t cases_per_susp = 3;
  std::size_t passage_len = 8;  // sentences
  Obfuscation obfuscation = Obfuscation::kNone;
  std::vector<std::string> vocabulary;      // content words
  std::vector<std::string> function_words;  // optional; mixed in at function_word_rate
  double function_word_rate = 0.3;
  double synonym_rate = 0.3;
  std::size_t src_sentences_min = 40;
  std::size_t src_sentences_max = 60;
  std::size_t sentence_len_min = 12;  // tokens
  std::size_t sentence_len_max = 18;
  std::size_t filler_max = 2;         // own sentences around each passage

  void validate() const;  // throws ConfigError
};

/// Writes the corpus under `out_dir` and returns it as loaded. Identical
/// specs produce byte-identical directories.
Corpus generate(const GenSpec& spec, const std::filesystem::path& out_dir);

/// Pairs each content word with another one, deterministically from the seed.
std::vector<std::pair<std::string, std::string>> synonym_table(const GenSpec& spec);

/// Reads the first whitespace-separated field of every non-comment line.
std::vector<std::string> read_word_list(const std::filesystem::path& path);

}  // namespace pdet::corpus
