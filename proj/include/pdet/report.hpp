#pragma once

// Static renderings of results: an HTML page highlighting the detected
// passages of one suspicious document, and an SVG dot-plot of sentence
// similarity between two documents.

#include <string>
#include <span>
#include <string_view>
#include <vector>

#include "pdet/alignment.hpp"
#include "pdet/index.hpp"
#include "pdet/textnorm.hpp"

namespace pdet::report {

struct TextStats {
  std::size_t words = 0;
  std::size_t paragraphs = 0;
  std::size_t plagiarized_chars = 0;  // union of detection ranges
  std::size_t total_chars = 0;
  double ratio() const { return total_chars == 0 ? 0.0 : static_cast<double>(plagiarized_chars) / total_chars; }
};

/// Words are maximal runs of non-space characters; paragraphs are
/// non-blank blocks separated by blank lines.
TextStats text_stats(std::u32string_view text, std::span<const alignment::Detection> detections);

/// `detections` must all refer to `susp_doc_id`; a range past the end of
/// the text throws FormatError.
std::string render_report(std::string_view susp_doc_id, std::u32string_view susp_text,
                          std::span<const alignment::Detection> detections);

/// One marker per sentence pair with similarity >= cfg.threshold.
std::string render_dotplot(const text::NormalizedDocument& susp, const text::NormalizedDocument& src,
                           const index::InvertedIndex& idf_source, const alignment::AlignmentConfig& cfg);

}  // namespace pdet::report
