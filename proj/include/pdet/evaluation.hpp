#pragma once

// Character-level plagiarism detection measures: macro precision and
// recall, granularity, and plagdet, plus the XML gold annotation format.
//
// A case or detection is the set of its characters on both sides of its
// document pair; each character is keyed by (suspicious id, source id,
// side, offset).

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdet/alignment.hpp"
#include "pdet/textnorm.hpp"

namespace pdet::evaluation {

struct GoldCase {
  std::string susp_doc_id;
  text::Span susp_range;
  std::string src_doc_id;
  text::Span src_range;
  bool operator==(const GoldCase&) const = default;
};

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};

struct EvalSummary {
  double recall = 0.0;
  double precision = 0.0;
  double granularity = 1.0;
  double f_measure = 0.0;
  double plagdet = 0.0;
};

/// Empty detections give precision 0 and recall 0 (recall 1 if there is
/// no gold either); with no gold and no detections both are 1.
/// Throws InvalidDetectionError for empty ranges or a detection whose two
/// sides claim overlapping text of the same document.
PrecisionRecall macro_precision_recall(std::span<const GoldCase> gold,
                                       std::span<const alignment::Detection> det);

/// Mean number of detections overlapping each detected case; 1 when no
/// case is detected. A detection overlaps a case when both name the same
/// document pair and their ranges intersect on both sides.
double granularity(std::span<const GoldCase> gold, std::span<const alignment::Detection> det);

double f_measure(double precision, double recall);
double plagdet(double precision, double recall, double granularity);

EvalSummary evaluate(std::span<const GoldCase> gold, std::span<const alignment::Detection> det);

std::string to_json(const EvalSummary& s);

/// Parses one annotation file. `fallback_reference` names the suspicious
/// document when the root element lacks a reference attribute.
std::vector<GoldCase> parse_gold_xml(const std::string& xml, const std::string& fallback_reference);

/// All *.xml files of a directory, in file name order.
std::vector<GoldCase> load_gold(const std::filesystem::path& dir);

void write_gold_xml(std::ostream& out, const std::string& susp_reference,
                    std::span<const GoldCase> cases);

}  // namespace pdet::evaluation
