#include "pdet/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "pdet/error.hpp"
#include "pdet/utf8.hpp"

namespace pdet::report {

using alignment::Detection;
using text::Span;

namespace {

constexpr const char* kPalette[] = {"#f4a582", "#92c5de", "#b8e186", "#fdb863", "#c2a5cf",
                                    "#80cdc1", "#f1b6da", "#dfc27d", "#a6dba0", "#d6604d"};

std::string escape(std::u32string_view s) {
  std::string out;
  for (char32_t c : s) {
    switch (c) {
      case U'&': out += "&amp;"; break;
      case U'<': out += "&lt;"; break;
      case U'>': out += "&gt;"; break;
      case U'"': out += "&quot;"; break;
      default: out += utf8::encode(c);
    }
  }
  return out;
}

std::string escape(std::string_view s) { return escape(utf8::decode(s)); }

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

TextStats text_stats(std::u32string_view text, std::span<const Detection> detections) {
  TextStats s;
  s.total_chars = text.size();
  bool in_word = false;
  bool in_paragraph = false;
  std::size_t newlines = 0;
  for (char32_t c : text) {
    if (text::is_space(c)) {
      in_word = false;
      if (c == U'\n' && ++newlines >= 2) in_paragraph = false;
      continue;
    }
    newlines = 0;
    if (!in_word) ++s.words;
    if (!in_paragraph) ++s.paragraphs;
    in_word = in_paragraph = true;
  }

  std::vector<Span> spans;
  for (const auto& d : detections) spans.push_back(d.susp_range);
  std::sort(spans.begin(), spans.end());
  std::size_t covered_to = 0;
  for (const auto& r : spans) {
    const std::size_t b = std::max(r.begin, covered_to);
    if (r.end > b) {
      s.plagiarized_chars += r.end - b;
      covered_to = r.end;
    }
  }
  return s;
}

std::string render_report(std::string_view susp_doc_id, std::u32string_view text,
                          std::span<const Detection> detections) {
  for (const auto& d : detections) {
    if (d.susp_doc_id != susp_doc_id)
      throw FormatError("detection for " + d.susp_doc_id + " passed to the report of " + std::string(susp_doc_id));
    if (d.susp_range.empty() || d.susp_range.end > text.size())
      throw FormatError("detection range [" + std::to_string(d.susp_range.begin) + ", " +
                        std::to_string(d.susp_range.end) + ") is outside " + std::string(susp_doc_id) + " (" +
                        std::to_string(text.size()) + " characters)");
  }

  // colours by source, in source id order
  std::map<std::string, std::size_t> per_source;
  std::map<std::string, std::size_t> source_chars;
  for (const auto& d : detections) {
    ++per_source[d.src_doc_id];
    source_chars[d.src_doc_id] += d.susp_range.size();
  }
  std::map<std::string, std::string> colour;
  {
    std::size_t k = 0;
    for (const auto& [src, _] : per_source) colour[src] = kPalette[k++ % std::size(kPalette)];
  }

  // One <span> per detection. Nested ranges nest; a range that starts
  // inside an open one and outlasts it opens where that one closes.
  std::vector<std::size_t> order(detections.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = detections[a].susp_range;
    const auto& y = detections[b].susp_range;
    if (x.begin != y.begin) return x.begin < y.begin;
    return x.end > y.end;
  });

  struct Open {
    std::size_t end;
  };
  std::vector<Open> stack;
  std::ostringstream body;
  std::size_t pos = 0;
  auto emit_to = [&](std::size_t p) {
    if (p > pos) body << escape(text.substr(pos, p - pos));
    pos = std::max(pos, p);
  };
  auto close_until = [&](std::size_t p) {
    while (!stack.empty() && stack.back().end <= p) {
      emit_to(stack.back().end);
      body << "</span>";
      stack.pop_back();
    }
  };
  for (std::size_t idx : order) {
    const auto& d = detections[idx];
    Span r = d.susp_range;
    close_until(r.begin);
    while (!stack.empty() && stack.back().end < r.end) {
      // crossing range: its highlight starts once the enclosing one ends
      r.begin = stack.back().end;
      close_until(r.begin);
    }
    emit_to(r.begin);
    body << "<span class=\"hl\" data-src=\"" << escape(d.src_doc_id) << "\" data-offset=\"" << d.susp_range.begin
         << "\" data-length=\"" << d.susp_range.size() << "\" style=\"background:" << colour[d.src_doc_id]
         << "\" title=\"" << escape(d.src_doc_id) << " " << format("%.3f", d.score) << "\">";
    stack.push_back({r.end});
  }
  close_until(text.size());
  emit_to(text.size());

  const TextStats stats = text_stats(text, detections);
  std::ostringstream html;
  html << "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>" << escape(susp_doc_id)
       << "</title>\n<style>\n"
       << "body{font-family:sans-serif;margin:2em}\n"
       << "#text{white-space:pre-wrap;line-height:1.6;border:1px solid #ccc;padding:1em}\n"
       << ".swatch{display:inline-block;width:1em;height:1em;margin-right:.5em;vertical-align:middle}\n"
       << "</style>\n</head>\n<body dir=\"auto\">\n";
  html << "<h1>" << escape(susp_doc_id) << "</h1>\n";
  html << "<div id=\"summary\">\n<ul>\n"
       << "<li>Words: <span id=\"words\">" << stats.words << "</span></li>\n"
       << "<li>Paragraphs: <span id=\"paragraphs\">" << stats.paragraphs << "</span></li>\n"
       << "<li>Plagiarism ratio: <span id=\"ratio\">" << format("%.2f", 100.0 * stats.ratio()) << "%</span> ("
       << stats.plagiarized_chars << " of " << stats.total_chars << " characters)</li>\n"
       << "</ul>\n</div>\n";
  html << "<div id=\"sources\">\n<h2>Sources</h2>\n<ul>\n";
  for (const auto& [src, count] : per_source) {
    html << "<li class=\"source\"><span class=\"swatch\" style=\"background:" << colour[src] << "\"></span>"
         << escape(src) << ": " << count << (count == 1 ? " passage, " : " passages, ") << source_chars[src]
         << " characters</li>\n";
  }
  html << "</ul>\n</div>\n";
  html << "<div id=\"text\">" << body.str() << "</div>\n</body>\n</html>\n";
  return html.str();
}

std::string render_dotplot(const text::NormalizedDocument& susp, const text::NormalizedDocument& src,
                           const index::InvertedIndex& idf_source, const alignment::AlignmentConfig& cfg) {
  const alignment::SentenceSimilarity sim(susp, src, idf_source, cfg);
  const auto pairs = sim.pairs_at_or_above(cfg.threshold);
  constexpr int kCell = 8;
  constexpr int kMargin = 40;
  const std::size_t w = sim.rows() * kCell;
  const std::size_t h = sim.cols() * kCell;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w + 2 * kMargin << "\" height=\""
      << h + 2 * kMargin << "\" viewBox=\"0 0 " << w + 2 * kMargin << ' ' << h + 2 * kMargin << "\">\n";
  svg << "<title>" << escape(susp.doc_id) << " vs " << escape(src.doc_id) << " (" << alignment::to_string(cfg.method)
      << ", threshold " << format("%.3f", cfg.threshold) << ")</title>\n";
  svg << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << w << "\" height=\"" << h
      << "\" fill=\"white\" stroke=\"#888\"/>\n";
  svg << "<text x=\"" << kMargin << "\" y=\"" << kMargin - 10 << "\" font-size=\"12\">" << escape(susp.doc_id)
      << " sentences</text>\n";
  svg << "<text x=\"" << kMargin - 10 << "\" y=\"" << kMargin + h << "\" font-size=\"12\" transform=\"rotate(-90 "
      << kMargin - 10 << ' ' << kMargin + h << ")\">" << escape(src.doc_id) << " sentences</text>\n";
  for (const auto& p : pairs) {
    svg << "<rect class=\"marker\" data-i=\"" << p.susp << "\" data-j=\"" << p.src << "\" x=\""
        << kMargin + p.susp * kCell + 1 << "\" y=\"" << kMargin + p.src * kCell + 1 << "\" width=\"" << kCell - 2
        << "\" height=\"" << kCell - 2 << "\" fill=\"#b2182b\" fill-opacity=\"" << format("%.3f", p.sim)
        << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace pdet::report
