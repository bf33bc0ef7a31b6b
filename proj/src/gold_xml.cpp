#include <algorithm>
#include <cctype>
#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <ostream>
#include <sstream>

#include "pdet/error.hpp"
#include "pdet/evaluation.hpp"
#include "pdet/utf8.hpp"

namespace pdet::evaluation {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

long long attribute(const pt::ptree& attrs, const char* name, const std::string& where) {
  auto value = attrs.get_optional<std::string>(name);
  if (!value) throw GoldXmlError(where + ": feature lacks attribute " + name);
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(*value, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != value->size()) throw GoldXmlError(where + ": attribute " + name + " is not an integer");
  if (v < 0) throw NegativeOffsetError(where + ": attribute " + name + " is negative");
  return v;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::vector<GoldCase> parse_gold_xml(const std::string& xml, const std::string& fallback_reference) {
  if (std::all_of(xml.begin(), xml.end(), [](unsigned char c) { return std::isspace(c) != 0; })) return {};
  pt::ptree tree;
  std::istringstream in(xml);
  try {
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw GoldXmlError(fallback_reference + ": malformed XML: " + e.message());
  }
  std::vector<GoldCase> out;
  if (tree.empty()) return out;
  if (tree.size() != 1) throw GoldXmlError(fallback_reference + ": expected a single root element");
  const auto& root = tree.front().second;
  const std::string susp = root.get<std::string>("<xmlattr>.reference", fallback_reference);

  for (const auto& [name, child] : root) {
    if (name != "feature") continue;
    const auto attrs = child.get_child_optional("<xmlattr>");
    if (!attrs) continue;
    const std::string kind = attrs->get<std::string>("name", "plagiarism");
    if (kind != "plagiarism" && kind != "artificial-plagiarism" && kind != "simulated-plagiarism") continue;
    const std::string where = fallback_reference;
    const auto this_offset = attribute(*attrs, "this_offset", where);
    const auto this_length = attribute(*attrs, "this_length", where);
    const auto source_offset = attribute(*attrs, "source_offset", where);
    const auto source_length = attribute(*attrs, "source_length", where);
    auto source = attrs->get_optional<std::string>("source_reference");
    if (!source) throw GoldXmlError(where + ": feature lacks attribute source_reference");
    if (this_length == 0 || source_length == 0) throw GoldXmlError(where + ": empty plagiarism range");
    GoldCase g;
    g.susp_doc_id = susp;
    g.susp_range = {static_cast<std::size_t>(this_offset), static_cast<std::size_t>(this_offset + this_length)};
    g.src_doc_id = *source;
    g.src_range = {static_cast<std::size_t>(source_offset),
                   static_cast<std::size_t>(source_offset + source_length)};
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<GoldCase> load_gold(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw MissingDirectoryError("annotation directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".xml") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<GoldCase> out;
  for (const auto& f : files) {
    const std::string xml = utf8::read_file(f);
    const bool blank = std::all_of(xml.begin(), xml.end(), [](unsigned char c) { return std::isspace(c); });
    if (blank) continue;
    auto cases = parse_gold_xml(xml, f.stem().string() + ".txt");
    out.insert(out.end(), cases.begin(), cases.end());
  }
  return out;
}

void write_gold_xml(std::ostream& out, const std::string& susp_reference, std::span<const GoldCase> cases) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<document reference=\"" << escape(susp_reference) << "\">\n";
  for (const auto& g : cases) {
    out << "<feature name=\"plagiarism\" this_offset=\"" << g.susp_range.begin << "\" this_length=\""
        << g.susp_range.size() << "\" source_reference=\"" << escape(g.src_doc_id) << "\" source_offset=\""
        << g.src_range.begin << "\" source_length=\"" << g.src_range.size() << "\"/>\n";
  }
  out << "</document>\n";
}

}  // namespace pdet::evaluation
