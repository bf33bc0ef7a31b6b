// pdet: command-line front end. Exit codes: 0 success, 1 usage,
// 2 I/O error, 3 malformed data or configuration.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "pdet/config.hpp"
#include "pdet/corpus.hpp"
#include "pdet/error.hpp"
#include "pdet/evaluation.hpp"
#include "pdet/index.hpp"
#include "pdet/kernels.hpp"
#include "pdet/pipeline.hpp"
#include "pdet/report.hpp"
#include "pdet/utf8.hpp"

namespace fs = std::filesystem;
using namespace pdet;

namespace {

struct Options {
  std::string src, out, resources, susp, index, config, corpus, det, grid, spec, dotplot;
  int workers = 0;
};

config::PipelineConfig pipeline_config(const Options& o) {
  config::PipelineConfig cfg = o.config.empty() ? config::PipelineConfig{} : config::load_pipeline(o.config);
  if (!o.resources.empty()) cfg.resources = o.resources;
  return cfg;
}

std::vector<alignment::Detection> read_detection_file(const fs::path& path) {
  std::istringstream in(utf8::read_file(path));
  return alignment::read_detections(in);
}

void write_detection_file(const fs::path& path, std::span<const alignment::Detection> det) {
  std::ostringstream out;
  alignment::write_detections(out, det);
  utf8::write_file(path, out.str());
}

// Every detection must name corpus documents and stay inside them.
void check_against_corpus(const corpus::Corpus& c, std::span<const alignment::Detection> det) {
  for (const auto& d : det) {
    const auto* susp = c.find_susp(d.susp_doc_id);
    const auto* src = c.find_src(d.src_doc_id);
    if (!susp) throw DanglingReferenceError("detection names unknown suspicious document " + d.susp_doc_id);
    if (!src) throw DanglingReferenceError("detection names unknown source document " + d.src_doc_id);
    if (d.susp_range.end > susp->length || d.src_range.end > src->length)
      throw FormatError("detection range exceeds document length (" + d.susp_doc_id + ", " + d.src_doc_id + ")");
  }
}

int cmd_index(const Options& o) {
  const auto idx = pipeline::index_directory(o.src, o.resources);
  index::persist(idx, o.out);
  std::cerr << "indexed " << idx.size() << " documents, " << idx.term_count() << " terms\n";
  return 0;
}

int cmd_detect(const Options& o) {
  pipeline::RunManifest manifest;
  manifest.started_at = pipeline::utc_now();
  const auto cfg = pipeline_config(o);
  const auto idx = index::load(o.index);
  const auto res = pipeline::resources_for(idx, cfg);

  std::vector<corpus::Document> inputs;
  if (fs::is_directory(o.susp)) {
    inputs = corpus::read_documents(o.susp);
  } else {
    corpus::Document d;
    d.path = o.susp;
    d.doc_id = d.path.filename().string();
    d.text = utf8::read_file(d.path);
    d.length = utf8::length(d.text);
    inputs.push_back(std::move(d));
  }
  const auto det = pipeline::detect_all(inputs, idx, res, cfg);
  write_detection_file(o.out, det);

  manifest.config = config::to_json(cfg);
  manifest.resources_id = res.bundle_id;
  manifest.index_digest = index::directory_digest(o.index);
  manifest.finished_at = pipeline::utc_now();
  pipeline::write_manifest(o.out, manifest);
  std::cerr << det.size() << " detections in " << inputs.size() << " documents\n";
  return 0;
}

int cmd_align(const Options& o) {
  pipeline::RunManifest manifest;
  manifest.started_at = pipeline::utc_now();
  auto cfg = pipeline_config(o);
  std::optional<index::InvertedIndex> idx;
  if (!o.index.empty()) {
    idx = index::load(o.index);
    manifest.index_digest = index::directory_digest(o.index);
  }
  if (cfg.resources.empty()) {
    if (!idx) throw ConfigError("align needs --resources, a config with \"resources\", or --index");
    cfg.resources = idx->resources_dir;
  }
  const auto res = text::LanguageResources::load(cfg.resources);
  const auto susp = text::preprocess_utf8(fs::path(o.susp).filename().string(), utf8::read_file(o.susp), res);
  const auto src = text::preprocess_utf8(fs::path(o.src).filename().string(), utf8::read_file(o.src), res);
  if (!idx) {
    const text::NormalizedDocument both[] = {susp, src};
    idx = index::build_index(both);
  }
  auto det = alignment::align(susp, src, *idx, cfg.alignment);
  alignment::sort_detections(det);

  if (o.out.empty()) {
    alignment::write_detections(std::cout, det);
  } else {
    write_detection_file(o.out, det);
    manifest.config = config::to_json(cfg);
    manifest.resources_id = res.bundle_id;
    manifest.finished_at = pipeline::utc_now();
    pipeline::write_manifest(o.out, manifest);
  }
  if (!o.dotplot.empty()) utf8::write_file(o.dotplot, report::render_dotplot(susp, src, *idx, cfg.alignment));
  return 0;
}

int cmd_eval(const Options& o) {
  const auto c = corpus::load_corpus(o.corpus);
  const auto det = read_detection_file(o.det);
  check_against_corpus(c, det);
  std::cout << evaluation::to_json(evaluation::evaluate(c.gold, det)) << '\n';
  return 0;
}

int cmd_lab(const Options& o) {
  pipeline::RunManifest manifest;
  manifest.started_at = pipeline::utc_now();
  auto grid = config::load_grid(o.grid);
  if (!o.resources.empty()) grid.base.resources = o.resources;
  if (grid.base.resources.empty()) throw ConfigError("lab needs --resources or \"resources\" in the grid base");
  const auto res = text::LanguageResources::load(grid.base.resources);
  const auto c = corpus::load_corpus(o.corpus);
  const auto rows = pipeline::run_lab(c, res, grid);
  std::ostringstream csv;
  pipeline::write_lab_csv(csv, rows);
  utf8::write_file(o.out, csv.str());

  manifest.config = config::read_json(o.grid);
  manifest.resources_id = res.bundle_id;
  manifest.finished_at = pipeline::utc_now();
  pipeline::write_manifest(o.out, manifest);
  return 0;
}

int cmd_report(const Options& o) {
  const auto c = corpus::load_corpus(o.corpus);
  const auto det = read_detection_file(o.det);
  check_against_corpus(c, det);
  std::string susp_id = o.susp;
  if (susp_id.empty()) {
    std::set<std::string> named;
    for (const auto& d : det) named.insert(d.susp_doc_id);
    if (named.size() == 1) {
      susp_id = *named.begin();
    } else if (named.empty() && c.susp_docs.size() == 1) {
      susp_id = c.susp_docs.front().doc_id;
    } else {
      throw CLI::ValidationError("--susp", "the detections cover several suspicious documents; choose one");
    }
  }
  const auto* doc = c.find_susp(susp_id);
  if (!doc) throw DanglingReferenceError("no suspicious document " + susp_id + " in the corpus");
  std::vector<alignment::Detection> mine;
  for (const auto& d : det)
    if (d.susp_doc_id == susp_id) mine.push_back(d);
  utf8::write_file(o.out, report::render_report(susp_id, utf8::decode(doc->text), mine));
  return 0;
}

int cmd_gen(const Options& o) {
  const auto spec = config::load_genspec(o.spec);
  const auto c = corpus::generate(spec, o.out);
  std::cerr << "generated " << c.src_docs.size() << " sources, " << c.susp_docs.size() << " suspicious documents, "
            << c.gold.size() << " cases\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extrinsic plagiarism detection: indexing, candidate retrieval, text alignment and evaluation"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--workers", o.workers, "worker threads (default: all cores)")->check(CLI::NonNegativeNumber);

  auto* index_cmd = app.add_subcommand("index", "build an inverted index over a directory of source documents");
  index_cmd->add_option("--src", o.src, "source documents (*.txt)")->required()->check(CLI::ExistingDirectory);
  index_cmd->add_option("--out", o.out, "index directory to write")->required();
  index_cmd->add_option("--resources", o.resources, "language resource directory")->required();

  auto* detect_cmd = app.add_subcommand("detect", "retrieve candidates and align them with suspicious documents");
  detect_cmd->add_option("--susp", o.susp, "suspicious document or directory")->required();
  detect_cmd->add_option("--index", o.index, "index directory")->required();
  detect_cmd->add_option("--config", o.config, "pipeline configuration (JSON)");
  detect_cmd->add_option("--out", o.out, "detections file to write")->required();

  auto* align_cmd = app.add_subcommand("align", "align one suspicious document with one source document");
  align_cmd->add_option("--susp", o.susp, "suspicious document")->required();
  align_cmd->add_option("--src", o.src, "source document")->required();
  align_cmd->add_option("--config", o.config, "pipeline configuration (JSON)");
  align_cmd->add_option("--resources", o.resources, "language resource directory");
  align_cmd->add_option("--index", o.index, "index supplying document frequencies");
  align_cmd->add_option("--out", o.out, "detections file (default: standard output)");
  align_cmd->add_option("--dotplot", o.dotplot, "also write a sentence dot-plot (SVG)");

  auto* eval_cmd = app.add_subcommand("eval", "score detections against a corpus's gold annotations");
  eval_cmd->add_option("--corpus", o.corpus, "corpus directory")->required();
  eval_cmd->add_option("--det", o.det, "detections file")->required();

  auto* lab_cmd = app.add_subcommand("lab", "evaluate a grid of detector settings on a corpus");
  lab_cmd->add_option("--corpus", o.corpus, "corpus directory")->required();
  lab_cmd->add_option("--grid", o.grid, "grid file (JSON)")->required();
  lab_cmd->add_option("--out", o.out, "CSV file to write")->required();
  lab_cmd->add_option("--resources", o.resources, "language resource directory");

  auto* report_cmd = app.add_subcommand("report", "render detections of one suspicious document as HTML");
  report_cmd->add_option("--det", o.det, "detections file")->required();
  report_cmd->add_option("--corpus", o.corpus, "corpus directory")->required();
  report_cmd->add_option("--out", o.out, "HTML file to write")->required();
  report_cmd->add_option("--susp", o.susp, "suspicious document id");

  auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic corpus with gold annotations");
  gen_cmd->add_option("--spec", o.spec, "generator specification (JSON)")->required();
  gen_cmd->add_option("--out", o.out, "corpus directory to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  kernels::set_workers(o.workers);

  try {
    if (*index_cmd) return cmd_index(o);
    if (*detect_cmd) return cmd_detect(o);
    if (*align_cmd) return cmd_align(o);
    if (*eval_cmd) return cmd_eval(o);
    if (*lab_cmd) return cmd_lab(o);
    if (*report_cmd) return cmd_report(o);
    if (*gen_cmd) return cmd_gen(o);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "pdet: " << e.what() << '\n';
    return 1;
  } catch (const IoError& e) {
    std::cerr << "pdet: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "pdet: " << e.what() << '\n';
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "pdet: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
