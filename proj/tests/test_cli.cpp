#include "support.hpp"

#include <cstdlib>
#include <sys/wait.h>

#include "pdet/config.hpp"

namespace fs = std::filesystem;

namespace {

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

// Runs the command-line tool with `args`; returns its exit status.
int run(const std::string& args, const fs::path& log) {
  const std::string cmd = quote(PDET_CLI) + " " + args + " >" + quote(log) + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("cli: a full session on the fixture corpus") {
  const auto dir = testing::scratch("cli");
  const auto log = dir / "log.txt";
  const auto fx = testing::fixture();

  REQUIRE(run("index --src " + quote(fx / "src") + " --out " + quote(dir / "idx") + " --resources " +
                  quote(testing::latin_dir()),
              log) == 0);
  CHECK(fs::exists(dir / "idx" / "header.bin"));

  REQUIRE(run("--workers 2 detect --susp " + quote(fx / "susp") + " --index " + quote(dir / "idx") + " --out " +
                  quote(dir / "det.tsv"),
              log) == 0);
  CHECK(fs::exists(dir / "det.tsv.manifest.json"));
  const auto manifest = pdet::config::read_json(dir / "det.tsv.manifest.json");
  CHECK(manifest.at("index_digest") == pdet::index::directory_digest(dir / "idx"));

  REQUIRE(run("eval --corpus " + quote(fx) + " --det " + quote(dir / "det.tsv"), dir / "eval.json") == 0);
  const auto eval = pdet::config::read_json(dir / "eval.json");
  CHECK(eval.at("plagdet").get<double>() == doctest::Approx(1.0));

  // a single suspicious file works too, and one worker gives the same bytes
  REQUIRE(run("--workers 1 detect --susp " + quote(fx / "susp" / "susp-1.txt") + " --index " + quote(dir / "idx") +
                  " --out " + quote(dir / "one.tsv"),
              log) == 0);
  REQUIRE(run("--workers 1 detect --susp " + quote(fx / "susp") + " --index " + quote(dir / "idx") + " --out " +
                  quote(dir / "det1.tsv"),
              log) == 0);
  CHECK(pdet::utf8::read_file(dir / "det1.tsv") == pdet::utf8::read_file(dir / "det.tsv"));

  REQUIRE(run("align --susp " + quote(fx / "susp" / "susp-1.txt") + " --src " + quote(fx / "src" / "source-b.txt") +
                  " --resources " + quote(testing::latin_dir()) + " --dotplot " + quote(dir / "dot.svg"),
              dir / "align.tsv") == 0);
  CHECK(pdet::utf8::read_file(dir / "align.tsv").rfind("susp_doc_id\t", 0) == 0);
  CHECK(pdet::utf8::read_file(dir / "dot.svg").find("class=\"marker\"") != std::string::npos);

  REQUIRE(run("report --det " + quote(dir / "det.tsv") + " --corpus " + quote(fx) + " --susp susp-1.txt --out " +
                  quote(dir / "r.html"),
              log) == 0);
  CHECK(pdet::utf8::read_file(dir / "r.html").find("<span class=\"hl\"") != std::string::npos);

  REQUIRE(run("lab --corpus " + quote(fx) + " --grid " + quote(testing::repo() / "config" / "lab-grid.json") +
                  " --out " + quote(dir / "lab.csv"),
              log) == 0);
  CHECK(pdet::utf8::read_file(dir / "lab.csv").rfind("method,n,theta,", 0) == 0);

  fs::remove_all(dir);
}

TEST_CASE("cli: gen writes a loadable corpus") {
  const auto dir = testing::scratch("cli-gen");
  REQUIRE(run("gen --spec " + quote(testing::repo() / "config" / "gen-shuffle.json") + " --out " + quote(dir / "c"),
              dir / "log.txt") == 0);
  const auto c = pdet::corpus::load_corpus(dir / "c");
  CHECK(c.src_docs.size() == 50);
  CHECK(c.gold.size() == 30);
  fs::remove_all(dir);
}

TEST_CASE("cli: exit codes") {
  const auto dir = testing::scratch("cli-codes");
  const auto log = dir / "log.txt";
  const auto fx = testing::fixture();
  CHECK(run("", log) == 1);                                   // no subcommand
  CHECK(run("frobnicate", log) == 1);                         // unknown subcommand
  CHECK(run("eval --corpus " + quote(fx), log) == 1);         // missing required option
  CHECK(run("--help", log) == 0);
  CHECK(run("eval --corpus " + quote(dir / "none") + " --det " + quote(dir / "none.tsv"), log) == 2);
  CHECK(run("detect --susp " + quote(fx / "susp") + " --index " + quote(dir / "no-index") + " --out " +
                quote(dir / "x.tsv"),
            log) == 2);

  pdet::utf8::write_file(dir / "bad.tsv", "this is not a detections file\n");
  CHECK(run("eval --corpus " + quote(fx) + " --det " + quote(dir / "bad.tsv"), log) == 3);

  pdet::utf8::write_file(dir / "dangling.tsv",
                         "susp_doc_id\tsusp_offset\tsusp_length\tsrc_doc_id\tsrc_offset\tsrc_length\tscore\tmethod\n"
                         "susp-1.txt\t0\t10\tnope.txt\t0\t10\t1.0\tVSM\n");
  CHECK(run("eval --corpus " + quote(fx) + " --det " + quote(dir / "dangling.tsv"), log) == 3);

  pdet::utf8::write_file(dir / "bad.json", R"({"alignment": {"threshold": 7}})");
  CHECK(run("align --susp " + quote(fx / "susp" / "susp-1.txt") + " --src " + quote(fx / "src" / "source-a.txt") +
                " --resources " + quote(testing::latin_dir()) + " --config " + quote(dir / "bad.json"),
            log) == 3);
  fs::remove_all(dir);
}
