#include "support.hpp"

#include "pdet/config.hpp"
#include "pdet/error.hpp"

using namespace pdet;
using config::Json;

TEST_CASE("config: defaults.json lists exactly the built-in defaults") {
  const auto j = config::read_json(testing::repo() / "config" / "defaults.json");
  CHECK(j.at("pipeline") == config::to_json(config::PipelineConfig{}));
  CHECK(j.at("gen") == config::to_json(corpus::GenSpec{}));
  // and parses back into the same structure
  const auto c = config::pipeline_from_json(j.at("pipeline"));
  CHECK(config::to_json(c) == j.at("pipeline"));
}

TEST_CASE("config: round-trip of non-default values") {
  config::PipelineConfig c;
  c.retrieval.chunk_len = 300;
  c.retrieval.discard_ratio = 0.3;
  c.alignment.method = alignment::Method::kWordNgram;
  c.alignment.word_n = 3;
  c.alignment.threshold = 0.4;
  c.resources = "somewhere";
  const auto back = config::pipeline_from_json(config::to_json(c));
  CHECK(config::to_json(back) == config::to_json(c));
}

TEST_CASE("config: absent keys keep defaults") {
  const auto c = config::pipeline_from_json(Json::parse(R"({"alignment": {"threshold": 0.5}})"));
  CHECK(c.alignment.threshold == 0.5);
  CHECK(c.alignment.method == alignment::Method::kVsm);
  CHECK(c.retrieval.chunk_len == 500);
}

TEST_CASE("config: malformed settings are rejected") {
  auto rejects = [](const char* text) { CHECK_THROWS_AS(config::pipeline_from_json(Json::parse(text)), ConfigError); };
  rejects(R"({"alignmnet": {}})");
  rejects(R"({"alignment": {"treshold": 0.5}})");
  rejects(R"({"alignment": {"method": "COSINE"}})");
  rejects(R"({"alignment": {"threshold": "high"}})");
  rejects(R"({"alignment": {"threshold": 0}})");
  rejects(R"({"retrieval": {"chunk_len": -5}})");
  rejects(R"({"retrieval": {"chunk_len": 2.5}})");
  rejects(R"({"retrieval": {"min_tail": 1000}})");
  rejects(R"([1, 2])");
}

TEST_CASE("config: unreadable and unparsable files") {
  const auto dir = testing::scratch("config-files");
  CHECK_THROWS_AS(config::read_json(dir / "missing.json"), IoError);
  utf8::write_file(dir / "broken.json", "{\"retrieval\": ");
  CHECK_THROWS_AS(config::read_json(dir / "broken.json"), ConfigError);
  utf8::write_file(dir / "rel.json", R"({"resources": "../bundle"})");
  const auto c = config::load_pipeline(dir / "rel.json");
  CHECK(std::filesystem::path(c.resources) == (dir / "../bundle").lexically_normal());
  std::filesystem::remove_all(dir);
}

TEST_CASE("config: lab grids expand n by threshold") {
  const auto g = config::grid_from_json(Json::parse(R"({
    "experiments": [
      {"method": "VSM", "n": [7, 8], "threshold": [0.5, 0.6]},
      {"method": "CHAR_NGRAM", "n": [3, 4, 5], "threshold": 0.7, "merge_gap": 0},
      {"method": "WORD_NGRAM", "n": 2}
    ]})"));
  REQUIRE(g.points.size() == 2 + 3 + 1);
  CHECK(g.points[0].alignment.method == alignment::Method::kVsm);
  CHECK(g.points[1].alignment.threshold == 0.6);
  CHECK(g.points[2].alignment.char_n == 3);
  CHECK(g.points[4].alignment.char_n == 5);
  CHECK(g.points[4].alignment.threshold == 0.7);
  CHECK(g.points[4].alignment.merge_gap == 0);
  CHECK(g.points[5].alignment.word_n == 2);
  CHECK(g.points[5].alignment.threshold == 0.65);
  CHECK(g.points[5].alignment.merge_gap == 1);

  CHECK_THROWS_AS(config::grid_from_json(Json::parse(R"({"experiments": []})")), ConfigError);
  CHECK_THROWS_AS(config::grid_from_json(Json::parse(R"({})")), ConfigError);
  CHECK_THROWS_AS(config::grid_from_json(Json::parse(R"({"experiments": [{"method": "X"}]})")), ConfigError);
  CHECK_THROWS_AS(config::grid_from_json(Json::parse(R"({"experiments": [{"method": "VSM", "gap": 1}]})")),
                  ConfigError);
}

TEST_CASE("config: the shipped files load") {
  const auto dir = testing::repo() / "config";
  CHECK_NOTHROW(config::load_pipeline(dir / "detect-latin.json"));
  const auto g = config::load_grid(dir / "lab-grid.json");
  CHECK(g.points.size() == 3 + 6 + 4);
  for (const char* f : {"gen-none.json", "gen-shuffle.json", "gen-synonym.json"}) {
    CAPTURE(f);
    const auto s = config::load_genspec(dir / f);
    CHECK(s.vocabulary.size() > 100);
    CHECK_FALSE(s.function_words.empty());
  }
}

TEST_CASE("config: generator specifications") {
  const auto s = config::genspec_from_json(
      Json::parse(R"({"seed": 9, "vocabulary": ["a", "b", "c"], "obfuscation": "SYNONYM"})"), ".");
  CHECK(s.seed == 9);
  CHECK(s.vocabulary.size() == 3);
  CHECK(s.obfuscation == corpus::Obfuscation::kSynonym);
  CHECK_THROWS_AS(config::genspec_from_json(Json::parse(R"({"vocabulary": ["a"], "obfuscation": "PARAPHRASE"})"), "."),
                  ConfigError);
  CHECK_THROWS_AS(config::genspec_from_json(Json::parse(R"({"vocabulary": ["a"], "colour": 1})"), "."), ConfigError);
  CHECK_THROWS_AS(config::genspec_from_json(Json::parse(R"({"seed": 1})"), "."), ConfigError);
}
