// Serial kernels against their OpenMP counterparts at several worker counts,
// plus the whole detection pipeline on a generated corpus.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <unistd.h>

#include "pdet/config.hpp"
#include "pdet/corpus.hpp"
#include "pdet/kernels.hpp"
#include "pdet/pipeline.hpp"

namespace fs = std::filesystem;
using namespace pdet;

namespace {

// Random sparse rows shaped like sentence vectors: 8 to 24 distinct terms
// drawn from `vocab` columns.
kernels::SparseRows random_rows(std::size_t rows, std::uint32_t vocab, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> len(8, 24);
  std::uniform_int_distribution<std::uint32_t> col(0, vocab - 1);
  std::uniform_real_distribution<double> val(1.0, 3.0);
  kernels::SparseRows m;
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<std::uint32_t> cols(len(rng));
    for (auto& c : cols) c = col(rng);
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    for (auto c : cols) {
      m.cols.push_back(c);
      m.vals.push_back(val(rng));
    }
    m.offsets.push_back(m.cols.size());
  }
  return m;
}

double sparse_dot(const kernels::SparseRows& a, std::size_t i, const kernels::SparseRows& b, std::size_t j) {
  std::size_t p = a.offsets[i], q = b.offsets[j];
  double s = 0.0;
  while (p < a.offsets[i + 1] && q < b.offsets[j + 1]) {
    if (a.cols[p] < b.cols[q]) {
      ++p;
    } else if (b.cols[q] < a.cols[p]) {
      ++q;
    } else {
      s += a.vals[p++] * b.vals[q++];
    }
  }
  return s;
}

struct PairFixture {
  kernels::SparseRows a, b;
  std::vector<double> na, nb;
  kernels::PairSimilarity sim;

  PairFixture(std::size_t rows, std::size_t cols) : a(random_rows(rows, 400, 1)), b(random_rows(cols, 400, 2)) {
    const std::vector<double> ones(400, 1.0);
    na = kernels::weighted_row_norms_serial(a, ones);
    nb = kernels::weighted_row_norms_serial(b, ones);
    sim = [this](std::size_t i, std::size_t j) { return sparse_dot(a, i, b, j) / (na[i] * nb[j]); };
  }
};

void BM_row_norms_serial(benchmark::State& state) {
  const auto m = random_rows(static_cast<std::size_t>(state.range(0)), 5000, 3);
  const std::vector<double> w(5000, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::weighted_row_norms_serial(m, w));
}

void BM_row_norms_parallel(benchmark::State& state) {
  const auto m = random_rows(static_cast<std::size_t>(state.range(0)), 5000, 3);
  const std::vector<double> w(5000, 0.5);
  kernels::set_workers(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::weighted_row_norms(m, w));
  kernels::set_workers(0);
}

void BM_threshold_pairs_serial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PairFixture f(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::threshold_pairs_serial(n, n, f.sim, 0.3));
}

void BM_threshold_pairs_parallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PairFixture f(n, n);
  kernels::set_workers(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::threshold_pairs(n, n, f.sim, 0.3));
  kernels::set_workers(0);
}

struct GeneratedCorpus {
  corpus::Corpus corpus;
  index::InvertedIndex index;
  text::LanguageResources res;
  // sources are read back lazily during detection, so the files stay until exit
  fs::path dir = fs::temp_directory_path() / ("pdet-bench-" + std::to_string(::getpid()));

  GeneratedCorpus() {
    const fs::path repo = PDET_SOURCE_DIR;
    corpus = corpus::generate(config::load_genspec(repo / "config" / "gen-none.json"), dir);
    index = pipeline::index_directory(dir / "src", repo / "resources" / "latin");
    res = pipeline::resources_for(index, {});
  }
  ~GeneratedCorpus() { fs::remove_all(dir); }
};

void BM_detect_corpus(benchmark::State& state) {
  static const GeneratedCorpus g;
  const config::PipelineConfig cfg;
  kernels::set_workers(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pipeline::detect_all(g.corpus.susp_docs, g.index, g.res, cfg));
  kernels::set_workers(0);
}

}  // namespace

BENCHMARK(BM_row_norms_serial)->Arg(20000)->Arg(200000);
BENCHMARK(BM_row_norms_parallel)->ArgsProduct({{20000, 200000}, {1, 2, 4, 8}})->UseRealTime();
BENCHMARK(BM_threshold_pairs_serial)->Arg(100)->Arg(400);
BENCHMARK(BM_threshold_pairs_parallel)->ArgsProduct({{100, 400}, {1, 2, 4, 8}})->UseRealTime();
BENCHMARK(BM_detect_corpus)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
