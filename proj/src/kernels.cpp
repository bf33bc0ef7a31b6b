#include "pdet/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pdet::kernels {

namespace {

double row_norm(const SparseRows& m, std::span<const double> weight, std::size_t r) {
  double sum = 0.0;
  for (std::size_t k = m.offsets[r]; k < m.offsets[r + 1]; ++k) {
    const double w = m.vals[k] * weight[m.cols[k]];
    sum += w * w;
  }
  return std::sqrt(sum);
}

void scan_row(std::size_t i, std::size_t cols, const PairSimilarity& sim, double threshold,
              std::vector<ScoredPair>& out) {
  for (std::size_t j = 0; j < cols; ++j) {
    const double s = sim(i, j);
    if (s >= threshold)
      out.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), s});
  }
}

}  // namespace

std::vector<double> weighted_row_norms(const SparseRows& m, std::span<const double> weight) {
  const auto n = static_cast<std::ptrdiff_t>(m.rows());
  std::vector<double> out(m.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < n; ++r) out[r] = row_norm(m, weight, static_cast<std::size_t>(r));
  return out;
}

std::vector<double> weighted_row_norms_serial(const SparseRows& m, std::span<const double> weight) {
  std::vector<double> out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) out[r] = row_norm(m, weight, r);
  return out;
}

std::vector<ScoredPair> threshold_pairs(std::size_t rows, std::size_t cols,
                                        const PairSimilarity& sim, double threshold) {
  // one bucket per row keeps the output order independent of scheduling
  std::vector<std::vector<ScoredPair>> per_row(rows);
  const auto n = static_cast<std::ptrdiff_t>(rows);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    scan_row(static_cast<std::size_t>(i), cols, sim, threshold, per_row[i]);
  std::vector<ScoredPair> out;
  for (auto& row : per_row) out.insert(out.end(), row.begin(), row.end());
  return out;
}

std::vector<ScoredPair> threshold_pairs_serial(std::size_t rows, std::size_t cols,
                                               const PairSimilarity& sim, double threshold) {
  std::vector<ScoredPair> out;
  for (std::size_t i = 0; i < rows; ++i) scan_row(i, cols, sim, threshold, out);
  return out;
}

std::vector<double> similarity_matrix(std::size_t rows, std::size_t cols, const PairSimilarity& sim) {
  std::vector<double> out(rows * cols);
  const auto n = static_cast<std::ptrdiff_t>(rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < cols; ++j) out[static_cast<std::size_t>(i) * cols + j] = sim(i, j);
  return out;
}

void set_workers(int workers) {
#ifdef _OPENMP
  if (workers > 0) omp_set_num_threads(workers);
#else
  (void)workers;
#endif
}

int max_workers() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace pdet::kernels
