#pragma once

// Data-parallel inner loops. Each OpenMP kernel has a serial twin with
// identical arithmetic; tests compare them and bench/ times them.
// Results never depend on the thread count.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace pdet::kernels {

/// Compressed sparse rows: row r holds (col[k], val[k]) for k in
/// [offsets[r], offsets[r+1]).
struct SparseRows {
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> cols;
  std::vector<double> vals;

  std::size_t rows() const { return offsets.size() - 1; }
};

/// L2 norm of each row after scaling entry k by weight[cols[k]].
std::vector<double> weighted_row_norms(const SparseRows& m, std::span<const double> weight);
std::vector<double> weighted_row_norms_serial(const SparseRows& m, std::span<const double> weight);

struct ScoredPair {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  double sim = 0.0;
  bool operator==(const ScoredPair&) const = default;
};

using PairSimilarity = std::function<double(std::size_t, std::size_t)>;

/// All (i, j) with sim(i, j) >= threshold, ordered by (i, j).
std::vector<ScoredPair> threshold_pairs(std::size_t rows, std::size_t cols,
                                        const PairSimilarity& sim, double threshold);
std::vector<ScoredPair> threshold_pairs_serial(std::size_t rows, std::size_t cols,
                                               const PairSimilarity& sim, double threshold);

/// Dense similarity matrix, row-major.
std::vector<double> similarity_matrix(std::size_t rows, std::size_t cols, const PairSimilarity& sim);

/// Sets the worker count for subsequent parallel regions (<= 0: runtime default).
void set_workers(int workers);
int max_workers();

}  // namespace pdet::kernels
