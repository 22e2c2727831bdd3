#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pairank/core.hpp"

namespace pairank {

// Dense square matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  std::size_t size() const noexcept { return n_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }
  std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

// wins(i, j): total weight of records where i beat j.
// ties(i, j) == ties(j, i): total weight of draws between i and j.
struct WinMatrices {
  Matrix wins;
  Matrix ties;

  std::size_t size() const noexcept { return wins.size(); }
};

// Self-comparisons are skipped. Ids must be < n.
WinMatrices win_matrices(std::span<const IndexedRecord> records, std::size_t n);
WinMatrices win_matrices(std::span<const ComparisonRecord> records, const Index& index);

// wins + 0.5 * ties: each side of a draw gets half a win.
Matrix effective_matrix(const WinMatrices& matrices);

}  // namespace pairank
