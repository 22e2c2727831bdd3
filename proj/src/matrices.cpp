#include "pairank/matrices.hpp"

#include <string>

namespace pairank {

WinMatrices win_matrices(std::span<const IndexedRecord> records, std::size_t n) {
  WinMatrices m{Matrix(n), Matrix(n)};
  for (const auto& r : records) {
    if (r.left >= n || r.right >= n) {
      throw Error(ErrorKind::kUnknownItem,
                  "item id out of range for an index of size " + std::to_string(n));
    }
    if (r.left == r.right) continue;
    switch (r.winner) {
      case Winner::kLeft: m.wins(r.left, r.right) += r.weight; break;
      case Winner::kRight: m.wins(r.right, r.left) += r.weight; break;
      case Winner::kDraw:
        m.ties(r.left, r.right) += r.weight;
        m.ties(r.right, r.left) += r.weight;
        break;
    }
  }
  return m;
}

WinMatrices win_matrices(std::span<const ComparisonRecord> records, const Index& index) {
  const auto indexed = index_records(records, index);
  return win_matrices(indexed, index.size());
}

Matrix effective_matrix(const WinMatrices& matrices) {
  const auto n = matrices.size();
  Matrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      a(i, j) = matrices.wins(i, j) + 0.5 * matrices.ties(i, j);
    }
  }
  return a;
}

}  // namespace pairank
