#pragma once
// Fraction-free Gaussian elimination over Z.

#include <gmpxx.h>

#include <cstddef>
#include <utility>
#include <vector>

namespace fermat {

using IntMatrix = std::vector<std::vector<mpz_class>>;

struct RankDet {
  std::size_t rank = 0;
  mpz_class det;  // 0 unless the matrix is square of full rank
};

/// Bareiss elimination with row pivoting. Every intermediate quotient is exact,
/// so rank and determinant are exact over Q.
inline RankDet bareiss_rank_det(IntMatrix a) {
  RankDet out;
  const std::size_t rows = a.size();
  if (rows == 0) {
    out.det = 1;
    return out;
  }
  const std::size_t cols = a[0].size();
  mpz_class prev = 1;
  mpz_class tmp;
  int sign = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r) {
      std::swap(a[piv], a[r]);
      sign = -sign;
    }
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        // a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev
        mpz_mul(tmp.get_mpz_t(), a[r][c].get_mpz_t(), a[i][j].get_mpz_t());
        mpz_submul(tmp.get_mpz_t(), a[i][c].get_mpz_t(), a[r][j].get_mpz_t());
        mpz_divexact(a[i][j].get_mpz_t(), tmp.get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  out.rank = r;
  if (rows == cols && r == rows)
    out.det = sign * prev;
  else
    out.det = 0;
  return out;
}

}  // namespace fermat
