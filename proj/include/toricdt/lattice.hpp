#pragma once

// Exact integer linear algebra on lattice maps: Smith normal form, images,
// saturations and the torsion of cokernels.

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "toricdt/integer.hpp"

namespace toricdt {

/// Dense integer matrix. A matrix with `rows` rows represents a lattice map
/// Z^cols -> Z^rows acting on column vectors.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw InputError("matrix rows have inconsistent length");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static IntMatrix from_columns(const std::vector<IntVector>& columns, std::size_t rows) {
    IntMatrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != rows) throw InputError("matrix columns have inconsistent length");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntVector row(std::size_t i) const {
    return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                     data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  IntVector column(std::size_t j) const {
    IntVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  std::vector<IntVector> row_list() const {
    std::vector<IntVector> out;
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
    return out;
  }

  std::vector<IntVector> column_list() const {
    std::vector<IntVector> out;
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
    return out;
  }

  IntVector apply(const IntVector& v) const {
    if (v.size() != cols_) throw InputError("vector length does not match matrix columns");
    IntVector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  RationalVector apply(const RationalVector& v) const {
    RationalVector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i] += Rational((*this)(i, j)) * v[j];
    return out;
  }

  /// Row vector times matrix: the pull-back of a covector.
  IntVector pull_back(const IntVector& covector) const {
    IntVector out(cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[j] += covector[i] * (*this)(i, j);
    return out;
  }

  IntMatrix transposed() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Rows [first, first + count).
  IntMatrix row_block(std::size_t first, std::size_t count) const {
    IntMatrix m(count, cols_);
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(first + i, j);
    return m;
  }

  /// Columns [first, first + count).
  IntMatrix column_block(std::size_t first, std::size_t count) const {
    IntMatrix m(rows_, count);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < count; ++j) m(i, j) = (*this)(i, first + j);
    return m;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Int& x) { return x == 0; });
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  // row[dst] += k * row[src]
  void add_row_multiple(std::size_t dst, std::size_t src, const Int& k) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += k * (*this)(src, j);
  }
  // col[dst] += k * col[src]
  void add_col_multiple(std::size_t dst, std::size_t src, const Int& k) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += k * (*this)(i, src);
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
  }
  void negate_col(std::size_t j) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = -(*this)(i, j);
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw InputError("matrix product dimension mismatch");
    IntMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> data_;
};

/// left * original * right = diag(diag) (rows x cols), left_inverse = left^-1.
/// diag has min(rows, cols) entries: the nonzero invariant factors in divisibility
/// order, followed by zeros.
struct SNFResult {
  IntMatrix left;
  IntMatrix left_inverse;
  std::vector<Int> diag;
  IntMatrix right;

  std::size_t rank() const {
    return static_cast<std::size_t>(std::count_if(diag.begin(), diag.end(), [](const Int& d) { return d != 0; }));
  }
};

/// Smith normal form by elementary row/column operations. The pivot is always
/// the entry of smallest absolute value in the remaining block, ties broken by
/// (row, column), so the transforms are deterministic.
inline SNFResult smith_normal_form(const IntMatrix& m) {
  const std::size_t r = m.rows();
  const std::size_t c = m.cols();
  IntMatrix a = m;
  IntMatrix left = IntMatrix::identity(r);
  IntMatrix left_inv = IntMatrix::identity(r);
  IntMatrix right = IntMatrix::identity(c);

  auto row_swap = [&](std::size_t i, std::size_t j) {
    a.swap_rows(i, j);
    left.swap_rows(i, j);
    left_inv.swap_cols(i, j);
  };
  auto row_add = [&](std::size_t dst, std::size_t src, const Int& k) {
    a.add_row_multiple(dst, src, k);
    left.add_row_multiple(dst, src, k);
    left_inv.add_col_multiple(src, dst, -k);
  };
  auto row_negate = [&](std::size_t i) {
    a.negate_row(i);
    left.negate_row(i);
    left_inv.negate_col(i);
  };

  const std::size_t t = std::min(r, c);
  for (std::size_t s = 0; s < t; ++s) {
    bool block_is_zero = false;
    for (;;) {
      std::optional<std::pair<std::size_t, std::size_t>> pivot;
      for (std::size_t i = s; i < r; ++i)
        for (std::size_t j = s; j < c; ++j) {
          if (a(i, j) == 0) continue;
          if (!pivot || abs_value(a(i, j)) < abs_value(a(pivot->first, pivot->second))) pivot = {i, j};
        }
      if (!pivot) {
        block_is_zero = true;
        break;
      }
      row_swap(s, pivot->first);
      a.swap_cols(s, pivot->second);
      right.swap_cols(s, pivot->second);

      bool clean = true;
      for (std::size_t i = s + 1; i < r; ++i) {
        if (a(i, s) == 0) continue;
        const Int q = a(i, s) / a(s, s);
        if (q != 0) row_add(i, s, -q);
        if (a(i, s) != 0) clean = false;
      }
      for (std::size_t j = s + 1; j < c; ++j) {
        if (a(s, j) == 0) continue;
        const Int q = a(s, j) / a(s, s);
        if (q != 0) {
          a.add_col_multiple(j, s, -q);
          right.add_col_multiple(j, s, -q);
        }
        if (a(s, j) != 0) clean = false;
      }
      if (!clean) continue;

      std::optional<std::size_t> bad_row;
      for (std::size_t i = s + 1; i < r && !bad_row; ++i)
        for (std::size_t j = s + 1; j < c; ++j)
          if (a(i, j) % a(s, s) != 0) {
            bad_row = i;
            break;
          }
      if (!bad_row) break;
      row_add(s, *bad_row, 1);
    }
    if (block_is_zero) break;
    if (a(s, s) < 0) row_negate(s);
  }

  SNFResult out{std::move(left), std::move(left_inv), {}, std::move(right)};
  out.diag.reserve(t);
  for (std::size_t i = 0; i < t; ++i) out.diag.push_back(a(i, i));
  return out;
}

/// Echelon (Hermite) form of the lattice spanned by the given vectors: leading
/// entries positive, entries above each pivot reduced into [0, pivot).
/// Zero vectors are dropped; the result is a canonical basis of the lattice.
inline std::vector<IntVector> hermite_basis(std::vector<IntVector> vs, std::size_t ambient_rank) {
  std::vector<IntVector> rows;
  for (auto& v : vs)
    if (!is_zero(v)) rows.push_back(std::move(v));
  std::size_t top = 0;
  std::vector<std::size_t> pivot_cols;
  for (std::size_t col = 0; col < ambient_rank && top < rows.size(); ++col) {
    for (;;) {
      std::optional<std::size_t> best;
      for (std::size_t i = top; i < rows.size(); ++i)
        if (rows[i][col] != 0 && (!best || abs_value(rows[i][col]) < abs_value(rows[*best][col]))) best = i;
      if (!best) break;
      std::swap(rows[top], rows[*best]);
      bool done = true;
      for (std::size_t i = top + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        const Int q = rows[i][col] / rows[top][col];
        for (std::size_t j = 0; j < ambient_rank; ++j) rows[i][j] -= q * rows[top][j];
        if (rows[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[top][col] == 0) continue;
    if (rows[top][col] < 0) rows[top] = negated(std::move(rows[top]));
    pivot_cols.push_back(col);
    ++top;
  }
  rows.resize(top);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::size_t col = pivot_cols[k];
    for (std::size_t i = 0; i < k; ++i) {
      Int q = rows[i][col] / rows[k][col];
      if (rows[i][col] - q * rows[k][col] < 0) q -= 1;
      if (q != 0)
        for (std::size_t j = 0; j < ambient_rank; ++j) rows[i][j] -= q * rows[k][j];
    }
  }
  return rows;
}

/// Basis of the sublattice of Z^rows generated by the columns of m.
inline std::vector<IntVector> image_lattice(const IntMatrix& m) {
  const SNFResult snf = smith_normal_form(m);
  std::vector<IntVector> gens;
  for (std::size_t i = 0; i < snf.rank(); ++i) {
    IntVector v = snf.left_inverse.column(i);
    for (auto& x : v) x *= snf.diag[i];
    gens.push_back(std::move(v));
  }
  return hermite_basis(std::move(gens), m.rows());
}

/// Basis of (rational span of basis) intersected with Z^ambient_rank.
inline std::vector<IntVector> saturation(const std::vector<IntVector>& basis, std::size_t ambient_rank) {
  const SNFResult snf = smith_normal_form(IntMatrix::from_columns(basis, ambient_rank));
  std::vector<IntVector> gens;
  for (std::size_t i = 0; i < snf.rank(); ++i) gens.push_back(snf.left_inverse.column(i));
  return hermite_basis(std::move(gens), ambient_rank);
}

inline std::size_t matrix_rank(const IntMatrix& m) { return smith_normal_form(m).rank(); }

/// Elementary divisors > 1 of a finite abelian group, and the group order.
struct TorsionInvariants {
  std::vector<Int> divisors;
  Int order = 1;

  friend bool operator==(const TorsionInvariants&, const TorsionInvariants&) = default;
};

/// Torsion of saturation(image m) / image m, for an injective m.
inline TorsionInvariants torsion_invariants(const IntMatrix& m) {
  const SNFResult snf = smith_normal_form(m);
  if (snf.rank() != m.cols()) throw InputError("torsion_invariants: lattice map is not injective");
  TorsionInvariants t;
  for (const auto& d : snf.diag)
    if (d > 1) {
      t.divisors.push_back(d);
      t.order *= d;
    }
  return t;
}

/// Largest divisor of n coprime to the prime p.
inline Int prime_to_p_part(Int n, const Int& p) {
  if (n <= 0) throw InputError("prime_to_p_part: n must be positive");
  if (!is_prime(p)) throw InputError("prime_to_p_part: p must be prime");
  while (n % p == 0) n /= p;
  return n;
}

/// Number of F_q-points of the diagonalizable kernel prod_i mu_{d_i}.
inline Int rational_point_count_of_kernel(const TorsionInvariants& t, const Int& q) {
  if (prime_of_prime_power(q) == 0) throw InputError("q must be a prime power");
  Int count = 1;
  for (const auto& d : t.divisors) count *= gcd(d, q - 1);
  return count;
}

/// Reduced row echelon form over Q; returns the pivot columns.
inline std::vector<std::size_t> rational_row_reduce(std::vector<RationalVector>& rows, std::size_t n) {
  std::vector<std::size_t> pivots;
  std::size_t top = 0;
  for (std::size_t col = 0; col < n && top < rows.size(); ++col) {
    std::size_t sel = top;
    while (sel < rows.size() && rows[sel][col] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[top], rows[sel]);
    const Rational piv = rows[top][col];
    for (auto& x : rows[top]) x /= piv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == top || rows[i][col] == 0) continue;
      const Rational f = rows[i][col];
      for (std::size_t j = 0; j < n; ++j) rows[i][j] -= f * rows[top][j];
    }
    pivots.push_back(col);
    ++top;
  }
  rows.resize(top);
  return pivots;
}

/// Primitive integer basis of {x in Q^n : row . x = 0 for every row}.
inline std::vector<IntVector> nullspace(const std::vector<IntVector>& rows, std::size_t n) {
  std::vector<RationalVector> q;
  for (const auto& r : rows) q.emplace_back(r.begin(), r.end());
  const auto pivots = rational_row_reduce(q, n);
  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<IntVector> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    RationalVector v(n);
    v[free] = 1;
    for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -q[k][free];
    basis.push_back(primitive_integer_multiple(v));
  }
  return basis;
}

inline std::size_t vector_rank(const std::vector<IntVector>& vs, std::size_t n) {
  std::vector<RationalVector> q;
  for (const auto& r : vs) q.emplace_back(r.begin(), r.end());
  return rational_row_reduce(q, n).size();
}

/// Solves sum_j x_j basis[j] = target over Q; nullopt when target is outside the span.
inline std::optional<RationalVector> solve_in_span(const std::vector<IntVector>& basis, const IntVector& target) {
  const std::size_t n = target.size();
  const std::size_t k = basis.size();
  std::vector<RationalVector> aug(n, RationalVector(k + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) aug[i][j] = basis[j][i];
    aug[i][k] = target[i];
  }
  const auto pivots = rational_row_reduce(aug, k + 1);
  RationalVector x(k);
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] == k) return std::nullopt;
    x[pivots[r]] = aug[r][k];
  }
  return x;
}

/// A splitting Z^n = L (+) C adapted to a saturated sublattice L of rank d:
/// the first d rows of `coordinates` give coordinates on L, the remaining rows
/// project onto the quotient Z^n / L; `inclusion` and `section` are the
/// corresponding column blocks of the inverse.
struct LatticeSplitting {
  std::size_t ambient_rank = 0;
  std::size_t sub_rank = 0;
  IntMatrix coordinates;  // unimodular, n x n
  IntMatrix inverse;

  IntMatrix to_sub() const { return coordinates.row_block(0, sub_rank); }
  IntMatrix to_quotient() const { return coordinates.row_block(sub_rank, ambient_rank - sub_rank); }
  IntMatrix inclusion() const { return inverse.column_block(0, sub_rank); }
  IntMatrix section() const { return inverse.column_block(sub_rank, ambient_rank - sub_rank); }
};

/// Splitting for the saturation of the span of `generators`.
inline LatticeSplitting split_along(const std::vector<IntVector>& generators, std::size_t ambient_rank) {
  const SNFResult snf = smith_normal_form(IntMatrix::from_columns(generators, ambient_rank));
  return LatticeSplitting{ambient_rank, snf.rank(), snf.left, snf.left_inverse};
}

/// Surjective lattice map: full row rank with all invariant factors 1.
inline bool is_surjective(const IntMatrix& m) {
  const SNFResult snf = smith_normal_form(m);
  if (snf.rank() != m.rows()) return false;
  return std::all_of(snf.diag.begin(), snf.diag.end(), [](const Int& d) { return d == 1; });
}

}  // namespace toricdt
