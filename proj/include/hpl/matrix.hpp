#pragma once

// Dense row-major matrices over GF(p) and the exact rank/kernel kernels.
// Elimination picks the first nonzero entry scanning top-to-bottom as pivot,
// columns left to right; no heuristics, so runs are bit-reproducible.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "hpl/gf.hpp"

namespace hpl {

class Matrix {
 public:
  Matrix(PrimeField f, std::size_t rows, std::size_t cols)
      : f_(f), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  static Matrix with_row_capacity(PrimeField f, std::size_t expected_rows,
                                  std::size_t cols) {
    Matrix m(f, 0, cols);
    m.a_.reserve(expected_rows * cols);
    return m;
  }

  const PrimeField& field() const { return f_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  u32 operator()(std::size_t r, std::size_t c) const {
    return a_[r * cols_ + c];
  }
  u32& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }

  std::span<const u32> row(std::size_t r) const {
    return {a_.data() + r * cols_, cols_};
  }
  std::span<u32> row(std::size_t r) { return {a_.data() + r * cols_, cols_}; }

  // Values must already be reduced mod p.
  void append_row(std::span<const u32> vals) {
    if (vals.size() != cols_) throw Error("append_row: width mismatch");
    a_.insert(a_.end(), vals.begin(), vals.end());
    ++rows_;
  }

  void append_row(std::initializer_list<u32> vals) {
    append_row(std::span<const u32>(vals.begin(), vals.size()));
  }

  void append_rows(const Matrix& other) {
    if (other.cols_ != cols_) throw Error("append_rows: width mismatch");
    a_.insert(a_.end(), other.a_.begin(), other.a_.end());
    rows_ += other.rows_;
  }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    u32* a = a_.data() + i * cols_;
    u32* b = a_.data() + j * cols_;
    for (std::size_t k = 0; k < cols_; ++k) std::swap(a[k], b[k]);
  }

  Matrix transposed() const {
    Matrix t(f_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  // y = m * v over GF(p).
  std::vector<u32> apply(std::span<const u32> v) const {
    if (v.size() != cols_) throw Error("apply: size mismatch");
    std::vector<u32> y(rows_, 0);
    for (std::size_t r = 0; r < rows_; ++r) {
      u64 acc = 0;
      const u32* a = a_.data() + r * cols_;
      for (std::size_t c = 0; c < cols_; ++c) {
        acc += u64{a[c]} * v[c];
        // Partial sums stay below 2^64: fold whenever the next product
        // could overflow (each term < 2^62).
        if ((c & 3) == 3) acc = f_.reduce(acc);
      }
      y[r] = f_.reduce(acc);
    }
    return y;
  }

 private:
  PrimeField f_;
  std::size_t rows_, cols_;
  std::vector<u32> a_;
};

namespace detail {

// Row echelon form in place; returns the rank. If `pivot_cols` is given it
// receives the pivot column indices in order.
inline long echelon_in_place(Matrix& m, std::vector<std::size_t>* pivot_cols) {
  const PrimeField f = m.field();
  const std::size_t R = m.rows(), C = m.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < C && r < R; ++c) {
    std::size_t piv = r;
    while (piv < R && m(piv, c) == 0) ++piv;
    if (piv == R) continue;
    m.swap_rows(piv, r);
    if (pivot_cols) pivot_cols->push_back(c);
    const u32 pinv = f.inv(m(r, c));
    const u32* src = m.row(r).data();
    for (std::size_t i = r + 1; i < R; ++i) {
      u32 lead = m(i, c);
      if (lead == 0) continue;
      const u32 t = f.neg(f.mul(lead, pinv));
      u32* dst = m.row(i).data();
      for (std::size_t j = c; j < C; ++j)
        dst[j] = f.reduce(u64{dst[j]} + u64{t} * src[j]);
      dst[c] = 0;
    }
    ++r;
  }
  return static_cast<long>(r);
}

}  // namespace detail

inline long rank(Matrix m) { return detail::echelon_in_place(m, nullptr); }

// Reduced row echelon form in place; returns pivot column indices.
inline std::vector<std::size_t> rref_in_place(Matrix& m) {
  std::vector<std::size_t> pivots;
  detail::echelon_in_place(m, &pivots);
  const PrimeField f = m.field();
  const std::size_t C = m.cols();
  for (std::size_t k = pivots.size(); k-- > 0;) {
    const std::size_t pr = k, pc = pivots[k];
    const u32 pinv = f.inv(m(pr, pc));
    u32* src = m.row(pr).data();
    for (std::size_t j = pc; j < C; ++j) src[j] = f.mul(src[j], pinv);
    for (std::size_t i = 0; i < pr; ++i) {
      u32 lead = m(i, pc);
      if (lead == 0) continue;
      const u32 t = f.neg(lead);
      u32* dst = m.row(i).data();
      for (std::size_t j = pc; j < C; ++j)
        dst[j] = f.reduce(u64{dst[j]} + u64{t} * src[j]);
      dst[pc] = 0;
    }
  }
  return pivots;
}

// Canonical basis of {v : m v = 0}: one vector per free column, with a 1 in
// that column and pivot-column entries read off the RREF. Every vector is
// checked against the input matrix before return.
inline std::vector<std::vector<u32>> nullspace_basis(const Matrix& m0) {
  Matrix m = m0;
  const std::vector<std::size_t> pivots = rref_in_place(m);
  const PrimeField f = m.field();
  const std::size_t C = m.cols();
  std::vector<bool> is_pivot(C, false);
  for (std::size_t pc : pivots) is_pivot[pc] = true;

  std::vector<std::vector<u32>> basis;
  for (std::size_t fc = 0; fc < C; ++fc) {
    if (is_pivot[fc]) continue;
    std::vector<u32> v(C, 0);
    v[fc] = 1;
    for (std::size_t k = 0; k < pivots.size(); ++k)
      v[pivots[k]] = f.neg(m(k, fc));
    basis.push_back(std::move(v));
  }
  for (const auto& v : basis)
    for (u32 y : m0.apply(v))
      if (y != 0) throw Error("nullspace_basis: verification failed");
  return basis;
}

}  // namespace hpl
