#pragma once

#include <cstddef>
#include <initializer_list>

#include "reflat/numeric.hpp"

namespace reflat {

/** Dense row-major integer matrix. Rows are the primary objects throughout
 *  (lattices are row spans, basis changes act on the left). */
struct ZMat {
  std::size_t rows = 0, cols = 0;
  ZVec data;

  ZMat() = default;
  ZMat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, Int(0)) {}
  ZMat(std::size_t r, std::size_t c, std::initializer_list<long> vals) : ZMat(r, c) {
    if (vals.size() != r * c) throw std::invalid_argument("ZMat initializer size mismatch");
    std::size_t i = 0;
    for (long v : vals) data[i++] = Int(v);
  }

  Int& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const Int& at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  static ZMat identity(std::size_t n) {
    ZMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  bool operator==(const ZMat& o) const { return rows == o.rows && cols == o.cols && data == o.data; }
};

/** Dense row-major rational matrix. */
struct QMat {
  std::size_t rows = 0, cols = 0;
  QVec data;

  QMat() = default;
  QMat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, Rat(0)) {}

  Rat& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const Rat& at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  static QMat identity(std::size_t n) {
    QMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  bool operator==(const QMat& o) const { return rows == o.rows && cols == o.cols && data == o.data; }
};

ZMat mul(const ZMat& a, const ZMat& b);
QMat mul(const QMat& a, const QMat& b);
ZMat transpose(const ZMat& a);
QMat transpose(const QMat& a);
QMat to_qmat(const ZMat& a);
// Fails if any entry has a denominator.
ZMat to_zmat_exact(const QMat& a);

ZVec mul_row(const ZVec& v, const ZMat& a);       // v * A
QVec mul_row(const QVec& v, const QMat& a);
Int dot(const ZVec& a, const ZVec& b);
Rat dot(const QVec& a, const QVec& b);
// v * G * w^T for a square form G.
Int form_value(const ZVec& v, const ZMat& g, const ZVec& w);
Rat form_value(const QVec& v, const QMat& g, const QVec& w);

ZMat vstack(const ZMat& top, const ZMat& bottom);

/** Row Hermite normal form. Returns H with pivot entries positive, entries
 *  above each pivot reduced into [0, pivot), zero rows at the bottom. If u is
 *  non-null it receives a unimodular matrix with u * a == H. */
ZMat hnf(const ZMat& a, ZMat* u = nullptr);

std::size_t rank_of_hnf(const ZMat& h);

/** Basis (rows) of { x : x * a == 0 }, saturated by construction. */
ZMat left_kernel(const ZMat& a);

struct Snf {
  ZMat d;  // diagonal, d1 | d2 | ... | dr, nonnegative
  ZMat u;  // unimodular, u * a * v == d
  ZMat v;  // unimodular
};
Snf snf(const ZMat& a);

/** Determinant of a square matrix (Bareiss, exact, keeps sign). */
Int det(const ZMat& a);

/** Exact inverse of a nonsingular square integer matrix. */
QMat inverse(const ZMat& a);
QMat inverse(const QMat& a);

/** Solves x * a == b for rectangular b with a square nonsingular. */
QMat solve_left(const ZMat& a, const QMat& b);

struct Ldlt {
  QMat lower;  // unit lower triangular
  QVec diag;   // strictly positive pivots
};
/** Exact LDL^T of a symmetric positive definite rational matrix.
 *  Throws std::invalid_argument when a pivot is not positive. */
Ldlt ldlt_positive(const QMat& a);

}  // namespace reflat
