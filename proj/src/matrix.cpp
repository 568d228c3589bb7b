#include "reflat/matrix.hpp"

#include <algorithm>
#include <utility>

namespace reflat {

ZMat mul(const ZMat& a, const ZMat& b) {
  if (a.cols != b.rows) throw std::invalid_argument("mul: shape mismatch");
  ZMat c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const Int& aik = a.at(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) c.at(i, j) += aik * b.at(k, j);
    }
  return c;
}

QMat mul(const QMat& a, const QMat& b) {
  if (a.cols != b.rows) throw std::invalid_argument("mul: shape mismatch");
  QMat c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const Rat& aik = a.at(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) c.at(i, j) += aik * b.at(k, j);
    }
  return c;
}

ZMat transpose(const ZMat& a) {
  ZMat t(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) t.at(j, i) = a.at(i, j);
  return t;
}

QMat transpose(const QMat& a) {
  QMat t(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) t.at(j, i) = a.at(i, j);
  return t;
}

QMat to_qmat(const ZMat& a) {
  QMat q(a.rows, a.cols);
  for (std::size_t i = 0; i < a.data.size(); ++i) q.data[i] = Rat(a.data[i]);
  return q;
}

ZMat to_zmat_exact(const QMat& a) {
  ZMat z(a.rows, a.cols);
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    if (!is_integral(a.data[i])) throw std::invalid_argument("to_zmat_exact: non-integral entry");
    z.data[i] = a.data[i].get_num();
  }
  return z;
}

ZVec mul_row(const ZVec& v, const ZMat& a) {
  if (v.size() != a.rows) throw std::invalid_argument("mul_row: shape mismatch");
  ZVec r(a.cols, Int(0));
  for (std::size_t k = 0; k < a.rows; ++k) {
    if (v[k] == 0) continue;
    for (std::size_t j = 0; j < a.cols; ++j) r[j] += v[k] * a.at(k, j);
  }
  return r;
}

QVec mul_row(const QVec& v, const QMat& a) {
  if (v.size() != a.rows) throw std::invalid_argument("mul_row: shape mismatch");
  QVec r(a.cols, Rat(0));
  for (std::size_t k = 0; k < a.rows; ++k) {
    if (v[k] == 0) continue;
    for (std::size_t j = 0; j < a.cols; ++j) r[j] += v[k] * a.at(k, j);
  }
  return r;
}

Int dot(const ZVec& a, const ZVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rat dot(const QVec& a, const QVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Int form_value(const ZVec& v, const ZMat& g, const ZVec& w) {
  return dot(mul_row(v, g), w);
}

Rat form_value(const QVec& v, const QMat& g, const QVec& w) {
  return dot(mul_row(v, g), w);
}

ZMat vstack(const ZMat& top, const ZMat& bottom) {
  if (top.cols != bottom.cols && top.rows != 0 && bottom.rows != 0)
    throw std::invalid_argument("vstack: column mismatch");
  std::size_t cols = top.rows ? top.cols : bottom.cols;
  ZMat r(top.rows + bottom.rows, cols);
  std::copy(top.data.begin(), top.data.end(), r.data.begin());
  std::copy(bottom.data.begin(), bottom.data.end(), r.data.begin() + top.data.size());
  return r;
}

namespace {

void swap_rows(ZMat& m, std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t c = 0; c < m.cols; ++c) std::swap(m.at(i, c), m.at(j, c));
}

void negate_row(ZMat& m, std::size_t i) {
  for (std::size_t c = 0; c < m.cols; ++c) m.at(i, c) = -m.at(i, c);
}

// row_i -= f * row_j
void addmul_row(ZMat& m, std::size_t i, std::size_t j, const Int& f) {
  if (f == 0) return;
  for (std::size_t c = 0; c < m.cols; ++c) m.at(i, c) -= f * m.at(j, c);
}

void swap_cols(ZMat& m, std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t r = 0; r < m.rows; ++r) std::swap(m.at(r, i), m.at(r, j));
}

// col_i -= f * col_j
void addmul_col(ZMat& m, std::size_t i, std::size_t j, const Int& f) {
  if (f == 0) return;
  for (std::size_t r = 0; r < m.rows; ++r) m.at(r, i) -= f * m.at(r, j);
}

}  // namespace

ZMat hnf(const ZMat& a, ZMat* u) {
  ZMat h = a;
  ZMat tr = ZMat::identity(a.rows);
  std::size_t row = 0;
  for (std::size_t col = 0; col < h.cols && row < h.rows; ++col) {
    // Euclidean elimination in this column below `row`.
    while (true) {
      std::size_t piv = h.rows;
      for (std::size_t i = row; i < h.rows; ++i)
        if (h.at(i, col) != 0 && (piv == h.rows || cmp(abs(h.at(i, col)), abs(h.at(piv, col))) < 0))
          piv = i;
      if (piv == h.rows) break;
      swap_rows(h, row, piv);
      swap_rows(tr, row, piv);
      if (h.at(row, col) < 0) {
        negate_row(h, row);
        negate_row(tr, row);
      }
      bool cleared = true;
      for (std::size_t i = row + 1; i < h.rows; ++i) {
        Int f = floor_div(h.at(i, col), h.at(row, col));
        addmul_row(h, i, row, f);
        addmul_row(tr, i, row, f);
        if (h.at(i, col) != 0) cleared = false;
      }
      if (cleared) break;
    }
    if (row < h.rows && h.at(row, col) != 0) {
      for (std::size_t i = 0; i < row; ++i) {
        Int f = floor_div(h.at(i, col), h.at(row, col));
        addmul_row(h, i, row, f);
        addmul_row(tr, i, row, f);
      }
      ++row;
    }
  }
  if (u) *u = tr;
  return h;
}

std::size_t rank_of_hnf(const ZMat& h) {
  std::size_t r = 0;
  for (std::size_t i = 0; i < h.rows; ++i) {
    bool nonzero = false;
    for (std::size_t j = 0; j < h.cols; ++j)
      if (h.at(i, j) != 0) {
        nonzero = true;
        break;
      }
    if (nonzero) ++r;
  }
  return r;
}

ZMat left_kernel(const ZMat& a) {
  ZMat u;
  ZMat h = hnf(a, &u);
  std::size_t r = rank_of_hnf(h);
  ZMat k(a.rows - r, a.rows);
  for (std::size_t i = r; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.rows; ++j) k.at(i - r, j) = u.at(i, j);
  return k;
}

namespace {

bool snf_clean_step(Snf& s, std::size_t t) {
  ZMat& d = s.d;
  // Pick the smallest nonzero entry in the remaining block as pivot.
  std::size_t pi = d.rows, pj = d.cols;
  for (std::size_t i = t; i < d.rows; ++i)
    for (std::size_t j = t; j < d.cols; ++j)
      if (d.at(i, j) != 0 && (pi == d.rows || cmp(abs(d.at(i, j)), abs(d.at(pi, pj))) < 0)) {
        pi = i;
        pj = j;
      }
  if (pi == d.rows) return false;
  swap_rows(d, t, pi);
  swap_rows(s.u, t, pi);
  swap_cols(d, t, pj);
  swap_cols(s.v, t, pj);
  if (d.at(t, t) < 0) {
    negate_row(d, t);
    negate_row(s.u, t);
  }
  while (true) {
    bool again = false;
    for (std::size_t i = t + 1; i < d.rows; ++i) {
      Int f = floor_div(d.at(i, t), d.at(t, t));
      addmul_row(d, i, t, f);
      addmul_row(s.u, i, t, f);
      if (d.at(i, t) != 0) again = true;
    }
    for (std::size_t j = t + 1; j < d.cols; ++j) {
      Int f = floor_div(d.at(t, j), d.at(t, t));
      addmul_col(d, j, t, f);
      addmul_col(s.v, j, t, f);
      if (d.at(t, j) != 0) again = true;
    }
    if (!again) break;
    // Residues are smaller than the pivot; re-pivot on the least one.
    std::size_t qi = t, qj = t;
    for (std::size_t i = t; i < d.rows; ++i)
      for (std::size_t j = t; j < d.cols; ++j)
        if (d.at(i, j) != 0 && cmp(abs(d.at(i, j)), abs(d.at(qi, qj))) < 0) {
          qi = i;
          qj = j;
        }
    swap_rows(d, t, qi);
    swap_rows(s.u, t, qi);
    swap_cols(d, t, qj);
    swap_cols(s.v, t, qj);
    if (d.at(t, t) < 0) {
      negate_row(d, t);
      negate_row(s.u, t);
    }
  }
  // Enforce divisibility: pull an offending row into the pivot row so the
  // next cleaning pass gcd-reduces the pivot. The pivot strictly shrinks.
  for (std::size_t i = t + 1; i < d.rows; ++i)
    for (std::size_t j = t + 1; j < d.cols; ++j)
      if (d.at(i, j) % d.at(t, t) != 0) {
        addmul_row(d, t, i, Int(-1));
        addmul_row(s.u, t, i, Int(-1));
        return snf_clean_step(s, t);
      }
  return true;
}

}  // namespace

Snf snf(const ZMat& a) {
  Snf s;
  s.d = a;
  s.u = ZMat::identity(a.rows);
  s.v = ZMat::identity(a.cols);
  std::size_t n = std::min(a.rows, a.cols);
  for (std::size_t t = 0; t < n; ++t)
    if (!snf_clean_step(s, t)) break;
  return s;
}

Int det(const ZMat& a) {
  if (a.rows != a.cols) throw std::invalid_argument("det: matrix not square");
  std::size_t n = a.rows;
  if (n == 0) return 1;
  ZMat m = a;
  Int sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m.at(k, k) == 0) {
      std::size_t piv = n;
      for (std::size_t i = k + 1; i < n; ++i)
        if (m.at(i, k) != 0) {
          piv = i;
          break;
        }
      if (piv == n) return 0;
      swap_rows(m, k, piv);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Int num = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
        m.at(i, j) = num / prev;  // exact by Bareiss
      }
    prev = m.at(k, k);
  }
  return sign * m.at(n - 1, n - 1);
}

namespace {

// Gauss-Jordan returning x with x * a == b.
QMat solve_left_q(const QMat& a, const QMat& b) {
  if (a.rows != a.cols) throw std::invalid_argument("solve_left: matrix not square");
  if (b.cols != a.cols) throw std::invalid_argument("solve_left: shape mismatch");
  std::size_t n = a.rows;
  // Work on transposed system a^T y^T = b^T via augmented columns.
  QMat at = transpose(a);
  QMat bt = transpose(b);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = n;
    for (std::size_t i = k; i < n; ++i)
      if (at.at(i, k) != 0) {
        piv = i;
        break;
      }
    if (piv == n) throw std::invalid_argument("solve_left: singular matrix");
    if (piv != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(at.at(k, c), at.at(piv, c));
      for (std::size_t c = 0; c < bt.cols; ++c) std::swap(bt.at(k, c), bt.at(piv, c));
    }
    Rat inv = Rat(1) / at.at(k, k);
    for (std::size_t c = 0; c < n; ++c) at.at(k, c) *= inv;
    for (std::size_t c = 0; c < bt.cols; ++c) bt.at(k, c) *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      Rat f = at.at(i, k);
      if (f == 0) continue;
      for (std::size_t c = 0; c < n; ++c) at.at(i, c) -= f * at.at(k, c);
      for (std::size_t c = 0; c < bt.cols; ++c) bt.at(i, c) -= f * bt.at(k, c);
    }
  }
  return transpose(bt);
}

}  // namespace

QMat inverse(const QMat& a) { return solve_left_q(a, QMat::identity(a.rows)); }

QMat inverse(const ZMat& a) { return inverse(to_qmat(a)); }

QMat solve_left(const ZMat& a, const QMat& b) { return solve_left_q(to_qmat(a), b); }

Ldlt ldlt_positive(const QMat& a) {
  if (a.rows != a.cols) throw std::invalid_argument("ldlt: matrix not square");
  std::size_t n = a.rows;
  Ldlt r;
  r.lower = QMat::identity(n);
  r.diag.assign(n, Rat(0));
  for (std::size_t j = 0; j < n; ++j) {
    Rat dj = a.at(j, j);
    for (std::size_t k = 0; k < j; ++k) dj -= r.lower.at(j, k) * r.lower.at(j, k) * r.diag[k];
    if (dj <= 0) throw std::invalid_argument("ldlt: form not positive definite");
    r.diag[j] = dj;
    for (std::size_t i = j + 1; i < n; ++i) {
      Rat v = a.at(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= r.lower.at(i, k) * r.lower.at(j, k) * r.diag[k];
      r.lower.at(i, j) = v / dj;
    }
  }
  return r;
}

}  // namespace reflat
