#include "ehrkit/linalg.hpp"

#include <algorithm>
#include <cstdlib>

namespace ehrkit {

namespace {

void check_same_size(size_t a, size_t b) {
  if (a != b) raise("DimensionMismatch", "vector sizes differ");
}

}  // namespace

Int dot(const IVec& a, const IVec& b) {
  check_same_size(a.size(), b.size());
  Int s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rat dot(const IVec& a, const QVec& x) {
  check_same_size(a.size(), x.size());
  Rat s;
  for (size_t i = 0; i < a.size(); ++i) s += Rat(a[i]) * x[i];
  return s;
}

Rat dot(const QVec& a, const QVec& x) {
  check_same_size(a.size(), x.size());
  Rat s;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
  return s;
}

IVec matvec(const IMat& m, const IVec& x) {
  IVec out;
  out.reserve(m.size());
  for (const auto& row : m) out.push_back(dot(row, x));
  return out;
}

IMat matmul(const IMat& a, const IMat& b) {
  size_t n = a.size(), k = b.size(), m = k ? b[0].size() : 0;
  IMat out(n, IVec(m, 0));
  for (size_t i = 0; i < n; ++i) {
    check_same_size(a[i].size(), k);
    for (size_t j = 0; j < k; ++j) {
      if (a[i][j] == 0) continue;
      for (size_t c = 0; c < m; ++c) out[i][c] += a[i][j] * b[j][c];
    }
  }
  return out;
}

IMat identity_mat(int n) {
  IMat out(n, IVec(n, 0));
  for (int i = 0; i < n; ++i) out[i][i] = 1;
  return out;
}

IMat transpose(const IMat& m) {
  size_t r = m.size(), c = r ? m[0].size() : 0;
  IMat out(c, IVec(r, 0));
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) out[j][i] = m[i][j];
  return out;
}

Int gcd_vec(const IVec& v) {
  Int g = 0;
  for (const auto& e : v) {
    Int t;
    mpz_gcd(t.get_mpz_t(), g.get_mpz_t(), e.get_mpz_t());
    g = t;
  }
  return g;
}

std::pair<IVec, Int> primitivize(const IVec& v) {
  Int g = gcd_vec(v);
  if (g == 0) raise("ZeroVector", "cannot primitivize the zero vector");
  IVec out = v;
  for (auto& e : out) e /= g;
  return {out, g};
}

HnfResult hnf(const IMat& m) {
  int rows = static_cast<int>(m.size());
  int cols = rows ? static_cast<int>(m[0].size()) : 0;
  HnfResult res;
  res.h = m;
  res.u = identity_mat(rows);
  auto& h = res.h;
  auto& u = res.u;

  auto row_sub = [&](int dst, int src, const Int& q) {
    if (q == 0) return;
    for (int c = 0; c < cols; ++c) h[dst][c] -= q * h[src][c];
    for (int c = 0; c < rows; ++c) u[dst][c] -= q * u[src][c];
  };
  auto row_swap = [&](int i, int j) {
    if (i == j) return;
    std::swap(h[i], h[j]);
    std::swap(u[i], u[j]);
  };
  auto row_negate = [&](int i) {
    for (auto& e : h[i]) e = -e;
    for (auto& e : u[i]) e = -e;
  };

  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    // Euclidean reduction within the column until one nonzero entry remains
    // at or below row r.
    while (true) {
      int best = -1;
      for (int i = r; i < rows; ++i) {
        if (h[i][c] == 0) continue;
        if (best < 0 || cmp(abs(h[i][c]), abs(h[best][c])) < 0) best = i;
      }
      if (best < 0) break;
      row_swap(r, best);
      bool reduced_all = true;
      for (int i = r + 1; i < rows; ++i) {
        if (h[i][c] == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), h[i][c].get_mpz_t(), h[r][c].get_mpz_t());
        row_sub(i, r, q);
        if (h[i][c] != 0) reduced_all = false;
      }
      if (reduced_all) break;
    }
    if (h[r][c] == 0) continue;
    if (h[r][c] < 0) row_negate(r);
    for (int i = 0; i < r; ++i) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), h[i][c].get_mpz_t(), h[r][c].get_mpz_t());
      row_sub(i, r, q);
    }
    ++r;
  }
  res.rank = r;
  return res;
}

Rat det_exact(const QMat& m) {
  int n = static_cast<int>(m.size());
  for (const auto& row : m) check_same_size(row.size(), n);
  QMat a = m;
  Rat det(1);
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int i = c; i < n; ++i)
      if (!a[i][c].is_zero()) { piv = i; break; }
    if (piv < 0) return Rat(0);
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    Rat inv = Rat(1) / a[c][c];
    for (int i = c + 1; i < n; ++i) {
      if (a[i][c].is_zero()) continue;
      Rat f = a[i][c] * inv;
      for (int j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return det;
}

Int det_exact(const IMat& m) {
  QMat q(m.size());
  for (size_t i = 0; i < m.size(); ++i)
    for (const auto& e : m[i]) q[i].push_back(Rat(e));
  Rat d = det_exact(q);
  if (!d.is_integer()) raise("Internal", "integer determinant came out fractional");
  return d.num();
}

SolveResult solve_exact(const QMat& a, const QVec& b) {
  int rows = static_cast<int>(a.size());
  check_same_size(rows, b.size());
  int cols = rows ? static_cast<int>(a[0].size()) : 0;
  QMat aug(rows, QVec(cols + 1));
  for (int i = 0; i < rows; ++i) {
    check_same_size(a[i].size(), cols);
    for (int j = 0; j < cols; ++j) aug[i][j] = a[i][j];
    aug[i][cols] = b[i];
  }

  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (!aug[i][c].is_zero()) { piv = i; break; }
    if (piv < 0) continue;
    std::swap(aug[piv], aug[r]);
    Rat inv = Rat(1) / aug[r][c];
    for (int j = c; j <= cols; ++j) aug[r][j] *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || aug[i][c].is_zero()) continue;
      Rat f = aug[i][c];
      for (int j = c; j <= cols; ++j) aug[i][j] -= f * aug[r][j];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (int i = r; i < rows; ++i)
    if (!aug[i][cols].is_zero()) return {SolveResult::Kind::NoSolution, {}};
  if (r < cols) return {SolveResult::Kind::Underdetermined, {}};
  QVec x(cols);
  for (int i = 0; i < r; ++i) x[pivot_col[i]] = aug[i][cols];
  return {SolveResult::Kind::Unique, std::move(x)};
}

std::vector<IVec> kernel_basis_int(const IMat& a) {
  if (a.empty()) raise("DimensionMismatch", "kernel of an empty matrix");
  HnfResult res = hnf(transpose(a));
  // Rows of U aligned with zero rows of H map to zero under A; they span the
  // saturated integer kernel because U is a basis of Z^n and the nonzero H
  // rows are independent.
  std::vector<IVec> basis;
  int n = static_cast<int>(res.u.size());
  for (int i = res.rank; i < n; ++i) basis.push_back(res.u[i]);
  return basis;
}

IMat inverse_unimodular(const IMat& u) {
  int n = static_cast<int>(u.size());
  if (!is_unimodular(u)) raise("NotUnimodular", "matrix is not unimodular");
  IMat inv(n, IVec(n, 0));
  QMat qa(n, QVec(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) qa[i][j] = Rat(u[i][j]);
  for (int col = 0; col < n; ++col) {
    QVec e(n);
    e[col] = Rat(1);
    SolveResult s = solve_exact(qa, e);
    if (s.kind != SolveResult::Kind::Unique)
      raise("Internal", "unimodular matrix failed to invert");
    for (int i = 0; i < n; ++i) {
      if (!s.x[i].is_integer())
        raise("Internal", "unimodular inverse has fractional entry");
      inv[i][col] = s.x[i].num();
    }
  }
  return inv;
}

bool is_unimodular(const IMat& u) {
  if (u.empty()) return false;
  size_t n = u.size();
  for (const auto& row : u)
    if (row.size() != n) return false;
  Int d = det_exact(u);
  return d == 1 || d == -1;
}

IMat complete_primitive_to_basis(const IVec& a) {
  int d = static_cast<int>(a.size());
  auto [prim, g] = primitivize(a);
  if (g != 1) raise("NotPrimitive", "vector must be primitive");
  IMat col(d, IVec(1, 0));
  for (int i = 0; i < d; ++i) col[i][0] = a[i];
  HnfResult res = hnf(col);
  // U a = e1, so a is the first column of U^{-1} and the first row of its
  // transpose; cycling rows puts a last while staying unimodular.
  IMat c = transpose(inverse_unimodular(res.u));
  IMat out;
  out.reserve(d);
  for (int i = 1; i < d; ++i) out.push_back(c[i]);
  out.push_back(c[0]);
  return out;
}

}  // namespace ehrkit
