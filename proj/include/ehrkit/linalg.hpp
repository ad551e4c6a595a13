#pragma once

#include <utility>
#include <vector>

#include "ehrkit/rational.hpp"

namespace ehrkit {

using IVec = std::vector<Int>;
using QVec = std::vector<Rat>;
using IMat = std::vector<IVec>;   // row-major, rectangular
using QMat = std::vector<QVec>;

Int dot(const IVec& a, const IVec& b);
Rat dot(const IVec& a, const QVec& x);
Rat dot(const QVec& a, const QVec& x);
IVec matvec(const IMat& m, const IVec& x);
IMat matmul(const IMat& a, const IMat& b);
IMat identity_mat(int n);
IMat transpose(const IMat& m);

// gcd of all entries, 0 for the zero vector. Result is nonnegative.
Int gcd_vec(const IVec& v);

// Divides out the gcd. Returns the reduced vector and the gcd.
// The zero vector is rejected: primitive data must have a direction.
std::pair<IVec, Int> primitivize(const IVec& v);

// Row-style Hermite normal form: U * M = H with U unimodular.
// H is in row echelon form with positive pivots, entries above each pivot
// reduced into [0, pivot), and zero rows collected at the bottom.
struct HnfResult {
  IMat h;
  IMat u;
  int rank = 0;
};
HnfResult hnf(const IMat& m);

Int det_exact(const IMat& m);
Rat det_exact(const QMat& m);

// Exact linear solve A x = b over the rationals.
struct SolveResult {
  enum class Kind { Unique, NoSolution, Underdetermined } kind;
  QVec x;   // populated only for Unique
};
SolveResult solve_exact(const QMat& a, const QVec& b);

// Basis of the integer kernel {x in Z^n : A x = 0}. The basis spans a
// saturated lattice (every rational kernel vector with integer entries is an
// integer combination of the basis).
std::vector<IVec> kernel_basis_int(const IMat& a);

// Exact inverse of a unimodular integer matrix (|det| = 1 required).
IMat inverse_unimodular(const IMat& u);

bool is_unimodular(const IMat& u);

// Unimodular matrix whose last row is the given primitive vector.
IMat complete_primitive_to_basis(const IVec& a);

}  // namespace ehrkit
