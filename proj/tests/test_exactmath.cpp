#include <random>

#include "doctest.h"
#include "ehrkit/linalg.hpp"
#include "test_util.hpp"

using namespace ehrkit;
using testutil::iv;
using testutil::thrown_code;

namespace {

Rat random_rat(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-60, 60);
  std::uniform_int_distribution<long> den(1, 24);
  return Rat(num(rng), den(rng));
}

IMat random_mat(std::mt19937_64& rng, int rows, int cols, long bound) {
  std::uniform_int_distribution<long> entry(-bound, bound);
  IMat m(rows, IVec(cols));
  for (auto& row : m)
    for (auto& v : row) v = entry(rng);
  return m;
}

// Cofactor expansion, quadratic in memory and slow, but independent of the
// fraction-free elimination used by the library.
Int det_cofactor(const IMat& m) {
  size_t n = m.size();
  if (n == 1) return m[0][0];
  Int acc = 0;
  for (size_t j = 0; j < n; ++j) {
    if (m[0][j] == 0) continue;
    IMat minor;
    for (size_t r = 1; r < n; ++r) {
      IVec row;
      for (size_t c = 0; c < n; ++c)
        if (c != j) row.push_back(m[r][c]);
      minor.push_back(std::move(row));
    }
    Int term = m[0][j] * det_cofactor(minor);
    if (j % 2 == 0)
      acc += term;
    else
      acc -= term;
  }
  return acc;
}

}  // namespace

TEST_SUITE("exactmath") {

TEST_CASE("rational parsing accepts p and p/q and canonicalizes") {
  CHECK(Rat::parse("5/2") == Rat(5, 2));
  CHECK(Rat::parse("-7") == Rat(-7));
  CHECK(Rat::parse("0/5") == Rat(0));
  CHECK(Rat::parse("6/4") == Rat(3, 2));
  CHECK(Rat::parse("6/4").str() == "3/2");
  CHECK(Rat::parse("-6/4").den() == 2);
  CHECK(Rat(4, -6) == Rat(-2, 3));
  CHECK(Rat(4, -6).den() == 3);
}

TEST_CASE("rational parsing rejects malformed text") {
  CHECK(thrown_code([] { Rat::parse(""); }) == "ParseError");
  CHECK(thrown_code([] { Rat::parse("3/0"); }) == "ParseError");
  CHECK(thrown_code([] { Rat::parse("a"); }) == "ParseError");
  CHECK(thrown_code([] { Rat::parse("1 /2"); }) == "ParseError");
  CHECK(thrown_code([] { Rat::parse("1/2x"); }) == "ParseError");
  CHECK(thrown_code([] { Rat::parse("1/-2"); }) == "ParseError");
  CHECK(thrown_code([] { Rat::parse("--3"); }) == "ParseError");
  CHECK(thrown_code([] { Rat(1, 0); }) == "DivisionByZero");
  CHECK(thrown_code([] { Rat(3) /= Rat(0); }) == "DivisionByZero");
}

TEST_CASE("field axioms and order on random rationals") {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 200; ++i) {
    Rat a = random_rat(rng), b = random_rat(rng), c = random_rat(rng);
    CHECK((a + b) * c == a * c + b * c);
    CHECK(a + (-a) == Rat(0));
    CHECK(a - b == -(b - a));
    if (!b.is_zero()) CHECK(a / b * b == a);
    CHECK((a < b) == (b > a));
    CHECK((a <= b || b < a));
    CHECK(rat_min(a, b) <= rat_max(a, b));
    CHECK(a.abs().sign() >= 0);
  }
}

TEST_CASE("floor and ceil bracket the value") {
  std::mt19937_64 rng(102);
  for (int i = 0; i < 200; ++i) {
    Rat a = random_rat(rng);
    Rat fl{a.floor()}, ce{a.ceil()};
    CHECK(fl <= a);
    CHECK(a < fl + Rat(1));
    CHECK(ce >= a);
    CHECK(a > ce - Rat(1));
    CHECK(a.is_integer() == (fl == ce));
  }
  CHECK(Rat(-7, 2).floor() == -4);
  CHECK(Rat(-7, 2).ceil() == -3);
  CHECK(Rat(7, 2).floor() == 3);
  CHECK(Rat(7, 2).ceil() == 4);
}

TEST_CASE("powers, str roundtrip, machine-word extraction") {
  std::mt19937_64 rng(103);
  for (int i = 0; i < 50; ++i) {
    Rat a = random_rat(rng);
    Rat acc(1);
    for (long e = 0; e <= 4; ++e) {
      CHECK(rat_pow(a, e) == acc);
      acc *= a;
    }
    CHECK(Rat::parse(a.str()) == a);
  }
  CHECK(to_ll(Int(-5)) == -5);
  Int big("123456789012345678901234567890");
  CHECK(thrown_code([&] { to_ll(big); }) == "Overflow");
}

TEST_CASE("gcd of vectors and primitivization") {
  CHECK(gcd_vec(iv({4, 6, 10})) == 2);
  CHECK(gcd_vec(iv({0, 0})) == 0);
  CHECK(gcd_vec(iv({3, 5})) == 1);
  CHECK(gcd_vec(iv({-4, 6})) == 2);
  auto [red, g] = primitivize(iv({-4, 6, -10}));
  CHECK(g == 2);
  CHECK(red == iv({-2, 3, -5}));
  CHECK(thrown_code([] { primitivize(iv({0, 0, 0})); }) == "ZeroVector");
}

TEST_CASE("hermite form: U*M = H, U unimodular, echelon shape") {
  std::mt19937_64 rng(104);
  std::uniform_int_distribution<int> dim(1, 6);
  for (int trial = 0; trial < 60; ++trial) {
    int r = dim(rng), c = dim(rng);
    IMat m = random_mat(rng, r, c, 20);
    HnfResult res = hnf(m);
    REQUIRE(is_unimodular(res.u));
    CHECK(matmul(res.u, m) == res.h);
    // Echelon: pivots strictly right of the previous row's, positive, and
    // entries above each pivot reduced into [0, pivot).
    int prev = -1;
    for (int i = 0; i < static_cast<int>(res.h.size()); ++i) {
      int pivot = -1;
      for (int j = 0; j < c; ++j)
        if (res.h[i][j] != 0) {
          pivot = j;
          break;
        }
      if (pivot < 0) {
        for (int i2 = i; i2 < static_cast<int>(res.h.size()); ++i2)
          for (int j = 0; j < c; ++j) CHECK(res.h[i2][j] == 0);
        CHECK(res.rank == i);
        break;
      }
      CHECK(pivot > prev);
      CHECK(res.h[i][pivot] > 0);
      for (int i2 = 0; i2 < i; ++i2) {
        CHECK(res.h[i2][pivot] >= 0);
        CHECK(res.h[i2][pivot] < res.h[i][pivot]);
      }
      prev = pivot;
      if (i + 1 == static_cast<int>(res.h.size())) CHECK(res.rank == i + 1);
    }
  }
}

TEST_CASE("determinants agree with cofactor expansion") {
  CHECK(det_exact(IMat{iv({2, 1}), iv({1, 1})}) == 1);
  CHECK(det_exact(IMat{iv({1, 2, 3}), iv({4, 5, 6}), iv({7, 8, 10})}) == -3);
  std::mt19937_64 rng(105);
  std::uniform_int_distribution<int> dim(1, 5);
  for (int trial = 0; trial < 40; ++trial) {
    int n = dim(rng);
    IMat m = random_mat(rng, n, n, 8);
    CHECK(det_exact(m) == det_cofactor(m));
  }
}

TEST_CASE("exact solve: unique, inconsistent, underdetermined") {
  std::mt19937_64 rng(106);
  std::uniform_int_distribution<int> dim(1, 5);
  int unique_seen = 0;
  for (int trial = 0; trial < 60; ++trial) {
    int n = dim(rng);
    IMat m = random_mat(rng, n, n, 8);
    if (det_exact(m) == 0) continue;
    ++unique_seen;
    QVec x;
    for (int i = 0; i < n; ++i) x.push_back(random_rat(rng));
    QMat a(n, QVec(n));
    QVec b(n, Rat(0));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        a[i][j] = Rat(m[i][j]);
        b[i] += a[i][j] * x[j];
      }
    }
    SolveResult res = solve_exact(a, b);
    REQUIRE(res.kind == SolveResult::Kind::Unique);
    CHECK(res.x == x);
  }
  CHECK(unique_seen >= 30);

  QMat rep{{Rat(1), Rat(0)}, {Rat(1), Rat(0)}};
  CHECK(solve_exact(rep, {Rat(0), Rat(1)}).kind == SolveResult::Kind::NoSolution);
  QMat dep{{Rat(1), Rat(1)}, {Rat(2), Rat(2)}};
  CHECK(solve_exact(dep, {Rat(1), Rat(2)}).kind ==
        SolveResult::Kind::Underdetermined);
}

TEST_CASE("integer kernel basis is saturated and annihilated") {
  IMat a{iv({1, 1, 1})};
  auto basis = kernel_basis_int(a);
  REQUIRE(basis.size() == 2);
  for (const auto& v : basis) CHECK(dot(a[0], v) == 0);

  IMat b{iv({2, 4})};
  auto kb = kernel_basis_int(b);
  REQUIRE(kb.size() == 1);
  CHECK(dot(b[0], kb[0]) == 0);
  // Saturation: the generator of a rank-one kernel must be primitive.
  CHECK(gcd_vec(kb[0]) == 1);

  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 30; ++trial) {
    IMat m = random_mat(rng, 2, 4, 6);
    auto ker = kernel_basis_int(m);
    for (const auto& v : ker)
      for (const auto& row : m) CHECK(dot(row, v) == 0);
  }
}

TEST_CASE("unimodular inverses and basis completion") {
  std::mt19937_64 rng(108);
  std::uniform_int_distribution<int> dim(1, 5);
  std::uniform_int_distribution<long> coef(-3, 3);
  for (int trial = 0; trial < 40; ++trial) {
    int n = dim(rng);
    // Random product of elementary row operations keeps the determinant at 1.
    IMat u = identity_mat(n);
    for (int ops = 0; ops < 3 * n; ++ops) {
      int i = std::uniform_int_distribution<int>(0, n - 1)(rng);
      int j = std::uniform_int_distribution<int>(0, n - 1)(rng);
      if (i == j) continue;
      Int c(coef(rng));
      for (int k = 0; k < n; ++k) u[i][k] += c * u[j][k];
    }
    REQUIRE(is_unimodular(u));
    CHECK(matmul(u, inverse_unimodular(u)) == identity_mat(n));
  }
  CHECK(thrown_code([] {
          inverse_unimodular(IMat{iv({2, 0}), iv({0, 1})});
        }) == "NotUnimodular");

  for (int trial = 0; trial < 40; ++trial) {
    int n = dim(rng);
    IMat m = random_mat(rng, 1, n, 9);
    if (gcd_vec(m[0]) == 0) continue;
    IVec a = primitivize(m[0]).first;
    IMat basis = complete_primitive_to_basis(a);
    CHECK(is_unimodular(basis));
    CHECK(basis.back() == a);
  }
  CHECK(thrown_code([] { complete_primitive_to_basis(iv({2, 4})); }) ==
        "NotPrimitive");
}

}  // TEST_SUITE
