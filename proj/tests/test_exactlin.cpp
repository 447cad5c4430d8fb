#include "doctest.h"
#include "koszulkit/exactlin.hpp"

#include <random>

using namespace koszulkit;

namespace {

Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int spread) {
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      // Sparse-ish small integers so that rank deficiency actually happens.
      if (rng() % 3 == 0) continue;
      m(r, c) = static_cast<long long>(rng() % (2 * spread + 1)) - spread;
    }
  }
  return m;
}

}  // namespace

TEST_CASE("Scalar arithmetic stays in lowest terms") {
  Scalar a(6, -4);
  CHECK(a.to_string() == "-3/2");
  CHECK((a + Scalar(3, 2)).is_zero());
  CHECK((Scalar(1, 3) * 3).is_one());
  CHECK(Scalar::parse(" 10/4 ") == Scalar(5, 2));
  CHECK(Scalar::parse("-7") == Scalar(-7));
  CHECK_THROWS_AS(Scalar::parse("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(Scalar::parse("x"), std::invalid_argument);
  CHECK(Scalar(1, 3) < Scalar(1, 2));
}

TEST_CASE("Scalar spills to arbitrary precision and comes back") {
  Scalar big(1LL << 62);
  Scalar prod = big * big * big;
  CHECK_FALSE(prod.is_small());
  CHECK(prod.to_string() == "98079714615416886934934209737619787751599303819750539264");
  Scalar back = prod / big / big;
  CHECK(back.is_small());
  CHECK(back == big);
  Scalar frac = Scalar(1) / prod;
  CHECK((frac * prod).is_one());
}

TEST_CASE("rank examples") {
  CHECK(rank(Matrix::identity(2)) == 2);
  CHECK(rank(Matrix(3, 5)) == 0);
  CHECK(rank(Matrix::from_rows({{1, 2}, {2, 4}})) == 1);
}

TEST_CASE("kernel_basis examples") {
  CHECK(kernel_basis(Matrix::identity(3)).cols() == 0);
  CHECK(kernel_basis(Matrix(2, 2)).cols() == 2);
  Matrix k = kernel_basis(Matrix::from_rows({{1, 1}}));
  REQUIRE(k.cols() == 1);
  // Unique up to scale; normalized so that the free coordinate is 1.
  CHECK(k(0, 0) == Scalar(-1));
  CHECK(k(1, 0) == Scalar(1));
}

TEST_CASE("solve examples") {
  Matrix b = Matrix::from_rows({{3}, {-5}});
  auto x = solve(Matrix::identity(2), b);
  REQUIRE(x);
  CHECK(*x == b);
  CHECK_FALSE(solve(Matrix::from_rows({{1}, {0}}), Matrix::from_rows({{0}, {1}})));
  auto half = solve(Matrix::from_rows({{2}}), Matrix::from_rows({{1}}));
  REQUIRE(half);
  CHECK((*half)(0, 0) == Scalar(1, 2));
}

TEST_CASE("rank-nullity and exact residuals on seeded random matrices") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t rows = 1 + rng() % 7;
    std::size_t cols = 1 + rng() % 7;
    Matrix m = random_matrix(rng, rows, cols, 3);
    std::size_t r = rank(m);
    Matrix k = kernel_basis(m);
    CHECK(r + k.cols() == cols);
    CHECK((m * k).is_zero());
    CHECK(rank(k) == k.cols());

    // Solvable right-hand sides come back exactly.
    Matrix x0 = random_matrix(rng, cols, 2, 4);
    Matrix rhs = m * x0;
    for (auto order : {PivotOrder::first, PivotOrder::last}) {
      auto x = solve(m, rhs, order);
      REQUIRE(x);
      CHECK(m * *x == rhs);
    }
  }
}

TEST_CASE("Subspace coordinates reproduce vectors") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 2 + rng() % 6;
    Subspace s(n);
    std::vector<Vector> kept;
    for (int i = 0; i < 6; ++i) {
      Matrix v = random_matrix(rng, n, 1, 3);
      if (s.add(v.column(0))) kept.push_back(v.column(0));
    }
    CHECK(s.dim() == kept.size());
    Matrix gens = Matrix::from_columns(kept, n);
    CHECK(rank(gens) == kept.size());
    Matrix c = random_matrix(rng, kept.size(), 1, 5);
    Vector target = gens.apply(c.column(0));
    auto coords = s.coordinates(target);
    REQUIRE(coords);
    CHECK(*coords == c.column(0));
  }
  Subspace line(2);
  line.add({1, 1});
  CHECK_FALSE(line.contains({1, 0}));
  CHECK_FALSE(line.coordinates({0, 1}));
}
