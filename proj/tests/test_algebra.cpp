#include "doctest.h"
#include "koszulkit/algebra.hpp"

#include <map>
#include <random>

using namespace koszulkit;

namespace {

Quiver sl2_quiver() {
  return Quiver({"e", "s"}, {Arrow{"a", 0, 1, 1}, Arrow{"b", 1, 0, 1}});
}

GradedAlgebra sl2() {
  Quiver q = sl2_quiver();
  return build_algebra(q, {Relation{{{Scalar(1), path_from_labels(q, {"a", "b"})}}}}, 4);
}

GradedAlgebra dual_numbers(int bound = 3) {
  Quiver q({"v"}, {Arrow{"x", 0, 0, 1}});
  return build_algebra(q, {Relation{{{Scalar(1), path_from_labels(q, {"x", "x"})}}}}, bound);
}

// Oracle: dimension of the degree-d ideal slice as the span of u*r*w over all
// paths u, w and relations r, without any recursion over lower degrees.
std::size_t oracle_dim(const Quiver& q, const std::vector<Relation>& rels, int d) {
  std::vector<Path> paths = paths_of_degree(q, d);
  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    std::vector<int> key{paths[i].start};
    key.insert(key.end(), paths[i].arrows.begin(), paths[i].arrows.end());
    index[key] = i;
  }
  Subspace slice(paths.size());
  for (const auto& r : rels) {
    const Path& p0 = r.terms.front().second;
    int rd = path_degree(q, p0);
    for (int du = 0; du + rd <= d; ++du) {
      for (const auto& u : paths_of_degree(q, du)) {
        if (path_target(q, u) != path_source(q, p0)) continue;
        for (const auto& w : paths_of_degree(q, d - du - rd)) {
          if (path_source(q, w) != path_target(q, p0)) continue;
          Vector v(paths.size());
          for (const auto& [c, p] : r.terms) {
            Path full = concat(q, concat(q, u, p), w);
            std::vector<int> key{full.start};
            key.insert(key.end(), full.arrows.begin(), full.arrows.end());
            v[index.at(key)] += c;
          }
          slice.add(v);
        }
      }
    }
  }
  return paths.size() - slice.dim();
}

}  // namespace

TEST_CASE("ground field and semisimple algebras") {
  GradedAlgebra k = build_algebra(Quiver({"1"}, {}), {}, 2);
  CHECK(k.graded_dims() == std::vector<std::size_t>{1});
  CHECK_FALSE(k.truncated());
  GradedAlgebra kk = build_algebra(Quiver({"1", "2"}, {}), {}, 2);
  CHECK(kk.graded_dims() == std::vector<std::size_t>{2});
  CHECK(validate_algebra(kk).empty());
}

TEST_CASE("sl2 principal block algebra") {
  GradedAlgebra a = sl2();
  CHECK(a.graded_dims() == std::vector<std::size_t>{2, 2, 1});
  CHECK(a.dim() == 5);
  CHECK_FALSE(a.truncated());
  CHECK(validate_algebra(a).empty());
  // The surviving degree-2 path is b*a, at vertex s.
  auto [lo, hi] = a.degree_range(2);
  REQUIRE(hi - lo == 1);
  CHECK(a.describe(lo) == "b*a");
  CHECK(a.element(lo).source == 1);
  CHECK(a.element(lo).target == 1);
  Quiver q = a.quiver();
  CHECK(a.evaluate(path_from_labels(q, {"a", "b"})).empty());
  CHECK(a.evaluate(path_from_labels(q, {"b", "a", "b"})).empty());
}

TEST_CASE("relation errors") {
  Quiver q = sl2_quiver();
  Path ab = path_from_labels(q, {"a", "b"});
  Path ba = path_from_labels(q, {"b", "a"});
  Path aba = path_from_labels(q, {"a", "b", "a"});
  CHECK_THROWS_AS(build_algebra(q, {Relation{{{Scalar(1), ab}, {Scalar(1), aba}}}}, 4),
                  AlgebraError);
  CHECK_THROWS_AS(build_algebra(q, {Relation{{{Scalar(1), ab}, {Scalar(-1), ba}}}}, 4),
                  AlgebraError);
  CHECK_THROWS_AS(build_algebra(q, {Relation{{{Scalar(1), aba}}}}, 2), AlgebraError);
  CHECK_THROWS_AS(path_from_labels(q, {"a", "a"}), AlgebraError);
  CHECK_THROWS_AS(Quiver({"1", "1"}, {}), AlgebraError);
  CHECK_THROWS_AS(Quiver({"1"}, {Arrow{"x", 0, 3, 1}}), AlgebraError);
}

TEST_CASE("truncation is reported, not fatal") {
  Quiver q({"v"}, {Arrow{"x", 0, 0, 1}});
  GradedAlgebra poly = build_algebra(q, {}, 3);
  CHECK(poly.truncated());
  CHECK(poly.graded_dims() == std::vector<std::size_t>{1, 1, 1, 1});
  CHECK(validate_algebra(poly).empty());
  CHECK_FALSE(dual_numbers().truncated());
  CHECK(dual_numbers().graded_dims() == std::vector<std::size_t>{1, 1});
}

TEST_CASE("opposite algebra") {
  GradedAlgebra k = build_algebra(Quiver({"1"}, {}), {}, 1);
  CHECK(opposite_algebra(k) == k);
  GradedAlgebra d = dual_numbers();
  CHECK(opposite_algebra(d) == d);
  GradedAlgebra a = sl2();
  GradedAlgebra op = opposite_algebra(a);
  CHECK(op.graded_dims() == a.graded_dims());
  CHECK(op.quiver().arrows()[0].source == 1);
  CHECK(validate_algebra(op).empty());
  CHECK(opposite_algebra(op) == a);
  // In the opposite algebra the arrows compose the other way: b*a = 0 there.
  CHECK(op.evaluate(path_from_labels(op.quiver(), {"b", "a"})).empty());
  CHECK_FALSE(op.evaluate(path_from_labels(op.quiver(), {"a", "b"})).empty());
}

TEST_CASE("quotient by idempotents") {
  GradedAlgebra a = sl2();
  IdempotentQuotient none = quotient_by_idempotents(a, {});
  CHECK(none.quotient.graded_dims() == a.graded_dims());
  CHECK(none.surjection == Matrix::identity(a.dim()));

  GradedAlgebra kk = build_algebra(Quiver({"1", "2"}, {}), {}, 1);
  IdempotentQuotient one = quotient_by_idempotents(kk, {1});
  CHECK(one.quotient.graded_dims() == std::vector<std::size_t>{1});
  CHECK(one.quotient.quiver().vertices() == std::vector<std::string>{"1"});

  IdempotentQuotient at_s = quotient_by_idempotents(a, {0});
  CHECK(at_s.quotient.graded_dims() == std::vector<std::size_t>{1});
  CHECK(at_s.quotient.quiver().vertices() == std::vector<std::string>{"s"});
  CHECK(at_s.surjection.rows() == 1);
  CHECK(at_s.surjection(0, a.idempotent(1)) == Scalar(1));
  CHECK(at_s.surjection(0, a.idempotent(0)).is_zero());

  // Killing s leaves e with nothing above degree 0 either.
  IdempotentQuotient at_e = quotient_by_idempotents(a, {1});
  CHECK(at_e.quotient.graded_dims() == std::vector<std::size_t>{1});

  CHECK_THROWS_AS(quotient_by_idempotents(a, {0, 1}), ZeroRingError);
}

TEST_CASE("idempotent quotient surjection is a graded ring map") {
  // Three vertices in a cycle with one commutativity-style relation.
  Quiver q({"1", "2", "3"}, {Arrow{"p", 0, 1, 1}, Arrow{"q", 1, 2, 1}, Arrow{"r", 2, 0, 1},
                             Arrow{"t", 0, 2, 2}});
  std::vector<Relation> rels{
      Relation{{{Scalar(1), path_from_labels(q, {"p", "q"})}, {Scalar(-2), path_from_labels(q, {"t"})}}},
      Relation{{{Scalar(1), path_from_labels(q, {"q", "r"})}}},
      Relation{{{Scalar(1), path_from_labels(q, {"r", "p"})}}}};
  GradedAlgebra a = build_algebra(q, rels, 5);
  REQUIRE(validate_algebra(a).empty());
  for (std::vector<int> kill : {std::vector<int>{0}, {1}, {2}, {0, 2}}) {
    IdempotentQuotient qt = quotient_by_idempotents(a, kill);
    CHECK(validate_algebra(qt.quotient).empty());
    for (std::size_t i = 0; i < a.dim(); ++i) {
      for (std::size_t j = 0; j < a.dim(); ++j) {
        Vector xy = qt.surjection.apply(to_dense(a.product(i, j), a.dim()));
        Vector fx = qt.surjection.column(i);
        Vector fy = qt.surjection.column(j);
        CHECK(to_dense(qt.quotient.multiply(to_sparse(fx), to_sparse(fy)), qt.quotient.dim()) == xy);
      }
      // Degree zero map: images stay in the same degree.
      for (std::size_t k = 0; k < qt.quotient.dim(); ++k) {
        if (!qt.surjection(k, i).is_zero()) {
          CHECK(qt.quotient.element(k).degree == a.element(i).degree);
        }
      }
    }
  }
}

TEST_CASE("graded dimensions agree with direct ideal enumeration") {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 25; ++trial) {
    int nv = 1 + static_cast<int>(rng() % 3);
    std::vector<std::string> vs;
    for (int v = 0; v < nv; ++v) vs.push_back("v" + std::to_string(v));
    std::vector<Arrow> arrows;
    int na = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < na; ++i) {
      arrows.push_back(Arrow{"x" + std::to_string(i), static_cast<int>(rng() % nv),
                             static_cast<int>(rng() % nv), 1});
    }
    Quiver q(vs, arrows);
    // Random quadratic relations, grouped by endpoints.
    std::vector<Path> quad = paths_of_degree(q, 2);
    std::vector<Relation> rels;
    int nr = static_cast<int>(rng() % 4);
    for (int r = 0; r < nr && !quad.empty(); ++r) {
      const Path& seed = quad[rng() % quad.size()];
      Relation rel;
      for (const auto& p : quad) {
        if (path_source(q, p) != path_source(q, seed) || path_target(q, p) != path_target(q, seed))
          continue;
        long long c = static_cast<long long>(rng() % 5) - 2;
        if (&p == &seed && c == 0) c = 1;
        if (c != 0) rel.terms.emplace_back(Scalar(c), p);
      }
      if (!rel.terms.empty()) rels.push_back(rel);
    }
    GradedAlgebra a = build_algebra(q, rels, 4);
    for (int d = 0; d <= 4; ++d) {
      CHECK(a.dim_in_degree(d) == oracle_dim(q, rels, d));
    }
    CHECK(validate_algebra(a).empty());
    CHECK(opposite_algebra(opposite_algebra(a)) == a);
  }
}

TEST_CASE("relations recovered from an evaluation") {
  GradedAlgebra a = sl2();
  auto eval = [&](const Path& p) {
    auto [lo, hi] = a.degree_range(path_degree(a.quiver(), p));
    Vector v(hi - lo);
    for (const auto& [i, c] : a.evaluate(p)) v[i - lo] = c;
    return v;
  };
  std::vector<Relation> rels = relations_from_evaluation(a.quiver(), 4, eval);
  REQUIRE(rels.size() == 1);
  CHECK(build_algebra(a.quiver(), rels, 4).graded_dims() == a.graded_dims());
}
