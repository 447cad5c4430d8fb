#include "doctest.h"
#include "koszulkit/koszul.hpp"

using namespace koszulkit;

namespace {

AlgebraPtr make(const Quiver& q, const std::vector<std::vector<std::pair<int, std::vector<std::string>>>>& rels,
                int bound) {
  std::vector<Relation> rs;
  for (const auto& r : rels) {
    Relation rel;
    for (const auto& [c, labels] : r) rel.terms.emplace_back(Scalar(c), path_from_labels(q, labels));
    rs.push_back(rel);
  }
  return std::make_shared<GradedAlgebra>(build_algebra(q, rs, bound));
}

AlgebraPtr sl2() {
  return make(Quiver({"e", "s"}, {Arrow{"a", 0, 1, 1}, Arrow{"b", 1, 0, 1}}), {{{1, {"a", "b"}}}}, 4);
}
AlgebraPtr dual_numbers(int bound) {
  return make(Quiver({"v"}, {Arrow{"x", 0, 0, 1}}), {{{1, {"x", "x"}}}}, bound);
}
AlgebraPtr cube_root(int bound) {
  return make(Quiver({"v"}, {Arrow{"x", 0, 0, 1}}), {{{1, {"x", "x", "x"}}}}, bound);
}
AlgebraPtr commutative_square() {
  Quiver q({"1", "2", "3", "4"},
           {Arrow{"a", 0, 1, 1}, Arrow{"b", 1, 3, 1}, Arrow{"c", 0, 2, 1}, Arrow{"d", 2, 3, 1}});
  return make(q, {{{1, {"a", "b"}}, {-1, {"c", "d"}}}}, 3);
}
AlgebraPtr semisimple() { return make(Quiver({"1", "2"}, {}), {}, 1); }

// Euler characteristic oracle: with M_j[v][w] the signed count of Ext classes
// k_v -> k_w of internal degree j (sign (-1)^n) and H_i[w][u] = dim e_w A_i e_u,
// sum over j + i = d of M_j H_i is the identity for d = 0 and zero otherwise.
void check_euler(const AlgebraPtr& a, const ExtAlgebra& ext, int up_to) {
  const int nv = a->vertex_count();
  auto mat = [nv] { return std::vector<std::vector<long>>(nv, std::vector<long>(nv, 0)); };
  std::map<int, std::vector<std::vector<long>>> m;
  std::map<int, std::vector<std::vector<long>>> h;
  for (const auto& e : ext.ext_basis) {
    if (!m.count(e.internal)) m[e.internal] = mat();
    m[e.internal][e.target][e.source] += e.degree % 2 ? -1 : 1;
  }
  for (std::size_t i = 0; i < a->dim(); ++i) {
    const auto& el = a->element(i);
    if (!h.count(el.degree)) h[el.degree] = mat();
    ++h[el.degree][el.source][el.target];
  }
  for (int d = 0; d <= up_to; ++d) {
    for (int v = 0; v < nv; ++v) {
      for (int u = 0; u < nv; ++u) {
        long total = 0;
        for (int n = 0; n <= d; ++n) {
          if (!m.count(n) || !h.count(d - n)) continue;
          for (int w = 0; w < nv; ++w) total += m[n][v][w] * h[d - n][w][u];
        }
        CHECK(total == (d == 0 && u == v ? 1 : 0));
      }
    }
  }
}

std::vector<std::size_t> ext_dims(const ExtAlgebra& e) {
  std::vector<std::size_t> dims;
  for (const auto& b : e.ext_basis) {
    if (dims.size() <= static_cast<std::size_t>(b.degree)) dims.resize(b.degree + 1, 0);
    ++dims[b.degree];
  }
  return dims;
}

void check_associative(const ExtAlgebra& e) {
  const std::size_t n = e.ext_basis.size();
  auto mul = [&](const SparseVector& x, std::size_t y) {
    SparseVector out;
    for (const auto& [i, c] : x) axpy(out, c, e.product[i * n + y]);
    return out;
  };
  auto lmul = [&](std::size_t x, const SparseVector& y) {
    SparseVector out;
    for (const auto& [i, c] : y) axpy(out, c, e.product[x * n + i]);
    return out;
  };
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t z = 0; z < n; ++z) {
        CHECK(to_dense(mul(e.product[x * n + y], z), n) == to_dense(lmul(x, e.product[y * n + z]), n));
      }
    }
  }
}

}  // namespace

TEST_CASE("koszul certificate for the sl2 block") {
  KoszulCertificate c = is_koszul(sl2(), 4);
  CHECK(c.koszul);
  CHECK_FALSE(c.truncated);
  CHECK(c.length == 2);
  CHECK(c.generators[0] == std::map<Generator, std::size_t>{{Generator{0, 0}, 1}, {Generator{1, 0}, 1}});
  CHECK(c.generators[1] == std::map<Generator, std::size_t>{{Generator{0, 1}, 1}, {Generator{1, 1}, 1}});
  CHECK(c.generators[2] == std::map<Generator, std::size_t>{{Generator{0, 2}, 1}});
}

TEST_CASE("non-koszul algebra fails at the first off-diagonal generator") {
  KoszulCertificate c = is_koszul(cube_root(5), 4);
  CHECK_FALSE(c.koszul);
  CHECK(c.failed_degree == 2);
  CHECK(c.generators[2] == std::map<Generator, std::size_t>{{Generator{0, 3}, 1}});
}

TEST_CASE("koszul complex is the sum of the resolutions of simples") {
  KoszulComplex k = koszul_complex(sl2(), 4);
  CHECK(k.length() == 2);
  CHECK(k.complex.lowest == -2);
  CHECK(validate_complex(k.complex).empty());
  CHECK(k.free_terms[0].dim() == 5);
  CHECK(k.free_terms[1].dim() == 5);
  CHECK(k.free_terms[2].dim() == 2);
  CHECK(k.summand[1] == std::vector<int>{0, 1});
  auto coh = complex_cohomology(k.complex);
  std::size_t total = 0;
  for (const auto& [key, dim] : coh) {
    CHECK(std::get<0>(key) == 0);
    CHECK(std::get<1>(key) == 0);
    total += dim;
  }
  CHECK(total == 2);
}

TEST_CASE("lifted ext classes are cocycles") {
  KoszulComplex k = koszul_complex(sl2(), 4);
  const Resolution& re = k.per_vertex[0];
  const Resolution& rs = k.per_vertex[1];
  // Ext^1(k_e, k_s) is dual to the degree-1 generator of K_e.
  std::vector<Matrix> y = lift_ext_class(re, rs, 1, 0);
  REQUIRE(y.size() == 2);
  for (std::size_t p = 1; p < y.size(); ++p) {
    Matrix lhs = rs.complex.differential(-static_cast<int>(p)) * y[p];
    Matrix rhs = y[p - 1] * re.complex.differential(-static_cast<int>(p) - 1);
    CHECK((lhs + rhs).is_zero());
  }
  CHECK_THROWS_AS(lift_ext_class(re, re, 1, 0), AlgebraError);
}

TEST_CASE("sl2 ext algebra is the quadratic dual and the block again") {
  AlgebraPtr a = sl2();
  ExtAlgebra e = ext_algebra(a, 4);
  CHECK(ext_dims(e) == std::vector<std::size_t>{2, 2, 1});
  CHECK(e.quadratic);
  CHECK_FALSE(e.truncated);
  CHECK(e.algebra.graded_dims() == std::vector<std::size_t>{2, 2, 1});
  CHECK(e.algebra.quiver().arrow_index("a*") >= 0);
  CHECK(e.algebra.quiver().arrow_index("b*") >= 0);
  CHECK(validate_algebra(e.algebra).empty());
  check_euler(a, e, 4);
  check_associative(e);

  GradedAlgebra qd = quadratic_dual(*a);
  CHECK(qd.graded_dims() == std::vector<std::size_t>{2, 2, 1});
  const Quiver& dq = qd.quiver();
  CHECK(qd.evaluate(path_from_labels(dq, {"a*", "b*"})).empty());
  CHECK_FALSE(qd.evaluate(path_from_labels(dq, {"b*", "a*"})).empty());
  CHECK(find_isomorphism(e.algebra, qd).has_value());

  auto self = find_isomorphism(e.algebra, *a);
  REQUIRE(self.has_value());
  CHECK(self->vertex_map == std::vector<int>{1, 0});

  GradedAlgebra dd = quadratic_dual(qd);
  CHECK(dd.graded_dims() == a->graded_dims());
  CHECK(find_isomorphism(dd, *a).has_value());
}

TEST_CASE("ext algebra products do not depend on the lift representatives") {
  AlgebraPtr a = commutative_square();
  ExtAlgebra first = ext_algebra(a, 3, PivotOrder::first);
  ExtAlgebra last = ext_algebra(a, 3, PivotOrder::last);
  REQUIRE(first.product.size() == last.product.size());
  for (std::size_t i = 0; i < first.product.size(); ++i) CHECK(first.product[i] == last.product[i]);
}

TEST_CASE("commutative square") {
  AlgebraPtr a = commutative_square();
  CHECK(is_koszul(a, 3).koszul);
  ExtAlgebra e = ext_algebra(a, 3);
  check_euler(a, e, 3);
  check_associative(e);
  CHECK(ext_dims(e) == std::vector<std::size_t>{4, 4, 1});
  CHECK(find_isomorphism(e.algebra, quadratic_dual(*a)).has_value());
}

TEST_CASE("dual numbers give a polynomial ring") {
  AlgebraPtr a = dual_numbers(4);
  KoszulCertificate c = is_koszul(a, 4);
  CHECK(c.koszul);
  CHECK(c.truncated);
  ExtAlgebra e = ext_algebra(a, 4);
  CHECK(e.truncated);
  CHECK(ext_dims(e) == std::vector<std::size_t>{1, 1, 1, 1, 1});
  check_euler(a, e, 4);
  check_associative(e);
  GradedAlgebra qd = quadratic_dual(*a, 4);
  CHECK(qd.relations().empty());
  CHECK(qd.graded_dims() == std::vector<std::size_t>{1, 1, 1, 1, 1});
  CHECK(find_isomorphism(e.algebra, qd).has_value());
}

TEST_CASE("semisimple algebra is its own dual") {
  AlgebraPtr a = semisimple();
  ExtAlgebra e = ext_algebra(a, 2);
  CHECK(ext_dims(e) == std::vector<std::size_t>{2});
  CHECK(find_isomorphism(e.algebra, *a).has_value());
  CHECK(find_isomorphism(quadratic_dual(*a), *a).has_value());
}

TEST_CASE("non-quadratic ext algebra") {
  AlgebraPtr a = cube_root(6);
  ExtAlgebra e = ext_algebra(a, 4);
  CHECK(ext_dims(e) == std::vector<std::size_t>{1, 1, 1, 1, 1});
  CHECK_FALSE(e.quadratic);
  check_euler(a, e, 4);
  check_associative(e);
  CHECK_THROWS_AS(quadratic_dual(*a), AlgebraError);
}

TEST_CASE("double dual recovers the graded dims") {
  for (const AlgebraPtr& a : {sl2(), semisimple(), commutative_square()}) {
    ExtAlgebra e = ext_algebra(a, 4);
    REQUIRE_FALSE(e.truncated);
    auto e_ptr = std::make_shared<GradedAlgebra>(e.algebra);
    ExtAlgebra ee = ext_algebra(e_ptr, 4);
    std::vector<std::size_t> dims = a->graded_dims();
    dims.resize(a->top_degree() + 1);
    CHECK(ext_dims(ee) == dims);
    CHECK(find_isomorphism(ee.algebra, *a).has_value());
  }
}
