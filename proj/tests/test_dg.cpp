#include "doctest.h"
#include "koszulkit/dg.hpp"
#include "koszulkit/koszul.hpp"

#include <set>

using namespace koszulkit;

namespace {

AlgebraPtr sl2() {
  Quiver q({"e", "s"}, {Arrow{"a", 0, 1, 1}, Arrow{"b", 1, 0, 1}});
  return std::make_shared<GradedAlgebra>(
      build_algebra(q, {Relation{{{Scalar(1), path_from_labels(q, {"a", "b"})}}}}, 4));
}

AlgebraPtr semisimple() { return std::make_shared<GradedAlgebra>(build_algebra(Quiver({"1", "2"}, {}), {}, 1)); }

std::vector<int> summand_labels(const KoszulComplex& k) {
  std::vector<int> labels;
  for (int p = k.length(); p >= 0; --p) {
    for (std::size_t i = 0; i < k.free_terms[p].dim(); ++i) {
      labels.push_back(k.summand[p][k.free_terms[p].origin(i).first]);
    }
  }
  return labels;
}

ComplexOfModules two_term_identity(const AlgebraPtr& a, int v) {
  GradedModule s = simple_module(a, v);
  return ComplexOfModules{a, 0, {s, s}, {Matrix::identity(1)}};
}

// dims of H(cone f) at t equal dim coker H(f) at t plus dim ker H(f) at t[1].
void check_long_exact_sequence(const DGMap& f) {
  DGCone c = cone(f);
  DGCohomology hm(f.source);
  DGCohomology hn(f.target);
  DGCohomology hc(c.module);
  Matrix induced(hn.dim(), hm.dim());
  for (std::size_t j = 0; j < hm.dim(); ++j) induced.set_column(j, hn.class_of(f.matrix.apply(hm.representatives()[j])));
  std::set<DGModuleTag> keys;
  for (const auto& t : hn.tags()) keys.insert(t);
  for (const auto& t : hm.tags()) keys.insert(DGModuleTag{t.cohom - 1, t.internal, t.vertex});
  for (const auto& t : hc.tags()) keys.insert(t);
  auto restricted_rank = [&](const DGModuleTag& src, const DGModuleTag& dst) -> std::size_t {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < hn.dim(); ++i) {
      if (hn.tags()[i] == dst) rows.push_back(i);
    }
    for (std::size_t j = 0; j < hm.dim(); ++j) {
      if (hm.tags()[j] == src) cols.push_back(j);
    }
    return (rows.empty() || cols.empty()) ? 0 : rank(induced.submatrix(rows, cols));
  };
  for (const auto& t : keys) {
    std::size_t hn_t = hn.dims()[t];
    DGModuleTag next{t.cohom + 1, t.internal, t.vertex};
    std::size_t hm_next = hm.dims()[next];
    std::size_t coker = hn_t - restricted_rank(t, t);
    std::size_t ker = hm_next - restricted_rank(next, next);
    CHECK(hc.dims()[t] == coker + ker);
  }
}

}  // namespace

TEST_CASE("hom complex of a simple with itself") {
  AlgebraPtr a = sl2();
  ComplexOfModules s = single_term_complex(simple_module(a, 0));
  HomComplex h(s, s);
  CHECK(h.dim() == 1);
  CHECK(h.tags()[0] == DGTag{0, 0, 0, 0});
  CHECK(h.differential().is_zero());
  CHECK(validate_dg_module(h.as_module()).empty());
}

TEST_CASE("hom complex of an acyclic complex is acyclic") {
  AlgebraPtr a = sl2();
  ComplexOfModules m = two_term_identity(a, 1);
  HomComplex h(m, m);
  CHECK(h.dim() == 4);
  CHECK(rank(h.differential()) == 2);
  CHECK(DGCohomology(h.as_module()).dim() == 0);
}

TEST_CASE("hom from K into a simple has zero differential") {
  AlgebraPtr a = sl2();
  KoszulComplex k = koszul_complex(a, 4);
  for (int w = 0; w < 2; ++w) {
    HomComplex h(k.complex, single_term_complex(simple_module(a, w)), summand_labels(k));
    CHECK(h.differential().is_zero());
    ExtAlgebra e = ext_algebra(a, 4);
    std::size_t expected = 0;
    for (const auto& b : e.ext_basis) expected += b.source == w ? 1 : 0;
    CHECK(h.dim() == expected);
    for (const auto& t : h.tags()) CHECK(t.internal == -t.cohom);
  }
}

TEST_CASE("end algebra of a semisimple algebra") {
  AlgebraPtr a = semisimple();
  KoszulComplex k = koszul_complex(a, 2);
  EndAlgebra e = end_dg_algebra(k.complex, summand_labels(k), a->quiver().vertices());
  CHECK(e.algebra->dim() == 2);
  CHECK(e.algebra->differential().is_zero());
  CHECK(validate_dg_algebra(*e.algebra).empty());
}

TEST_CASE("end algebra of the sl2 koszul complex") {
  AlgebraPtr a = sl2();
  KoszulComplex k = koszul_complex(a, 4);
  EndAlgebra e = end_dg_algebra(k.complex, summand_labels(k), a->quiver().vertices());
  CHECK(validate_dg_algebra(*e.algebra).empty());
  CHECK(validate_dg_module(e.evaluation).empty());
  DGModule reg = regular_dg_module(e.algebra);
  CHECK(validate_dg_module(reg).empty());
  DGCohomology h(reg);
  std::map<std::pair<int, int>, std::size_t> expected{{{0, 0}, 2}, {{1, -1}, 2}, {{2, -2}, 1}};
  CHECK(h.table() == expected);
  // The unit is a cocycle whose class acts as the identity.
  SparseVector one = e.algebra->unit();
  CHECK(induced_action(reg, h, one) == Matrix::identity(h.dim()));
}

TEST_CASE("shift and twist") {
  AlgebraPtr a = sl2();
  DGAlgebraPtr adg = dg_from_graded(a);
  CHECK(validate_dg_algebra(*adg).empty());
  KoszulComplex k = koszul_complex(a, 4);
  DGModule m = dg_module_from_complex(k.per_vertex[0].complex, adg);
  CHECK(validate_dg_module(m).empty());
  DGModule m1 = shift(m);
  CHECK(validate_dg_module(m1).empty());
  CHECK(m1.differential() == m.differential() * Scalar(-1));
  DGModule m2 = shift(m1);
  CHECK(m2.differential() == m.differential());
  for (std::size_t i = 0; i < m.dim(); ++i) CHECK(m2.tag(i).cohom == m.tag(i).cohom - 2);
  CHECK(shift(zero_dg_module(adg)).dim() == 0);

  auto hm = DGCohomology(m).dims();
  auto hs = DGCohomology(m1).dims();
  for (const auto& [t, d] : hm) CHECK(hs[DGModuleTag{t.cohom - 1, t.internal, t.vertex}] == d);

  DGModule t1 = twist(m, 3);
  CHECK(validate_dg_module(t1).empty());
  CHECK(twist(t1, -3).tags() == m.tags());
  auto ht = DGCohomology(t1).dims();
  for (const auto& [t, d] : hm) CHECK(ht[DGModuleTag{t.cohom, t.internal + 3, t.vertex}] == d);
  CHECK(twist(shift(m), 2).tags() == shift(twist(m, 2)).tags());
  CHECK(twist(shift(m), 2).differential() == shift(twist(m, 2)).differential());

  // Left modules pick up signs on the action.
  EndAlgebra e = end_dg_algebra(k.complex, summand_labels(k), a->quiver().vertices());
  CHECK(validate_dg_module(shift(e.evaluation)).empty());
  CHECK(validate_dg_module(shift(e.evaluation, 3)).empty());
}

TEST_CASE("cones") {
  AlgebraPtr a = sl2();
  DGAlgebraPtr adg = dg_from_graded(a);
  KoszulComplex k = koszul_complex(a, 4);
  DGModule m = dg_module_from_complex(k.per_vertex[0].complex, adg);

  DGCone id = cone(identity_map(m));
  CHECK(validate_dg_module(id.module).empty());
  CHECK(validate_dg_map(id.inclusion).empty());
  CHECK(validate_dg_map(id.projection).empty());
  CHECK(DGCohomology(id.module).dim() == 0);
  check_long_exact_sequence(identity_map(m));

  DGModule n = dg_module_from_complex(single_term_complex(projective_module(a, 1)), adg);
  DGMap zero{m, n, Matrix(n.dim(), m.dim()), 0, 0};
  DGCone z = cone(zero);
  CHECK(validate_dg_module(z.module).empty());
  auto hz = DGCohomology(z.module).dims();
  auto expected = DGCohomology(dg_direct_sum({n, shift(m)})).dims();
  CHECK(hz == expected);
  check_long_exact_sequence(zero);

  // Inclusion of the radical of P(e): the cone is quasi-isomorphic to the top.
  GradedModule pe = projective_module(a, 0);
  Submodule rad = submodule_from_vectors(pe, {Vector{0, 1}});
  DGModule sub = dg_module_from_complex(single_term_complex(rad.module), adg);
  DGModule big = dg_module_from_complex(single_term_complex(pe), adg);
  DGMap inc{sub, big, rad.inclusion, 0, 0};
  REQUIRE(validate_dg_map(inc).empty());
  DGCone c = cone(inc);
  check_long_exact_sequence(inc);
  QuotientModule top = quotient_module(pe, {Vector{0, 1}});
  DGModule q = dg_module_from_complex(single_term_complex(top.module), adg);
  Matrix to_q(q.dim(), c.module.dim());
  for (std::size_t i = 0; i < q.dim(); ++i) {
    for (std::size_t j = 0; j < big.dim(); ++j) to_q(i, j) = top.projection(i, j);
  }
  DGMap pr{c.module, q, to_q, 0, 0};
  CHECK(validate_dg_map(pr).empty());
  CHECK(is_quasi_iso(pr).quasi_iso);

  CHECK_THROWS_AS(cone(DGMap{m, n, Matrix(n.dim(), m.dim()), 1, 0}), std::invalid_argument);
}

TEST_CASE("quasi-isomorphism certificates") {
  AlgebraPtr a = sl2();
  DGAlgebraPtr adg = dg_from_graded(a);
  KoszulComplex k = koszul_complex(a, 4);
  for (int w = 0; w < 2; ++w) {
    const Resolution& r = k.per_vertex[w];
    DGModule kw = dg_module_from_complex(r.complex, adg);
    DGModule s = dg_module_from_complex(single_term_complex(r.resolved), adg);
    Matrix aug(s.dim(), kw.dim());
    const std::size_t off = kw.dim() - r.free_terms[0].dim();
    for (std::size_t i = 0; i < s.dim(); ++i) {
      for (std::size_t j = 0; j < r.free_terms[0].dim(); ++j) aug(i, off + j) = r.augmentation(i, j);
    }
    QuasiIsoCertificate cert = is_quasi_iso(DGMap{kw, s, aug, 0, 0});
    CHECK(cert.quasi_iso);
    CHECK(is_quasi_iso(identity_map(kw)).quasi_iso);
    CHECK_FALSE(is_quasi_iso(DGMap{kw, s, Matrix(s.dim(), kw.dim()), 0, 0}).quasi_iso);
  }
}

TEST_CASE("complexes round trip through DG-modules") {
  AlgebraPtr a = sl2();
  DGAlgebraPtr adg = dg_from_graded(a);
  KoszulComplex k = koszul_complex(a, 4);
  ComplexOfModules back = complex_from_dg_module(dg_module_from_complex(k.complex, adg), a);
  CHECK(back.lowest == k.complex.lowest);
  REQUIRE(back.terms.size() == k.complex.terms.size());
  for (std::size_t i = 0; i < back.terms.size(); ++i) {
    CHECK(back.terms[i].tags() == k.complex.terms[i].tags());
    for (std::size_t arrow = 0; arrow < 2; ++arrow) {
      CHECK(back.terms[i].arrow_action(static_cast<int>(arrow)) == k.complex.terms[i].arrow_action(static_cast<int>(arrow)));
    }
  }
  for (std::size_t i = 0; i < back.differentials.size(); ++i) CHECK(back.differentials[i] == k.complex.differentials[i]);
}
