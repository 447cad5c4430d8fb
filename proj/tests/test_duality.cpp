#include "doctest.h"
#include "koszulkit/duality.hpp"

#include <random>

using namespace koszulkit;

namespace {

AlgebraPtr sl2() {
  Quiver q({"e", "s"}, {Arrow{"a", 0, 1, 1}, Arrow{"b", 1, 0, 1}});
  return std::make_shared<GradedAlgebra>(
      build_algebra(q, {Relation{{{Scalar(1), path_from_labels(q, {"a", "b"})}}}}, 4));
}

AlgebraPtr semisimple() { return std::make_shared<GradedAlgebra>(build_algebra(Quiver({"1", "2"}, {}), {}, 1)); }

AlgebraPtr dual_numbers() {
  Quiver q({"0"}, {Arrow{"x", 0, 0, 1}});
  return std::make_shared<GradedAlgebra>(build_algebra(q, {Relation{{{Scalar(1), path_from_labels(q, {"x", "x"})}}}}, 4));
}

const DualityContext& sl2_context() {
  static const DualityContext ctx = make_context(sl2(), 4);
  return ctx;
}

// Sum of dimensions of a line table over vertices, keyed by (i, n).
std::map<std::pair<int, int>, std::size_t> flatten(const LineTable& t) {
  std::map<std::pair<int, int>, std::size_t> out;
  for (const auto& [k, d] : t) out[{std::get<0>(k), std::get<1>(k)}] += d;
  return out;
}

// Cone of a random degree-0 chain map K_v<t> -> K_w.
struct RandomCone {
  ComplexOfModules complex;
  bool ok = false;
  bool nonzero = false;
};

RandomCone random_cone(const DualityContext& ctx, std::mt19937_64& rng) {
  const int v = static_cast<int>(rng() % 2);
  const int w = static_cast<int>(rng() % 2);
  const int t = static_cast<int>(rng() % 3) - 1;
  const ComplexOfModules src = twist_complex(ctx.koszul.per_vertex[v].complex, t);
  const ComplexOfModules& dst = ctx.koszul.per_vertex[w].complex;
  HomComplex h(src, dst);
  // Chain maps of degree 0: cocycles in bidegree (0, 0).
  RandomCone out;
  if (!h.has_bidegree(0, 0)) {
    out.complex = cone_of_complexes(src, dst, ChainMap{});
    out.ok = true;
    return out;
  }
  const auto& block = h.block(0, 0);
  Matrix dblock(h.dim(), block.size());
  for (std::size_t j = 0; j < block.size(); ++j) dblock.set_column(j, h.differential().column(block[j]));
  Matrix ker = kernel_basis(dblock);
  Matrix total(total_offsets(dst).back(), total_offsets(src).back());
  for (std::size_t col = 0; col < ker.cols(); ++col) {
    const Scalar c(static_cast<long long>(rng() % 5) - 2);
    for (std::size_t j = 0; j < block.size(); ++j) {
      if (!ker(j, col).is_zero()) total = total + h.map(block[j]) * (c * ker(j, col));
    }
  }
  std::vector<std::size_t> so = total_offsets(src);
  std::vector<std::size_t> dof = total_offsets(dst);
  ChainMap f;
  for (int p = std::max(src.lowest, dst.lowest); p <= std::min(src.highest(), dst.highest()); ++p) {
    const std::size_t r0 = dof[p - dst.lowest];
    const std::size_t c0 = so[p - src.lowest];
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
    for (std::size_t i = r0; i < dof[p - dst.lowest + 1]; ++i) rows.push_back(i);
    for (std::size_t j = c0; j < so[p - src.lowest + 1]; ++j) cols.push_back(j);
    if (!rows.empty() && !cols.empty()) f.components[p] = total.submatrix(rows, cols);
  }
  out.ok = is_chain_map(src, dst, f);
  out.nonzero = !total.is_zero();
  out.complex = cone_of_complexes(src, dst, f);
  return out;
}

}  // namespace

TEST_CASE("context of the sl2 block") {
  const DualityContext& ctx = sl2_context();
  CHECK_FALSE(ctx.truncated);
  CHECK(ctx.koszul.length() == 2);
  CHECK(ctx.labels.size() == 12);
  CHECK(ctx.dual->dim() == 5);
  CHECK(validate_dg_algebra(*ctx.end.algebra).empty());
  CHECK(validate_dg_module(ctx.k_right).empty());
  CHECK(validate_dg_algebra(*ctx.dual_dg).empty());
  CHECK(ctx.end_cohomology.dim() == 5);
  // The unit of A! is represented by the identity of K.
  SparseVector one;
  for (int v = 0; v < 2; ++v) axpy(one, Scalar(1), ctx.representatives[ctx.dual->idempotent(v)]);
  CHECK(one == ctx.end.algebra->unit());
}

TEST_CASE("contexts refuse non-koszul and unbounded input") {
  Quiver q({"0"}, {Arrow{"x", 0, 0, 1}});
  AlgebraPtr cube = std::make_shared<GradedAlgebra>(
      build_algebra(q, {Relation{{{Scalar(1), path_from_labels(q, {"x", "x", "x"})}}}}, 4));
  CHECK_THROWS_AS(make_context(cube, 4), DualityError);
  CHECK_THROWS_AS(make_context(dual_numbers(), 4), DualityError);
  DualityContext ctx = make_context(dual_numbers(), 4, ContextOptions{true});
  CHECK(ctx.truncated);
  CHECK(ctx.dual->dim() == 5);
  DualityResult r = koszul_duality(ctx, single_term_complex(simple_module(ctx.algebra, 0)));
  REQUIRE(r.lines.count(0) == 1);
  CHECK(r.lines.at(0).dim() >= 4);
}

TEST_CASE("semisimple context") {
  DualityContext ctx = make_context(semisimple(), 2);
  CHECK(ctx.end.algebra->dim() == 2);
  for (int w = 0; w < 2; ++w) {
    DualityResult r = koszul_duality(ctx, single_term_complex(simple_module(ctx.algebra, w)));
    LineTable expected{{{0, 0, w}, 1}};
    CHECK(r.table() == expected);
    CHECK(r.strict_status == "ok");
  }
}

TEST_CASE("rhom modules are valid E-modules") {
  const DualityContext& ctx = sl2_context();
  for (int w = 0; w < 2; ++w) {
    CertifiedModule g = generator(ctx, w);
    CHECK(validate_dg_module(g.module).empty());
    RHomModule r = rhom(ctx, single_term_complex(simple_module(ctx.algebra, w)));
    CHECK(validate_dg_module(r.certified.module).empty());
  }
  CHECK(validate_dg_module(regular(ctx).module).empty());
  CHECK(regular(ctx).module.dim() == generator(ctx, 0).module.dim() + generator(ctx, 1).module.dim());
}

TEST_CASE("psi is a quasi-isomorphism on generators and simples") {
  const DualityContext& ctx = sl2_context();
  for (int w = 0; w < 2; ++w) {
    NaturalMap kw = psi(ctx, ctx.koszul.per_vertex[w].complex);
    CHECK(validate_dg_module(kw.map.source).empty());
    CHECK(kw.certificate.quasi_iso);
    NaturalMap s = psi(ctx, single_term_complex(simple_module(ctx.algebra, w)));
    CHECK(s.certificate.quasi_iso);
    NaturalMap p = psi(ctx, single_term_complex(projective_module(ctx.algebra, w)));
    CHECK(p.certificate.quasi_iso);
  }
}

TEST_CASE("phi is a quasi-isomorphism on certified modules") {
  const DualityContext& ctx = sl2_context();
  for (int w = 0; w < 2; ++w) {
    CertifiedModule g = generator(ctx, w);
    CHECK(phi(ctx, g).certificate.quasi_iso);
    CHECK(phi(ctx, certified_shift(certified_twist(g, 2), 1)).certificate.quasi_iso);
  }
  CHECK(phi(ctx, regular(ctx)).certificate.quasi_iso);
}

TEST_CASE("psi and phi on seeded cones") {
  const DualityContext& ctx = sl2_context();
  std::mt19937_64 rng(20261019);
  int checked = 0;
  int nonzero = 0;
  for (int trial = 0; trial < 24; ++trial) {
    RandomCone c = random_cone(ctx, rng);
    REQUIRE(c.ok);
    REQUIRE(validate_complex(c.complex).empty());
    CHECK(psi(ctx, c.complex).certificate.quasi_iso);
    RHomModule r = rhom(ctx, c.complex);
    CHECK(phi(ctx, r.certified).certificate.quasi_iso);
    ++checked;
    nonzero += c.nonzero ? 1 : 0;
  }
  CHECK(checked >= 20);
  CHECK(nonzero >= 5);
}

TEST_CASE("duality of simples, projectives and acyclic complexes") {
  const DualityContext& ctx = sl2_context();
  for (int w = 0; w < 2; ++w) {
    DualityResult r = koszul_duality(ctx, single_term_complex(simple_module(ctx.algebra, w)));
    CHECK(r.lines.size() == 1);
    REQUIRE(r.lines.count(0) == 1);
    // Line 0 is e_w A!: dimension pattern of the indecomposable projective.
    GradedModule expected = projective_module(ctx.dual, w);
    CHECK(r.lines.at(0).dim() == expected.dim());
    CHECK(r.lines.at(0).dims() == expected.dims());
    CHECK(r.representative_independent);
    CHECK(r.strict_status == "ok");
  }
  GradedModule s = simple_module(ctx.algebra, 1);
  ComplexOfModules acyclic{ctx.algebra, 0, {s, s}, {Matrix::identity(1)}};
  DualityResult zero = koszul_duality(ctx, acyclic);
  CHECK(zero.cohomology.dim() == 0);
  CHECK(zero.table().empty());
}

TEST_CASE("twist and shift rules on line tables") {
  const DualityContext& ctx = sl2_context();
  const ComplexOfModules q = single_term_complex(projective_module(ctx.algebra, 0));
  LineTable base = koszul_duality(ctx, q).table();
  LineTable twisted = koszul_duality(ctx, twist_complex(q, 1)).table();
  LineTable expected_twist;
  for (const auto& [k, d] : base) expected_twist[{std::get<0>(k) + 1, std::get<1>(k) - 1, std::get<2>(k)}] += d;
  CHECK(twisted == expected_twist);
  LineTable shifted = koszul_duality(ctx, shift_complex(q, 1)).table();
  LineTable expected_shift;
  for (const auto& [k, d] : base) expected_shift[{std::get<0>(k) - 1, std::get<1>(k), std::get<2>(k)}] += d;
  CHECK(shifted == expected_shift);
}

TEST_CASE("projective at the antidominant vertex goes to a simple") {
  const DualityContext& ctx = sl2_context();
  DualityResult r = koszul_duality(ctx, single_term_complex(projective_module(ctx.algebra, 1)));
  auto flat = flatten(r.table());
  REQUIRE(flat.size() == 1);
  CHECK(flat.begin()->second == 1);
  CHECK(r.strict_status == "ok");
}

TEST_CASE("totalization agrees with iterated cones") {
  const DualityContext& ctx = sl2_context();
  DGAlgebraPtr over = dg_from_graded(ctx.algebra, 1, -1);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    RandomCone c = random_cone(ctx, rng);
    REQUIRE(c.ok);
    DGModule direct = totalize(c.complex, over);
    DGModule cones = totalize_by_cones(c.complex, over);
    CHECK(direct.dim() == cones.dim());
    CHECK(DGCohomology(direct).dims() == DGCohomology(cones).dims());
  }
}

TEST_CASE("sigma is a chain isomorphism") {
  const DualityContext& ctx = sl2_context();
  DGAlgebraPtr over = dg_from_graded(ctx.algebra, 1, -1);
  std::mt19937_64 rng(11);
  int internal_sign_failures = 0;
  for (int trial = 0; trial < 20; ++trial) {
    RandomCone c = random_cone(ctx, rng);
    REQUIRE(c.ok);
    SigmaIso s = sigma_twist_iso(c.complex, over);
    CHECK(s.isomorphism);
    CHECK(s.failure.empty());
    // Signs by internal degree instead of complex degree.
    DGMap alt = s.map;
    for (std::size_t j = 0; j < alt.matrix.cols(); ++j) {
      alt.matrix(j, j) = (alt.source.tag(j).internal % 2 == 0) ? Scalar(1) : Scalar(-1);
    }
    internal_sign_failures += validate_dg_map(alt).empty() ? 0 : 1;
  }
  CHECK(internal_sign_failures > 0);
}
