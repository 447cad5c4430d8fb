#include "koszulkit/functors.hpp"

#include <random>
#include <set>

namespace koszulkit {

namespace {

std::vector<GradedModule> simples_and_projectives(const AlgebraPtr& a) {
  std::vector<GradedModule> out;
  for (int v = 0; v < a->vertex_count(); ++v) {
    out.push_back(simple_module(a, v));
    out.push_back(projective_module(a, v));
  }
  return out;
}

// Tor_p(m, X) = 0 for p > 0, read off a minimal resolution.
std::string check_flat_on(const GradedModule& m, const Bimodule& x, const std::string& what) {
  const int length = 2 * m.algebra()->vertex_count() + 2;
  Resolution r = minimal_resolution(m, length);
  ComplexOfModules t = tensor_complex(r.complex, x);
  for (const auto& [key, dim] : complex_cohomology(t)) {
    const int p = std::get<0>(key);
    if (p == 0 || dim == 0) continue;
    if (r.truncated && p == r.complex.lowest) continue;
    return what + ": tensor is not exact (Tor in homological degree " + std::to_string(-p) + ")";
  }
  return {};
}

Matrix block_of(const Matrix& m, std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) {
  Matrix out(r1 - r0, c1 - c0);
  for (std::size_t i = r0; i < r1; ++i) {
    for (std::size_t j = c0; j < c1; ++j) out(i - r0, j - c0) = m(i, j);
  }
  return out;
}

void place(Matrix& target, std::size_t r0, std::size_t c0, const Matrix& b) {
  for (std::size_t i = 0; i < b.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      if (!b(i, j).is_zero()) target(r0 + i, c0 + j) = b(i, j);
    }
  }
}

int matched_vertex(const WallDatum& w, int lambda_vertex) {
  for (const auto& [l, v] : w.matching) {
    if (l == lambda_vertex) return v;
  }
  throw WallError("vertex " + std::to_string(lambda_vertex) + " of the singular algebra is not matched");
}

}  // namespace

// --------------------------------------------------------------- wall datum

std::string validate_wall_datum(const WallDatum& w) {
  if (w.x.left_algebra() != w.regular || w.x.right_algebra() != w.singular) return "X is not an (A, A_lambda)-bimodule";
  if (w.x_prime.left_algebra() != w.singular || w.x_prime.right_algebra() != w.regular) {
    return "X' is not an (A_lambda, A)-bimodule";
  }
  std::set<int> killed(w.kill.begin(), w.kill.end());
  std::set<int> lambdas;
  std::set<int> targets;
  for (const auto& [l, v] : w.matching) {
    if (l < 0 || l >= w.singular->vertex_count() || v < 0 || v >= w.regular->vertex_count()) return "matching out of range";
    if (killed.count(v)) return "matching uses a killed vertex";
    if (!lambdas.insert(l).second || !targets.insert(v).second) return "matching is not injective";
  }
  if (static_cast<int>(lambdas.size()) != w.singular->vertex_count() ||
      static_cast<int>(targets.size() + killed.size()) != w.regular->vertex_count()) {
    return "matching is not a bijection onto the surviving vertices";
  }
  for (const auto& m : simples_and_projectives(w.regular)) {
    if (std::string e = check_flat_on(m, w.x, "X"); !e.empty()) return e;
  }
  for (const auto& n : simples_and_projectives(w.singular)) {
    if (std::string e = check_flat_on(n, w.x_prime, "X'"); !e.empty()) return e;
  }
  const int span = w.regular->top_degree() + w.singular->top_degree() + std::abs(w.shift) + 2;
  for (const auto& m : simples_and_projectives(w.regular)) {
    GradedModule tm = tensor_module(m, w.x);
    for (const auto& n : simples_and_projectives(w.singular)) {
      GradedModule tn = tensor_module(n, w.x_prime).twisted(w.shift);
      for (int t = -span; t <= span; ++t) {
        const std::size_t lhs = hom_space(tm, n, t).size();
        const std::size_t rhs = hom_space(m, tn, t).size();
        if (lhs != rhs) {
          return "adjunction dimensions differ at internal shift " + std::to_string(t) + ": " + std::to_string(lhs) +
                 " vs " + std::to_string(rhs);
        }
      }
    }
  }
  return {};
}

WallDatum make_wall_datum(AlgebraPtr regular, AlgebraPtr singular, Bimodule x, Bimodule x_prime, std::vector<int> kill,
                          std::vector<std::pair<int, int>> matching, int shift) {
  WallDatum w{std::move(regular), std::move(singular), std::move(x), std::move(x_prime), std::move(kill),
              std::move(matching), shift, nullptr, Matrix()};
  IdempotentQuotient q;
  try {
    q = quotient_by_idempotents(*w.regular, w.kill);
  } catch (const ZeroRingError&) {
    throw WallError("the parabolic quotient kills every vertex");
  }
  w.parabolic = std::make_shared<GradedAlgebra>(q.quotient);
  w.surjection = q.surjection;
  if (std::string e = validate_wall_datum(w); !e.empty()) throw WallError("invalid wall datum: " + e);
  return w;
}

ComplexOfModules translate(const WallDatum& w, const ComplexOfModules& m) { return tensor_complex(m, w.x); }

ComplexOfModules translate_out(const WallDatum& w, const ComplexOfModules& n) { return tensor_complex(n, w.x_prime); }

ComplexOfModules zuckerman_truncate(const WallDatum& w, const ComplexOfModules& m) {
  return tensor_complex(m, quotient_bimodule(w.regular, w.parabolic, w.surjection));
}

DerivedTables derived_zuckerman(const WallDatum& w, const GradedModule& m, int length) {
  DerivedTables out;
  if (m.dim() == 0) return out;
  Resolution r = minimal_resolution(m, length);
  out.truncated = r.truncated;
  ComplexOfModules t = zuckerman_truncate(w, r.complex);
  for (const auto& [key, dim] : complex_cohomology(t)) {
    const auto [p, n, v] = key;
    if (dim == 0 || (r.truncated && p == r.complex.lowest)) continue;
    out.table[{-p, n, v}] = dim;
  }
  return out;
}

// ------------------------------------------------------- translation kernel

Matrix translate_map(const DualityContext& ctx, const TranslationKernel& k, const Matrix& f) {
  const std::vector<std::size_t> ko = total_offsets(ctx.koszul.complex);
  const std::vector<std::size_t> to = total_offsets(k.tk);
  Matrix out(to.back(), to.back());
  for (std::size_t from = 0; from < k.parts.size(); ++from) {
    for (std::size_t into = 0; into < k.parts.size(); ++into) {
      Matrix b = block_of(f, ko[into], ko[into + 1], ko[from], ko[from + 1]);
      if (b.is_zero()) continue;
      place(out, to[into], to[from], tensor_map(k.parts[from], k.parts[into], b, k.x_dim));
    }
  }
  return out;
}

TranslationKernel translation_kernel(const DualityContext& ctx, const DualityContext& ctx_lambda, const WallDatum& w) {
  if (ctx.algebra != w.regular || ctx_lambda.algebra != w.singular) {
    throw WallError("contexts do not belong to the wall datum");
  }
  TranslationKernel k;
  const ComplexOfModules& kc = ctx.koszul.complex;
  k.x_dim = w.x.dim();
  k.tk = ComplexOfModules{w.singular, kc.lowest, {}, {}};
  for (const auto& t : kc.terms) k.parts.push_back(tensor_with_bimodule(t, w.x));
  for (const auto& p : k.parts) k.tk.terms.push_back(p.module);
  for (std::size_t i = 0; i < kc.differentials.size(); ++i) {
    k.tk.differentials.push_back(tensor_map(k.parts[i], k.parts[i + 1], kc.differentials[i], k.x_dim));
  }
  const std::vector<std::size_t> ko = total_offsets(kc);
  for (std::size_t i = 0; i < k.parts.size(); ++i) {
    for (const auto& [m, x] : k.parts[i].representatives) k.tk_labels.push_back(ctx.labels[ko[i] + m]);
  }
  k.hom = HomComplex(ctx_lambda.koszul.complex, k.tk, ctx_lambda.labels, k.tk_labels);
  const HomComplex& h = k.hom;
  const DGAlgebra& e = *ctx.end.algebra;
  const DGAlgebra& el = *ctx_lambda.end.algebra;

  std::vector<DGModuleTag> left_tags;
  std::vector<DGModuleTag> right_tags;
  for (const auto& t : h.tags()) {
    left_tags.push_back(DGModuleTag{t.cohom, t.internal, t.source});
    right_tags.push_back(DGModuleTag{t.cohom, t.internal, t.target});
  }
  std::vector<Matrix> left;
  for (std::size_t f = 0; f < e.dim(); ++f) {
    Matrix act(h.dim(), h.dim());
    Matrix tf = translate_map(ctx, k, ctx.end.hom.map(f));
    for (std::size_t j = 0; j < h.dim(); ++j) {
      if (h.tags()[j].source != e.tag(f).target) continue;
      Matrix comp = tf * h.map(j);
      if (comp.is_zero()) continue;
      act.set_column(j, h.coordinates(comp, e.tag(f).cohom + h.tags()[j].cohom, e.tag(f).internal + h.tags()[j].internal));
    }
    left.push_back(std::move(act));
  }
  std::vector<Matrix> right;
  for (std::size_t g = 0; g < el.dim(); ++g) {
    Matrix act(h.dim(), h.dim());
    for (std::size_t j = 0; j < h.dim(); ++j) {
      if (h.tags()[j].target != el.tag(g).source) continue;
      Matrix comp = h.map(j) * ctx_lambda.end.hom.map(g);
      if (comp.is_zero()) continue;
      act.set_column(j, h.coordinates(comp, h.tags()[j].cohom + el.tag(g).cohom, h.tags()[j].internal + el.tag(g).internal));
    }
    right.push_back(std::move(act));
  }
  k.left = DGModule(ctx.end.algebra, std::move(left_tags), h.differential(), std::move(left), Side::left);
  k.right = DGModule(ctx_lambda.end.algebra, std::move(right_tags), h.differential(), std::move(right));
  return k;
}

CertifiedModule dg_translate(const DualityContext& ctx, const TranslationKernel& k, const CertifiedModule& n) {
  if (n.certificate.empty()) throw DualityError("module carries no generation certificate");
  if (n.module.algebra() != ctx.end.algebra) throw DualityError("module is not over this context's End(K)");
  TensorBack t = dg_tensor(n.module, k.left, k.right);
  return CertifiedModule{std::move(t.module), "T(" + n.certificate + ")"};
}

CertifiedModule dg_translate(const DualityContext& ctx, const DualityContext& ctx_lambda, const WallDatum& w,
                             const CertifiedModule& n) {
  return dg_translate(ctx, translation_kernel(ctx, ctx_lambda, w), n);
}

// --------------------------------------------------------- idempotent square

IdempotentSquareReport verify_idempotent_square(const DualityContext& ctx, const DualityContext& ctx_lambda,
                                                const WallDatum& w) {
  IdempotentSquareReport r;
  const GradedAlgebra& dual = *ctx.dual;
  std::vector<int> kill_dual;
  for (int v : w.kill) kill_dual.push_back(dual.quiver().vertex_index(w.regular->quiver().vertices().at(v)));
  IdempotentQuotient q;
  try {
    q = quotient_by_idempotents(dual, kill_dual);
  } catch (const ZeroRingError&) {
    r.zero_quotient = true;
    r.failure = "every vertex is killed; the quotient is zero";
    return r;
  }
  r.quotient_dims = q.quotient.graded_dims();
  std::vector<std::size_t> all = dual.graded_dims();
  for (std::size_t d = 0; d < all.size(); ++d) r.kernel_dims.push_back(all[d] - (d < r.quotient_dims.size() ? r.quotient_dims[d] : 0));

  TranslationKernel k = translation_kernel(ctx, ctx_lambda, w);
  EndAlgebra endt = end_dg_algebra(k.tk, k.tk_labels, w.regular->quiver().vertices());
  const DGAlgebra& et = *endt.algebra;
  DGCohomology h(regular_dg_module(endt.algebra));
  const std::size_t tdim = total_offsets(k.tk).back();

  std::vector<SparseVector> images(dual.dim());
  Matrix phi(h.dim(), dual.dim());
  for (std::size_t b = 0; b < dual.dim(); ++b) {
    Matrix total(tdim, tdim);
    for (const auto& [f, c] : ctx.representatives[b]) total += translate_map(ctx, k, ctx.end.hom.map(f)) * c;
    const int deg = dual.element(b).degree;
    Vector coords = endt.hom.coordinates(total, deg, -deg);
    phi.set_column(b, h.class_of(coords));
    images[b] = to_sparse(coords);
  }
  r.surjective = rank(phi) == h.dim();
  Matrix ker_q = kernel_basis(q.surjection);
  r.kernel_matches = rank(phi) + ker_q.cols() == dual.dim() && (phi * ker_q).is_zero();

  // The induced map from the quotient: bijective and multiplicative.
  const GradedAlgebra& qa = q.quotient;
  std::optional<Matrix> lifts = solve(q.surjection, Matrix::identity(qa.dim()));
  if (!lifts) {
    r.failure = "quotient map is not surjective";
    return r;
  }
  Matrix phi_q = phi * *lifts;
  bool ok = phi_q.rows() == phi_q.cols() && rank(phi_q) == qa.dim();
  std::vector<SparseVector> lifted(qa.dim());
  for (std::size_t x = 0; x < qa.dim(); ++x) {
    for (std::size_t b = 0; b < dual.dim(); ++b) {
      if (!(*lifts)(b, x).is_zero()) axpy(lifted[x], (*lifts)(b, x), images[b]);
    }
  }
  for (std::size_t x = 0; ok && x < qa.dim(); ++x) {
    for (std::size_t y = 0; ok && y < qa.dim(); ++y) {
      Vector lhs = h.class_of(to_dense(et.multiply(lifted[x], lifted[y]), et.dim()));
      Vector rhs(h.dim());
      for (const auto& [z, c] : qa.product(x, y)) {
        for (std::size_t i = 0; i < h.dim(); ++i) rhs[i] += c * phi_q(i, z);
      }
      ok = lhs == rhs;
    }
  }
  if (!ok) r.failure = "induced map on the quotient is not a multiplicative bijection";
  bool iso = w.parabolic && find_isomorphism(qa, *w.parabolic).has_value();
  if (ok && !iso) r.failure = "quotient of the dual is not isomorphic to the parabolic quotient";
  r.quotient_matches = ok && iso;
  if (!r.surjective) r.failure = "induced map is not surjective";
  else if (!r.kernel_matches) r.failure = "kernel is not the ideal of the killed idempotents";
  return r;
}

// -------------------------------------------------------------- test objects

std::vector<TestObject> simple_objects(const AlgebraPtr& a) {
  std::vector<TestObject> out;
  for (int v = 0; v < a->vertex_count(); ++v) {
    out.push_back({"simple " + a->quiver().vertices()[v], single_term_complex(simple_module(a, v))});
  }
  return out;
}

std::vector<TestObject> projective_objects(const AlgebraPtr& a) {
  std::vector<TestObject> out;
  for (int v = 0; v < a->vertex_count(); ++v) {
    out.push_back({"projective " + a->quiver().vertices()[v], single_term_complex(projective_module(a, v))});
  }
  return out;
}

std::vector<TestObject> seeded_cones(const DualityContext& ctx, std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  const int n = ctx.algebra->vertex_count();
  std::vector<TestObject> out;
  for (int trial = 0; trial < count; ++trial) {
    const int v = static_cast<int>(rng() % n);
    const int w = static_cast<int>(rng() % n);
    const int t = static_cast<int>(rng() % 3) - 1;
    const ComplexOfModules src = twist_complex(ctx.koszul.per_vertex[v].complex, t);
    const ComplexOfModules& dst = ctx.koszul.per_vertex[w].complex;
    HomComplex h(src, dst);
    const std::vector<std::size_t> so = total_offsets(src);
    const std::vector<std::size_t> dof = total_offsets(dst);
    Matrix total(dof.back(), so.back());
    if (h.has_bidegree(0, 0)) {
      const auto& block = h.block(0, 0);
      Matrix d(h.dim(), block.size());
      for (std::size_t j = 0; j < block.size(); ++j) d.set_column(j, h.differential().column(block[j]));
      Matrix ker = kernel_basis(d);
      for (std::size_t col = 0; col < ker.cols(); ++col) {
        const Scalar c(static_cast<long long>(rng() % 5) - 2);
        for (std::size_t j = 0; j < block.size(); ++j) {
          if (!ker(j, col).is_zero()) total += h.map(block[j]) * (c * ker(j, col));
        }
      }
    }
    ChainMap f;
    for (int p = std::max(src.lowest, dst.lowest); p <= std::min(src.highest(), dst.highest()); ++p) {
      Matrix b = block_of(total, dof[p - dst.lowest], dof[p - dst.lowest + 1], so[p - src.lowest], so[p - src.lowest + 1]);
      if (b.rows() > 0 && b.cols() > 0) f.components[p] = std::move(b);
    }
    const auto& names = ctx.algebra->quiver().vertices();
    out.push_back({"cone " + std::to_string(trial) + ": K_" + names[v] + "<" + std::to_string(t) + "> -> K_" + names[w],
                   cone_of_complexes(src, dst, f)});
  }
  return out;
}

// ------------------------------------------------------------ square check

SquareReport verify_square(const DualityContext& ctx, const DualityContext& ctx_lambda, const WallDatum& w,
                           const std::vector<TestObject>& testset) {
  SquareReport report;
  TranslationKernel k = translation_kernel(ctx, ctx_lambda, w);
  std::size_t agreeing = 0;
  for (const auto& obj : testset) {
    SquareEntry e;
    e.id = obj.id;
    CertifiedModule t = dg_translate(ctx, k, rhom(ctx, obj.complex).certified);
    DGCohomology h(t.module);
    for (const auto& tag : h.tags()) ++e.via_dual[{tag.cohom + tag.internal, -tag.internal, matched_vertex(w, tag.vertex)}];
    for (const auto& [key, d] : koszul_duality(ctx_lambda, translate(w, obj.complex)).table()) {
      e.via_translation[{std::get<0>(key), std::get<1>(key), matched_vertex(w, std::get<2>(key))}] += d;
    }
    e.agree = e.via_dual == e.via_translation;
    agreeing += e.agree ? 1 : 0;
    report.entries.push_back(std::move(e));
  }
  report.all_agree = agreeing == testset.size();
  report.summary = std::to_string(agreeing) + " of " + std::to_string(testset.size()) + " objects agree";
  return report;
}

}  // namespace koszulkit
