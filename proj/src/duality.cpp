#include "koszulkit/duality.hpp"

#include <algorithm>

namespace koszulkit {

namespace {

int parity_sign(int n) { return (n % 2 == 0) ? 1 : -1; }

std::vector<int> summand_labels(const KoszulComplex& k) {
  std::vector<int> labels;
  for (int p = k.length(); p >= 0; --p) {
    for (std::size_t i = 0; i < k.free_terms[p].dim(); ++i) {
      labels.push_back(k.summand[p][k.free_terms[p].origin(i).first]);
    }
  }
  return labels;
}

// Cocycle of E representing one Ext basis element.
SparseVector ext_cocycle(const DualityContext& ctx, const ExtBasisElement& z, PivotOrder order) {
  if (z.degree == 0) return ctx.end.algebra->idempotent(z.target);
  const KoszulComplex& k = ctx.koszul;
  const int len = k.length();
  std::vector<std::size_t> off = total_offsets(k.complex);
  std::vector<Matrix> y = lift_ext_class(k.per_vertex[z.target], k.per_vertex[z.source], z.degree, z.generator, order);
  Matrix total(off.back(), off.back());
  for (std::size_t p = 0; p < y.size(); ++p) {
    const int from = z.degree + static_cast<int>(p);
    const std::size_t row0 = off[len - p] + k.offset[p][z.source];
    const std::size_t col0 = off[len - from] + k.offset[from][z.target];
    for (std::size_t i = 0; i < y[p].rows(); ++i) {
      for (std::size_t j = 0; j < y[p].cols(); ++j) {
        if (!y[p](i, j).is_zero()) total(row0 + i, col0 + j) = y[p](i, j);
      }
    }
  }
  return to_sparse(ctx.end.hom.coordinates(total, z.degree, -z.internal));
}

std::vector<SparseVector> dual_representatives(const DualityContext& ctx, PivotOrder order) {
  std::vector<SparseVector> cocycles;
  for (const auto& z : ctx.ext.ext_basis) cocycles.push_back(ext_cocycle(ctx, z, order));
  std::vector<SparseVector> out;
  for (std::size_t b = 0; b < ctx.dual->dim(); ++b) {
    SparseVector rep;
    for (std::size_t i = 0; i < ctx.ext.ext_basis.size(); ++i) {
      if (!ctx.ext.to_ext(i, b).is_zero()) axpy(rep, ctx.ext.to_ext(i, b), cocycles[i]);
    }
    out.push_back(std::move(rep));
  }
  return out;
}

void verify_representatives(const DualityContext& ctx, const std::vector<SparseVector>& reps) {
  const DGAlgebra& e = *ctx.end.algebra;
  const GradedAlgebra& d = *ctx.dual;
  const DGCohomology& h = ctx.end_cohomology;
  const int top = ctx.koszul.length();
  Matrix classes(h.dim(), d.dim());
  for (std::size_t b = 0; b < d.dim(); ++b) {
    Vector v = to_dense(reps[b], e.dim());
    if (!to_sparse(e.differential().apply(v)).empty()) {
      throw DualityError("representative is not a cocycle");
    }
    classes.set_column(b, h.class_of(v));
  }
  if (rank(classes) != d.dim()) throw DualityError("representatives are not independent in cohomology");
  if (!ctx.truncated && d.dim() != h.dim()) throw DualityError("cohomology of End(K) differs from the Ext algebra");
  for (std::size_t x = 0; x < d.dim(); ++x) {
    for (std::size_t y = 0; y < d.dim(); ++y) {
      if (d.element(x).degree + d.element(y).degree > top) continue;
      Vector lhs = h.class_of(to_dense(e.multiply(reps[x], reps[y]), e.dim()));
      Vector rhs(h.dim());
      for (const auto& [b, c] : d.product(x, y)) {
        for (std::size_t i = 0; i < h.dim(); ++i) rhs[i] += c * classes(i, b);
      }
      if (lhs != rhs) throw DualityError("Yoneda products do not match products in End(K)");
    }
  }
}

std::string vertex_name(const DualityContext& ctx, int w) { return ctx.algebra->quiver().vertices().at(w); }

}  // namespace

DualityContext make_context(const AlgebraPtr& a, int bound, ContextOptions options) {
  DualityContext ctx;
  ctx.algebra = a;
  ctx.bound = bound;
  ctx.certificate = is_koszul(a, bound);
  if (!ctx.certificate.koszul) {
    throw DualityError("algebra is not Koszul within bound " + std::to_string(bound) + " (fails at homological degree " +
                       std::to_string(ctx.certificate.failed_degree) + ")");
  }
  ctx.koszul = koszul_complex(a, bound);
  ctx.truncated = ctx.koszul.truncated;
  if (ctx.truncated && !options.allow_truncated) {
    throw DualityError("resolution is cut off by bound " + std::to_string(bound) + "; the Koszul complex is not finite");
  }
  ctx.labels = summand_labels(ctx.koszul);
  ctx.end = end_dg_algebra(ctx.koszul.complex, ctx.labels, a->quiver().vertices());
  ctx.algebra_dg = dg_from_graded(a);
  ctx.k_right = dg_module_from_complex(ctx.koszul.complex, ctx.algebra_dg);
  ctx.ext = ext_algebra(a, bound);
  ctx.dual = std::make_shared<GradedAlgebra>(ctx.ext.algebra);
  ctx.dual_dg = dg_from_graded(ctx.dual, 1, -1);
  ctx.end_cohomology = DGCohomology(regular_dg_module(ctx.end.algebra));
  ctx.representatives = dual_representatives(ctx, PivotOrder::first);
  ctx.representatives_alt = dual_representatives(ctx, PivotOrder::last);
  verify_representatives(ctx, ctx.representatives);
  verify_representatives(ctx, ctx.representatives_alt);
  return ctx;
}

// ---------------------------------------------------------------- RHom

RHomModule rhom(const DualityContext& ctx, const ComplexOfModules& q) {
  RHomModule r;
  r.target = q;
  r.hom = HomComplex(ctx.koszul.complex, q, ctx.labels, {});
  const HomComplex& h = r.hom;
  const DGAlgebra& e = *ctx.end.algebra;
  const HomComplex& eh = ctx.end.hom;
  std::vector<DGModuleTag> tags;
  for (const auto& t : h.tags()) tags.push_back(DGModuleTag{t.cohom, t.internal, t.target});
  std::vector<Matrix> actions;
  for (std::size_t f = 0; f < e.dim(); ++f) {
    Matrix act(h.dim(), h.dim());
    for (std::size_t j = 0; j < h.dim(); ++j) {
      if (h.tags()[j].target != e.tag(f).source) continue;
      Matrix comp = h.map(j) * eh.map(f);
      if (comp.is_zero()) continue;
      act.set_column(j, h.coordinates(comp, h.tags()[j].cohom + e.tag(f).cohom, h.tags()[j].internal + e.tag(f).internal));
    }
    actions.push_back(std::move(act));
  }
  r.certified.module = DGModule(ctx.end.algebra, std::move(tags), h.differential(), std::move(actions));
  r.certified.certificate = "Hom(K, complex in degrees " + std::to_string(q.lowest) + ".." + std::to_string(q.highest()) + ")";
  return r;
}

DGMap rhom_map(const DualityContext&, const RHomModule& from, const RHomModule& to, const ChainMap& g) {
  if (!is_chain_map(from.target, to.target, g)) throw DualityError("rhom_map needs a chain map");
  std::vector<std::size_t> fo = total_offsets(from.target);
  std::vector<std::size_t> to_off = total_offsets(to.target);
  Matrix total(to_off.back(), fo.back());
  for (const auto& [p, m] : g.components) {
    if (p < from.target.lowest || p > from.target.highest() || p < to.target.lowest || p > to.target.highest()) continue;
    const std::size_t r0 = to_off[p - to.target.lowest];
    const std::size_t c0 = fo[p - from.target.lowest];
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) {
        if (!m(i, j).is_zero()) total(r0 + i, c0 + j) = m(i, j);
      }
    }
  }
  Matrix out(to.hom.dim(), from.hom.dim());
  for (std::size_t j = 0; j < from.hom.dim(); ++j) {
    out.set_column(j, to.hom.coordinates(total * from.hom.map(j), from.hom.tags()[j].cohom, from.hom.tags()[j].internal));
  }
  return DGMap{from.certified.module, to.certified.module, std::move(out), 0, 0};
}

CertifiedModule generator(const DualityContext& ctx, int w) {
  RHomModule r = rhom(ctx, ctx.koszul.per_vertex.at(w).complex);
  r.certified.certificate = "Hom(K, K_" + vertex_name(ctx, w) + ")";
  return r.certified;
}

CertifiedModule regular(const DualityContext& ctx) {
  std::string cert = "E = ";
  for (int w = 0; w < ctx.algebra->vertex_count(); ++w) cert += (w ? " + " : "") + std::string("Hom(K, K_") + vertex_name(ctx, w) + ")";
  return CertifiedModule{regular_dg_module(ctx.end.algebra), cert};
}

CertifiedModule certified_shift(const CertifiedModule& m, int k) {
  return CertifiedModule{shift(m.module, k), "(" + m.certificate + ")[" + std::to_string(k) + "]"};
}

CertifiedModule certified_twist(const CertifiedModule& m, int t) {
  return CertifiedModule{twist(m.module, t), "(" + m.certificate + ")<" + std::to_string(t) + ">"};
}

CertifiedModule certified_sum(const std::vector<CertifiedModule>& parts) {
  std::vector<DGModule> ms;
  std::string cert;
  for (const auto& p : parts) {
    ms.push_back(p.module);
    cert += (cert.empty() ? "" : " + ") + p.certificate;
  }
  return CertifiedModule{dg_direct_sum(ms), cert};
}

CertifiedModule certified_cone(const CertifiedModule& m, const CertifiedModule& n, const Matrix& f) {
  DGCone c = cone(DGMap{m.module, n.module, f, 0, 0});
  return CertifiedModule{c.module, "cone(" + m.certificate + " -> " + n.certificate + ")"};
}

// -------------------------------------------------------------- tensor back

TensorBack dg_tensor(const DGModule& nm, const DGModule& k, const DGModule& ka) {
  if (nm.side() != Side::right || k.side() != Side::left || ka.side() != Side::right || nm.algebra() != k.algebra()) {
    throw std::invalid_argument("dg_tensor needs a right E-module and an (E, B)-bimodule");
  }
  if (k.dim() != ka.dim() || !(k.differential() == ka.differential())) {
    throw std::invalid_argument("bimodule sides disagree");
  }
  const DGAlgebra& e = *k.algebra();
  using Key = std::tuple<int, int, int>;
  std::map<Key, std::vector<std::pair<std::size_t, std::size_t>>> blocks;
  std::map<std::pair<std::size_t, std::size_t>, std::pair<Key, std::size_t>> where;
  for (std::size_t m = 0; m < nm.dim(); ++m) {
    for (std::size_t i = 0; i < k.dim(); ++i) {
      if (nm.tag(m).vertex != k.tag(i).vertex) continue;
      Key key{nm.tag(m).cohom + k.tag(i).cohom, nm.tag(m).internal + k.tag(i).internal, ka.tag(i).vertex};
      auto& list = blocks[key];
      where[{m, i}] = {key, list.size()};
      list.emplace_back(m, i);
    }
  }
  std::map<Key, std::vector<Vector>> relations;
  for (std::size_t f = 0; f < e.dim(); ++f) {
    const Matrix& nf = nm.action(f);
    const Matrix& kf = k.action(f);
    for (std::size_t m = 0; m < nm.dim(); ++m) {
      if (nm.tag(m).vertex != e.tag(f).source) continue;
      for (std::size_t i = 0; i < k.dim(); ++i) {
        if (k.tag(i).vertex != e.tag(f).target) continue;
        Key key{nm.tag(m).cohom + e.tag(f).cohom + k.tag(i).cohom, nm.tag(m).internal + e.tag(f).internal + k.tag(i).internal,
                ka.tag(i).vertex};
        auto bit = blocks.find(key);
        if (bit == blocks.end()) continue;
        Vector rel(bit->second.size());
        bool zero = true;
        for (std::size_t m2 = 0; m2 < nm.dim(); ++m2) {
          if (nf(m2, m).is_zero()) continue;
          rel[where.at({m2, i}).second] += nf(m2, m);
          zero = false;
        }
        for (std::size_t i2 = 0; i2 < k.dim(); ++i2) {
          if (kf(i2, i).is_zero()) continue;
          rel[where.at({m, i2}).second] -= kf(i2, i);
          zero = false;
        }
        if (!zero) relations[key].push_back(std::move(rel));
      }
    }
  }
  TensorBack out;
  std::vector<DGModuleTag> tags;
  for (const auto& [key, pairs] : blocks) {
    LinearQuotient lq = linear_quotient(relations[key], pairs.size());
    const std::size_t base = tags.size();
    for (std::size_t kept : lq.kept) {
      tags.push_back(DGModuleTag{std::get<0>(key), std::get<1>(key), std::get<2>(key)});
      out.representatives.push_back(pairs[kept]);
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      SparseVector img;
      for (const auto& [q, c] : lq.image[i]) img.emplace_back(base + q, c);
      out.image[pairs[i]] = std::move(img);
    }
  }
  auto image_of = [&](std::size_t m, std::size_t i) -> const SparseVector* {
    auto it = out.image.find({m, i});
    return it == out.image.end() ? nullptr : &it->second;
  };
  const std::size_t dim = tags.size();
  Matrix d(dim, dim);
  for (std::size_t b = 0; b < dim; ++b) {
    const auto [m, i] = out.representatives[b];
    SparseVector v;
    for (std::size_t m2 = 0; m2 < nm.dim(); ++m2) {
      if (nm.differential()(m2, m).is_zero()) continue;
      if (const SparseVector* img = image_of(m2, i)) axpy(v, nm.differential()(m2, m), *img);
    }
    const Scalar sign(parity_sign(nm.tag(m).cohom));
    for (std::size_t i2 = 0; i2 < k.dim(); ++i2) {
      if (k.differential()(i2, i).is_zero()) continue;
      if (const SparseVector* img = image_of(m, i2)) axpy(v, sign * k.differential()(i2, i), *img);
    }
    for (const auto& [r, c] : v) d(r, b) = c;
  }
  std::vector<Matrix> actions;
  for (std::size_t a = 0; a < ka.algebra()->dim(); ++a) {
    Matrix act(dim, dim);
    const Matrix& ra = ka.action(a);
    for (std::size_t b = 0; b < dim; ++b) {
      const auto [m, i] = out.representatives[b];
      SparseVector v;
      for (std::size_t i2 = 0; i2 < ka.dim(); ++i2) {
        if (ra(i2, i).is_zero()) continue;
        if (const SparseVector* img = image_of(m, i2)) axpy(v, ra(i2, i), *img);
      }
      for (const auto& [r, c] : v) act(r, b) = c;
    }
    actions.push_back(std::move(act));
  }
  out.module = DGModule(ka.algebra(), std::move(tags), std::move(d), std::move(actions));
  return out;
}

TensorBack tensor_back(const DualityContext& ctx, const CertifiedModule& n) {
  if (n.module.algebra() != ctx.end.algebra || n.module.side() != Side::right) {
    throw DualityError("tensor_back needs a certified right module over this context's End(K)");
  }
  return dg_tensor(n.module, ctx.end.evaluation, ctx.k_right);
}

// ------------------------------------------------------------- psi and phi

NaturalMap psi(const DualityContext& ctx, const ComplexOfModules& q) {
  RHomModule r = rhom(ctx, q);
  TensorBack t = tensor_back(ctx, r.certified);
  DGModule target = dg_module_from_complex(q, ctx.algebra_dg);
  Matrix m(target.dim(), t.module.dim());
  for (std::size_t b = 0; b < t.module.dim(); ++b) {
    const auto [f, i] = t.representatives[b];
    m.set_column(b, r.hom.map(f).column(i));
  }
  NaturalMap out{DGMap{t.module, target, std::move(m), 0, 0}, {}};
  if (std::string e = validate_dg_map(out.map); !e.empty()) throw DualityError("psi is not a strict map: " + e);
  out.certificate = is_quasi_iso(out.map);
  return out;
}

NaturalMap phi(const DualityContext& ctx, const CertifiedModule& n) {
  TensorBack t = tensor_back(ctx, n);
  ComplexOfModules tc = complex_from_dg_module(t.module, ctx.algebra);
  // complex_from_dg_module groups basis vectors by cohomological degree, stably.
  std::vector<std::size_t> order(t.module.dim());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return t.module.tag(x).cohom < t.module.tag(y).cohom; });
  std::vector<std::size_t> position(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;

  RHomModule r = rhom(ctx, tc);
  const std::size_t ktotal = ctx.labels.size();
  Matrix m(r.hom.dim(), n.module.dim());
  for (std::size_t j = 0; j < n.module.dim(); ++j) {
    Matrix total(t.module.dim(), ktotal);
    for (std::size_t i = 0; i < ktotal; ++i) {
      auto it = t.image.find({j, i});
      if (it == t.image.end()) continue;
      for (const auto& [b, c] : it->second) total(position[b], i) = c;
    }
    m.set_column(j, r.hom.coordinates(total, n.module.tag(j).cohom, n.module.tag(j).internal));
  }
  NaturalMap out{DGMap{n.module, r.certified.module, std::move(m), 0, 0}, {}};
  if (std::string e = validate_dg_map(out.map); !e.empty()) throw DualityError("phi is not a strict map: " + e);
  out.certificate = is_quasi_iso(out.map);
  return out;
}

// ------------------------------------------------------------ totalization

DGModule totalize(const ComplexOfModules& p, const DGAlgebraPtr& over) {
  if (over->dim() != p.algebra->dim()) throw std::invalid_argument("DG algebra does not match the complex's algebra");
  std::vector<DGModuleTag> tags;
  for (std::size_t k = 0; k < p.terms.size(); ++k) {
    const int i = p.lowest + static_cast<int>(k);
    for (const auto& t : p.terms[k].tags()) tags.push_back(DGModuleTag{i + t.degree, -t.degree, t.vertex});
  }
  std::vector<Matrix> actions;
  for (std::size_t b = 0; b < over->dim(); ++b) {
    Matrix act(tags.size(), tags.size());
    std::vector<std::size_t> off = total_offsets(p);
    for (std::size_t k = 0; k < p.terms.size(); ++k) {
      const Matrix& r = p.terms[k].basis_action(b);
      for (std::size_t i = 0; i < r.rows(); ++i) {
        for (std::size_t j = 0; j < r.cols(); ++j) {
          if (!r(i, j).is_zero()) act(off[k] + i, off[k] + j) = r(i, j);
        }
      }
    }
    actions.push_back(std::move(act));
  }
  return DGModule(over, std::move(tags), total_differential(p), std::move(actions));
}

DGModule totalize_by_cones(const ComplexOfModules& p, const DGAlgebraPtr& over) {
  const int top = p.highest();
  DGModule c = shift(totalize(single_term_complex(p.term(top), 0), over), -top);
  std::size_t last_dim = p.term(top).dim();
  for (int i = top - 1; i >= p.lowest; --i) {
    DGModule m = shift(totalize(single_term_complex(p.term(i), 0), over), -i - 1);
    Matrix u(c.dim(), m.dim());
    const Matrix d = p.differential(i);
    const std::size_t row0 = c.dim() - last_dim;
    for (std::size_t r = 0; r < d.rows(); ++r) {
      for (std::size_t s = 0; s < d.cols(); ++s) {
        if (!d(r, s).is_zero()) u(row0 + r, s) = d(r, s);
      }
    }
    c = cone(DGMap{m, c, std::move(u), 0, 0}).module;
    last_dim = p.term(i).dim();
  }
  return c;
}

SigmaIso sigma_twist_iso(const ComplexOfModules& p, const DGAlgebraPtr& over) {
  DGModule source = totalize(twist_complex(p, 1), over);
  DGModule target = shift(twist(totalize(p, over), -1), -1);
  Matrix s(source.dim(), source.dim());
  std::vector<std::size_t> off = total_offsets(p);
  for (std::size_t k = 0; k < p.terms.size(); ++k) {
    const int i = p.lowest + static_cast<int>(k);
    for (std::size_t j = off[k]; j < off[k + 1]; ++j) s(j, j) = parity_sign(i);
  }
  SigmaIso out{DGMap{source, target, std::move(s), 0, 0}, false, {}};
  out.failure = validate_dg_map(out.map);
  out.isomorphism = out.failure.empty() && rank(out.map.matrix) == source.dim() && source.dim() == target.dim();
  if (out.failure.empty() && !out.isomorphism) out.failure = "sigma is not invertible";
  return out;
}

// ---------------------------------------------------------- koszul duality

LineTable DualityResult::table() const {
  LineTable out;
  for (const auto& [line, m] : lines) {
    for (const auto& t : m.tags()) ++out[{line, t.degree, t.vertex}];
  }
  return out;
}

DualityResult koszul_duality(const DualityContext& ctx, const ComplexOfModules& q) {
  DualityResult res;
  res.rhom = rhom(ctx, q);
  const DGModule& m = res.rhom.certified.module;
  res.cohomology = DGCohomology(m);
  const DGCohomology& h = res.cohomology;
  for (std::size_t c = 0; c < h.dim(); ++c) res.line_classes[h.tags()[c].cohom + h.tags()[c].internal].push_back(c);

  const GradedAlgebra& d = *ctx.dual;
  std::vector<Matrix> act;
  std::vector<Matrix> act_alt;
  for (std::size_t arrow = 0; arrow < d.quiver().arrows().size(); ++arrow) {
    SparseVector rep;
    SparseVector rep_alt;
    for (const auto& [b, c] : d.arrow_image(static_cast<int>(arrow))) {
      axpy(rep, c, ctx.representatives[b]);
      axpy(rep_alt, c, ctx.representatives_alt[b]);
    }
    act.push_back(induced_action(m, h, rep));
    act_alt.push_back(induced_action(m, h, rep_alt));
  }
  res.representative_independent = true;
  for (const auto& [line, ids] : res.line_classes) {
    std::vector<ModuleTag> tags;
    for (std::size_t c : ids) tags.push_back(ModuleTag{-h.tags()[c].internal, h.tags()[c].vertex});
    std::vector<Matrix> arrows;
    std::vector<Matrix> arrows_alt;
    for (std::size_t arrow = 0; arrow < act.size(); ++arrow) {
      arrows.push_back(act[arrow].submatrix(ids, ids));
      arrows_alt.push_back(act_alt[arrow].submatrix(ids, ids));
      res.representative_independent = res.representative_independent && arrows.back() == arrows_alt.back();
    }
    res.lines.emplace(line, GradedModule(ctx.dual, std::move(tags), std::move(arrows)));
    res.arrow_actions_alt.emplace(line, std::move(arrows_alt));
  }
  if (res.lines.size() <= 1) {
    if (res.lines.empty()) {
      res.strict = single_term_complex(GradedModule(ctx.dual), 0);
    } else {
      res.strict = single_term_complex(res.lines.begin()->second, res.lines.begin()->first);
    }
    res.strict_status = "ok";
  } else {
    res.strict_status = "not strictifiable at this desk scale";
  }
  return res;
}

}  // namespace koszulkit
