#include "koszulkit/koszul.hpp"

#include <set>

namespace koszulkit {

KoszulCertificate is_koszul(const AlgebraPtr& a, int bound) {
  KoszulCertificate cert;
  cert.algebra = a;
  cert.bound = bound;
  Resolution r = minimal_resolution(semisimple_top(a), bound);
  cert.length = r.length();
  cert.truncated = r.truncated;
  cert.koszul = true;
  for (int p = 0; p <= r.length(); ++p) {
    std::map<Generator, std::size_t> table;
    for (const auto& g : r.generators(p)) {
      ++table[g];
      if (g.degree != p && cert.koszul) {
        cert.koszul = false;
        cert.failed_degree = p;
      }
    }
    cert.generators.push_back(std::move(table));
  }
  return cert;
}

KoszulComplex koszul_complex(const AlgebraPtr& a, int bound) {
  KoszulComplex kc;
  kc.algebra = a;
  int len = 0;
  for (int w = 0; w < a->vertex_count(); ++w) {
    kc.per_vertex.push_back(minimal_resolution(simple_module(a, w), bound));
    len = std::max(len, kc.per_vertex.back().length());
    kc.truncated = kc.truncated || kc.per_vertex.back().truncated;
  }
  for (int p = 0; p <= len; ++p) {
    std::vector<Generator> gens;
    std::vector<int> summand;
    std::vector<std::size_t> offset;
    std::size_t dim = 0;
    for (int w = 0; w < a->vertex_count(); ++w) {
      offset.push_back(dim);
      const Resolution& r = kc.per_vertex[w];
      if (p > r.length()) continue;
      for (const auto& g : r.generators(p)) {
        gens.push_back(g);
        summand.push_back(w);
      }
      dim += r.free_terms[p].dim();
    }
    kc.free_terms.emplace_back(a, gens);
    kc.summand.push_back(std::move(summand));
    kc.offset.push_back(std::move(offset));
  }
  kc.complex.algebra = a;
  kc.complex.lowest = -len;
  for (int k = 0; k <= len; ++k) kc.complex.terms.push_back(kc.free_terms[len - k].module());
  for (int k = 0; k < len; ++k) {
    const int p = len - k;  // P_p -> P_{p-1}
    Matrix d(kc.free_terms[p - 1].dim(), kc.free_terms[p].dim());
    for (int w = 0; w < a->vertex_count(); ++w) {
      const Resolution& r = kc.per_vertex[w];
      if (p > r.length()) continue;
      Matrix dw = r.complex.differential(-p);
      for (std::size_t i = 0; i < dw.rows(); ++i) {
        for (std::size_t j = 0; j < dw.cols(); ++j) {
          if (!dw(i, j).is_zero()) d(kc.offset[p - 1][w] + i, kc.offset[p][w] + j) = dw(i, j);
        }
      }
    }
    kc.complex.differentials.push_back(std::move(d));
  }
  return kc;
}

std::vector<Matrix> lift_ext_class(const Resolution& from, const Resolution& to, int n,
                                   std::size_t generator, PivotOrder order) {
  if (to.resolved.dim() != 1) throw AlgebraError("Ext classes are lifted into resolutions of simples");
  const Generator g0 = from.generators(n).at(generator);
  if (g0.vertex != to.resolved.tag(0).vertex) throw AlgebraError("generator vertex does not match the target simple");
  const int shift = to.resolved.tag(0).degree - g0.degree;
  const Scalar sign = (n % 2 == 0) ? Scalar(1) : Scalar(-1);

  std::vector<Matrix> y;
  {
    std::vector<Vector> images(from.generators(n).size(), Vector(to.free_terms[0].dim()));
    images[generator][to.free_terms[0].generator_position(0)] = 1;
    y.push_back(from.free_terms[n].map_from_images(to.free_terms[0].module(), images));
  }
  for (int p = 1; n + p <= from.length(); ++p) {
    const FreeModule& src = from.free_terms[n + p];
    const Matrix d_from = from.complex.differential(-(n + p));
    std::vector<Vector> targets;
    bool all_zero = true;
    for (std::size_t h = 0; h < src.generators().size(); ++h) {
      Vector z = y[p - 1].apply(d_from.column(src.generator_position(h)));
      for (auto& c : z) c *= sign;
      for (const auto& c : z) all_zero = all_zero && c.is_zero();
      targets.push_back(std::move(z));
    }
    if (p > to.length()) {
      if (all_zero) break;
      if (to.truncated) break;
      throw std::logic_error("lift leaves an exact resolution");
    }
    const FreeModule& dst = to.free_terms[p];
    const Matrix d_to = to.complex.differential(-p);
    std::vector<std::size_t> rows(d_to.rows());
    for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = r;
    std::vector<Vector> images;
    for (std::size_t h = 0; h < src.generators().size(); ++h) {
      const Generator& gh = src.generators()[h];
      std::vector<std::size_t> block = dst.module().block(ModuleTag{gh.degree + shift, gh.vertex});
      Vector image(dst.dim());
      bool zero = true;
      for (const auto& c : targets[h]) zero = zero && c.is_zero();
      if (!zero) {
        Matrix rhs = Matrix::from_columns({targets[h]}, targets[h].size());
        auto x = solve(d_to.submatrix(rows, block), rhs, order);
        if (!x) throw std::logic_error("Ext lift has no preimage");
        for (std::size_t i = 0; i < block.size(); ++i) image[block[i]] = (*x)(i, 0);
      }
      images.push_back(std::move(image));
    }
    y.push_back(src.map_from_images(dst.module(), images));
  }
  return y;
}

ExtAlgebra ext_algebra(const AlgebraPtr& a, int bound, PivotOrder order) {
  ExtAlgebra out;
  out.bound = bound;
  KoszulComplex kc = koszul_complex(a, bound);
  out.truncated = kc.truncated;
  const int len = kc.length();
  const int nv = a->vertex_count();

  std::map<std::tuple<int, int, std::size_t>, std::size_t> index;  // (n, target, generator)
  std::vector<std::size_t> degree_start;
  for (int n = 0; n <= len; ++n) {
    degree_start.push_back(out.ext_basis.size());
    for (int v = 0; v < nv; ++v) {
      const Resolution& r = kc.per_vertex[v];
      if (n > r.length()) continue;
      for (std::size_t g = 0; g < r.generators(n).size(); ++g) {
        index[{n, v, g}] = out.ext_basis.size();
        out.ext_basis.push_back(ExtBasisElement{n, r.generators(n)[g].vertex, v, g, r.generators(n)[g].degree});
      }
    }
  }
  degree_start.push_back(out.ext_basis.size());
  const std::size_t nb = out.ext_basis.size();

  out.product.assign(nb * nb, {});
  for (std::size_t yi = 0; yi < nb; ++yi) {
    const ExtBasisElement& y = out.ext_basis[yi];
    const Resolution& from = kc.per_vertex[y.target];
    const Resolution& to = kc.per_vertex[y.source];
    std::vector<Matrix> lift = lift_ext_class(from, to, y.degree, y.generator, order);
    for (std::size_t xi = 0; xi < nb; ++xi) {
      const ExtBasisElement& x = out.ext_basis[xi];
      if (x.target != y.source) continue;
      const int m = x.degree;
      const int total = y.degree + m;
      if (m >= static_cast<int>(lift.size()) || total > from.length()) continue;
      const std::size_t row = to.free_terms[m].generator_position(x.generator);
      SparseVector xy;
      for (std::size_t h = 0; h < from.generators(total).size(); ++h) {
        const Scalar& c = lift[m](row, from.free_terms[total].generator_position(h));
        if (!c.is_zero()) xy.emplace_back(index.at({total, y.target, h}), c);
      }
      std::sort(xy.begin(), xy.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
      out.product[xi * nb + yi] = std::move(xy);
    }
  }

  // Generators: complements of the decomposable part in each degree.
  std::vector<std::string> vertices = a->quiver().vertices();
  std::vector<Arrow> arrows;
  std::vector<std::size_t> arrow_ext;
  std::set<std::string> used;
  for (int n = 1; n <= len; ++n) {
    const std::size_t lo = degree_start[n];
    const std::size_t hi = degree_start[n + 1];
    Subspace span(hi - lo);
    for (std::size_t x = 0; x < nb; ++x) {
      for (std::size_t y = 0; y < nb; ++y) {
        if (out.ext_basis[x].degree < 1 || out.ext_basis[y].degree < 1 ||
            out.ext_basis[x].degree + out.ext_basis[y].degree != n) {
          continue;
        }
        Vector v(hi - lo);
        for (const auto& [k, c] : out.product[x * nb + y]) v[k - lo] = c;
        span.add(v);
      }
    }
    int counter = 0;
    for (std::size_t z = lo; z < hi; ++z) {
      Vector e(hi - lo);
      e[z - lo] = 1;
      if (!span.add(e)) continue;
      const ExtBasisElement& el = out.ext_basis[z];
      std::string label;
      if (n == 1) {
        // Dual of the arrow that the generator's differential picks out.
        const Resolution& r = kc.per_vertex[el.target];
        Vector col = r.complex.differential(-1).column(r.free_terms[1].generator_position(el.generator));
        std::vector<std::size_t> nz;
        for (std::size_t i = 0; i < col.size(); ++i) {
          if (!col[i].is_zero()) nz.push_back(i);
        }
        if (nz.size() == 1 && col[nz[0]].is_one()) {
          const Path& rep = a->element(r.free_terms[0].origin(nz[0]).second).representative;
          if (rep.arrows.size() == 1) label = a->quiver().arrows()[rep.arrows[0]].label + "*";
        }
      }
      if (label.empty() || used.count(label)) {
        label = (n == 1 ? "x" : "y" + std::to_string(n) + "_") + std::to_string(++counter);
        while (used.count(label)) label += "'";
      }
      used.insert(label);
      arrows.push_back(Arrow{label, el.source, el.target, n});
      arrow_ext.push_back(z);
    }
  }
  Quiver q(vertices, arrows);

  auto evaluate_sparse = [&](const Path& p) -> SparseVector {
    SparseVector v;
    if (p.arrows.empty()) {
      const Resolution& r = kc.per_vertex[p.start];
      (void)r;
      return {{index.at({0, p.start, 0}), Scalar(1)}};
    }
    v = {{arrow_ext[p.arrows[0]], Scalar(1)}};
    for (std::size_t k = 1; k < p.arrows.size() && !v.empty(); ++k) {
      SparseVector next;
      for (const auto& [i, c] : v) axpy(next, c, out.product[i * nb + arrow_ext[p.arrows[k]]]);
      v = std::move(next);
    }
    return v;
  };
  const int rel_bound = out.truncated ? len : len + 1;
  auto evaluate = [&](const Path& p) -> Vector {
    const int d = path_degree(q, p);
    if (d > len) return Vector{};
    Vector v(degree_start[d + 1] - degree_start[d]);
    for (const auto& [i, c] : evaluate_sparse(p)) v[i - degree_start[d]] = c;
    return v;
  };
  std::vector<Relation> rels = relations_from_evaluation(q, rel_bound, evaluate);
  out.algebra = build_algebra(q, rels, rel_bound);
  for (int n = 0; n <= len; ++n) {
    if (out.algebra.dim_in_degree(n) != degree_start[n + 1] - degree_start[n]) {
      throw std::logic_error("Ext presentation does not reproduce the Ext dimensions");
    }
  }
  for (const auto& arr : arrows) out.quadratic = out.quadratic && arr.degree == 1;
  for (const auto& r : rels) out.quadratic = out.quadratic && path_degree(q, r.terms.front().second) == 2;

  out.to_ext = Matrix(nb, out.algebra.dim());
  for (std::size_t b = 0; b < out.algebra.dim(); ++b) {
    for (const auto& [i, c] : evaluate_sparse(out.algebra.element(b).representative)) out.to_ext(i, b) = c;
  }
  return out;
}

GradedAlgebra quadratic_dual(const GradedAlgebra& a, int degree_bound) {
  const Quiver& q = a.quiver();
  for (const auto& arr : q.arrows()) {
    if (arr.degree != 1) throw AlgebraError("quadratic dual needs arrows of degree 1");
  }
  std::vector<Path> p2 = paths_of_degree(q, 2);
  std::map<std::vector<int>, std::size_t> idx;
  for (std::size_t i = 0; i < p2.size(); ++i) idx[{p2[i].start, p2[i].arrows[0], p2[i].arrows[1]}] = i;
  std::vector<std::vector<Scalar>> rows;
  for (const auto& r : a.relations()) {
    std::vector<Scalar> row(p2.size());
    for (const auto& [c, p] : r.terms) {
      if (path_degree(q, p) != 2) throw AlgebraError("quadratic dual needs quadratic relations");
      row[idx.at({p.start, p.arrows[0], p.arrows[1]})] += c;
    }
    rows.push_back(std::move(row));
  }
  Matrix rel = rows.empty() ? Matrix(0, p2.size()) : Matrix::from_rows(rows);
  Matrix perp = kernel_basis(rel);

  std::vector<Arrow> arrows;
  for (const auto& arr : q.arrows()) arrows.push_back(Arrow{arr.label + "*", arr.target, arr.source, 1});
  Quiver dual(q.vertices(), arrows);
  std::vector<Relation> out;
  for (std::size_t k = 0; k < perp.cols(); ++k) {
    std::map<std::pair<int, int>, Relation> split;
    for (std::size_t i = 0; i < p2.size(); ++i) {
      if (perp(i, k).is_zero()) continue;
      const Path& p = p2[i];
      Path d{q.arrows()[p.arrows[1]].target, {p.arrows[1], p.arrows[0]}};
      split[{path_source(dual, d), path_target(dual, d)}].terms.emplace_back(perp(i, k), d);
    }
    for (auto& [st, r] : split) out.push_back(std::move(r));
  }
  int bound = degree_bound < 0 ? a.degree_bound() : degree_bound;
  if (!out.empty()) bound = std::max(bound, 2);
  return build_algebra(dual, out, bound);
}

}  // namespace koszulkit
