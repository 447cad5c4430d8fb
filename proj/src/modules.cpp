#include "koszulkit/modules.hpp"

#include <algorithm>
#include <set>

namespace koszulkit {

namespace {

Matrix vertex_projection(const std::vector<ModuleTag>& tags, int vertex) {
  Matrix p(tags.size(), tags.size());
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (tags[i].vertex == vertex) p(i, i) = 1;
  }
  return p;
}

// R_p for a path p = a1 ... ak acting on the right: R_ak ... R_a1 P_source.
Matrix path_action(const Quiver& q, const Path& p, const std::vector<ModuleTag>& tags,
                   const std::vector<Matrix>& arrows) {
  Matrix out = vertex_projection(tags, path_source(q, p));
  for (int a : p.arrows) out = arrows[a] * out;
  return out;
}

bool same_algebra(const AlgebraPtr& x, const AlgebraPtr& y) {
  return x == y || (x && y && *x == *y);
}


}  // namespace

// ---------------------------------------------------------------- GradedModule

GradedModule::GradedModule(AlgebraPtr algebra)
    : GradedModule(std::move(algebra), {}, {}) {}

GradedModule::GradedModule(AlgebraPtr algebra, std::vector<ModuleTag> tags,
                           std::vector<Matrix> arrow_actions)
    : algebra_(std::move(algebra)), tags_(std::move(tags)), arrow_actions_(std::move(arrow_actions)) {
  if (!algebra_) throw AlgebraError("module without an algebra");
  const Quiver& q = algebra_->quiver();
  const std::size_t n = tags_.size();
  if (arrow_actions_.empty() && !q.arrows().empty()) {
    arrow_actions_.assign(q.arrows().size(), Matrix(n, n));
  }
  if (arrow_actions_.size() != q.arrows().size()) {
    throw AlgebraError("module needs one action matrix per arrow");
  }
  for (const auto& t : tags_) {
    if (t.vertex < 0 || t.vertex >= q.vertex_count()) throw AlgebraError("module tag names an unknown vertex");
  }
  for (std::size_t a = 0; a < arrow_actions_.size(); ++a) {
    const Matrix& r = arrow_actions_[a];
    const Arrow& arr = q.arrows()[a];
    if (r.rows() != n || r.cols() != n) throw AlgebraError("arrow action has the wrong size");
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (r(j, i).is_zero()) continue;
        if (tags_[i].vertex != arr.source || tags_[j].vertex != arr.target ||
            tags_[j].degree != tags_[i].degree + arr.degree) {
          throw AlgebraError("action of arrow '" + arr.label + "' is not compatible with the grading");
        }
      }
    }
  }
  for (const auto& rel : algebra_->relations()) {
    Matrix sum(n, n);
    for (const auto& [c, p] : rel.terms) sum += path_action(q, p, tags_, arrow_actions_) * c;
    if (!sum.is_zero()) throw AlgebraError("a relation of the algebra does not act as zero");
  }
  if (algebra_->truncated()) {
    for (const auto& p : paths_of_degree(q, algebra_->degree_bound() + 1)) {
      if (!path_action(q, p, tags_, arrow_actions_).is_zero()) {
        throw AlgebraError("a path above the truncation bound acts nonzero");
      }
    }
  }
  for (const auto& b : algebra_->basis()) {
    basis_actions_.push_back(path_action(q, b.representative, tags_, arrow_actions_));
  }
}

Vector GradedModule::act(const Vector& m, const SparseVector& x) const {
  Vector out(dim());
  for (const auto& [b, c] : x) {
    Vector part = basis_actions_[b].apply(m);
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (!part[i].is_zero()) out[i] += c * part[i];
    }
  }
  return out;
}

std::map<ModuleTag, std::size_t> GradedModule::dims() const {
  std::map<ModuleTag, std::size_t> out;
  for (const auto& t : tags_) ++out[t];
  return out;
}

std::vector<std::size_t> GradedModule::block(const ModuleTag& t) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < tags_.size(); ++i) {
    if (tags_[i] == t) out.push_back(i);
  }
  return out;
}

GradedModule GradedModule::twisted(int t) const {
  std::vector<ModuleTag> tags = tags_;
  for (auto& tag : tags) tag.degree += t;
  return GradedModule(algebra_, std::move(tags), arrow_actions_);
}

GradedModule direct_sum(const std::vector<GradedModule>& parts) {
  if (parts.empty()) throw AlgebraError("direct sum of no modules");
  const AlgebraPtr& a = parts.front().algebra();
  std::vector<ModuleTag> tags;
  for (const auto& p : parts) {
    if (!same_algebra(p.algebra(), a)) throw AlgebraError("direct sum over different algebras");
    tags.insert(tags.end(), p.tags().begin(), p.tags().end());
  }
  const std::size_t n = tags.size();
  std::vector<Matrix> actions(a->quiver().arrows().size(), Matrix(n, n));
  std::size_t offset = 0;
  for (const auto& p : parts) {
    for (std::size_t k = 0; k < actions.size(); ++k) {
      const Matrix& r = p.arrow_action(static_cast<int>(k));
      for (std::size_t i = 0; i < p.dim(); ++i) {
        for (std::size_t j = 0; j < p.dim(); ++j) actions[k](offset + i, offset + j) = r(i, j);
      }
    }
    offset += p.dim();
  }
  return GradedModule(a, std::move(tags), std::move(actions));
}

bool is_homomorphism(const GradedModule& m, const GradedModule& n, const Matrix& f, int shift) {
  if (f.rows() != n.dim() || f.cols() != m.dim()) return false;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < n.dim(); ++j) {
      if (f(j, i).is_zero()) continue;
      if (n.tag(j).vertex != m.tag(i).vertex || n.tag(j).degree != m.tag(i).degree + shift) return false;
    }
  }
  for (std::size_t a = 0; a < m.algebra()->quiver().arrows().size(); ++a) {
    const int ai = static_cast<int>(a);
    if (f * m.arrow_action(ai) != n.arrow_action(ai) * f) return false;
  }
  return true;
}

// ---------------------------------------------------------------- named modules

GradedModule simple_module(const AlgebraPtr& a, int vertex) {
  if (vertex < 0 || vertex >= a->vertex_count()) throw AlgebraError("unknown vertex");
  return GradedModule(a, {ModuleTag{0, vertex}}, {});
}

GradedModule semisimple_top(const AlgebraPtr& a) {
  std::vector<ModuleTag> tags;
  for (int v = 0; v < a->vertex_count(); ++v) tags.push_back(ModuleTag{0, v});
  return GradedModule(a, tags, {});
}

GradedModule projective_module(const AlgebraPtr& a, int vertex, int twist) {
  if (vertex < 0 || vertex >= a->vertex_count()) throw AlgebraError("unknown vertex");
  return FreeModule(a, {Generator{vertex, twist}}).module();
}

GradedModule injective_module(const AlgebraPtr& a, int vertex, int twist) {
  if (vertex < 0 || vertex >= a->vertex_count()) throw AlgebraError("unknown vertex");
  std::vector<std::size_t> elems;
  std::vector<long> position(a->dim(), -1);
  for (std::size_t b = 0; b < a->dim(); ++b) {
    if (a->element(b).target == vertex) {
      position[b] = static_cast<long>(elems.size());
      elems.push_back(b);
    }
  }
  std::vector<ModuleTag> tags;
  for (std::size_t b : elems) tags.push_back(ModuleTag{twist - a->element(b).degree, a->element(b).source});
  const std::size_t n = elems.size();
  std::vector<Matrix> actions;
  for (std::size_t arrow = 0; arrow < a->quiver().arrows().size(); ++arrow) {
    Matrix r(n, n);
    // (b*.a)(c) = b*(a c)
    for (std::size_t col = 0; col < n; ++col) {
      for (std::size_t row = 0; row < n; ++row) {
        SparseVector ac = a->multiply(a->arrow_image(static_cast<int>(arrow)), {{elems[row], Scalar(1)}});
        for (const auto& [k, c] : ac) {
          if (k == elems[col]) r(row, col) = c;
        }
      }
    }
    actions.push_back(std::move(r));
  }
  return GradedModule(a, std::move(tags), std::move(actions));
}

// ---------------------------------------------------------------- FreeModule

FreeModule::FreeModule(AlgebraPtr a, std::vector<Generator> generators)
    : generators_(std::move(generators)) {
  std::vector<std::vector<std::size_t>> starting(a->vertex_count());
  std::vector<std::size_t> local(a->dim());
  for (std::size_t b = 0; b < a->dim(); ++b) {
    auto& list = starting[a->element(b).source];
    local[b] = list.size();
    list.push_back(b);
  }
  std::vector<ModuleTag> tags;
  std::vector<std::size_t> offset;
  for (std::size_t g = 0; g < generators_.size(); ++g) {
    const Generator& gen = generators_[g];
    if (gen.vertex < 0 || gen.vertex >= a->vertex_count()) throw AlgebraError("unknown vertex");
    offset.push_back(tags.size());
    for (std::size_t b : starting[gen.vertex]) {
      if (b == a->idempotent(gen.vertex)) position_.push_back(tags.size());
      origin_.emplace_back(g, b);
      tags.push_back(ModuleTag{gen.degree + a->element(b).degree, a->element(b).target});
    }
  }
  const std::size_t n = tags.size();
  std::vector<Matrix> actions;
  for (std::size_t arrow = 0; arrow < a->quiver().arrows().size(); ++arrow) {
    Matrix r(n, n);
    for (std::size_t col = 0; col < n; ++col) {
      const auto [g, b] = origin_[col];
      for (const auto& [c, v] : a->multiply({{b, Scalar(1)}}, a->arrow_image(static_cast<int>(arrow)))) {
        r(offset[g] + local[c], col) = v;
      }
    }
    actions.push_back(std::move(r));
  }
  module_ = GradedModule(std::move(a), std::move(tags), std::move(actions));
}

Matrix FreeModule::map_from_images(const GradedModule& target, const std::vector<Vector>& images) const {
  Matrix out(target.dim(), dim());
  for (std::size_t col = 0; col < dim(); ++col) {
    const auto [g, b] = origin_[col];
    Vector v = target.basis_action(b).apply(images.at(g));
    for (std::size_t r = 0; r < v.size(); ++r) out(r, col) = v[r];
  }
  return out;
}

// ---------------------------------------------------------------- sub / quotient

Submodule submodule_from_vectors(const GradedModule& ambient, const std::vector<Vector>& vectors) {
  std::vector<ModuleTag> tags;
  for (const auto& v : vectors) {
    std::optional<ModuleTag> t;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i].is_zero()) continue;
      if (t && !(*t == ambient.tag(i))) throw std::logic_error("submodule generator is not homogeneous");
      t = ambient.tag(i);
    }
    if (!t) throw std::logic_error("zero submodule generator");
    tags.push_back(*t);
  }
  Submodule out;
  out.inclusion = Matrix::from_columns(vectors, ambient.dim());
  if (vectors.empty()) out.inclusion = Matrix(ambient.dim(), 0);
  std::vector<Matrix> actions;
  for (std::size_t a = 0; a < ambient.algebra()->quiver().arrows().size(); ++a) {
    if (vectors.empty()) {
      actions.emplace_back(0, 0);
      continue;
    }
    auto r = solve(out.inclusion, ambient.arrow_action(static_cast<int>(a)) * out.inclusion);
    if (!r) throw std::logic_error("vectors do not span a submodule");
    actions.push_back(std::move(*r));
  }
  out.module = GradedModule(ambient.algebra(), std::move(tags), std::move(actions));
  return out;
}

Submodule kernel_submodule(const GradedModule& m, const Matrix& f) {
  std::vector<Vector> vectors;
  for (const auto& [tag, count] : m.dims()) {
    std::vector<std::size_t> cols = m.block(tag);
    std::vector<std::size_t> rows(f.rows());
    for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = r;
    Matrix k = kernel_basis(f.submatrix(rows, cols));
    for (std::size_t c = 0; c < k.cols(); ++c) {
      Vector v(m.dim());
      for (std::size_t i = 0; i < cols.size(); ++i) v[cols[i]] = k(i, c);
      vectors.push_back(std::move(v));
    }
  }
  return submodule_from_vectors(m, vectors);
}

QuotientModule quotient_module(const GradedModule& m, const std::vector<Vector>& vectors) {
  const std::size_t n = m.dim();
  // Closure under the action, split by tag.
  std::map<ModuleTag, Subspace> span;
  std::vector<Vector> queue;
  auto push = [&](const Vector& v) {
    std::map<ModuleTag, Vector> parts;
    for (std::size_t i = 0; i < n; ++i) {
      if (v[i].is_zero()) continue;
      auto [it, fresh] = parts.try_emplace(m.tag(i), Vector(n));
      it->second[i] = v[i];
    }
    for (auto& [t, part] : parts) {
      auto [it, fresh] = span.try_emplace(t, Subspace(n));
      if (it->second.add(part)) queue.push_back(std::move(part));
    }
  };
  for (const auto& v : vectors) push(v);
  while (!queue.empty()) {
    Vector v = std::move(queue.back());
    queue.pop_back();
    for (std::size_t a = 0; a < m.algebra()->quiver().arrows().size(); ++a) {
      push(m.arrow_action(static_cast<int>(a)).apply(v));
    }
  }

  QuotientModule out;
  std::vector<ModuleTag> tags;
  std::vector<SparseVector> image(n);
  std::vector<std::size_t> representative;
  for (const auto& [tag, count] : m.dims()) {
    std::vector<std::size_t> cols = m.block(tag);
    std::vector<Vector> rows;
    if (auto it = span.find(tag); it != span.end()) {
      for (const auto& v : it->second.basis()) {
        Vector local(cols.size());
        for (std::size_t i = 0; i < cols.size(); ++i) local[i] = v[cols[i]];
        rows.push_back(std::move(local));
      }
    }
    LinearQuotient lq = linear_quotient(rows, cols.size());
    const std::size_t base = tags.size();
    for (std::size_t k : lq.kept) {
      tags.push_back(tag);
      representative.push_back(cols[k]);
    }
    for (std::size_t i = 0; i < cols.size(); ++i) {
      for (const auto& [q, c] : lq.image[i]) image[cols[i]].emplace_back(base + q, c);
    }
  }
  out.projection = Matrix(tags.size(), n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [q, c] : image[i]) out.projection(q, i) = c;
  }
  std::vector<Matrix> actions;
  for (std::size_t a = 0; a < m.algebra()->quiver().arrows().size(); ++a) {
    Matrix r(tags.size(), tags.size());
    for (std::size_t k = 0; k < tags.size(); ++k) {
      Vector e(n);
      e[representative[k]] = 1;
      Vector img = out.projection.apply(m.arrow_action(static_cast<int>(a)).apply(e));
      for (std::size_t j = 0; j < img.size(); ++j) r(j, k) = img[j];
    }
    actions.push_back(std::move(r));
  }
  out.module = GradedModule(m.algebra(), std::move(tags), std::move(actions));
  return out;
}

namespace {

// Span of all arrow images, one Subspace per tag.
std::map<ModuleTag, Subspace> radical_by_tag(const GradedModule& m) {
  std::map<ModuleTag, Subspace> rad;
  for (const auto& [tag, count] : m.dims()) rad.emplace(tag, Subspace(m.dim()));
  for (std::size_t a = 0; a < m.algebra()->quiver().arrows().size(); ++a) {
    const Matrix& r = m.arrow_action(static_cast<int>(a));
    for (std::size_t c = 0; c < m.dim(); ++c) {
      Vector col = r.column(c);
      for (std::size_t i = 0; i < col.size(); ++i) {
        if (!col[i].is_zero()) {
          rad.at(m.tag(i)).add(col);
          break;
        }
      }
    }
  }
  return rad;
}

}  // namespace

ProjectiveCover projective_cover(const GradedModule& m) {
  if (m.dim() == 0) throw AlgebraError("projective cover of the zero module");
  auto rad = radical_by_tag(m);
  std::vector<Generator> gens;
  std::vector<Vector> images;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    Vector e(m.dim());
    e[i] = 1;
    if (rad.at(m.tag(i)).add(e)) {
      gens.push_back(Generator{m.tag(i).vertex, m.tag(i).degree});
      images.push_back(std::move(e));
    }
  }
  ProjectiveCover out;
  out.cover = FreeModule(m.algebra(), gens);
  out.map = out.cover.map_from_images(m, images);
  return out;
}

// ---------------------------------------------------------------- complexes

GradedModule ComplexOfModules::term(int p) const {
  if (p < lowest || p > highest()) return GradedModule(algebra);
  return terms[p - lowest];
}

Matrix ComplexOfModules::differential(int p) const {
  if (p >= lowest && p < highest()) return differentials[p - lowest];
  return Matrix(term(p + 1).dim(), term(p).dim());
}

std::size_t ComplexOfModules::total_dim() const {
  std::size_t n = 0;
  for (const auto& t : terms) n += t.dim();
  return n;
}

ComplexOfModules single_term_complex(const GradedModule& m, int degree) {
  return ComplexOfModules{m.algebra(), degree, {m}, {}};
}

std::string validate_complex(const ComplexOfModules& c) {
  if (c.differentials.size() + 1 != c.terms.size() && !(c.terms.empty() && c.differentials.empty())) {
    return "differential count does not match the terms";
  }
  for (int p = c.lowest; p < c.highest(); ++p) {
    if (!is_homomorphism(c.term(p), c.term(p + 1), c.differential(p))) {
      return "differential in degree " + std::to_string(p) + " is not a homomorphism";
    }
    if (p + 1 < c.highest() && !(c.differential(p + 1) * c.differential(p)).is_zero()) {
      return "d^2 != 0 in degree " + std::to_string(p);
    }
  }
  return {};
}

std::map<std::tuple<int, int, int>, std::size_t> complex_cohomology(const ComplexOfModules& c) {
  std::map<std::tuple<int, int, int>, std::size_t> out;
  for (int p = c.lowest; p <= c.highest(); ++p) {
    GradedModule t = c.term(p);
    Matrix out_d = c.differential(p);
    Matrix in_d = c.differential(p - 1);
    std::vector<std::size_t> all_out(out_d.rows());
    for (std::size_t i = 0; i < all_out.size(); ++i) all_out[i] = i;
    std::vector<std::size_t> all_in(in_d.cols());
    for (std::size_t i = 0; i < all_in.size(); ++i) all_in[i] = i;
    for (const auto& [tag, count] : t.dims()) {
      std::vector<std::size_t> b = t.block(tag);
      std::size_t ker = count - rank(out_d.submatrix(all_out, b));
      std::size_t im = rank(in_d.submatrix(b, all_in));
      if (ker > im) out[{p, tag.degree, tag.vertex}] = ker - im;
    }
  }
  return out;
}

ComplexOfModules twist_complex(const ComplexOfModules& c, int t) {
  ComplexOfModules out = c;
  for (auto& m : out.terms) m = m.twisted(t);
  return out;
}

ComplexOfModules shift_complex(const ComplexOfModules& c, int n) {
  ComplexOfModules out = c;
  out.lowest -= n;
  if (n % 2 != 0) {
    for (auto& d : out.differentials) d *= Scalar(-1);
  }
  return out;
}

bool is_chain_map(const ComplexOfModules& c, const ComplexOfModules& d, const ChainMap& f) {
  auto comp = [&](int p) {
    auto it = f.components.find(p);
    return it == f.components.end() ? Matrix(d.term(p).dim(), c.term(p).dim()) : it->second;
  };
  const int lo = std::min(c.lowest, d.lowest) - 1;
  const int hi = std::max(c.highest(), d.highest()) + 1;
  for (int p = lo; p <= hi; ++p) {
    Matrix fp = comp(p);
    if (fp.rows() != d.term(p).dim() || fp.cols() != c.term(p).dim()) return false;
    if (!is_homomorphism(c.term(p), d.term(p), fp)) return false;
    if (comp(p + 1) * c.differential(p) != d.differential(p) * fp) return false;
  }
  return true;
}

ComplexOfModules cone_of_complexes(const ComplexOfModules& m, const ComplexOfModules& n,
                                   const ChainMap& f) {
  const AlgebraPtr& a = n.algebra ? n.algebra : m.algebra;
  const int lo = std::min(n.lowest, m.lowest - 1);
  const int hi = std::max(n.highest(), m.highest() - 1);
  auto comp = [&](int p) {
    auto it = f.components.find(p);
    return it == f.components.end() ? Matrix(n.term(p).dim(), m.term(p).dim()) : it->second;
  };
  ComplexOfModules out{a, lo, {}, {}};
  for (int p = lo; p <= hi; ++p) out.terms.push_back(direct_sum({n.term(p), m.term(p + 1)}));
  for (int p = lo; p < hi; ++p) {
    const std::size_t n0 = n.term(p).dim();
    const std::size_t m0 = m.term(p + 1).dim();
    const std::size_t n1 = n.term(p + 1).dim();
    const std::size_t m1 = m.term(p + 2).dim();
    Matrix d(n1 + m1, n0 + m0);
    Matrix dn = n.differential(p);
    Matrix fm = comp(p + 1);
    Matrix dm = m.differential(p + 1);
    for (std::size_t r = 0; r < n1; ++r) {
      for (std::size_t c = 0; c < n0; ++c) d(r, c) = dn(r, c);
      for (std::size_t c = 0; c < m0; ++c) d(r, n0 + c) = fm(r, c);
    }
    for (std::size_t r = 0; r < m1; ++r) {
      for (std::size_t c = 0; c < m0; ++c) d(n1 + r, n0 + c) = -dm(r, c);
    }
    out.differentials.push_back(std::move(d));
  }
  return out;
}

// ---------------------------------------------------------------- resolutions

Resolution minimal_resolution(const GradedModule& m, int length_bound) {
  if (length_bound < 0) throw AlgebraError("negative length bound");
  Resolution res;
  res.resolved = m;
  std::vector<Matrix> maps;  // maps[p-1]: P_p -> P_{p-1}
  if (m.dim() == 0) {
    res.free_terms.emplace_back(m.algebra(), std::vector<Generator>{});
    res.augmentation = Matrix(0, 0);
  } else {
    ProjectiveCover c0 = projective_cover(m);
    res.free_terms.push_back(c0.cover);
    res.augmentation = c0.map;
    Matrix current = c0.map;
    for (int p = 1;; ++p) {
      Submodule k = kernel_submodule(res.free_terms.back().module(), current);
      if (k.module.dim() == 0) break;
      if (p > length_bound) {
        res.truncated = true;
        break;
      }
      ProjectiveCover c = projective_cover(k.module);
      Matrix d = k.inclusion * c.map;
      res.free_terms.push_back(c.cover);
      maps.push_back(d);
      current = std::move(d);
    }
  }
  const int len = res.length();
  res.complex.algebra = m.algebra();
  res.complex.lowest = -len;
  for (int k = 0; k <= len; ++k) res.complex.terms.push_back(res.free_terms[len - k].module());
  for (int k = 0; k < len; ++k) res.complex.differentials.push_back(maps[len - k - 1]);
  return res;
}

std::string check_minimality(const Resolution& r) {
  for (int p = 1; p <= r.length(); ++p) {
    const FreeModule& src = r.free_terms[p];
    const FreeModule& dst = r.free_terms[p - 1];
    const Matrix d = r.complex.differential(-p);
    bool entries_positive = true;
    for (std::size_t g = 0; g < src.generators().size(); ++g) {
      for (std::size_t h = 0; h < dst.generators().size(); ++h) {
        if (!d(dst.generator_position(h), src.generator_position(g)).is_zero()) entries_positive = false;
      }
    }
    // d tensored with the degree-0 part vanishes iff the image lies in the radical.
    std::vector<Vector> rad;
    const GradedModule& dm = dst.module();
    for (std::size_t a = 0; a < dm.algebra()->quiver().arrows().size(); ++a) {
      const Matrix& act = dm.arrow_action(static_cast<int>(a));
      for (std::size_t c = 0; c < dm.dim(); ++c) rad.push_back(act.column(c));
    }
    Matrix radm = Matrix::from_columns(rad, dm.dim());
    if (rad.empty()) radm = Matrix(dm.dim(), 0);
    const bool tensor_zero = !d.empty() ? solve(radm, d).has_value() : true;
    if (entries_positive != tensor_zero) {
      return "minimality characterizations disagree in degree " + std::to_string(p);
    }
    if (!entries_positive) return "differential has a degree-0 entry in degree " + std::to_string(p);
  }
  return {};
}

bool is_exact_resolution(const Resolution& r) {
  if (!validate_complex(r.complex).empty()) return false;
  if (r.resolved.dim() == 0) return r.free_terms[0].dim() == 0;
  if (rank(r.augmentation) != r.resolved.dim()) return false;
  if (!is_homomorphism(r.free_terms[0].module(), r.resolved, r.augmentation)) return false;
  const int len = r.length();
  std::vector<std::size_t> ranks;  // ranks[p] = rank of the map leaving P_p
  ranks.push_back(rank(r.augmentation));
  for (int p = 1; p <= len; ++p) ranks.push_back(rank(r.complex.differential(-p)));
  if (len >= 1 && !(r.augmentation * r.complex.differential(-1)).is_zero()) return false;
  for (int p = 0; p < len; ++p) {
    if (ranks[p] + ranks[p + 1] != r.free_terms[p].dim()) return false;
  }
  if (!r.truncated && ranks[len] != r.free_terms[len].dim()) return false;
  return true;
}

// ---------------------------------------------------------------- Hom

std::vector<Matrix> hom_space(const GradedModule& m, const GradedModule& n, int shift) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> var;  // (row j, col i) -> variable
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < n.dim(); ++j) {
      if (n.tag(j).vertex == m.tag(i).vertex && n.tag(j).degree == m.tag(i).degree + shift) {
        var.emplace(std::make_pair(j, i), var.size());
      }
    }
  }
  std::vector<Vector> equations;
  const Quiver& q = m.algebra()->quiver();
  for (std::size_t a = 0; a < q.arrows().size(); ++a) {
    const Matrix& rm = m.arrow_action(static_cast<int>(a));
    const Matrix& rn = n.arrow_action(static_cast<int>(a));
    // (f rm - rn f)(r, c) = 0
    for (std::size_t c = 0; c < m.dim(); ++c) {
      if (m.tag(c).vertex != q.arrows()[a].source) continue;
      for (std::size_t r = 0; r < n.dim(); ++r) {
        if (n.tag(r).degree != m.tag(c).degree + q.arrows()[a].degree + shift) continue;
        Vector eq(var.size());
        bool any = false;
        for (std::size_t k = 0; k < m.dim(); ++k) {
          if (rm(k, c).is_zero()) continue;
          if (auto it = var.find({r, k}); it != var.end()) {
            eq[it->second] += rm(k, c);
            any = true;
          }
        }
        for (std::size_t k = 0; k < n.dim(); ++k) {
          if (rn(r, k).is_zero()) continue;
          if (auto it = var.find({k, c}); it != var.end()) {
            eq[it->second] -= rn(r, k);
            any = true;
          }
        }
        if (any) equations.push_back(std::move(eq));
      }
    }
  }
  Matrix sys(equations.size(), var.size());
  for (std::size_t r = 0; r < equations.size(); ++r) {
    for (std::size_t c = 0; c < var.size(); ++c) sys(r, c) = equations[r][c];
  }
  Matrix k = kernel_basis(sys);
  std::vector<Matrix> out;
  for (std::size_t col = 0; col < k.cols(); ++col) {
    Matrix f(n.dim(), m.dim());
    for (const auto& [pos, v] : var) f(pos.first, pos.second) = k(v, col);
    out.push_back(std::move(f));
  }
  return out;
}

// ---------------------------------------------------------------- bimodules

namespace {

Matrix left_path_action(const Quiver& q, const Path& p, const std::vector<BimoduleTag>& tags,
                        const std::vector<Matrix>& left) {
  const std::size_t n = tags.size();
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (tags[i].left == path_target(q, p)) out(i, i) = 1;
  }
  for (auto it = p.arrows.rbegin(); it != p.arrows.rend(); ++it) out = left[*it] * out;
  return out;
}

}  // namespace

Bimodule::Bimodule(AlgebraPtr left, AlgebraPtr right, std::vector<BimoduleTag> tags,
                   std::vector<Matrix> left_actions, std::vector<Matrix> right_actions)
    : left_(std::move(left)),
      right_(std::move(right)),
      tags_(std::move(tags)),
      left_actions_(std::move(left_actions)),
      right_actions_(std::move(right_actions)) {
  const std::size_t n = tags_.size();
  const Quiver& lq = left_->quiver();
  const Quiver& rq = right_->quiver();
  if (left_actions_.empty()) left_actions_.assign(lq.arrows().size(), Matrix(n, n));
  if (right_actions_.empty()) right_actions_.assign(rq.arrows().size(), Matrix(n, n));
  if (left_actions_.size() != lq.arrows().size() || right_actions_.size() != rq.arrows().size()) {
    throw AlgebraError("bimodule needs one action matrix per arrow on each side");
  }
  for (const auto& t : tags_) {
    if (t.left < 0 || t.left >= lq.vertex_count() || t.right < 0 || t.right >= rq.vertex_count()) {
      throw AlgebraError("bimodule tag names an unknown vertex");
    }
  }
  for (std::size_t a = 0; a < left_actions_.size(); ++a) {
    const Arrow& arr = lq.arrows()[a];
    const Matrix& l = left_actions_[a];
    if (l.rows() != n || l.cols() != n) throw AlgebraError("left action has the wrong size");
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (l(j, i).is_zero()) continue;
        if (tags_[i].left != arr.target || tags_[j].left != arr.source ||
            tags_[j].right != tags_[i].right || tags_[j].degree != tags_[i].degree + arr.degree) {
          throw AlgebraError("left action of '" + arr.label + "' is not compatible with the grading");
        }
      }
    }
  }
  for (std::size_t b = 0; b < right_actions_.size(); ++b) {
    const Arrow& arr = rq.arrows()[b];
    const Matrix& r = right_actions_[b];
    if (r.rows() != n || r.cols() != n) throw AlgebraError("right action has the wrong size");
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (r(j, i).is_zero()) continue;
        if (tags_[i].right != arr.source || tags_[j].right != arr.target ||
            tags_[j].left != tags_[i].left || tags_[j].degree != tags_[i].degree + arr.degree) {
          throw AlgebraError("right action of '" + arr.label + "' is not compatible with the grading");
        }
      }
    }
  }
  for (const auto& l : left_actions_) {
    for (const auto& r : right_actions_) {
      if (l * r != r * l) throw AlgebraError("left and right actions do not commute");
    }
  }
  for (const auto& rel : left_->relations()) {
    Matrix sum(n, n);
    for (const auto& [c, p] : rel.terms) sum += left_path_action(lq, p, tags_, left_actions_) * c;
    if (!sum.is_zero()) throw AlgebraError("a left relation does not act as zero");
  }
  // Right relations are checked by the underlying right module.
  (void)right_module();
  for (const auto& b : left_->basis()) {
    left_basis_.push_back(left_path_action(lq, b.representative, tags_, left_actions_));
  }
}

GradedModule Bimodule::right_module() const {
  std::vector<ModuleTag> tags;
  for (const auto& t : tags_) tags.push_back(ModuleTag{t.degree, t.right});
  return GradedModule(right_, std::move(tags), right_actions_);
}

Bimodule regular_bimodule(const AlgebraPtr& a) {
  const std::size_t n = a->dim();
  std::vector<BimoduleTag> tags;
  for (const auto& e : a->basis()) tags.push_back(BimoduleTag{e.degree, e.source, e.target});
  std::vector<Matrix> left;
  std::vector<Matrix> right;
  for (std::size_t arrow = 0; arrow < a->quiver().arrows().size(); ++arrow) {
    Matrix l(n, n);
    Matrix r(n, n);
    const SparseVector& x = a->arrow_image(static_cast<int>(arrow));
    for (std::size_t c = 0; c < n; ++c) {
      for (const auto& [k, v] : a->multiply(x, {{c, Scalar(1)}})) l(k, c) = v;
      for (const auto& [k, v] : a->multiply({{c, Scalar(1)}}, x)) r(k, c) = v;
    }
    left.push_back(std::move(l));
    right.push_back(std::move(r));
  }
  return Bimodule(a, a, std::move(tags), std::move(left), std::move(right));
}

Bimodule quotient_bimodule(const AlgebraPtr& a, const AlgebraPtr& quotient, const Matrix& surjection) {
  const std::size_t n = quotient->dim();
  std::vector<int> to_a;
  for (const auto& name : quotient->quiver().vertices()) to_a.push_back(a->quiver().vertex_index(name));
  std::vector<BimoduleTag> tags;
  for (const auto& e : quotient->basis()) tags.push_back(BimoduleTag{e.degree, to_a[e.source], e.target});
  std::vector<Matrix> left;
  for (std::size_t arrow = 0; arrow < a->quiver().arrows().size(); ++arrow) {
    Vector img = surjection.apply(to_dense(a->arrow_image(static_cast<int>(arrow)), a->dim()));
    SparseVector x = to_sparse(img);
    Matrix l(n, n);
    for (std::size_t c = 0; c < n; ++c) {
      for (const auto& [k, v] : quotient->multiply(x, {{c, Scalar(1)}})) l(k, c) = v;
    }
    left.push_back(std::move(l));
  }
  std::vector<Matrix> right;
  for (std::size_t arrow = 0; arrow < quotient->quiver().arrows().size(); ++arrow) {
    Matrix r(n, n);
    for (std::size_t c = 0; c < n; ++c) {
      for (const auto& [k, v] : quotient->multiply({{c, Scalar(1)}}, quotient->arrow_image(static_cast<int>(arrow)))) {
        r(k, c) = v;
      }
    }
    right.push_back(std::move(r));
  }
  return Bimodule(a, quotient, std::move(tags), std::move(left), std::move(right));
}

namespace {

void require_point_algebra(const AlgebraPtr& b) {
  if (b->vertex_count() != 1 || !b->quiver().arrows().empty()) {
    throw AlgebraError("corner bimodules need a one-vertex algebra without arrows");
  }
}

}  // namespace

Bimodule left_corner_bimodule(const AlgebraPtr& a, int vertex, const AlgebraPtr& b, int twist) {
  require_point_algebra(b);
  std::vector<std::size_t> elems;
  std::vector<long> pos(a->dim(), -1);
  for (std::size_t i = 0; i < a->dim(); ++i) {
    if (a->element(i).target == vertex) {
      pos[i] = static_cast<long>(elems.size());
      elems.push_back(i);
    }
  }
  std::vector<BimoduleTag> tags;
  for (std::size_t i : elems) tags.push_back(BimoduleTag{a->element(i).degree + twist, a->element(i).source, 0});
  const std::size_t n = elems.size();
  std::vector<Matrix> left;
  for (std::size_t arrow = 0; arrow < a->quiver().arrows().size(); ++arrow) {
    Matrix l(n, n);
    for (std::size_t c = 0; c < n; ++c) {
      for (const auto& [k, v] : a->multiply(a->arrow_image(static_cast<int>(arrow)), {{elems[c], Scalar(1)}})) {
        l(static_cast<std::size_t>(pos[k]), c) = v;
      }
    }
    left.push_back(std::move(l));
  }
  return Bimodule(a, b, std::move(tags), std::move(left), {});
}

Bimodule right_corner_bimodule(const AlgebraPtr& a, int vertex, const AlgebraPtr& b, int twist) {
  require_point_algebra(b);
  std::vector<std::size_t> elems;
  std::vector<long> pos(a->dim(), -1);
  for (std::size_t i = 0; i < a->dim(); ++i) {
    if (a->element(i).source == vertex) {
      pos[i] = static_cast<long>(elems.size());
      elems.push_back(i);
    }
  }
  std::vector<BimoduleTag> tags;
  for (std::size_t i : elems) tags.push_back(BimoduleTag{a->element(i).degree + twist, 0, a->element(i).target});
  const std::size_t n = elems.size();
  std::vector<Matrix> right;
  for (std::size_t arrow = 0; arrow < a->quiver().arrows().size(); ++arrow) {
    Matrix r(n, n);
    for (std::size_t c = 0; c < n; ++c) {
      for (const auto& [k, v] : a->multiply({{elems[c], Scalar(1)}}, a->arrow_image(static_cast<int>(arrow)))) {
        r(static_cast<std::size_t>(pos[k]), c) = v;
      }
    }
    right.push_back(std::move(r));
  }
  return Bimodule(b, a, std::move(tags), {}, std::move(right));
}

// ---------------------------------------------------------------- tensor

TensorProduct tensor_with_bimodule(const GradedModule& m, const Bimodule& x) {
  if (!same_algebra(m.algebra(), x.left_algebra())) {
    throw AlgebraError("module and bimodule are over different algebras");
  }
  const std::size_t xd = x.dim();
  const auto& xt = x.tags();
  // Pairs grouped by (degree, right vertex).
  std::map<ModuleTag, std::vector<std::size_t>> blocks;
  std::vector<long> local(m.dim() * xd, -1);
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < xd; ++j) {
      if (m.tag(i).vertex != xt[j].left) continue;
      auto& b = blocks[ModuleTag{m.tag(i).degree + xt[j].degree, xt[j].right}];
      local[i * xd + j] = static_cast<long>(b.size());
      b.push_back(i * xd + j);
    }
  }
  std::map<ModuleTag, std::vector<Vector>> relations;
  const Quiver& q = m.algebra()->quiver();
  for (std::size_t a = 0; a < q.arrows().size(); ++a) {
    const Arrow& arr = q.arrows()[a];
    const Matrix& rm = m.arrow_action(static_cast<int>(a));
    const Matrix& lx = x.left_action(static_cast<int>(a));
    for (std::size_t i = 0; i < m.dim(); ++i) {
      if (m.tag(i).vertex != arr.source) continue;
      for (std::size_t j = 0; j < xd; ++j) {
        if (xt[j].left != arr.target) continue;
        ModuleTag key{m.tag(i).degree + arr.degree + xt[j].degree, xt[j].right};
        auto bit = blocks.find(key);
        if (bit == blocks.end()) continue;
        Vector rel(bit->second.size());
        bool any = false;
        for (std::size_t k = 0; k < m.dim(); ++k) {
          if (rm(k, i).is_zero()) continue;
          rel[static_cast<std::size_t>(local[k * xd + j])] += rm(k, i);
          any = true;
        }
        for (std::size_t k = 0; k < xd; ++k) {
          if (lx(k, j).is_zero()) continue;
          rel[static_cast<std::size_t>(local[i * xd + k])] -= lx(k, j);
          any = true;
        }
        if (any) relations[key].push_back(std::move(rel));
      }
    }
  }
  TensorProduct out;
  out.projection.assign(m.dim() * xd, {});
  std::vector<ModuleTag> tags;
  for (const auto& [key, pairs] : blocks) {
    LinearQuotient lq = linear_quotient(relations[key], pairs.size());
    const std::size_t base = tags.size();
    for (std::size_t k : lq.kept) {
      tags.push_back(key);
      out.representatives.emplace_back(pairs[k] / xd, pairs[k] % xd);
    }
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      for (const auto& [qi, c] : lq.image[p]) out.projection[pairs[p]].emplace_back(base + qi, c);
    }
  }
  const std::size_t n = tags.size();
  std::vector<Matrix> actions;
  const Quiver& bq = x.right_algebra()->quiver();
  for (std::size_t b = 0; b < bq.arrows().size(); ++b) {
    const Matrix& rx = x.right_action(static_cast<int>(b));
    Matrix r(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      const auto [i, j] = out.representatives[k];
      for (std::size_t j2 = 0; j2 < xd; ++j2) {
        if (rx(j2, j).is_zero()) continue;
        for (const auto& [t, c] : out.projection[i * xd + j2]) r(t, k) += rx(j2, j) * c;
      }
    }
    actions.push_back(std::move(r));
  }
  out.module = GradedModule(x.right_algebra(), std::move(tags), std::move(actions));
  return out;
}

GradedModule tensor_module(const GradedModule& m, const Bimodule& x) {
  return tensor_with_bimodule(m, x).module;
}

Matrix tensor_map(const TensorProduct& source, const TensorProduct& target, const Matrix& f,
                  std::size_t x_dim) {
  Matrix out(target.module.dim(), source.module.dim());
  for (std::size_t k = 0; k < source.module.dim(); ++k) {
    const auto [i, j] = source.representatives[k];
    for (std::size_t i2 = 0; i2 < f.rows(); ++i2) {
      if (f(i2, i).is_zero()) continue;
      for (const auto& [t, c] : target.projection[i2 * x_dim + j]) out(t, k) += f(i2, i) * c;
    }
  }
  return out;
}

ComplexOfModules tensor_complex(const ComplexOfModules& c, const Bimodule& x) {
  ComplexOfModules out{x.right_algebra(), c.lowest, {}, {}};
  std::vector<TensorProduct> parts;
  for (const auto& t : c.terms) parts.push_back(tensor_with_bimodule(t, x));
  for (const auto& p : parts) out.terms.push_back(p.module);
  for (std::size_t k = 0; k < c.differentials.size(); ++k) {
    out.differentials.push_back(tensor_map(parts[k], parts[k + 1], c.differentials[k], x.dim()));
  }
  return out;
}

GradedModule restrict_along(const GradedModule& n, const AlgebraPtr& a, const Matrix& surjection) {
  std::vector<ModuleTag> tags;
  const Quiver& nq = n.algebra()->quiver();
  for (const auto& t : n.tags()) tags.push_back(ModuleTag{t.degree, a->quiver().vertex_index(nq.vertices()[t.vertex])});
  std::vector<Matrix> actions;
  for (std::size_t arrow = 0; arrow < a->quiver().arrows().size(); ++arrow) {
    SparseVector x = to_sparse(surjection.apply(to_dense(a->arrow_image(static_cast<int>(arrow)), a->dim())));
    Matrix r(n.dim(), n.dim());
    for (const auto& [b, c] : x) r += n.basis_action(b) * c;
    actions.push_back(std::move(r));
  }
  return GradedModule(a, std::move(tags), std::move(actions));
}

}  // namespace koszulkit
