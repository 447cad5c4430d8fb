#include "koszulkit/dg.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace koszulkit {

namespace {

using Columns = std::vector<SparseVector>;

Columns columns_of(const Matrix& m) {
  Columns out(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (!m(i, j).is_zero()) out[j].emplace_back(i, m(i, j));
    }
  }
  return out;
}

// Columns of a * b.
Columns compose(const Columns& a, const Columns& b) {
  Columns out(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) {
    for (const auto& [i, c] : b[j]) axpy(out[j], c, a[i]);
  }
  return out;
}

Columns add(Columns x, const Columns& y, const Scalar& factor = Scalar(1)) {
  for (std::size_t j = 0; j < x.size(); ++j) axpy(x[j], factor, y[j]);
  return x;
}

Columns zero_columns(std::size_t n) { return Columns(n); }

bool is_zero(const Columns& c) {
  return std::all_of(c.begin(), c.end(), [](const SparseVector& v) { return v.empty(); });
}

int parity_sign(int n) { return (n % 2 == 0) ? 1 : -1; }

Matrix block_diagonal(const std::vector<const Matrix*>& parts) {
  std::size_t rows = 0;
  std::size_t cols = 0;
  for (const Matrix* p : parts) {
    rows += p->rows();
    cols += p->cols();
  }
  Matrix out(rows, cols);
  std::size_t r0 = 0;
  std::size_t c0 = 0;
  for (const Matrix* p : parts) {
    for (std::size_t i = 0; i < p->rows(); ++i) {
      for (std::size_t j = 0; j < p->cols(); ++j) {
        if (!(*p)(i, j).is_zero()) out(r0 + i, c0 + j) = (*p)(i, j);
      }
    }
    r0 += p->rows();
    c0 += p->cols();
  }
  return out;
}

}  // namespace

// ------------------------------------------------------------------ DGAlgebra

DGAlgebra::DGAlgebra(std::vector<std::string> vertices, std::vector<DGTag> tags,
                     std::vector<SparseVector> product, Matrix differential,
                     std::vector<SparseVector> idempotents)
    : vertices_(std::move(vertices)),
      tags_(std::move(tags)),
      product_(std::move(product)),
      differential_(std::move(differential)),
      idempotents_(std::move(idempotents)) {
  const std::size_t n = tags_.size();
  if (product_.size() != n * n) throw std::invalid_argument("DG algebra product table has the wrong size");
  if (differential_.rows() != n || differential_.cols() != n) {
    throw std::invalid_argument("DG algebra differential has the wrong size");
  }
  if (idempotents_.size() != vertices_.size()) throw std::invalid_argument("one idempotent per vertex expected");
  for (const auto& t : tags_) {
    if (t.source < 0 || t.target < 0 || t.source >= vertex_count() || t.target >= vertex_count()) {
      throw std::invalid_argument("DG algebra tag refers to an unknown vertex");
    }
  }
}

SparseVector DGAlgebra::multiply(const SparseVector& x, const SparseVector& y) const {
  SparseVector out;
  for (const auto& [i, a] : x) {
    for (const auto& [j, b] : y) axpy(out, a * b, product(i, j));
  }
  return out;
}

SparseVector DGAlgebra::unit() const {
  SparseVector out;
  for (const auto& e : idempotents_) axpy(out, Scalar(1), e);
  return out;
}

std::vector<std::size_t> DGAlgebra::block(int cohom, int internal) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < tags_.size(); ++i) {
    if (tags_[i].cohom == cohom && tags_[i].internal == internal) out.push_back(i);
  }
  return out;
}

std::string validate_dg_algebra(const DGAlgebra& a) {
  const std::size_t n = a.dim();
  std::ostringstream err;
  Columns d = columns_of(a.differential());
  auto d_of = [&](const SparseVector& x) {
    SparseVector out;
    for (const auto& [i, c] : x) axpy(out, c, d[i]);
    return out;
  };
  for (std::size_t j = 0; j < n; ++j) {
    const DGTag& t = a.tag(j);
    for (const auto& [i, c] : d[j]) {
      const DGTag& s = a.tag(i);
      if (s.cohom != t.cohom + 1 || s.internal != t.internal || s.source != t.source || s.target != t.target) {
        err << "differential of basis element " << j << " leaves its bidegree";
        return err.str();
      }
    }
    if (!d_of(d[j]).empty()) {
      err << "d^2 != 0 on basis element " << j;
      return err.str();
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const SparseVector& p = a.product(i, j);
      const DGTag& ti = a.tag(i);
      const DGTag& tj = a.tag(j);
      if (ti.target != tj.source && !p.empty()) {
        err << "product " << i << "." << j << " of non-composable elements is nonzero";
        return err.str();
      }
      for (const auto& [k, c] : p) {
        const DGTag& tk = a.tag(k);
        if (tk.cohom != ti.cohom + tj.cohom || tk.internal != ti.internal + tj.internal || tk.source != ti.source ||
            tk.target != tj.target) {
          err << "product " << i << "." << j << " is not homogeneous";
          return err.str();
        }
      }
      // Leibniz: d(ab) = da.b + (-1)^|a| a.db
      SparseVector lhs = d_of(p);
      SparseVector rhs = a.multiply(d[i], {{j, Scalar(1)}});
      axpy(rhs, Scalar(parity_sign(ti.cohom)), a.multiply({{i, Scalar(1)}}, d[j]));
      if (lhs != rhs) {
        err << "Leibniz rule fails on " << i << ", " << j;
        return err.str();
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (a.product(i, j).empty() && a.tag(i).target != a.tag(j).source) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (a.tag(j).target != a.tag(k).source) continue;
        SparseVector left = a.multiply(a.product(i, j), {{k, Scalar(1)}});
        SparseVector right = a.multiply({{i, Scalar(1)}}, a.product(j, k));
        if (left != right) {
          err << "associativity fails on " << i << ", " << j << ", " << k;
          return err.str();
        }
      }
    }
  }
  SparseVector one = a.unit();
  if (!d_of(one).empty()) return "d(1) != 0";
  for (std::size_t i = 0; i < n; ++i) {
    SparseVector e{{i, Scalar(1)}};
    if (a.multiply(one, e) != e || a.multiply(e, one) != e) {
      err << "unit fails on " << i;
      return err.str();
    }
  }
  for (int v = 0; v < a.vertex_count(); ++v) {
    for (const auto& [i, c] : a.idempotent(v)) {
      const DGTag& t = a.tag(i);
      if (t.cohom != 0 || t.internal != 0 || t.source != v || t.target != v) {
        err << "idempotent of vertex " << v << " is misplaced";
        return err.str();
      }
    }
  }
  return {};
}

DGAlgebraPtr dg_from_graded(const AlgebraPtr& a, int cohom_weight, int internal_weight) {
  std::vector<DGTag> tags;
  for (std::size_t i = 0; i < a->dim(); ++i) {
    const BasisElement& b = a->element(i);
    tags.push_back(DGTag{cohom_weight * b.degree, internal_weight * b.degree, b.source, b.target});
  }
  std::vector<SparseVector> product(a->dim() * a->dim());
  for (std::size_t i = 0; i < a->dim(); ++i) {
    for (std::size_t j = 0; j < a->dim(); ++j) product[i * a->dim() + j] = a->product(i, j);
  }
  std::vector<SparseVector> idempotents;
  for (int v = 0; v < a->vertex_count(); ++v) idempotents.push_back({{a->idempotent(v), Scalar(1)}});
  return std::make_shared<DGAlgebra>(a->quiver().vertices(), std::move(tags), std::move(product),
                                     Matrix(a->dim(), a->dim()), std::move(idempotents));
}

DGAlgebraPtr dg_ground_field() {
  return std::make_shared<DGAlgebra>(std::vector<std::string>{"k"}, std::vector<DGTag>{DGTag{}},
                                     std::vector<SparseVector>{{{0, Scalar(1)}}}, Matrix(1, 1),
                                     std::vector<SparseVector>{{{0, Scalar(1)}}});
}

// ------------------------------------------------------------------- DGModule

DGModule::DGModule(DGAlgebraPtr algebra, std::vector<DGModuleTag> tags, Matrix differential,
                   std::vector<Matrix> actions, Side side)
    : algebra_(std::move(algebra)),
      tags_(std::move(tags)),
      differential_(std::move(differential)),
      actions_(std::move(actions)),
      side_(side) {
  const std::size_t n = tags_.size();
  if (differential_.rows() != n || differential_.cols() != n) {
    throw std::invalid_argument("DG module differential has the wrong size");
  }
  if (actions_.size() != algebra_->dim()) throw std::invalid_argument("one action matrix per algebra basis element");
  for (const auto& m : actions_) {
    if (m.rows() != n || m.cols() != n) throw std::invalid_argument("DG module action has the wrong size");
  }
  for (const auto& t : tags_) {
    if (t.vertex < 0 || t.vertex >= algebra_->vertex_count()) {
      throw std::invalid_argument("DG module tag refers to an unknown vertex");
    }
  }
}

Vector DGModule::act(const Vector& m, const SparseVector& a) const {
  Vector out(dim());
  for (const auto& [b, c] : a) {
    Vector part = actions_[b].apply(m);
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (!part[i].is_zero()) out[i] += c * part[i];
    }
  }
  return out;
}

std::vector<std::size_t> DGModule::block(const DGModuleTag& t) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < tags_.size(); ++i) {
    if (tags_[i] == t) out.push_back(i);
  }
  return out;
}

std::map<DGModuleTag, std::size_t> DGModule::dims() const {
  std::map<DGModuleTag, std::size_t> out;
  for (const auto& t : tags_) ++out[t];
  return out;
}

std::string validate_dg_module(const DGModule& m) {
  std::ostringstream err;
  const DGAlgebra& a = *m.algebra();
  const std::size_t n = m.dim();
  Columns d = columns_of(m.differential());
  for (std::size_t j = 0; j < n; ++j) {
    const DGModuleTag& t = m.tag(j);
    for (const auto& [i, c] : d[j]) {
      const DGModuleTag& s = m.tag(i);
      if (s.cohom != t.cohom + 1 || s.internal != t.internal || s.vertex != t.vertex) {
        err << "differential of basis vector " << j << " leaves its bidegree";
        return err.str();
      }
    }
  }
  if (!is_zero(compose(d, d))) return "d^2 != 0";

  const bool right = m.side() == Side::right;
  std::vector<Columns> act;
  for (std::size_t b = 0; b < a.dim(); ++b) {
    act.push_back(columns_of(m.action(b)));
    const DGTag& tb = a.tag(b);
    for (std::size_t j = 0; j < n; ++j) {
      for (const auto& [i, c] : act[b][j]) {
        const DGModuleTag& s = m.tag(i);
        const DGModuleTag& t = m.tag(j);
        const int from = right ? tb.source : tb.target;
        const int to = right ? tb.target : tb.source;
        if (t.vertex != from || s.vertex != to || s.cohom != t.cohom + tb.cohom || s.internal != t.internal + tb.internal) {
          err << "action of algebra element " << b << " on basis vector " << j << " is not homogeneous";
          return err.str();
        }
      }
    }
  }
  auto action_of = [&](const SparseVector& x) {
    Columns out = zero_columns(n);
    for (const auto& [b, c] : x) out = add(std::move(out), act[b], c);
    return out;
  };
  for (std::size_t x = 0; x < a.dim(); ++x) {
    for (std::size_t y = 0; y < a.dim(); ++y) {
      if (a.tag(x).target != a.tag(y).source) continue;
      // right: (m.x).y = m.(xy); left: x.(y.m) = (xy).m
      Columns lhs = right ? compose(act[y], act[x]) : compose(act[x], act[y]);
      Columns rhs = action_of(a.product(x, y));
      if (lhs != rhs) {
        err << "action is not associative on " << x << ", " << y;
        return err.str();
      }
    }
  }
  Columns unit = action_of(a.unit());
  for (std::size_t j = 0; j < n; ++j) {
    if (unit[j] != SparseVector{{j, Scalar(1)}}) return "unit does not act as the identity";
  }
  Columns da = columns_of(a.differential());
  Columns sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = {{j, Scalar(parity_sign(m.tag(j).cohom))}};
  for (std::size_t b = 0; b < a.dim(); ++b) {
    Columns d_of_b = action_of(da[b]);
    Columns lhs = compose(d, act[b]);
    Columns rhs;
    if (right) {
      // d(m a) = dm.a + (-1)^|m| m.da
      rhs = add(compose(act[b], d), compose(d_of_b, sigma));
    } else {
      // d(a m) = da.m + (-1)^|a| a.dm
      rhs = add(d_of_b, compose(act[b], d), Scalar(parity_sign(a.tag(b).cohom)));
    }
    if (lhs != rhs) {
      err << "sign rule fails for algebra element " << b;
      return err.str();
    }
  }
  return {};
}

DGModule zero_dg_module(const DGAlgebraPtr& a) {
  return DGModule(a, {}, Matrix(0, 0), std::vector<Matrix>(a->dim(), Matrix(0, 0)));
}

DGModule dg_direct_sum(const std::vector<DGModule>& parts) {
  if (parts.empty()) throw std::invalid_argument("direct sum of no modules");
  std::vector<DGModuleTag> tags;
  std::vector<const Matrix*> ds;
  for (const auto& p : parts) {
    if (p.algebra() != parts.front().algebra() || p.side() != parts.front().side()) {
      throw std::invalid_argument("direct sum of modules over different algebras");
    }
    tags.insert(tags.end(), p.tags().begin(), p.tags().end());
    ds.push_back(&p.differential());
  }
  std::vector<Matrix> actions;
  for (std::size_t b = 0; b < parts.front().algebra()->dim(); ++b) {
    std::vector<const Matrix*> as;
    for (const auto& p : parts) as.push_back(&p.action(b));
    actions.push_back(block_diagonal(as));
  }
  return DGModule(parts.front().algebra(), std::move(tags), block_diagonal(ds), std::move(actions),
                  parts.front().side());
}

DGModule regular_dg_module(const DGAlgebraPtr& a) {
  std::vector<DGModuleTag> tags;
  for (const auto& t : a->tags()) tags.push_back(DGModuleTag{t.cohom, t.internal, t.target});
  std::vector<Matrix> actions;
  for (std::size_t b = 0; b < a->dim(); ++b) {
    Matrix r(a->dim(), a->dim());
    for (std::size_t j = 0; j < a->dim(); ++j) {
      for (const auto& [i, c] : a->product(j, b)) r(i, j) = c;
    }
    actions.push_back(std::move(r));
  }
  return DGModule(a, std::move(tags), a->differential(), std::move(actions));
}

// --------------------------------------------------------------------- DGMap

std::string validate_dg_map(const DGMap& f) {
  const DGModule& s = f.source;
  const DGModule& t = f.target;
  if (s.algebra() != t.algebra() || s.side() != t.side()) return "source and target are over different algebras";
  if (f.matrix.rows() != t.dim() || f.matrix.cols() != s.dim()) return "map has the wrong size";
  for (std::size_t j = 0; j < s.dim(); ++j) {
    for (std::size_t i = 0; i < t.dim(); ++i) {
      if (f.matrix(i, j).is_zero()) continue;
      const DGModuleTag& a = s.tag(j);
      const DGModuleTag& b = t.tag(i);
      if (b.cohom != a.cohom + f.cohom || b.internal != a.internal + f.internal || b.vertex != a.vertex) {
        return "map is not homogeneous of its bidegree";
      }
    }
  }
  Matrix lhs = t.differential() * f.matrix;
  Matrix rhs = f.matrix * s.differential();
  if (!(lhs - rhs * Scalar(parity_sign(f.cohom))).is_zero()) return "map does not commute with the differentials";
  for (std::size_t b = 0; b < s.algebra()->dim(); ++b) {
    Matrix l = f.matrix * s.action(b);
    Matrix r = t.action(b) * f.matrix;
    const int sign = s.side() == Side::right ? 1 : parity_sign(f.cohom * s.algebra()->tag(b).cohom);
    if (!(l - r * Scalar(sign)).is_zero()) return "map is not linear over the algebra";
  }
  return {};
}

DGMap identity_map(const DGModule& m) { return DGMap{m, m, Matrix::identity(m.dim()), 0, 0}; }

DGModule shift(const DGModule& m, int k) {
  std::vector<DGModuleTag> tags = m.tags();
  for (auto& t : tags) t.cohom -= k;
  std::vector<Matrix> actions;
  for (std::size_t b = 0; b < m.algebra()->dim(); ++b) {
    const int sign = m.side() == Side::right ? 1 : parity_sign(k * m.algebra()->tag(b).cohom);
    actions.push_back(sign == 1 ? m.action(b) : m.action(b) * Scalar(-1));
  }
  Matrix d = parity_sign(k) == 1 ? m.differential() : m.differential() * Scalar(-1);
  return DGModule(m.algebra(), std::move(tags), std::move(d), std::move(actions), m.side());
}

DGModule twist(const DGModule& m, int t) {
  std::vector<DGModuleTag> tags = m.tags();
  for (auto& tag : tags) tag.internal += t;
  std::vector<Matrix> actions;
  for (std::size_t b = 0; b < m.algebra()->dim(); ++b) actions.push_back(m.action(b));
  return DGModule(m.algebra(), std::move(tags), m.differential(), std::move(actions), m.side());
}

DGMap shift(const DGMap& f, int k) { return DGMap{shift(f.source, k), shift(f.target, k), f.matrix, f.cohom, f.internal}; }

DGMap twist(const DGMap& f, int t) { return DGMap{twist(f.source, t), twist(f.target, t), f.matrix, f.cohom, f.internal}; }

DGCone cone(const DGMap& f) {
  if (f.cohom != 0 || f.internal != 0) throw std::invalid_argument("cone needs a map of bidegree (0, 0)");
  if (std::string e = validate_dg_map(f); !e.empty()) throw std::invalid_argument("cone of a non-strict map: " + e);
  const DGModule& n = f.target;
  DGModule m1 = shift(f.source, 1);
  std::vector<DGModuleTag> tags = n.tags();
  tags.insert(tags.end(), m1.tags().begin(), m1.tags().end());
  Matrix d = block_diagonal({&n.differential(), &m1.differential()});
  for (std::size_t i = 0; i < n.dim(); ++i) {
    for (std::size_t j = 0; j < m1.dim(); ++j) d(i, n.dim() + j) = f.matrix(i, j);
  }
  std::vector<Matrix> actions;
  for (std::size_t b = 0; b < n.algebra()->dim(); ++b) actions.push_back(block_diagonal({&n.action(b), &m1.action(b)}));
  DGModule c(n.algebra(), std::move(tags), std::move(d), std::move(actions), n.side());
  Matrix inc(c.dim(), n.dim());
  for (std::size_t i = 0; i < n.dim(); ++i) inc(i, i) = 1;
  Matrix proj(m1.dim(), c.dim());
  for (std::size_t j = 0; j < m1.dim(); ++j) proj(j, n.dim() + j) = 1;
  DGCone out{c, DGMap{n, c, std::move(inc), 0, 0}, DGMap{c, m1, std::move(proj), 0, 0}};
  if (!(c.differential() * c.differential()).is_zero()) throw std::logic_error("cone differential does not square to zero");
  return out;
}

// -------------------------------------------------------------- DGCohomology

DGCohomology::DGCohomology(const DGModule& m) : ambient_(m.dim()) {
  std::map<DGModuleTag, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < m.dim(); ++i) groups[m.tag(i)].push_back(i);
  const Matrix& d = m.differential();
  for (const auto& [tag, idx] : groups) {
    Block b;
    b.tag = tag;
    b.indices = idx;
    b.span = Subspace(idx.size());
    b.first_class = tags_.size();
    auto prev = groups.find(DGModuleTag{tag.cohom - 1, tag.internal, tag.vertex});
    if (prev != groups.end()) {
      Matrix in = d.submatrix(idx, prev->second);
      for (std::size_t j = 0; j < in.cols(); ++j) {
        if (b.span.add(in.column(j))) ++b.boundaries;
      }
    }
    auto next = groups.find(DGModuleTag{tag.cohom + 1, tag.internal, tag.vertex});
    Matrix z;
    if (next != groups.end()) {
      b.d_out = d.submatrix(next->second, idx);
      z = kernel_basis(b.d_out);
    } else {
      b.d_out = Matrix(0, idx.size());
      z = Matrix::identity(idx.size());
    }
    for (std::size_t j = 0; j < z.cols(); ++j) {
      Vector v = z.column(j);
      if (!b.span.add(v)) continue;
      Vector full(m.dim());
      for (std::size_t k = 0; k < idx.size(); ++k) full[idx[k]] = v[k];
      tags_.push_back(tag);
      reps_.push_back(std::move(full));
    }
    blocks_.push_back(std::move(b));
  }
}

Vector DGCohomology::class_of(const Vector& v) const {
  if (v.size() != ambient_) throw std::invalid_argument("vector has the wrong size");
  Vector out(tags_.size());
  for (const auto& b : blocks_) {
    Vector local(b.indices.size());
    bool zero = true;
    for (std::size_t k = 0; k < b.indices.size(); ++k) {
      local[k] = v[b.indices[k]];
      zero = zero && local[k].is_zero();
    }
    if (zero) continue;
    for (const auto& c : b.d_out.apply(local)) {
      if (!c.is_zero()) throw std::invalid_argument("not a cocycle");
    }
    auto coords = b.span.coordinates(local);
    if (!coords) throw std::logic_error("cocycle outside the cocycle space");
    for (std::size_t k = b.boundaries; k < coords->size(); ++k) out[b.first_class + k - b.boundaries] = (*coords)[k];
  }
  return out;
}

bool DGCohomology::is_coboundary(const Vector& v) const {
  Vector c = class_of(v);
  return std::all_of(c.begin(), c.end(), [](const Scalar& s) { return s.is_zero(); });
}

std::vector<Vector> DGCohomology::coboundary_basis() const {
  std::vector<Vector> out;
  for (const auto& b : blocks_) {
    for (std::size_t k = 0; k < b.boundaries; ++k) {
      Vector full(ambient_);
      for (std::size_t i = 0; i < b.indices.size(); ++i) full[b.indices[i]] = b.span.basis()[k][i];
      out.push_back(std::move(full));
    }
  }
  return out;
}

std::map<DGModuleTag, std::size_t> DGCohomology::dims() const {
  std::map<DGModuleTag, std::size_t> out;
  for (const auto& t : tags_) ++out[t];
  return out;
}

std::map<std::pair<int, int>, std::size_t> DGCohomology::table() const {
  std::map<std::pair<int, int>, std::size_t> out;
  for (const auto& t : tags_) ++out[{t.cohom, t.internal}];
  return out;
}

Matrix induced_action(const DGModule& m, const DGCohomology& h, const SparseVector& a) {
  SparseVector da;
  for (const auto& [i, c] : a) axpy(da, c, to_sparse(m.algebra()->differential().column(i)));
  if (!da.empty()) throw std::logic_error("induced action of a non-cocycle");
  for (const auto& b : h.coboundary_basis()) {
    if (!h.is_coboundary(m.act(b, a))) throw std::logic_error("action does not preserve coboundaries");
  }
  Matrix out(h.dim(), h.dim());
  for (std::size_t j = 0; j < h.dim(); ++j) out.set_column(j, h.class_of(m.act(h.representatives()[j], a)));
  return out;
}

QuasiIsoCertificate is_quasi_iso(const DGMap& f) {
  if (std::string e = validate_dg_map(f); !e.empty()) throw std::invalid_argument("quasi-isomorphism test of a non-strict map: " + e);
  DGCohomology hs(f.source);
  DGCohomology ht(f.target);
  QuasiIsoCertificate cert;
  cert.source_dims = hs.dims();
  cert.target_dims = ht.dims();
  Matrix induced(ht.dim(), hs.dim());
  for (std::size_t j = 0; j < hs.dim(); ++j) induced.set_column(j, ht.class_of(f.matrix.apply(hs.representatives()[j])));
  cert.quasi_iso = true;
  auto shifted = [&](DGModuleTag t) {
    t.cohom += f.cohom;
    t.internal += f.internal;
    return t;
  };
  for (const auto& [tag, dim] : cert.source_dims) {
    std::vector<std::size_t> cols;
    std::vector<std::size_t> rows;
    for (std::size_t j = 0; j < hs.dim(); ++j) {
      if (hs.tags()[j] == tag) cols.push_back(j);
    }
    for (std::size_t i = 0; i < ht.dim(); ++i) {
      if (ht.tags()[i] == shifted(tag)) rows.push_back(i);
    }
    const std::size_t r = rows.empty() ? 0 : rank(induced.submatrix(rows, cols));
    cert.induced_rank[tag] = r;
    if (r != dim || rows.size() != dim) cert.quasi_iso = false;
  }
  for (const auto& [tag, dim] : cert.target_dims) {
    bool found = false;
    for (const auto& [s, sd] : cert.source_dims) found = found || shifted(s) == tag;
    if (!found && dim > 0) cert.quasi_iso = false;
  }
  return cert;
}

// ---------------------------------------------------------------- Hom complex

std::vector<std::size_t> total_offsets(const ComplexOfModules& c) {
  std::vector<std::size_t> out;
  std::size_t total = 0;
  for (const auto& t : c.terms) {
    out.push_back(total);
    total += t.dim();
  }
  out.push_back(total);
  return out;
}

Matrix total_differential(const ComplexOfModules& c) {
  std::vector<std::size_t> off = total_offsets(c);
  Matrix out(off.back(), off.back());
  for (std::size_t k = 0; k < c.differentials.size(); ++k) {
    const Matrix& d = c.differentials[k];
    for (std::size_t i = 0; i < d.rows(); ++i) {
      for (std::size_t j = 0; j < d.cols(); ++j) {
        if (!d(i, j).is_zero()) out(off[k + 1] + i, off[k] + j) = d(i, j);
      }
    }
  }
  return out;
}

namespace {

std::pair<int, int> degree_range(const GradedModule& m) {
  int lo = 0;
  int hi = -1;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    const int d = m.tag(i).degree;
    if (i == 0 || d < lo) lo = d;
    if (i == 0 || d > hi) hi = d;
  }
  return {lo, hi};
}

}  // namespace

HomComplex::HomComplex(const ComplexOfModules& m, const ComplexOfModules& n, std::vector<int> m_labels,
                       std::vector<int> n_labels)
    : m_labels_(std::move(m_labels)), n_labels_(std::move(n_labels)) {
  std::vector<std::size_t> mo = total_offsets(m);
  std::vector<std::size_t> no = total_offsets(n);
  const std::size_t mt = mo.back();
  const std::size_t nt = no.back();
  if (m_labels_.empty()) m_labels_.assign(mt, 0);
  if (n_labels_.empty()) n_labels_.assign(nt, 0);
  if (m_labels_.size() != mt || n_labels_.size() != nt) throw std::invalid_argument("summand labels have the wrong size");

  // (cohom, internal, into label, from label, p) -> maps
  std::map<std::tuple<int, int, int, int, int>, std::vector<Matrix>> found;
  for (std::size_t pk = 0; pk < m.terms.size(); ++pk) {
    const GradedModule& mp = m.terms[pk];
    if (mp.dim() == 0) continue;
    const int p = m.lowest + static_cast<int>(pk);
    auto [mlo, mhi] = degree_range(mp);
    for (std::size_t qk = 0; qk < n.terms.size(); ++qk) {
      const GradedModule& nq = n.terms[qk];
      if (nq.dim() == 0) continue;
      const int c = n.lowest + static_cast<int>(qk) - p;
      auto [nlo, nhi] = degree_range(nq);
      for (int i = nlo - mhi; i <= nhi - mlo; ++i) {
        std::vector<Matrix> basis = hom_space(mp, nq, i);
        if (basis.empty()) continue;
        std::set<int> wl(n_labels_.begin() + no[qk], n_labels_.begin() + no[qk + 1]);
        std::set<int> vl(m_labels_.begin() + mo[pk], m_labels_.begin() + mo[pk + 1]);
        for (int w : wl) {
          for (int v : vl) {
            Subspace local(nq.dim() * mp.dim());
            for (const auto& f : basis) {
              Matrix total(nt, mt);
              Vector flat(nq.dim() * mp.dim());
              bool zero = true;
              for (std::size_t r = 0; r < nq.dim(); ++r) {
                if (n_labels_[no[qk] + r] != w) continue;
                for (std::size_t s = 0; s < mp.dim(); ++s) {
                  if (m_labels_[mo[pk] + s] != v || f(r, s).is_zero()) continue;
                  total(no[qk] + r, mo[pk] + s) = f(r, s);
                  flat[r * mp.dim() + s] = f(r, s);
                  zero = false;
                }
              }
              if (zero || !local.add(flat)) continue;
              found[{c, i, w, v, p}].push_back(std::move(total));
            }
          }
        }
      }
    }
  }
  for (auto& [key, maps] : found) {
    const auto [c, i, w, v, p] = key;
    (void)p;
    for (auto& f : maps) {
      tags_.push_back(DGTag{c, i, w, v});
      maps_.push_back(std::move(f));
    }
  }
  // Blocks with their supports.
  std::vector<std::pair<int, ModuleTag>> mtag;
  for (std::size_t pk = 0; pk < m.terms.size(); ++pk) {
    for (const auto& t : m.terms[pk].tags()) mtag.emplace_back(m.lowest + static_cast<int>(pk), t);
  }
  std::vector<std::pair<int, ModuleTag>> ntag;
  for (std::size_t qk = 0; qk < n.terms.size(); ++qk) {
    for (const auto& t : n.terms[qk].tags()) ntag.emplace_back(n.lowest + static_cast<int>(qk), t);
  }
  for (std::size_t k = 0; k < tags_.size(); ++k) blocks_[{tags_[k].cohom, tags_[k].internal}].indices.push_back(k);
  for (auto& [bideg, block] : blocks_) {
    const auto [c, i] = bideg;
    for (std::size_t r = 0; r < nt; ++r) {
      for (std::size_t s = 0; s < mt; ++s) {
        if (ntag[r].first == mtag[s].first + c && ntag[r].second.degree == mtag[s].second.degree + i &&
            ntag[r].second.vertex == mtag[s].second.vertex) {
          block.support.emplace_back(r, s);
        }
      }
    }
    block.span = Subspace(block.support.size());
    for (std::size_t k : block.indices) {
      if (!block.span.add(flatten(maps_[k], block))) throw std::logic_error("Hom basis is dependent");
    }
  }
  Matrix dm = total_differential(m);
  Matrix dn = total_differential(n);
  differential_ = Matrix(tags_.size(), tags_.size());
  for (std::size_t k = 0; k < tags_.size(); ++k) {
    const int c = tags_[k].cohom;
    Matrix df = dn * maps_[k] - maps_[k] * dm * Scalar(parity_sign(c));
    differential_.set_column(k, coordinates(df, c + 1, tags_[k].internal));
  }
}

Vector HomComplex::flatten(const Matrix& total, const Block& b) const {
  Vector out(b.support.size());
  for (std::size_t k = 0; k < b.support.size(); ++k) out[k] = total(b.support[k].first, b.support[k].second);
  return out;
}

bool HomComplex::has_bidegree(int cohom, int internal) const { return blocks_.count({cohom, internal}) > 0; }

const std::vector<std::size_t>& HomComplex::block(int cohom, int internal) const {
  static const std::vector<std::size_t> empty;
  auto it = blocks_.find({cohom, internal});
  return it == blocks_.end() ? empty : it->second.indices;
}

Vector HomComplex::coordinates(const Matrix& total, int cohom, int internal) const {
  Vector out(tags_.size());
  auto it = blocks_.find({cohom, internal});
  if (it == blocks_.end()) {
    if (!total.is_zero()) throw std::invalid_argument("map has no component in the Hom complex");
    return out;
  }
  const Block& b = it->second;
  auto coords = b.span.coordinates(flatten(total, b));
  if (!coords) throw std::invalid_argument("map is not A-linear of the requested bidegree");
  Matrix check(total.rows(), total.cols());
  for (std::size_t k = 0; k < b.indices.size(); ++k) {
    out[b.indices[k]] = (*coords)[k];
    if (!(*coords)[k].is_zero()) check += maps_[b.indices[k]] * (*coords)[k];
  }
  if (!(check == total)) throw std::invalid_argument("map is not homogeneous of the requested bidegree");
  return out;
}

DGModule HomComplex::as_module() const {
  std::vector<DGModuleTag> tags;
  for (const auto& t : tags_) tags.push_back(DGModuleTag{t.cohom, t.internal, 0});
  return DGModule(dg_ground_field(), std::move(tags), differential_, {Matrix::identity(tags_.size())});
}

// ------------------------------------------------------------------ End(K)

EndAlgebra end_dg_algebra(const ComplexOfModules& k, const std::vector<int>& labels,
                          std::vector<std::string> vertex_names) {
  EndAlgebra out;
  out.hom = HomComplex(k, k, labels, labels);
  const HomComplex& h = out.hom;
  const std::size_t n = h.dim();
  std::vector<SparseVector> product(n * n);
  for (std::size_t f = 0; f < n; ++f) {
    for (std::size_t g = 0; g < n; ++g) {
      if (h.tags()[f].target != h.tags()[g].source) continue;
      Matrix fg = h.map(f) * h.map(g);
      if (fg.is_zero()) continue;
      product[f * n + g] = to_sparse(
          h.coordinates(fg, h.tags()[f].cohom + h.tags()[g].cohom, h.tags()[f].internal + h.tags()[g].internal));
    }
  }
  const std::size_t total = labels.size();
  std::vector<SparseVector> idempotents;
  for (int v = 0; v < static_cast<int>(vertex_names.size()); ++v) {
    Matrix p(total, total);
    for (std::size_t i = 0; i < total; ++i) {
      if (labels[i] == v) p(i, i) = 1;
    }
    idempotents.push_back(to_sparse(h.coordinates(p, 0, 0)));
  }
  std::vector<DGTag> tags = h.tags();
  out.algebra = std::make_shared<DGAlgebra>(std::move(vertex_names), std::move(tags), std::move(product),
                                            h.differential(), std::move(idempotents));
  std::vector<DGModuleTag> ktags;
  for (std::size_t pk = 0, idx = 0; pk < k.terms.size(); ++pk) {
    for (const auto& t : k.terms[pk].tags()) {
      ktags.push_back(DGModuleTag{k.lowest + static_cast<int>(pk), t.degree, labels[idx]});
      ++idx;
    }
  }
  std::vector<Matrix> actions;
  for (std::size_t f = 0; f < n; ++f) actions.push_back(h.map(f));
  out.evaluation = DGModule(out.algebra, std::move(ktags), total_differential(k), std::move(actions), Side::left);
  return out;
}

// ------------------------------------------------------------- conversions

DGModule dg_module_from_complex(const ComplexOfModules& c, const DGAlgebraPtr& over) {
  if (over->dim() != c.algebra->dim()) throw std::invalid_argument("DG algebra does not match the complex's algebra");
  std::vector<DGModuleTag> tags;
  for (std::size_t pk = 0; pk < c.terms.size(); ++pk) {
    for (const auto& t : c.terms[pk].tags()) tags.push_back(DGModuleTag{c.lowest + static_cast<int>(pk), t.degree, t.vertex});
  }
  std::vector<Matrix> actions;
  for (std::size_t b = 0; b < over->dim(); ++b) {
    std::vector<const Matrix*> parts;
    for (const auto& t : c.terms) parts.push_back(&t.basis_action(b));
    actions.push_back(block_diagonal(parts));
  }
  return DGModule(over, std::move(tags), total_differential(c), std::move(actions));
}

ComplexOfModules complex_from_dg_module(const DGModule& m, const AlgebraPtr& a) {
  if (m.algebra()->dim() != a->dim()) throw std::invalid_argument("DG module is not over this algebra");
  for (const auto& t : m.algebra()->tags()) {
    if (t.cohom != 0) throw std::invalid_argument("algebra is not concentrated in cohomological degree 0");
  }
  ComplexOfModules out{a, 0, {}, {}};
  if (m.dim() == 0) {
    out.terms.emplace_back(a);
    return out;
  }
  int lo = m.tag(0).cohom;
  int hi = lo;
  for (const auto& t : m.tags()) {
    lo = std::min(lo, t.cohom);
    hi = std::max(hi, t.cohom);
  }
  out.lowest = lo;
  std::vector<std::vector<std::size_t>> idx(hi - lo + 1);
  for (std::size_t i = 0; i < m.dim(); ++i) idx[m.tag(i).cohom - lo].push_back(i);
  for (const auto& ids : idx) {
    std::vector<ModuleTag> tags;
    for (std::size_t i : ids) tags.push_back(ModuleTag{m.tag(i).internal, m.tag(i).vertex});
    std::vector<Matrix> arrows;
    for (std::size_t arrow = 0; arrow < a->quiver().arrows().size(); ++arrow) {
      Matrix r(ids.size(), ids.size());
      for (const auto& [b, c] : a->arrow_image(static_cast<int>(arrow))) r += m.action(b).submatrix(ids, ids) * c;
      arrows.push_back(std::move(r));
    }
    out.terms.emplace_back(a, std::move(tags), std::move(arrows));
  }
  for (std::size_t k = 0; k + 1 < idx.size(); ++k) out.differentials.push_back(m.differential().submatrix(idx[k + 1], idx[k]));
  return out;
}

}  // namespace koszulkit
