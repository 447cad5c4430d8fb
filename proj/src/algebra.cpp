#include "koszulkit/algebra.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace koszulkit {

// ---------------------------------------------------------------- Quiver

Quiver::Quiver(std::vector<std::string> vertices, std::vector<Arrow> arrows)
    : vertices_(std::move(vertices)), arrows_(std::move(arrows)) {
  std::set<std::string> seen;
  for (const auto& v : vertices_) {
    if (!seen.insert(v).second) throw AlgebraError("duplicate vertex id '" + v + "'");
  }
  std::set<std::string> labels;
  const int n = vertex_count();
  for (const auto& a : arrows_) {
    if (a.source < 0 || a.source >= n || a.target < 0 || a.target >= n) {
      throw AlgebraError("arrow '" + a.label + "' has an undeclared endpoint");
    }
    if (a.degree < 1) throw AlgebraError("arrow '" + a.label + "' must have positive degree");
    if (a.label.empty()) throw AlgebraError("arrow with empty label");
    if (!labels.insert(a.label).second) throw AlgebraError("duplicate arrow label '" + a.label + "'");
  }
}

int Quiver::vertex_index(std::string_view name) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i] == name) return static_cast<int>(i);
  }
  throw AlgebraError("unknown vertex '" + std::string(name) + "'");
}

int Quiver::arrow_index(std::string_view label) const {
  for (std::size_t i = 0; i < arrows_.size(); ++i) {
    if (arrows_[i].label == label) return static_cast<int>(i);
  }
  throw AlgebraError("unknown arrow '" + std::string(label) + "'");
}

Quiver Quiver::opposite() const {
  Quiver op;
  op.vertices_ = vertices_;
  op.arrows_ = arrows_;
  for (auto& a : op.arrows_) std::swap(a.source, a.target);
  return op;
}

// ---------------------------------------------------------------- paths

int path_source(const Quiver& q, const Path& p) {
  return p.arrows.empty() ? p.start : q.arrows().at(p.arrows.front()).source;
}

int path_target(const Quiver& q, const Path& p) {
  return p.arrows.empty() ? p.start : q.arrows().at(p.arrows.back()).target;
}

int path_degree(const Quiver& q, const Path& p) {
  int d = 0;
  for (int a : p.arrows) d += q.arrows().at(a).degree;
  return d;
}

bool path_visits(const Quiver& q, const Path& p, int vertex) {
  if (path_source(q, p) == vertex) return true;
  for (int a : p.arrows) {
    if (q.arrows()[a].target == vertex) return true;
  }
  return false;
}

std::string path_to_string(const Quiver& q, const Path& p) {
  if (p.arrows.empty()) return "e_" + q.vertices().at(p.start);
  std::string out;
  for (std::size_t i = 0; i < p.arrows.size(); ++i) {
    if (i) out += '*';
    out += q.arrows()[p.arrows[i]].label;
  }
  return out;
}

Path path_from_labels(const Quiver& q, const std::vector<std::string>& labels) {
  if (labels.empty()) throw AlgebraError("empty arrow sequence");
  Path p;
  for (const auto& l : labels) p.arrows.push_back(q.arrow_index(l));
  p.start = q.arrows()[p.arrows.front()].source;
  for (std::size_t i = 1; i < p.arrows.size(); ++i) {
    if (q.arrows()[p.arrows[i - 1]].target != q.arrows()[p.arrows[i]].source) {
      throw AlgebraError("arrows not composable in path " + path_to_string(q, p));
    }
  }
  return p;
}

Path reversed(const Quiver& q, const Path& p) {
  Path r;
  r.start = path_target(q, p);
  r.arrows.assign(p.arrows.rbegin(), p.arrows.rend());
  return r;
}

Path concat(const Quiver& q, const Path& p, const Path& r) {
  if (path_target(q, p) != path_source(q, r)) {
    throw AlgebraError("cannot compose " + path_to_string(q, p) + " with " + path_to_string(q, r));
  }
  Path out;
  out.start = path_source(q, p);
  out.arrows = p.arrows;
  out.arrows.insert(out.arrows.end(), r.arrows.begin(), r.arrows.end());
  return out;
}

namespace {

std::vector<std::string> labels_of(const Quiver& q, const Path& p) {
  std::vector<std::string> out;
  out.reserve(p.arrows.size());
  for (int a : p.arrows) out.push_back(q.arrows()[a].label);
  return out;
}

}  // namespace

bool path_less(const Quiver& q, const Path& a, const Path& b) {
  auto key = [&](const Path& p) {
    return std::make_tuple(path_degree(q, p), path_source(q, p), path_target(q, p));
  };
  auto ka = key(a);
  auto kb = key(b);
  if (ka != kb) return ka < kb;
  return labels_of(q, a) < labels_of(q, b);
}

std::vector<Path> paths_of_degree(const Quiver& q, int degree) {
  std::vector<Path> out;
  if (degree < 0) return out;
  if (degree == 0) {
    for (int v = 0; v < q.vertex_count(); ++v) out.push_back(Path{v, {}});
    return out;
  }
  // Depth-first extension from every arrow.
  std::vector<Path> stack;
  for (std::size_t a = 0; a < q.arrows().size(); ++a) {
    const Arrow& arr = q.arrows()[a];
    if (arr.degree <= degree) stack.push_back(Path{arr.source, {static_cast<int>(a)}});
  }
  while (!stack.empty()) {
    Path p = std::move(stack.back());
    stack.pop_back();
    int d = path_degree(q, p);
    if (d == degree) {
      out.push_back(std::move(p));
      continue;
    }
    int end = path_target(q, p);
    for (std::size_t a = 0; a < q.arrows().size(); ++a) {
      const Arrow& arr = q.arrows()[a];
      if (arr.source == end && d + arr.degree <= degree) {
        Path next = p;
        next.arrows.push_back(static_cast<int>(a));
        stack.push_back(std::move(next));
      }
    }
  }
  std::sort(out.begin(), out.end(), [&](const Path& x, const Path& y) { return path_less(q, x, y); });
  return out;
}

// ---------------------------------------------------------------- build

namespace {

using PathKey = std::vector<int>;

PathKey key_of(const Path& p) {
  PathKey k{p.start};
  k.insert(k.end(), p.arrows.begin(), p.arrows.end());
  return k;
}

// Ideal slice of one degree: reduced rows with pivots at the largest paths.
struct DegreeData {
  std::vector<Path> paths;
  std::map<PathKey, std::size_t> index;
  RowEchelon ideal;
  std::vector<long> pivot_row;       // path -> row of `ideal` whose pivot it is, or -1
  std::vector<long> basis_position;  // path -> global basis index if standard, or -1
};

void check_relation(const Quiver& q, const Relation& r, int& degree) {
  if (r.terms.empty()) throw AlgebraError("empty relation");
  const Path& first = r.terms.front().second;
  degree = path_degree(q, first);
  const int s = path_source(q, first);
  const int t = path_target(q, first);
  for (const auto& [c, p] : r.terms) {
    for (std::size_t i = 1; i < p.arrows.size(); ++i) {
      if (q.arrows().at(p.arrows[i - 1]).target != q.arrows().at(p.arrows[i]).source) {
        throw AlgebraError("relation contains a non-composable path " + path_to_string(q, p));
      }
    }
    if (path_degree(q, p) != degree) {
      throw AlgebraError("inhomogeneous relation: " + path_to_string(q, first) + " and " +
                         path_to_string(q, p) + " have different degrees");
    }
    if (path_source(q, p) != s || path_target(q, p) != t) {
      throw AlgebraError("mismatched path endpoints in relation: " + path_to_string(q, first) +
                         " and " + path_to_string(q, p));
    }
  }
  if (degree < 2) throw AlgebraError("relation of degree < 2");
}

}  // namespace

GradedAlgebra build_algebra(const Quiver& quiver, const std::vector<Relation>& relations,
                            int degree_bound) {
  if (degree_bound < 0) throw AlgebraError("negative degree bound");
  std::vector<std::pair<int, const Relation*>> checked;
  for (const auto& r : relations) {
    int d = 0;
    check_relation(quiver, r, d);
    if (d > degree_bound) throw AlgebraError("relation degree exceeds the degree bound");
    checked.emplace_back(d, &r);
  }

  // Degrees 0..bound+1; the extra degree only decides truncation.
  const int top = degree_bound + 1;
  std::vector<DegreeData> deg(static_cast<std::size_t>(top) + 1);
  for (int d = 0; d <= top; ++d) {
    DegreeData& dd = deg[d];
    dd.paths = paths_of_degree(quiver, d);
    for (std::size_t i = 0; i < dd.paths.size(); ++i) dd.index[key_of(dd.paths[i])] = i;

    std::vector<Vector> rows;
    for (const auto& [rd, rel] : checked) {
      if (rd != d) continue;
      Vector v(dd.paths.size());
      for (const auto& [c, p] : rel->terms) v[dd.index.at(key_of(p))] += c;
      rows.push_back(std::move(v));
    }
    // I_d gets x*a and a*x for every lower ideal row x and arrow a.
    for (std::size_t a = 0; a < quiver.arrows().size(); ++a) {
      const Arrow& arr = quiver.arrows()[a];
      const int lower = d - arr.degree;
      if (lower < 2) continue;
      const DegreeData& ld = deg[lower];
      Path ap{arr.source, {static_cast<int>(a)}};
      for (std::size_t r = 0; r < ld.ideal.reduced.rows(); ++r) {
        Vector right(dd.paths.size());
        Vector left(dd.paths.size());
        bool any_right = false;
        bool any_left = false;
        for (std::size_t c = 0; c < ld.paths.size(); ++c) {
          const Scalar& coef = ld.ideal.reduced(r, c);
          if (coef.is_zero()) continue;
          const Path& p = ld.paths[c];
          if (path_target(quiver, p) == arr.source) {
            right[dd.index.at(key_of(concat(quiver, p, ap)))] += coef;
            any_right = true;
          }
          if (arr.target == path_source(quiver, p)) {
            left[dd.index.at(key_of(concat(quiver, ap, p)))] += coef;
            any_left = true;
          }
        }
        if (any_right) rows.push_back(std::move(right));
        if (any_left) rows.push_back(std::move(left));
      }
    }
    Matrix m(rows.size(), dd.paths.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < dd.paths.size(); ++c) m(r, c) = rows[r][c];
    }
    dd.ideal = rref(m, PivotOrder::last);
    if (dd.ideal.reduced.cols() != dd.paths.size()) dd.ideal.reduced = Matrix(0, dd.paths.size());
    dd.pivot_row.assign(dd.paths.size(), -1);
    for (std::size_t r = 0; r < dd.ideal.pivots.size(); ++r) {
      dd.pivot_row[dd.ideal.pivots[r]] = static_cast<long>(r);
    }
  }

  GradedAlgebra alg;
  alg.quiver_ = quiver;
  alg.relations_ = relations;
  alg.degree_bound_ = degree_bound;
  alg.truncated_ = deg[top].paths.size() > deg[top].ideal.pivots.size();

  alg.degree_offset_.push_back(0);
  for (int d = 0; d <= degree_bound; ++d) {
    DegreeData& dd = deg[d];
    dd.basis_position.assign(dd.paths.size(), -1);
    for (std::size_t i = 0; i < dd.paths.size(); ++i) {
      if (dd.pivot_row[i] >= 0) continue;
      dd.basis_position[i] = static_cast<long>(alg.basis_.size());
      const Path& p = dd.paths[i];
      alg.basis_.push_back(BasisElement{d, path_source(quiver, p), path_target(quiver, p), p});
    }
    alg.degree_offset_.push_back(alg.basis_.size());
  }

  // A path reduces to minus the non-pivot part of its pivot row.
  auto reduce = [&](const Path& p) -> SparseVector {
    const int d = path_degree(quiver, p);
    if (d > degree_bound) return {};
    const DegreeData& dd = deg[d];
    const std::size_t i = dd.index.at(key_of(p));
    if (dd.pivot_row[i] < 0) return {{static_cast<std::size_t>(dd.basis_position[i]), Scalar(1)}};
    SparseVector out;
    const auto row = static_cast<std::size_t>(dd.pivot_row[i]);
    for (std::size_t c = 0; c < dd.paths.size(); ++c) {
      if (c == i || dd.pivot_row[c] >= 0) continue;
      const Scalar& coef = dd.ideal.reduced(row, c);
      if (!coef.is_zero()) out.emplace_back(static_cast<std::size_t>(dd.basis_position[c]), -coef);
    }
    std::sort(out.begin(), out.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
  };

  for (int v = 0; v < quiver.vertex_count(); ++v) {
    alg.idempotent_.push_back(static_cast<std::size_t>(deg[0].basis_position[v]));
  }
  for (std::size_t a = 0; a < quiver.arrows().size(); ++a) {
    alg.arrow_image_.push_back(reduce(Path{quiver.arrows()[a].source, {static_cast<int>(a)}}));
  }
  const std::size_t n = alg.basis_.size();
  alg.product_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const BasisElement& x = alg.basis_[i];
      const BasisElement& y = alg.basis_[j];
      if (x.target != y.source) continue;
      alg.product_[i * n + j] = reduce(concat(quiver, x.representative, y.representative));
    }
  }
  return alg;
}

// ---------------------------------------------------------------- queries

int GradedAlgebra::top_degree() const {
  for (int d = degree_bound_; d >= 0; --d) {
    if (dim_in_degree(d) > 0) return d;
  }
  return 0;
}

std::vector<std::size_t> GradedAlgebra::graded_dims() const {
  std::vector<std::size_t> out;
  for (int d = 0; d <= top_degree(); ++d) out.push_back(dim_in_degree(d));
  return out;
}

std::size_t GradedAlgebra::dim_in_degree(int d) const {
  auto [lo, hi] = degree_range(d);
  return hi - lo;
}

std::pair<std::size_t, std::size_t> GradedAlgebra::degree_range(int d) const {
  if (d < 0 || d > degree_bound_) return {basis_.size(), basis_.size()};
  return {degree_offset_[d], degree_offset_[d + 1]};
}

SparseVector GradedAlgebra::multiply(const SparseVector& x, const SparseVector& y) const {
  SparseVector out;
  for (const auto& [i, a] : x) {
    for (const auto& [j, b] : y) {
      const SparseVector& p = product(i, j);
      if (!p.empty()) axpy(out, a * b, p);
    }
  }
  return out;
}

SparseVector GradedAlgebra::evaluate(const Path& p) const {
  SparseVector out{{idempotent(path_source(quiver_, p)), Scalar(1)}};
  for (int a : p.arrows) {
    out = multiply(out, arrow_image(a));
    if (out.empty()) break;
  }
  return out;
}

std::string GradedAlgebra::describe(std::size_t i) const {
  return path_to_string(quiver_, basis_.at(i).representative);
}

bool operator==(const GradedAlgebra& a, const GradedAlgebra& b) {
  if (!(a.quiver_ == b.quiver_) || a.degree_bound_ != b.degree_bound_ ||
      a.truncated_ != b.truncated_ || a.basis_.size() != b.basis_.size() ||
      a.idempotent_ != b.idempotent_ || a.degree_offset_ != b.degree_offset_) {
    return false;
  }
  for (std::size_t i = 0; i < a.basis_.size(); ++i) {
    const auto& x = a.basis_[i];
    const auto& y = b.basis_[i];
    if (x.degree != y.degree || x.source != y.source || x.target != y.target ||
        !(x.representative == y.representative)) {
      return false;
    }
  }
  return a.product_ == b.product_ && a.arrow_image_ == b.arrow_image_;
}

// ---------------------------------------------------------------- opposite

GradedAlgebra opposite_algebra(const GradedAlgebra& a) {
  GradedAlgebra op;
  op.quiver_ = a.quiver_.opposite();
  op.degree_bound_ = a.degree_bound_;
  op.truncated_ = a.truncated_;
  op.degree_offset_ = a.degree_offset_;
  op.idempotent_ = a.idempotent_;
  op.arrow_image_ = a.arrow_image_;
  for (const auto& r : a.relations_) {
    Relation rr;
    for (const auto& [c, p] : r.terms) rr.terms.emplace_back(c, reversed(a.quiver_, p));
    op.relations_.push_back(std::move(rr));
  }
  for (const auto& e : a.basis_) {
    op.basis_.push_back(
        BasisElement{e.degree, e.target, e.source, reversed(a.quiver_, e.representative)});
  }
  const std::size_t n = a.basis_.size();
  op.product_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) op.product_[i * n + j] = a.product_[j * n + i];
  }
  return op;
}

// ---------------------------------------------------------------- relations

std::vector<Relation> relations_from_evaluation(
    const Quiver& q, int max_degree, const std::function<Vector(const Path&)>& evaluate) {
  std::vector<Relation> out;
  // Kernel of the evaluation in each degree (= the ideal slice).
  std::vector<std::vector<Path>> paths(static_cast<std::size_t>(std::max(max_degree, 1)) + 1);
  std::vector<Matrix> kernels(paths.size());
  for (int d = 1; d <= max_degree; ++d) {
    paths[d] = paths_of_degree(q, d);
    std::vector<Vector> cols;
    std::size_t target_dim = 0;
    for (const auto& p : paths[d]) {
      cols.push_back(evaluate(p));
      target_dim = std::max(target_dim, cols.back().size());
    }
    for (auto& c : cols) c.resize(target_dim);
    Matrix m = Matrix::from_columns(cols, target_dim);
    if (cols.empty()) m = Matrix(0, 0);
    kernels[d] = kernel_basis(m);
    if (d == 1 && kernels[d].cols() > 0) {
      throw AlgebraError("evaluation has a kernel in degree 1");
    }
    if (d < 2 || kernels[d].cols() == 0) continue;

    std::map<PathKey, std::size_t> index;
    for (std::size_t i = 0; i < paths[d].size(); ++i) index[key_of(paths[d][i])] = i;
    Subspace generated(paths[d].size());
    for (std::size_t a = 0; a < q.arrows().size(); ++a) {
      const Arrow& arr = q.arrows()[a];
      const int lower = d - arr.degree;
      if (lower < 2) continue;
      Path ap{arr.source, {static_cast<int>(a)}};
      for (std::size_t k = 0; k < kernels[lower].cols(); ++k) {
        Vector right(paths[d].size());
        Vector left(paths[d].size());
        for (std::size_t c = 0; c < paths[lower].size(); ++c) {
          const Scalar& coef = kernels[lower](c, k);
          if (coef.is_zero()) continue;
          const Path& p = paths[lower][c];
          if (path_target(q, p) == arr.source) right[index.at(key_of(concat(q, p, ap)))] += coef;
          if (arr.target == path_source(q, p)) left[index.at(key_of(concat(q, ap, p)))] += coef;
        }
        generated.add(right);
        generated.add(left);
      }
    }
    for (std::size_t k = 0; k < kernels[d].cols(); ++k) {
      Vector v = kernels[d].column(k);
      if (!generated.add(v)) continue;
      // Split by (source, target) so every relation has common endpoints.
      std::map<std::pair<int, int>, Relation> split;
      for (std::size_t c = 0; c < v.size(); ++c) {
        if (v[c].is_zero()) continue;
        const Path& p = paths[d][c];
        split[{path_source(q, p), path_target(q, p)}].terms.emplace_back(v[c], p);
      }
      for (auto& [st, r] : split) out.push_back(std::move(r));
    }
  }
  return out;
}

// ---------------------------------------------------------------- quotient

Matrix IdempotentQuotient::surjection_in_degree(const GradedAlgebra& source, int d) const {
  auto [lo, hi] = source.degree_range(d);
  auto [qlo, qhi] = quotient.degree_range(d);
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  for (std::size_t i = qlo; i < qhi; ++i) rows.push_back(i);
  for (std::size_t i = lo; i < hi; ++i) cols.push_back(i);
  return surjection.submatrix(rows, cols);
}

IdempotentQuotient quotient_by_idempotents(const GradedAlgebra& a, const std::vector<int>& kill) {
  const Quiver& q = a.quiver();
  std::vector<bool> killed(q.vertex_count(), false);
  for (int v : kill) {
    if (v < 0 || v >= q.vertex_count()) throw AlgebraError("kill set names an unknown vertex");
    killed[v] = true;
  }
  if (std::all_of(killed.begin(), killed.end(), [](bool b) { return b; })) {
    throw ZeroRingError("quotient by all vertex idempotents is the zero ring");
  }

  IdempotentQuotient out;
  std::vector<std::string> vertices;
  for (int v = 0; v < q.vertex_count(); ++v) {
    if (killed[v]) {
      out.vertex_map.push_back(-1);
    } else {
      out.vertex_map.push_back(static_cast<int>(vertices.size()));
      vertices.push_back(q.vertices()[v]);
    }
  }
  std::vector<Arrow> arrows;
  for (const auto& arr : q.arrows()) {
    if (killed[arr.source] || killed[arr.target]) {
      out.arrow_map.push_back(-1);
    } else {
      out.arrow_map.push_back(static_cast<int>(arrows.size()));
      arrows.push_back(Arrow{arr.label, out.vertex_map[arr.source], out.vertex_map[arr.target],
                             arr.degree});
    }
  }
  Quiver sub(vertices, arrows);

  auto lift = [&](const Path& p) {
    Path r{-1, {}};
    int s = path_source(sub, p);
    for (int v = 0; v < q.vertex_count(); ++v) {
      if (out.vertex_map[v] == s) r.start = v;
    }
    for (int x : p.arrows) {
      for (std::size_t y = 0; y < out.arrow_map.size(); ++y) {
        if (out.arrow_map[y] == x) r.arrows.push_back(static_cast<int>(y));
      }
    }
    return r;
  };

  // Ideal slice per degree: span of all paths through a killed vertex.
  const int bound = a.degree_bound();
  std::vector<Subspace> ideal;
  std::vector<std::vector<std::size_t>> complement;  // chosen basis of A_d / I_d
  for (int d = 0; d <= bound; ++d) {
    auto [lo, hi] = a.degree_range(d);
    Subspace s(hi - lo);
    for (const auto& p : paths_of_degree(q, d)) {
      bool through = false;
      for (int v : kill) through = through || path_visits(q, p, v);
      if (!through) continue;
      Vector v(hi - lo);
      for (const auto& [i, c] : a.evaluate(p)) v[i - lo] = c;
      s.add(v);
    }
    ideal.push_back(std::move(s));
  }

  auto eval_in_a = [&](const Path& p) -> Vector {
    const int d = path_degree(sub, p);
    if (d > bound) return {};
    auto [lo, hi] = a.degree_range(d);
    Vector v(hi - lo);
    for (const auto& [i, c] : a.evaluate(lift(p))) v[i - lo] = c;
    return v;
  };

  // Project out the ideal: fix, per degree, a linear map A_d -> A_d / I_d.
  std::vector<Matrix> projection;
  for (int d = 0; d <= bound; ++d) {
    auto [lo, hi] = a.degree_range(d);
    const std::size_t n = hi - lo;
    // Rows of the projection are a basis of the annihilator of I_d.
    Matrix gens = Matrix::from_columns(ideal[d].basis(), n);
    if (ideal[d].dim() == 0) gens = Matrix(0, n);
    else gens = gens.transpose();
    Matrix ann = kernel_basis(gens);  // columns: functionals vanishing on I_d
    projection.push_back(ann.transpose());
  }

  auto evaluate = [&](const Path& p) -> Vector {
    const int d = path_degree(sub, p);
    if (d > bound) return {};
    return projection[d].apply(eval_in_a(p));
  };
  std::vector<Relation> rels = relations_from_evaluation(sub, bound, evaluate);
  out.quotient = build_algebra(sub, rels, bound);

  for (int d = 0; d <= bound; ++d) {
    if (out.quotient.dim_in_degree(d) != projection[d].rows()) {
      throw std::logic_error("idempotent quotient dimension mismatch");
    }
  }

  out.surjection = Matrix(out.quotient.dim(), a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const BasisElement& e = a.element(i);
    bool through = false;
    for (int v : kill) through = through || path_visits(q, e.representative, v);
    if (through) continue;
    Path p{out.vertex_map[e.representative.start], {}};
    for (int x : e.representative.arrows) p.arrows.push_back(out.arrow_map[x]);
    for (const auto& [j, c] : out.quotient.evaluate(p)) out.surjection(j, i) = c;
  }
  return out;
}

// ---------------------------------------------------------------- isomorphism

namespace {

Matrix evaluation_matrix(const GradedAlgebra& alg, const std::vector<SparseVector>& images, int d) {
  auto [lo, hi] = alg.degree_range(d);
  Matrix m(hi - lo, images.size());
  for (std::size_t c = 0; c < images.size(); ++c) {
    for (const auto& [i, v] : images[c]) m(i - lo, c) = v;
  }
  return m;
}

bool same_kernels(const GradedAlgebra& a, const GradedAlgebra& b, const AlgebraIsomorphism& iso) {
  const int top = std::min(a.degree_bound(), b.degree_bound());
  for (int d = 1; d <= top; ++d) {
    std::vector<SparseVector> ia;
    std::vector<SparseVector> ib;
    for (const auto& p : paths_of_degree(a.quiver(), d)) {
      ia.push_back(a.evaluate(p));
      Path q{iso.vertex_map[p.start], {}};
      Scalar scale(1);
      for (int x : p.arrows) {
        q.arrows.push_back(iso.arrow_map[x]);
        scale *= iso.arrow_scale[x];
      }
      SparseVector v = b.evaluate(q);
      for (auto& [i, c] : v) c *= scale;
      ib.push_back(std::move(v));
    }
    Matrix ma = evaluation_matrix(a, ia, d);
    Matrix mb = evaluation_matrix(b, ib, d);
    const std::size_t ra = rank(ma);
    if (ra != a.dim_in_degree(d) || rank(mb) != b.dim_in_degree(d)) return false;
    std::vector<std::vector<Scalar>> rows;
    for (std::size_t r = 0; r < ma.rows(); ++r) rows.push_back(ma.row(r));
    for (std::size_t r = 0; r < mb.rows(); ++r) rows.push_back(mb.row(r));
    Matrix stacked = rows.empty() ? Matrix(0, ia.size()) : Matrix::from_rows(rows);
    if (rank(stacked) != ra) return false;
  }
  return true;
}

}  // namespace

std::optional<AlgebraIsomorphism> find_isomorphism(const GradedAlgebra& a, const GradedAlgebra& b) {
  const Quiver& qa = a.quiver();
  const Quiver& qb = b.quiver();
  if (qa.vertex_count() != qb.vertex_count() || qa.arrows().size() != qb.arrows().size()) return std::nullopt;
  const int top = std::min(a.degree_bound(), b.degree_bound());
  for (int d = 0; d <= top; ++d) {
    if (a.dim_in_degree(d) != b.dim_in_degree(d)) return std::nullopt;
  }
  std::vector<int> perm(qa.vertex_count());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  const std::size_t na = qa.arrows().size();
  long budget = 1 << 20;
  do {
    AlgebraIsomorphism iso{perm, std::vector<int>(na, -1), std::vector<Scalar>(na, Scalar(1))};
    std::vector<bool> used(na, false);
    std::optional<AlgebraIsomorphism> found;
    std::function<void(std::size_t)> assign = [&](std::size_t i) {
      if (found || --budget < 0) return;
      if (i == na) {
        if (same_kernels(a, b, iso)) found = iso;
        return;
      }
      const Arrow& x = qa.arrows()[i];
      for (std::size_t j = 0; j < na; ++j) {
        const Arrow& y = qb.arrows()[j];
        if (used[j] || y.degree != x.degree || y.source != perm[x.source] || y.target != perm[x.target]) continue;
        used[j] = true;
        iso.arrow_map[i] = static_cast<int>(j);
        for (int sign : {1, -1}) {
          iso.arrow_scale[i] = Scalar(sign);
          assign(i + 1);
          if (found) return;
        }
        used[j] = false;
      }
    };
    assign(0);
    if (found) return found;
  } while (std::next_permutation(perm.begin(), perm.end()) && budget > 0);
  return std::nullopt;
}

// ---------------------------------------------------------------- validation

std::string validate_algebra(const GradedAlgebra& a) {
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const SparseVector& xy = a.product(i, j);
      for (const auto& [k, c] : xy) {
        if (a.element(k).degree != a.element(i).degree + a.element(j).degree) {
          return "degree not additive for " + a.describe(i) + " * " + a.describe(j);
        }
      }
      for (std::size_t k = 0; k < n; ++k) {
        SparseVector left = a.multiply(xy, {{k, Scalar(1)}});
        SparseVector right = a.multiply({{i, Scalar(1)}}, a.product(j, k));
        if (left != right) {
          return "associativity fails on " + a.describe(i) + ", " + a.describe(j) + ", " +
                 a.describe(k);
        }
      }
    }
  }
  SparseVector unit;
  for (int v = 0; v < a.vertex_count(); ++v) axpy(unit, Scalar(1), {{a.idempotent(v), Scalar(1)}});
  for (std::size_t i = 0; i < n; ++i) {
    SparseVector x{{i, Scalar(1)}};
    if (a.multiply(unit, x) != x || a.multiply(x, unit) != x) {
      return "sum of idempotents is not a unit on " + a.describe(i);
    }
  }
  if (a.dim_in_degree(0) != static_cast<std::size_t>(a.vertex_count())) {
    return "degree-0 part is not spanned by the idempotents";
  }
  return {};
}

}  // namespace koszulkit
