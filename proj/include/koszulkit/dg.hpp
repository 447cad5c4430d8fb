#pragma once

// Bigraded DG-algebras and DG-modules with explicit matrices. Bidegrees are
// (cohomological, internal); differentials have bidegree (+1, 0).
//
// Sign rules checked by the validators:
//   d(ab) = da.b + (-1)^|a| a.db                  (algebras)
//   d(ma) = dm.a + (-1)^|m| m.da                  (right modules)
//   d(am) = da.m + (-1)^|a| a.dm                  (left modules)
//   df = d_N f - (-1)^n f d_M                     (Hom complexes)

#include "koszulkit/modules.hpp"

namespace koszulkit {

/// Bidegree and quiver endpoints of a DG-algebra basis element. A product
/// x.y can be nonzero only if x.target == y.source.
struct DGTag {
  int cohom = 0;
  int internal = 0;
  int source = 0;
  int target = 0;

  friend bool operator==(const DGTag&, const DGTag&) = default;
};

class DGAlgebra {
 public:
  DGAlgebra() = default;
  /// product[i * dim + j] = e_i.e_j; differential columns are d(e_j).
  DGAlgebra(std::vector<std::string> vertices, std::vector<DGTag> tags,
            std::vector<SparseVector> product, Matrix differential,
            std::vector<SparseVector> idempotents);

  [[nodiscard]] const std::vector<std::string>& vertices() const { return vertices_; }
  [[nodiscard]] int vertex_count() const { return static_cast<int>(vertices_.size()); }
  [[nodiscard]] std::size_t dim() const { return tags_.size(); }
  [[nodiscard]] const std::vector<DGTag>& tags() const { return tags_; }
  [[nodiscard]] const DGTag& tag(std::size_t i) const { return tags_.at(i); }
  [[nodiscard]] const SparseVector& product(std::size_t i, std::size_t j) const {
    return product_.at(i * tags_.size() + j);
  }
  [[nodiscard]] SparseVector multiply(const SparseVector& x, const SparseVector& y) const;
  [[nodiscard]] const Matrix& differential() const { return differential_; }
  [[nodiscard]] const SparseVector& idempotent(int v) const { return idempotents_.at(v); }
  [[nodiscard]] SparseVector unit() const;
  [[nodiscard]] std::vector<std::size_t> block(int cohom, int internal) const;

 private:
  std::vector<std::string> vertices_;
  std::vector<DGTag> tags_;
  std::vector<SparseVector> product_;
  Matrix differential_;
  std::vector<SparseVector> idempotents_;
};

using DGAlgebraPtr = std::shared_ptr<const DGAlgebra>;

/// d^2 = 0, Leibniz, associativity, unit, bidegree and endpoint bookkeeping on
/// all basis elements. Empty string when valid.
std::string validate_dg_algebra(const DGAlgebra& a);

/// A graded algebra with zero differential, the degree-n part placed in
/// bidegree (cohom_weight * n, internal_weight * n). (0, 1) views A as a DG
/// algebra; (1, -1) is the placement of an Ext algebra.
DGAlgebraPtr dg_from_graded(const AlgebraPtr& a, int cohom_weight = 0, int internal_weight = 1);
/// The ground field: one vertex, basis {1}.
DGAlgebraPtr dg_ground_field();

enum class Side { right, left };

struct DGModuleTag {
  int cohom = 0;
  int internal = 0;
  int vertex = 0;

  friend bool operator==(const DGModuleTag&, const DGModuleTag&) = default;
  friend auto operator<=>(const DGModuleTag&, const DGModuleTag&) = default;
};

/// A right (default) or left DG-module. action(b) is the matrix of the basis
/// element b: column j is m_j.b (right) or b.m_j (left). A right module basis
/// vector at vertex v is killed by b unless b.source == v, and m.b sits at
/// b.target; for left modules the roles of source and target swap.
class DGModule {
 public:
  DGModule() = default;
  DGModule(DGAlgebraPtr algebra, std::vector<DGModuleTag> tags, Matrix differential,
           std::vector<Matrix> actions, Side side = Side::right);

  [[nodiscard]] const DGAlgebraPtr& algebra() const { return algebra_; }
  [[nodiscard]] Side side() const { return side_; }
  [[nodiscard]] std::size_t dim() const { return tags_.size(); }
  [[nodiscard]] const std::vector<DGModuleTag>& tags() const { return tags_; }
  [[nodiscard]] const DGModuleTag& tag(std::size_t i) const { return tags_.at(i); }
  [[nodiscard]] const Matrix& differential() const { return differential_; }
  [[nodiscard]] const Matrix& action(std::size_t b) const { return actions_.at(b); }
  [[nodiscard]] Vector act(const Vector& m, const SparseVector& a) const;
  [[nodiscard]] std::vector<std::size_t> block(const DGModuleTag& t) const;
  /// Underlying dimensions per (cohom, internal, vertex).
  [[nodiscard]] std::map<DGModuleTag, std::size_t> dims() const;

 private:
  DGAlgebraPtr algebra_;
  std::vector<DGModuleTag> tags_;
  Matrix differential_;
  std::vector<Matrix> actions_;
  Side side_ = Side::right;
};

/// d^2 = 0, bidegrees, vertex bookkeeping, associativity, unitality and the
/// sign rule of the module's side. Empty string when valid.
std::string validate_dg_module(const DGModule& m);

DGModule zero_dg_module(const DGAlgebraPtr& a);
DGModule dg_direct_sum(const std::vector<DGModule>& parts);
/// The regular right module of a DG-algebra.
DGModule regular_dg_module(const DGAlgebraPtr& a);

/// A homogeneous map of bidegree (cohom, internal).
struct DGMap {
  DGModule source;
  DGModule target;
  Matrix matrix;
  int cohom = 0;
  int internal = 0;
};

/// Bidegree, vertices, d f = (-1)^n f d and linearity f(m a) = f(m) a (right
/// modules). Empty string when valid.
std::string validate_dg_map(const DGMap& f);
DGMap identity_map(const DGModule& m);

/// M[k]: (M[k])^i = M^{i+k}, differential multiplied by (-1)^k, right action
/// unchanged. For left modules the action of a is multiplied by (-1)^{k|a|}.
DGModule shift(const DGModule& m, int k = 1);
/// M<t>: internal degrees raised by t.
DGModule twist(const DGModule& m, int t = 1);
DGMap shift(const DGMap& f, int k = 1);
DGMap twist(const DGMap& f, int t = 1);

/// Cone C(f) = N + M[1] of a strict map f: M -> N of bidegree (0, 0) with
/// d(n, m) = (d n + f m, -d m). Internal degrees are not reversed, so both
/// triangle maps are strict of bidegree (0, 0).
struct DGCone {
  DGModule module;
  DGMap inclusion;   // N -> C(f)
  DGMap projection;  // C(f) -> M[1]
};
DGCone cone(const DGMap& f);

/// Cohomology per (cohom, internal, vertex) with chosen cocycle
/// representatives, complementing the coboundaries inside the cocycles.
class DGCohomology {
 public:
  DGCohomology() = default;
  explicit DGCohomology(const DGModule& m);

  [[nodiscard]] std::size_t dim() const { return tags_.size(); }
  [[nodiscard]] const std::vector<DGModuleTag>& tags() const { return tags_; }
  [[nodiscard]] const std::vector<Vector>& representatives() const { return reps_; }
  /// Class of a cocycle in the basis of representatives; throws
  /// std::invalid_argument if v is not a cocycle.
  [[nodiscard]] Vector class_of(const Vector& v) const;
  [[nodiscard]] bool is_coboundary(const Vector& v) const;
  [[nodiscard]] std::vector<Vector> coboundary_basis() const;
  [[nodiscard]] std::map<DGModuleTag, std::size_t> dims() const;
  /// Bidegree table: dims per (cohom, internal), summed over vertices.
  [[nodiscard]] std::map<std::pair<int, int>, std::size_t> table() const;

 private:
  struct Block {
    DGModuleTag tag;
    std::vector<std::size_t> indices;
    Subspace span;          // coboundaries first, then representatives
    std::size_t boundaries = 0;
    std::size_t first_class = 0;
    Matrix d_out;           // differential leaving the block, restricted
  };
  std::size_t ambient_ = 0;
  std::vector<Block> blocks_;
  std::vector<DGModuleTag> tags_;
  std::vector<Vector> reps_;
};

inline DGCohomology cohomology(const DGModule& m) { return DGCohomology(m); }

/// Action of the class of a cocycle a of the base algebra on cohomology:
/// column j is the class of rep_j . a (right) or a . rep_j (left). Throws
/// std::logic_error if a is not a cocycle or the action sends a coboundary
/// outside the coboundaries.
Matrix induced_action(const DGModule& m, const DGCohomology& h, const SparseVector& a);

struct QuasiIsoCertificate {
  std::map<DGModuleTag, std::size_t> source_dims;
  std::map<DGModuleTag, std::size_t> target_dims;
  std::map<DGModuleTag, std::size_t> induced_rank;
  bool quasi_iso = false;
};
QuasiIsoCertificate is_quasi_iso(const DGMap& f);

/// Basis index offsets of the terms of a complex inside its total space
/// (lowest degree first).
std::vector<std::size_t> total_offsets(const ComplexOfModules& c);
Matrix total_differential(const ComplexOfModules& c);

/// Hom complex Hom(m, n) of complexes of A-modules. A basis element of
/// bidegree (n, i) is a family of A-linear maps m^p -> n^{p+n} raising internal
/// degree by i, stored as a total matrix. Optional labels split m and n into
/// summands; every basis map then runs from one m-summand (tag target) into
/// one n-summand (tag source).
class HomComplex {
 public:
  HomComplex() = default;
  HomComplex(const ComplexOfModules& m, const ComplexOfModules& n, std::vector<int> m_labels = {},
             std::vector<int> n_labels = {});

  [[nodiscard]] std::size_t dim() const { return tags_.size(); }
  [[nodiscard]] const std::vector<DGTag>& tags() const { return tags_; }
  [[nodiscard]] const Matrix& map(std::size_t i) const { return maps_.at(i); }
  [[nodiscard]] const Matrix& differential() const { return differential_; }
  /// Coordinates of a total map of bidegree (cohom, internal); throws
  /// std::invalid_argument if it is not an A-linear map of that bidegree.
  [[nodiscard]] Vector coordinates(const Matrix& total, int cohom, int internal) const;
  [[nodiscard]] bool has_bidegree(int cohom, int internal) const;
  [[nodiscard]] const std::vector<std::size_t>& block(int cohom, int internal) const;
  [[nodiscard]] const std::vector<int>& source_labels() const { return m_labels_; }
  [[nodiscard]] const std::vector<int>& target_labels() const { return n_labels_; }
  /// The complex as a DG-module over the ground field.
  [[nodiscard]] DGModule as_module() const;

 private:
  struct Block {
    std::vector<std::size_t> indices;
    std::vector<std::pair<std::size_t, std::size_t>> support;  // (row, col) entries
    Subspace span;
  };
  [[nodiscard]] Vector flatten(const Matrix& total, const Block& b) const;

  std::vector<DGTag> tags_;
  std::vector<Matrix> maps_;
  Matrix differential_;
  std::vector<int> m_labels_;
  std::vector<int> n_labels_;
  std::map<std::pair<int, int>, Block> blocks_;
};

/// End(K) as a DG-algebra with product f.g = f o g, together with K as a
/// left DG-module over it by evaluation. `labels` splits K into summands; the
/// idempotents are the summand projections.
struct EndAlgebra {
  DGAlgebraPtr algebra;
  HomComplex hom;
  DGModule evaluation;  // K as a left module
};
EndAlgebra end_dg_algebra(const ComplexOfModules& k, const std::vector<int>& labels,
                          std::vector<std::string> vertex_names);

/// Complexes of A-modules as DG-modules over dg_from_graded(A) and back.
DGModule dg_module_from_complex(const ComplexOfModules& c, const DGAlgebraPtr& over);
ComplexOfModules complex_from_dg_module(const DGModule& m, const AlgebraPtr& a);

}  // namespace koszulkit
