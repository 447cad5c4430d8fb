#pragma once

// Graded quiver algebras with homogeneous relations.
//
// Composition order: the path p*q traverses p first and then q. A right module
// element m at vertex u is moved by an arrow u->v to vertex v.

#include "koszulkit/exactlin.hpp"

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace koszulkit {

/// Malformed presentation or input data (user error).
class AlgebraError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an idempotent quotient kills every vertex.
class ZeroRingError : public AlgebraError {
 public:
  using AlgebraError::AlgebraError;
};

struct Arrow {
  std::string label;
  int source = 0;
  int target = 0;
  int degree = 1;

  friend bool operator==(const Arrow&, const Arrow&) = default;
};

class Quiver {
 public:
  Quiver() = default;
  Quiver(std::vector<std::string> vertices, std::vector<Arrow> arrows);

  [[nodiscard]] const std::vector<std::string>& vertices() const { return vertices_; }
  [[nodiscard]] const std::vector<Arrow>& arrows() const { return arrows_; }
  [[nodiscard]] int vertex_count() const { return static_cast<int>(vertices_.size()); }
  [[nodiscard]] int vertex_index(std::string_view name) const;
  [[nodiscard]] int arrow_index(std::string_view label) const;
  [[nodiscard]] Quiver opposite() const;

  friend bool operator==(const Quiver&, const Quiver&) = default;

 private:
  std::vector<std::string> vertices_;
  std::vector<Arrow> arrows_;
};

/// A path; `start` names the vertex of the trivial path e_start.
struct Path {
  int start = 0;
  std::vector<int> arrows;

  friend bool operator==(const Path&, const Path&) = default;
};

int path_source(const Quiver& q, const Path& p);
int path_target(const Quiver& q, const Path& p);
int path_degree(const Quiver& q, const Path& p);
bool path_visits(const Quiver& q, const Path& p, int vertex);
std::string path_to_string(const Quiver& q, const Path& p);
Path path_from_labels(const Quiver& q, const std::vector<std::string>& labels);
Path reversed(const Quiver& q, const Path& p);
/// p then r; throws AlgebraError unless target(p) == source(r).
Path concat(const Quiver& q, const Path& p, const Path& r);
/// Basis order: (degree, source, target, arrow labels lexicographically).
bool path_less(const Quiver& q, const Path& a, const Path& b);
/// All paths of the given degree, sorted by path_less.
std::vector<Path> paths_of_degree(const Quiver& q, int degree);

struct Relation {
  std::vector<std::pair<Scalar, Path>> terms;
};

struct BasisElement {
  int degree = 0;
  int source = 0;
  int target = 0;
  Path representative;
};

class GradedAlgebra;
using AlgebraPtr = std::shared_ptr<const GradedAlgebra>;

/// Finite-dimensional nonnegatively graded algebra kQ/I (possibly truncated
/// above a degree bound). Immutable after construction.
class GradedAlgebra {
 public:
  [[nodiscard]] const Quiver& quiver() const { return quiver_; }
  [[nodiscard]] const std::vector<Relation>& relations() const { return relations_; }
  [[nodiscard]] int vertex_count() const { return quiver_.vertex_count(); }
  [[nodiscard]] std::size_t dim() const { return basis_.size(); }
  [[nodiscard]] int degree_bound() const { return degree_bound_; }
  /// True when the presentation has nonzero elements above degree_bound()
  /// that were cut off.
  [[nodiscard]] bool truncated() const { return truncated_; }
  [[nodiscard]] int top_degree() const;
  [[nodiscard]] std::vector<std::size_t> graded_dims() const;
  [[nodiscard]] std::size_t dim_in_degree(int d) const;
  /// Half-open basis index range of degree d.
  [[nodiscard]] std::pair<std::size_t, std::size_t> degree_range(int d) const;

  [[nodiscard]] const std::vector<BasisElement>& basis() const { return basis_; }
  [[nodiscard]] const BasisElement& element(std::size_t i) const { return basis_.at(i); }
  [[nodiscard]] std::size_t idempotent(int vertex) const { return idempotent_.at(vertex); }
  [[nodiscard]] const SparseVector& arrow_image(int arrow) const { return arrow_image_.at(arrow); }
  /// Coordinates of basis(i) * basis(j).
  [[nodiscard]] const SparseVector& product(std::size_t i, std::size_t j) const {
    return product_[i * basis_.size() + j];
  }
  [[nodiscard]] SparseVector multiply(const SparseVector& x, const SparseVector& y) const;
  /// Image of a path of the quiver.
  [[nodiscard]] SparseVector evaluate(const Path& p) const;
  [[nodiscard]] std::string describe(std::size_t i) const;

  friend bool operator==(const GradedAlgebra& a, const GradedAlgebra& b);

 private:
  friend GradedAlgebra build_algebra(const Quiver&, const std::vector<Relation>&, int);
  friend GradedAlgebra opposite_algebra(const GradedAlgebra&);

  Quiver quiver_;
  std::vector<Relation> relations_;
  int degree_bound_ = 0;
  bool truncated_ = false;
  std::vector<BasisElement> basis_;
  std::vector<std::size_t> degree_offset_;  // size degree_bound_ + 2
  std::vector<std::size_t> idempotent_;
  std::vector<SparseVector> arrow_image_;
  std::vector<SparseVector> product_;
};

/// Path algebra modulo the two-sided ideal of `relations`, computed degree by
/// degree up to `degree_bound`. Throws AlgebraError for inhomogeneous
/// relations, mismatched endpoints, relations of degree < 2 or above the bound.
GradedAlgebra build_algebra(const Quiver& quiver, const std::vector<Relation>& relations,
                            int degree_bound);

/// Same basis (representatives reversed), reversed multiplication, on the
/// opposite quiver.
GradedAlgebra opposite_algebra(const GradedAlgebra& a);

struct IdempotentQuotient {
  GradedAlgebra quotient;
  /// Whole-algebra surjection matrix (quotient.dim() x source.dim()); it is
  /// block diagonal in the degree decomposition.
  Matrix surjection;
  std::vector<int> vertex_map;  // source vertex -> quotient vertex, or -1
  std::vector<int> arrow_map;   // source arrow -> quotient arrow, or -1

  /// Degree-d block of the surjection.
  [[nodiscard]] Matrix surjection_in_degree(const GradedAlgebra& source, int d) const;
};

/// A / A e A for e the sum of the idempotents of `kill`. Throws ZeroRingError
/// when every vertex is killed.
IdempotentQuotient quotient_by_idempotents(const GradedAlgebra& a, const std::vector<int>& kill);

/// Minimal generating relations of the kernel of the map sending each path of
/// degree 2..max_degree to `evaluate(path)` (coordinates in a per-degree
/// target space). Throws AlgebraError if the kernel is nonzero in degree 1.
std::vector<Relation> relations_from_evaluation(
    const Quiver& q, int max_degree, const std::function<Vector(const Path&)>& evaluate);

/// Vertex bijection plus arrow bijection with scalings that extends to an
/// isomorphism of graded algebras.
struct AlgebraIsomorphism {
  std::vector<int> vertex_map;    // vertex of a -> vertex of b
  std::vector<int> arrow_map;     // arrow of a -> arrow of b
  std::vector<Scalar> arrow_scale;
};

/// Searches vertex bijections, arrow bijections compatible with endpoints and
/// degrees, and arrow signs +-1; accepts a candidate when the evaluation
/// kernels agree in every degree up to the smaller degree bound.
std::optional<AlgebraIsomorphism> find_isomorphism(const GradedAlgebra& a, const GradedAlgebra& b);

/// Exact structural checks: associativity on all basis triples, two-sided unit
/// sum of idempotents, degree additivity. Returns an empty string when valid,
/// otherwise a description of the first violation.
std::string validate_algebra(const GradedAlgebra& a);

}  // namespace koszulkit
