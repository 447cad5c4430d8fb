#pragma once

// Graded right modules over a GradedAlgebra, complexes of them, minimal
// projective resolutions, Hom spaces and tensor products with bimodules.
//
// Module elements are column vectors; the right action of an algebra element
// x is a matrix R_x with m.x = R_x m, so m.(x y) = R_y R_x m.

#include "koszulkit/algebra.hpp"

#include <map>
#include <utility>

namespace koszulkit {

/// (internal degree, vertex) of a homogeneous basis vector.
struct ModuleTag {
  int degree = 0;
  int vertex = 0;

  friend bool operator==(const ModuleTag&, const ModuleTag&) = default;
  friend auto operator<=>(const ModuleTag&, const ModuleTag&) = default;
};

class GradedModule {
 public:
  GradedModule() = default;
  /// Zero module over `algebra`.
  explicit GradedModule(AlgebraPtr algebra);
  /// Validates vertex/degree compatibility of every arrow action and that all
  /// relations of the algebra act as zero; throws AlgebraError otherwise.
  GradedModule(AlgebraPtr algebra, std::vector<ModuleTag> tags, std::vector<Matrix> arrow_actions);

  [[nodiscard]] const AlgebraPtr& algebra() const { return algebra_; }
  [[nodiscard]] std::size_t dim() const { return tags_.size(); }
  [[nodiscard]] const std::vector<ModuleTag>& tags() const { return tags_; }
  [[nodiscard]] const ModuleTag& tag(std::size_t i) const { return tags_.at(i); }
  [[nodiscard]] const Matrix& arrow_action(int arrow) const { return arrow_actions_.at(arrow); }
  /// Action of algebra basis element b.
  [[nodiscard]] const Matrix& basis_action(std::size_t b) const { return basis_actions_.at(b); }
  /// m.x for an algebra element x.
  [[nodiscard]] Vector act(const Vector& m, const SparseVector& x) const;
  /// Number of basis vectors per (degree, vertex).
  [[nodiscard]] std::map<ModuleTag, std::size_t> dims() const;
  /// Basis indices with the given tag, in basis order.
  [[nodiscard]] std::vector<std::size_t> block(const ModuleTag& t) const;
  /// M<t>: every degree raised by t.
  [[nodiscard]] GradedModule twisted(int t) const;

 private:
  AlgebraPtr algebra_;
  std::vector<ModuleTag> tags_;
  std::vector<Matrix> arrow_actions_;
  std::vector<Matrix> basis_actions_;
};

/// Block-diagonal sum; basis is the concatenation of the summands' bases.
GradedModule direct_sum(const std::vector<GradedModule>& parts);

/// Checks that `f` (n.dim x m.dim) raises degrees by `shift`, preserves
/// vertices and commutes with every arrow.
bool is_homomorphism(const GradedModule& m, const GradedModule& n, const Matrix& f, int shift = 0);

GradedModule simple_module(const AlgebraPtr& a, int vertex);
/// Sum of all simples (the degree-0 part of the algebra as a module).
GradedModule semisimple_top(const AlgebraPtr& a);
GradedModule projective_module(const AlgebraPtr& a, int vertex, int twist = 0);
/// D(A e_v), with socle the simple at v in degree 0 (shifted by `twist`).
GradedModule injective_module(const AlgebraPtr& a, int vertex, int twist = 0);

/// Generator of a free module: the summand e_vertex A shifted by `degree`.
struct Generator {
  int vertex = 0;
  int degree = 0;

  friend bool operator==(const Generator&, const Generator&) = default;
  friend auto operator<=>(const Generator&, const Generator&) = default;
};

/// Direct sum of twisted indecomposable projectives with its generator
/// layout: basis vector (g, b) stands for g.b for every algebra basis element
/// b starting at the vertex of g.
class FreeModule {
 public:
  FreeModule() = default;
  FreeModule(AlgebraPtr a, std::vector<Generator> generators);

  [[nodiscard]] const GradedModule& module() const { return module_; }
  [[nodiscard]] const std::vector<Generator>& generators() const { return generators_; }
  [[nodiscard]] std::size_t dim() const { return module_.dim(); }
  /// Basis index of generator g itself.
  [[nodiscard]] std::size_t generator_position(std::size_t g) const { return position_.at(g); }
  /// (generator, algebra basis element) of basis index i.
  [[nodiscard]] const std::pair<std::size_t, std::size_t>& origin(std::size_t i) const {
    return origin_.at(i);
  }
  /// The module map determined by sending generator g to images[g] (vectors
  /// in `target`): column (g, b) is images[g].b.
  [[nodiscard]] Matrix map_from_images(const GradedModule& target,
                                       const std::vector<Vector>& images) const;

 private:
  GradedModule module_;
  std::vector<Generator> generators_;
  std::vector<std::size_t> position_;
  std::vector<std::pair<std::size_t, std::size_t>> origin_;
};

struct Submodule {
  GradedModule module;
  Matrix inclusion;  // ambient.dim x module.dim
};

/// Submodule spanned by homogeneous vectors (each supported on one tag) that
/// are closed under the action. Throws std::logic_error when not closed.
Submodule submodule_from_vectors(const GradedModule& ambient, const std::vector<Vector>& vectors);
/// Kernel of a degree-0 homomorphism f: m -> (anything), computed per tag block.
Submodule kernel_submodule(const GradedModule& m, const Matrix& f);

struct QuotientModule {
  GradedModule module;
  Matrix projection;  // module.dim x ambient.dim
};

/// m / span(vectors); the closure of the span under the action is taken first.
QuotientModule quotient_module(const GradedModule& m, const std::vector<Vector>& vectors);

struct ProjectiveCover {
  FreeModule cover;
  Matrix map;  // m.dim x cover.dim
};

/// Cover on the graded top of m; throws AlgebraError for the zero module.
ProjectiveCover projective_cover(const GradedModule& m);

/// Bounded complex of graded modules with degree-preserving differentials of
/// cohomological degree +1. Term k of `terms` sits in degree lowest + k.
struct ComplexOfModules {
  AlgebraPtr algebra;
  int lowest = 0;
  std::vector<GradedModule> terms;
  std::vector<Matrix> differentials;  // differentials[k]: terms[k] -> terms[k+1]

  [[nodiscard]] int highest() const { return lowest + static_cast<int>(terms.size()) - 1; }
  /// Term in cohomological degree p (zero module outside the range).
  [[nodiscard]] GradedModule term(int p) const;
  /// Differential leaving degree p (a zero matrix outside the range).
  [[nodiscard]] Matrix differential(int p) const;
  [[nodiscard]] std::size_t total_dim() const;
};

ComplexOfModules single_term_complex(const GradedModule& m, int degree = 0);
/// Checks each differential is a homomorphism and d^2 = 0. Empty string if ok.
std::string validate_complex(const ComplexOfModules& c);
/// Cohomology dimension per (cohomological degree, internal degree, vertex).
std::map<std::tuple<int, int, int>, std::size_t> complex_cohomology(const ComplexOfModules& c);
ComplexOfModules twist_complex(const ComplexOfModules& c, int t);
/// C[1]: (C[1])^p = C^{p+1}, differential negated.
ComplexOfModules shift_complex(const ComplexOfModules& c, int n = 1);

/// A degree-0 chain map f: c -> d, matrices indexed by cohomological degree.
struct ChainMap {
  std::map<int, Matrix> components;
};
bool is_chain_map(const ComplexOfModules& c, const ComplexOfModules& d, const ChainMap& f);
/// Cone N + M[1] with differential (n, m) -> (d n + f m, -d m).
ComplexOfModules cone_of_complexes(const ComplexOfModules& m, const ComplexOfModules& n,
                                   const ChainMap& f);

/// Minimal graded projective resolution, as a complex in degrees -length..0.
struct Resolution {
  ComplexOfModules complex;
  std::vector<FreeModule> free_terms;  // free_terms[p] sits in degree -p
  Matrix augmentation;                 // resolved.dim x free_terms[0].dim
  GradedModule resolved;
  bool truncated = false;

  [[nodiscard]] int length() const { return static_cast<int>(free_terms.size()) - 1; }
  /// Generator table of homological degree p.
  [[nodiscard]] const std::vector<Generator>& generators(int p) const {
    return free_terms.at(p).generators();
  }
};

Resolution minimal_resolution(const GradedModule& m, int length_bound);
/// Every differential entry in positive degree, cross-checked against the
/// vanishing of d tensored with the degree-0 part. Returns an explanation on
/// failure, empty string otherwise.
std::string check_minimality(const Resolution& r);
/// Exactness via rank arithmetic, including the augmentation.
bool is_exact_resolution(const Resolution& r);

/// Basis of homomorphisms m -> n raising internal degree by `shift`.
std::vector<Matrix> hom_space(const GradedModule& m, const GradedModule& n, int shift = 0);

/// (left, right) vertex pair and internal degree of a bimodule basis vector.
struct BimoduleTag {
  int degree = 0;
  int left = 0;
  int right = 0;

  friend bool operator==(const BimoduleTag&, const BimoduleTag&) = default;
};

/// Graded (A, B)-bimodule. Left action of an A-arrow a is L_a (x -> a.x),
/// right action of a B-arrow b is R_b (x -> x.b).
class Bimodule {
 public:
  Bimodule() = default;
  /// Validates commuting actions, vertex/degree compatibility and relations.
  Bimodule(AlgebraPtr left, AlgebraPtr right, std::vector<BimoduleTag> tags,
           std::vector<Matrix> left_actions, std::vector<Matrix> right_actions);

  [[nodiscard]] const AlgebraPtr& left_algebra() const { return left_; }
  [[nodiscard]] const AlgebraPtr& right_algebra() const { return right_; }
  [[nodiscard]] std::size_t dim() const { return tags_.size(); }
  [[nodiscard]] const std::vector<BimoduleTag>& tags() const { return tags_; }
  [[nodiscard]] const Matrix& left_action(int arrow) const { return left_actions_.at(arrow); }
  [[nodiscard]] const Matrix& right_action(int arrow) const { return right_actions_.at(arrow); }
  /// Left action of A-basis element b.
  [[nodiscard]] const Matrix& left_basis_action(std::size_t b) const { return left_basis_.at(b); }
  /// The underlying right B-module.
  [[nodiscard]] GradedModule right_module() const;

 private:
  AlgebraPtr left_;
  AlgebraPtr right_;
  std::vector<BimoduleTag> tags_;
  std::vector<Matrix> left_actions_;
  std::vector<Matrix> right_actions_;
  std::vector<Matrix> left_basis_;
};

/// A as an (A, A)-bimodule.
Bimodule regular_bimodule(const AlgebraPtr& a);
/// The quotient A^kill = A / A e A as an (A, A^kill)-bimodule.
Bimodule quotient_bimodule(const AlgebraPtr& a, const AlgebraPtr& quotient, const Matrix& surjection);
/// A e_v as an (A, B)-bimodule for B with one vertex and no arrows, shifted by twist.
Bimodule left_corner_bimodule(const AlgebraPtr& a, int vertex, const AlgebraPtr& b, int twist = 0);
/// e_v A as a (B, A)-bimodule for B with one vertex and no arrows, shifted by twist.
Bimodule right_corner_bimodule(const AlgebraPtr& a, int vertex, const AlgebraPtr& b, int twist = 0);

struct TensorProduct {
  GradedModule module;
  /// For each basis vector of `module`, the (m index, x index) pair it came from.
  std::vector<std::pair<std::size_t, std::size_t>> representatives;
  /// Projection from the pair space (m index * x.dim + x index) to `module`.
  std::vector<SparseVector> projection;
};

/// m (over A) tensored over A with x (an (A, B)-bimodule). Throws AlgebraError
/// if the algebra of m is not the left algebra of x.
TensorProduct tensor_with_bimodule(const GradedModule& m, const Bimodule& x);
GradedModule tensor_module(const GradedModule& m, const Bimodule& x);
/// f tensor 1 between tensor products (f a homomorphism of shift `shift`).
Matrix tensor_map(const TensorProduct& source, const TensorProduct& target, const Matrix& f,
                  std::size_t x_dim);
ComplexOfModules tensor_complex(const ComplexOfModules& c, const Bimodule& x);

/// A module over a quotient A / A e A viewed as an A-module.
GradedModule restrict_along(const GradedModule& n, const AlgebraPtr& a, const Matrix& surjection);

}  // namespace koszulkit
