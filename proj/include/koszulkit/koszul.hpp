#pragma once

// Koszulity certificates, Ext algebras with Yoneda products, quadratic duals
// and the Koszul complex K.

#include "koszulkit/modules.hpp"

namespace koszulkit {

struct KoszulCertificate {
  AlgebraPtr algebra;
  int bound = 0;
  int length = 0;  // homological degrees examined: 0..length
  /// generators[p]: multiplicity of each (vertex, internal degree) in P_p.
  std::vector<std::map<Generator, std::size_t>> generators;
  bool koszul = false;
  int failed_degree = -1;
  bool truncated = false;
};

/// Minimal resolution of the sum of simples up to `bound`; Koszul within the
/// bound iff every generator of P_p sits in internal degree p.
KoszulCertificate is_koszul(const AlgebraPtr& a, int bound);

/// K = sum over vertices w of K_w, the minimal resolution of the simple at w,
/// in cohomological degrees -length..0. Generators keep track of the summand
/// they belong to.
struct KoszulComplex {
  AlgebraPtr algebra;
  std::vector<Resolution> per_vertex;
  ComplexOfModules complex;
  std::vector<FreeModule> free_terms;     // free_terms[p] sits in degree -p
  std::vector<std::vector<int>> summand;  // summand[p][g]: the w with generator g in K_w
  /// offset[p][w]: first basis index of the K_w part inside free_terms[p].
  std::vector<std::vector<std::size_t>> offset;
  bool truncated = false;

  [[nodiscard]] int length() const { return static_cast<int>(free_terms.size()) - 1; }
};

KoszulComplex koszul_complex(const AlgebraPtr& a, int bound);

/// Components Y[p]: from.free_terms[n + p] -> to.free_terms[p] of a cocycle
/// Y of degree n in Hom(from, to) lifting the Ext class dual to `generator`
/// of from.free_terms[n]; the cocycle condition is d Y = (-1)^n Y d. Each step
/// picks the preimage given by `order`.
std::vector<Matrix> lift_ext_class(const Resolution& from, const Resolution& to, int n,
                                   std::size_t generator, PivotOrder order = PivotOrder::first);

/// One basis element of Ext^n(k_target, k_source): the class dual to generator
/// `generator` of P_n in the resolution of k_target. As an element of the Ext
/// algebra it runs from vertex `source` to vertex `target`.
struct ExtBasisElement {
  int degree = 0;
  int source = 0;
  int target = 0;
  std::size_t generator = 0;
  int internal = 0;  // internal degree of the generator
};

struct ExtAlgebra {
  GradedAlgebra algebra;  // presented by generators and relations
  std::vector<ExtBasisElement> ext_basis;
  /// Yoneda products in the ext_basis: product[x * n + y] = x.y.
  std::vector<SparseVector> product;
  /// Columns: algebra basis elements in ext_basis coordinates.
  Matrix to_ext;
  bool truncated = false;
  bool quadratic = true;
  int bound = 0;
};

/// Ext(k, k) with Yoneda product x.y = x o (lift of y), presented as a graded
/// algebra by generators (complements of decomposables) and minimal relations.
ExtAlgebra ext_algebra(const AlgebraPtr& a, int bound, PivotOrder order = PivotOrder::first);

/// Quadratic dual on the opposite quiver (arrows renamed label*), relations
/// the orthogonal complement under <a1 a2, a2* a1*> = 1. `degree_bound` < 0
/// means the input's bound. Throws AlgebraError for non-quadratic input.
GradedAlgebra quadratic_dual(const GradedAlgebra& a, int degree_bound = -1);

}  // namespace koszulkit
