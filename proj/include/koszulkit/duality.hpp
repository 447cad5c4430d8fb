#pragma once

// The Koszul duality functor RHom(K, -), the tensor back - (x)_E K, the
// natural maps psi and phi, the totalization F with its sign map, and the
// layered duality D.

#include <optional>

#include "koszulkit/dg.hpp"
#include "koszulkit/koszul.hpp"

namespace koszulkit {

class DualityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ContextOptions {
  /// Accept a resolution cut off by the bound (the context is then exact
  /// only below the bound).
  bool allow_truncated = false;
};

struct DualityContext {
  AlgebraPtr algebra;
  DGAlgebraPtr algebra_dg;  // A in bidegrees (0, n)
  int bound = 0;
  bool truncated = false;
  KoszulCertificate certificate;
  KoszulComplex koszul;
  std::vector<int> labels;  // summand w of each basis vector of K
  EndAlgebra end;           // E = End(K) and K as a left E-module
  DGModule k_right;         // K as a right DG-module over A
  ExtAlgebra ext;
  AlgebraPtr dual;          // A!
  DGAlgebraPtr dual_dg;     // A! in bidegrees (n, -n)
  /// Cocycles of E representing the basis of A!, from two lifting policies.
  std::vector<SparseVector> representatives;
  std::vector<SparseVector> representatives_alt;
  DGCohomology end_cohomology;  // of E as a right module over itself
};

/// Throws DualityError if a is not Koszul within the bound, or if the
/// resolution is truncated and the options do not allow it.
DualityContext make_context(const AlgebraPtr& a, int bound, ContextOptions options = {});

/// A DG-module over E together with the record of how it is built from the
/// generators Hom(K, K_w). Only the functions below produce them.
struct CertifiedModule {
  DGModule module;
  std::string certificate;
};

/// RHom(K, q) = Hom(K, q) with E acting by precomposition.
struct RHomModule {
  CertifiedModule certified;
  HomComplex hom;
  ComplexOfModules target;
};
RHomModule rhom(const DualityContext& ctx, const ComplexOfModules& q);
/// The induced strict map RHom(K, q) -> RHom(K, q') of a chain map g.
DGMap rhom_map(const DualityContext& ctx, const RHomModule& from, const RHomModule& to, const ChainMap& g);

/// Hom(K, K_w).
CertifiedModule generator(const DualityContext& ctx, int w);
/// E as a right module over itself.
CertifiedModule regular(const DualityContext& ctx);
CertifiedModule certified_shift(const CertifiedModule& m, int k = 1);
CertifiedModule certified_twist(const CertifiedModule& m, int t = 1);
CertifiedModule certified_sum(const std::vector<CertifiedModule>& parts);
/// Cone of a strict map f: m -> n of bidegree (0, 0).
CertifiedModule certified_cone(const CertifiedModule& m, const CertifiedModule& n, const Matrix& f);

/// n (x)_E K as a DG-module over A. Basis vectors are classes of chosen pairs
/// (n index, K index); `image` sends every compatible pair to its class.
struct TensorBack {
  DGModule module;
  std::vector<std::pair<std::size_t, std::size_t>> representatives;
  std::map<std::pair<std::size_t, std::size_t>, SparseVector> image;
};
/// n (x)_E l for a right E-module n and a DG (E, B)-bimodule l, given as a
/// left E-module and a right B-module on the same graded space (tag vertices
/// are the E- and B-vertices respectively). The sign is
/// d(n (x) l) = dn (x) l + (-1)^|n| n (x) dl.
TensorBack dg_tensor(const DGModule& n, const DGModule& left, const DGModule& right);
/// Throws DualityError if n is not a module over this context's E.
TensorBack tensor_back(const DualityContext& ctx, const CertifiedModule& n);

struct NaturalMap {
  DGMap map;
  QuasiIsoCertificate certificate;
};
/// psi: RHom(K, q) (x)_E K -> q, f (x) k |-> f(k).
NaturalMap psi(const DualityContext& ctx, const ComplexOfModules& q);
/// phi: n -> RHom(K, n (x)_E K), n |-> (k |-> n (x) k).
NaturalMap phi(const DualityContext& ctx, const CertifiedModule& n);

/// F: p in P^i_n (complex degree i, internal n) goes to bidegree (i + n, -n);
/// differential and action unchanged. `over` must be dg_from_graded(p.algebra, 1, -1).
DGModule totalize(const ComplexOfModules& p, const DGAlgebraPtr& over);
/// The same module assembled as an iterated cone starting from the top two
/// terms; basis ordered by decreasing complex degree.
DGModule totalize_by_cones(const ComplexOfModules& p, const DGAlgebraPtr& over);

/// sigma: F(p<1>) -> F(p)[-1]<-1>, multiplication by (-1)^i on complex degree i.
struct SigmaIso {
  DGMap map;
  bool isomorphism = false;
  std::string failure;
};
SigmaIso sigma_twist_iso(const ComplexOfModules& p, const DGAlgebraPtr& over);

/// Cohomology table of D(q) in (complex degree i, internal n, vertex)
/// coordinates: DG bidegree (k, j) goes to i = k + j, n = -j.
using LineTable = std::map<std::tuple<int, int, int>, std::size_t>;

struct DualityResult {
  RHomModule rhom;                    // layer 1
  DGCohomology cohomology;
  std::map<int, GradedModule> lines;  // layer 2: line i as a graded A!-module
  std::map<int, std::vector<std::size_t>> line_classes;
  std::map<int, std::vector<Matrix>> arrow_actions_alt;  // from the second representative choice
  bool representative_independent = false;
  std::optional<ComplexOfModules> strict;  // layer 3
  std::string strict_status;

  [[nodiscard]] LineTable table() const;
};
DualityResult koszul_duality(const DualityContext& ctx, const ComplexOfModules& q);

}  // namespace koszulkit
