#pragma once

// Translation and truncation functors given by bimodules, and the checks
// relating them across Koszul duality.

#include "koszulkit/duality.hpp"

namespace koszulkit {

class WallError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A regular algebra A, a singular algebra A_lambda, the translation
/// bimodules, the killed vertices of A (defining A^lambda = A / A e A) and the
/// matching of A_lambda's vertices with the surviving vertices of A.
struct WallDatum {
  AlgebraPtr regular;
  AlgebraPtr singular;
  Bimodule x;        // (A, A_lambda)
  Bimodule x_prime;  // (A_lambda, A)
  std::vector<int> kill;
  std::vector<std::pair<int, int>> matching;  // (A_lambda vertex, A vertex)
  int shift = 0;
  AlgebraPtr parabolic;  // A^lambda, filled in by make_wall_datum
  Matrix surjection;     // A -> A^lambda
};

/// Builds A^lambda and validates the datum; throws WallError on failure.
WallDatum make_wall_datum(AlgebraPtr regular, AlgebraPtr singular, Bimodule x, Bimodule x_prime,
                          std::vector<int> kill, std::vector<std::pair<int, int>> matching, int shift);
/// Exactness of - (x) X on simples and projectives (Tor vanishing on minimal
/// resolutions), the adjunction dimension identity, and the matching.
/// Empty string when valid.
std::string validate_wall_datum(const WallDatum& w);

ComplexOfModules translate(const WallDatum& w, const ComplexOfModules& m);
ComplexOfModules translate_out(const WallDatum& w, const ComplexOfModules& n);
/// Termwise m (x)_A A^lambda.
ComplexOfModules zuckerman_truncate(const WallDatum& w, const ComplexOfModules& m);

/// Cohomology of the truncated minimal resolution, per (homological degree,
/// internal degree, vertex of A^lambda).
struct DerivedTables {
  std::map<std::tuple<int, int, int>, std::size_t> table;
  bool truncated = false;
};
DerivedTables derived_zuckerman(const WallDatum& w, const GradedModule& m, int length);

/// T(K) for the Koszul complex K of A, with Hom(K_lambda, T K) as a DG
/// (End(K), End(K_lambda))-bimodule, End(K) acting through f |-> T(f).
struct TranslationKernel {
  ComplexOfModules tk;
  std::vector<TensorProduct> parts;  // per term of K
  std::vector<int> tk_labels;        // summand of K behind each basis vector of T(K)
  std::size_t x_dim = 0;
  HomComplex hom;                    // Hom(K_lambda, T K)
  DGModule left;                     // over End(K)
  DGModule right;                    // over End(K_lambda)
};
TranslationKernel translation_kernel(const DualityContext& ctx, const DualityContext& ctx_lambda, const WallDatum& w);
/// T(f) for a total map f of K.
Matrix translate_map(const DualityContext& ctx, const TranslationKernel& k, const Matrix& f);

/// n (x)_{End(K)} Hom(K_lambda, T K). Throws DualityError if n carries no
/// certificate or is not over ctx's End(K).
CertifiedModule dg_translate(const DualityContext& ctx, const TranslationKernel& k, const CertifiedModule& n);
CertifiedModule dg_translate(const DualityContext& ctx, const DualityContext& ctx_lambda, const WallDatum& w,
                             const CertifiedModule& n);

struct IdempotentSquareReport {
  bool surjective = false;
  bool kernel_matches = false;   // kernel = ideal of the killed idempotents
  bool quotient_matches = false; // multiplicative bijection onto the image
  bool zero_quotient = false;
  std::vector<std::size_t> quotient_dims;
  std::vector<std::size_t> kernel_dims;
  std::string failure;

  [[nodiscard]] bool ok() const { return surjective && kernel_matches && quotient_matches && !zero_quotient; }
};
/// The map A! -> H(End(T K)) induced by f |-> T(f), compared with
/// A! / A! e A! for the killed vertices and with A^lambda.
IdempotentSquareReport verify_idempotent_square(const DualityContext& ctx, const DualityContext& ctx_lambda,
                                                const WallDatum& w);

struct TestObject {
  std::string id;
  ComplexOfModules complex;
};

std::vector<TestObject> simple_objects(const AlgebraPtr& a);
std::vector<TestObject> projective_objects(const AlgebraPtr& a);
/// Cones of random degree-0 chain maps K_v<t> -> K_w (t in -1..1) with
/// coefficients in -2..2, drawn from std::mt19937_64(seed).
std::vector<TestObject> seeded_cones(const DualityContext& ctx, std::uint64_t seed, int count);

struct SquareEntry {
  std::string id;
  LineTable via_dual;         // H(dg_translate(RHom(K, m)))
  LineTable via_translation;  // D_lambda(translate(m))
  bool agree = false;
};

struct SquareReport {
  std::vector<SquareEntry> entries;
  bool all_agree = false;
  std::string summary;
};

/// Tables are in (i, n, vertex) line coordinates with A_lambda vertices
/// renamed to A vertices through the matching.
SquareReport verify_square(const DualityContext& ctx, const DualityContext& ctx_lambda, const WallDatum& w,
                           const std::vector<TestObject>& testset);

}  // namespace koszulkit
