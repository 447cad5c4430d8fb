// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits with the number of failures.

#include <array>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "koszulkit/cli.hpp"

using namespace koszulkit;

namespace {

AlgebraPtr sl2() {
  Quiver q({"e", "s"}, {Arrow{"a", 0, 1, 1}, Arrow{"b", 1, 0, 1}});
  return std::make_shared<GradedAlgebra>(
      build_algebra(q, {Relation{{{Scalar(1), path_from_labels(q, {"a", "b"})}}}}, 4));
}

AlgebraPtr dual_numbers() {
  Quiver q({"0"}, {Arrow{"x", 0, 0, 1}});
  return std::make_shared<GradedAlgebra>(build_algebra(q, {Relation{{{Scalar(1), path_from_labels(q, {"x", "x"})}}}}, 4));
}

AlgebraPtr point() { return std::make_shared<GradedAlgebra>(build_algebra(Quiver({"lambda"}, {}), {}, 1)); }

// Brute-force oracle for A! of the sl2 block: paths in the quiver with
// arrows a*: s -> e and b*: e -> s avoiding the subword a* b*. Returns
// counts[degree][source][target].
using PathCounts = std::vector<std::array<std::array<std::size_t, 2>, 2>>;
PathCounts dual_path_counts(int max_degree) {
  struct Word {
    int source;
    int target;
    int last;  // -1 none, 0 a*, 1 b*
  };
  PathCounts counts(max_degree + 1);
  std::vector<Word> layer{{0, 0, -1}, {1, 1, -1}};
  for (int d = 0; d <= max_degree; ++d) {
    for (const auto& w : layer) ++counts[d][w.source][w.target];
    std::vector<Word> next;
    for (const auto& w : layer) {
      if (w.target == 1) next.push_back({w.source, 0, 0});                // a*
      if (w.target == 0 && w.last != 0) next.push_back({w.source, 1, 1});  // b*, unless after a*
    }
    layer = next;
  }
  return counts;
}

std::vector<std::size_t> trimmed(std::vector<std::size_t> v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
  return v;
}

std::size_t total(const LineTable& t) {
  std::size_t n = 0;
  for (const auto& [k, d] : t) n += d;
  return n;
}

std::string show(const LineTable& t, const GradedAlgebra& a) {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (const auto& [k, d] : t) {
    out << (first ? "" : " ") << "(" << std::get<0>(k) << "," << std::get<1>(k) << ","
        << a.quiver().vertices().at(std::get<2>(k)) << "):" << d;
    first = false;
  }
  return out.str() + "}";
}

LineTable moved(const LineTable& t, int di, int dn) {
  LineTable out;
  for (const auto& [k, d] : t) out[{std::get<0>(k) + di, std::get<1>(k) + dn, std::get<2>(k)}] += d;
  return out;
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Runner {
 public:
  void run(int number, const std::string& name, const std::function<Outcome()>& body) {
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << number << " " << name;
    if (!o.detail.empty()) std::cout << ": " << o.detail;
    std::cout << std::endl;
    failures_ += o.pass ? 0 : 1;
  }
  [[nodiscard]] int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

struct Fixture {
  AlgebraPtr a = sl2();
  AlgebraPtr k = point();
  DualityContext ctx = make_context(a, 4);
  DualityContext ctx_lambda = make_context(k, 2);
  WallDatum wall = make_wall_datum(a, k, left_corner_bimodule(a, 1, k), right_corner_bimodule(a, 1, k), {0}, {{0, 1}}, -2);
};

std::vector<TestObject> corpus(const DualityContext& ctx, std::uint64_t seed, int cones) {
  std::vector<TestObject> out = simple_objects(ctx.algebra);
  for (auto& p : projective_objects(ctx.algebra)) out.push_back(p);
  for (int v = 0; v < ctx.algebra->vertex_count(); ++v) {
    out.push_back({"injective " + ctx.algebra->quiver().vertices()[v], single_term_complex(injective_module(ctx.algebra, v))});
  }
  for (auto& c : seeded_cones(ctx, seed, cones)) out.push_back(c);
  return out;
}

Outcome sign_rules(const Fixture& f) {
  std::size_t checked = 0;
  std::string failure;
  auto algebra = [&](const std::string& what, const DGAlgebra& x) {
    ++checked;
    std::string e = validate_dg_algebra(x);
    if (!e.empty() && failure.empty()) failure = what + ": " + e;
  };
  auto module = [&](const std::string& what, const DGModule& m) {
    ++checked;
    std::string e = validate_dg_module(m);
    if (!e.empty() && failure.empty()) failure = what + ": " + e;
  };
  auto map = [&](const std::string& what, const DGMap& m) {
    ++checked;
    std::string e = validate_dg_map(m);
    if (!e.empty() && failure.empty()) failure = what + ": " + e;
  };

  const DualityContext& ctx = f.ctx;
  DGAlgebraPtr over = dg_from_graded(f.a, 1, -1);
  algebra("A", *over);
  algebra("End(K)", *ctx.end.algebra);
  algebra("A!", *ctx.dual_dg);
  algebra("End(K_lambda)", *f.ctx_lambda.end.algebra);
  module("K right", ctx.k_right);
  module("K left", ctx.end.evaluation);
  module("regular", regular(ctx).module);
  for (int w = 0; w < 2; ++w) {
    CertifiedModule g = generator(ctx, w);
    module("generator", g.module);
    module("generator shifted twisted", certified_shift(certified_twist(g, 1), 2).module);
    module("tensor back", tensor_back(ctx, g).module);
  }
  TranslationKernel tk = translation_kernel(ctx, f.ctx_lambda, f.wall);
  module("Hom(K_lambda, TK) over End(K)", tk.left);
  module("Hom(K_lambda, TK) over End(K_lambda)", tk.right);

  for (const auto& obj : corpus(ctx, 2718, 12)) {
    RHomModule r = rhom(ctx, obj.complex);
    module("rhom " + obj.id, r.certified.module);
    module("dg translate " + obj.id, dg_translate(ctx, tk, r.certified).module);
    NaturalMap p = psi(ctx, obj.complex);
    map("psi " + obj.id, p.map);
    DGCone c = cone(p.map);
    module("cone of psi " + obj.id, c.module);
    map("cone inclusion " + obj.id, c.inclusion);
    map("cone projection " + obj.id, c.projection);
    map("phi " + obj.id, phi(ctx, r.certified).map);
    module("totalization " + obj.id, totalize(obj.complex, over));
    module("totalization by cones " + obj.id, totalize_by_cones(obj.complex, over));
    map("sigma " + obj.id, sigma_twist_iso(obj.complex, over).map);
  }

  // Negative control: signs by internal degree break the chain map condition.
  int rejected = 0;
  for (const auto& obj : seeded_cones(ctx, 11, 10)) {
    DGMap alt = sigma_twist_iso(obj.complex, over).map;
    for (std::size_t j = 0; j < alt.matrix.cols(); ++j) {
      alt.matrix(j, j) = (alt.source.tag(j).internal % 2 == 0) ? Scalar(1) : Scalar(-1);
    }
    rejected += validate_dg_map(alt).empty() ? 0 : 1;
  }
  if (!failure.empty()) return {false, failure};
  if (rejected == 0) return {false, "perturbed signs were never rejected"};
  return {true, std::to_string(checked) + " structures valid, " + std::to_string(rejected) + "/10 perturbed maps rejected"};
}

Outcome sl2_ext(const Fixture& f) {
  const DualityContext& ctx = f.ctx;
  PathCounts oracle = dual_path_counts(4);
  std::vector<std::size_t> oracle_dims;
  for (const auto& c : oracle) oracle_dims.push_back(c[0][0] + c[0][1] + c[1][0] + c[1][1]);
  oracle_dims = trimmed(oracle_dims);

  KoszulCertificate cert = is_koszul(f.a, 4);
  if (!cert.koszul || cert.truncated) return {false, "not certified Koszul"};
  std::size_t generators = 0;
  for (std::size_t p = 0; p < cert.generators.size(); ++p) {
    for (const auto& [g, m] : cert.generators[p]) {
      if (g.degree != static_cast<int>(p)) return {false, "generator off the diagonal"};
      generators += m;
    }
  }
  std::vector<std::size_t> ext_dims = ctx.ext.algebra.graded_dims();
  if (trimmed(ext_dims) != oracle_dims) return {false, "Ext dims differ from path count"};
  if (generators != 5 || ctx.ext.ext_basis.size() != 5) return {false, "total Ext dimension is not 5"};
  GradedAlgebra qd = quadratic_dual(*f.a);
  if (!find_isomorphism(ctx.ext.algebra, qd)) return {false, "Ext algebra not isomorphic to the quadratic dual"};
  GradedAlgebra back = quadratic_dual(qd);
  if (back.graded_dims() != f.a->graded_dims() || !find_isomorphism(back, *f.a)) return {false, "double dual differs"};
  std::ostringstream d;
  d << "Ext dims (";
  for (std::size_t i = 0; i < ext_dims.size(); ++i) d << (i ? "," : "") << ext_dims[i];
  d << "), total 5, Ext = quadratic dual, double dual = A";
  return {true, d.str()};
}

Outcome dual_numbers_ext() {
  AlgebraPtr a = dual_numbers();
  KoszulCertificate cert = is_koszul(a, 4);
  if (!cert.koszul) return {false, "not Koszul within bound"};
  // Minimal resolution ... -> A<2> -> A<1> -> A -> k, each map multiplication by x.
  for (std::size_t p = 0; p < cert.generators.size(); ++p) {
    std::map<Generator, std::size_t> expected{{Generator{0, static_cast<int>(p)}, 1}};
    if (cert.generators[p] != expected) return {false, "resolution term " + std::to_string(p) + " differs"};
  }
  ExtAlgebra ext = ext_algebra(a, 4);
  std::vector<std::size_t> dims = ext.algebra.graded_dims();
  if (dims != std::vector<std::size_t>(5, 1)) return {false, "Ext dims are not all 1"};
  GradedAlgebra qd = quadratic_dual(*a, 4);
  if (!find_isomorphism(ext.algebra, qd)) return {false, "Ext algebra not isomorphic to the quadratic dual"};
  return {true, "Ext^n dims 1 for n <= 4, Ext = k[y] = quadratic dual"};
}

Outcome natural_maps(const Fixture& f) {
  const DualityContext& ctx = f.ctx;
  int psi_count = 0;
  int phi_count = 0;
  auto check_psi = [&](const ComplexOfModules& q) {
    ++psi_count;
    return psi(ctx, q).certificate.quasi_iso;
  };
  auto check_phi = [&](const CertifiedModule& n) {
    ++phi_count;
    return phi(ctx, n).certificate.quasi_iso;
  };
  for (int w = 0; w < 2; ++w) {
    if (!check_psi(ctx.koszul.per_vertex[w].complex)) return {false, "psi on K_w"};
    CertifiedModule g = generator(ctx, w);
    if (!check_phi(g) || !check_phi(certified_shift(certified_twist(g, -1), 1))) return {false, "phi on a generator"};
  }
  if (!check_psi(single_term_complex(semisimple_top(f.a)))) return {false, "psi on k"};
  if (!check_phi(regular(ctx))) return {false, "phi on E"};
  const auto cones = seeded_cones(ctx, 20261019, 24);
  for (const auto& c : cones) {
    if (!check_psi(c.complex)) return {false, "psi on " + c.id};
    if (!check_phi(rhom(ctx, c.complex).certified)) return {false, "phi on RHom of " + c.id};
  }
  return {true, "psi on " + std::to_string(psi_count) + " objects, phi on " + std::to_string(phi_count) +
                    " objects, all quasi-isomorphisms"};
}

Outcome sigma(const Fixture& f) {
  int checked = 0;
  // Complexes over A and over A!.
  DualityContext dual_ctx = make_context(f.ctx.dual, 4);
  for (const DualityContext* c : std::vector<const DualityContext*>{&f.ctx, &dual_ctx}) {
    DGAlgebraPtr over = dg_from_graded(c->algebra, 1, -1);
    for (const auto& obj : seeded_cones(*c, 99, 12)) {
      SigmaIso s = sigma_twist_iso(obj.complex, over);
      if (!s.isomorphism) return {false, obj.id + ": " + s.failure};
      ++checked;
    }
  }
  int tables = 0;
  for (const auto& obj : corpus(f.ctx, 5, 6)) {
    LineTable base = koszul_duality(f.ctx, obj.complex).table();
    LineTable twisted = koszul_duality(f.ctx, twist_complex(obj.complex, 1)).table();
    if (twisted != moved(base, 1, -1)) return {false, "twist rule on " + obj.id};
    ++tables;
  }
  return {true, std::to_string(checked) + " sigma isomorphisms, twist rule on " + std::to_string(tables) + " tables"};
}

Outcome idempotent_square(const Fixture& f) {
  IdempotentSquareReport r = verify_idempotent_square(f.ctx, f.ctx_lambda, f.wall);
  if (!r.ok()) return {false, r.failure};
  // Kernel oracle: every path of A! except e_s passes through e.
  PathCounts oracle = dual_path_counts(4);
  std::vector<std::size_t> kernel;
  for (std::size_t d = 0; d < oracle.size(); ++d) {
    std::size_t all = oracle[d][0][0] + oracle[d][0][1] + oracle[d][1][0] + oracle[d][1][1];
    kernel.push_back(all - (d == 0 ? 1 : 0) * oracle[d][1][1]);
  }
  if (trimmed(r.kernel_dims) != trimmed(kernel)) return {false, "kernel dims differ from oracle"};
  if (r.quotient_dims != f.k->graded_dims()) return {false, "quotient dims differ from A_lambda"};
  return {true, "surjective, kernel = ideal of e_e, quotient = A_lambda"};
}

Outcome square(const Fixture& f) {
  std::vector<TestObject> objects = simple_objects(f.a);
  for (auto& p : projective_objects(f.a)) objects.push_back(p);
  for (auto& c : seeded_cones(f.ctx, 314, 10)) objects.push_back(c);
  SquareReport r = verify_square(f.ctx, f.ctx_lambda, f.wall, objects);
  if (!r.all_agree) {
    for (const auto& e : r.entries) {
      if (!e.agree) return {false, e.id + " disagrees; " + r.summary};
    }
  }
  // Hand check: T(L(s)) = k_lambda, dual is a single class; T(L(e)) = 0.
  if (!r.entries[0].via_dual.empty() || total(r.entries[1].via_dual) != 1) return {false, "simple images wrong"};
  return {true, r.summary};
}

Outcome exchange(const Fixture& f) {
  PathCounts oracle = dual_path_counts(4);
  std::vector<std::string> problems;
  for (int w = 0; w < 2; ++w) {
    const std::string name = f.a->quiver().vertices()[w];
    // Simple -> projective pattern of e_w A!: one class per path from w.
    LineTable simple = koszul_duality(f.ctx, single_term_complex(simple_module(f.a, w))).table();
    LineTable expected;
    for (std::size_t d = 0; d < oracle.size(); ++d) {
      for (int v = 0; v < 2; ++v) {
        if (oracle[d][w][v] > 0) expected[{0, static_cast<int>(d), v}] = oracle[d][w][v];
      }
    }
    if (simple != expected) problems.push_back("D(L(" + name + ")) = " + show(simple, *f.a));
    // Projective -> simple pattern: a single one-dimensional class.
    LineTable proj = koszul_duality(f.ctx, single_term_complex(projective_module(f.a, w))).table();
    if (proj.size() != 1 || total(proj) != 1) problems.push_back("D(P(" + name + ")) = " + show(proj, *f.a));
  }
  if (problems.empty()) return {true, "simples give projective patterns, projectives give simple patterns"};
  std::string detail;
  for (const auto& p : problems) detail += (detail.empty() ? "" : "; ") + p;
  return {false, detail + " is not a simple pattern"};
}

Outcome cli_checks() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "koszulkit_acceptance";
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  };
  const std::string alg = write("sl2.json", cli::example("sl2-principal-block").dump(2));
  const std::string dn = write("dn.json", cli::example("dual-numbers").dump(2));
  const std::string wall = write("wall.json", cli::example("sl2-wall").dump(2));
  const std::string mod = write("pe.json", R"({"type": "projective", "vertex": "e"})");
  const std::vector<std::vector<std::string>> commands{
      {"check", alg},
      {"koszul", alg},
      {"koszul", dn, "--bound", "4"},
      {"dual", alg},
      {"dualize", alg, mod},
      {"verify-square", wall, "--testset", "projectives"},
      {"verify-square", wall, "--testset", "seeded:5", "--seed", "42"},
  };
  for (const auto& args : commands) {
    cli::CommandResult first = cli::run_command(args);
    cli::CommandResult second = cli::run_command(args);
    if (first.code != 0) return {false, args[0] + " failed: " + first.err};
    if (first.out != second.out) return {false, args[0] + " output differs between runs"};
  }
  const std::string once = (dir / "dual1.json").string();
  const std::string twice = (dir / "dual2.json").string();
  if (cli::run_command({"dual", alg, "--out", once}).code != 0) return {false, "dual failed"};
  if (cli::run_command({"check", once}).code != 0) return {false, "dual output does not validate"};
  if (cli::run_command({"dual", once, "--out", twice}).code != 0) return {false, "second dual failed"};
  std::ifstream in(twice);
  AlgebraPtr back = cli::algebra_from_json(cli::json::parse(in));
  AlgebraPtr original = sl2();
  if (!find_isomorphism(*back, *original)) return {false, "dual of dual not isomorphic to the input"};
  return {true, std::to_string(commands.size()) + " commands byte-identical on rerun, dual round trip isomorphic"};
}

}  // namespace

int main() {
  Fixture f;
  Runner r;
  r.run(1, "sign rules", [&] { return sign_rules(f); });
  r.run(2, "sl2 block Ext algebra", [&] { return sl2_ext(f); });
  r.run(3, "dual numbers", [] { return dual_numbers_ext(); });
  r.run(4, "psi and phi", [&] { return natural_maps(f); });
  r.run(5, "sigma and the twist rule", [&] { return sigma(f); });
  r.run(6, "idempotent square", [&] { return idempotent_square(f); });
  r.run(7, "translation square", [&] { return square(f); });
  r.run(8, "projective and simple exchange", [&] { return exchange(f); });
  r.run(9, "cli determinism and round trip", [] { return cli_checks(); });
  std::cout << (9 - r.failures()) << "/9 criteria passed" << std::endl;
  return r.failures();
}
