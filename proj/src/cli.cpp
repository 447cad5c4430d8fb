#include "koszulkit/cli.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace koszulkit::cli {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SpecError(std::string("missing key '") + key + "'");
  return j.at(key);
}

template <typename T>
T get_as(const json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw SpecError(std::string("bad value for '") + what + "'");
  }
}

Scalar parse_scalar(const json& j) {
  if (j.is_number_integer()) return Scalar(j.get<long long>());
  if (!j.is_string()) throw SpecError("rational entries must be strings such as \"-3/4\"");
  try {
    return Scalar::parse(j.get<std::string>());
  } catch (const std::exception&) {
    throw SpecError("cannot parse rational '" + j.get<std::string>() + "'");
  }
}

int vertex_of(const Quiver& q, const json& j) {
  const std::string name = get_as<std::string>(j, "vertex");
  for (int v = 0; v < q.vertex_count(); ++v) {
    if (q.vertices()[v] == name) return v;
  }
  throw SpecError("unknown vertex '" + name + "'");
}

Matrix matrix_from_json(const json& rows, std::size_t r, std::size_t c) {
  if (!rows.is_array() || rows.size() != r) throw SpecError("matrix has the wrong number of rows");
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (!rows[i].is_array() || rows[i].size() != c) throw SpecError("matrix has the wrong number of columns");
    for (std::size_t k = 0; k < c; ++k) m(i, k) = parse_scalar(rows[i][k]);
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k).to_string());
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(what + ": " + e.what());
  }
}

json dims_json(const std::vector<std::size_t>& d) { return json(d); }

json certificate_json(const KoszulCertificate& c, const Quiver& q) {
  json gens = json::array();
  for (std::size_t p = 0; p < c.generators.size(); ++p) {
    for (const auto& [g, n] : c.generators[p]) gens.push_back({p, q.vertices()[g.vertex], g.degree, n});
  }
  return {{"koszul", c.koszul},   {"bound", c.bound},         {"length", c.length},
          {"truncated", c.truncated}, {"failed_degree", c.failed_degree}, {"generators", gens}};
}

// Reads an input file and records its digest.
struct Input {
  std::string path;
  std::string text;
  json value;
};

Input load(const std::string& path) {
  Input in{path, read_file(path), {}};
  in.value = parse_json(in.text, path);
  return in;
}

json input_json(const Input& in) { return {{"path", in.path}, {"sha256", sha256_hex(in.text)}}; }

json base_report(const std::vector<std::string>& args) {
  return {{"format_version", kFormatVersion}, {"command", args}};
}

struct Outcome {
  int code = 0;
  json report;
  std::vector<std::pair<std::string, std::string>> files;  // written only with --out
};

std::string verdict_of(const KoszulCertificate& c) {
  if (!c.koszul) return "not-koszul";
  return c.truncated ? "koszul-within-bound" : "koszul";
}

// ------------------------------------------------------------------ commands

Outcome cmd_check(const std::vector<std::string>& args, const std::string& path) {
  Input in = load(path);
  Outcome o{0, base_report(args), {}};
  o.report["inputs"] = {{"algebra", input_json(in)}};
  AlgebraPtr a = algebra_from_json(in.value);
  std::string v = validate_algebra(*a);
  o.report["dim"] = a->dim();
  o.report["graded_dims"] = dims_json(a->graded_dims());
  o.report["validation"] = v;
  o.report["verdict"] = v.empty() ? "ok" : "invalid";
  o.code = v.empty() ? 0 : 1;
  return o;
}

Outcome cmd_koszul(const std::vector<std::string>& args, const std::string& path, int bound) {
  Input in = load(path);
  Outcome o{0, base_report(args), {}};
  o.report["inputs"] = {{"algebra", input_json(in)}};
  AlgebraPtr a = algebra_from_json(in.value);
  KoszulCertificate c = is_koszul(a, bound);
  o.report["bound"] = bound;
  o.report["certificate"] = certificate_json(c, a->quiver());
  o.report["verdict"] = verdict_of(c);
  ExtAlgebra e = ext_algebra(a, bound);
  o.report["ext_dims"] = dims_json(e.algebra.graded_dims());
  o.report["ext_quadratic"] = e.quadratic;
  o.report["ext_truncated"] = e.truncated;
  bool quadratic_input = true;
  for (const auto& arrow : a->quiver().arrows()) quadratic_input = quadratic_input && arrow.degree == 1;
  for (const auto& r : a->relations()) {
    for (const auto& [coeff, p] : r.terms) quadratic_input = quadratic_input && path_degree(a->quiver(), p) == 2;
  }
  if (quadratic_input) {
    GradedAlgebra qd = quadratic_dual(*a, bound);
    std::vector<std::size_t> qdims = qd.graded_dims();
    std::vector<std::size_t> edims = e.algebra.graded_dims();
    qdims.resize(std::max(qdims.size(), edims.size()));
    edims.resize(qdims.size());
    o.report["quadratic_dual_agrees"] = qdims == edims && find_isomorphism(e.algebra, qd).has_value();
  } else {
    o.report["quadratic_dual_agrees"] = nullptr;
  }
  return o;
}

Outcome cmd_dual(const std::vector<std::string>& args, const std::string& path, int bound, const std::string& out) {
  Input in = load(path);
  Outcome o{0, base_report(args), {}};
  o.report["inputs"] = {{"algebra", input_json(in)}};
  AlgebraPtr a = algebra_from_json(in.value);
  KoszulCertificate c = is_koszul(a, bound);
  ExtAlgebra e = ext_algebra(a, bound);
  json dual = algebra_to_json(e.algebra);
  o.report["bound"] = bound;
  o.report["verdict"] = verdict_of(c);
  o.report["certificate"] = certificate_json(c, a->quiver());
  o.report["dual_dims"] = dims_json(e.algebra.graded_dims());
  o.report["dual_quadratic"] = e.quadratic;
  o.report["truncated"] = e.truncated;
  o.report["dual_algebra"] = dual;
  std::string v = validate_algebra(e.algebra);
  o.report["dual_validation"] = v;
  if (!out.empty()) o.files.emplace_back(out, dual.dump(2) + "\n");
  o.code = v.empty() ? 0 : 1;
  return o;
}

json line_table_json(const LineTable& t, const Quiver& q) {
  json rows = json::array();
  for (const auto& [k, d] : t) rows.push_back({std::get<0>(k), std::get<1>(k), q.vertices()[std::get<2>(k)], d});
  return rows;
}

Outcome cmd_dualize(const std::vector<std::string>& args, const std::string& path, const std::string& module_path,
                    int bound, bool allow_truncated) {
  Input in = load(path);
  Input mod = load(module_path);
  Outcome o{0, base_report(args), {}};
  o.report["inputs"] = {{"algebra", input_json(in)}, {"module", input_json(mod)}};
  AlgebraPtr a = algebra_from_json(in.value);
  ComplexOfModules q = module_from_json(mod.value, a);
  if (std::string e = validate_complex(q); !e.empty()) throw AlgebraError("module: " + e);
  DualityContext ctx = make_context(a, bound, ContextOptions{allow_truncated});
  DualityResult r = koszul_duality(ctx, q);
  json table = json::array();
  for (const auto& [k, d] : r.cohomology.table()) table.push_back({k.first, k.second, d});
  o.report["bound"] = bound;
  o.report["truncated"] = ctx.truncated;
  o.report["certificate"] = certificate_json(ctx.certificate, a->quiver());
  o.report["table"] = table;
  o.report["line_table"] = line_table_json(r.table(), ctx.dual->quiver());
  o.report["representative_independent"] = r.representative_independent;
  o.report["strict_status"] = r.strict_status;
  o.report["verdict"] = r.representative_independent ? "ok" : "representative-dependent";
  o.code = r.representative_independent ? 0 : 1;
  return o;
}

Outcome cmd_verify_square(const std::vector<std::string>& args, const std::string& path, const std::string& testset,
                          int bound, std::optional<std::uint64_t> seed_flag) {
  Input in = load(path);
  Outcome o{0, base_report(args), {}};
  o.report["inputs"] = {{"wall", input_json(in)}};
  const std::string dir = std::filesystem::path(path).parent_path().string();
  WallDatum w = wall_from_json(in.value, dir.empty() ? "." : dir);
  DualityContext ctx = make_context(w.regular, bound);
  DualityContext ctx_lambda = make_context(w.singular, bound);
  std::vector<TestObject> objects;
  o.report["testset"] = testset;
  if (testset == "simples") {
    objects = simple_objects(w.regular);
  } else if (testset == "projectives") {
    objects = projective_objects(w.regular);
  } else if (testset.rfind("seeded:", 0) == 0) {
    int count = 0;
    try {
      count = std::stoi(testset.substr(7));
    } catch (const std::exception&) {
      throw SpecError("bad seeded test set '" + testset + "'");
    }
    if (count < 0) throw SpecError("bad seeded test set '" + testset + "'");
    const std::uint64_t seed = seed_flag ? *seed_flag : default_seed();
    o.report["seed"] = seed;
    objects = seeded_cones(ctx, seed, count);
  } else {
    throw SpecError("unknown test set '" + testset + "'");
  }
  IdempotentSquareReport idem = verify_idempotent_square(ctx, ctx_lambda, w);
  o.report["idempotent_square"] = {{"surjective", idem.surjective},       {"kernel_matches", idem.kernel_matches},
                                   {"quotient_matches", idem.quotient_matches}, {"zero_quotient", idem.zero_quotient},
                                   {"quotient_dims", idem.quotient_dims},   {"kernel_dims", idem.kernel_dims},
                                   {"failure", idem.failure}};
  SquareReport sq = verify_square(ctx, ctx_lambda, w, objects);
  json entries = json::array();
  for (const auto& e : sq.entries) {
    entries.push_back({{"id", e.id},
                       {"via_dual", line_table_json(e.via_dual, w.regular->quiver())},
                       {"via_translation", line_table_json(e.via_translation, w.regular->quiver())},
                       {"verdict", e.agree ? "agree" : "differ"}});
  }
  o.report["bound"] = bound;
  o.report["objects"] = entries;
  o.report["summary"] = sq.summary;
  const bool ok = sq.all_agree && idem.ok();
  o.report["verdict"] = ok ? "ok" : "failed";
  o.code = ok ? 0 : 1;
  return o;
}

Outcome cmd_examples(const std::vector<std::string>& args, const std::string& action, const std::string& name,
                     const std::string& out) {
  Outcome o{0, base_report(args), {}};
  if (action == "list") {
    o.report["examples"] = example_names();
    return o;
  }
  if (action != "emit") throw SpecError("examples expects 'list' or 'emit NAME'");
  if (name.empty()) throw SpecError("examples emit needs a name");
  json e = example(name);
  o.report = e;
  if (!out.empty()) o.files.emplace_back(out, e.dump(2) + "\n");
  return o;
}

}  // namespace

// --------------------------------------------------------------- formats

AlgebraPtr algebra_from_json(const json& j) {
  std::vector<std::string> vertices;
  for (const auto& v : field(j, "vertices")) vertices.push_back(get_as<std::string>(v, "vertices"));
  std::vector<Arrow> arrows;
  Quiver names(vertices, {});
  for (const auto& a : field(j, "arrows")) {
    Arrow arrow;
    arrow.label = get_as<std::string>(field(a, "label"), "label");
    arrow.source = vertex_of(names, field(a, "from"));
    arrow.target = vertex_of(names, field(a, "to"));
    arrow.degree = a.contains("degree") ? get_as<int>(a.at("degree"), "degree") : 1;
    arrows.push_back(std::move(arrow));
  }
  Quiver q(std::move(vertices), std::move(arrows));
  std::vector<Relation> relations;
  for (const auto& r : field(j, "relations")) {
    Relation rel;
    for (const auto& t : r) {
      std::vector<std::string> labels;
      for (const auto& l : field(t, "path")) labels.push_back(get_as<std::string>(l, "path"));
      if (labels.empty()) throw SpecError("relation terms need a nonempty path");
      for (const auto& l : labels) {
        try {
          static_cast<void>(q.arrow_index(l));
        } catch (const AlgebraError&) {
          throw SpecError("unknown arrow '" + l + "'");
        }
      }
      rel.terms.emplace_back(parse_scalar(field(t, "coeff")), path_from_labels(q, labels));
    }
    relations.push_back(std::move(rel));
  }
  const int bound = get_as<int>(field(j, "degree_bound"), "degree_bound");
  return std::make_shared<GradedAlgebra>(build_algebra(q, relations, bound));
}

json algebra_to_json(const GradedAlgebra& a) {
  const Quiver& q = a.quiver();
  json arrows = json::array();
  for (const auto& arrow : q.arrows()) {
    arrows.push_back({{"label", arrow.label},
                      {"from", q.vertices()[arrow.source]},
                      {"to", q.vertices()[arrow.target]},
                      {"degree", arrow.degree}});
  }
  json relations = json::array();
  for (const auto& r : a.relations()) {
    json terms = json::array();
    for (const auto& [c, p] : r.terms) {
      json labels = json::array();
      for (int arrow : p.arrows) labels.push_back(q.arrows()[arrow].label);
      terms.push_back({{"coeff", c.to_string()}, {"path", labels}});
    }
    relations.push_back(std::move(terms));
  }
  return {{"format_version", kFormatVersion},
          {"vertices", q.vertices()},
          {"arrows", arrows},
          {"relations", relations},
          {"degree_bound", a.degree_bound()}};
}

Bimodule bimodule_from_json(const json& j, const AlgebraPtr& left, const AlgebraPtr& right) {
  std::vector<BimoduleTag> tags;
  for (const auto& t : field(j, "tags")) {
    tags.push_back(BimoduleTag{get_as<int>(field(t, "degree"), "degree"), vertex_of(left->quiver(), field(t, "left")),
                               vertex_of(right->quiver(), field(t, "right"))});
  }
  const std::size_t n = tags.size();
  auto actions = [&](const json& block, const Quiver& q) {
    std::vector<Matrix> out;
    for (const auto& arrow : q.arrows()) {
      out.push_back(block.contains(arrow.label) ? matrix_from_json(block.at(arrow.label), n, n) : Matrix(n, n));
    }
    return out;
  };
  return Bimodule(left, right, tags, actions(field(j, "left_actions"), left->quiver()),
                  actions(field(j, "right_actions"), right->quiver()));
}

json bimodule_to_json(const Bimodule& b) {
  const Quiver& lq = b.left_algebra()->quiver();
  const Quiver& rq = b.right_algebra()->quiver();
  json tags = json::array();
  for (const auto& t : b.tags()) tags.push_back({{"degree", t.degree}, {"left", lq.vertices()[t.left]}, {"right", rq.vertices()[t.right]}});
  json left = json::object();
  for (std::size_t a = 0; a < lq.arrows().size(); ++a) left[lq.arrows()[a].label] = matrix_to_json(b.left_action(static_cast<int>(a)));
  json right = json::object();
  for (std::size_t a = 0; a < rq.arrows().size(); ++a) right[rq.arrows()[a].label] = matrix_to_json(b.right_action(static_cast<int>(a)));
  return {{"tags", tags}, {"left_actions", left}, {"right_actions", right}};
}

ComplexOfModules module_from_json(const json& j, const AlgebraPtr& a) {
  const std::string type = get_as<std::string>(field(j, "type"), "type");
  const int twist = j.contains("twist") ? get_as<int>(j.at("twist"), "twist") : 0;
  const int shift = j.contains("shift") ? get_as<int>(j.at("shift"), "shift") : 0;
  ComplexOfModules c;
  if (type == "simple") {
    c = single_term_complex(simple_module(a, vertex_of(a->quiver(), field(j, "vertex"))).twisted(twist));
  } else if (type == "projective") {
    c = single_term_complex(projective_module(a, vertex_of(a->quiver(), field(j, "vertex")), twist));
  } else if (type == "injective") {
    c = single_term_complex(injective_module(a, vertex_of(a->quiver(), field(j, "vertex")), twist));
  } else if (type == "k") {
    std::vector<GradedModule> parts;
    for (int v = 0; v < a->vertex_count(); ++v) parts.push_back(simple_module(a, v).twisted(twist));
    c = single_term_complex(direct_sum(parts));
  } else if (type == "projective_complex") {
    c = ComplexOfModules{a, j.contains("lowest") ? get_as<int>(j.at("lowest"), "lowest") : 0, {}, {}};
    for (const auto& term : field(j, "terms")) {
      std::vector<GradedModule> parts;
      for (const auto& s : term) {
        parts.push_back(projective_module(a, vertex_of(a->quiver(), field(s, "vertex")),
                                          s.contains("twist") ? get_as<int>(s.at("twist"), "twist") : 0));
      }
      c.terms.push_back(parts.empty() ? GradedModule(a) : direct_sum(parts));
    }
    const json& ds = field(j, "differentials");
    if (!ds.is_array() || ds.size() + 1 != std::max<std::size_t>(c.terms.size(), 1)) {
      throw SpecError("a complex of n terms needs n - 1 differentials");
    }
    for (std::size_t k = 0; k < ds.size(); ++k) {
      c.differentials.push_back(matrix_from_json(ds[k], c.terms[k + 1].dim(), c.terms[k].dim()));
    }
    if (twist != 0) c = twist_complex(c, twist);
  } else {
    throw SpecError("unknown module type '" + type + "'");
  }
  return shift == 0 ? c : shift_complex(c, shift);
}

WallDatum wall_from_json(const json& j, const std::string& base_dir) {
  auto algebra_ref = [&](const char* key) {
    const json& v = field(j, key);
    if (v.is_string()) {
      std::filesystem::path p(v.get<std::string>());
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      return algebra_from_json(parse_json(read_file(p.string()), p.string()));
    }
    return algebra_from_json(v);
  };
  AlgebraPtr a = algebra_ref("algebra");
  AlgebraPtr s = algebra_ref("singular_algebra");
  Bimodule x = bimodule_from_json(field(j, "bimodule_x"), a, s);
  Bimodule xp = bimodule_from_json(field(j, "bimodule_x_prime"), s, a);
  std::vector<int> kill;
  for (const auto& v : field(j, "kill")) kill.push_back(vertex_of(a->quiver(), v));
  std::vector<std::pair<int, int>> matching;
  for (const auto& m : field(j, "matching")) {
    if (!m.is_array() || m.size() != 2) throw SpecError("matching entries are [singular vertex, vertex] pairs");
    matching.emplace_back(vertex_of(s->quiver(), m[0]), vertex_of(a->quiver(), m[1]));
  }
  return make_wall_datum(a, s, std::move(x), std::move(xp), std::move(kill), std::move(matching),
                         get_as<int>(field(j, "shift_s"), "shift_s"));
}

// ---------------------------------------------------------------- examples

std::vector<std::string> example_names() { return {"semisimple-2", "dual-numbers", "sl2-principal-block", "sl2-wall"}; }

namespace {

json arrow(const char* label, const char* from, const char* to) {
  return {{"label", label}, {"from", from}, {"to", to}, {"degree", 1}};
}

json one_term_relation(const std::vector<std::string>& path) {
  return json::array({json{{"coeff", "1"}, {"path", path}}});
}

// The principal block of category O for sl2: e is the dominant vertex
// (finite-dimensional simple), s the antidominant one; P(s) is projective-injective.
json sl2_block() {
  return {{"format_version", kFormatVersion},
          {"vertices", json::array({"e", "s"})},
          {"arrows", json::array({arrow("a", "e", "s"), arrow("b", "s", "e")})},
          {"relations", json::array({one_term_relation({"a", "b"})})},
          {"degree_bound", 4}};
}

json point_algebra() {
  return {{"format_version", kFormatVersion},
          {"vertices", json::array({"lambda"})},
          {"arrows", json::array()},
          {"relations", json::array()},
          {"degree_bound", 1}};
}

}  // namespace

json example(const std::string& name) {
  if (name == "semisimple-2") {
    return {{"format_version", kFormatVersion},
            {"vertices", json::array({"1", "2"})},
            {"arrows", json::array()},
            {"relations", json::array()},
            {"degree_bound", 1}};
  }
  if (name == "dual-numbers") {
    return {{"format_version", kFormatVersion},
            {"vertices", json::array({"0"})},
            {"arrows", json::array({arrow("x", "0", "0")})},
            {"relations", json::array({one_term_relation({"x", "x"})})},
            {"degree_bound", 4}};
  }
  if (name == "sl2-principal-block") return sl2_block();
  if (name == "sl2-wall") {
    // Translation to the wall is M |-> M e_s (tensor with A e_s), out of the
    // wall is tensor with e_s A. The singular block is semisimple with one
    // simple; the finite-dimensional simple at e is killed.
    AlgebraPtr a = algebra_from_json(sl2_block());
    AlgebraPtr k = algebra_from_json(point_algebra());
    const int s = a->quiver().vertex_index("s");
    return {{"format_version", kFormatVersion},
            {"algebra", sl2_block()},
            {"singular_algebra", point_algebra()},
            {"bimodule_x", bimodule_to_json(left_corner_bimodule(a, s, k))},
            {"bimodule_x_prime", bimodule_to_json(right_corner_bimodule(a, s, k))},
            {"kill", json::array({"e"})},
            {"matching", json::array({json::array({"lambda", "s"})})},
            {"shift_s", -2}};
  }
  throw SpecError("unknown example '" + name + "'");
}

// ------------------------------------------------------------------ utility

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("KOSZULKIT_SEED");
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used != std::string(env).size()) throw SpecError("");
    return v;
  } catch (const std::exception&) {
    throw SpecError(std::string("KOSZULKIT_SEED is not an unsigned integer: '") + env + "'");
  }
}

CommandResult run_command(const std::vector<std::string>& args) {
  CLI::App app{"koszulkit: Koszul duality for finite-dimensional graded quiver algebras", "koszulkit"};
  app.require_subcommand(1);
  std::string spec;
  std::string module;
  std::string wall;
  std::string out;
  std::string testset = "simples";
  std::string action;
  std::string name;
  int bound = 4;
  bool allow_truncated = false;
  std::optional<std::uint64_t> seed;

  CLI::App* check = app.add_subcommand("check", "Build an algebra and validate it");
  check->add_option("spec", spec, "Algebra spec file")->required();
  CLI::App* koszul = app.add_subcommand("koszul", "Koszulity certificate and Ext dimensions");
  koszul->add_option("spec", spec, "Algebra spec file")->required();
  koszul->add_option("--bound", bound, "Homological degree bound");
  CLI::App* dual = app.add_subcommand("dual", "Compute the Koszul dual as an algebra spec");
  dual->add_option("spec", spec, "Algebra spec file")->required();
  dual->add_option("--bound", bound, "Homological degree bound");
  dual->add_option("--out", out, "Write the dual algebra spec here");
  CLI::App* dualize = app.add_subcommand("dualize", "Apply the Koszul duality functor to a module or complex");
  dualize->add_option("spec", spec, "Algebra spec file")->required();
  dualize->add_option("module", module, "Module or complex spec file")->required();
  dualize->add_option("--bound", bound, "Homological degree bound");
  dualize->add_flag("--allow-truncated", allow_truncated, "Accept a Koszul complex cut off by the bound");
  CLI::App* square = app.add_subcommand("verify-square", "Check the translation/truncation square on a test set");
  square->add_option("wall", wall, "Wall spec file")->required();
  square->add_option("--testset", testset, "simples, projectives or seeded:N");
  square->add_option("--bound", bound, "Homological degree bound");
  square->add_option("--seed", seed, "Seed for seeded test sets (default: KOSZULKIT_SEED or 1)");
  CLI::App* examples = app.add_subcommand("examples", "List or emit built-in examples");
  examples->add_option("action", action, "list or emit")->required();
  examples->add_option("name", name, "Example name");
  examples->add_option("--out", out, "Write the example here");

  CommandResult result;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    result.out = app.help();
    return result;
  } catch (const CLI::ParseError& e) {
    result.code = 2;
    result.err = std::string(e.what()) + "\n";
    return result;
  }
  if (bound < 0) {
    result.code = 2;
    result.err = "--bound must be nonnegative\n";
    return result;
  }

  Outcome o;
  try {
    if (check->parsed()) o = cmd_check(args, spec);
    else if (koszul->parsed()) o = cmd_koszul(args, spec, bound);
    else if (dual->parsed()) o = cmd_dual(args, spec, bound, out);
    else if (dualize->parsed()) o = cmd_dualize(args, spec, module, bound, allow_truncated);
    else if (square->parsed()) o = cmd_verify_square(args, wall, testset, bound, seed);
    else o = cmd_examples(args, action, name, out);
  } catch (const SpecError& e) {
    result.code = 2;
    result.err = std::string("parse error: ") + e.what() + "\n";
    return result;
  } catch (const std::exception& e) {
    // AlgebraError, WallError, DualityError and friends: the input parsed but
    // does not validate.
    result.code = 1;
    result.err = std::string("validation failure: ") + e.what() + "\n";
    return result;
  }
  for (const auto& [path, text] : o.files) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
      result.code = 2;
      result.err = "cannot write '" + path + "'\n";
      return result;
    }
    f << text;
  }
  result.code = o.code;
  result.out = o.report.dump(2) + "\n";
  return result;
}

}  // namespace koszulkit::cli
