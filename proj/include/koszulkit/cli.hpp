#pragma once

// Command-line frontend: JSON file formats, the example library and reports.
//
// Exit codes: 0 success, 1 validation failure, 2 parse error.

#include <json.hpp>

#include "koszulkit/functors.hpp"

namespace koszulkit::cli {

using nlohmann::json;

inline constexpr int kFormatVersion = 1;
inline constexpr std::uint64_t kDefaultSeed = 1;

/// Malformed input file or arguments.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {vertices, arrows: [{from, to, label, degree}], relations: [[{coeff, path}]],
/// degree_bound}; coefficients are "p/q" strings.
AlgebraPtr algebra_from_json(const json& j);
json algebra_to_json(const GradedAlgebra& a);

/// {tags: [{degree, left, right}], left_actions: {label: rows}, right_actions:
/// {label: rows}} with vertex names and rational strings.
Bimodule bimodule_from_json(const json& j, const AlgebraPtr& left, const AlgebraPtr& right);
json bimodule_to_json(const Bimodule& b);

/// {type: simple|projective|injective|k, vertex, twist, shift} or
/// {type: projective_complex, lowest, terms: [[{vertex, twist}]], differentials}.
ComplexOfModules module_from_json(const json& j, const AlgebraPtr& a);

/// Loads a wall datum; algebra references are inline objects or file paths
/// relative to `base_dir`.
WallDatum wall_from_json(const json& j, const std::string& base_dir);

std::vector<std::string> example_names();
/// Throws SpecError for unknown names.
json example(const std::string& name);

std::string sha256_hex(const std::string& bytes);
/// Seed from KOSZULKIT_SEED, or kDefaultSeed.
std::uint64_t default_seed();

struct CommandResult {
  int code = 0;
  std::string out;
  std::string err;
};

/// Runs one command line (without the program name).
CommandResult run_command(const std::vector<std::string>& args);

}  // namespace koszulkit::cli
