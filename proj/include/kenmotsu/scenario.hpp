#pragma once

// Scenario configuration: the immersion, the distributions, the warped data
// and how to sample.  Loaded from YAML or from a built-in name.

#include "kenmotsu/ambient.hpp"
#include "kenmotsu/slant.hpp"
#include "kenmotsu/warped.hpp"

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace kenmotsu {

enum class Suite { axioms, frames, slant, warped, inequality };

const char* suite_name(Suite s);
Suite parse_suite(const std::string& name);  // throws ScenarioError("suite", ...)
const std::vector<Suite>& all_suites();

struct Tolerances {
  double axioms = 1e-8;
  double projector = 1e-10;
  double frames = 1e-6;          // Gauss/Weingarten and h consistency
  double slant = 1e-8;           // P^2 characterization and its consequences
  double slant_constancy = kSlantConstancyTolerance;
  double oracle_agreement = 1e-7;
  double lemma = 1e-6;           // identities algebraic in h, A, P, Q
  double theta_derivative = 1e-5;  // identities with X(theta_2)
  double fit = 1e-8;
  double characterization = 1e-6;
  double frame6 = 1e-8;
  double inequality = 1e-6;      // allowed negative slack

  Tolerances scaled(double factor) const;
};

// A claimed closed form, compared against the oracle at every sample.
struct Claim {
  std::string quantity;  // cos_theta1 | cos_theta2 | f_squared
  std::string expr;
  std::string statement;
};

struct Sampling {
  std::uint64_t seed = 20240607;
  std::size_t random = 20;
  std::size_t grid = 0;              // per-axis count; 0 = random
  std::vector<VectorXd> points;      // explicit points override both
  std::size_t ambient_points = 100;  // for the axiom suite
};

struct Scenario {
  std::string name;
  int m = 0;
  MetricModel metric = MetricModel::kenmotsu;
  std::shared_ptr<const KenmotsuStructure> structure;
  std::shared_ptr<const Immersion> immersion;
  std::optional<Distribution> d1;
  std::optional<Distribution> d2;
  std::optional<FieldExpr> xi;
  std::optional<WarpedPartition> partition;
  std::optional<std::string> f;
  std::optional<std::string> mu;  // defaults to ln(f)
  Sampling sampling;
  Tolerances tolerances;
  std::set<Suite> suites;
  std::vector<Claim> claims;
  std::vector<std::string> notes;  // static discrepancy entries

  std::vector<VectorXd> samples() const;
  // Index of the parameter whose coordinate field is xi, if any.
  std::optional<Eigen::Index> xi_parameter() const;
};

// A path to a YAML file or one of builtin_names().  Throws ScenarioError
// (naming the offending field) for any invalid content.
Scenario load_scenario(const std::string& path_or_builtin);
Scenario parse_scenario_yaml(const std::string& text, const std::string& origin = "<string>");

const std::vector<std::string>& builtin_names();
Scenario builtin_scenario(const std::string& name);

}  // namespace kenmotsu
