#include "kenmotsu/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace kenmotsu {

namespace {

const std::map<std::string, Suite>& suite_table() {
  static const std::map<std::string, Suite> table{{"axioms", Suite::axioms},
                                                  {"frames", Suite::frames},
                                                  {"slant", Suite::slant},
                                                  {"warped", Suite::warped},
                                                  {"inequality", Suite::inequality}};
  return table;
}

std::string where(const YAML::Node& node) {
  const auto mark = node.Mark();
  if (mark.line < 0) return "";
  return " (line " + std::to_string(mark.line + 1) + ")";
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& field) {
  if (!node || !node.IsScalar()) throw ScenarioError(field, "expected a scalar" + where(node));
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ScenarioError(field, "cannot convert '" + node.Scalar() + "'" + where(node));
  }
}

std::vector<std::string> string_list(const YAML::Node& node, const std::string& field) {
  if (!node || !node.IsSequence()) throw ScenarioError(field, "expected a list" + where(node));
  std::vector<std::string> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(scalar<std::string>(node[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

YAML::Node required(const YAML::Node& parent, const std::string& key, const std::string& field) {
  const YAML::Node n = parent[key];
  if (!n) throw ScenarioError(field, "missing" + where(parent));
  return n;
}

void check_keys(const YAML::Node& node, const std::string& field,
                const std::vector<std::string>& allowed) {
  if (!node.IsMap()) throw ScenarioError(field, "expected a mapping" + where(node));
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ScenarioError(field.empty() ? key : field + "." + key, "unknown key" + where(kv.first));
    }
  }
}

Eigen::Index param_index(const std::vector<std::string>& params, const std::string& name,
                         const std::string& field) {
  const auto it = std::find(params.begin(), params.end(), name);
  if (it == params.end()) throw ScenarioError(field, "unknown parameter '" + name + "'");
  return it - params.begin();
}

CompiledExpr compile_field(const std::string& source, const std::vector<std::string>& params,
                           const std::string& field) {
  try {
    return compile(source, params);
  } catch (const Error& e) {
    throw ScenarioError(field, e.what());
  }
}

// A generator is either a parameter name (its coordinate field) or a list of
// n coefficient expressions.
FieldExpr parse_generator(const YAML::Node& node, const std::vector<std::string>& params,
                          const std::string& field) {
  if (node.IsScalar()) {
    const auto name = node.as<std::string>();
    return FieldExpr::coordinate(params,
                                 static_cast<std::size_t>(param_index(params, name, field)));
  }
  const auto sources = string_list(node, field);
  if (sources.size() != params.size()) {
    throw ScenarioError(field, "expected " + std::to_string(params.size()) + " coefficients, got " +
                                   std::to_string(sources.size()));
  }
  for (std::size_t i = 0; i < sources.size(); ++i) {
    compile_field(sources[i], params, field + "[" + std::to_string(i) + "]");
  }
  return FieldExpr::parse(field, sources, params);
}

Distribution parse_distribution(const YAML::Node& node, const std::string& name,
                                const std::vector<std::string>& params, const std::string& field) {
  if (!node.IsSequence() || node.size() == 0) {
    throw ScenarioError(field, "expected a non-empty list of generators" + where(node));
  }
  Distribution d{name, {}};
  for (std::size_t i = 0; i < node.size(); ++i) {
    d.generators.push_back(parse_generator(node[i], params, field + "[" + std::to_string(i) + "]"));
  }
  return d;
}

std::vector<Eigen::Index> index_list(const YAML::Node& node, const std::vector<std::string>& params,
                                     const std::string& field) {
  std::vector<Eigen::Index> out;
  const auto names = string_list(node, field);
  for (std::size_t i = 0; i < names.size(); ++i) {
    out.push_back(param_index(params, names[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

void positive(double v, const std::string& field) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ScenarioError(field, "must be positive");
}

Scenario build(const YAML::Node& root) {
  check_keys(root, "", {"name", "ambient", "immersion", "distributions", "warped", "sampling",
                        "tolerances", "suites", "claims", "notes"});
  Scenario s;
  s.name = root["name"] ? scalar<std::string>(root["name"], "name") : "unnamed";

  const YAML::Node ambient = required(root, "ambient", "ambient");
  check_keys(ambient, "ambient", {"m", "metric"});
  s.m = scalar<int>(required(ambient, "m", "ambient.m"), "ambient.m");
  if (s.m < 1) throw ScenarioError("ambient.m", "must be at least 1");
  if (ambient["metric"]) {
    const auto metric = scalar<std::string>(ambient["metric"], "ambient.metric");
    if (metric == "kenmotsu") {
      s.metric = MetricModel::kenmotsu;
    } else if (metric == "cosymplectic") {
      s.metric = MetricModel::cosymplectic;
    } else {
      throw ScenarioError("ambient.metric", "expected kenmotsu or cosymplectic, got '" + metric + "'");
    }
  }
  s.structure = std::make_shared<KenmotsuStructure>(s.m, s.metric);

  const YAML::Node imm = required(root, "immersion", "immersion");
  check_keys(imm, "immersion", {"parameters", "components", "box"});
  const auto params = string_list(required(imm, "parameters", "immersion.parameters"),
                                  "immersion.parameters");
  if (params.empty()) throw ScenarioError("immersion.parameters", "empty");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (std::count(params.begin(), params.end(), params[i]) != 1) {
      throw ScenarioError("immersion.parameters", "duplicate parameter '" + params[i] + "'");
    }
  }
  const auto comps = string_list(required(imm, "components", "immersion.components"),
                                 "immersion.components");
  if (static_cast<int>(comps.size()) != 2 * s.m + 1) {
    throw ScenarioError("immersion.components", "expected 2m+1 = " + std::to_string(2 * s.m + 1) +
                                                    " components, got " +
                                                    std::to_string(comps.size()));
  }
  for (std::size_t i = 0; i < comps.size(); ++i) {
    compile_field(comps[i], params, "immersion.components[" + std::to_string(i) + "]");
  }
  const YAML::Node box_node = required(imm, "box", "immersion.box");
  if (!box_node.IsMap()) throw ScenarioError("immersion.box", "expected a mapping" + where(box_node));
  Box box(params.size(), {0.0, 0.0});
  std::vector<bool> seen(params.size(), false);
  for (const auto& kv : box_node) {
    const auto name = kv.first.as<std::string>();
    const std::string field = "immersion.box." + name;
    const auto i = static_cast<std::size_t>(param_index(params, name, field));
    if (!kv.second.IsSequence() || kv.second.size() != 2) {
      throw ScenarioError(field, "expected [lo, hi]" + where(kv.second));
    }
    const double lo = scalar<double>(kv.second[0], field);
    const double hi = scalar<double>(kv.second[1], field);
    if (!(lo <= hi)) throw ScenarioError(field, "empty interval");
    box[i] = {lo, hi};
    seen[i] = true;
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!seen[i]) throw ScenarioError("immersion.box." + params[i], "missing");
  }
  s.immersion = std::make_shared<Immersion>(params, comps, box);

  if (const YAML::Node d = root["distributions"]) {
    check_keys(d, "distributions", {"D1", "D2", "xi"});
    if (d["D1"]) s.d1 = parse_distribution(d["D1"], "D1", params, "distributions.D1");
    if (d["D2"]) s.d2 = parse_distribution(d["D2"], "D2", params, "distributions.D2");
    if (s.d1.has_value() != s.d2.has_value()) {
      throw ScenarioError(s.d1 ? "distributions.D2" : "distributions.D1", "missing");
    }
    if (d["xi"]) s.xi = parse_generator(d["xi"], params, "distributions.xi");
  }
  if (!s.xi) {
    const auto it = std::find(params.begin(), params.end(), "t");
    if (it != params.end()) {
      s.xi = FieldExpr::coordinate(params, static_cast<std::size_t>(it - params.begin()));
    }
  }

  if (const YAML::Node w = root["warped"]) {
    check_keys(w, "warped", {"base", "fiber", "f", "mu"});
    WarpedPartition part;
    part.base = index_list(required(w, "base", "warped.base"), params, "warped.base");
    part.fiber = index_list(required(w, "fiber", "warped.fiber"), params, "warped.fiber");
    validate_partition(part, static_cast<Eigen::Index>(params.size()));
    s.partition = part;
    if (w["f"]) {
      s.f = scalar<std::string>(w["f"], "warped.f");
      compile_field(*s.f, params, "warped.f");
    }
    if (w["mu"]) {
      s.mu = scalar<std::string>(w["mu"], "warped.mu");
      compile_field(*s.mu, params, "warped.mu");
    }
  }

  if (const YAML::Node smp = root["sampling"]) {
    check_keys(smp, "sampling", {"seed", "random", "grid", "points", "ambient_points"});
    if (smp["seed"]) s.sampling.seed = scalar<std::uint64_t>(smp["seed"], "sampling.seed");
    if (smp["random"]) s.sampling.random = scalar<std::size_t>(smp["random"], "sampling.random");
    if (smp["grid"]) s.sampling.grid = scalar<std::size_t>(smp["grid"], "sampling.grid");
    if (smp["ambient_points"]) {
      s.sampling.ambient_points = scalar<std::size_t>(smp["ambient_points"], "sampling.ambient_points");
    }
    if (const YAML::Node pts = smp["points"]) {
      if (!pts.IsSequence()) throw ScenarioError("sampling.points", "expected a list" + where(pts));
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const std::string field = "sampling.points[" + std::to_string(i) + "]";
        if (!pts[i].IsSequence() || pts[i].size() != params.size()) {
          throw ScenarioError(field, "expected " + std::to_string(params.size()) + " coordinates");
        }
        VectorXd p(static_cast<Eigen::Index>(params.size()));
        for (std::size_t k = 0; k < params.size(); ++k) {
          p(static_cast<Eigen::Index>(k)) = scalar<double>(pts[i][k], field);
        }
        s.sampling.points.push_back(p);
      }
    }
  }
  if (s.sampling.points.empty() && s.sampling.grid == 0 && s.sampling.random == 0) {
    throw ScenarioError("sampling", "no sample points");
  }
  if (s.sampling.ambient_points == 0) throw ScenarioError("sampling.ambient_points", "must be positive");

  if (const YAML::Node tol = root["tolerances"]) {
    check_keys(tol, "tolerances",
               {"axioms", "projector", "frames", "slant", "slant_constancy", "oracle_agreement",
                "lemma", "theta_derivative", "fit", "characterization", "frame6", "inequality"});
    Tolerances& t = s.tolerances;
    const std::vector<std::pair<const char*, double*>> slots{
        {"axioms", &t.axioms},
        {"projector", &t.projector},
        {"frames", &t.frames},
        {"slant", &t.slant},
        {"slant_constancy", &t.slant_constancy},
        {"oracle_agreement", &t.oracle_agreement},
        {"lemma", &t.lemma},
        {"theta_derivative", &t.theta_derivative},
        {"fit", &t.fit},
        {"characterization", &t.characterization},
        {"frame6", &t.frame6},
        {"inequality", &t.inequality}};
    for (const auto& [key, slot] : slots) {
      if (tol[key]) {
        const std::string field = std::string("tolerances.") + key;
        *slot = scalar<double>(tol[key], field);
        positive(*slot, field);
      }
    }
  }

  if (const YAML::Node suites = root["suites"]) {
    for (const auto& name : string_list(suites, "suites")) {
      if (name == "all") {
        s.suites.insert(all_suites().begin(), all_suites().end());
      } else {
        s.suites.insert(parse_suite(name));
      }
    }
  } else {
    s.suites.insert(all_suites().begin(), all_suites().end());
  }

  if (const YAML::Node claims = root["claims"]) {
    if (!claims.IsSequence()) throw ScenarioError("claims", "expected a list" + where(claims));
    for (std::size_t i = 0; i < claims.size(); ++i) {
      const std::string field = "claims[" + std::to_string(i) + "]";
      check_keys(claims[i], field, {"quantity", "expr", "statement"});
      Claim c;
      c.quantity = scalar<std::string>(required(claims[i], "quantity", field + ".quantity"),
                                       field + ".quantity");
      if (c.quantity != "cos_theta1" && c.quantity != "cos_theta2" && c.quantity != "f_squared") {
        throw ScenarioError(field + ".quantity", "expected cos_theta1, cos_theta2 or f_squared");
      }
      c.expr = scalar<std::string>(required(claims[i], "expr", field + ".expr"), field + ".expr");
      compile_field(c.expr, params, field + ".expr");
      if (claims[i]["statement"]) {
        c.statement = scalar<std::string>(claims[i]["statement"], field + ".statement");
      }
      s.claims.push_back(c);
    }
  }
  if (const YAML::Node notes = root["notes"]) s.notes = string_list(notes, "notes");

  const bool needs_slant = s.suites.count(Suite::slant) || s.suites.count(Suite::warped) ||
                           s.suites.count(Suite::inequality);
  if (needs_slant && !s.d1) throw ScenarioError("distributions", "missing D1/D2");
  if (needs_slant && !s.xi) throw ScenarioError("distributions.xi", "missing (no parameter named t)");
  const bool needs_warp = s.suites.count(Suite::warped) || s.suites.count(Suite::inequality);
  if (needs_warp && !s.partition) throw ScenarioError("warped", "missing");
  if (needs_warp && !s.f) throw ScenarioError("warped.f", "missing");
  return s;
}

// Built-in scenarios, kept in the same format as files under scenarios/.
const std::map<std::string, std::string>& builtin_sources() {
  static const std::map<std::string, std::string> sources{
      {"example-4.1", R"yaml(name: example-4.1
ambient: {m: 6}
immersion:
  parameters: [u, v, theta, phi, t]
  components: ["u*cos(theta)", "v*cos(phi)", "u*sin(theta)", "v*sin(phi)", "u*cos(phi)",
               "v*cos(theta)", "u*sin(phi)", "v*sin(theta)", "3*theta+2*phi", "2*theta+3*phi",
               "0", "0", "t"]
  box: {u: [0.5, 1.5], v: [0.5, 1.5], theta: [-1, 1], phi: [-1, 1], t: [-1, 1]}
distributions:
  D1: [u, v]
  D2: [theta, phi]
  xi: t
warped:
  base: [u, v, t]
  fiber: [theta, phi]
  f: "sqrt(u*u+v*v+13)"
claims:
  - quantity: cos_theta1
    expr: "2*cos(theta-phi)"
    statement: "slant function of D1 is arccos(2 cos(theta - phi))"
  - quantity: cos_theta2
    expr: "5/sqrt(u^2+v^2+13)"
    statement: "slant function of D2 is arccos(5 / sqrt(u^2 + v^2 + 13))"
  - quantity: f_squared
    expr: "u^2+v^2+13"
    statement: "fiber metric factor is u^2 + v^2 + 13 (no t-dependence)"
notes:
  - "component 8 is taken as v*sin(theta); with u*sin(theta) the coordinate field d/dv does not match the stated frame vector Z2"
  - "the stated frame Z1..Z5 is not orthonormal: |Z1|^2 = 2 under the ambient metric"
)yaml"},
      {"product", R"yaml(name: product
ambient: {m: 5}
immersion:
  parameters: [u, v, a, b, t]
  components: ["u", "0.6*v", "0.8*v", "0.3*u^2", "a", "0.8*b", "0.6*b", "0.2*a^2", "0", "0", "t"]
  box: {u: [-1, 1], v: [-1, 1], a: [-1, 1], b: [-1, 1], t: [-1, 1]}
distributions:
  D1: [u, v]
  D2: [a, b]
  xi: t
warped:
  base: [u, v, t]
  fiber: [a, b]
  f: "exp(t)"
  mu: "t"
)yaml"},
      {"invariant", R"yaml(name: invariant
ambient: {m: 3}
immersion:
  parameters: [p, q, r, s, t]
  components: ["p", "q", "r", "s", "0", "0", "t"]
  box: {p: [-1, 1], q: [-1, 1], r: [-1, 1], s: [-1, 1], t: [-1, 1]}
distributions:
  D1: [p, q]
  D2: [r, s]
  xi: t
warped:
  base: [p, q, t]
  fiber: [r, s]
  f: "exp(t)"
  mu: "t"
)yaml"},
      {"anti-invariant", R"yaml(name: anti-invariant
ambient: {m: 3}
immersion:
  parameters: [p, q, r, t]
  components: ["p", "0", "q", "0", "r", "0", "t"]
  box: {p: [-1, 1], q: [-1, 1], r: [-1, 1], t: [-1, 1]}
distributions:
  D1: [p]
  D2: [q, r]
  xi: t
warped:
  base: [p, t]
  fiber: [q, r]
  f: "exp(t)"
  mu: "t"
)yaml"},
      {"corrupted-metric", R"yaml(name: corrupted-metric
ambient: {m: 5, metric: cosymplectic}
immersion:
  parameters: [u, v, a, b, t]
  components: ["u", "0.6*v", "0.8*v", "0.3*u^2", "a", "0.8*b", "0.6*b", "0.2*a^2", "0", "0", "t"]
  box: {u: [-1, 1], v: [-1, 1], a: [-1, 1], b: [-1, 1], t: [-1, 1]}
distributions:
  D1: [u, v]
  D2: [a, b]
  xi: t
warped:
  base: [u, v, t]
  fiber: [a, b]
  f: "exp(t)"
)yaml"},
  };
  return sources;
}

}  // namespace

const char* suite_name(Suite s) {
  switch (s) {
    case Suite::axioms: return "axioms";
    case Suite::frames: return "frames";
    case Suite::slant: return "slant";
    case Suite::warped: return "warped";
    case Suite::inequality: return "inequality";
  }
  return "?";
}

Suite parse_suite(const std::string& name) {
  const auto it = suite_table().find(name);
  if (it == suite_table().end()) throw ScenarioError("suite", "unknown suite '" + name + "'");
  return it->second;
}

const std::vector<Suite>& all_suites() {
  static const std::vector<Suite> suites{Suite::axioms, Suite::frames, Suite::slant, Suite::warped,
                                         Suite::inequality};
  return suites;
}

Tolerances Tolerances::scaled(double factor) const {
  Tolerances t = *this;
  for (double* v : {&t.axioms, &t.projector, &t.frames, &t.slant, &t.slant_constancy,
                    &t.oracle_agreement, &t.lemma, &t.theta_derivative, &t.fit,
                    &t.characterization, &t.frame6, &t.inequality}) {
    *v *= factor;
  }
  return t;
}

std::vector<VectorXd> Scenario::samples() const {
  if (!sampling.points.empty()) return sampling.points;
  if (sampling.grid > 0) return grid_points(immersion->box(), sampling.grid);
  return random_points(immersion->box(), sampling.random, sampling.seed);
}

std::optional<Eigen::Index> Scenario::xi_parameter() const {
  if (!xi) return std::nullopt;
  const auto& params = immersion->parameters();
  // xi is a coordinate field iff exactly one coefficient is the constant 1.
  std::optional<Eigen::Index> found;
  const auto n = static_cast<Eigen::Index>(params.size());
  const VectorXd zero = VectorXd::Zero(n);
  const VectorXd ones = VectorXd::Constant(n, 0.5);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double c = xi->coefficients[i](zero);
    if (xi->coefficients[i](ones) != c) return std::nullopt;
    if (c == 1.0 && !found) {
      found = static_cast<Eigen::Index>(i);
    } else if (c != 0.0) {
      return std::nullopt;
    }
  }
  return found;
}

Scenario parse_scenario_yaml(const std::string& text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ScenarioError(origin, "line " + std::to_string(e.mark.line + 1) + ", column " +
                                    std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
  if (!root || !root.IsMap()) throw ScenarioError(origin, "expected a mapping at top level");
  try {
    return build(root);
  } catch (const YAML::Exception& e) {
    throw ScenarioError(origin, e.what());
  } catch (const HypothesisError& e) {
    throw ScenarioError(origin, e.what());
  }
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [k, v] : builtin_sources()) out.push_back(k);
    return out;
  }();
  return names;
}

Scenario builtin_scenario(const std::string& name) {
  const auto it = builtin_sources().find(name);
  if (it == builtin_sources().end()) throw ScenarioError("scenario", "unknown builtin '" + name + "'");
  return parse_scenario_yaml(it->second, name);
}

Scenario load_scenario(const std::string& path_or_builtin) {
  if (builtin_sources().count(path_or_builtin)) return builtin_scenario(path_or_builtin);
  std::ifstream in(path_or_builtin);
  if (!in) throw ScenarioError("scenario", "cannot open '" + path_or_builtin + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_yaml(buffer.str(), path_or_builtin);
}

}  // namespace kenmotsu
