#include "doctest.h"

#include "kenmotsu/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace kenmotsu;

namespace {

const char* kMinimal = R"yaml(name: minimal
ambient: {m: 5}
immersion:
  parameters: [u, v, a, b, t]
  components: ["u", "0.6*v", "0.8*v", "0.3*u^2", "a", "0.8*b", "0.6*b", "0.2*a^2", "0", "0", "t"]
  box: {u: [-1, 1], v: [-1, 1], a: [-1, 1], b: [-1, 1], t: [-1, 1]}
distributions:
  D1: [u, v]
  D2: [a, b]
warped:
  base: [u, v, t]
  fiber: [a, b]
  f: "exp(t)"
)yaml";

std::string field_of(const std::string& yaml) {
  try {
    parse_scenario_yaml(yaml);
  } catch (const ScenarioError& e) {
    return e.field();
  }
  return "<no error>";
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

Status status_of(const VerificationReport& r, const std::string& check) {
  const Check* c = r.find(check);
  REQUIRE(c != nullptr);
  return c->status;
}

}  // namespace

TEST_CASE("minimal scenario loads with defaults") {
  const Scenario s = parse_scenario_yaml(kMinimal);
  CHECK(s.name == "minimal");
  CHECK(s.m == 5);
  CHECK(s.sampling.seed == 20240607u);
  CHECK(s.samples().size() == 20);
  REQUIRE(s.xi_parameter().has_value());
  CHECK(*s.xi_parameter() == 4);
  CHECK(s.suites.size() == all_suites().size());
}

TEST_CASE("loader errors name the offending field") {
  CHECK(field_of(replace(kMinimal, "  fiber: [a, b]\n", "")) == "warped.fiber");
  CHECK(field_of(replace(kMinimal, "m: 5", "m: 0")) == "ambient.m");
  CHECK(field_of(replace(kMinimal, "name: minimal", "name: minimal\ncolour: red")) == "colour");
  CHECK(field_of(replace(kMinimal, "D2: [a, b]", "D2: [a, w]")) == "distributions.D2[1]");
  CHECK(field_of(replace(kMinimal, "fiber: [a, b]", "fiber: [b]")).rfind("partition", 0) == 0);
  CHECK(field_of("name: [unterminated") != "<no error>");
  CHECK_THROWS_AS(load_scenario("no-such-scenario"), ScenarioError);
  CHECK_THROWS_AS(parse_suite("geometry"), ScenarioError);
}

TEST_CASE("builtins are listed and load") {
  const auto& names = builtin_names();
  for (const char* n : {"example-4.1", "product", "invariant", "anti-invariant", "corrupted-metric"}) {
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  }
  for (const auto& n : names) CHECK_NOTHROW(builtin_scenario(n));
}

TEST_CASE("grid sampling covers the box tensor grid") {
  RunOptions opt;
  opt.grid = 3;
  opt.suites = std::set<Suite>{Suite::frames};
  const auto r = run_suites(builtin_scenario("product"), opt);
  CHECK(r.samples.size() == 243);
  CHECK(r.metadata.sample_count == 243);
  // Corners and midpoints of [-1, 1].
  for (const auto& p : r.samples) {
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      const double x = p(i);
      CHECK((x == doctest::Approx(-1) || x == doctest::Approx(0) || x == doctest::Approx(1)));
    }
  }
}

TEST_CASE("suite selection pulls in dependencies") {
  RunOptions opt;
  opt.suites = std::set<Suite>{Suite::slant};
  const auto r = run_suites(builtin_scenario("product"), opt);
  CHECK(r.metadata.suites == std::vector<std::string>{"axioms", "frames", "slant"});
  for (const auto& c : r.checks) CHECK(c.suite != "warped");
}

TEST_CASE("same seed gives byte-identical json") {
  const Scenario s = builtin_scenario("example-4.1");
  CHECK(to_json(run_suites(s)) == to_json(run_suites(s)));
  RunOptions other;
  other.seed = 1;
  CHECK(to_json(run_suites(s)) != to_json(run_suites(s, other)));
}

TEST_CASE("corrupted metric fails the axioms and skips downstream") {
  const auto r = run_suites(builtin_scenario("corrupted-metric"));
  CHECK_FALSE(r.passed());
  bool axiom_fail = false;
  for (const auto& c : r.checks) {
    if (c.suite == "axioms" && c.status == Status::fail) {
      axiom_fail = true;
      CHECK((c.eq_ref == "2.4" || c.eq_ref == "2.5"));
    }
    if (c.suite != "axioms") CHECK(c.status == Status::skipped);
  }
  CHECK(axiom_fail);
}

TEST_CASE("product warped scenario passes every asserted check") {
  const auto r = run_suites(builtin_scenario("product"));
  CHECK(r.passed());
  CHECK(audit_coverage(r).complete());
  CHECK(r.discrepancies.empty());
  CHECK(status_of(r, "5.1") == Status::pass);
  CHECK(status_of(r, "5.10") == Status::pass);
  CHECK(status_of(r, "Cor4.1/xi_ln_f") == Status::pass);
  CHECK(r.find("5.1")->max_residual <= 1e-10);
  CHECK(r.find("5.10")->max_residual <= 1e-10);
}

TEST_CASE("example scenario records discrepancies and gates the warped results") {
  const auto r = run_suites(builtin_scenario("example-4.1"));
  CHECK_FALSE(r.passed());
  CHECK(audit_coverage(r).complete());
  std::set<std::string> subjects;
  for (const auto& d : r.discrepancies) subjects.insert(d.subject);
  CHECK(subjects.count("cos_theta1") == 1);
  CHECK(subjects.count("cos_theta2") == 1);
  CHECK(subjects.count("f_squared") == 1);
  CHECK(subjects.count("mixed totally geodesic") == 1);

  // Hypotheses unmet: evaluated, not asserted.
  CHECK(status_of(r, "6.1") == Status::report);
  CHECK(status_of(r, "Cor4.1/xi_ln_f") == Status::report);
  CHECK(status_of(r, "5.1") == Status::report);
  for (const auto* c : r.with_eq_ref("4.13")) {
    CHECK(c->status == Status::report);
    CHECK(c->reason.find("hypothesis unmet") != std::string::npos);
  }
  // The t = 0 slice of the fit matches the stated warping function.
  CHECK(status_of(r, "4.1/f@t=0") == Status::pass);
}

TEST_CASE("csv has one row per check and sample") {
  RunOptions opt;
  opt.suites = std::set<Suite>{Suite::frames};
  const auto r = run_suites(builtin_scenario("product"), opt);
  const std::string csv = to_csv(r);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "suite,check,eq_ref,sample,residual,tolerance,status");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  std::size_t expected = 0;
  for (const auto& c : r.checks) {
    if (c.residuals.empty()) {
      ++expected;
      continue;
    }
    for (double v : c.residuals) expected += std::isnan(v) ? 0 : 1;
  }
  CHECK(rows == expected);
  CHECK(rows > 0);
}

TEST_CASE("tolerance scaling") {
  Tolerances t;
  const Tolerances s = t.scaled(10);
  CHECK(s.axioms == doctest::Approx(1e-7));
  CHECK(s.fit == doctest::Approx(1e-7));
  RunOptions opt;
  opt.tol_scale = 10;
  opt.suites = std::set<Suite>{Suite::axioms};
  const auto r = run_suites(builtin_scenario("product"), opt);
  CHECK(r.metadata.tol_scale == 10);
  CHECK(r.checks.front().tolerance == doctest::Approx(1e-7));
}
