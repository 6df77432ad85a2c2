#pragma once

// Suite orchestration and machine-readable reports.
//
// Suites form a chain axioms -> frames -> slant -> warped -> inequality.  A
// failed suite marks everything downstream "skipped".  Checks whose
// hypotheses are numerically unmet (not bi-slant, not warped, not mixed
// totally geodesic) are still evaluated but carry status "report".

#include "kenmotsu/scenario.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kenmotsu {

enum class Status { pass, fail, report, skipped };

const char* status_name(Status s);

struct Check {
  std::string suite;
  std::string check;
  std::string eq_ref;
  double max_residual = 0.0;  // NaN if some sample could not be evaluated
  double tolerance = 0.0;
  Status status = Status::pass;
  std::string reason;
  std::optional<std::size_t> worst_sample;
  // Per-sample residuals; NaN where the check did not apply.
  std::vector<double> residuals;
};

// A stated closed form that disagrees with the oracle.
struct Discrepancy {
  std::string subject;
  std::string claim;
  std::string finding;
  double deviation = 0.0;
  std::optional<std::size_t> worst_sample;
};

struct ReportMetadata {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string sampling;
  std::size_t sample_count = 0;
  std::size_t ambient_points = 0;
  double tol_scale = 1.0;
  std::vector<std::string> suites;
  std::string version;
};

struct VerificationReport {
  ReportMetadata metadata;
  std::vector<VectorXd> samples;
  std::vector<Check> checks;
  std::vector<Discrepancy> discrepancies;

  bool passed() const;  // no check with status fail
  const Check* find(const std::string& check) const;
  std::vector<const Check*> with_eq_ref(const std::string& eq_ref) const;
};

struct RunOptions {
  std::optional<std::set<Suite>> suites;  // replaces the scenario's selection
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> grid;
  double tol_scale = 1.0;
};

// Selected suites run together with the suites they depend on.
VerificationReport run_suites(const Scenario& scenario, const RunOptions& options = {});

// Equation labels that a full run must cover.
const std::vector<std::string>& in_scope_equations();

struct CoverageAudit {
  std::vector<std::string> missing;
  bool complete() const { return missing.empty(); }
};

// A label is covered when an evaluated (not skipped) check carries it, either
// exactly or as the prefix before a "/".
CoverageAudit audit_coverage(const VerificationReport& report);

struct SummaryRow {
  std::string eq_ref;
  double worst = 0.0;
  Status status = Status::pass;
  std::size_t checks = 0;
};

std::vector<SummaryRow> summarize(const VerificationReport& report);

std::string to_json(const VerificationReport& report);
std::string to_csv(const VerificationReport& report);
std::string summary_table(const VerificationReport& report);

}  // namespace kenmotsu
