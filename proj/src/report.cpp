#include "kenmotsu/report.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace kenmotsu {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

ordered_json point(const VectorXd& p) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(p(i));
  return a;
}

Status combine(Status a, Status b) {
  auto rank = [](Status s) {
    switch (s) {
      case Status::fail: return 3;
      case Status::pass: return 2;
      case Status::report: return 1;
      case Status::skipped: return 0;
    }
    return 0;
  };
  return rank(a) >= rank(b) ? a : b;
}

// Samples indices refer to report.samples except in the axiom suite.
bool has_parameter_point(const VerificationReport& r, const Check& c, std::size_t i) {
  return c.suite != "axioms" && i < r.samples.size();
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::vector<SummaryRow> summarize(const VerificationReport& report) {
  std::vector<SummaryRow> rows;
  std::map<std::string, std::size_t> index;
  for (const auto& c : report.checks) {
    if (c.eq_ref.empty()) continue;
    auto it = index.find(c.eq_ref);
    if (it == index.end()) {
      it = index.emplace(c.eq_ref, rows.size()).first;
      rows.push_back({c.eq_ref, 0.0, c.status, 0});
    }
    SummaryRow& row = rows[it->second];
    row.status = combine(row.status, c.status);
    ++row.checks;
  }
  // Worst residual among the checks that decided the row's status.
  for (auto& row : rows) {
    bool first = true;
    for (const auto& c : report.checks) {
      if (c.eq_ref != row.eq_ref || c.status != row.status) continue;
      if (first || std::isnan(c.max_residual) || c.max_residual > row.worst) {
        row.worst = c.max_residual;
      }
      first = false;
    }
  }
  return rows;
}

std::string to_json(const VerificationReport& report) {
  ordered_json j;
  const auto& md = report.metadata;
  j["metadata"] = {{"scenario", md.scenario},
                   {"seed", md.seed},
                   {"sampling", md.sampling},
                   {"sample_count", md.sample_count},
                   {"ambient_points", md.ambient_points},
                   {"tol_scale", md.tol_scale},
                   {"suites", md.suites},
                   {"version", md.version}};
  j["passed"] = report.passed();

  ordered_json summary = ordered_json::array();
  for (const auto& row : summarize(report)) {
    summary.push_back({{"eq_ref", row.eq_ref},
                       {"worst_residual", number(row.worst)},
                       {"status", status_name(row.status)},
                       {"checks", row.checks}});
  }
  j["summary"] = summary;

  ordered_json checks = ordered_json::array();
  for (const auto& c : report.checks) {
    ordered_json o{{"suite", c.suite},
                   {"check", c.check},
                   {"eq_ref", c.eq_ref},
                   {"max_residual", number(c.max_residual)},
                   {"tolerance", c.tolerance},
                   {"status", status_name(c.status)}};
    if (!c.reason.empty()) o["reason"] = c.reason;
    if (c.worst_sample) {
      ordered_json w{{"index", *c.worst_sample}};
      if (has_parameter_point(report, c, *c.worst_sample)) {
        w["point"] = point(report.samples[*c.worst_sample]);
      }
      o["worst_sample"] = w;
    }
    ordered_json rs = ordered_json::array();
    for (double v : c.residuals) rs.push_back(number(v));
    o["residuals"] = rs;
    checks.push_back(o);
  }
  j["checks"] = checks;

  ordered_json disc = ordered_json::array();
  for (const auto& d : report.discrepancies) {
    ordered_json o{{"subject", d.subject}, {"claim", d.claim}};
    if (!d.finding.empty()) o["finding"] = d.finding;
    if (std::isfinite(d.deviation)) o["deviation"] = d.deviation;
    if (d.worst_sample) {
      o["worst_sample"] = {{"index", *d.worst_sample},
                           {"point", point(report.samples[*d.worst_sample])}};
    }
    disc.push_back(o);
  }
  j["discrepancies"] = disc;

  const auto audit = audit_coverage(report);
  j["coverage"] = {{"required", in_scope_equations()},
                   {"missing", audit.missing},
                   {"complete", audit.complete()}};

  ordered_json samples = ordered_json::array();
  for (const auto& p : report.samples) samples.push_back(point(p));
  j["samples"] = samples;
  return j.dump(2) + "\n";
}

std::string to_csv(const VerificationReport& report) {
  std::ostringstream out;
  out << "suite,check,eq_ref,sample,residual,tolerance,status\n";
  for (const auto& c : report.checks) {
    const std::string prefix = csv_field(c.suite) + "," + csv_field(c.check) + "," +
                               csv_field(c.eq_ref) + ",";
    const std::string suffix = "," + num(c.tolerance) + "," + status_name(c.status) + "\n";
    if (c.residuals.empty()) {
      out << prefix << "," << num(c.max_residual) << suffix;
      continue;
    }
    for (std::size_t i = 0; i < c.residuals.size(); ++i) {
      if (std::isnan(c.residuals[i])) continue;
      out << prefix << i << "," << num(c.residuals[i]) << suffix;
    }
  }
  return out.str();
}

std::string summary_table(const VerificationReport& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %14s  %-8s %s\n", "eq_ref", "worst", "status", "checks");
  out << line;
  for (const auto& row : summarize(report)) {
    std::snprintf(line, sizeof line, "%-10s %14.3e  %-8s %zu\n", row.eq_ref.c_str(), row.worst,
                  status_name(row.status), row.checks);
    out << line;
  }
  std::size_t counts[4] = {0, 0, 0, 0};
  for (const auto& c : report.checks) ++counts[static_cast<int>(c.status)];
  std::snprintf(line, sizeof line, "checks: %zu pass, %zu fail, %zu report, %zu skipped\n",
                counts[0], counts[1], counts[2], counts[3]);
  out << line;
  const auto audit = audit_coverage(report);
  out << "coverage: " << (audit.complete() ? "complete" : "missing");
  for (const auto& m : audit.missing) out << ' ' << m;
  out << "\n";
  if (!report.discrepancies.empty()) {
    out << "discrepancies:\n";
    for (const auto& d : report.discrepancies) {
      out << "  [" << d.subject << "] " << d.claim;
      if (!d.finding.empty()) out << " -- " << d.finding;
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace kenmotsu
