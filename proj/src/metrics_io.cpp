#include <charconv>
#include <cmath>
#include <sstream>

#include "consol/problem_io.hpp"
#include "consol/sim.hpp"

namespace consol {

std::string format_number(double value) {
  if (std::isnan(value)) return "";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string metrics_csv(const ConsolidationProblem& problem, const RunMetrics& metrics) {
  std::ostringstream out;
  out << "period,app_id,required,provided,rd\n";
  for (std::size_t t = 0; t < metrics.rd.size(); ++t) {
    for (std::size_t i = 0; i < problem.num_apps(); ++i) {
      out << t << ',' << problem.applications[i].id << ',' << format_number(metrics.required[t][i])
          << ',' << format_number(metrics.provided[t][i]) << ',' << format_number(metrics.rd[t][i])
          << '\n';
    }
  }
  return out.str();
}

std::string summary_csv(const RunMetrics& metrics) {
  std::ostringstream out;
  out << "ord,pm_mean,count_e,count_t,count_cnt\n"
      << format_number(metrics.ord) << ',' << format_number(mean_pm_count(metrics)) << ','
      << metrics.count_e << ',' << metrics.count_t << ',' << metrics.count_cnt << '\n';
  return out.str();
}

std::string scalability_csv(const std::vector<ScalabilityRow>& rows) {
  std::ostringstream out;
  out << "p,a,mean_time_ms,ord\n";
  for (const auto& row : rows) {
    out << row.p << ',' << row.a << ',' << format_number(row.mean_time_ms) << ','
        << format_number(row.ord) << '\n';
  }
  return out.str();
}

std::string sensitivity_csv(const std::string& detector, const SensitivityRun& run) {
  std::ostringstream out;
  out << "detector,detector_ord,ord,true_changes,count_e,count_t,count_cnt\n"
      << detector << ',' << format_number(run.detector_ord) << ',' << format_number(run.metrics.ord)
      << ',' << run.true_changes << ',' << run.metrics.count_e << ',' << run.metrics.count_t << ','
      << run.metrics.count_cnt << '\n';
  return out.str();
}

std::string plans_jsonl(const std::vector<DeploymentPlan>& plans) {
  std::string out;
  for (const auto& plan : plans) {
    out += plan_to_json(plan).dump();
    out += '\n';
  }
  return out;
}

}  // namespace consol
