#include "consol/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

namespace consol {

namespace {

double slack_for(double reference) { return kRelTolerance * std::max(1.0, std::abs(reference)); }

std::string index_path(const char* field, std::size_t i) {
  return std::string(field) + "[" + std::to_string(i) + "]";
}

}  // namespace

bool meets(double provided, double required) { return provided + slack_for(required) >= required; }

bool within(double used, double capacity) { return used <= capacity + slack_for(capacity); }

bool ResourceVector::fits_within(const ResourceVector& other) const {
  for (std::size_t j = 0; j < amounts_.size(); ++j) {
    if (!within(amounts_[j], other.amounts_[j])) return false;
  }
  return true;
}

bool ResourceVector::dominates(const ResourceVector& other) const {
  for (std::size_t j = 0; j < amounts_.size(); ++j) {
    if (amounts_[j] < other.amounts_[j]) return false;
  }
  return true;
}

ResourceVector& ResourceVector::operator+=(const ResourceVector& other) {
  for (std::size_t j = 0; j < amounts_.size(); ++j) amounts_[j] += other.amounts_[j];
  return *this;
}

ResourceVector& ResourceVector::operator-=(const ResourceVector& other) {
  for (std::size_t j = 0; j < amounts_.size(); ++j) amounts_[j] -= other.amounts_[j];
  return *this;
}

PerformanceProfile PerformanceProfile::dense(std::size_t apps, std::size_t pms, std::size_t types,
                                             std::vector<double> entries) {
  std::vector<std::size_t> pm_class(pms);
  for (std::size_t k = 0; k < pms; ++k) pm_class[k] = k;
  return classed(apps, std::move(pm_class), pms, types, std::move(entries));
}

PerformanceProfile PerformanceProfile::classed(std::size_t apps, std::vector<std::size_t> pm_class,
                                               std::size_t classes, std::size_t types,
                                               std::vector<double> class_entries) {
  if (class_entries.size() != apps * classes * types) {
    throw InputError("performance profile has " + std::to_string(class_entries.size()) +
                     " entries, expected " + std::to_string(apps * classes * types));
  }
  for (std::size_t c : pm_class) {
    if (c >= classes) throw InputError("performance profile class index out of range");
  }
  PerformanceProfile p;
  p.apps_ = apps;
  p.classes_ = classes;
  p.types_ = types;
  p.pm_class_ = std::move(pm_class);
  p.entries_ = std::move(class_entries);
  return p;
}

bool operator==(const PerformanceProfile& a, const PerformanceProfile& b) {
  if (a.apps() != b.apps() || a.pms() != b.pms() || a.types() != b.types()) return false;
  for (std::size_t i = 0; i < a.apps(); ++i) {
    for (std::size_t k = 0; k < a.pms(); ++k) {
      auto ra = a.row(i, k);
      auto rb = b.row(i, k);
      if (!std::equal(ra.begin(), ra.end(), rb.begin())) return false;
    }
  }
  return true;
}

std::vector<Violation> validate_problem(const ConsolidationProblem& problem) {
  std::vector<Violation> out;
  const std::size_t dims = problem.num_resources();
  const std::size_t apps = problem.num_apps();
  const std::size_t pms = problem.num_pms();
  const std::size_t types = problem.num_types();

  auto check_vector = [&](const ResourceVector& v, const std::string& path) {
    if (v.size() != dims) {
      out.push_back({path, "has " + std::to_string(v.size()) + " amounts, expected " +
                               std::to_string(dims)});
      return;
    }
    for (std::size_t j = 0; j < dims; ++j) {
      if (!(v[j] >= 0.0) || !std::isfinite(v[j])) {
        out.push_back({path + "[" + std::to_string(j) + "]", "amount must be finite and >= 0"});
      }
    }
  };

  for (std::size_t i = 0; i < apps; ++i) {
    const double mu = problem.applications[i].required_throughput;
    if (!(mu >= 0.0) || !std::isfinite(mu)) {
      out.push_back({index_path("applications", i) + ".required_throughput",
                     "must be finite and >= 0"});
    }
  }
  for (std::size_t k = 0; k < pms; ++k) {
    check_vector(problem.pms[k].capacity, index_path("pms", k) + ".capacity");
  }
  for (std::size_t l = 0; l < types; ++l) {
    const auto& config = problem.vm_types[l].config;
    const std::string path = index_path("vm_types", l) + ".config";
    check_vector(config, path);
    const auto amounts = config.amounts();
    if (std::none_of(amounts.begin(), amounts.end(), [](double a) { return a > 0.0; })) {
      out.push_back({path, "VM type must configure a positive amount of some resource"});
    }
  }
  if (apps >= 1 && types == 0) {
    out.push_back({"vm_types", "at least one VM type is required when applications exist"});
  }

  const auto& profile = problem.profile;
  if (profile.apps() != apps || profile.pms() != pms || profile.types() != types) {
    std::ostringstream msg;
    msg << "dimensions " << profile.apps() << "x" << profile.pms() << "x" << profile.types()
        << " do not match " << apps << "x" << pms << "x" << types;
    out.push_back({"profile", msg.str()});
    return out;
  }
  for (std::size_t i = 0; i < apps; ++i) {
    for (std::size_t k = 0; k < pms; ++k) {
      for (std::size_t l = 0; l < types; ++l) {
        const double mu = profile.at(i, k, l);
        const std::string path = "profile[" + std::to_string(i) + "][" + std::to_string(k) +
                                 "][" + std::to_string(l) + "]";
        if (std::isnan(mu)) {
          out.push_back({path, "missing entry"});
        } else if (!(mu >= 0.0) || !std::isfinite(mu)) {
          out.push_back({path, "throughput must be finite and >= 0"});
        }
      }
    }
  }
  return out;
}

void require_valid(const ConsolidationProblem& problem) {
  const auto violations = validate_problem(problem);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid problem:";
  for (const auto& v : violations) msg << "\n  " << v.path << ": " << v.reason;
  throw InputError(msg.str());
}

DeploymentPlan make_plan(const ConsolidationProblem& problem, std::vector<Placement> placements) {
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> merged;
  for (const auto& p : placements) {
    if (p.app >= problem.num_apps()) {
      throw InputError("placement app index " + std::to_string(p.app) + " out of range");
    }
    if (p.pm >= problem.num_pms()) {
      throw InputError("placement pm index " + std::to_string(p.pm) + " out of range");
    }
    if (p.type >= problem.num_types()) {
      throw InputError("placement type index " + std::to_string(p.type) + " out of range");
    }
    if (p.count > 0) merged[{p.app, p.pm, p.type}] += p.count;
  }

  DeploymentPlan plan;
  plan.provided.assign(problem.num_apps(), 0.0);
  std::vector<bool> used(problem.num_pms(), false);
  for (const auto& [key, count] : merged) {
    const auto [app, pm, type] = key;
    plan.placements.push_back({app, pm, type, count});
    plan.provided[app] += problem.profile.at(app, pm, type) * static_cast<double>(count);
    used[pm] = true;
  }
  for (std::size_t k = 0; k < used.size(); ++k) {
    if (used[k]) plan.used_pms.push_back(k);
  }
  plan.satisfied.resize(problem.num_apps());
  for (std::size_t i = 0; i < problem.num_apps(); ++i) {
    plan.satisfied[i] = meets(plan.provided[i], problem.applications[i].required_throughput);
  }
  return plan;
}

FeasibilityReport check_plan(const ConsolidationProblem& problem, const DeploymentPlan& plan) {
  const std::size_t dims = problem.num_resources();
  std::vector<ResourceVector> usage(problem.num_pms(), ResourceVector(dims));
  std::vector<double> provided(problem.num_apps(), 0.0);
  for (const auto& p : plan.placements) {
    if (p.app >= problem.num_apps() || p.pm >= problem.num_pms() ||
        p.type >= problem.num_types()) {
      std::ostringstream msg;
      msg << "plan references (app " << p.app << ", pm " << p.pm << ", type " << p.type
          << ") outside the problem";
      throw InputError(msg.str());
    }
    const auto& config = problem.vm_types[p.type].config;
    for (std::size_t j = 0; j < dims; ++j) {
      usage[p.pm][j] += config[j] * static_cast<double>(p.count);
    }
    provided[p.app] += problem.profile.at(p.app, p.pm, p.type) * static_cast<double>(p.count);
  }
  for (std::size_t k : plan.used_pms) {
    if (k >= problem.num_pms()) {
      throw InputError("plan used_pms index " + std::to_string(k) + " out of range");
    }
  }

  FeasibilityReport report;
  report.slack.resize(problem.num_pms());
  for (std::size_t k = 0; k < problem.num_pms(); ++k) {
    report.slack[k].resize(dims);
    for (std::size_t j = 0; j < dims; ++j) {
      const double cap = problem.pms[k].capacity[j];
      report.slack[k][j] = cap - usage[k][j];
      if (!within(usage[k][j], cap)) {
        report.overloaded.push_back({k, j});
        report.resource_feasible = false;
      }
    }
  }
  report.surplus.resize(problem.num_apps());
  for (std::size_t i = 0; i < problem.num_apps(); ++i) {
    const double required = problem.applications[i].required_throughput;
    report.surplus[i] = provided[i] - required;
    if (!meets(provided[i], required)) report.performance_satisfied = false;
  }
  return report;
}

std::size_t plan_vm_count(const DeploymentPlan& plan) {
  std::size_t n = 0;
  for (const auto& p : plan.placements) n += p.count;
  return n;
}

std::vector<double> relative_differences(const ConsolidationProblem& problem,
                                         const DeploymentPlan& plan) {
  std::vector<double> rd(problem.num_apps(), std::nan(""));
  for (std::size_t i = 0; i < problem.num_apps(); ++i) {
    const double required = problem.applications[i].required_throughput;
    if (required > 0.0) rd[i] = (plan.provided[i] - required) / required;
  }
  return rd;
}

double max_single_vm_throughput(const ConsolidationProblem& problem, std::size_t app) {
  double best = 0.0;
  for (std::size_t k = 0; k < problem.num_pms(); ++k) {
    for (double mu : problem.profile.row(app, k)) best = std::max(best, mu);
  }
  return best;
}

ResourceVector max_capacity(std::span<const PhysicalMachine> pms, std::size_t dims) {
  ResourceVector out(dims);
  for (const auto& pm : pms) {
    for (std::size_t j = 0; j < dims; ++j) out[j] = std::max(out[j], pm.capacity[j]);
  }
  return out;
}

}  // namespace consol
