#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace consol {

/// Raised for malformed inputs: bad files, invalid problems, dangling indices.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Relative slack used when comparing accumulated floating-point sums against
/// capacities and requirements.
inline constexpr double kRelTolerance = 1e-9;

/// True when `provided` meets `required` up to accumulated rounding.
bool meets(double provided, double required);

/// True when `used` stays within `capacity` up to accumulated rounding.
bool within(double used, double capacity);

/// One amount per resource type (CPU cores, memory MB, NIC Mbps, ...).
class ResourceVector {
 public:
  ResourceVector() = default;
  explicit ResourceVector(std::size_t dims, double fill = 0.0) : amounts_(dims, fill) {}
  explicit ResourceVector(std::vector<double> amounts) : amounts_(std::move(amounts)) {}
  ResourceVector(std::initializer_list<double> amounts) : amounts_(amounts) {}

  std::size_t size() const { return amounts_.size(); }
  double operator[](std::size_t j) const { return amounts_[j]; }
  double& operator[](std::size_t j) { return amounts_[j]; }
  std::span<const double> amounts() const { return amounts_; }

  /// Every component of `this` is <= the matching component of `other`.
  bool fits_within(const ResourceVector& other) const;
  /// Every component of `this` is >= the matching component of `other`.
  bool dominates(const ResourceVector& other) const;

  ResourceVector& operator+=(const ResourceVector& other);
  ResourceVector& operator-=(const ResourceVector& other);

  friend bool operator==(const ResourceVector&, const ResourceVector&) = default;

 private:
  std::vector<double> amounts_;
};

struct ResourceType {
  std::string name;
  std::string unit;
  friend bool operator==(const ResourceType&, const ResourceType&) = default;
};

struct ProblemMeta {
  std::vector<ResourceType> resources;
  friend bool operator==(const ProblemMeta&, const ProblemMeta&) = default;
};

struct Application {
  std::string id;
  double required_throughput = 0.0;
  friend bool operator==(const Application&, const Application&) = default;
};

struct PhysicalMachine {
  std::string id;
  ResourceVector capacity;
  friend bool operator==(const PhysicalMachine&, const PhysicalMachine&) = default;
};

struct VmType {
  std::string id;
  ResourceVector config;
  friend bool operator==(const VmType&, const VmType&) = default;
};

/// Throughput of one VM instance of type l on PM k serving application i.
///
/// Logically a dense A x P x V tensor. PMs that behave identically can share a
/// profile class, so storage is A x C x V plus a PM -> class map; generated
/// data centers with thousands of replicated PMs stay small. Parsed files use
/// one class per PM.
class PerformanceProfile {
 public:
  PerformanceProfile() = default;

  /// One class per PM; `entries` is indexed [app][pm][type].
  static PerformanceProfile dense(std::size_t apps, std::size_t pms, std::size_t types,
                                  std::vector<double> entries);
  /// Shared classes; `class_entries` is indexed [app][class][type].
  static PerformanceProfile classed(std::size_t apps, std::vector<std::size_t> pm_class,
                                    std::size_t classes, std::size_t types,
                                    std::vector<double> class_entries);

  std::size_t apps() const { return apps_; }
  std::size_t pms() const { return pm_class_.size(); }
  std::size_t types() const { return types_; }
  std::size_t classes() const { return classes_; }
  std::size_t pm_class(std::size_t pm) const { return pm_class_[pm]; }

  double at(std::size_t app, std::size_t pm, std::size_t type) const {
    return entries_[(app * classes_ + pm_class_[pm]) * types_ + type];
  }

  /// Throughputs of all types for (app, pm), contiguous.
  std::span<const double> row(std::size_t app, std::size_t pm) const {
    return {entries_.data() + (app * classes_ + pm_class_[pm]) * types_, types_};
  }

  std::span<const double> raw_entries() const { return entries_; }

  /// Logical equality: same dimensions and the same value for every triple,
  /// regardless of how PMs are grouped into classes.
  friend bool operator==(const PerformanceProfile& a, const PerformanceProfile& b);

 private:
  std::size_t apps_ = 0;
  std::size_t classes_ = 0;
  std::size_t types_ = 0;
  std::vector<std::size_t> pm_class_;
  std::vector<double> entries_;
};

struct ConsolidationProblem {
  ProblemMeta meta;
  std::vector<Application> applications;
  std::vector<PhysicalMachine> pms;
  std::vector<VmType> vm_types;
  PerformanceProfile profile;

  std::size_t num_resources() const { return meta.resources.size(); }
  std::size_t num_apps() const { return applications.size(); }
  std::size_t num_pms() const { return pms.size(); }
  std::size_t num_types() const { return vm_types.size(); }

  friend bool operator==(const ConsolidationProblem&, const ConsolidationProblem&) = default;
};

/// x_{i,k,l} = count for one nonzero (app, pm, type) triple. Indices are zero-based.
struct Placement {
  std::size_t app = 0;
  std::size_t pm = 0;
  std::size_t type = 0;
  std::size_t count = 0;

  auto operator<=>(const Placement&) const = default;
};

struct DeploymentPlan {
  std::vector<Placement> placements;  // canonical: sorted by (app, pm, type), merged, count >= 1
  std::vector<std::size_t> used_pms;  // sorted
  std::vector<double> provided;       // per app
  std::vector<bool> satisfied;        // per app

  friend bool operator==(const DeploymentPlan&, const DeploymentPlan&) = default;
};

struct Violation {
  std::string path;
  std::string reason;
  friend bool operator==(const Violation&, const Violation&) = default;
};

std::vector<Violation> validate_problem(const ConsolidationProblem& problem);

/// Throws InputError listing every violation when the problem is invalid.
void require_valid(const ConsolidationProblem& problem);

/// Builds a z-consistent plan from raw placements: merges duplicates, drops
/// zero counts, derives used PMs, provided throughput and satisfaction.
/// Throws InputError on an index outside the problem.
DeploymentPlan make_plan(const ConsolidationProblem& problem, std::vector<Placement> placements);

struct ResourceFlag {
  std::size_t pm = 0;
  std::size_t resource = 0;
  friend bool operator==(const ResourceFlag&, const ResourceFlag&) = default;
};

struct FeasibilityReport {
  std::vector<std::vector<double>> slack;  // [pm][resource], r_{j,k} - usage
  std::vector<double> surplus;             // [app], provided - required
  std::vector<ResourceFlag> overloaded;
  bool resource_feasible = true;
  bool performance_satisfied = true;
};

FeasibilityReport check_plan(const ConsolidationProblem& problem, const DeploymentPlan& plan);

inline std::size_t plan_pm_count(const DeploymentPlan& plan) { return plan.used_pms.size(); }

/// Total VM instances in the plan.
std::size_t plan_vm_count(const DeploymentPlan& plan);

/// Per-app relative difference provided/required - 1; NaN where required == 0.
std::vector<double> relative_differences(const ConsolidationProblem& problem,
                                         const DeploymentPlan& plan);

/// Largest value any single VM instance can provide to `app` on any PM.
double max_single_vm_throughput(const ConsolidationProblem& problem, std::size_t app);

/// Per-dimension maximum capacity over a PM list.
ResourceVector max_capacity(std::span<const PhysicalMachine> pms, std::size_t dims);

}  // namespace consol
