#include "consol/ilp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace consol {

IlpModel build_ilp(const ConsolidationProblem& problem) {
  require_valid(problem);

  IlpModel m;
  m.num_apps = problem.num_apps();
  m.num_pms = problem.num_pms();
  m.num_types = problem.num_types();
  m.num_resources = problem.num_resources();
  const std::size_t A = m.num_apps, P = m.num_pms, V = m.num_types, R = m.num_resources;

  m.variables.reserve(P + A * P * V);
  for (std::size_t k = 0; k < P; ++k) {
    m.variables.push_back({"z_" + std::to_string(k), VarKind::Binary});
    m.objective.push_back({m.z_var(k), 1.0});
  }
  for (std::size_t i = 0; i < A; ++i) {
    for (std::size_t k = 0; k < P; ++k) {
      for (std::size_t l = 0; l < V; ++l) {
        m.variables.push_back({"x_" + std::to_string(i) + "_" + std::to_string(k) + "_" +
                                   std::to_string(l),
                               VarKind::Integer});
      }
    }
  }

  for (std::size_t k = 0; k < P; ++k) {
    for (std::size_t j = 0; j < R; ++j) {
      LinearConstraint row;
      row.name = "cap_" + std::to_string(j) + "_" + std::to_string(k);
      row.kind = RowKind::Capacity;
      row.resource = j;
      row.pm = k;
      for (std::size_t i = 0; i < A; ++i) {
        for (std::size_t l = 0; l < V; ++l) {
          const double v = problem.vm_types[l].config[j];
          if (v != 0.0) row.terms.push_back({m.x_var(i, k, l), v});
        }
      }
      const double r = problem.pms[k].capacity[j];
      if (r != 0.0) row.terms.push_back({m.z_var(k), -r});
      std::sort(row.terms.begin(), row.terms.end(),
                [](const Term& a, const Term& b) { return a.var < b.var; });
      row.sense = Sense::LessEqual;
      row.rhs = 0.0;
      m.constraints.push_back(std::move(row));
    }
  }
  for (std::size_t i = 0; i < A; ++i) {
    LinearConstraint row;
    row.name = "perf_" + std::to_string(i);
    row.kind = RowKind::Performance;
    row.app = i;
    for (std::size_t k = 0; k < P; ++k) {
      for (std::size_t l = 0; l < V; ++l) {
        const double mu = problem.profile.at(i, k, l);
        if (mu != 0.0) row.terms.push_back({m.x_var(i, k, l), mu});
      }
    }
    row.sense = Sense::GreaterEqual;
    row.rhs = problem.applications[i].required_throughput;
    m.constraints.push_back(std::move(row));
  }
  return m;
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::NodeLimit: return "node_limit";
  }
  return "unknown";
}

namespace {

struct NodeLimitReached {};

// Dense view of the model: per x variable its resource weights and throughput.
class BranchAndBound {
 public:
  BranchAndBound(const IlpModel& m, std::uint64_t node_limit)
      : A_(m.num_apps),
        P_(m.num_pms),
        V_(m.num_types),
        R_(m.num_resources),
        node_limit_(node_limit) {
    cap_.assign(P_ * R_, 0.0);
    weight_.assign(A_ * P_ * V_ * R_, 0.0);
    mu_.assign(A_ * P_ * V_, 0.0);
    demand_.assign(A_, 0.0);
    for (const auto& row : m.constraints) {
      if (row.kind == RowKind::Capacity) {
        for (const auto& t : row.terms) {
          if (t.var < P_) {
            cap_[row.pm * R_ + row.resource] = -t.coef;
          } else {
            weight_[(t.var - P_) * R_ + row.resource] = t.coef;
          }
        }
      } else {
        for (const auto& t : row.terms) mu_[t.var - P_] = t.coef;
        demand_[row.app] = row.rhs;
      }
    }

    pm_best_.assign(A_ * P_, 0.0);
    for (std::size_t i = 0; i < A_; ++i) {
      for (std::size_t k = 0; k < P_; ++k) pm_best_[i * P_ + k] = pm_bound(i, k, &cap_[k * R_]);
    }
  }

  ExactSolution run() {
    ExactSolution out;
    z_.assign(P_, 0);
    try {
      branch_z(0, 0);
      out.status = best_count_ ? SolveStatus::Optimal : SolveStatus::Infeasible;
    } catch (const NodeLimitReached&) {
      out.status = SolveStatus::NodeLimit;
    }
    out.nodes = nodes_;
    if (best_count_) out.plan = to_plan();
    if (best_count_) out.objective_value = out.plan.used_pms.size();
    return out;
  }

 private:
  std::size_t xi(std::size_t i, std::size_t k, std::size_t l) const { return (i * P_ + k) * V_ + l; }

  void tick() {
    if (++nodes_ > node_limit_) throw NodeLimitReached{};
  }

  // Max instances of x's type fitting the given residual capacity.
  std::size_t count_bound(std::size_t x, const double* residual) const {
    std::size_t bound = std::numeric_limits<std::size_t>::max();
    bool any = false;
    for (std::size_t j = 0; j < R_; ++j) {
      const double w = weight_[x * R_ + j];
      if (w <= 0.0) continue;
      any = true;
      const double n = std::floor(residual[j] / w + kRelTolerance);
      bound = std::min(bound, n <= 0.0 ? std::size_t{0} : static_cast<std::size_t>(n));
    }
    if (!any) throw std::invalid_argument("x variable without positive resource weight");
    return bound;
  }

  // Upper bound on throughput app i can draw from PM k given its residual.
  double pm_bound(std::size_t i, std::size_t k, const double* residual) const {
    double by_count = 0.0;
    for (std::size_t l = 0; l < V_; ++l) {
      const std::size_t x = xi(i, k, l);
      if (mu_[x] > 0.0) by_count += mu_[x] * static_cast<double>(count_bound(x, residual));
    }
    double best = by_count;
    for (std::size_t j = 0; j < R_; ++j) {
      double rate = 0.0;
      bool valid = true;
      for (std::size_t l = 0; l < V_ && valid; ++l) {
        const std::size_t x = xi(i, k, l);
        if (mu_[x] <= 0.0) continue;
        const double w = weight_[x * R_ + j];
        if (w <= 0.0) {
          valid = false;
        } else {
          rate = std::max(rate, mu_[x] / w);
        }
      }
      if (valid) best = std::min(best, rate * std::max(0.0, residual[j]));
    }
    return best;
  }

  void branch_z(std::size_t k, std::size_t ones) {
    tick();
    if (best_count_ && ones >= *best_count_) return;
    for (std::size_t i = 0; i < A_; ++i) {
      double reachable = 0.0;
      for (std::size_t kk = 0; kk < P_; ++kk) {
        if (kk < k && z_[kk] == 0) continue;
        reachable += pm_best_[i * P_ + kk];
      }
      if (!meets(reachable, demand_[i])) return;
    }
    if (k == P_) {
      if (solve_x()) {
        best_count_ = ones;
        best_x_ = x_;
      }
      return;
    }
    z_[k] = 0;
    branch_z(k + 1, ones);
    z_[k] = 1;
    branch_z(k + 1, ones + 1);
    z_[k] = 0;
  }

  bool solve_x() {
    open_.clear();
    for (std::size_t k = 0; k < P_; ++k) {
      if (z_[k]) open_.push_back(k);
    }
    x_.assign(A_ * P_ * V_, 0);
    residual_ = cap_;
    provided_.assign(A_, 0.0);

    // Least resource per unit throughput over the open PMs; 0 when some useful
    // type does not consume that resource at all.
    efficiency_.assign(A_ * R_, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < A_; ++i) {
      for (std::size_t k : open_) {
        for (std::size_t l = 0; l < V_; ++l) {
          const std::size_t x = xi(i, k, l);
          if (mu_[x] <= 0.0) continue;
          for (std::size_t j = 0; j < R_; ++j) {
            double& e = efficiency_[i * R_ + j];
            e = std::min(e, weight_[x * R_ + j] / mu_[x]);
          }
        }
      }
    }
    return branch_x(0, 0, 0);
  }

  bool aggregate_fits(std::size_t from_app) const {
    for (std::size_t j = 0; j < R_; ++j) {
      double need = 0.0;
      for (std::size_t i = from_app; i < A_; ++i) {
        const double unmet = demand_[i] - provided_[i];
        if (unmet <= 0.0) continue;
        const double e = efficiency_[i * R_ + j];
        if (std::isinf(e)) return false;
        need += unmet * e;
      }
      double avail = 0.0;
      for (std::size_t k : open_) avail += std::max(0.0, residual_[k * R_ + j]);
      if (!within(need, avail)) return false;
    }
    return true;
  }

  // Variables for app i are visited PM by PM (open PMs only), type by type.
  bool branch_x(std::size_t i, std::size_t slot, std::size_t l) {
    tick();
    if (i == A_) return true;
    if (meets(provided_[i], demand_[i])) return branch_x(i + 1, 0, 0);
    if (slot == open_.size()) return false;
    if (l == V_) return branch_x(i, slot + 1, 0);

    double potential = provided_[i];
    for (std::size_t s = slot; s < open_.size(); ++s) {
      potential += pm_bound(i, open_[s], &residual_[open_[s] * R_]);
    }
    if (!meets(potential, demand_[i])) return false;
    if (!aggregate_fits(i)) return false;

    const std::size_t k = open_[slot];
    const std::size_t x = xi(i, k, l);
    if (mu_[x] <= 0.0) return branch_x(i, slot, l + 1);

    const std::size_t bound = count_bound(x, &residual_[k * R_]);
    for (std::size_t n = 0; n <= bound; ++n) {
      if (n > 0) {
        for (std::size_t j = 0; j < R_; ++j) residual_[k * R_ + j] -= weight_[x * R_ + j];
        provided_[i] += mu_[x];
        x_[x] = n;
      }
      if (branch_x(i, slot, l + 1)) return true;
    }
    for (std::size_t j = 0; j < R_; ++j) {
      residual_[k * R_ + j] += weight_[x * R_ + j] * static_cast<double>(bound);
    }
    provided_[i] -= mu_[x] * static_cast<double>(bound);
    x_[x] = 0;
    return false;
  }

  DeploymentPlan to_plan() const {
    DeploymentPlan plan;
    plan.provided.assign(A_, 0.0);
    std::vector<bool> used(P_, false);
    for (std::size_t i = 0; i < A_; ++i) {
      for (std::size_t k = 0; k < P_; ++k) {
        for (std::size_t l = 0; l < V_; ++l) {
          const std::size_t n = best_x_[xi(i, k, l)];
          if (n == 0) continue;
          plan.placements.push_back({i, k, l, n});
          plan.provided[i] += mu_[xi(i, k, l)] * static_cast<double>(n);
          used[k] = true;
        }
      }
    }
    for (std::size_t k = 0; k < P_; ++k) {
      if (used[k]) plan.used_pms.push_back(k);
    }
    plan.satisfied.resize(A_);
    for (std::size_t i = 0; i < A_; ++i) plan.satisfied[i] = meets(plan.provided[i], demand_[i]);
    return plan;
  }

  std::size_t A_, P_, V_, R_;
  std::uint64_t node_limit_;
  std::uint64_t nodes_ = 0;

  std::vector<double> cap_;       // [pm][resource]
  std::vector<double> weight_;    // [x][resource]
  std::vector<double> mu_;        // [x]
  std::vector<double> demand_;    // [app]
  std::vector<double> pm_best_;   // [app][pm]

  std::vector<char> z_;
  std::vector<std::size_t> open_;
  std::vector<std::size_t> x_;
  std::vector<double> residual_;
  std::vector<double> provided_;
  std::vector<double> efficiency_;  // [app][resource]

  std::optional<std::size_t> best_count_;
  std::vector<std::size_t> best_x_;
};

}  // namespace

ExactSolution solve_exact(const IlpModel& model, std::uint64_t node_limit) {
  if (node_limit == 0) throw std::invalid_argument("node_limit must be positive");
  return BranchAndBound(model, node_limit).run();
}

}  // namespace consol
