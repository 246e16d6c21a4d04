#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "consol/model.hpp"

namespace consol {

enum class VarKind { Integer, Binary };
enum class Sense { LessEqual, GreaterEqual };
enum class RowKind { Capacity, Performance };

struct IlpVariable {
  std::string name;
  VarKind kind = VarKind::Integer;
};

struct Term {
  std::size_t var = 0;
  double coef = 0.0;
  friend bool operator==(const Term&, const Term&) = default;
};

struct LinearConstraint {
  std::string name;
  RowKind kind = RowKind::Capacity;
  std::size_t resource = 0;  // capacity rows
  std::size_t pm = 0;        // capacity rows
  std::size_t app = 0;       // performance rows
  std::vector<Term> terms;   // nonzero coefficients only, in variable order
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

/// Minimize sum z_k subject to
///   cap_j_k:  sum_{i,l} v_{j,l} x_{i,k,l} - r_{j,k} z_k <= 0
///   perf_i:   sum_{k,l} mu_{i,k,l} x_{i,k,l} >= mu_i
/// with x general integer >= 0 and z binary.
///
/// Variables: z_0..z_{P-1} first, then x in (app, pm, type) order.
/// Rows: capacity rows in (pm, resource) order, then performance rows by app.
struct IlpModel {
  std::size_t num_apps = 0;
  std::size_t num_pms = 0;
  std::size_t num_types = 0;
  std::size_t num_resources = 0;
  std::vector<IlpVariable> variables;
  std::vector<Term> objective;
  std::vector<LinearConstraint> constraints;

  std::size_t z_var(std::size_t pm) const { return pm; }
  std::size_t x_var(std::size_t app, std::size_t pm, std::size_t type) const {
    return num_pms + (app * num_pms + pm) * num_types + type;
  }
};

/// Throws InputError when the problem fails validation.
IlpModel build_ilp(const ConsolidationProblem& problem);

enum class SolveStatus { Optimal, Infeasible, NodeLimit };

inline constexpr std::uint64_t kDefaultNodeLimit = 10'000'000;

struct ExactSolution {
  DeploymentPlan plan;
  std::optional<std::size_t> objective_value;  // empty when no incumbent exists
  SolveStatus status = SolveStatus::Infeasible;
  std::uint64_t nodes = 0;
};

/// Depth-first branch-and-bound without LP relaxation. Branches on z (0
/// first) in PM order, then on the x of the open PMs in (app, pm, type) order
/// with values ascending, so among optimal solutions the lexicographically
/// smallest assignment is returned. Prunes on the incumbent PM count, on
/// per-application best-case throughput of the PMs still available, and on
/// aggregate resource needs of the unmet demand.
///
/// Throws std::invalid_argument when node_limit == 0.
ExactSolution solve_exact(const IlpModel& model, std::uint64_t node_limit = kDefaultNodeLimit);

/// CPLEX LP text. Deterministic: identical models give byte-identical text.
std::string export_lp(const IlpModel& model);

const char* to_string(SolveStatus status);

}  // namespace consol
