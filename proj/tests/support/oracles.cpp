#include "oracles.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace consol::testing {
namespace {

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

ResourceVector random_config(std::mt19937_64& rng, std::size_t dims, int lo, int hi) {
  while (true) {
    ResourceVector v(dims);
    bool any = false;
    for (std::size_t j = 0; j < dims; ++j) {
      v[j] = uniform_int(rng, lo, hi);
      any = any || v[j] > 0;
    }
    if (any) return v;
  }
}

ConsolidationProblem skeleton(std::size_t resources, std::size_t apps, std::size_t pms,
                              std::size_t types) {
  ConsolidationProblem p;
  for (std::size_t j = 0; j < resources; ++j) p.meta.resources.push_back({"r" + std::to_string(j), "u"});
  for (std::size_t i = 0; i < apps; ++i) p.applications.push_back({"a" + std::to_string(i), 0.0});
  for (std::size_t k = 0; k < pms; ++k) p.pms.push_back({"p" + std::to_string(k), {}});
  for (std::size_t l = 0; l < types; ++l) p.vm_types.push_back({"t" + std::to_string(l), {}});
  return p;
}

// Largest count of `config` fitting in `cap`.
int fit_count(const ResourceVector& config, const ResourceVector& cap) {
  int bound = 1 << 20;
  for (std::size_t j = 0; j < config.size(); ++j) {
    if (config[j] > 0) bound = std::min(bound, static_cast<int>(cap[j] / config[j]));
  }
  return bound;
}

using Point = std::vector<double>;

bool dominates(const Point& a, const Point& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
  }
  return true;
}

std::vector<Point> pareto(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), std::greater<>());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<Point> front;
  for (const auto& p : pts) {
    bool dominated = false;
    for (const auto& f : front) {
      if (dominates(f, p)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) front.push_back(p);
  }
  return front;
}

}  // namespace

ConsolidationProblem random_tiny_problem(std::mt19937_64& rng, const TinyLimits& limits) {
  const std::size_t R = uniform_int(rng, 1, static_cast<int>(limits.max_resources));
  const std::size_t A = uniform_int(rng, 1, static_cast<int>(limits.max_apps));
  const std::size_t P = uniform_int(rng, 1, static_cast<int>(limits.max_pms));
  const std::size_t V = uniform_int(rng, 1, static_cast<int>(limits.max_types));
  ConsolidationProblem p = skeleton(R, A, P, V);
  for (auto& pm : p.pms) {
    pm.capacity = ResourceVector(R);
    for (std::size_t j = 0; j < R; ++j) pm.capacity[j] = uniform_int(rng, 0, limits.max_amount);
  }
  for (auto& t : p.vm_types) t.config = random_config(rng, R, 0, limits.max_amount);

  std::vector<double> entries(A * P * V);
  for (double& e : entries) e = uniform_int(rng, 0, limits.max_mu);
  p.profile = PerformanceProfile::dense(A, P, V, std::move(entries));

  for (std::size_t i = 0; i < A; ++i) {
    // What the app could get with every PM to itself.
    double alone = 0.0;
    for (std::size_t k = 0; k < P; ++k) {
      double best = 0.0;
      for (std::size_t l = 0; l < V; ++l) {
        best = std::max(best, p.profile.at(i, k, l) * fit_count(p.vm_types[l].config, p.pms[k].capacity));
      }
      alone += best;
    }
    p.applications[i].required_throughput =
        uniform_int(rng, 0, static_cast<int>(alone * 0.8 / static_cast<double>(A)) + 2);
  }
  return p;
}

ConsolidationProblem random_feasible_problem(std::mt19937_64& rng, double witness_share) {
  const std::size_t R = uniform_int(rng, 1, 3);
  const std::size_t A = uniform_int(rng, 1, 5);
  const std::size_t P = uniform_int(rng, 2, 10);
  const std::size_t V = uniform_int(rng, 1, 6);
  ConsolidationProblem p = skeleton(R, A, P, V);
  for (auto& pm : p.pms) {
    pm.capacity = ResourceVector(R);
    for (std::size_t j = 0; j < R; ++j) pm.capacity[j] = uniform_int(rng, 2, 16);
  }
  for (auto& t : p.vm_types) t.config = random_config(rng, R, 0, 8);

  std::vector<double> entries(A * P * V);
  for (double& e : entries) e = uniform_real(rng, 0.0, 1.0) < 0.1 ? 0.0 : uniform_real(rng, 0.5, 10.0);
  p.profile = PerformanceProfile::dense(A, P, V, std::move(entries));

  std::vector<std::size_t> order(P);
  for (std::size_t k = 0; k < P; ++k) order[k] = k;
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t hosts = std::max<std::size_t>(1, static_cast<std::size_t>(witness_share * P));
  std::vector<double> provided(A, 0.0);
  for (std::size_t h = 0; h < hosts; ++h) {
    const std::size_t k = order[h];
    ResourceVector residual = p.pms[k].capacity;
    for (int attempt = 0; attempt < 12; ++attempt) {
      const std::size_t i = uniform_int(rng, 0, static_cast<int>(A) - 1);
      const std::size_t l = uniform_int(rng, 0, static_cast<int>(V) - 1);
      if (!p.vm_types[l].config.fits_within(residual)) continue;
      residual -= p.vm_types[l].config;
      provided[i] += p.profile.at(i, k, l);
    }
  }
  for (std::size_t i = 0; i < A; ++i) {
    p.applications[i].required_throughput = provided[i] * uniform_real(rng, 0.2, 1.0);
  }
  return p;
}

OracleResult exhaustive_min_pms(const ConsolidationProblem& problem) {
  const std::size_t A = problem.num_apps(), P = problem.num_pms(), V = problem.num_types();
  OracleResult result;
  std::vector<double> demand(A);
  for (std::size_t i = 0; i < A; ++i) demand[i] = problem.applications[i].required_throughput;
  auto satisfies = [&](const Point& pt) {
    for (std::size_t i = 0; i < A; ++i) {
      if (!meets(pt[i], demand[i])) return false;
    }
    return true;
  };

  // Per PM: throughput vectors of every capacity-feasible loading.
  std::vector<std::vector<Point>> fronts(P);
  for (std::size_t k = 0; k < P; ++k) {
    std::vector<Point> points;
    Point current(A, 0.0);
    ResourceVector used(problem.num_resources());
    std::function<void(std::size_t)> enumerate = [&](std::size_t slot) {
      if (slot == A * V) {
        points.push_back(current);
        ++result.loadings;
        return;
      }
      const std::size_t i = slot / V, l = slot % V;
      const auto& config = problem.vm_types[l].config;
      const ResourceVector saved = used;
      const Point saved_pt = current;
      while (true) {
        bool fits = true;
        for (std::size_t j = 0; j < used.size(); ++j) {
          if (used[j] > problem.pms[k].capacity[j]) fits = false;
        }
        if (!fits) break;
        enumerate(slot + 1);
        used += config;
        current[i] += problem.profile.at(i, k, l);
      }
      used = saved;
      current = saved_pt;
    };
    enumerate(0);
    fronts[k] = pareto(std::move(points));
  }

  if (satisfies(Point(A, 0.0))) {
    result.min_pms = 0;
    return result;
  }
  for (std::size_t size = 1; size <= P; ++size) {
    for (std::uint32_t mask = 0; mask < (1u << P); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) != size) continue;
      std::vector<Point> acc{Point(A, 0.0)};
      for (std::size_t k = 0; k < P; ++k) {
        if (!(mask >> k & 1u)) continue;
        std::vector<Point> sum;
        for (const auto& a : acc) {
          for (const auto& b : fronts[k]) {
            Point s(A);
            for (std::size_t i = 0; i < A; ++i) s[i] = a[i] + b[i];
            sum.push_back(std::move(s));
          }
        }
        acc = pareto(std::move(sum));
      }
      if (std::any_of(acc.begin(), acc.end(), satisfies)) {
        result.min_pms = size;
        return result;
      }
    }
  }
  return result;
}

std::size_t optimal_bins_1d(const std::vector<int>& sizes, int cap) {
  std::vector<int> items = sizes;
  std::sort(items.rbegin(), items.rend());
  std::size_t best = items.size();
  std::vector<int> loads;
  std::function<void(std::size_t)> place = [&](std::size_t n) {
    if (loads.size() >= best) return;
    if (n == items.size()) {
      best = loads.size();
      return;
    }
    std::set<int> tried;
    for (std::size_t b = 0; b < loads.size(); ++b) {
      if (loads[b] + items[n] > cap || !tried.insert(loads[b]).second) continue;
      loads[b] += items[n];
      place(n + 1);
      loads[b] -= items[n];
    }
    loads.push_back(items[n]);
    place(n + 1);
    loads.pop_back();
  };
  place(0);
  return best;
}

namespace {

bool is_number(const std::string& tok) {
  if (tok.empty()) return false;
  char* end = nullptr;
  std::strtod(tok.c_str(), &end);
  return end == tok.c_str() + tok.size();
}

// Parses "[-] [c] v [+|- [c] v]..." into coefficients.
std::map<std::string, double> parse_terms(const std::vector<std::string>& toks) {
  std::map<std::string, double> out;
  if (toks.size() == 1 && toks[0] == "0") return out;
  double sign = 1.0;
  double coef = 1.0;
  bool expect_sign = false;
  for (const auto& t : toks) {
    if (t == "+" || t == "-") {
      sign = t == "-" ? -1.0 : 1.0;
      expect_sign = false;
      continue;
    }
    if (expect_sign) throw std::runtime_error("missing operator before '" + t + "'");
    if (is_number(t)) {
      coef = std::stod(t);
      continue;
    }
    if (out.count(t)) throw std::runtime_error("duplicate term " + t);
    out[t] = sign * coef;
    sign = 1.0;
    coef = 1.0;
    expect_sign = true;
  }
  return out;
}

}  // namespace

ParsedLp parse_lp_text(const std::string& text) {
  ParsedLp lp;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::vector<std::string> pending;  // tokens of the statement being read
  auto flush = [&] {
    if (pending.empty()) return;
    const std::string label = pending.front();
    if (label.empty() || label.back() != ':') throw std::runtime_error("expected a label: " + label);
    const std::string name = label.substr(0, label.size() - 1);
    std::vector<std::string> body(pending.begin() + 1, pending.end());
    pending.clear();
    if (section == "Minimize") {
      if (name != "obj") throw std::runtime_error("objective must be named obj");
      lp.objective = parse_terms(body);
      return;
    }
    if (body.size() < 3) throw std::runtime_error("short row " + name);
    ParsedRow row;
    row.rhs = std::stod(body.back());
    row.sense = body[body.size() - 2];
    if (row.sense != "<=" && row.sense != ">=") throw std::runtime_error("bad sense in " + name);
    body.resize(body.size() - 2);
    row.coefs = parse_terms(body);
    if (lp.rows.count(name)) throw std::runtime_error("duplicate row " + name);
    lp.rows[name] = row;
    lp.row_order.push_back(name);
  };

  bool ended = false;
  while (std::getline(in, line)) {
    if (line == "Minimize" || line == "Subject To" || line == "Bounds" || line == "General" ||
        line == "Binary" || line == "End") {
      flush();
      section = line;
      if (line == "End") ended = true;
      continue;
    }
    if (ended) throw std::runtime_error("text after End");
    std::istringstream words(line);
    std::vector<std::string> toks;
    for (std::string w; words >> w;) toks.push_back(w);
    if (section == "Minimize" || section == "Subject To") {
      // A statement starts with a label; continuation lines do not.
      if (!toks.empty() && toks.front().back() == ':') flush();
      pending.insert(pending.end(), toks.begin(), toks.end());
    } else if (section == "Bounds") {
      if (toks.size() != 3 || toks[1] != ">=" || toks[2] != "0") {
        throw std::runtime_error("unexpected bound: " + line);
      }
      lp.lower_bounded.insert(toks[0]);
    } else if (section == "General") {
      lp.general.insert(toks.begin(), toks.end());
    } else if (section == "Binary") {
      lp.binary.insert(toks.begin(), toks.end());
    } else {
      throw std::runtime_error("text outside a section: " + line);
    }
  }
  if (!ended) throw std::runtime_error("missing End");
  return lp;
}

}  // namespace consol::testing
