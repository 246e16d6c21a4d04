#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>
#include <stdexcept>

#include "consol/problem_io.hpp"
#include "consol/workload.hpp"

namespace consol {

double peak_target(const ConsolidationProblem& problem, std::size_t app) {
  double sum = 0.0;
  for (std::size_t k = 0; k < problem.num_pms(); ++k) {
    const auto row = problem.profile.row(app, k);
    double best = 0.0;
    for (double mu : row) best = std::max(best, mu);
    sum += best;
  }
  return 0.4 * sum;
}

TraceSeries scale_trace(const TraceSeries& raw, const ConsolidationProblem& problem,
                        std::size_t app) {
  const double peak = raw.demands.empty()
                          ? 0.0
                          : *std::max_element(raw.demands.begin(), raw.demands.end());
  if (!(peak > 0.0)) {
    throw InputError("trace for '" + raw.app_id + "' has no positive demand; cannot scale");
  }
  const double factor = peak_target(problem, app) / peak;
  TraceSeries out = raw;
  for (double& d : out.demands) d *= factor;
  return out;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<TraceSeries> parse_trace_csv(std::string_view text, std::size_t interval_seconds) {
  std::vector<TraceSeries> traces;
  std::map<std::string, std::size_t, std::less<>> index;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        trim(text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos));
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (line.empty()) continue;
    const std::string where = "trace line " + std::to_string(line_no);
    if (!header_seen) {
      if (line != "app_id,interval_index,demand") {
        throw InputError(where + ": expected header 'app_id,interval_index,demand'");
      }
      header_seen = true;
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() != 3) throw InputError(where + ": expected 3 fields");
    const std::string app(trim(fields[0]));
    std::size_t interval = 0;
    const auto f1 = trim(fields[1]);
    if (std::from_chars(f1.data(), f1.data() + f1.size(), interval).ec != std::errc{}) {
      throw InputError(where + ": bad interval_index");
    }
    double demand = 0.0;
    const auto f2 = trim(fields[2]);
    const auto res = std::from_chars(f2.data(), f2.data() + f2.size(), demand);
    if (res.ec != std::errc{} || res.ptr != f2.data() + f2.size() || !(demand >= 0.0)) {
      throw InputError(where + ": demand must be a non-negative number");
    }
    auto [it, inserted] = index.try_emplace(app, traces.size());
    if (inserted) traces.push_back({app, interval_seconds, {}});
    auto& series = traces[it->second];
    if (interval != series.demands.size()) {
      throw InputError(where + ": interval_index " + std::to_string(interval) + " for '" + app +
                       "' is not the next dense index " + std::to_string(series.demands.size()));
    }
    series.demands.push_back(demand);
  }
  if (!header_seen) throw InputError("trace file is empty");
  return traces;
}

std::string write_trace_csv(const std::vector<TraceSeries>& traces) {
  std::ostringstream out;
  out.precision(17);
  out << "app_id,interval_index,demand\n";
  for (const auto& t : traces) {
    for (std::size_t n = 0; n < t.demands.size(); ++n) {
      out << t.app_id << ',' << n << ',' << t.demands[n] << '\n';
    }
  }
  return out.str();
}

std::vector<TraceSeries> load_traces(const std::filesystem::path& path,
                                     std::size_t interval_seconds) {
  try {
    return parse_trace_csv(read_text_file(path), interval_seconds);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::vector<TraceSeries> align_traces(const ConsolidationProblem& problem,
                                      std::vector<TraceSeries> traces) {
  std::vector<TraceSeries> out;
  out.reserve(problem.num_apps());
  for (const auto& app : problem.applications) {
    auto it = std::find_if(traces.begin(), traces.end(),
                           [&](const TraceSeries& t) { return t.app_id == app.id; });
    if (it == traces.end()) throw InputError("no trace for application '" + app.id + "'");
    out.push_back(std::move(*it));
    traces.erase(it);
  }
  if (!traces.empty()) {
    throw InputError("trace for unknown application '" + traces.front().app_id + "'");
  }
  for (const auto& t : out) {
    if (t.demands.empty()) throw InputError("trace for '" + t.app_id + "' is empty");
    if (t.demands.size() != out.front().demands.size()) {
      throw InputError("traces have unequal lengths ('" + t.app_id + "')");
    }
  }
  return out;
}

double unit_open(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

std::vector<double> gen_exponential(double rate, std::size_t n, std::uint64_t seed) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential rate must be positive");
  if (n == 0) throw std::invalid_argument("sample count must be positive");
  ExponentialStream stream(seed);
  std::vector<double> out(n);
  for (double& x : out) x = stream.next(rate);
  return out;
}

}  // namespace consol
