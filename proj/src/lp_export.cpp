#include <charconv>
#include <string>

#include "consol/ilp.hpp"

namespace consol {

namespace {

constexpr std::size_t kTermsPerLine = 8;

std::string format_number(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

void append_terms(std::string& out, const IlpModel& m, const std::vector<Term>& terms) {
  if (terms.empty()) {
    out += " 0";
    return;
  }
  for (std::size_t n = 0; n < terms.size(); ++n) {
    if (n > 0 && n % kTermsPerLine == 0) out += "\n  ";
    const double c = terms[n].coef;
    const double mag = c < 0 ? -c : c;
    if (n == 0) {
      out += c < 0 ? " -" : " ";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (mag != 1.0) {
      out += format_number(mag);
      out += ' ';
    }
    out += m.variables[terms[n].var].name;
  }
}

void append_names(std::string& out, const IlpModel& m, VarKind kind) {
  std::size_t on_line = 0;
  for (const auto& v : m.variables) {
    if (v.kind != kind) continue;
    if (on_line == kTermsPerLine) {
      out += '\n';
      on_line = 0;
    }
    out += ' ';
    out += v.name;
    ++on_line;
  }
  if (on_line > 0) out += '\n';
}

}  // namespace

std::string export_lp(const IlpModel& m) {
  std::string out;
  out += "Minimize\n obj:";
  append_terms(out, m, m.objective);
  out += "\nSubject To\n";
  for (const auto& row : m.constraints) {
    out += ' ';
    out += row.name;
    out += ':';
    append_terms(out, m, row.terms);
    out += row.sense == Sense::LessEqual ? " <= " : " >= ";
    out += format_number(row.rhs);
    out += '\n';
  }
  out += "Bounds\n";
  for (const auto& v : m.variables) {
    if (v.kind == VarKind::Integer) out += " " + v.name + " >= 0\n";
  }
  out += "General\n";
  append_names(out, m, VarKind::Integer);
  out += "Binary\n";
  append_names(out, m, VarKind::Binary);
  out += "End\n";
  return out;
}

}  // namespace consol
