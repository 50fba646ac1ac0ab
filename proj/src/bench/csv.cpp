#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "sbqa/bench.hpp"
#include "sbqa/errors.hpp"
#include "sbqa/io.hpp"

namespace sbqa {

namespace {

constexpr const char* kRunHeader =
    "family,size,n_vars,solver,n_steps,instance_id,run_id,seed,best_energy,reference_energy,gap,runtime_s";

void write_comments(std::ostream& out, const std::vector<std::string>& lines) {
  for (const auto& line : lines) {
    std::istringstream split(line);
    std::string part;
    while (std::getline(split, part)) out << "# " << part << '\n';
  }
}

double parse_number(const std::string& tok, std::size_t line) {
  if (tok == "inf") return std::numeric_limits<double>::infinity();
  if (tok == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw ParseError("invalid number '" + tok + "'", line);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("invalid number '" + tok + "'", line);
  }
}

std::string quoted(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + '"';
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out(1);
  bool in_quotes = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (in_quotes) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        out.back() += '"';
        ++k;
      } else if (c == '"') {
        in_quotes = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

}  // namespace

void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& records,
                    const std::vector<std::string>& config_lines) {
  write_comments(out, config_lines);
  out << kRunHeader << '\n';
  for (const auto& r : records) {
    out << quoted(r.family) << ',' << r.size << ',' << r.n_vars << ',' << quoted(r.solver) << ',' << r.n_steps << ','
        << quoted(r.instance_id) << ',' << r.run_id << ',' << r.seed << ',' << format_double(r.best_energy) << ','
        << format_double(r.reference_energy) << ',' << format_double(r.gap) << ',' << format_double(r.runtime_s)
        << '\n';
  }
}

std::vector<RunRecord> read_runs_csv(std::istream& in) {
  std::vector<RunRecord> records;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != kRunHeader) throw ParseError("unexpected run CSV header", lineno);
      header = true;
      continue;
    }
    const std::vector<std::string> f = split_fields(line);
    if (f.size() != 12) throw ParseError("expected 12 columns", lineno);
    RunRecord r;
    try {
      r.family = f[0];
      r.size = std::stol(f[1]);
      r.n_vars = std::stoul(f[2]);
      r.solver = f[3];
      r.n_steps = std::stol(f[4]);
      r.instance_id = f[5];
      r.run_id = std::stoi(f[6]);
      r.seed = std::stoull(f[7]);
    } catch (const std::logic_error&) {
      throw ParseError("invalid integer field", lineno);
    }
    r.best_energy = parse_number(f[8], lineno);
    r.reference_energy = parse_number(f[9], lineno);
    r.gap = parse_number(f[10], lineno);
    r.runtime_s = parse_number(f[11], lineno);
    records.push_back(std::move(r));
  }
  if (!header) throw ParseError("missing run CSV header", lineno);
  return records;
}

void write_gap_matrix_csv(std::ostream& out, const GapMatrix& m, const std::vector<std::string>& config_lines) {
  write_comments(out, config_lines);
  out << "alpha,beta,mean_gap\n";
  for (std::size_t a = 0; a < m.alphas.size(); ++a) {
    for (std::size_t b = 0; b < m.betas.size(); ++b) {
      out << format_double(m.alphas[a]) << ',' << format_double(m.betas[b]) << ','
          << format_double(m.mean_gap[a][b]) << '\n';
    }
  }
}

}  // namespace sbqa
