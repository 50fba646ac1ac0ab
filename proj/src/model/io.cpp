#include "sbqa/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sbqa/errors.hpp"

namespace sbqa {

namespace {

using json = nlohmann::json;

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
    out.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

double parse_number(std::string_view tok, std::size_t line) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && tok.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ParseError("invalid number '" + std::string(tok) + "'", line);
  return v;
}

std::uint32_t parse_index(std::string_view tok, std::size_t n, std::size_t line) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("invalid index '" + std::string(tok) + "'", line);
  }
  if (v >= n) throw ParseError("index " + std::to_string(v) + " out of range for n=" + std::to_string(n), line);
  return static_cast<std::uint32_t>(v);
}

bool looks_headerless(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto toks = split_ws(line);
    if (toks.empty() || toks[0].front() == '#') continue;
    return std::isdigit(static_cast<unsigned char>(toks[0].front())) != 0;
  }
  return false;
}

Instance parse_edge_list(std::string_view text) {
  struct Row { std::uint64_t i, j; double w; std::size_t line; };
  std::vector<Row> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  std::uint64_t max_index = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split_ws(line);
    if (toks.empty() || toks[0].front() == '#') continue;
    if (toks.size() != 3) throw ParseError("expected 'i j w'", lineno);
    const auto i = static_cast<std::uint64_t>(parse_number(toks[0], lineno));
    const auto j = static_cast<std::uint64_t>(parse_number(toks[1], lineno));
    rows.push_back({i, j, parse_number(toks[2], lineno), lineno});
    max_index = std::max({max_index, i, j});
  }
  const std::size_t n = rows.empty() ? 0 : max_index + 1;
  std::vector<double> fields(n, 0.0);
  std::vector<Coupling> couplings;
  for (const auto& r : rows) {
    if (r.i == r.j) {
      fields[r.i] += r.w;
    } else {
      couplings.push_back({static_cast<std::uint32_t>(r.i), static_cast<std::uint32_t>(r.j), r.w});
    }
  }
  try {
    return Instance{IsingModel(n, std::move(couplings), std::move(fields)), std::nullopt, {}};
  } catch (const InputError& e) {
    throw ParseError(e.what(), 0);
  }
}

Instance parse_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  bool hubo = false;
  std::size_t n = 0;
  double offset = 0.0;
  std::optional<double> reference;
  std::vector<std::string> comments;
  std::vector<Coupling> couplings;
  std::vector<double> fields;
  std::vector<HuboTerm> terms;
  std::set<std::array<std::uint32_t, 3>> seen;

  auto remember = [&](std::array<std::uint32_t, 3> key, std::size_t ln) {
    if (!seen.insert(key).second) throw ParseError("duplicate interaction", ln);
  };

  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0].front() == '#') {
      std::string_view key = toks[0].size() > 1 ? toks[0].substr(1) : (toks.size() > 1 ? toks[1] : "");
      const std::size_t value_at = toks[0].size() > 1 ? 1 : 2;
      if ((key == "offset" || key == "reference_energy") && toks.size() == value_at + 1) {
        const double v = parse_number(toks[value_at], lineno);
        (key == "offset" ? offset : reference.emplace()) = v;
      } else {
        auto pos = line.find('#');
        std::string rest = line.substr(pos + 1);
        if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
        comments.push_back(rest);
      }
      continue;
    }
    if (!have_header) {
      if (toks.size() != 2 || (toks[0] != "ising" && toks[0] != "hubo")) {
        throw ParseError("expected header 'ising <n>' or 'hubo <n>'", lineno);
      }
      hubo = toks[0] == "hubo";
      const double nv = parse_number(toks[1], lineno);
      if (nv < 0 || nv != std::floor(nv)) throw ParseError("invalid variable count", lineno);
      n = static_cast<std::size_t>(nv);
      fields.assign(n, 0.0);
      have_header = true;
      continue;
    }
    const std::string_view kind = toks[0];
    if (kind == "c") {
      if (toks.size() != 4) throw ParseError("expected 'c i j w'", lineno);
      auto i = parse_index(toks[1], n, lineno);
      auto j = parse_index(toks[2], n, lineno);
      const double w = parse_number(toks[3], lineno);
      if (i == j) throw ParseError("self-coupling", lineno);
      if (i > j) std::swap(i, j);
      remember({i, j, UINT32_MAX}, lineno);
      if (hubo) {
        terms.push_back(make_term(i, j, w));
      } else {
        couplings.push_back({i, j, w});
      }
    } else if (kind == "f") {
      if (hubo) throw ParseError("fields are not part of a HUBO model", lineno);
      if (toks.size() != 3) throw ParseError("expected 'f i w'", lineno);
      const auto i = parse_index(toks[1], n, lineno);
      fields[i] += parse_number(toks[2], lineno);
    } else if (kind == "t") {
      if (!hubo) throw ParseError("3-body term in an Ising file", lineno);
      if (toks.size() != 5) throw ParseError("expected 't i j k w'", lineno);
      std::array<std::uint32_t, 3> v{parse_index(toks[1], n, lineno), parse_index(toks[2], n, lineno),
                                     parse_index(toks[3], n, lineno)};
      std::sort(v.begin(), v.end());
      if (v[0] == v[1] || v[1] == v[2]) throw ParseError("3-body term repeats a variable", lineno);
      remember(v, lineno);
      terms.push_back(make_term(v[0], v[1], v[2], parse_number(toks[4], lineno)));
    } else {
      throw ParseError("unknown record '" + std::string(kind) + "'", lineno);
    }
  }
  if (!have_header) throw ParseError("missing 'ising <n>' / 'hubo <n>' header", lineno);

  try {
    if (hubo) return Instance{HuboModel(n, std::move(terms), offset), reference, std::move(comments)};
    return Instance{IsingModel(n, std::move(couplings), std::move(fields), offset), reference,
                    std::move(comments)};
  } catch (const InputError& e) {
    throw ParseError(e.what(), 0);
  }
}

Instance parse_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
  }
  try {
    const std::string kind = doc.at("kind").get<std::string>();
    const auto n = doc.at("n").get<std::size_t>();
    const double offset = doc.value("offset", 0.0);
    std::optional<double> reference;
    if (doc.contains("reference_energy") && !doc["reference_energy"].is_null()) {
      reference = doc["reference_energy"].get<double>();
    }
    std::vector<std::string> comments = doc.value("comments", std::vector<std::string>{});

    auto index = [n](const json& v) {
      const auto i = v.get<std::uint64_t>();
      if (i >= n) throw ParseError("index " + std::to_string(i) + " out of range", 0);
      return static_cast<std::uint32_t>(i);
    };

    if (kind == "ising") {
      std::vector<Coupling> couplings;
      for (const auto& c : doc.value("couplings", json::array())) {
        couplings.push_back({index(c.at(0)), index(c.at(1)), c.at(2).get<double>()});
      }
      std::vector<double> fields(n, 0.0);
      if (doc.contains("fields")) {
        const auto& f = doc["fields"];
        if (!f.empty() && f.front().is_array()) {
          for (const auto& e : f) fields[index(e.at(0))] += e.at(1).get<double>();
        } else if (!f.empty()) {
          if (f.size() != n) throw ParseError("dense fields array must have n entries", 0);
          for (std::size_t i = 0; i < n; ++i) fields[i] = f[i].get<double>();
        }
      }
      return Instance{IsingModel(n, std::move(couplings), std::move(fields), offset), reference,
                      std::move(comments)};
    }
    if (kind == "hubo") {
      std::vector<HuboTerm> terms;
      for (const auto& c : doc.value("couplings", json::array())) {
        terms.push_back(make_term(index(c.at(0)), index(c.at(1)), c.at(2).get<double>()));
      }
      for (const auto& t : doc.value("terms", json::array())) {
        if (t.size() == 3) {
          terms.push_back(make_term(index(t.at(0)), index(t.at(1)), t.at(2).get<double>()));
        } else {
          terms.push_back(make_term(index(t.at(0)), index(t.at(1)), index(t.at(2)), t.at(3).get<double>()));
        }
      }
      if (doc.contains("fields") && !doc["fields"].empty()) {
        throw ParseError("fields are not part of a HUBO model", 0);
      }
      return Instance{HuboModel(n, std::move(terms), offset), reference, std::move(comments)};
    }
    throw ParseError("unknown kind '" + kind + "'", 0);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed instance JSON: ") + e.what(), 0);
  } catch (const InputError& e) {
    throw ParseError(e.what(), 0);
  }
}

}  // namespace

std::size_t Instance::size() const {
  return std::visit([](const auto& m) { return m.size(); }, model);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

Instance parse_instance(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return parse_json(text);
  if (looks_headerless(text)) return parse_edge_list(text);
  return parse_text(text);
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_instance(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

std::string format_instance_text(const Instance& inst) {
  std::ostringstream out;
  for (const auto& c : inst.comments) out << "# " << c << '\n';
  if (inst.is_ising()) {
    const auto& m = inst.ising();
    out << "ising " << m.size() << '\n';
    for (const auto& c : m.couplings()) out << "c " << c.i << ' ' << c.j << ' ' << format_double(c.weight) << '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m.fields()[i] != 0.0) out << "f " << i << ' ' << format_double(m.fields()[i]) << '\n';
    }
    if (m.offset() != 0.0) out << "# offset " << format_double(m.offset()) << '\n';
  } else {
    const auto& m = inst.hubo();
    out << "hubo " << m.size() << '\n';
    for (const auto& t : m.terms()) {
      out << (t.degree == 2 ? "c" : "t");
      for (auto v : t.indices()) out << ' ' << v;
      out << ' ' << format_double(t.weight) << '\n';
    }
    if (m.offset() != 0.0) out << "# offset " << format_double(m.offset()) << '\n';
  }
  if (inst.reference_energy) out << "# reference_energy " << format_double(*inst.reference_energy) << '\n';
  return out.str();
}

std::string format_instance_json(const Instance& inst) {
  json doc;
  if (inst.is_ising()) {
    const auto& m = inst.ising();
    doc["kind"] = "ising";
    doc["n"] = m.size();
    json couplings = json::array();
    for (const auto& c : m.couplings()) couplings.push_back({c.i, c.j, c.weight});
    doc["couplings"] = couplings;
    json fields = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m.fields()[i] != 0.0) fields.push_back({i, m.fields()[i]});
    }
    doc["fields"] = fields;
    doc["terms"] = json::array();
    doc["offset"] = m.offset();
  } else {
    const auto& m = inst.hubo();
    doc["kind"] = "hubo";
    doc["n"] = m.size();
    json couplings = json::array();
    json terms = json::array();
    for (const auto& t : m.terms()) {
      if (t.degree == 2) {
        couplings.push_back({t.vars[0], t.vars[1], t.weight});
      } else {
        terms.push_back({t.vars[0], t.vars[1], t.vars[2], t.weight});
      }
    }
    doc["couplings"] = couplings;
    doc["fields"] = json::array();
    doc["terms"] = terms;
    doc["offset"] = m.offset();
  }
  doc["reference_energy"] = inst.reference_energy ? json(*inst.reference_energy) : json(nullptr);
  if (!inst.comments.empty()) doc["comments"] = inst.comments;
  return doc.dump(1) + "\n";
}

void save_instance(const std::filesystem::path& path, const Instance& inst) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << (path.extension() == ".json" ? format_instance_json(inst) : format_instance_text(inst));
  if (!out) throw InputError("failed writing " + path.string());
}

}  // namespace sbqa
