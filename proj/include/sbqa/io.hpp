#pragma once

// Instance files.
//
// Text form, one instance per file, whitespace delimited, 0-based indices:
//   ising <n> | hubo <n>        header (first non-comment line)
//   c i j w                     coupling (Ising) or 2-body term (HUBO)
//   f i w                       field (Ising only)
//   t i j k w                   3-body term (HUBO only)
//   # offset <v>
//   # reference_energy <v>
// Any other line starting with '#' is a comment. The JSON mirror uses keys
// {kind, n, couplings, fields, terms, offset, reference_energy}.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sbqa/model.hpp"

namespace sbqa {

struct Instance {
  std::variant<IsingModel, HuboModel> model;
  std::optional<double> reference_energy;
  /// Free-form comment lines (without the leading '#'), written back on save.
  std::vector<std::string> comments;

  bool is_ising() const noexcept { return std::holds_alternative<IsingModel>(model); }
  bool is_hubo() const noexcept { return std::holds_alternative<HuboModel>(model); }
  const IsingModel& ising() const { return std::get<IsingModel>(model); }
  const HuboModel& hubo() const { return std::get<HuboModel>(model); }
  std::size_t size() const;
};

/// Parses either representation; JSON is detected by a leading '{'.
/// Headerless "i j w" edge lists (i == j meaning a field) are accepted as an
/// Ising model sized by the largest index.
Instance parse_instance(std::string_view text);
Instance load_instance(const std::filesystem::path& path);

std::string format_instance_text(const Instance& inst);
std::string format_instance_json(const Instance& inst);
/// Writes JSON when the extension is .json, text otherwise.
void save_instance(const std::filesystem::path& path, const Instance& inst);

/// Shortest decimal that round-trips to the same double ("inf"/"-inf"/"nan" otherwise).
std::string format_double(double v);

}  // namespace sbqa
