#include "rotcic/ck.hpp"

#include "rotcic/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>

namespace rotcic {
namespace {

constexpr std::array<std::string_view, kCkVariableCount> kNames = {
    "empft", "emppt", "hrsopen", "open", "nmgrs", "nregs", "inctime", "psoda", "pentree"};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\"");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<double> parse_value(const std::string& field, std::size_t line_no,
                                  std::string_view column) {
  if (field.empty() || field == ".") return std::nullopt;
  double v = 0.0;
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || end != field.data() + field.size() || !std::isfinite(v)) {
    throw ParseError(line_no, "column " + std::string(column) + ": '" + field + "' is not a number");
  }
  if (v < 0.0) {
    throw ParseError(line_no, "column " + std::string(column) + ": negative value " + field);
  }
  return v;
}

bool parse_state(const std::string& field, std::size_t line_no) {
  const std::string s = lower(field);
  if (s == "nj" || s == "1") return true;
  if (s == "pa" || s == "0") return false;
  throw ParseError(line_no, "state must be NJ/PA or 1/0, got '" + field + "'");
}

EmpiricalMeasure measure_from(const std::vector<const RestaurantRecord*>& rows,
                              const std::vector<CkVariable>& columns, int wave) {
  Eigen::MatrixXd points(static_cast<Index>(rows.size()), static_cast<Index>(columns.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      points(static_cast<Index>(i), static_cast<Index>(c)) = *rows[i]->get(columns[c], wave);
    }
  }
  return EmpiricalMeasure::uniform(std::move(points));
}

}  // namespace

std::string_view ck_column(CkVariable v) { return kNames[static_cast<std::size_t>(v)]; }

CkVariable parse_ck_variable(std::string_view name) {
  const std::string key = lower(name);
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == key) return static_cast<CkVariable>(i);
  }
  throw InvalidInput("unknown CK column '" + std::string(name) + "'");
}

std::optional<double> RestaurantRecord::get(CkVariable v, int wave) const {
  const auto i = static_cast<std::size_t>(v);
  return wave == 1 ? wave1[i] : wave2[i];
}

std::vector<RestaurantRecord> read_ck_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open CK file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  const std::vector<std::string> header = split(line);

  // Column position of state and of each variable in each wave.
  std::optional<std::size_t> state_col;
  std::array<std::optional<std::size_t>, kCkVariableCount> col1;
  std::array<std::optional<std::size_t>, kCkVariableCount> col2;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string name = lower(header[c]);
    if (name == "state") {
      state_col = c;
      continue;
    }
    for (std::size_t v = 0; v < kNames.size(); ++v) {
      if (name == kNames[v]) col1[v] = c;
      if (name == std::string(kNames[v]) + "2") col2[v] = c;
    }
  }
  if (!state_col) throw ParseError(1, "header has no state column");
  for (std::size_t v = 0; v < kNames.size(); ++v) {
    if (!col1[v] || !col2[v]) {
      throw ParseError(1, "header lacks " + std::string(kNames[v]) + " or " +
                              std::string(kNames[v]) + "2");
    }
  }

  std::vector<RestaurantRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split(line);
    if (fields.size() != header.size()) {
      throw ParseError(line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                                    std::to_string(fields.size()));
    }
    RestaurantRecord r;
    r.treated = parse_state(fields[*state_col], line_no);
    for (std::size_t v = 0; v < kNames.size(); ++v) {
      r.wave1[v] = parse_value(fields[*col1[v]], line_no, header[*col1[v]]);
      r.wave2[v] = parse_value(fields[*col2[v]], line_no, header[*col2[v]]);
    }
    records.push_back(r);
  }
  return records;
}

std::vector<CkVariable> ck_ftpt_columns() { return {CkVariable::kEmpFt, CkVariable::kEmpPt}; }

std::vector<CkVariable> ck_all_columns() {
  std::vector<CkVariable> out;
  for (std::size_t i = 0; i < kCkVariableCount; ++i) out.push_back(static_cast<CkVariable>(i));
  return out;
}

CKDataset build_ck(const std::vector<RestaurantRecord>& records, const std::vector<CkVariable>& columns,
                   const std::vector<CkVariable>& filter_columns) {
  if (columns.empty()) throw InvalidInput("CK column selection is empty");
  std::vector<CkVariable> filter = filter_columns;
  filter.insert(filter.end(), columns.begin(), columns.end());

  std::vector<const RestaurantRecord*> control;
  std::vector<const RestaurantRecord*> treated;
  for (const RestaurantRecord& r : records) {
    const bool complete = std::all_of(filter.begin(), filter.end(), [&r](CkVariable v) {
      return r.get(v, 1).has_value() && r.get(v, 2).has_value();
    });
    if (complete) (r.treated ? treated : control).push_back(&r);
  }
  if (control.empty() || treated.empty()) {
    throw InvalidInput("CK selection leaves an empty group (control " + std::to_string(control.size()) +
                       ", treatment " + std::to_string(treated.size()) + ")");
  }
  return {measure_from(control, columns, 1), measure_from(control, columns, 2),
          measure_from(treated, columns, 1), measure_from(treated, columns, 2), columns};
}

CKDataset load_ck(const std::filesystem::path& path, const std::vector<CkVariable>& columns,
                  const std::vector<CkVariable>& filter_columns) {
  if (columns.empty()) throw InvalidInput("CK column selection is empty");
  return build_ck(read_ck_records(path), columns, filter_columns);
}

CKDataset load_ck(const std::filesystem::path& path, const std::vector<std::string>& columns) {
  std::vector<CkVariable> vars;
  for (const std::string& c : columns) vars.push_back(parse_ck_variable(c));
  return load_ck(path, vars);
}

double fte(double ft, double pt) {
  if (!(ft >= 0.0) || !(pt >= 0.0)) throw InvalidInput("fte: counts must be nonnegative");
  return ft + 0.5 * pt;
}

}  // namespace rotcic
