#pragma once

#include "rotcic/measure.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rotcic {

/// Per-restaurant variables recorded in both survey waves.
enum class CkVariable { kEmpFt, kEmpPt, kHrsOpen, kOpen, kNMgrs, kNRegs, kIncTime, kPSoda, kPEntree };

inline constexpr std::size_t kCkVariableCount = 9;

/// Lower-case wave-1 column name ("empft", ..., "pentree"); wave 2 appends "2".
std::string_view ck_column(CkVariable v);
/// Accepts either spelling, case-insensitive ("EMPFT", "empft").
CkVariable parse_ck_variable(std::string_view name);

struct RestaurantRecord {
  bool treated = false;  // NJ = treatment, PA = control
  std::array<std::optional<double>, kCkVariableCount> wave1;
  std::array<std::optional<double>, kCkVariableCount> wave2;

  std::optional<double> get(CkVariable v, int wave) const;
};

/// Reads the normalized CSV (header state,empft,emppt,empft2,emppt2,hrsopen,
/// hrsopen2,...,pentree,pentree2; columns may come in any order). `.` or an
/// empty field is missing; state is NJ/PA or 1/0. Throws ParseError with
/// the line number on malformed rows.
std::vector<RestaurantRecord> read_ck_records(const std::filesystem::path& path);

struct CKDataset {
  EmpiricalMeasure y0c;
  EmpiricalMeasure y1c;
  EmpiricalMeasure y0t;
  EmpiricalMeasure y1t;
  std::vector<CkVariable> columns;

  Index control_count() const noexcept { return y0c.size(); }
  Index treatment_count() const noexcept { return y0t.size(); }
};

/// Two-dimensional (FT, PT) selection.
std::vector<CkVariable> ck_ftpt_columns();
/// All nine variables.
std::vector<CkVariable> ck_all_columns();

/// Keeps the records with every selected variable present in both waves and
/// splits them into the four uniform measures. Throws InvalidInput on an
/// empty selection or when a group ends up empty.
CKDataset build_ck(const std::vector<RestaurantRecord>& records, const std::vector<CkVariable>& columns,
                   const std::vector<CkVariable>& filter_columns);

/// build_ck over the file's records, filtering on `filter_columns` (defaults
/// to `columns` when empty).
CKDataset load_ck(const std::filesystem::path& path, const std::vector<CkVariable>& columns,
                  const std::vector<CkVariable>& filter_columns = {});
CKDataset load_ck(const std::filesystem::path& path, const std::vector<std::string>& columns);

/// Full-time equivalent employment FT + 0.5 PT.
double fte(double ft, double pt);

}  // namespace rotcic
