#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rotcic {

/// One (experiment, method, configuration, seed) measurement.
struct BenchRecord {
  std::string experiment;
  std::string method;
  std::int64_t n = 0;
  std::int64_t d = 0;
  std::int64_t k = 0;                 // directions for rot, iterations for ascent, 0 otherwise
  std::optional<double> lambda;       // Sinkhorn only
  std::uint64_t seed = 0;
  double runtime_s = 0.0;
  double ot_distance = 0.0;
  std::string meta;                   // key=value;key=value

  bool operator==(const BenchRecord&) const = default;
};

inline constexpr const char* kRecordsHeader =
    "experiment,method,n,d,k,lambda,seed,runtime_s,ot_distance,meta";

void write_records(std::ostream& out, const std::vector<BenchRecord>& records);
void write_records(const std::filesystem::path& path, const std::vector<BenchRecord>& records);
/// Inverse of write_records; doubles are written with 17 significant digits
/// so the round trip is exact. Throws ParseError on malformed input.
std::vector<BenchRecord> read_records(std::istream& in);
std::vector<BenchRecord> read_records(const std::filesystem::path& path);

/// Value of `key` in a key=value;... metadata string.
std::optional<std::string> meta_value(const std::string& meta, const std::string& key);

/// Mean and sample standard deviation per (experiment, method, n, d, k, lambda).
struct SummaryRow {
  std::string experiment;
  std::string method;
  std::int64_t n = 0;
  std::int64_t d = 0;
  std::int64_t k = 0;
  std::optional<double> lambda;
  std::size_t count = 0;
  double runtime_mean = 0.0;
  double runtime_std = 0.0;
  double distance_mean = 0.0;
  double distance_std = 0.0;
};

/// Groups keep the order in which they first appear.
std::vector<SummaryRow> summarize(const std::vector<BenchRecord>& records);
void write_summary(const std::filesystem::path& path, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary(const std::filesystem::path& path);

/// Sample mean and standard deviation (0 for fewer than two values).
double mean_of(const std::vector<double>& v);
double stddev_of(const std::vector<double>& v);

}  // namespace rotcic
