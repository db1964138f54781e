#include "rotcic/records.hpp"

#include "rotcic/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <tuple>

namespace rotcic {
namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Splits one CSV line with RFC 4180 quoting (no embedded newlines).
std::vector<std::string> split_csv(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (in_quotes) throw ParseError(line_no, "unterminated quote");
  fields.push_back(std::move(cur));
  return fields;
}

template <typename T>
T parse_number(const std::string& s, std::size_t line_no, const char* what) {
  T v{};
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw ParseError(line_no, std::string(what) + ": '" + s + "' is not a number");
  }
  return v;
}

std::optional<double> parse_optional(const std::string& s, std::size_t line_no, const char* what) {
  if (s.empty()) return std::nullopt;
  return parse_number<double>(s, line_no, what);
}

std::string optional_field(const std::optional<double>& v) { return v ? fmt17(*v) : std::string(); }

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

void write_records(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << kRecordsHeader << '\n';
  for (const BenchRecord& r : records) {
    out << quoted(r.experiment) << ',' << quoted(r.method) << ',' << r.n << ',' << r.d << ','
        << r.k << ',' << optional_field(r.lambda) << ',' << r.seed << ',' << fmt17(r.runtime_s)
        << ',' << fmt17(r.ot_distance) << ',' << quoted(r.meta) << '\n';
  }
}

void write_records(const std::filesystem::path& path, const std::vector<BenchRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_records(out, records);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<BenchRecord> read_records(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  strip_cr(line);
  if (line != kRecordsHeader) throw ParseError(1, "unexpected header '" + line + "'");
  std::vector<BenchRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv(line, line_no);
    if (f.size() != 10) {
      throw ParseError(line_no, "expected 10 fields, got " + std::to_string(f.size()));
    }
    BenchRecord r;
    r.experiment = f[0];
    r.method = f[1];
    r.n = parse_number<std::int64_t>(f[2], line_no, "n");
    r.d = parse_number<std::int64_t>(f[3], line_no, "d");
    r.k = parse_number<std::int64_t>(f[4], line_no, "k");
    r.lambda = parse_optional(f[5], line_no, "lambda");
    r.seed = parse_number<std::uint64_t>(f[6], line_no, "seed");
    r.runtime_s = parse_number<double>(f[7], line_no, "runtime_s");
    r.ot_distance = parse_number<double>(f[8], line_no, "ot_distance");
    r.meta = f[9];
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<BenchRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_records(in);
}

std::optional<std::string> meta_value(const std::string& meta, const std::string& key) {
  std::size_t start = 0;
  while (start <= meta.size()) {
    std::size_t end = meta.find(';', start);
    if (end == std::string::npos) end = meta.size();
    const std::string item = meta.substr(start, end - start);
    const std::size_t eq = item.find('=');
    if (eq != std::string::npos && item.compare(0, eq, key) == 0 && eq == key.size()) {
      return item.substr(eq + 1);
    }
    start = end + 1;
  }
  return std::nullopt;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

std::vector<SummaryRow> summarize(const std::vector<BenchRecord>& records) {
  struct Group {
    SummaryRow row;
    std::vector<double> runtimes;
    std::vector<double> distances;
  };
  std::vector<Group> groups;
  for (const BenchRecord& r : records) {
    auto key = std::tie(r.experiment, r.method, r.n, r.d, r.k, r.lambda);
    Group* g = nullptr;
    for (Group& cand : groups) {
      if (std::tie(cand.row.experiment, cand.row.method, cand.row.n, cand.row.d, cand.row.k,
                   cand.row.lambda) == key) {
        g = &cand;
        break;
      }
    }
    if (g == nullptr) {
      groups.push_back({});
      g = &groups.back();
      g->row.experiment = r.experiment;
      g->row.method = r.method;
      g->row.n = r.n;
      g->row.d = r.d;
      g->row.k = r.k;
      g->row.lambda = r.lambda;
    }
    g->runtimes.push_back(r.runtime_s);
    g->distances.push_back(r.ot_distance);
  }
  std::vector<SummaryRow> out;
  out.reserve(groups.size());
  for (Group& g : groups) {
    g.row.count = g.runtimes.size();
    g.row.runtime_mean = mean_of(g.runtimes);
    g.row.runtime_std = stddev_of(g.runtimes);
    g.row.distance_mean = mean_of(g.distances);
    g.row.distance_std = stddev_of(g.distances);
    out.push_back(std::move(g.row));
  }
  return out;
}

void write_summary(const std::filesystem::path& path, const std::vector<SummaryRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "experiment,method,n,d,k,lambda,count,runtime_mean,runtime_std,distance_mean,distance_std\n";
  for (const SummaryRow& r : rows) {
    out << quoted(r.experiment) << ',' << quoted(r.method) << ',' << r.n << ',' << r.d << ','
        << r.k << ',' << optional_field(r.lambda) << ',' << r.count << ',' << fmt17(r.runtime_mean)
        << ',' << fmt17(r.runtime_std) << ',' << fmt17(r.distance_mean) << ','
        << fmt17(r.distance_std) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<SummaryRow> read_summary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  std::vector<SummaryRow> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv(line, line_no);
    if (f.size() != 11) throw ParseError(line_no, "expected 11 fields");
    SummaryRow r;
    r.experiment = f[0];
    r.method = f[1];
    r.n = parse_number<std::int64_t>(f[2], line_no, "n");
    r.d = parse_number<std::int64_t>(f[3], line_no, "d");
    r.k = parse_number<std::int64_t>(f[4], line_no, "k");
    r.lambda = parse_optional(f[5], line_no, "lambda");
    r.count = parse_number<std::size_t>(f[6], line_no, "count");
    r.runtime_mean = parse_number<double>(f[7], line_no, "runtime_mean");
    r.runtime_std = parse_number<double>(f[8], line_no, "runtime_std");
    r.distance_mean = parse_number<double>(f[9], line_no, "distance_mean");
    r.distance_std = parse_number<double>(f[10], line_no, "distance_std");
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace rotcic
