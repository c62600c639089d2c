#include "sszd/harness/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "sszd/errors.hpp"

namespace sszd::harness {
namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  return out;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw Error("malformed CSV number '" + s + "'");
  return v;
}

std::uint64_t parse_uint(const std::string& s) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0') throw Error("malformed CSV integer '" + s + "'");
  return v;
}

template <typename Fn>
void read_rows(std::istream& in, const std::string& header, std::size_t cols, Fn&& fn) {
  std::string line;
  if (!std::getline(in, line) || line != header) throw Error("expected CSV header '" + header + "'");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != cols) throw Error("CSV row has " + std::to_string(cells.size()) + " fields");
    fn(cells);
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
  out << "eval,k,f_true\n";
  for (const auto& r : rows) out << r.eval << ',' << r.k << ',' << format_value(r.f_true) << '\n';
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& rows) {
  auto out = open_out(path);
  write_trace_csv(out, rows);
}

std::vector<TraceRow> read_trace_csv(std::istream& in) {
  std::vector<TraceRow> rows;
  read_rows(in, "eval,k,f_true", 3, [&](const std::vector<std::string>& c) {
    rows.push_back({parse_uint(c[0]), parse_uint(c[1]), parse_double(c[2])});
  });
  return rows;
}

std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  return read_trace_csv(in);
}

void write_iterates_csv(std::ostream& out, const std::vector<IterateRecord>& iterates) {
  out << "k,eval,f_x,f_xbar,dist\n";
  for (const auto& r : iterates) {
    out << r.k << ',' << r.eval << ',' << format_value(r.f_x) << ',' << format_value(r.f_xbar) << ','
        << format_value(r.dist) << '\n';
  }
}

void write_iterates_csv(const std::filesystem::path& path, const std::vector<IterateRecord>& iterates) {
  auto out = open_out(path);
  write_iterates_csv(out, iterates);
}

std::vector<IterateRecord> read_iterates_csv(std::istream& in) {
  std::vector<IterateRecord> out;
  read_rows(in, "k,eval,f_x,f_xbar,dist", 5, [&](const std::vector<std::string>& c) {
    out.push_back({parse_uint(c[0]), parse_uint(c[1]), parse_double(c[2]), parse_double(c[3]),
                   parse_double(c[4])});
  });
  return out;
}

}  // namespace sszd::harness
