#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "sszd/trace.hpp"

namespace sszd::harness {

/// `eval,k,f_true` with '\n' line endings and round-trip precision.
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows);
void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& rows);
std::vector<TraceRow> read_trace_csv(std::istream& in);
std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path);

/// `k,eval,f_x,f_xbar,dist`; NaN fields are written as "nan".
void write_iterates_csv(std::ostream& out, const std::vector<IterateRecord>& iterates);
void write_iterates_csv(const std::filesystem::path& path, const std::vector<IterateRecord>& iterates);
std::vector<IterateRecord> read_iterates_csv(std::istream& in);

/// %.17g, "nan" and "inf" spelled out.
std::string format_value(double v);

}  // namespace sszd::harness
