#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "minimax/solver.hpp"

namespace minimax {

// fixed trajectory schema; wall time is intentionally not a column so that
// identical runs produce byte-identical files
inline constexpr const char* kTraceHeader =
    "t,eta,alpha,beta,grad_map_norm,grad_F_norm,y_gap,v_err,w_err,a_min,a_max,b_t,oracle_calls";

// shortest decimal form that parses back to the same double; NaN renders as
// an empty string (missing diagnostic)
std::string format_double(double v);
std::string format_int(std::int64_t v);

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows);
void write_trace_csv_file(const std::string& path, const std::vector<TraceRow>& rows);

std::vector<TraceRow> read_trace_csv(std::istream& in);
std::vector<TraceRow> read_trace_csv_file(const std::string& path);

}  // namespace minimax
