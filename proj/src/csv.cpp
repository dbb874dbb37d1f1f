#include "minimax/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "minimax/errors.hpp"

namespace minimax {

std::string format_double(double v) {
  if (std::isnan(v)) return {};
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  MM_CHECK(res.ec == std::errc(), "double formatting failed");
  return std::string(buf, res.ptr);
}

std::string format_int(std::int64_t v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  MM_CHECK(res.ec == std::errc(), "integer formatting failed");
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
  out << kTraceHeader << '\n';
  for (const auto& r : rows) {
    out << format_int(r.t) << ',' << format_double(r.eta) << ',' << format_double(r.alpha) << ','
        << format_double(r.beta) << ',' << format_double(r.grad_map_norm) << ','
        << format_double(r.grad_f_norm) << ',' << format_double(r.y_gap) << ','
        << format_double(r.v_err) << ',' << format_double(r.w_err) << ','
        << format_double(r.a_min) << ',' << format_double(r.a_max) << ','
        << format_double(r.b_t) << ',' << format_int(static_cast<std::int64_t>(r.oracle_calls))
        << '\n';
  }
  if (!out) throw std::ios_base::failure("trace write failed");
}

void write_trace_csv_file(const std::string& path, const std::vector<TraceRow>& rows) {
  std::ofstream out(path, std::ios::binary);  // binary: LF endings on every platform
  if (!out) throw std::ios_base::failure("cannot open for writing: " + path);
  write_trace_csv(out, rows);
  out.flush();
  if (!out) throw std::ios_base::failure("trace write failed: " + path);
}

namespace {

double parse_field(const std::string& s, std::size_t line_no) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigError("trace line " + std::to_string(line_no) + ": bad number '" + s + "'");
  return v;
}

}  // namespace

std::vector<TraceRow> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("trace file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) throw ConfigError("unexpected trace header: " + line);
  std::vector<TraceRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) cells.push_back(cur);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 13)
      throw ConfigError("trace line " + std::to_string(line_no) + ": expected 13 fields, got " +
                        std::to_string(cells.size()));
    TraceRow r;
    r.t = static_cast<std::int64_t>(parse_field(cells[0], line_no));
    r.eta = parse_field(cells[1], line_no);
    r.alpha = parse_field(cells[2], line_no);
    r.beta = parse_field(cells[3], line_no);
    r.grad_map_norm = parse_field(cells[4], line_no);
    r.grad_f_norm = parse_field(cells[5], line_no);
    r.y_gap = parse_field(cells[6], line_no);
    r.v_err = parse_field(cells[7], line_no);
    r.w_err = parse_field(cells[8], line_no);
    r.a_min = parse_field(cells[9], line_no);
    r.a_max = parse_field(cells[10], line_no);
    r.b_t = parse_field(cells[11], line_no);
    r.oracle_calls = static_cast<std::uint64_t>(parse_field(cells[12], line_no));
    rows.push_back(r);
  }
  return rows;
}

std::vector<TraceRow> read_trace_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open trace file: " + path);
  return read_trace_csv(in);
}

}  // namespace minimax
