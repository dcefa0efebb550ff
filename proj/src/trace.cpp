#include "rminmax/trace.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rminmax {

namespace {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double_field(const std::string& s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::stod(s);
}

}  // namespace

WallClock::WallClock()
    : start_ns_(std::chrono::duration_cast<std::chrono::nanoseconds>(
                    std::chrono::steady_clock::now().time_since_epoch())
                    .count()) {}

std::int64_t WallClock::elapsed_ms() const {
  auto now = std::chrono::duration_cast<std::chrono::nanoseconds>(
                 std::chrono::steady_clock::now().time_since_epoch())
                 .count();
  return (now - start_ns_) / 1000000;
}

std::string trace_to_csv(const RunTrace& trace) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const TraceRow& r : trace.rows) {
    out += std::to_string(r.iter);
    out += ',';
    out += std::to_string(r.grad_calls);
    out += ',';
    out += std::to_string(r.proj_calls);
    out += ',';
    out += fmt_double(r.value);
    out += ',';
    out += fmt_double(r.gap_upper);
    out += ',';
    out += fmt_double(r.dist_sq);
    out += ',';
    out += std::to_string(r.wall_ms);
    out += '\n';
  }
  return out;
}

void write_trace_csv(const RunTrace& trace, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open trace file for writing: " + path);
  f << trace_to_csv(trace);
}

RunTrace parse_trace_csv(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw std::runtime_error("unexpected CSV header: " + line);
  RunTrace t;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    fields.push_back(cur);
    if (fields.size() != 7) throw std::runtime_error("bad CSV row: " + line);
    TraceRow r;
    r.iter = std::stoll(fields[0]);
    r.grad_calls = std::stoll(fields[1]);
    r.proj_calls = std::stoll(fields[2]);
    r.value = parse_double_field(fields[3]);
    r.gap_upper = parse_double_field(fields[4]);
    r.dist_sq = parse_double_field(fields[5]);
    r.wall_ms = std::stoll(fields[6]);
    t.rows.push_back(r);
  }
  return t;
}

RunTrace read_trace_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open trace file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_trace_csv(ss.str());
}

RateFit rate_fit(const RunTrace& trace, RateAxis axis, RateValue value,
                 double value_floor) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const TraceRow& r : trace.rows) {
    double x = 0.0;
    switch (axis) {
      case RateAxis::Iter: x = static_cast<double>(r.iter); break;
      case RateAxis::GradCalls: x = static_cast<double>(r.grad_calls); break;
      case RateAxis::ProjCalls: x = static_cast<double>(r.proj_calls); break;
    }
    double y = 0.0;
    switch (value) {
      case RateValue::Value: y = r.value; break;
      case RateValue::GapUpper: y = r.gap_upper; break;
      case RateValue::DistSq: y = r.dist_sq; break;
    }
    if (!std::isfinite(y) || y <= value_floor) continue;
    double ly = std::log(y);
    sx += x;
    sy += ly;
    sxx += x * x;
    sxy += x * ly;
    ++n;
  }
  RateFit fit;
  fit.npoints = n;
  if (n >= 2) {
    double det = n * sxx - sx * sx;
    if (std::abs(det) > 1e-300) {
      fit.slope = (n * sxy - sx * sy) / det;
      fit.intercept = (sy * sxx - sx * sxy) / det;
    }
  }
  return fit;
}

}  // namespace rminmax
