#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace rminmax {

// One logged solver iteration. dist_sq is NaN when no reference point is
// known; gap_upper is +inf when no certified bound is available at that
// step. grad_norm and step_dist are in-memory diagnostics and not part of
// the CSV schema.
struct TraceRow {
  std::int64_t iter = 0;
  std::int64_t grad_calls = 0;
  std::int64_t proj_calls = 0;
  double value = 0.0;
  double gap_upper = std::numeric_limits<double>::infinity();
  double dist_sq = std::numeric_limits<double>::quiet_NaN();
  std::int64_t wall_ms = 0;
  double grad_norm = std::numeric_limits<double>::quiet_NaN();
  double step_dist = std::numeric_limits<double>::quiet_NaN();
};

struct RunTrace {
  std::vector<TraceRow> rows;

  void add(TraceRow r) { rows.push_back(std::move(r)); }
  bool empty() const { return rows.empty(); }
  const TraceRow& back() const { return rows.back(); }
};

inline constexpr const char* kCsvHeader =
    "iter,grad_calls,proj_calls,value,gap_upper,dist_sq,wall_ms";

// Serialization uses %.17g so values round-trip exactly; absent dist_sq is
// an empty field and an unavailable gap bound is "inf".
std::string trace_to_csv(const RunTrace& trace);
void write_trace_csv(const RunTrace& trace, const std::string& path);
RunTrace parse_trace_csv(const std::string& csv_text);
RunTrace read_trace_csv(const std::string& path);

// Optional wall-clock source for trace rows. Solvers write 0 when no clock
// is supplied, which keeps seeded reruns byte-identical.
class WallClock {
public:
  WallClock();
  std::int64_t elapsed_ms() const;

private:
  std::int64_t start_ns_;
};

inline std::int64_t clock_ms(const WallClock* c) {
  return c ? c->elapsed_ms() : 0;
}

// Least-squares slope of log(y) against the chosen x column, over rows with
// finite positive y. Used for convergence-rate regression checks.
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  int npoints = 0;
};

enum class RateAxis { Iter, GradCalls, ProjCalls };
enum class RateValue { Value, GapUpper, DistSq };

RateFit rate_fit(const RunTrace& trace, RateAxis axis, RateValue value,
                 double value_floor = 0.0);

}  // namespace rminmax
