#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include "rminmax/config.hpp"
#include "rminmax/plot.hpp"
#include "rminmax/runner.hpp"
#include "rminmax/trace.hpp"

using namespace rminmax;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

struct TempFile {
  std::string path;
  explicit TempFile(std::string p) : path(std::move(p)) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("config parsing handles comments, types, and defaults") {
  Config cfg = Config::parse_string(
      "# experiment\n"
      "problem.name = quadratic\n"
      "problem.dim = 3\n"
      "\n"
      "solver.epsilon = 1e-8\n"
      "solver.cert_stop = true\n"
      "problem.coeffs = 1, 2.5, 10\n",
      "inline");
  CHECK(cfg.origin() == "inline");
  CHECK(cfg.has("problem.name"));
  CHECK_FALSE(cfg.has("problem.seed"));
  CHECK(cfg.get_string("problem.name") == "quadratic");
  CHECK(cfg.get_int("problem.dim") == 3);
  CHECK(cfg.get_double("solver.epsilon") == doctest::Approx(1e-8));
  CHECK(cfg.get_bool("solver.cert_stop"));
  auto v = cfg.get_vector("problem.coeffs");
  REQUIRE(v.size() == 3);
  CHECK(v[1] == doctest::Approx(2.5));
  CHECK(cfg.get_int("problem.seed", 7) == 7);
  CHECK(cfg.get_string("solver.name", "prgd") == "prgd");
  CHECK(cfg.get_bool("output.timing", false) == false);
}

TEST_CASE("config errors name the offending key") {
  Config cfg = Config::parse_string("solver.epsilon = fast\n");
  try {
    cfg.get_double("solver.epsilon");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("solver.epsilon") != std::string::npos);
  }
  try {
    cfg.get_double("solver.lambda");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("solver.lambda") != std::string::npos);
  }
  CHECK_THROWS_AS(Config::parse_string("a.b = 1\na.b = 2\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse_string("just a line without equals\n"),
                  ConfigError);
  CHECK_THROWS_AS(cfg.get_bool("solver.epsilon"), ConfigError);
  CHECK_THROWS_AS(Config::parse_file("/nonexistent/path.cfg"), ConfigError);
}

TEST_CASE("config tracks prefix order and unconsumed keys") {
  Config cfg = Config::parse_string(
      "problem.name = quadratic\n"
      "solver.name = prgd\n"
      "problem.dim = 2\n"
      "problem.seed = 5\n");
  auto keys = cfg.keys_with_prefix("problem.");
  REQUIRE(keys.size() == 3);
  CHECK(keys[0] == "problem.name");
  CHECK(keys[1] == "problem.dim");
  CHECK(keys[2] == "problem.seed");
  (void)cfg.get_string("problem.name");
  (void)cfg.get_int("problem.dim");
  auto leftovers = cfg.unused_keys();
  REQUIRE(leftovers.size() == 2);
  CHECK(leftovers[0] == "solver.name");
  CHECK(leftovers[1] == "problem.seed");
}

TEST_CASE("points round-trip through their CSV form") {
  TempFile tmp("points_roundtrip_test.csv");
  std::vector<Vec> pts;
  Vec a(3), b(3);
  a << 1.0, -2.5, 3.14159;
  b << 1e-17, 0.0, -7.25;
  pts.push_back(a);
  pts.push_back(b);
  write_points_csv(pts, tmp.path);
  auto back = read_points_csv(tmp.path);
  REQUIRE(back.size() == 2);
  CHECK((back[0] - a).norm() == 0.0);
  CHECK((back[1] - b).norm() == 0.0);
}

TEST_CASE("trace serialization is exact and stable") {
  RunTrace t;
  TraceRow r0;
  r0.iter = 0;
  r0.grad_calls = 1;
  r0.proj_calls = 1;
  r0.value = 1.0 / 3.0;
  r0.gap_upper = std::numeric_limits<double>::infinity();
  r0.dist_sq = std::numeric_limits<double>::quiet_NaN();
  TraceRow r1;
  r1.iter = 1;
  r1.grad_calls = 3;
  r1.proj_calls = 2;
  r1.value = -1.2345678901234567e-8;
  r1.gap_upper = 0.125;
  r1.dist_sq = 2.0e-17;
  r1.wall_ms = 0;
  t.add(r0);
  t.add(r1);
  std::string csv = trace_to_csv(t);
  CHECK(csv.rfind(kCsvHeader, 0) == 0);
  // Unknown distance serializes as an empty field, unbounded gap as "inf".
  CHECK(csv.find(",inf,") != std::string::npos);
  RunTrace back = parse_trace_csv(csv);
  REQUIRE(back.rows.size() == 2);
  CHECK(std::isnan(back.rows[0].dist_sq));
  CHECK(std::isinf(back.rows[0].gap_upper));
  CHECK(back.rows[1].value == r1.value);
  CHECK(back.rows[1].dist_sq == r1.dist_sq);
  CHECK(trace_to_csv(back) == csv);

  TempFile tmp("trace_roundtrip_test.csv");
  write_trace_csv(t, tmp.path);
  RunTrace file_back = read_trace_csv(tmp.path);
  CHECK(trace_to_csv(file_back) == csv);
}

TEST_CASE("rate fit recovers a known geometric decay") {
  RunTrace t;
  for (int i = 0; i <= 20; ++i) {
    TraceRow r;
    r.iter = i;
    r.grad_calls = 2 * i;
    r.value = std::pow(0.5, i);
    t.add(r);
  }
  RateFit fit = rate_fit(t, RateAxis::Iter, RateValue::Value);
  CHECK(fit.npoints == 21);
  CHECK(fit.slope == doctest::Approx(std::log(0.5)).epsilon(1e-10));
  RateFit per_call = rate_fit(t, RateAxis::GradCalls, RateValue::Value);
  CHECK(per_call.slope == doctest::Approx(0.5 * std::log(0.5)).epsilon(1e-10));
  // Nonpositive values are excluded rather than clamped.
  t.rows[3].value = 0.0;
  CHECK(rate_fit(t, RateAxis::Iter, RateValue::Value).npoints == 20);
}

TEST_CASE("seeded experiments rerun byte-identically") {
  const char* text =
      "problem.name = quadratic\n"
      "problem.dim = 3\n"
      "problem.kappa = 30\n"
      "problem.seed = 5\n"
      "solver.name = prgd\n"
      "solver.epsilon = 1e-10\n";
  ExperimentResult a = run_experiment(Config::parse_string(text));
  ExperimentResult b = run_experiment(Config::parse_string(text));
  CHECK(trace_to_csv(a.trace) == trace_to_csv(b.trace));
  CHECK(a.summary == b.summary);
  CHECK(a.certificate.to_json() == b.certificate.to_json());
  // Without output.timing every recorded wall time is zero.
  for (const auto& r : a.trace.rows) CHECK(r.wall_ms == 0);
}

TEST_CASE("experiment configs are validated before any solve") {
  auto run = [](const std::string& text) {
    return run_experiment(Config::parse_string(text));
  };
  CHECK_THROWS_AS(run("problem.name = mystery\n"
                      "solver.name = prgd\n"
                      "solver.epsilon = 1e-6\n"),
                  ConfigError);
  CHECK_THROWS_AS(run("problem.name = quadratic\n"
                      "solver.name = mystery\n"
                      "solver.epsilon = 1e-6\n"),
                  ConfigError);
  try {
    run("problem.name = quadratic\nsolver.name = prgd\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("solver.epsilon") != std::string::npos);
  }
  // A minimization instance cannot feed a saddle solver, and vice versa.
  CHECK_THROWS_AS(run("problem.name = quadratic\n"
                      "solver.name = rceg\n"
                      "solver.T = 5\n"),
                  ConfigError);
  CHECK_THROWS_AS(run("problem.name = bilinear\n"
                      "solver.name = prgd\n"
                      "solver.epsilon = 1e-6\n"),
                  ConfigError);
  CHECK_THROWS_AS(run("problem.name = quadratic\n"
                      "solver.name = prgd\n"
                      "solver.epsilon = 0\n"),
                  ConfigError);
}

TEST_CASE("experiment outputs land in the requested files") {
  TempFile csv("exp_out_test.csv");
  TempFile svg("exp_out_test.svg");
  TempFile fix("exp_out_test.fixture");
  std::string text =
      "problem.name = quadratic\n"
      "problem.dim = 2\n"
      "problem.seed = 3\n"
      "solver.name = prgd\n"
      "solver.epsilon = 1e-8\n"
      "output.csv = " + csv.path + "\n" +
      "output.plot = " + svg.path + "\n" +
      "output.fixture = " + fix.path + "\n";
  ExperimentResult res = run_experiment(Config::parse_string(text));
  RunTrace back = read_trace_csv(csv.path);
  CHECK(back.rows.size() == res.trace.rows.size());
  std::string svg_text = slurp(svg.path);
  CHECK(svg_text.find("<svg") != std::string::npos);
  std::string fixture = slurp(fix.path);
  CHECK(fixture.find("problem = quadratic\n") != std::string::npos);
  CHECK(fixture.find("final_value = ") != std::string::npos);
  CHECK(fixture.find("certificate = {") != std::string::npos);
  CHECK(res.summary.find("certificate:") != std::string::npos);
}

TEST_CASE("a zero iteration budget still records the starting point") {
  ExperimentResult res = run_experiment(Config::parse_string(
      "problem.name = quadratic\n"
      "problem.dim = 2\n"
      "solver.name = prgd\n"
      "solver.T = 0\n"));
  REQUIRE(res.trace.rows.size() == 1);
  CHECK(res.trace.rows[0].iter == 0);
  CHECK(std::isfinite(res.certificate.gap));
}

TEST_CASE("convergence plots render each finite positive sample") {
  RunTrace t;
  for (int i = 0; i <= 10; ++i) {
    TraceRow r;
    r.iter = i;
    r.gap_upper = std::pow(0.25, i);
    t.add(r);
  }
  PlotSeries s;
  s.trace = &t;
  s.label = "decay";
  PlotOptions po;
  po.title = "test plot";
  std::string svg = render_convergence_svg({s}, po);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("decay") != std::string::npos);
  CHECK(svg.find("test plot") != std::string::npos);
}
