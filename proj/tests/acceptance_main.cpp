// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. argv[1] names the shipped config directory (empty to skip those
// runs). Criteria reuse the library's property checks at their full scales.
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "rminmax/runner.hpp"

using namespace rminmax;

namespace {

struct Criterion {
  int id = 0;
  std::string label;
  std::vector<CheckItem> parts;
  bool extra_fail = false;
  std::string extra_note;

  bool pass() const {
    if (extra_fail) return false;
    for (const auto& it : parts) {
      if (!it.pass) return false;
    }
    return true;
  }
};

void print_criterion(const Criterion& c) {
  double worst = std::numeric_limits<double>::infinity();
  std::string failing;
  for (const auto& it : c.parts) {
    if (it.slack < worst) worst = it.slack;
    if (!it.pass) {
      if (!failing.empty()) failing += ", ";
      failing += it.name + ": " + it.detail;
    }
  }
  std::printf("%s criterion %d: %s (worst slack %.3g)%s%s\n",
              c.pass() ? "PASS" : "FAIL", c.id, c.label.c_str(), worst,
              failing.empty() ? "" : " - ", failing.c_str());
  if (!c.extra_note.empty()) {
    std::printf("     note: %s\n", c.extra_note.c_str());
  }
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  std::string config_dir = argc > 1 ? argv[1] : "configs";
  std::vector<Criterion> cs;

  {
    Criterion c;
    c.id = 1;
    c.label = "geometry primitives: roundtrips, constants, cosine laws";
    auto start = std::chrono::steady_clock::now();
    c.parts.push_back(check_zeta_delta_values());
    c.parts.push_back(check_roundtrips(11));
    c.parts.push_back(check_cosine_laws(10000, 12));
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    if (secs > 30.0) {
      c.extra_fail = true;
      c.extra_note = "geometry block took " + std::to_string(secs) +
                     "s, limit 30s";
    }
    cs.push_back(std::move(c));
  }
  {
    Criterion c;
    c.id = 2;
    c.label = "projected gradient descent: per-step contraction and budget";
    c.parts.push_back(check_prgd_contraction(20, 20));
    cs.push_back(std::move(c));
  }
  {
    Criterion c;
    c.id = 3;
    c.label = "accelerated proximal point: gap, dual norms, kappa scaling";
    c.parts.push_back(check_riemacon_budget_and_duals(22));
    c.parts.push_back(check_riemacon_kappa_slope(23));
    cs.push_back(std::move(c));
  }
  {
    Criterion c;
    c.id = 4;
    c.label = "corrected extragradient: confinement and contraction";
    c.parts.push_back(check_rceg_stay_in_ball(20, 25));
    cs.push_back(std::move(c));
  }
  {
    Criterion c;
    c.id = 5;
    c.label = "alternating best response: sweep contraction and decoupling";
    c.parts.push_back(check_rabr_lyapunov(26));
    c.parts.push_back(check_rabr_decoupling(27));
    cs.push_back(std::move(c));
  }
  {
    Criterion c;
    c.id = 6;
    c.label = "shipped benchmark configs certify their targets";
    c.parts.push_back(check_shipped_configs(config_dir));
    cs.push_back(std::move(c));
  }
  {
    Criterion c;
    c.id = 7;
    c.label = "gap toolkit inequalities on sampled instances";
    c.parts.push_back(check_gap_toolkit(1000, 28));
    cs.push_back(std::move(c));
  }
  {
    Criterion c;
    c.id = 8;
    c.label = "minimax interchange on convex-concave grids";
    c.parts.push_back(check_sion_grids(10, 30));
    cs.push_back(std::move(c));
  }
  {
    Criterion c;
    c.id = 9;
    c.label = "best-response maps are Lipschitz with the stated constant";
    c.parts.push_back(check_best_response_lipschitz(500, 31));
    cs.push_back(std::move(c));
  }
  {
    Criterion c;
    c.id = 10;
    c.label = "seeded runs are byte-identical";
    c.parts.push_back(check_determinism());
    cs.push_back(std::move(c));
  }

  int failures = 0;
  for (const auto& c : cs) {
    print_criterion(c);
    if (!c.pass()) ++failures;
  }
  std::printf("acceptance: %d/%zu criteria passed\n",
              static_cast<int>(cs.size()) - failures, cs.size());
  return failures == 0 ? 0 : 1;
}
