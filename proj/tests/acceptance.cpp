// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance [criterion ...]   (default: all, in gate order 5 6 7 1 3 4 2 8)

#include "poromech/checks.hpp"
#include "poromech/scenarios.hpp"
#include "poromech/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>

using namespace poromech;

namespace {

// pinned tolerances
constexpr double kRateLo = 0.85;
constexpr double kRateHi = 1.15;
constexpr std::size_t kRatePairs = 3;
constexpr double kMeanNewton = 5.0;
constexpr int kMaxNewton = 8;
constexpr double kNewtonTol = 1e-5;
constexpr std::uint64_t kSeed = 20240521;
const std::vector<std::string> kSpatialColumns{"u_H1", "psi_L2", "p_H1", "w1_H1", "w2_H1"};
const std::vector<std::string> kTemporalColumns{"u", "p", "psi", "w1", "w2"};
const std::vector<double> kLockingLambdas{9.9e2, 9.9e5, 9.9e8};

struct Line {
  int id;
  bool passed;
  std::string detail;
};

std::vector<Line> g_lines;

void report(int id, bool passed, const std::string& detail) {
  g_lines.push_back({id, passed, detail});
  std::printf("criterion %d %s: %s\n", id, passed ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

void print_table(const ErrorTable& t) {
  std::printf("  %9s", t.size_label.c_str());
  for (const auto& c : t.columns) std::printf(" %9s", c.c_str());
  std::printf("\n");
  for (const auto& r : t.rows) {
    std::printf("  %9.4g", r.size);
    for (double e : r.errors) std::printf(" %9.3e", e);
    if (!r.failure.empty()) std::printf("  failed: %s", r.failure.c_str());
    std::printf("\n");
    if (!r.rates.empty()) {
      std::printf("  %9s", "rate");
      for (double q : r.rates) std::printf(" %9.3f", q);
      std::printf("\n");
    }
  }
  std::fflush(stdout);
}

/// Checks the rate band over the last kRatePairs pairs for each named column.
bool rates_in_band(const ErrorTable& t, const std::vector<std::string>& names, std::string& detail) {
  bool ok = true;
  std::ostringstream os;
  for (const auto& r : t.rows) {
    if (!r.failure.empty()) {
      ok = false;
      os << "run at " << t.size_label << "=" << r.size << " failed; ";
    }
  }
  for (const auto& n : names) {
    const auto [lo, hi] = t.rate_range(t.column(n), kRatePairs);
    const bool in = lo >= kRateLo && hi <= kRateHi;
    ok = ok && in;
    os << n << fmt(" [%.3f, %.3f]", lo, hi) << (in ? "" : " out") << "; ";
  }
  detail = os.str();
  return ok;
}

SpatialStudySpec spatial_spec(double lambda) {
  SpatialStudySpec s;
  s.params.lambda = lambda;
  s.base_cells = 8;
  s.n_refinements = 5;
  s.dt = 0.01;
  s.t_final = 0.04;
  s.options.newton_tol = kNewtonTol;
  return s;
}

std::optional<ErrorTable> g_default_spatial;

const ErrorTable& default_spatial() {
  if (!g_default_spatial) {
    std::printf("spatial study, lambda = %g\n", ModelParams{}.lambda);
    g_default_spatial = convergence_study_spatial(spatial_spec(ModelParams{}.lambda));
    print_table(*g_default_spatial);
  }
  return *g_default_spatial;
}

void criterion_checks(int id, const std::vector<CheckResult>& results) {
  bool ok = true;
  std::string detail;
  for (const auto& r : results) {
    std::printf("  %s %s: %s\n", r.passed ? "ok  " : "FAIL", r.name.c_str(), r.detail.c_str());
    ok = ok && r.passed;
    if (!r.passed) detail += r.name + "; ";
  }
  report(id, ok, ok ? std::to_string(results.size()) + " checks passed" : "failed: " + detail);
}

void criterion1() {
  std::string detail;
  const bool ok = rates_in_band(default_spatial(), kSpatialColumns, detail);
  report(1, ok, detail);
}

void criterion2() {
  TemporalStudySpec s;
  s.options.newton_tol = kNewtonTol;
  std::printf("temporal study, %dx%d mesh\n", s.cells, s.cells);
  const ErrorTable t = convergence_study_temporal(s);
  print_table(t);
  std::string detail;
  const bool ok = rates_in_band(t, kTemporalColumns, detail);
  report(2, ok, detail);
}

void criterion3() {
  const ErrorTable& t = default_spatial();
  long total = 0;
  int count = 0, worst = 0;
  for (std::size_t i = t.rows.size() >= 3 ? t.rows.size() - 3 : 0; i < t.rows.size(); ++i) {
    for (int k : t.rows[i].newton_iterations) {
      total += k;
      ++count;
      worst = std::max(worst, k);
    }
  }
  const double mean = count ? double(total) / count : 0.0;
  report(3, count > 0 && mean <= kMeanNewton && worst <= kMaxNewton,
         fmt("mean %.3f, max %.0f", mean, worst) + " over " + std::to_string(count) + " steps");
}

void criterion4() {
  bool ok = true;
  std::string detail;
  for (double lambda : kLockingLambdas) {
    std::printf("spatial study, lambda = %g\n", lambda);
    const ErrorTable t = convergence_study_spatial(spatial_spec(lambda));
    print_table(t);
    std::string d;
    const bool in = rates_in_band(t, kSpatialColumns, d);
    ok = ok && in;
    char buf[32];
    std::snprintf(buf, sizeof buf, "lambda=%g: ", lambda);
    detail += buf + d;
  }
  report(4, ok, detail);
}

void criterion8() {
  std::map<double, PatternResult> runs;
  for (double g : {0.0, 0.05}) {
    PatternRunSpec s;
    s.params.gamma = g;
    std::printf("pattern run, gamma = %g\n", g);
    std::fflush(stdout);
    runs[g] = run_pattern(s);
    const PatternResult& r = runs[g];
    const auto& v = r.series.values;
    std::printf("  steps %zu, threshold %.3e, final variation %.3e, min variation %.3e, peak |u| %.3e, min w %.4f%s\n",
                v.size(), r.threshold, v.empty() ? 0.0 : v.back(),
                v.empty() ? 0.0 : *std::min_element(v.begin(), v.end()), r.peak_displacement, r.min_concentration,
                r.failure.empty() ? "" : ("  failed: " + r.failure).c_str());
  }
  const PatternResult& a = runs[0.0];
  const PatternResult& b = runs[0.05];
  const bool settled = a.failure.empty() && a.steady_time && *a.steady_time < 10.0;
  const bool unsettled = b.failure.empty() && !b.steady_time;
  std::string detail = "gamma=0 ";
  detail += a.steady_time ? fmt("steady at t=%.2f", *a.steady_time, 0) : "never steady";
  detail += ", gamma=0.05 ";
  detail += b.steady_time ? fmt("steady at t=%.2f", *b.steady_time, 0) : "never steady";
  report(8, settled && unsettled, detail);
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> order{5, 6, 7, 1, 3, 4, 2, 8};
  if (argc > 1) {
    order.clear();
    for (int i = 1; i < argc; ++i) {
      const int id = std::atoi(argv[i]);
      if (id < 1 || id > 8) {
        std::fprintf(stderr, "usage: %s [criterion 1-8 ...]\n", argv[0]);
        return 2;
      }
      order.push_back(id);
    }
  }
  const auto t0 = std::chrono::steady_clock::now();
  for (int id : order) {
    switch (id) {
      case 1: criterion1(); break;
      case 2: criterion2(); break;
      case 3: criterion3(); break;
      case 4: criterion4(); break;
      case 5: criterion_checks(5, check_forcing_oracle(kSeed)); break;
      case 6: criterion_checks(6, {check_jacobian(kSeed)}); break;
      case 7: criterion_checks(7, check_assembly_properties(kSeed)); break;
      case 8: criterion8(); break;
    }
  }
  std::sort(g_lines.begin(), g_lines.end(), [](const Line& a, const Line& b) { return a.id < b.id; });
  std::printf("\nsummary (%.0f s)\n",
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  int failed = 0;
  for (const auto& l : g_lines) {
    std::printf("criterion %d %s\n", l.id, l.passed ? "PASS" : "FAIL");
    failed += l.passed ? 0 : 1;
  }
  return failed ? 1 : 0;
}
