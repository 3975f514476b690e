#include "poromech/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace poromech {

ModelParams PatternRunSpec::default_pattern_params() {
  ModelParams p;
  p.tau = 100.0;
  p.gamma = 0.0;
  return p;
}

Eigen::Vector2d kinetic_steady_state(const ModelParams& p) {
  const double s = p.beta2 + p.beta3;
  if (!(s > 0.0)) throw InvalidArgument("kinetic_steady_state: beta2 + beta3 must be positive");
  return {s, p.beta3 / (s * s)};
}

void validate(const PatternRunSpec& spec) {
  validate(spec.params);
  const auto require = [](bool ok, const char* field, const char* what) {
    if (!ok) throw InvalidArgument(std::string("invalid parameter '") + field + "': " + what);
  };
  require(spec.width > 0.0 && spec.height > 0.0, "width/height", "must be positive");
  require(spec.nx >= 1 && spec.ny >= 1, "nx/ny", "must be at least 1");
  require(spec.dt > 0.0, "dt", "must be positive");
  require(spec.t_final >= 1.0, "t_final", "must be at least 1");
  require(spec.t_final >= spec.dt, "t_final", "must be at least dt");
  require(spec.amplitude.allFinite(), "amplitude", "must be finite");
  require(std::isfinite(spec.omega), "omega", "must be finite");
  require(spec.perturbation >= 0.0 && spec.perturbation < 1.0, "perturbation", "must lie in [0, 1)");
  require(spec.threshold_factor > 0.0, "threshold_factor", "must be positive");
  require(spec.persistence >= 1, "persistence", "must be at least 1");
}

Mesh pattern_mesh(const PatternRunSpec& spec) {
  return build_rect_mesh(0.0, 0.0, spec.width, spec.height, spec.nx, spec.ny,
                         {Side::Left, Side::Bottom, Side::Top});
}

Problem pattern_problem(const PatternRunSpec& spec) {
  Problem pb;
  pb.params = spec.params;
  const Vec2 a = spec.amplitude;
  const double omega = spec.omega;
  if (!a.isZero()) {
    pb.bdata.traction = [a, omega](const Vec2&, double t, const Vec2&) { return Vec2(std::sin(omega * t) * a); };
  }
  return pb;
}

State pattern_initial_state(const Discretization& disc, const PatternRunSpec& spec) {
  const Eigen::Vector2d w = kinetic_steady_state(spec.params);
  State s = initial_state(disc, {}, {});
  std::mt19937_64 rng(spec.seed);
  // 53 random bits mapped to [-1, 1), independent of the library's distributions
  const auto uniform = [&rng] { return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0; };
  for (int v = 0; v < disc.mesh().num_vertices(); ++v) {
    const double e1 = uniform();
    const double e2 = uniform();
    s.w1[v] = w(0) * (1.0 + spec.perturbation * e1);
    s.w2[v] = w(1) * (1.0 + spec.perturbation * e2);
  }
  return s;
}

double p1_l2_norm(const Discretization& disc, const Vector& v) {
  if (v.size() != disc.mesh().num_vertices()) throw InvalidArgument("p1_l2_norm: size mismatch");
  double sum = 0.0;
  for (int e = 0; e < disc.num_elements(); ++e) {
    const auto& t = disc.element(e).vertices;
    const double a = v[t[0]], b = v[t[1]], c = v[t[2]];
    // element mass matrix area/12 * (1 + delta_ij)
    sum += disc.element(e).area / 12.0 * (2.0 * (a * a + b * b + c * c) + 2.0 * (a * b + b * c + c * a));
  }
  return std::sqrt(std::max(sum, 0.0));
}

std::optional<double> steady_state_time(const VariationSeries& series, double threshold, int persistence) {
  if (!(threshold > 0.0)) throw InvalidArgument("steady_state_time: threshold must be positive");
  if (persistence < 1) throw InvalidArgument("steady_state_time: persistence must be at least 1");
  if (series.times.size() != series.values.size()) throw InvalidArgument("steady_state_time: size mismatch");
  int run = 0;
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    run = series.values[i] < threshold ? run + 1 : 0;
    if (run >= persistence) return series.times[i];
  }
  return std::nullopt;
}

PatternResult run_pattern(const PatternRunSpec& spec) {
  validate(spec);
  const Discretization disc(pattern_mesh(spec));
  const Problem problem = pattern_problem(spec);
  const State s0 = pattern_initial_state(disc, spec);

  PatternResult res;
  res.min_concentration = std::min(s0.w1.minCoeff(), s0.w2.minCoeff());
  const long steps = std::lround(spec.t_final / spec.dt);
  const long period_steps = spec.omega != 0.0 ? std::lround(2.0 * std::numbers::pi / spec.omega / spec.dt) : 0;
  Vector u_period_back;
  std::vector<double> pending(spec.snapshot_times);
  std::sort(pending.begin(), pending.end());
  std::size_t next_snapshot = 0;

  State prev = s0;
  long n = 0;
  const auto observer = [&](const State& s, const StepReport& rep) {
    ++n;
    const double v = p1_l2_norm(disc, s.w1 - prev.w1) / spec.dt + p1_l2_norm(disc, s.w2 - prev.w2) / spec.dt;
    res.series.times.push_back(s.t);
    res.series.values.push_back(v);
    res.newton_iterations.push_back(rep.newton_iterations);
    res.min_concentration = std::min({res.min_concentration, s.w1.minCoeff(), s.w2.minCoeff()});
    for (int i = 0; i < disc.mesh().num_vertices(); ++i) {
      res.peak_displacement = std::max(res.peak_displacement, s.u.segment<2>(2 * i).norm());
    }
    if (period_steps > 0 && n == steps - period_steps) u_period_back = s.u;
    while (next_snapshot < pending.size() && s.t >= pending[next_snapshot] - 0.5 * spec.dt) {
      res.snapshots.push_back(s);
      ++next_snapshot;
    }
    prev = s;
  };

  try {
    const Trajectory tr = run_transient(disc, problem, s0, spec.dt, spec.t_final, observer, spec.options);
    const double un = tr.final_state.u.norm();
    res.periodicity_defect = u_period_back.size() > 0 && un > 0.0
                                 ? (tr.final_state.u - u_period_back).norm() / un
                                 : std::numeric_limits<double>::quiet_NaN();
  } catch (const std::runtime_error& err) {
    res.failure = err.what();
    res.periodicity_defect = std::numeric_limits<double>::quiet_NaN();
  }
  if (!res.series.values.empty() && res.series.values.front() > 0.0) {
    res.threshold = spec.threshold_factor * res.series.values.front();
    res.steady_time = steady_state_time(res.series, res.threshold, spec.persistence);
  }
  return res;
}

}  // namespace poromech
