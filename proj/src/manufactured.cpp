#include "poromech/manufactured.hpp"

namespace poromech {

Eigen::Matrix2d exact_total_stress(const ExactSolution<double>& exact, const ModelParams& params,
                                   const Vec2& x, double t) {
  const Mat2 g = exact.grad_u(x, t);
  const double r = r_field(exact.w1.value(x, t), exact.w2.value(x, t));
  return params.mu * (g + g.transpose()) - exact.psi.value(x, t) * Mat2::Identity() +
         active_stress(r, params);
}

Sources synthesize_sources(const ExactSolution<double>& exact, const ModelParams& params) {
  const ModelParams p = params;
  Sources s;
  s.b = [exact, p](const Vec2& x, double t) {
    const Mat2 h1 = exact.u1.hess(x, t), h2 = exact.u2.hess(x, t);
    // div(2 eps(u)) = lap u + grad div u
    const Vec2 lap(h1.trace(), h2.trace());
    const Vec2 grad_div(h1(0, 0) + h2(1, 0), h1(0, 1) + h2(1, 1));
    const Vec2 grad_r = exact.w1.grad(x, t) + exact.w2.grad(x, t);
    const Vec2 force = -p.mu * (lap + grad_div) + exact.psi.grad(x, t) +
                       p.tau * p.k_dir.dot(grad_r) * p.k_dir;
    return Vec2(force / p.rho);
  };
  s.ell = [exact, p](const Vec2& x, double t) {
    return p.storage() * exact.p.dt(x, t) - p.alpha / p.lambda * exact.psi.dt(x, t) -
           (p.kappa.cwiseProduct(exact.p.hess(x, t))).sum() / p.eta;
  };
  s.S_psi = [exact, p](const Vec2& x, double t) {
    return -exact.div_u(x, t) + (p.alpha * exact.p.value(x, t) - exact.psi.value(x, t)) / p.lambda;
  };
  s.S1 = [exact, p](const Vec2& x, double t) {
    const double w1 = exact.w1.value(x, t), w2 = exact.w2.value(x, t);
    return exact.w1.dt(x, t) + exact.u_dt(x, t).dot(exact.w1.grad(x, t)) -
           (p.D1.cwiseProduct(exact.w1.hess(x, t))).sum() - reaction_f(w1, w2, exact.div_u_dt(x, t), p);
  };
  s.S2 = [exact, p](const Vec2& x, double t) {
    const double w1 = exact.w1.value(x, t), w2 = exact.w2.value(x, t);
    return exact.w2.dt(x, t) + exact.u_dt(x, t).dot(exact.w2.grad(x, t)) -
           (p.D2.cwiseProduct(exact.w2.hess(x, t))).sum() - reaction_g(w1, w2, exact.div_u_dt(x, t), p);
  };
  return s;
}

BoundaryData boundary_data_from_exact(const ExactSolution<double>& exact, const ModelParams& params) {
  const ModelParams p = params;
  BoundaryData b;
  b.displacement = [exact](const Vec2& x, double t) { return exact.u(x, t); };
  b.pressure = [exact](const Vec2& x, double t) { return exact.p.value(x, t); };
  b.traction = [exact, p](const Vec2& x, double t, const Vec2& n) {
    return Vec2(exact_total_stress(exact, p, x, t) * n);
  };
  b.fluid_flux = [exact, p](const Vec2& x, double t, const Vec2& n) {
    return (p.kappa * exact.p.grad(x, t)).dot(n) / p.eta;
  };
  b.species_flux1 = [exact, p](const Vec2& x, double t, const Vec2& n) {
    return (p.D1 * exact.w1.grad(x, t)).dot(n);
  };
  b.species_flux2 = [exact, p](const Vec2& x, double t, const Vec2& n) {
    return (p.D2 * exact.w2.grad(x, t)).dot(n);
  };
  return b;
}

}  // namespace poromech
