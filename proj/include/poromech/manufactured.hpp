#pragma once

#include "poromech/assembly.hpp"
#include "poromech/errors.hpp"
#include "poromech/physics.hpp"

#include <Eigen/Core>

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace poromech {

template <typename S>
using Vec2T = Eigen::Matrix<S, 2, 1>;
template <typename S>
using Mat2T = Eigen::Matrix<S, 2, 2>;

/// A scalar field of (x, t) together with the derivatives the strong form needs.
template <typename S>
struct ScalarClosures {
  std::function<S(const Vec2T<S>&, S)> value;
  std::function<S(const Vec2T<S>&, S)> dt;
  std::function<Vec2T<S>(const Vec2T<S>&, S)> grad;
  std::function<Vec2T<S>(const Vec2T<S>&, S)> grad_dt;
  std::function<Mat2T<S>(const Vec2T<S>&, S)> hess;
};

/// Closed-form fields of a manufactured solution. Displacement is given
/// componentwise.
template <typename S>
struct ExactSolution {
  ScalarClosures<S> u1, u2, p, psi, w1, w2;

  Vec2T<S> u(const Vec2T<S>& x, S t) const { return {u1.value(x, t), u2.value(x, t)}; }
  Vec2T<S> u_dt(const Vec2T<S>& x, S t) const { return {u1.dt(x, t), u2.dt(x, t)}; }
  /// (a, b) = d u_a / d x_b
  Mat2T<S> grad_u(const Vec2T<S>& x, S t) const {
    Mat2T<S> g;
    g.row(0) = u1.grad(x, t).transpose();
    g.row(1) = u2.grad(x, t).transpose();
    return g;
  }
  S div_u(const Vec2T<S>& x, S t) const { return grad_u(x, t).trace(); }
  S div_u_dt(const Vec2T<S>& x, S t) const { return u1.grad_dt(x, t)(0) + u2.grad_dt(x, t)(1); }
};

namespace detail {

/// T(t) * X(x) with everything hand-differentiated.
template <typename S>
struct SeparableTerm {
  std::function<S(S)> time, time_dt;
  std::function<S(const Vec2T<S>&)> space;
  std::function<Vec2T<S>(const Vec2T<S>&)> grad;
  std::function<Mat2T<S>(const Vec2T<S>&)> hess;
};

template <typename S>
ScalarClosures<S> sum_of(std::vector<SeparableTerm<S>> terms) {
  ScalarClosures<S> c;
  c.value = [terms](const Vec2T<S>& x, S t) {
    S v(0);
    for (const auto& s : terms) v += s.time(t) * s.space(x);
    return v;
  };
  c.dt = [terms](const Vec2T<S>& x, S t) {
    S v(0);
    for (const auto& s : terms) v += s.time_dt(t) * s.space(x);
    return v;
  };
  c.grad = [terms](const Vec2T<S>& x, S t) {
    Vec2T<S> v = Vec2T<S>::Zero();
    for (const auto& s : terms) v += s.time(t) * s.grad(x);
    return v;
  };
  c.grad_dt = [terms](const Vec2T<S>& x, S t) {
    Vec2T<S> v = Vec2T<S>::Zero();
    for (const auto& s : terms) v += s.time_dt(t) * s.grad(x);
    return v;
  };
  c.hess = [terms](const Vec2T<S>& x, S t) {
    Mat2T<S> v = Mat2T<S>::Zero();
    for (const auto& s : terms) v += s.time(t) * s.hess(x);
    return v;
  };
  return c;
}

template <typename S>
Mat2T<S> mat(S a, S b, S c, S d) {
  Mat2T<S> m;
  m << a, b, c, d;
  return m;
}

}  // namespace detail

/// u = u_inf t^2/2 (sin(pi x)cos(pi y) + x^2/lambda, -cos(pi x)sin(pi y) + y^2/lambda),
/// p = t(x^3 - y^4), psi = p - lambda div u,
/// w1 = t(exp(x) + cos(pi x)cos(pi y)), w2 = t(exp(-y) + sin(pi x)sin(pi y)).
template <typename S>
ExactSolution<S> mms_spatial_family(const ModelParams& params) {
  if (!(params.lambda > 0.0)) throw InvalidArgument("mms_spatial_family: lambda must be positive");
  using detail::mat;
  using V = Vec2T<S>;
  using M = Mat2T<S>;
  const S pi = std::numbers::pi_v<S>;
  const S lam = S(params.lambda);
  const S uinf = S(params.u_inf);
  const auto half_t2 = [uinf](S t) { return uinf * t * t / S(2); };
  const auto uinf_t = [uinf](S t) { return uinf * t; };
  const auto lin = [](S t) { return t; };
  const auto one = [](S) { return S(1); };
  const auto sq = [uinf](S t) { return -uinf * t * t; };
  const auto dsq = [uinf](S t) { return S(-2) * uinf * t; };

  ExactSolution<S> e;
  e.u1 = detail::sum_of<S>({{half_t2, uinf_t,
                             [=](const V& x) {
                               using std::cos, std::sin;
                               return sin(pi * x(0)) * cos(pi * x(1)) + x(0) * x(0) / lam;
                             },
                             [=](const V& x) {
                               using std::cos, std::sin;
                               return V(pi * cos(pi * x(0)) * cos(pi * x(1)) + S(2) * x(0) / lam,
                                        -pi * sin(pi * x(0)) * sin(pi * x(1)));
                             },
                             [=](const V& x) {
                               using std::cos, std::sin;
                               const S sc = sin(pi * x(0)) * cos(pi * x(1));
                               const S cs = cos(pi * x(0)) * sin(pi * x(1));
                               return mat<S>(-pi * pi * sc + S(2) / lam, -pi * pi * cs, -pi * pi * cs,
                                             -pi * pi * sc);
                             }}});
  e.u2 = detail::sum_of<S>({{half_t2, uinf_t,
                             [=](const V& x) {
                               using std::cos, std::sin;
                               return -cos(pi * x(0)) * sin(pi * x(1)) + x(1) * x(1) / lam;
                             },
                             [=](const V& x) {
                               using std::cos, std::sin;
                               return V(pi * sin(pi * x(0)) * sin(pi * x(1)),
                                        -pi * cos(pi * x(0)) * cos(pi * x(1)) + S(2) * x(1) / lam);
                             },
                             [=](const V& x) {
                               using std::cos, std::sin;
                               const S sc = sin(pi * x(0)) * cos(pi * x(1));
                               const S cs = cos(pi * x(0)) * sin(pi * x(1));
                               return mat<S>(pi * pi * cs, pi * pi * sc, pi * pi * sc,
                                             pi * pi * cs + S(2) / lam);
                             }}});
  const detail::SeparableTerm<S> p_term{
      lin, one, [](const V& x) { return x(0) * x(0) * x(0) - x(1) * x(1) * x(1) * x(1); },
      [](const V& x) { return V(S(3) * x(0) * x(0), S(-4) * x(1) * x(1) * x(1)); },
      [](const V& x) { return mat<S>(S(6) * x(0), S(0), S(0), S(-12) * x(1) * x(1)); }};
  e.p = detail::sum_of<S>({p_term});
  e.psi = detail::sum_of<S>({p_term,
                             {sq, dsq, [](const V& x) { return x(0) + x(1); },
                              [](const V&) { return V(S(1), S(1)); }, [](const V&) { return M::Zero().eval(); }}});
  e.w1 = detail::sum_of<S>({{lin, one,
                             [=](const V& x) {
                               using std::cos, std::exp;
                               return exp(x(0)) + cos(pi * x(0)) * cos(pi * x(1));
                             },
                             [=](const V& x) {
                               using std::cos, std::exp, std::sin;
                               return V(exp(x(0)) - pi * sin(pi * x(0)) * cos(pi * x(1)),
                                        -pi * cos(pi * x(0)) * sin(pi * x(1)));
                             },
                             [=](const V& x) {
                               using std::cos, std::exp, std::sin;
                               const S cc = cos(pi * x(0)) * cos(pi * x(1));
                               const S ss = sin(pi * x(0)) * sin(pi * x(1));
                               return mat<S>(exp(x(0)) - pi * pi * cc, pi * pi * ss, pi * pi * ss, -pi * pi * cc);
                             }}});
  e.w2 = detail::sum_of<S>({{lin, one,
                             [=](const V& x) {
                               using std::exp, std::sin;
                               return exp(-x(1)) + sin(pi * x(0)) * sin(pi * x(1));
                             },
                             [=](const V& x) {
                               using std::cos, std::exp, std::sin;
                               return V(pi * cos(pi * x(0)) * sin(pi * x(1)),
                                        -exp(-x(1)) + pi * sin(pi * x(0)) * cos(pi * x(1)));
                             },
                             [=](const V& x) {
                               using std::cos, std::exp, std::sin;
                               const S cc = cos(pi * x(0)) * cos(pi * x(1));
                               const S ss = sin(pi * x(0)) * sin(pi * x(1));
                               return mat<S>(-pi * pi * ss, pi * pi * cc, pi * pi * cc, exp(-x(1)) - pi * pi * ss);
                             }}});
  return e;
}

/// u = u_inf sin t (x^2/(2 lambda) + y^2, x^2 + y^2/(2 lambda)), p = sin t (x^2 + x y),
/// psi = alpha p - lambda div u, w1 = sin t (x^2 - y^2), w2 = sin t (x^2 + y^2).
template <typename S>
ExactSolution<S> mms_temporal_family(const ModelParams& params) {
  if (!(params.lambda > 0.0)) throw InvalidArgument("mms_temporal_family: lambda must be positive");
  using detail::mat;
  using V = Vec2T<S>;
  const S lam = S(params.lambda);
  const S uinf = S(params.u_inf);
  const S alpha = S(params.alpha);
  const auto s_u = [uinf](S t) { using std::sin; return uinf * sin(t); };
  const auto c_u = [uinf](S t) { using std::cos; return uinf * cos(t); };
  const auto s = [](S t) { using std::sin; return sin(t); };
  const auto c = [](S t) { using std::cos; return cos(t); };

  ExactSolution<S> e;
  e.u1 = detail::sum_of<S>({{s_u, c_u, [=](const V& x) { return x(0) * x(0) / (S(2) * lam) + x(1) * x(1); },
                             [=](const V& x) { return V(x(0) / lam, S(2) * x(1)); },
                             [=](const V&) { return mat<S>(S(1) / lam, S(0), S(0), S(2)); }}});
  e.u2 = detail::sum_of<S>({{s_u, c_u, [=](const V& x) { return x(0) * x(0) + x(1) * x(1) / (S(2) * lam); },
                             [=](const V& x) { return V(S(2) * x(0), x(1) / lam); },
                             [=](const V&) { return mat<S>(S(2), S(0), S(0), S(1) / lam); }}});
  e.p = detail::sum_of<S>({{s, c, [](const V& x) { return x(0) * x(0) + x(0) * x(1); },
                            [](const V& x) { return V(S(2) * x(0) + x(1), x(0)); },
                            [](const V&) { return mat<S>(S(2), S(1), S(1), S(0)); }}});
  // lambda div u = u_inf sin t (x + y)
  e.psi = detail::sum_of<S>({{s, c,
                              [=](const V& x) { return alpha * (x(0) * x(0) + x(0) * x(1)) - uinf * (x(0) + x(1)); },
                              [=](const V& x) { return V(alpha * (S(2) * x(0) + x(1)) - uinf, alpha * x(0) - uinf); },
                              [=](const V&) { return mat<S>(S(2) * alpha, alpha, alpha, S(0)); }}});
  e.w1 = detail::sum_of<S>({{s, c, [](const V& x) { return x(0) * x(0) - x(1) * x(1); },
                             [](const V& x) { return V(S(2) * x(0), S(-2) * x(1)); },
                             [](const V&) { return mat<S>(S(2), S(0), S(0), S(-2)); }}});
  e.w2 = detail::sum_of<S>({{s, c, [](const V& x) { return x(0) * x(0) + x(1) * x(1); },
                             [](const V& x) { return V(S(2) * x(0), S(2) * x(1)); },
                             [](const V&) { return mat<S>(S(2), S(0), S(0), S(2)); }}});
  return e;
}

/// Strong-form residuals of the coupled system evaluated on `exact`.
Sources synthesize_sources(const ExactSolution<double>& exact, const ModelParams& params);

/// Displacement and fluid flux on Gamma, pressure and total traction on Sigma,
/// species fluxes on the whole boundary, all taken from `exact`.
BoundaryData boundary_data_from_exact(const ExactSolution<double>& exact, const ModelParams& params);

/// Total stress 2 mu eps(u) - psi I - tau r k k^T of the exact fields.
Eigen::Matrix2d exact_total_stress(const ExactSolution<double>& exact, const ModelParams& params,
                                   const Vec2& x, double t);

}  // namespace poromech
