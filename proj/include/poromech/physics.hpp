#pragma once

#include <Eigen/Core>

#include <cmath>

namespace poromech {

/// Physical and coupling coefficients. Defaults are the Example-1 verification
/// values; rho (and therefore D2) defaults to 1, which is an assumption.
struct ModelParams {
  double mu = 10033.444;       ///< shear modulus [Pa]
  double lambda = 993311.037;  ///< dilation modulus [Pa]
  double alpha = 0.1;          ///< Biot-Willis coefficient
  double c0 = 1e-3;            ///< storage coefficient [1/Pa]
  double eta = 1e-3;           ///< fluid viscosity [Pa s]
  Eigen::Matrix2d kappa = 1e-4 * Eigen::Matrix2d::Identity();  ///< permeability [m^2]
  double rho = 1.0;            ///< solid density [kg/m^3]
  double tau = 1e5;            ///< active-stress intensity [Pa]
  double gamma = 0.1;          ///< dilation-reaction coupling
  double beta1 = 170.0;
  double beta2 = 0.1305;
  double beta3 = 0.7695;
  Eigen::Matrix2d D1 = 0.05 * Eigen::Matrix2d::Identity();  ///< [m^2/s]
  Eigen::Matrix2d D2 = 1.0 * Eigen::Matrix2d::Identity();   ///< [m^2/s]
  Eigen::Vector2d k_dir{1.0, 0.0};  ///< active-stress fibre direction, unit length
  double u_inf = 0.1;               ///< displacement scale of the manufactured solutions [m]

  /// Storage coefficient of the mass equation, c0 + alpha^2 / lambda.
  double storage() const { return c0 + alpha * alpha / lambda; }
};

/// Throws InvalidArgument naming the offending field.
void validate(const ModelParams& p);

/// Schnakenberg-type kinetics with a dilation-rate source. Outside the open
/// positive quadrant the kinetics are frozen at f0 = beta1*beta2, g0 = beta1*beta3.
template <typename Scalar>
Scalar reaction_f(Scalar w1, Scalar w2, Scalar div_rate, const ModelParams& p) {
  if (w1 <= Scalar(0) || w2 <= Scalar(0)) return Scalar(p.beta1 * p.beta2);
  return Scalar(p.beta1) * (Scalar(p.beta2) - w1 + w1 * w1 * w2) + Scalar(p.gamma) * w1 * div_rate;
}

template <typename Scalar>
Scalar reaction_g(Scalar w1, Scalar w2, Scalar div_rate, const ModelParams& p) {
  if (w1 <= Scalar(0) || w2 <= Scalar(0)) return Scalar(p.beta1 * p.beta3);
  return Scalar(p.beta1) * (Scalar(p.beta3) - w1 * w1 * w2) + Scalar(p.gamma) * w2 * div_rate;
}

/// Partial derivatives of (f, g) with respect to (w1, w2) and the dilation rate.
struct ReactionJacobian {
  Eigen::Matrix2d dw;         ///< [[df/dw1, df/dw2], [dg/dw1, dg/dw2]]
  Eigen::Vector2d ddiv_rate;  ///< (df/d(div_rate), dg/d(div_rate))
};

inline ReactionJacobian reaction_jacobian(double w1, double w2, double div_rate,
                                          const ModelParams& p) {
  ReactionJacobian j{Eigen::Matrix2d::Zero(), Eigen::Vector2d::Zero()};
  if (w1 <= 0.0 || w2 <= 0.0) return j;
  j.dw(0, 0) = p.beta1 * (-1.0 + 2.0 * w1 * w2) + p.gamma * div_rate;
  j.dw(0, 1) = p.beta1 * w1 * w1;
  j.dw(1, 0) = -2.0 * p.beta1 * w1 * w2;
  j.dw(1, 1) = -p.beta1 * w1 * w1 + p.gamma * div_rate;
  j.ddiv_rate = {p.gamma * w1, p.gamma * w2};
  return j;
}

/// Scalar field modulating the active stress.
template <typename Scalar>
Scalar r_field(Scalar w1, Scalar w2) {
  return w1 + w2;
}

/// sigma_act = -tau * r * (k outer k).
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> active_stress(Scalar r_val, const ModelParams& p) {
  const Eigen::Matrix<Scalar, 2, 1> k = p.k_dir.cast<Scalar>();
  return -Scalar(p.tau) * r_val * (k * k.transpose());
}

}  // namespace poromech
