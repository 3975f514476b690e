#include "poromech/physics.hpp"

#include "poromech/errors.hpp"

#include <Eigen/Eigenvalues>

#include <string>

namespace poromech {

namespace {

void require(bool ok, const std::string& name, const std::string& what) {
  if (!ok) throw InvalidArgument("invalid parameter '" + name + "': " + what);
}

void require_spd(const Eigen::Matrix2d& m, const std::string& name) {
  require(m.allFinite(), name, "must be finite");
  require((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * m.cwiseAbs().maxCoeff(), name,
          "must be symmetric");
  const double smallest = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(m).eigenvalues()(0);
  require(smallest > 0.0, name, "must be positive definite");
}

}  // namespace

void validate(const ModelParams& p) {
  const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  const auto nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  require(positive(p.mu), "mu", "must be > 0");
  require(positive(p.lambda), "lambda", "must be > 0");
  require(positive(p.eta), "eta", "must be > 0");
  require(positive(p.beta1), "beta1", "must be > 0");
  require(positive(p.rho), "rho", "must be > 0");
  require(nonneg(p.c0), "c0", "must be >= 0");
  require(nonneg(p.alpha), "alpha", "must be >= 0");
  require(nonneg(p.tau), "tau", "must be >= 0");
  require(nonneg(p.gamma), "gamma", "must be >= 0");
  require(nonneg(p.beta2), "beta2", "must be >= 0");
  require(nonneg(p.beta3), "beta3", "must be >= 0");
  require(std::isfinite(p.u_inf), "u_inf", "must be finite");
  require_spd(p.kappa, "kappa");
  require_spd(p.D1, "D1");
  require_spd(p.D2, "D2");
  require(p.k_dir.allFinite() && std::abs(p.k_dir.norm() - 1.0) <= 1e-12, "k",
          "must be a unit vector");
}

}  // namespace poromech
