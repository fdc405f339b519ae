#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

namespace brb {

// Decay models over integer sequence length n:
//   SingleExp     y = A * lambda^n              params (A, lambda)
//   ExpPlusConst  y = A * lambda^n + B          params (A, lambda, B)
//   DoubleExp     y = A * lambda^n + B * kappa^n  params (A, lambda, B, kappa)
enum class DecayModel { SingleExp, ExpPlusConst, DoubleExp };

int decay_param_count(DecayModel model);
double decay_model_eval(DecayModel model, const Eigen::VectorXd& params, double n);

struct FitOptions {
  double lambda0 = std::numeric_limits<double>::quiet_NaN();  // NaN: model default
  double kappa0 = std::numeric_limits<double>::quiet_NaN();
  int max_iterations = 200;
  double rate_bound = 1.05;  // rates are clamped to [-rate_bound, rate_bound]
};

struct DecayFit {
  DecayModel model = DecayModel::SingleExp;
  Eigen::VectorXd params;
  Eigen::MatrixXd covariance;
  bool converged = false;
  int iterations = 0;
  double chi_squared = 0.0;  // sum of squared weighted residuals

  double amplitude() const { return params(0); }
  double lambda() const { return params(1); }
  double constant() const { return params(2); }  // ExpPlusConst B / DoubleExp B
  double kappa() const { return params(3); }
  double stderr_of(int i) const;
};

// Weighted Levenberg-Marquardt fit with analytic Jacobians. `sigma` may be
// empty (unit weights; covariance then scaled by the reduced chi squared).
// Rates stay inside [-rate_bound, rate_bound]; amplitudes start from a linear
// least-squares solve at the initial rates. Non-convergence is reported via
// the flag, never thrown.
DecayFit fit_decay(DecayModel model, const std::vector<double>& n,
                   const std::vector<double>& y, const std::vector<double>& sigma,
                   const FitOptions& options = {});

}  // namespace brb
