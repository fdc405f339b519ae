#include "brb/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace brb {

namespace {

// Indices of the rate parameters within the parameter vector.
std::vector<int> rate_indices(DecayModel model) {
  switch (model) {
    case DecayModel::SingleExp: return {1};
    case DecayModel::ExpPlusConst: return {1};
    case DecayModel::DoubleExp: return {1, 3};
  }
  throw std::invalid_argument("rate_indices: bad model");
}

double pow_n(double base, double n) {
  if (base == 0.0) return n == 0.0 ? 1.0 : 0.0;
  if (base > 0.0) return std::pow(base, n);
  // Negative rates only appear at integer n.
  const double mag = std::pow(-base, n);
  return static_cast<long long>(n) % 2 == 0 ? mag : -mag;
}

// Derivative of base^n at integer n, finite at base = 0.
double dpow_n(double base, double n) {
  if (n == 0.0) return 0.0;
  if (base == 0.0) return n == 1.0 ? 1.0 : 0.0;
  return n * pow_n(base, n - 1.0);
}

void model_row(DecayModel model, const Eigen::VectorXd& p, double n, double& value,
               Eigen::VectorXd& grad) {
  switch (model) {
    case DecayModel::SingleExp: {
      const double ln = pow_n(p(1), n);
      value = p(0) * ln;
      grad(0) = ln;
      grad(1) = p(0) * dpow_n(p(1), n);
      return;
    }
    case DecayModel::ExpPlusConst: {
      const double ln = pow_n(p(1), n);
      value = p(0) * ln + p(2);
      grad(0) = ln;
      grad(1) = p(0) * dpow_n(p(1), n);
      grad(2) = 1.0;
      return;
    }
    case DecayModel::DoubleExp: {
      const double ln = pow_n(p(1), n);
      const double kn = pow_n(p(3), n);
      value = p(0) * ln + p(2) * kn;
      grad(0) = ln;
      grad(1) = p(0) * dpow_n(p(1), n);
      grad(2) = kn;
      grad(3) = p(2) * dpow_n(p(3), n);
      return;
    }
  }
  throw std::invalid_argument("model_row: bad model");
}

// Linear least squares for the amplitudes at fixed rates.
void solve_amplitudes(DecayModel model, Eigen::VectorXd& p, const std::vector<double>& n,
                      const std::vector<double>& y, const std::vector<double>& w) {
  const auto m = static_cast<Eigen::Index>(n.size());
  const int n_amp = model == DecayModel::SingleExp ? 1 : 2;
  Eigen::MatrixXd design(m, n_amp);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    design(i, 0) = w[size_t(i)] * pow_n(p(1), n[size_t(i)]);
    if (model == DecayModel::ExpPlusConst) design(i, 1) = w[size_t(i)];
    if (model == DecayModel::DoubleExp) design(i, 1) = w[size_t(i)] * pow_n(p(3), n[size_t(i)]);
    rhs(i) = w[size_t(i)] * y[size_t(i)];
  }
  const Eigen::VectorXd amp = design.completeOrthogonalDecomposition().solve(rhs);
  p(0) = amp(0);
  if (n_amp == 2) p(2) = amp(1);
}

double default_rate(DecayModel model, const std::vector<double>& n,
                    const std::vector<double>& y) {
  // Ratio of magnitudes between the first and last points.
  const size_t last = n.size() - 1;
  const double y0 = std::abs(y.front());
  const double y1 = std::abs(y[last]);
  const double dn = n[last] - n.front();
  if (model == DecayModel::DoubleExp) return 1.0;
  if (y0 > 0.0 && y1 > 0.0 && dn > 0.0) {
    const double r = std::pow(y1 / y0, 1.0 / dn);
    if (std::isfinite(r) && r > 0.0 && r < 1.0) return r;
  }
  return 0.9;
}

}  // namespace

int decay_param_count(DecayModel model) {
  switch (model) {
    case DecayModel::SingleExp: return 2;
    case DecayModel::ExpPlusConst: return 3;
    case DecayModel::DoubleExp: return 4;
  }
  throw std::invalid_argument("decay_param_count: bad model");
}

double decay_model_eval(DecayModel model, const Eigen::VectorXd& params, double n) {
  double value = 0.0;
  Eigen::VectorXd grad(params.size());
  model_row(model, params, n, value, grad);
  return value;
}

double DecayFit::stderr_of(int i) const {
  const double v = covariance(i, i);
  return v > 0.0 ? std::sqrt(v) : 0.0;
}

DecayFit fit_decay(DecayModel model, const std::vector<double>& n,
                   const std::vector<double>& y, const std::vector<double>& sigma,
                   const FitOptions& options) {
  const int np = decay_param_count(model);
  const auto m = static_cast<Eigen::Index>(n.size());
  if (n.size() != y.size() || (!sigma.empty() && sigma.size() != n.size())) {
    throw std::invalid_argument("fit_decay: size mismatch");
  }
  if (m < np) throw std::invalid_argument("fit_decay: fewer points than parameters");

  std::vector<double> w(n.size(), 1.0);
  for (size_t i = 0; i < sigma.size(); ++i) {
    if (sigma[i] <= 0.0) throw std::invalid_argument("fit_decay: sigma must be positive");
    w[i] = 1.0 / sigma[i];
  }

  Eigen::VectorXd p = Eigen::VectorXd::Zero(np);
  p(1) = std::isnan(options.lambda0) ? default_rate(model, n, y) : options.lambda0;
  if (model == DecayModel::DoubleExp) {
    p(3) = std::isnan(options.kappa0) ? -1.0 : options.kappa0;
  }
  solve_amplitudes(model, p, n, y, w);

  const auto residuals = [&](const Eigen::VectorXd& q, Eigen::VectorXd& r,
                             Eigen::MatrixXd* jac) {
    Eigen::VectorXd grad(np);
    double value = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      model_row(model, q, n[size_t(i)], value, grad);
      r(i) = w[size_t(i)] * (value - y[size_t(i)]);
      if (jac) jac->row(i) = w[size_t(i)] * grad.transpose();
    }
  };

  Eigen::VectorXd r(m);
  Eigen::MatrixXd jac(m, np);
  residuals(p, r, &jac);
  double cost = r.squaredNorm();

  DecayFit fit;
  fit.model = model;
  double mu = 1e-3;
  const double bound = options.rate_bound;
  const std::vector<int> rates = rate_indices(model);

  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;
    Eigen::MatrixXd damped = jtj;
    damped.diagonal().array() += mu * (jtj.diagonal().array().abs() + 1e-12);
    const Eigen::VectorXd step = damped.ldlt().solve(-jtr);

    Eigen::VectorXd q = p + step;
    for (int idx : rates) q(idx) = std::clamp(q(idx), -bound, bound);
    const double rel = (q - p).norm() / (p.norm() + 1e-300);

    Eigen::VectorXd r_new(m);
    residuals(q, r_new, nullptr);
    const double cost_new = r_new.squaredNorm();
    if (cost_new <= cost) {
      p = q;
      residuals(p, r, &jac);
      cost = r.squaredNorm();
      mu = std::max(mu / 3.0, 1e-12);
      if (rel < 1e-10) {
        fit.converged = true;
        ++iter;
        break;
      }
    } else {
      if (rel < 1e-10) {
        fit.converged = true;
        ++iter;
        break;
      }
      mu *= 2.0;
      if (mu > 1e12) break;
    }
  }

  fit.params = p;
  fit.iterations = iter;
  fit.chi_squared = cost;

  Eigen::MatrixXd jtj = jac.transpose() * jac;
  Eigen::MatrixXd cov = jtj.completeOrthogonalDecomposition().pseudoInverse();
  if (sigma.empty() && m > np) {
    cov *= cost / static_cast<double>(m - np);
  }
  fit.covariance = cov;
  return fit;
}

}  // namespace brb
