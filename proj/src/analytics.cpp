#include "covertctl/analytics.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace covertctl {
namespace {

void check(bool ok, const char* msg) {
  if (!ok) throw std::domain_error(msg);
}

Eigen::LLT<Eigen::MatrixXd> cholesky_or_throw(const CovMatrix& s,
                                              const char* who) {
  Eigen::LLT<Eigen::MatrixXd> llt(s.entries);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.entries,
                                                      Eigen::EigenvaluesOnly);
    std::ostringstream msg;
    msg << who << ": covariance is numerically singular";
    if (es.info() == Eigen::Success) {
      const double lo = es.eigenvalues().minCoeff();
      const double hi = es.eigenvalues().maxCoeff();
      msg << " (eigenvalue range [" << lo << ", " << hi
          << "], condition ~" << (lo > 0 ? hi / lo : INFINITY) << ")";
    }
    throw std::runtime_error(msg.str());
  }
  return llt;
}

double log_det_from_llt(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace

double CovMatrix::symmetry_gap() const {
  return (entries - entries.transpose()).cwiseAbs().maxCoeff();
}

bool CovMatrix::is_positive_semidefinite(double tol_scale) const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(entries,
                                                    Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) return false;
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  return lo >= -tol_scale * std::max(hi, 0.0);
}

CovMatrix transient_covariance(double a, double sigma, int n) {
  check(sigma > 0.0, "transient_covariance: sigma must be > 0");
  check(n >= 1, "transient_covariance: n must be >= 1");
  check(std::abs(a) != 1.0, "transient_covariance: formula singular at |a| = 1");
  const double scale = sigma * sigma / (1.0 - a * a);
  CovMatrix out;
  out.provenance = CovMatrix::Provenance::Transient;
  out.entries.resize(n, n);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      out.entries(i - 1, j - 1) =
          scale * (std::pow(a, std::abs(i - j)) - std::pow(a, i + j));
    }
  }
  return out;
}

CovMatrix steady_covariance(double a, double sigma, int n) {
  check(sigma > 0.0, "steady_covariance: sigma must be > 0");
  check(n >= 1, "steady_covariance: n must be >= 1");
  check(std::abs(a) < 1.0, "steady_covariance: requires |a| < 1");
  const double scale = sigma * sigma / (1.0 - a * a);
  CovMatrix out;
  out.provenance = CovMatrix::Provenance::Steady;
  out.entries.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out.entries(i, j) = scale * std::pow(a, std::abs(i - j));
    }
  }
  return out;
}

CovMatrix steady_precision(double a, double sigma, int n) {
  check(sigma > 0.0, "steady_precision: sigma must be > 0");
  check(n >= 1, "steady_precision: n must be >= 1");
  check(std::abs(a) < 1.0, "steady_precision: requires |a| < 1");
  CovMatrix out;
  out.provenance = CovMatrix::Provenance::Steady;
  out.entries = Eigen::MatrixXd::Zero(n, n);
  const double inv_var = 1.0 / (sigma * sigma);
  if (n == 1) {
    // A lone stationary sample has variance sigma^2 / (1 - a^2).
    out.entries(0, 0) = (1.0 - a * a) * inv_var;
    return out;
  }
  for (int i = 0; i < n; ++i) {
    const bool interior = (i > 0 && i < n - 1);
    out.entries(i, i) = (interior ? 1.0 + a * a : 1.0) * inv_var;
    if (i + 1 < n) {
      out.entries(i, i + 1) = -a * inv_var;
      out.entries(i + 1, i) = -a * inv_var;
    }
  }
  return out;
}

CovMatrix reset_covariance(double a, double sigma, int n, int tau) {
  check(n >= 2, "reset_covariance: n must be >= 2");
  check(tau >= 1 && tau <= n - 1, "reset_covariance: tau must be in [1, n-1]");
  const CovMatrix head = steady_covariance(a, sigma, tau);
  const CovMatrix tail = steady_covariance(a, sigma, n - tau);
  CovMatrix out;
  out.provenance = CovMatrix::Provenance::ResetBlock;
  out.reset_time = tau;
  out.entries = Eigen::MatrixXd::Zero(n, n);
  out.entries.topLeftCorner(tau, tau) = head.entries;
  out.entries.bottomRightCorner(n - tau, n - tau) = tail.entries;
  return out;
}

double kl_gaussian(const Eigen::VectorXd& mu0, const CovMatrix& s0,
                   const Eigen::VectorXd& mu1, const CovMatrix& s1) {
  const int n = s0.size();
  check(s1.size() == n && mu0.size() == n && mu1.size() == n,
        "kl_gaussian: dimension mismatch");
  const bool same_mean = (mu0.array() == mu1.array()).all();
  const bool same_cov = (s0.entries.array() == s1.entries.array()).all();
  if (same_mean && same_cov) return 0.0;

  const auto llt1 = cholesky_or_throw(s1, "kl_gaussian");
  const auto llt0 = cholesky_or_throw(s0, "kl_gaussian");

  const double trace_term = llt1.solve(s0.entries).trace();
  const Eigen::VectorXd d = mu1 - mu0;
  const double quad = d.dot(llt1.solve(d));
  const double log_ratio = log_det_from_llt(llt1) - log_det_from_llt(llt0);
  return 0.5 * (trace_term + quad - n + log_ratio);
}

double kl_gaussian(const CovMatrix& s0, const CovMatrix& s1) {
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(s0.size());
  return kl_gaussian(zero, s0, zero, s1);
}

double trace_ratio_closed_form(double a, double b, int n) {
  check(std::abs(a) < 1.0 && std::abs(b) < 1.0,
        "trace_ratio_closed_form: requires |a| < 1 and |b| < 1");
  check(n >= 1, "trace_ratio_closed_form: n must be >= 1");
  return ((n - 2.0) * b * b - 2.0 * (n - 1.0) * a * b + n) / (1.0 - a * a);
}

double steady_det_closed_form(double a, double sigma, int n) {
  check(std::abs(a) < 1.0, "steady_det_closed_form: requires |a| < 1");
  check(sigma > 0.0, "steady_det_closed_form: sigma must be > 0");
  check(n >= 1, "steady_det_closed_form: n must be >= 1");
  return std::pow(sigma, 2 * n) / (1.0 - a * a);
}

double kl_gain_change(double a, double b, int n) {
  check(std::abs(a) < 1.0 && std::abs(b) < 1.0,
        "kl_gain_change: requires |a| < 1 and |b| < 1");
  check(n >= 1, "kl_gain_change: n must be >= 1");
  const double diff = b - a;
  const double trace_minus_n = (diff * diff * n - 2.0 * b * diff) / (1.0 - a * a);
  const double log_ratio = std::log((1.0 - a * a) / (1.0 - b * b));
  return 0.5 * (trace_minus_n + log_ratio);
}

double kl_reset(double a) {
  check(std::abs(a) < 1.0, "kl_reset: requires |a| < 1");
  return 0.5 * std::log(1.0 / (1.0 - a * a));
}

BoundReport bound_report(double kl) {
  check(kl >= 0.0, "bound_report: kl must be >= 0");
  BoundReport r;
  r.kl = kl;
  r.tv_upper = std::min(1.0, std::sqrt(kl / 2.0));
  r.error_sum_lower = 1.0 - r.tv_upper;
  return r;
}

double covert_gain_bound_gain_change(double a, double eps) {
  check(std::abs(a) < 1.0, "covert_gain_bound_gain_change: requires |a| < 1");
  check(eps > 0.0, "covert_gain_bound_gain_change: eps must be > 0");
  return std::sqrt(1.0 - (1.0 - a * a) * std::exp(-4.0 * eps * eps));
}

double covert_gain_bound_reset(double eps, LogBase base) {
  check(eps > 0.0, "covert_gain_bound_reset: eps must be > 0");
  const double decay = base == LogBase::Natural
                           ? std::exp(-4.0 * eps * eps)
                           : std::exp2(-4.0 * eps * eps);
  return std::sqrt(1.0 - decay);
}

double detection_gain_threshold(double delta) {
  check(delta > 0.0 && delta < 1.0,
        "detection_gain_threshold: delta must be in (0, 1)");
  const double q = q_inverse((1.0 - delta / 2.0) / 2.0);
  return std::sqrt(1.0 - q * q / (2.0 * std::log(2.0 / delta)));
}

double k0_control_energy(double snr, double delta) {
  check(snr > 0.0, "k0_control_energy: snr must be > 0");
  check(delta > 0.0 && delta < 1.0, "k0_control_energy: delta must be in (0, 1)");
  const double root = 1.0 + std::sqrt(1.0 + 2.0 * snr);
  return 4.0 / (delta * snr * snr) * root * root;
}

ResidualWindow k0_residual_energy(double e_u, double sigma2, double m4,
                                  double delta) {
  check(e_u > 0.0, "k0_residual_energy: e_u must be > 0");
  check(sigma2 > 0.0, "k0_residual_energy: sigma2 must be > 0");
  check(delta > 0.0 && delta < 1.0,
        "k0_residual_energy: delta must be in (0, 1)");
  const double excess = m4 - sigma2 * sigma2;
  check(excess >= 0.0, "k0_residual_energy: m4 must be >= sigma2^2");
  const double half_delta = delta / 2.0;
  const double wide = (excess + 4.0 * e_u * sigma2) / half_delta;
  const double narrow = excess / half_delta;
  ResidualWindow w;
  const double root = std::sqrt(wide) + std::sqrt(narrow);
  w.k0 = root * root / (e_u * e_u);
  w.k0_upper = 4.0 * wide / (e_u * e_u);
  return w;
}

double n0_magnitude(double a, double sigma, double m, double delta) {
  check(std::abs(a) > 1.0, "n0_magnitude: requires |a| > 1");
  check(sigma > 0.0, "n0_magnitude: sigma must be > 0");
  check(m > 0.0, "n0_magnitude: m must be > 0");
  check(delta > 0.0 && delta < 1.0, "n0_magnitude: delta must be in (0, 1)");
  const double q = q_inverse((1.0 - delta / 2.0) / 2.0);
  return std::log(m * std::sqrt(a * a - 1.0) / (sigma * q)) /
         std::log(std::abs(a));
}

}  // namespace covertctl
