// Closed-form covariances, divergences, and detection/covertness thresholds
// for the scalar autoregressive plant, plus their dense-matrix counterparts.
#pragma once

#include <Eigen/Dense>

#include "covertctl/normal.hpp"

namespace covertctl {

/// Dense symmetric positive-semidefinite covariance with a record of which
/// builder produced it. ResetBlock matrices are block diagonal: entries
/// (i, j) with i <= reset_time < j are exactly zero.
struct CovMatrix {
  enum class Provenance { Transient, Steady, ResetBlock, Empirical };

  Eigen::MatrixXd entries;
  Provenance provenance = Provenance::Empirical;
  int reset_time = 0;  // ResetBlock only

  int size() const { return static_cast<int>(entries.rows()); }

  /// Max |S - S^T| entry, for the symmetry invariant.
  double symmetry_gap() const;

  /// True when the smallest eigenvalue is >= -tol_scale times the largest.
  bool is_positive_semidefinite(double tol_scale = 1e-9) const;
};

/// Covariance of (X_1..X_n) for a zero-start plant:
/// sigma^2 / (1 - a^2) * (a^|i-j| - a^(i+j)). Requires |a| != 1.
CovMatrix transient_covariance(double a, double sigma, int n);

/// Stationary covariance sigma^2 / (1 - a^2) * a^|i-j|. Requires |a| < 1.
CovMatrix steady_covariance(double a, double sigma, int n);

/// Tridiagonal inverse of steady_covariance, in closed form.
CovMatrix steady_precision(double a, double sigma, int n);

/// Covariance of a stationary run restarted independently after sample tau:
/// block diagonal of steady covariances of sizes tau and n - tau.
/// Requires 1 <= tau <= n - 1.
CovMatrix reset_covariance(double a, double sigma, int n, int tau);

/// Kullback-Leibler divergence between N(mu0, s0) and N(mu1, s1), evaluated
/// with Cholesky solves. Throws std::runtime_error (with a condition-number
/// note) when s1 is numerically singular.
double kl_gaussian(const Eigen::VectorXd& mu0, const CovMatrix& s0,
                   const Eigen::VectorXd& mu1, const CovMatrix& s1);

/// Zero-mean convenience overload.
double kl_gaussian(const CovMatrix& s0, const CovMatrix& s1);

/// tr(Sigma_b^{-1} Sigma_a) for stationary covariances with gains a and b:
/// ((n-2) b^2 - 2 (n-1) a b + n) / (1 - a^2).
double trace_ratio_closed_form(double a, double b, int n);

/// Determinant of the stationary covariance: sigma^(2n) / (1 - a^2).
double steady_det_closed_form(double a, double sigma, int n);

/// Divergence between stationary laws with gains a (null) and b (alternative):
/// 1/2 [ ((b-a)^2 n - 2 b (b-a)) / (1 - a^2) + ln((1-a^2)/(1-b^2)) ].
double kl_gain_change(double a, double b, int n);

/// Divergence between the stationary law and its single-reset counterpart:
/// 1/2 ln(1/(1-a^2)), independent of n and of the reset position.
double kl_reset(double a);

struct BoundReport {
  double kl = 0.0;
  double tv_upper = 0.0;         // min(1, sqrt(kl/2))
  double error_sum_lower = 0.0;  // 1 - tv_upper
};

/// Pinsker-type chain from a divergence to a lower bound on alpha + beta.
BoundReport bound_report(double kl);

enum class LogBase { Natural, Two };

/// Largest |b| for which switching gain a to b stays eps-covert over a short
/// window: sqrt(1 - (1-a^2) exp(-4 eps^2)).
double covert_gain_bound_gain_change(double a, double eps);

/// Largest |a| for which a single stationary reset stays eps-covert.
/// Natural: sqrt(1 - e^(-4 eps^2));  Two: sqrt(1 - 2^(-4 eps^2)).
double covert_gain_bound_reset(double eps, LogBase base);

/// Smallest |a| above which the single-sample reset test reaches
/// (1-delta)-detection: sqrt(1 - Qinv((1-delta/2)/2)^2 / (2 ln(2/delta))).
double detection_gain_threshold(double delta);

/// Minimal real observation window for the channel energy test:
/// 4 / (delta snr^2) * (1 + sqrt(1 + 2 snr))^2. Take ceil for a sample count.
double k0_control_energy(double snr, double delta);

struct ResidualWindow {
  double k0 = 0.0;       // exact minimal real window
  double k0_upper = 0.0; // compact bound, >= k0
};

/// Minimal real observation window for the residual energy test given the
/// control energy e_u, noise variance sigma2, and fourth moment m4.
ResidualWindow k0_residual_energy(double e_u, double sigma2, double m4,
                                  double delta);

/// Minimal real observation time for the magnitude test on an unstable
/// plant (|a| > 1) with Gaussian noise and decision level m.
double n0_magnitude(double a, double sigma, double m, double delta);

}  // namespace covertctl
