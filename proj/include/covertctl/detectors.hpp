// The observer's decision procedures: each maps an observation window to a
// statistic, a threshold, and a binary verdict.
#pragma once

#include <Eigen/Dense>
#include <span>

#include "covertctl/analytics.hpp"

namespace covertctl {

enum class Decision { H0_Uncontrolled, H1_Controlled };

struct DetectorVerdict {
  double statistic = 0.0;
  double threshold = 0.0;
  Decision decision = Decision::H0_Uncontrolled;
};

/// Parameters of the magnitude test on an unstable plant. The decision
/// level m must dominate the moment bound: m >= (2c/delta)^(1/gamma).
struct MagnitudeConfig {
  double m = 0.0;      // decision level on |x|
  double gamma = 2.0;  // moment order stabilized under the alternative
  double c = 0.0;      // uniform bound on E|X|^gamma under the alternative
  double delta = 0.1;

  void validate() const;
};

/// Declares "controlled" when |x_n0| <= m: a stabilized state stays small
/// while the open-loop plant diverges.
DetectorVerdict magnitude_detector(double x_n0, const MagnitudeConfig& config);

/// Energy test on the control signal observed through AWGN of variance
/// sigma_v^2. Statistic is the mean square of the window; threshold is
/// sigma_v^2 + 2 sigma_v^2 / sqrt(delta K); ties decide H1.
DetectorVerdict control_energy_detector(std::span<const double> observations,
                                        double sigma_v, double delta);

/// Energy test on the innovations y_k = x_k - a x_{k-1} computed from K+1
/// consecutive state samples. Threshold is
/// sigma2 + sqrt((m4 - sigma2^2) / (K delta / 2)); ties decide H1.
DetectorVerdict residual_energy_detector(std::span<const double> states,
                                         double a, double sigma2, double m4,
                                         double delta);

/// Single-sample variance test for a reset at a known time: statistic x^2,
/// threshold sigma^2/(1-a^2) * Qinv((1-delta/2)/2)^2, small values decide H1.
DetectorVerdict reset_lrt_detector(double x_tau_plus_1, double a, double sigma,
                                   double delta);

/// Likelihood-ratio test between two zero-mean Gaussian vectors, prepared
/// once (Cholesky of both covariances) and evaluated per sample. Threshold 0
/// minimizes alpha + beta under equal priors; ties decide H1.
class GaussianLrt {
 public:
  GaussianLrt(const CovMatrix& s0, const CovMatrix& s1);

  DetectorVerdict decide(const Eigen::Ref<const Eigen::VectorXd>& sample) const;

  int dimension() const { return static_cast<int>(llt0_.rows()); }

 private:
  Eigen::LLT<Eigen::MatrixXd> llt0_;
  Eigen::LLT<Eigen::MatrixXd> llt1_;
  double log_det_ratio_ = 0.0;  // ln|S0| - ln|S1|
};

/// One-shot form of GaussianLrt.
DetectorVerdict gaussian_lrt_detector(const Eigen::VectorXd& sample,
                                      const CovMatrix& s0, const CovMatrix& s1);

}  // namespace covertctl
