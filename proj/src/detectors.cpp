#include "covertctl/detectors.hpp"

#include <cmath>
#include <stdexcept>

namespace covertctl {
namespace {

void check(bool ok, const char* msg) {
  if (!ok) throw std::domain_error(msg);
}

Eigen::LLT<Eigen::MatrixXd> factor(const CovMatrix& s, const char* who) {
  Eigen::LLT<Eigen::MatrixXd> llt(s.entries);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error(std::string(who) + ": singular covariance");
  }
  return llt;
}

double log_det(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace

void MagnitudeConfig::validate() const {
  if (!(m > 0.0 && gamma > 0.0 && c > 0.0 && delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("magnitude config: all fields must be positive, delta in (0,1)");
  }
  const double floor = std::pow(2.0 * c / delta, 1.0 / gamma);
  if (m < floor * (1.0 - 1e-12)) {
    throw std::invalid_argument("magnitude config: m must be >= (2c/delta)^(1/gamma)");
  }
}

DetectorVerdict magnitude_detector(double x_n0, const MagnitudeConfig& config) {
  config.validate();
  DetectorVerdict v;
  v.statistic = std::abs(x_n0);
  v.threshold = config.m;
  v.decision = v.statistic <= v.threshold ? Decision::H1_Controlled
                                          : Decision::H0_Uncontrolled;
  return v;
}

DetectorVerdict control_energy_detector(std::span<const double> observations,
                                        double sigma_v, double delta) {
  check(!observations.empty(), "control_energy_detector: empty window");
  check(sigma_v > 0.0, "control_energy_detector: sigma_v must be > 0");
  check(delta > 0.0 && delta < 1.0, "control_energy_detector: delta in (0,1)");
  const double k = static_cast<double>(observations.size());
  double energy = 0.0;
  for (double w : observations) energy += w * w;
  energy /= k;
  DetectorVerdict v;
  v.statistic = energy;
  v.threshold = sigma_v * sigma_v + 2.0 * sigma_v * sigma_v / std::sqrt(delta * k);
  v.decision = energy >= v.threshold ? Decision::H1_Controlled
                                     : Decision::H0_Uncontrolled;
  return v;
}

DetectorVerdict residual_energy_detector(std::span<const double> states,
                                         double a, double sigma2, double m4,
                                         double delta) {
  check(states.size() >= 2, "residual_energy_detector: needs at least 2 states");
  check(sigma2 > 0.0, "residual_energy_detector: sigma2 must be > 0");
  check(m4 >= sigma2 * sigma2, "residual_energy_detector: m4 must be >= sigma2^2");
  check(delta > 0.0 && delta < 1.0, "residual_energy_detector: delta in (0,1)");
  const std::size_t k = states.size() - 1;
  double energy = 0.0;
  for (std::size_t i = 1; i < states.size(); ++i) {
    const double y = states[i] - a * states[i - 1];
    energy += y * y;
  }
  energy /= static_cast<double>(k);
  DetectorVerdict v;
  v.statistic = energy;
  v.threshold = sigma2 + std::sqrt((m4 - sigma2 * sigma2) /
                                   (static_cast<double>(k) * delta / 2.0));
  v.decision = energy >= v.threshold ? Decision::H1_Controlled
                                     : Decision::H0_Uncontrolled;
  return v;
}

DetectorVerdict reset_lrt_detector(double x_tau_plus_1, double a, double sigma,
                                   double delta) {
  check(std::abs(a) < 1.0, "reset_lrt_detector: requires |a| < 1");
  check(sigma > 0.0, "reset_lrt_detector: sigma must be > 0");
  check(delta > 0.0 && delta < 1.0, "reset_lrt_detector: delta in (0,1)");
  const double q = q_inverse((1.0 - delta / 2.0) / 2.0);
  DetectorVerdict v;
  v.statistic = x_tau_plus_1 * x_tau_plus_1;
  v.threshold = sigma * sigma / (1.0 - a * a) * q * q;
  v.decision = v.statistic <= v.threshold ? Decision::H1_Controlled
                                          : Decision::H0_Uncontrolled;
  return v;
}

GaussianLrt::GaussianLrt(const CovMatrix& s0, const CovMatrix& s1)
    : llt0_(factor(s0, "gaussian_lrt")), llt1_(factor(s1, "gaussian_lrt")) {
  if (s0.size() != s1.size()) {
    throw std::domain_error("gaussian_lrt: dimension mismatch");
  }
  log_det_ratio_ = log_det(llt0_) - log_det(llt1_);
}

DetectorVerdict GaussianLrt::decide(
    const Eigen::Ref<const Eigen::VectorXd>& sample) const {
  if (sample.size() != llt0_.rows()) {
    throw std::domain_error("gaussian_lrt: sample dimension mismatch");
  }
  // ln f1 - ln f0 = 1/2 (ln|S0| - ln|S1| + x'S0^{-1}x - x'S1^{-1}x)
  const double quad0 = sample.dot(llt0_.solve(sample));
  const double quad1 = sample.dot(llt1_.solve(sample));
  DetectorVerdict v;
  v.statistic = 0.5 * (log_det_ratio_ + quad0 - quad1);
  v.threshold = 0.0;
  v.decision = v.statistic >= 0.0 ? Decision::H1_Controlled
                                  : Decision::H0_Uncontrolled;
  return v;
}

DetectorVerdict gaussian_lrt_detector(const Eigen::VectorXd& sample,
                                      const CovMatrix& s0, const CovMatrix& s1) {
  return GaussianLrt(s0, s1).decide(sample);
}

}  // namespace covertctl
