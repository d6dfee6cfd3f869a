#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "covertctl/detectors.hpp"
#include "covertctl/rng.hpp"

using namespace covertctl;

TEST_CASE("magnitude detector thresholding") {
  MagnitudeConfig cfg;
  cfg.gamma = 2.0;
  cfg.c = 3.0;
  cfg.delta = 0.1;
  cfg.m = std::pow(2.0 * cfg.c / cfg.delta, 0.5);
  CHECK(magnitude_detector(2.0 * cfg.m, cfg).decision == Decision::H0_Uncontrolled);
  CHECK(magnitude_detector(0.0, cfg).decision == Decision::H1_Controlled);
  CHECK(magnitude_detector(-cfg.m, cfg).decision == Decision::H1_Controlled);

  MagnitudeConfig bad = cfg;
  bad.m = cfg.m / 2.0;
  CHECK_THROWS_AS(magnitude_detector(1.0, bad), std::invalid_argument);
}

TEST_CASE("control energy detector") {
  const double sigma_v = 1.0, delta = 0.1;
  SUBCASE("zero window decides H0") {
    std::vector<double> w(100, 0.0);
    CHECK(control_energy_detector(w, sigma_v, delta).decision ==
          Decision::H0_Uncontrolled);
  }
  SUBCASE("loud constant window decides H1") {
    const int k = 64;
    const double t = 2.0 * sigma_v * sigma_v / std::sqrt(delta * k);
    std::vector<double> w(k, std::sqrt(sigma_v * sigma_v + 3.0 * t));
    CHECK(control_energy_detector(w, sigma_v, delta).decision ==
          Decision::H1_Controlled);
  }
  SUBCASE("tie decides H1") {
    std::vector<double> w(4, 0.0);
    const DetectorVerdict probe = control_energy_detector(w, sigma_v, delta);
    std::vector<double> tie(4, std::sqrt(probe.threshold));
    CHECK(control_energy_detector(tie, sigma_v, delta).decision ==
          Decision::H1_Controlled);
  }
  SUBCASE("permutation invariance") {
    SplitMix64 rng(5);
    std::vector<double> w(32);
    for (double& x : w) x = rng.next_gaussian(1.3);
    const DetectorVerdict before = control_energy_detector(w, sigma_v, delta);
    std::reverse(w.begin(), w.end());
    std::rotate(w.begin(), w.begin() + 7, w.end());
    const DetectorVerdict after = control_energy_detector(w, sigma_v, delta);
    CHECK(before.statistic == doctest::Approx(after.statistic).epsilon(1e-15));
    CHECK(before.decision == after.decision);
  }
  CHECK_THROWS_AS(control_energy_detector({}, sigma_v, delta), std::domain_error);
}

TEST_CASE("residual energy detector") {
  const double a = 0.6;
  SUBCASE("all-zero states decide H0") {
    std::vector<double> x(40, 0.0);
    CHECK(residual_energy_detector(x, a, 1.0, 3.0, 0.1).decision ==
          Decision::H0_Uncontrolled);
  }
  SUBCASE("residuals at sigma stay below threshold") {
    // x_k chosen so x_k - a x_{k-1} = sigma exactly
    const double sigma2 = 1.0;
    std::vector<double> x(30);
    x[0] = 0.0;
    for (std::size_t k = 1; k < x.size(); ++k) x[k] = a * x[k - 1] + 1.0;
    CHECK(residual_energy_detector(x, a, sigma2, 3.0, 0.1).decision ==
          Decision::H0_Uncontrolled);
  }
  SUBCASE("large residual energy decides H1") {
    std::vector<double> x(30);
    x[0] = 0.0;
    for (std::size_t k = 1; k < x.size(); ++k) x[k] = a * x[k - 1] + 10.0;
    CHECK(residual_energy_detector(x, a, 1.0, 3.0, 0.1).decision ==
          Decision::H1_Controlled);
  }
  SUBCASE("fewer than 2 states rejected") {
    std::vector<double> x(1, 0.0);
    CHECK_THROWS_AS(residual_energy_detector(x, a, 1.0, 3.0, 0.1),
                    std::domain_error);
  }
}

TEST_CASE("reset detector thresholding") {
  const double a = 0.9, sigma = 1.0, delta = 0.5;
  const DetectorVerdict zero = reset_lrt_detector(0.0, a, sigma, delta);
  CHECK(zero.decision == Decision::H1_Controlled);
  const double t = zero.threshold;
  CHECK(t == doctest::Approx(sigma * sigma / (1.0 - a * a) *
                             std::pow(q_inverse((1.0 - delta / 2.0) / 2.0), 2)));
  CHECK(reset_lrt_detector(2.0 * std::sqrt(t), a, sigma, delta).decision ==
        Decision::H0_Uncontrolled);
  // tie decides H1
  CHECK(reset_lrt_detector(std::sqrt(t), a, sigma, delta).decision ==
        Decision::H1_Controlled);
}

TEST_CASE("gaussian lrt") {
  SUBCASE("identical covariances tie to H1 with zero statistic") {
    const CovMatrix s = steady_covariance(0.5, 1.0, 3);
    Eigen::VectorXd x(3);
    x << 0.3, -0.2, 1.0;
    const DetectorVerdict v = gaussian_lrt_detector(x, s, s);
    CHECK(v.statistic == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(v.decision == Decision::H1_Controlled);
  }
  SUBCASE("1-D variance test: huge samples go to the wider law") {
    CovMatrix s0, s1;
    s0.entries = Eigen::MatrixXd::Constant(1, 1, 1.0);
    s1.entries = Eigen::MatrixXd::Constant(1, 1, 4.0);
    Eigen::VectorXd big(1), small(1);
    big << 10.0;
    small << 0.1;
    CHECK(gaussian_lrt_detector(big, s0, s1).decision == Decision::H1_Controlled);
    CHECK(gaussian_lrt_detector(small, s0, s1).decision == Decision::H0_Uncontrolled);
  }
  SUBCASE("statistic crosses the threshold monotonically in sample scale") {
    CovMatrix s0, s1;
    s0.entries = Eigen::MatrixXd::Constant(1, 1, 1.0);
    s1.entries = Eigen::MatrixXd::Constant(1, 1, 2.0);
    const GaussianLrt lrt(s0, s1);
    double prev = -INFINITY;
    for (double scale : {0.0, 0.5, 1.0, 2.0, 4.0}) {
      Eigen::VectorXd x(1);
      x << scale;
      const double stat = lrt.decide(x).statistic;
      CHECK(stat >= prev);
      prev = stat;
    }
  }
}

TEST_CASE("empirical lrt error sum respects the divergence bound (short run)") {
  // gain-change pair at n=4; optimal-test error sum must dominate
  // 1 - sqrt(KL/2) up to Monte Carlo noise.
  const double a = 0.3, b = 0.45;
  const int n = 4;
  const CovMatrix s0 = steady_covariance(a, 1.0, n);
  const CovMatrix s1 = steady_covariance(b, 1.0, n);
  const GaussianLrt lrt(s0, s1);

  const Eigen::LLT<Eigen::MatrixXd> chol0(s0.entries);
  const Eigen::LLT<Eigen::MatrixXd> chol1(s1.entries);
  const long trials = 20000;
  long false_alarm = 0, miss = 0;
  SplitMix64 rng(404);
  Eigen::VectorXd z(n);
  for (long i = 0; i < trials; ++i) {
    for (int k = 0; k < n; ++k) z(k) = rng.next_gaussian(1.0);
    const Eigen::VectorXd x0 = chol0.matrixL() * z;
    if (lrt.decide(x0).decision == Decision::H1_Controlled) ++false_alarm;
    for (int k = 0; k < n; ++k) z(k) = rng.next_gaussian(1.0);
    const Eigen::VectorXd x1 = chol1.matrixL() * z;
    if (lrt.decide(x1).decision == Decision::H0_Uncontrolled) ++miss;
  }
  const double alpha = static_cast<double>(false_alarm) / trials;
  const double beta = static_cast<double>(miss) / trials;
  const double bound =
      bound_report(kl_gaussian(s0, s1)).error_sum_lower;
  const double se = std::sqrt(alpha * (1 - alpha) / trials) +
                    std::sqrt(beta * (1 - beta) / trials);
  CHECK(alpha + beta >= bound - 4.0 * se);
}
