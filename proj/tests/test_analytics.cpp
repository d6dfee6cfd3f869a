#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "covertctl/analytics.hpp"
#include "covertctl/rng.hpp"

using namespace covertctl;

namespace {

// Composite-Simpson tail integral of the standard normal density on
// [x, x + 45]; independent of the erfc-based implementation.
double oracle_q(double x) {
  const double hi = x + 45.0;
  const int intervals = 200000;  // even
  const double h = (hi - x) / intervals;
  auto phi = [](double t) {
    return 0.39894228040143267794 * std::exp(-0.5 * t * t);
  };
  double acc = phi(x) + phi(hi);
  for (int i = 1; i < intervals; ++i) {
    acc += phi(x + i * h) * (i % 2 ? 4.0 : 2.0);
  }
  return acc * h / 3.0;
}

const double kGainGrid[] = {-0.9, -0.7, -0.5, -0.3, -0.1, 0.1, 0.3, 0.5, 0.7, 0.9};
const int kSizeGrid[] = {1, 2, 3, 5, 10, 20, 40};

}  // namespace

TEST_CASE("q_function symmetry and anchor values") {
  CHECK(q_function(0.0) == doctest::Approx(0.5));
  for (double x : {0.5, 1.0, 2.0}) {
    CHECK(q_function(x) + q_function(-x) == doctest::Approx(1.0).epsilon(1e-14));
  }
  for (double x : {0.0, 0.3, 1.0, 2.5, 4.0, 6.0}) {
    CHECK(q_function(x) == doctest::Approx(oracle_q(x)).epsilon(1e-11));
  }
}

TEST_CASE("q_inverse inverts the tail function") {
  CHECK(q_inverse(0.5) == 0.0);
  CHECK(q_inverse(0.05) == doctest::Approx(1.6448536269514722).epsilon(1e-11));
  CHECK(q_inverse(0.375) == doctest::Approx(0.3186).epsilon(2e-4));
  CHECK(q_inverse(0.475) == doctest::Approx(0.0627).epsilon(2e-3));
  CHECK(q_inverse(0.05) == doctest::Approx([] {
          // bisect the quadrature oracle
          double lo = 0.0, hi = 8.0;
          for (int i = 0; i < 60; ++i) {
            const double mid = 0.5 * (lo + hi);
            (oracle_q(mid) > 0.05 ? lo : hi) = mid;
          }
          return 0.5 * (lo + hi);
        }()).epsilon(1e-9));
  for (double p : {1e-12, 1e-6, 0.01, 0.2, 0.375, 0.5, 0.7, 0.99, 1.0 - 1e-9}) {
    const double x = q_inverse(p);
    CHECK(q_function(x) == doctest::Approx(p).epsilon(1e-10));
  }
  // monotone decreasing
  double prev = q_inverse(1e-10);
  for (double p : {1e-6, 1e-3, 0.1, 0.4, 0.6, 0.9, 1.0 - 1e-6}) {
    const double x = q_inverse(p);
    CHECK(x < prev);
    prev = x;
  }
  CHECK_THROWS_AS(q_inverse(0.0), std::domain_error);
  CHECK_THROWS_AS(q_inverse(1.0), std::domain_error);
}

TEST_CASE("transient covariance entries") {
  SUBCASE("n=1 is the one-step variance") {
    for (double a : {0.3, 1.5, -0.7}) {
      const CovMatrix m = transient_covariance(a, 2.0, 1);
      CHECK(m.entries(0, 0) == doctest::Approx(4.0));
    }
  }
  SUBCASE("a=0 is diagonal") {
    const CovMatrix m = transient_covariance(0.0, 1.5, 4);
    CHECK(m.entries.isApprox(Eigen::MatrixXd::Identity(4, 4) * 2.25, 1e-14));
  }
  SUBCASE("symmetric and PSD") {
    for (double a : kGainGrid) {
      const CovMatrix m = transient_covariance(a, 1.0, 12);
      CHECK(m.symmetry_gap() <= 1e-12);
      CHECK(m.is_positive_semidefinite());
    }
  }
  SUBCASE("|a| = 1 rejected") {
    CHECK_THROWS_AS(transient_covariance(1.0, 1.0, 3), std::domain_error);
  }
}

TEST_CASE("transient covariance equals the lower-triangular construction") {
  // A zero-start run is A z with [A]_{ij} = sigma a^{i-j} on i >= j, so the
  // covariance must equal A A^T entry for entry.
  for (double a : {-0.8, 0.3, 0.9, 1.5}) {
    const double sigma = 1.3;
    const int n = 10;
    Eigen::MatrixXd map = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j <= i; ++j) map(i, j) = sigma * std::pow(a, i - j);
    }
    const Eigen::MatrixXd direct = map * map.transpose();
    const CovMatrix closed = transient_covariance(a, sigma, n);
    CHECK((direct - closed.entries).cwiseAbs().maxCoeff() <=
          1e-9 * direct.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("steady covariance entries") {
  SUBCASE("a=0 is diagonal") {
    const CovMatrix m = steady_covariance(0.0, 1.0, 3);
    CHECK(m.entries.isApprox(Eigen::MatrixXd::Identity(3, 3), 1e-14));
  }
  SUBCASE("diagonal value for a=0.6") {
    const CovMatrix m = steady_covariance(0.6, 1.0, 5);
    for (int i = 0; i < 5; ++i) {
      CHECK(m.entries(i, i) == doctest::Approx(1.5625));
    }
  }
  SUBCASE("transient diagonal approaches the steady value") {
    const double a = 0.8;
    const CovMatrix tr = transient_covariance(a, 1.0, 50);
    const CovMatrix st = steady_covariance(a, 1.0, 50);
    const int i = 49;
    const double gap = std::abs(tr.entries(i, i) - st.entries(i, i));
    CHECK(gap <= std::pow(a, 2.0 * (i + 1)) / (1.0 - a * a) + 1e-12);
  }
  SUBCASE("|a| >= 1 rejected") {
    CHECK_THROWS_AS(steady_covariance(1.0, 1.0, 3), std::domain_error);
  }
}

TEST_CASE("steady precision is the tridiagonal inverse") {
  SUBCASE("n=1 scalar inverse") {
    const CovMatrix m = steady_precision(0.6, 2.0, 1);
    CHECK(m.entries(0, 0) == doctest::Approx((1.0 - 0.36) / 4.0));
  }
  SUBCASE("a=0 gives identity / sigma^2") {
    const CovMatrix m = steady_precision(0.0, 2.0, 4);
    CHECK(m.entries.isApprox(Eigen::MatrixXd::Identity(4, 4) * 0.25, 1e-14));
  }
  SUBCASE("product with the covariance is the identity") {
    for (double a : {-0.7, 0.3, 0.7, 0.95}) {
      for (int n : {2, 3, 10}) {
        const CovMatrix cov = steady_covariance(a, 1.3, n);
        const CovMatrix prec = steady_precision(a, 1.3, n);
        const Eigen::MatrixXd prod = prec.entries * cov.entries;
        const double err =
            (prod - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
        CHECK(err <= 1e-10);
      }
    }
  }
}

TEST_CASE("reset covariance block structure") {
  SUBCASE("tau = n-1 leaves a single fresh sample") {
    const CovMatrix m = reset_covariance(0.6, 1.0, 4, 3);
    CHECK(m.entries(3, 3) == doctest::Approx(1.5625));
  }
  SUBCASE("cross blocks are exactly zero") {
    const CovMatrix m = reset_covariance(0.8, 1.0, 6, 3);
    for (int i = 0; i < 3; ++i) {
      for (int j = 3; j < 6; ++j) {
        CHECK(m.entries(i, j) == 0.0);
        CHECK(m.entries(j, i) == 0.0);
      }
    }
    CHECK(m.is_positive_semidefinite());
  }
  SUBCASE("tau out of range") {
    CHECK_THROWS_AS(reset_covariance(0.5, 1.0, 4, 0), std::domain_error);
    CHECK_THROWS_AS(reset_covariance(0.5, 1.0, 4, 4), std::domain_error);
  }
}

TEST_CASE("kl_gaussian basics") {
  SUBCASE("identical inputs give exactly zero") {
    const CovMatrix s = steady_covariance(0.5, 1.0, 4);
    CHECK(kl_gaussian(s, s) == 0.0);
  }
  SUBCASE("1-D mean shift: mu^2 / (2 sigma^2)") {
    CovMatrix s;
    s.entries = Eigen::MatrixXd::Constant(1, 1, 2.0);
    Eigen::VectorXd mu0(1), mu1(1);
    mu0 << 0.7;
    mu1 << 0.0;
    CHECK(kl_gaussian(mu0, s, mu1, s) == doctest::Approx(0.49 / 4.0));
  }
  SUBCASE("nonnegative on a random grid") {
    SplitMix64 rng(31337);
    for (int i = 0; i < 30; ++i) {
      const double a = -0.9 + 1.8 * rng.next_unit_open();
      const double b = -0.9 + 1.8 * rng.next_unit_open();
      const int n = 1 + static_cast<int>(rng.next_below(12));
      const double kl = kl_gaussian(steady_covariance(a, 1.0, n),
                                    steady_covariance(b, 1.0, n));
      CHECK(kl >= -1e-10);
    }
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS(kl_gaussian(steady_covariance(0.5, 1.0, 3),
                             steady_covariance(0.5, 1.0, 4)));
  }
  SUBCASE("singular covariance raises a numeric error with a diagnostic") {
    CovMatrix degenerate;
    degenerate.entries = Eigen::MatrixXd::Ones(3, 3);  // rank one
    const CovMatrix s = steady_covariance(0.5, 1.0, 3);
    try {
      kl_gaussian(s, degenerate);
      FAIL("expected a numeric error");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find("condition") != std::string::npos);
    }
  }
}

TEST_CASE("closed-form trace and determinant match dense evaluation on the grid") {
  for (double a : kGainGrid) {
    for (double b : kGainGrid) {
      for (int n : kSizeGrid) {
        const CovMatrix sa = steady_covariance(a, 1.0, n);
        const CovMatrix sb = steady_covariance(b, 1.0, n);
        const Eigen::LLT<Eigen::MatrixXd> llt(sb.entries);
        REQUIRE(llt.info() == Eigen::Success);
        const double dense_trace = llt.solve(sa.entries).trace();
        const double closed_trace = trace_ratio_closed_form(a, b, n);
        CHECK(std::abs(dense_trace - closed_trace) <=
              1e-9 * std::max(1.0, std::abs(closed_trace)));
      }
    }
  }
  for (double a : kGainGrid) {
    for (double sigma : {0.7, 1.0, 1.4}) {
      for (int n : kSizeGrid) {
        const CovMatrix s = steady_covariance(a, sigma, n);
        const Eigen::LLT<Eigen::MatrixXd> llt(s.entries);
        REQUIRE(llt.info() == Eigen::Success);
        const double dense_logdet =
            2.0 * llt.matrixLLT().diagonal().array().log().sum();
        const double closed = steady_det_closed_form(a, sigma, n);
        CHECK(std::abs(dense_logdet - std::log(closed)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("trace ratio special cases") {
  for (int n : {1, 2, 7}) {
    CHECK(trace_ratio_closed_form(0.4, 0.4, n) == doctest::Approx(n));
  }
  CHECK(trace_ratio_closed_form(0.3, 0.5, 1) ==
        doctest::Approx((1.0 - 0.25) / (1.0 - 0.09)));
  CHECK(trace_ratio_closed_form(0.3, 0.5, 4) ==
        doctest::Approx(3.6 / 0.91));
}

TEST_CASE("kl_gain_change agrees with the dense divergence") {
  SUBCASE("a=b is zero") {
    CHECK(kl_gain_change(0.4, 0.4, 6) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(kl_gain_change(0.0, 0.0, 3) == 0.0);
  }
  SUBCASE("reference point a=0.3 b=0.5 n=4") {
    const double direct = kl_gaussian(steady_covariance(0.3, 1.0, 4),
                                      steady_covariance(0.5, 1.0, 4));
    CHECK(std::abs(kl_gain_change(0.3, 0.5, 4) - direct) <= 1e-9);
  }
  SUBCASE("20 random admissible parameter sets") {
    SplitMix64 rng(2718);
    for (int i = 0; i < 20; ++i) {
      const double a = (rng.next_unit_open() < 0.5 ? -1.0 : 1.0) *
                       (0.05 + 0.85 * rng.next_unit_open());
      const double b = (rng.next_unit_open() < 0.5 ? -1.0 : 1.0) *
                       (0.05 + 0.85 * rng.next_unit_open());
      const int n = 1 + static_cast<int>(rng.next_below(30));
      const double direct = kl_gaussian(steady_covariance(a, 1.0, n),
                                        steady_covariance(b, 1.0, n));
      CHECK(std::abs(kl_gain_change(a, b, n) - direct) <=
            1e-9 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST_CASE("kl_reset value and reset-position independence") {
  CHECK(kl_reset(0.0) == 0.0);
  CHECK(kl_reset(0.6) == doctest::Approx(0.5 * std::log(1.0 / 0.64)));
  const double a = 0.8;
  const int n = 6;
  const CovMatrix steady = steady_covariance(a, 1.0, n);
  for (int tau = 1; tau <= 5; ++tau) {
    const double direct = kl_gaussian(steady, reset_covariance(a, 1.0, n, tau));
    CHECK(std::abs(direct - kl_reset(a)) <= 1e-9);
  }
}

TEST_CASE("closed-form divergence upper-bounds the reset-time mixture") {
  // When the reset position is uniform, the observable alternative is a
  // mixture over positions; its divergence from the stationary law is at
  // most the per-position value kl_reset(a). Monte Carlo estimate of
  // E_P[log p - log q_mix] with exact Gaussian densities.
  const double a = 0.6;
  const int n = 6;
  const CovMatrix steady = steady_covariance(a, 1.0, n);
  const Eigen::LLT<Eigen::MatrixXd> chol_p(steady.entries);
  const double logdet_p =
      2.0 * chol_p.matrixLLT().diagonal().array().log().sum();

  struct Component {
    Eigen::LLT<Eigen::MatrixXd> chol;
    double logdet;
  };
  std::vector<Component> mix;
  for (int tau = 1; tau <= n - 1; ++tau) {
    const CovMatrix r = reset_covariance(a, 1.0, n, tau);
    Eigen::LLT<Eigen::MatrixXd> llt(r.entries);
    const double ld = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    mix.push_back({std::move(llt), ld});
  }

  SplitMix64 rng(616);
  const long trials = 20000;
  double sum = 0.0, sum_sq = 0.0;
  Eigen::VectorXd z(n);
  for (long i = 0; i < trials; ++i) {
    for (int k = 0; k < n; ++k) z(k) = rng.next_gaussian(1.0);
    const Eigen::VectorXd x = chol_p.matrixL() * z;
    const double log_p = -0.5 * (logdet_p + x.dot(chol_p.solve(x)));
    double q_mix = 0.0;
    for (const Component& c : mix) {
      q_mix += std::exp(-0.5 * (c.logdet + x.dot(c.chol.solve(x))));
    }
    const double v = log_p - std::log(q_mix / mix.size());
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / trials;
  const double se =
      std::sqrt((sum_sq / trials - mean * mean) / static_cast<double>(trials));
  CHECK(mean <= kl_reset(a) + 3.0 * se);
  CHECK(mean >= -3.0 * se);  // divergences are nonnegative
}

TEST_CASE("bound_report") {
  SUBCASE("zero divergence") {
    const BoundReport r = bound_report(0.0);
    CHECK(r.tv_upper == 0.0);
    CHECK(r.error_sum_lower == 1.0);
  }
  SUBCASE("clipped at kl=2") {
    const BoundReport r = bound_report(2.0);
    CHECK(r.tv_upper == 1.0);
    CHECK(r.error_sum_lower == 0.0);
  }
  SUBCASE("kl=0.08") {
    const BoundReport r = bound_report(0.08);
    CHECK(r.tv_upper == doctest::Approx(0.2));
    CHECK(r.error_sum_lower == doctest::Approx(0.8));
  }
  SUBCASE("outputs stay in [0,1] for large kl") {
    for (double kl : {0.0, 0.5, 2.0, 100.0}) {
      const BoundReport r = bound_report(kl);
      CHECK(r.tv_upper >= 0.0);
      CHECK(r.tv_upper <= 1.0);
      CHECK(r.error_sum_lower >= 0.0);
      CHECK(r.error_sum_lower <= 1.0);
    }
  }
  CHECK_THROWS_AS(bound_report(-0.1), std::domain_error);
}

TEST_CASE("covert gain bound for the gain-change law") {
  CHECK(covert_gain_bound_gain_change(0.0, 2.0) < 1.0);
  CHECK(covert_gain_bound_gain_change(0.3, 0.2) == doctest::Approx(0.4739).epsilon(2e-4));
  CHECK(covert_gain_bound_gain_change(0.3, 0.2) ==
        doctest::Approx(std::sqrt(1.0 - 0.91 * std::exp(-0.16))).epsilon(1e-12));
  // the covertness guarantee holds at admissible (a, b, n, eps)
  const double a = 0.3, eps = 0.2;
  const double b = 0.95 * covert_gain_bound_gain_change(a, eps);
  const int n = 4;
  REQUIRE(n < 2.0 * b / (b - a));
  const double kl = kl_gain_change(a, b, n);
  CHECK(1.0 - std::sqrt(kl / 2.0) >= 1.0 - eps);
}

TEST_CASE("covert gain bound for the reset law") {
  CHECK(covert_gain_bound_reset(0.5, LogBase::Two) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(covert_gain_bound_reset(0.5, LogBase::Natural) ==
        doctest::Approx(std::sqrt(1.0 - std::exp(-1.0))).epsilon(1e-12));
  for (LogBase base : {LogBase::Natural, LogBase::Two}) {
    CHECK(covert_gain_bound_reset(1e-9, base) == doctest::Approx(0.0).epsilon(1e-3));
  }
  // consistency: at a = bound(eps, Natural), kl_reset gives back eps
  const double eps = 0.3;
  const double a = covert_gain_bound_reset(eps, LogBase::Natural);
  CHECK(std::sqrt(kl_reset(a) / 2.0) == doctest::Approx(eps).epsilon(1e-12));
}

TEST_CASE("detection gain threshold") {
  CHECK(detection_gain_threshold(0.5) == doctest::Approx(0.9816).epsilon(1e-3));
  double prev = detection_gain_threshold(0.1);
  for (double d : {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
    const double cur = detection_gain_threshold(d);
    CHECK(cur < prev);
    CHECK(cur >= 0.0);
    CHECK(cur < 1.0);
    prev = cur;
  }
  CHECK_THROWS_AS(detection_gain_threshold(0.0), std::domain_error);
  CHECK_THROWS_AS(detection_gain_threshold(1.0), std::domain_error);
}

TEST_CASE("k0 for the channel energy test") {
  CHECK(k0_control_energy(1.0, 0.1) == doctest::Approx(298.56).epsilon(1e-4));
  CHECK(k0_control_energy(1.0, 0.1) ==
        doctest::Approx(40.0 * std::pow(1.0 + std::sqrt(3.0), 2)).epsilon(1e-12));
  SUBCASE("halving delta doubles the window") {
    CHECK(k0_control_energy(1.0, 0.05) ==
          doctest::Approx(2.0 * k0_control_energy(1.0, 0.1)).epsilon(1e-12));
  }
  SUBCASE("large-snr asymptote 8/(delta snr)") {
    const double snr = 1e3, delta = 0.1;
    const double k0 = k0_control_energy(snr, delta);
    CHECK(k0 == doctest::Approx(8.0 / (delta * snr)).epsilon(0.1));
  }
}

TEST_CASE("k0 for the residual energy test") {
  SUBCASE("uniform noise reference point") {
    const ResidualWindow w = k0_residual_energy(1.0, 1.0 / 3.0, 1.0 / 5.0, 0.1);
    CHECK(w.k0 == doctest::Approx(400.0 / 9.0).epsilon(1e-12));
    CHECK(w.k0_upper >= w.k0);
  }
  SUBCASE("degenerate noise drops the second radical") {
    const double sigma2 = 0.5;
    const ResidualWindow w = k0_residual_energy(2.0, sigma2, sigma2 * sigma2, 0.2);
    CHECK(w.k0 == doctest::Approx((4.0 * 2.0 * sigma2) / 0.1 / 4.0).epsilon(1e-12));
  }
  SUBCASE("k0 <= compact bound on a random grid") {
    SplitMix64 rng(11);
    for (int i = 0; i < 100; ++i) {
      const double e_u = 0.1 + 3.0 * rng.next_unit_open();
      const double sigma2 = 0.1 + rng.next_unit_open();
      const double m4 = sigma2 * sigma2 * (1.0 + 2.0 * rng.next_unit_open());
      const double delta = 0.02 + 0.5 * rng.next_unit_open();
      const ResidualWindow w = k0_residual_energy(e_u, sigma2, m4, delta);
      CHECK(w.k0 <= w.k0_upper * (1.0 + 1e-12));
    }
  }
  CHECK_THROWS_AS(k0_residual_energy(1.0, 1.0, 0.5, 0.1), std::domain_error);
}

TEST_CASE("n0 for the magnitude test") {
  const double n0 = n0_magnitude(2.0, 1.0, 10.0, 0.1);
  CHECK(n0 == doctest::Approx(8.11).epsilon(0.01));
  SUBCASE("monotone in m") {
    CHECK(n0_magnitude(2.0, 1.0, 20.0, 0.1) > n0);
  }
  SUBCASE("larger |a| needs less time") {
    double prev = n0_magnitude(1.2, 1.0, 10.0, 0.1);
    for (double a : {1.5, 2.0, 3.0, 5.0}) {
      const double cur = n0_magnitude(a, 1.0, 10.0, 0.1);
      CHECK(cur < prev);
      prev = cur;
    }
  }
  CHECK_THROWS_AS(n0_magnitude(0.9, 1.0, 10.0, 0.1), std::domain_error);
}
