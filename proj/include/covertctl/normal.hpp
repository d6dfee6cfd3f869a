// Standard normal tail probability and its inverse.
#pragma once

namespace covertctl {

/// Standard normal density at x.
double normal_pdf(double x);

/// Upper tail probability Q(x) = P(N(0,1) > x).
double q_function(double x);

/// Inverse of q_function on (0, 1): Q(q_inverse(p)) = p.
/// Rational initial guess refined by Newton iterations on log Q;
/// accurate to ~1e-14 relative over the representable range.
/// Throws std::domain_error unless 0 < p < 1.
double q_inverse(double p);

}  // namespace covertctl
