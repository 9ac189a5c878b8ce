#pragma once

#include <gmpxx.h>

#include <vector>

#include "hecklab/complexval.hpp"
#include "hecklab/precision.hpp"

namespace hecklab::specfun {

// Exact Bernoulli number B_{2j} (B_2 = 1/6, B_4 = -1/30, ...), cached.
const mpq_class& bernoulli2(long j);

// Exact-value conversions at the current working precision.
Real real_from_mpq(const mpq_class& q);
Real real_from_mpz(const mpz_class& z);

// n! as a Real (exact below the current precision's integer range).
Real factorial_real(long n);

// Complex gamma function. Throws PoleError when s is within
// 10 * target_eps of a non-positive integer.
ValueWithError gamma(const Complex& s, const Precision& prec);

// Principal log-gamma via Stirling with recurrence shift; the branch is the
// one continuous on the shifted half-plane (standard principal values for
// Re(s) > 0).
Complex log_gamma(const Complex& s, const Precision& prec);

// Reciprocal gamma 1/Gamma(s); entire, exactly zero at non-positive
// integers (through the reflection sin(pi s) Gamma(1-s) / pi).
Complex reciprocal_gamma(const Complex& s, const Precision& prec);

// Upper incomplete gamma Gamma(s, x) for complex s and real x > 0.
ValueWithError upper_incomplete_gamma(const Complex& s, const Real& x, const Precision& prec);

// Confluent hypergeometric 1F1(a; c; z). Applies the Kummer reflection
// e^z 1F1(c-a; c; -z) when Re(z) < 0 so the series is evaluated on its
// stable side. Throws PoleError when c is within 10 * target_eps of a
// non-positive integer.
ValueWithError hyp1f1(const Complex& a, const Complex& c, const Complex& z, const Precision& prec);

// Gauss hypergeometric 2F1(a, b; c; z) by the defining series; requires
// |z| < 1 with margin, otherwise DomainError.
ValueWithError hyp2f1(const Complex& a, const Complex& b, const Complex& c, const Complex& z,
                      const Precision& prec);

enum class BesselKind { J, I, K };

// Bessel function of real order nu and complex argument z. K requires
// nu >= 0; J and I require nu > -1 (series normalization).
ValueWithError bessel(BesselKind kind, const Real& nu, const Complex& z, const Precision& prec);

// Normalized Bessel values (z/2)^{-nu} J_nu(z) and (z/2)^{-nu} I_nu(z),
// entire in z^2; at z = 0 both equal 1/Gamma(nu+1).
ValueWithError bessel_j_scaled(const Real& nu, const Complex& z, const Precision& prec);
ValueWithError bessel_i_scaled(const Real& nu, const Complex& z, const Precision& prec);

// Euler-Maclaurin Hurwitz zeta, complex s (s != 1), real shift a > 0.
ValueWithError hurwitz_zeta_em(const Complex& s, const Real& a, const Precision& prec);

// Euler-Maclaurin Riemann zeta, complex s != 1.
ValueWithError zeta_em(const Complex& s, const Precision& prec);

// Gauss-Legendre rule on [-1, 1]; nodes/weights computed at `bits` precision
// and cached per (order, bits).
struct GaussLegendre {
  std::vector<Real> node;
  std::vector<Real> weight;
};
const GaussLegendre& gauss_legendre(int order, long bits);

}  // namespace hecklab::specfun
