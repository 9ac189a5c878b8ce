#pragma once

#include <vector>

#include "hecklab/complexval.hpp"
#include "hecklab/hecke.hpp"
#include "hecklab/precision.hpp"

namespace hecklab::theta {

struct ThetaValue {
  Complex value;
  Real err;
  long n_used = 0;
};

// Phi(x, y) = Gamma(r) sum_n a(n) e^{-lambda_n x} Jn_{r-1}(sqrt(lambda_n) y)
// where Jn_nu(w) = (w/2)^{-nu} J_nu(w) is the power-normalized Bessel
// factor, so Phi(x, 0) is the plain exponential sum.  Requires Re x > 0.
ThetaValue theta_phi(const hecke::HeckePair& pair, const Complex& x, const Complex& y,
                     const Precision& prec);
// Same sum over the omega-absorbed dual side (b_eff, mu).
ThetaValue theta_phi_dual(const hecke::HeckePair& pair, const Complex& x, const Complex& y,
                          const Precision& prec);

// psi(x, z) = Phi(x, sqrt(x) z), the self-referencing normalization whose
// reflection sends x -> 1/x at fixed z.
ThetaValue psi_jacobi(const hecke::HeckePair& pair, const Complex& x, const Complex& z,
                      const Precision& prec);
ThetaValue psi_jacobi_dual(const hecke::HeckePair& pair, const Complex& x, const Complex& z,
                           const Precision& prec);

// (1/2pi) int_{-T}^{T} eta(r/2 + it) 1F1(r/2 + it; r; -z^2/4) x^{-it} dt
// over width-1 Gauss-Legendre panels evaluated at two orders; the err field
// carries the inter-order disagreement plus the truncated tail estimate.
// Equals x^{r/2} psi(x, z) - rho Gamma(r) x^{-r/2} e^{-z^2/4} for real
// x > 0 once T covers the decay of the integrand.
ValueWithError integral_representation(const hecke::HeckePair& pair, const Real& x,
                                       const Complex& z, const Precision& prec, const Real& T);
// Cutoff at which the integrand tail drops below the target accuracy.
Real default_integral_cutoff(const hecke::HeckePair& pair, const Real& x, const Complex& z,
                             const Precision& prec);

struct DecayPoint {
  Real delta;
  Real abs_r;
};

// |R(delta)| for the family-specific reflected series representing the
// boundary remainder at x = i + delta; supported for the zeta-alpha,
// epstein (square discriminant), char-k, and cusp-twist families.
std::vector<DecayPoint> boundary_decay(const hecke::HeckePair& pair, const Complex& z,
                                       const std::vector<Real>& deltas, const Precision& prec);

// Least-squares fit of ln|R| = c0 - slope / delta + c2 ln delta; returns slope.
Real fit_decay_slope(const std::vector<DecayPoint>& points);

}  // namespace hecklab::theta
