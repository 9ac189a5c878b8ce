#pragma once

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hecklab/coeffs.hpp"
#include "hecklab/complexval.hpp"
#include "hecklab/precision.hpp"

namespace hecklab::hecke {

using coeffs::StreamPtr;

enum class FamilyKind {
  ZetaAlpha,       // sum r_alpha(n) (pi n)^{-s}
  ZetaAlphaStar,   // alternating variant, dual supported on n + alpha/4
  Epstein,         // binary quadratic form zeta function
  EpsteinExp,      // Epstein series twisted by exp(-2 pi i p n / q)
  CharK,           // L-function of chi summed over k squares
  CharKExp,        // CharK twisted by exp(-i pi p n / q)
  Cusp,            // level-one cusp form of even weight k
  CuspTwist,       // cusp form twisted by exp(2 pi i p n / q)
  Custom,          // built programmatically; not constructible from text
};

// Parsed form of a family descriptor string such as
//   zeta-alpha:alpha=2.5
//   epstein-exp:A=1,B=0,C=1,p=1,q=3
//   char-k:q=5,parity=even,k=1
//   cusp-twist:name=tau,k=12,p=1,q=5
// Unknown keys and malformed values raise DescriptorError.
struct FamilyDescriptor {
  FamilyKind kind = FamilyKind::ZetaAlpha;
  mpq_class alpha{1};
  long A = 1, B = 0, C = 1;   // quadratic form coefficients
  long p = 0, q = 1;          // exponential twist p/q
  long char_q = 1;            // character modulus
  int parity = 0;             // 0 even, 1 odd
  long char_index = -1;       // index into characters_mod; -1 = first primitive of parity
  long k = 1;                 // number of squares / cusp form weight
  std::string name = "tau";   // built-in cusp form coefficient stream

  static FamilyDescriptor parse(const std::string& text);
  std::string text() const;
};

const char* family_name(FamilyKind kind);

// lambda_n = scale * (n + offset) for n >= first.
struct IndexSequence {
  long first = 1;
  mpq_class offset{0};
};

// A pair of Dirichlet series phi(s) = sum a(n) lambda_n^{-s} and
// psi(s) = sum b(n) mu_n^{-s} linked by
//   Gamma(s) phi(s) = omega * Gamma(r - s) psi(r - s).
// rho is the residue of phi at s = r; rho_star is the residue of the
// effective dual omega * psi there.  The constants satisfy
//   phi(0) = -rho_star * Gamma(r),   omega * psi(0) = -rho * Gamma(r),
// which the evaluators use to eliminate the dual constants.
//
// Both abscissas have the exact form
// pi * (num/den) / sqrt(sqrt_part) * (n + offset), with separate scale
// parts for the lambda and mu sides (equal for every built-in family).
// Streams hold raw coefficients; a_mult/b_mult are constant prefactors.
// All transcendental constants are computed at build_bits working bits;
// evaluating a pair at a higher working precision raises UsageError.
struct HeckePair {
  FamilyDescriptor family;
  mpq_class r;
  mpq_class scale_rat{1};
  long scale_sqrt = 1;
  mpq_class mu_scale_rat{1};
  long mu_scale_sqrt = 1;
  IndexSequence lambda_seq;
  IndexSequence mu_seq;
  StreamPtr a_coeffs;
  StreamPtr b_coeffs;
  Complex a_mult;
  Complex b_mult;
  Complex omega;
  Complex rho;
  Complex rho_star;
  Complex phi0;
  mpq_class sigma_a{1};
  mpq_class sigma_b{1};
  bool self_dual_real = false;
  // b(n) = conj(a(n)) with identical abscissas; enables the reflected series
  // to be folded into a conjugate on the critical line.
  bool dual_is_conjugate = false;
  long build_bits = 0;
  std::optional<coeffs::DirichletCharacter> chi;
  int delta = 0;

  Real r_value() const;
  Real scale() const;     // lambda-side scale at the current working precision
  Real mu_scale() const;
  Real lambda(long n) const;
  Real mu(long n) const;
  Complex a(long n) const;
  Complex b(long n) const;
  // Dual coefficient with the root number absorbed, so that
  // psi_eff(s) = sum b_eff(n) mu_n^{-s} satisfies
  // Gamma(s) phi(s) = Gamma(r - s) psi_eff(r - s).
  Complex b_eff(long n) const;
  long a_first() const { return lambda_seq.first; }
  long b_first() const { return mu_seq.first; }
  void require_build_precision(const Precision& prec) const;
};

HeckePair build_pair(const FamilyDescriptor& desc, const Precision& prec);
HeckePair build_pair(const std::string& descriptor, const Precision& prec);
// Cusp family with caller-supplied coefficients (index 1 = first coefficient).
HeckePair build_pair(const FamilyDescriptor& desc, StreamPtr cusp_coeffs,
                     const Precision& prec);

// Coefficient adapters.  Values of the non-exact adapters are produced at
// the working precision current when they are read.
StreamPtr alternating_stream(StreamPtr base);                    // (-1)^n a(n)
StreamPtr twist_stream(StreamPtr base, long num, long den);      // e^{2 pi i num n / den} a(n)
StreamPtr character_stream(const coeffs::DirichletCharacter& chi);  // chi(n)
// Collapse m -> m^2: value at n = m^2 is a(m) m^delta, zero off squares.
StreamPtr square_support_stream(StreamPtr base, int delta);

// Maps a series pair satisfying the symmetric-form equation
//   Gamma((s + delta)/2) phi(s) = Gamma((1 + delta - s)/2) psi(1 - s)
// with lambda_m = sqrt(pi * lambda2_rat) * m, mu_m = sqrt(pi * mu2_rat) * m
// and residue rho of phi at s = 1, to an equivalent HeckePair under
// s -> 2s - delta.  The image has r = 1/2 + delta, square-supported
// abscissas lambda'_n = pi * lambda2_rat * n, residue rho/2 when delta = 0
// (entire image when delta = 1), and phi(0) derived from rho_star, the
// residue of psi at s = 1 (equal to rho in the symmetric cases).
HeckePair bochner_to_hecke(const mpq_class& lambda2_rat, StreamPtr a_coeffs,
                           const Complex& a_mult, const mpq_class& mu2_rat,
                           StreamPtr b_coeffs, const Complex& b_mult,
                           int delta, const Complex& rho,
                           const Complex& rho_star, const Precision& prec);
// Symmetric convenience form: unit prefactors, rho_star = rho.
HeckePair bochner_to_hecke(const mpq_class& lambda2_rat, StreamPtr a_coeffs,
                           const mpq_class& mu2_rat, StreamPtr b_coeffs,
                           int delta, const Complex& rho,
                           const Precision& prec);

// Entire-part bracket
//   Gamma(s) phi(s) - phi(0)/s * X^s ... expressed as the two-sided
// incomplete-gamma split at the point X > 0:
//   eval_eta = sum_n a(n) Gamma(s, lambda_n X) lambda_n^{-s}
//            + omega * sum_n b(n) Gamma(r - s, mu_n / X) mu_n^{-(r-s)}
//            + phi(0) X^s / s + rho Gamma(r) X^{s-r} / (s - r),
// valid for every s where the right side is finite.  The value equals
// Gamma(s) phi(s) independently of X.
ValueWithError eval_eta(const HeckePair& pair, const Complex& s,
                        const Precision& prec, const Real& split_x);
ValueWithError eval_eta(const HeckePair& pair, const Complex& s,
                        const Precision& prec);

// Same bracket for the omega-absorbed dual series psi_eff.
ValueWithError eval_eta_dual(const HeckePair& pair, const Complex& s,
                             const Precision& prec, const Real& split_x);

// eval_eta at s = r/2 + i t with the split point fixed at 1; pairs whose
// dual is the conjugate stream fold the reflected series into a conjugate.
ValueWithError eval_eta_line(const HeckePair& pair, const Real& t,
                             const Precision& prec);

// phi(s) by analytic continuation; PoleError within 10 * target_eps of an
// actual pole (s = r when rho != 0, s = 0 when phi(0) != 0).
ValueWithError eval_phi(const HeckePair& pair, const Complex& s,
                        const Precision& prec, const Real& split_x);
ValueWithError eval_phi(const HeckePair& pair, const Complex& s,
                        const Precision& prec);

// | Gamma(s) phi(s) - omega Gamma(r-s) psi(r-s) | / | Gamma(s) phi(s) |,
// with the two sides evaluated through independent split points.
Real functional_equation_residual(const HeckePair& pair, const Complex& s,
                                  const Precision& prec);

// Smallest index N such that the bound
//   C * (N + offset)^kappa * Gamma(sigma, lambda_N * X) / lambda_N^sigma,
// corrected by a geometric tail estimate, falls below eps.  Raises
// TruncationError if no such N below the internal cap exists.
long truncation_index(const Real& growth_c, const Real& growth_kappa,
                      const Real& scale, const mpq_class& offset, long first,
                      const Real& sigma, const Real& split_x, const Real& eps,
                      const Precision& prec);

}  // namespace hecklab::hecke
