#pragma once

#include <gmpxx.h>

#include <memory>
#include <mutex>
#include <vector>

#include "hecklab/complexval.hpp"
#include "hecklab/precision.hpp"

namespace hecklab::coeffs {

// Append-only coefficient cache with doubling growth. Indices run from
// first_index() upward. ensure() may reallocate; at()/exact_at() are safe
// to call concurrently only for indices already ensured.
class CoefficientStream {
 public:
  virtual ~CoefficientStream() = default;

  long first_index() const { return first_; }
  // Declared growth bound |a(n)| <= growth_C * max(n,1)^growth_kappa,
  // used by truncation solvers and checked against data in tests.
  const Real& growth_kappa() const { return kappa_; }
  const Real& growth_C() const { return cbound_; }

  void ensure(long n);
  long limit() const;  // exclusive upper bound of the cached range

  Complex at(long n) const;
  bool is_exact() const { return exact_; }
  const mpq_class& exact_at(long n) const;

 protected:
  CoefficientStream(long first, Real kappa, Real cbound, bool exact)
      : first_(first), kappa_(std::move(kappa)), cbound_(std::move(cbound)), exact_(exact) {}

  // Grow the value storage so indices [first_, target) are present.
  virtual void extend_to(long target) = 0;
  virtual Complex get(long n) const = 0;
  virtual const mpq_class& get_exact(long n) const;

  long first_ = 1;
  Real kappa_;
  Real cbound_;
  bool exact_ = false;
  mutable std::mutex mu_;
  long limit_ = 0;
};

using StreamPtr = std::shared_ptr<CoefficientStream>;

// Sum-of-squares counts weighted by a power of theta: coefficients of
// theta3^alpha = 1 + sum_{n>=1} r_alpha(n) u^n, alpha rational > 0.
// Exact rationals; integers when alpha is an integer.
StreamPtr r_alpha_stream(const mpq_class& alpha);

// Alternating companion: coefficients r~_alpha(n), n >= 0, defined by
// theta2^alpha = 2^alpha u^{alpha/4} sum_{n>=0} r~_alpha(n) u^n.
// Exact when alpha is an integer (the 2^alpha factor folds in).
StreamPtr r_tilde_alpha_stream(const mpq_class& alpha);

// Representation counts r_Q(n) of the positive definite form
// Q(m,k) = A m^2 + B m k + C k^2 (integer coefficients, 4AC - B^2 > 0).
StreamPtr quadratic_reps(long A, long B, long C);

// Ramanujan tau(n) from the 24th power of the pentagonal-number series.
StreamPtr tau_stream();

// Dirichlet character mod q with exact root-of-unity values:
// value(n) = e^{2 pi i exps[n % q] / order}, exps entry -1 meaning 0.
struct DirichletCharacter {
  long q = 1;
  long index = 0;  // position within characters_mod(q)
  long order = 1;
  std::vector<long> exps;
  bool primitive = true;
  long conductor = 1;
  int parity = 0;  // chi(-1) = (-1)^parity

  bool is_real() const { return order <= 2; }
  Complex value(long n) const;  // at the current working precision
  DirichletCharacter conjugate() const;
};

// All characters mod q in a deterministic order (mixed-radix over the
// cyclic decomposition of (Z/q)^*; index 0 is principal).
std::vector<DirichletCharacter> characters_mod(long q);
DirichletCharacter character(long q, long index);

// The `which`-th primitive character of the given parity mod q (ordered by
// enumeration index). DomainError when there is none.
DirichletCharacter primitive_character(long q, int parity, long which = 0);

ValueWithError gauss_sum(const DirichletCharacter& chi, const Precision& prec);

// r_{k,chi}(n) = sum over (n_1,...,n_k) in Z^k with sum n_i^2 = n of
// prod chi(n_i) n_i^delta, delta = chi.parity. Values held at 2x the
// requested working precision.
StreamPtr r_k_chi_stream(const DirichletCharacter& chi, long k, const Precision& prec);

// Dual coefficients of the exponentially twisted Epstein series:
// b~_Q(n, p/q) = (1/q) sum_{Q(alpha,beta)=n} sum_{k1,k2 mod q}
//   e^{-2 pi i p Q(k1,k2)/q + 2 pi i (alpha k1 + beta k2)/q}.
StreamPtr epstein_exp_dual_stream(long A, long B, long C, long p, long q, const Precision& prec);

// G_Q = sum_{k1,k2 mod q} e^{-2 pi i p Q(k1,k2)/q}.
Complex epstein_gauss_term(long A, long B, long C, long p, long q, const Precision& prec);

// Dual coefficients of the exponentially twisted character series:
// (2q)^{-k/2} sum_{sum n_i^2 = n} prod n_i^delta S(n_i) with
// S(t) = sum_{r mod 2q} chi(r) e^{i pi (-p r^2 + t r)/q}. The global
// (-i)^{delta k} factor is left to the caller.
StreamPtr char_exp_dual_stream(const DirichletCharacter& chi, long k, long p, long q,
                               const Precision& prec);

// Dispatch aliases for the two exponentially twisted dual streams.
StreamPtr exp_dual_stream(long A, long B, long C, long p, long q, const Precision& prec);
StreamPtr exp_dual_stream(const DirichletCharacter& chi, long k, long p, long q,
                          const Precision& prec);

}  // namespace hecklab::coeffs
