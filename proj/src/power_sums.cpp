#include "hecklab/power_sums.hpp"

#include <cstddef>
#include <vector>

#include "hecklab/specfun.hpp"

namespace hecklab::power_sums {
namespace {

// (base)^{-s} for base > 0 through the real logarithm.
Complex real_base_pow(const Real& base, const Complex& minus_s_times, const Complex& s) {
  (void)minus_s_times;
  Real lb = log(base);
  return exp(Complex(-(s.re * lb), -(s.im * lb)));
}

// Integral over [u0, inf) of (u^2 + x^2)^{-s} du, valid for u0 > x and
// Re(2s) > 1.  Expands (1 + v^{-2})^{-s} termwise after v = u/x.
Complex tail_integral(const Complex& s, const Real& u0, const Real& x, const Real& eps,
                      Real* err_out) {
  Real w = u0 / x;
  Complex one_minus_2s = Complex(Real(1L) - 2 * s.re, -2 * s.im);
  // term_k = (-1)^k (s)_k / k! * w^{1-2s-2k} / (2s + 2k - 1)
  Complex wpow = exp(log(Complex(w, Real(0L))) * one_minus_2s);  // w real > 1
  Complex poch(Real(1L), Real(0L));                              // (s)_k
  Real kfact(1L);
  Real w2 = w * w;
  Complex acc(Real(0L), Real(0L));
  Real sign(1L);
  Real err(0L);
  bool converged = false;
  for (long k = 0; k < 400; ++k) {
    Complex denom = 2 * s + Real(2 * k - 1);
    if (abs(denom) < Real::pow2(-20))
      throw DomainError("power sum tail integral: exponent confluence at 2s+2k-1 = 0");
    Complex term = (poch / kfact) * wpow / denom * sign;
    acc = acc + term;
    Real mag = abs(term);
    if (mag < eps * (Real(1L) + abs(acc))) {
      err = mag;
      converged = true;
      break;
    }
    poch = poch * (s + Real(k));
    kfact = kfact * Real(k + 1);
    wpow = wpow / w2;
    sign = -sign;
  }
  if (!converged) throw TruncationError("power sum tail integral did not converge");
  Complex xpow = exp(log(Complex(x, Real(0L))) * one_minus_2s);
  if (err_out) *err_out = err * abs(xpow);
  return xpow * acc;
}

struct TailResult {
  Complex value;
  Real err;
  bool ok;
};

// Euler-Maclaurin tail over m >= M of ((u0 + h m)^2 + x^2)^{-s} for a fixed
// start index; fails (ok = false) when the correction terms stop decaying
// before reaching the target, in which case the caller moves M outward.
TailResult em_tail_at(const Complex& s, const Real& u0, const Real& h, const Real& x, long M,
                      const Real& eps) {
  const long j_max = 48;
  Real uM = u0 + h * Real(M);
  Real base = uM * uM + x * x;

  Real int_err(0L);
  Complex integral = tail_integral(s, uM, x, eps, &int_err) / h;
  Complex gM = real_base_pow(base, Complex(), s);
  Complex acc = integral + gM / Real(2L);
  Real scale = abs(acc) + Real::pow2(-8);

  // P_l = (s)_l (uM + i x)^{-s-l}, Q_l the conjugate-argument mirror.
  const long l_max = 2 * j_max;
  std::vector<Complex> P(static_cast<std::size_t>(l_max) + 1), Q(P.size());
  Complex zp(uM, x), zq(uM, -x);
  P[0] = exp(log(zp) * (Complex(Real(0L), Real(0L)) - s));
  Q[0] = exp(log(zq) * (Complex(Real(0L), Real(0L)) - s));
  for (long l = 0; l < l_max; ++l) {
    Complex sl = s + Real(l);
    P[static_cast<std::size_t>(l) + 1] = P[static_cast<std::size_t>(l)] * sl / zp;
    Q[static_cast<std::size_t>(l) + 1] = Q[static_cast<std::size_t>(l)] * sl / zq;
  }

  // binom(m, l) held exactly in Real; orders stay below 2^100 for m <= 96.
  std::vector<Real> binom(static_cast<std::size_t>(l_max) + 1, Real(0L));
  binom[0] = Real(1L);
  long m_cur = 0;

  auto advance_binoms = [&](long m_target) {
    while (m_cur < m_target) {
      ++m_cur;
      for (long l = m_cur; l >= 1; --l)
        binom[static_cast<std::size_t>(l)] =
            binom[static_cast<std::size_t>(l)] + binom[static_cast<std::size_t>(l) - 1];
    }
  };

  Real hpow = h;  // h^{2j-1}
  Real h2 = h * h;
  Real best(0L);
  bool have_best = false;
  Real last_mag(0L);
  for (long j = 1; j <= j_max; ++j) {
    long m = 2 * j - 1;
    advance_binoms(m);
    Complex deriv(Real(0L), Real(0L));
    for (long l = 0; l <= m; ++l)
      deriv = deriv + binom[static_cast<std::size_t>(l)] * P[static_cast<std::size_t>(l)] *
                          Q[static_cast<std::size_t>(m - l)];
    // (-1)^m with m odd gives the u-derivative; the tail correction then
    // enters as -B_{2j}/(2j)! g^{(2j-1)}(M), so the two signs cancel.
    Real b2j = specfun::real_from_mpq(specfun::bernoulli2(j));
    Complex term = deriv * (hpow * b2j / specfun::factorial_real(2 * j));
    acc = acc + term;
    Real mag = abs(term);
    if (mag < eps * scale) return {acc, int_err + mag + eps * scale, true};
    if (have_best && mag > best * Real(4L) && mag > last_mag) {
      return {acc, best, false};  // asymptotic divergence before target
    }
    if (!have_best || mag < best) {
      best = mag;
      have_best = true;
    }
    last_mag = mag;
    hpow = hpow * h2;
  }
  return {acc, best, false};
}

}  // namespace

ValueWithError quadratic_tail(const Complex& s, const Real& u0, const Real& h, const Real& width,
                              const Precision& prec) {
  PrecisionScope scope(prec.working_bits + 48);
  const long wbt = current_bits();
  Real eps = Real::pow2(-(prec.working_bits + 16));
  if (!(width > Real(0L))) throw DomainError("quadratic_tail: width must be positive");
  if (!(h > Real(0L))) throw DomainError("quadratic_tail: step must be positive");

  // Start the analytic tail where |u| comfortably exceeds both the width and
  // the EM divergence scale; grow it if the correction series stalls.
  Real smag = abs(s);
  Real u_min = max(Real(3L) * width, width * sqrt(2 * smag + Real(4L)));
  u_min = max(u_min, smag + Real(wbt) * Real::from_double(0.22) + Real(12L));

  for (int attempt = 0; attempt < 5; ++attempt) {
    Real m_real = ceil((u_min - u0) / h);
    long M = m_real.sign() > 0 ? m_real.to_long() : 0;

    Complex direct(Real(0L), Real(0L));
    Real direct_err(0L);
    for (long m = 0; m < M; ++m) {
      Real u = u0 + h * Real(m);
      direct = direct + real_base_pow(u * u + width * width, Complex(), s);
    }
    direct_err = Real(M + 1) * Real::pow2(-wbt + 6) * (Real(1L) + abs(direct));

    TailResult tail = em_tail_at(s, u0, h, width, M, eps);
    if (tail.ok) {
      return {direct + tail.value, direct_err + tail.err};
    }
    u_min = u_min * Real(2L);
  }
  throw TruncationError("quadratic_tail: Euler-Maclaurin corrections failed to converge");
}

ValueWithError quadratic_power_sum(const QuadraticSumSpec& spec, const Precision& prec) {
  if (spec.weights.empty()) throw DomainError("quadratic_power_sum: empty weight table");
  if (!(spec.width > Real(0L))) throw DomainError("quadratic_power_sum: width must be positive");
  PrecisionScope scope(prec.working_bits + 48);
  const long period = static_cast<long>(spec.weights.size());

  auto one_sided = [&](const Real& shift, bool reflect) {
    Complex acc(Real(0L), Real(0L));
    Real err(0L);
    for (long a = 1; a <= period; ++a) {
      long widx = reflect ? ((period - (a % period)) % period) : (a % period);
      const Complex& w = spec.weights[static_cast<std::size_t>(widx)];
      if (w.re.is_zero() && w.im.is_zero()) continue;
      ValueWithError t =
          quadratic_tail(spec.s, Real(a) + shift, Real(period), spec.width, prec);
      acc = acc + w * t.value;
      err = err + abs(w) * t.err;
    }
    return ValueWithError{acc, err};
  };

  ValueWithError up = one_sided(spec.shift, false);
  if (!spec.bilateral) return up;

  ValueWithError down = one_sided(-spec.shift, true);
  Complex total = up.value + down.value;
  Real err = up.err + down.err;
  const Complex& w0 = spec.weights[0];
  if (!(w0.re.is_zero() && w0.im.is_zero())) {
    Real base = spec.shift * spec.shift + spec.width * spec.width;
    Real lb = log(base);
    total = total + w0 * exp(Complex(-(spec.s.re * lb), -(spec.s.im * lb)));
  }
  return {total, err};
}

}  // namespace hecklab::power_sums
