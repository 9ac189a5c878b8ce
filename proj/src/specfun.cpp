#include "hecklab/specfun.hpp"

#include <map>
#include <cmath>
#include <string>
#include <cstdlib>
#include <cstdio>
#include <mutex>
#include <utility>

namespace hecklab::specfun {

Real real_from_mpq(const mpq_class& q) {
  Real r;
  mpfr_set_q(r.raw(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

Real real_from_mpz(const mpz_class& z) {
  Real r;
  mpfr_set_z(r.raw(), z.get_mpz_t(), MPFR_RNDN);
  return r;
}

Real factorial_real(long n) {
  Real r;
  mpfr_fac_ui(r.raw(), static_cast<unsigned long>(n), MPFR_RNDN);
  return r;
}

namespace {

// distance from s to the nearest non-positive integer, or -1 if Re(s) is not
// in that range at all
bool near_nonpositive_integer(const Complex& s, const Real& tol, long* which = nullptr) {
  if (s.re > tol) return false;
  if (abs(s.im) > tol) return false;
  Real n = floor(s.re + Real("0.5"));
  if (n > 0) return false;
  if (abs(s.re - n) > tol) return false;
  if (which) *which = n.to_long();
  return true;
}

Real round_half(const Real& x) { return floor(x + Real("0.5")); }

}  // namespace

const mpq_class& bernoulli2(long j) {
  static std::mutex mu;
  static std::vector<mpq_class> all;   // B_0, B_1, B_2, ...
  static std::vector<mpq_class> even;  // B_0, B_2, B_4, ...
  std::lock_guard<std::mutex> lock(mu);
  if (j < static_cast<long>(even.size())) return even[j];
  if (all.empty()) {
    all.emplace_back(1);
    even.emplace_back(1);
  }
  while (static_cast<long>(even.size()) <= j) {
    long m = static_cast<long>(all.size());
    // B_m from sum_{i=0}^{m} C(m+1, i) B_i = 0
    mpq_class acc(0);
    for (long i = 0; i < m; ++i) {
      mpz_class binom;
      mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(m + 1),
                   static_cast<unsigned long>(i));
      acc += mpq_class(binom) * all[static_cast<size_t>(i)];
    }
    mpq_class bm = -acc / mpq_class(m + 1);
    bm.canonicalize();
    all.push_back(bm);
    if (m % 2 == 0) even.push_back(bm);
  }
  return even[j];
}

namespace {

// Stirling series for log-gamma; requires Re(z) >= sigma0 for the working
// precision, which the caller guarantees by shifting.
Complex log_gamma_stirling(const Complex& z, long wbt) {
  Complex lz = log(z);
  Complex acc = (z - Real("0.5")) * lz - z;
  Real half_log_2pi = ldexp(log(ldexp(const_pi(), 1)), -1);
  acc += half_log_2pi;
  Complex z2 = z * z;
  Complex zpow = z;  // z^{2j-1}
  Real thresh = Real::pow2(-wbt - 4);
  for (long j = 1; j <= 400; ++j) {
    Real coef = real_from_mpq(bernoulli2(j)) / Real(2 * j * (2 * j - 1));
    Complex term = Complex(coef) / zpow;
    acc += term;
    if (abs(term) < thresh * max(Real(1L), abs(acc))) return acc;
    zpow *= z2;
  }
  throw TruncationError("log-gamma asymptotic series did not reach tolerance");
}

long stirling_sigma0(long wbt) { return static_cast<long>(0.12 * static_cast<double>(wbt)) + 10; }

}  // namespace

Complex log_gamma(const Complex& s, const Precision& prec) {
  if (s.re.sign() <= 0)
    throw DomainError("log_gamma requires Re(s) > 0");
  long guard = 48 + prec.working_bits / 8;
  long wbt = prec.working_bits + guard;
  PrecisionScope scope(wbt);
  long sigma0 = stirling_sigma0(wbt);
  Complex z(s.re, s.im);
  long m = 0;
  if (z.re < sigma0) m = sigma0 - static_cast<long>(z.re.to_double());
  Complex acc(0L);
  for (long j = 0; j < m; ++j) {
    acc += log(z);  // principal; Re(z) > 0 throughout
    z += Real(1L);
  }
  return log_gamma_stirling(z, wbt) - acc;
}

ValueWithError gamma(const Complex& s, const Precision& prec) {
  Real tol = Real(10L) * prec.target_eps();
  if (near_nonpositive_integer(s, tol))
    throw PoleError("gamma evaluated at (or within guard of) a non-positive integer");
  long guard = 48 + prec.working_bits / 8;
  long wbt = prec.working_bits + guard;
  PrecisionScope scope(wbt);
  Complex value;
  if (s.re >= Real("0.5")) {
    value = exp(log_gamma(s, Precision{wbt - guard / 2}));
  } else {
    // reflection: gamma(s) = pi / (sin(pi s) gamma(1 - s))
    Complex one_minus(Real(1L) - s.re, -s.im);
    Complex g = exp(log_gamma(one_minus, Precision{wbt - guard / 2}));
    Real pi = const_pi();
    Complex sp = sin(Complex(pi * s.re, pi * s.im));
    value = Complex(pi) / (sp * g);
  }
  Real err = abs(value) * Real::pow2(-prec.working_bits - 8);
  return {value, err};
}

Complex reciprocal_gamma(const Complex& s, const Precision& prec) {
  long guard = 48 + prec.working_bits / 8;
  long wbt = prec.working_bits + guard;
  PrecisionScope scope(wbt);
  if (s.re >= Real("0.5")) return Complex(Real(1L)) / exp(log_gamma(s, Precision{wbt - guard / 2}));
  // 1/Gamma(s) = sin(pi s) Gamma(1 - s) / pi; sin vanishes exactly at
  // non-positive integer s when the input is held exactly.
  Complex one_minus(Real(1L) - s.re, -s.im);
  Complex g = exp(log_gamma(one_minus, Precision{wbt - guard / 2}));
  Real pi = const_pi();
  Complex sp = sin(Complex(pi * s.re, pi * s.im));
  return sp * g / Complex(pi);
}

namespace {

// Lentz continued fraction for Gamma(s, x); good for x moderately above |s|.
ValueWithError upper_gamma_cf(const Complex& s, const Real& x, long wb, long wbt) {
  PrecisionScope scope(wbt);
  Real tiny = Real::pow2(-2 * wbt);
  Real thresh = Real::pow2(-wbt + 8);
  Complex b0 = Complex(x + Real(1L)) - s;
  Complex f = b0.is_zero() ? Complex(tiny) : b0;
  Complex C = f, D(0L);
  long maxit = 40 * wb + 400;
  for (long j = 1; j <= maxit; ++j) {
    Complex aj = (s - Real(j)) * Real(j);  // a_j = -j (j - s)
    Complex bj = Complex(x + Real(2 * j + 1)) - s;
    D = bj + aj * D;
    if (D.is_zero()) D = Complex(tiny);
    C = bj + aj / C;
    if (C.is_zero()) C = Complex(tiny);
    D = Complex(1L) / D;
    Complex delta = C * D;
    f *= delta;
    if (std::getenv("HECKLAB_CF_TRACE") && j < 40)
      fprintf(stderr, "cf j=%ld gap=%.2f\n", j, log2(abs(delta - Complex(1L))).to_double());
    if (abs(delta - Complex(1L)) < thresh) {
      Complex pre = exp(Complex(s.re * log(x) - x, s.im * log(x)));
      Complex value = pre / f;
      Real err = abs(value) * Real::pow2(-wb - 10);
      return {value, err};
    }
  }
  throw TruncationError("incomplete-gamma continued fraction did not converge (s=" +
                        s.re.str(8) + "+" + s.im.str(8) + "i, x=" + x.str(8) + ", wbt=" +
                        std::to_string(wbt) + ", cur=" + std::to_string(current_bits()) +
                        ", pb=" + std::to_string(s.re.bits()) + "/" + std::to_string(s.im.bits()) +
                        "/" + std::to_string(x.bits()) + ")");
}

// Gamma(s) - gamma-lower series; requires Re(s) >= 0.5.
ValueWithError upper_gamma_series(const Complex& s, const Real& x, long wb, long wbt0) {
  long wbt = wbt0;
  for (int attempt = 0; attempt < 3; ++attempt) {
    PrecisionScope scope(wbt);
    Complex g = gamma(s, Precision{wbt - 16}).value;
    Complex term = Complex(1L) / s;
    Complex acc = term;
    Real maxmag = norm1(term);
    Real thresh = Real::pow2(-wbt + 4);
    long k = 0;
    while (true) {
      ++k;
      term *= Complex(x) / (s + Real(k));
      acc += term;
      Real m = norm1(term);
      if (m > maxmag) maxmag = m;
      if (k > 8 && x < ldexp(Real(k), -1) && m < thresh * max(Real(1L), norm1(acc))) break;
      if (k > 40 * wbt) throw TruncationError("incomplete-gamma series did not converge");
    }
    Complex pre = exp(Complex(s.re * log(x) - x, s.im * log(x)));
    Complex lower = pre * acc;
    Complex value = g - lower;
    Real cancel = max(abs(g), abs(pre) * maxmag);
    Real err = cancel * Real::pow2(-wbt + 10);
    Real want = max(abs(value), cancel * Real::pow2(-wb)) * Real::pow2(-wb - 8);
    if (err <= want || attempt == 2) return {value, err};
    wbt += wbt0;  // retry with more guard
  }
  throw TruncationError("incomplete-gamma series retries exhausted");
}

}  // namespace

namespace {

// Gamma(0, x) = E_1(x) = -euler - log x - sum_{k>=1} (-x)^k / (k k!)
Complex exp_integral_e1(const Real& x, long wbt) {
  PrecisionScope scope(wbt);
  Real acc = -const_euler() - log(x);
  Real term(1L);
  Real thresh = Real::pow2(-wbt + 8);
  for (long k = 1; k <= 40 * wbt; ++k) {
    term *= -x / Real(k);
    Real piece = term / Real(k);
    acc -= piece;
    if (k > static_cast<long>(x.to_double()) + 4 && abs(piece) < thresh * max(Real(1L), abs(acc)))
      return Complex(acc);
  }
  throw TruncationError("E1 series did not converge");
}

}  // namespace

ValueWithError upper_incomplete_gamma(const Complex& s, const Real& x, const Precision& prec) {
  if (x.sign() <= 0 || !x.is_finite())
    throw DomainError("upper_incomplete_gamma requires real x > 0");
  long wb = prec.working_bits;
  Real as = abs(s);
  Real x_cf = Real("1.25") * as + Real(static_cast<long>(0.34 * static_cast<double>(wb)) + 6);
  if (x >= x_cf) {
    long guard = 48;
    return upper_gamma_cf(s, x, wb, wb + guard);
  }
  long xg = static_cast<long>(1.5 * x.to_double()) + 48;
  if (s.re >= Real("0.5")) return upper_gamma_series(s, x, wb, wb + xg);

  // shift into Re >= 0.5 and recur downward; handles non-positive integer s
  long m = static_cast<long>(ceil(Real("0.5") - s.re).to_double());
  long wbt = wb + xg + 2 * m + 32;
  PrecisionScope scope(wbt);
  Real tol_snap = Real::pow2(-wbt / 2);
  Complex s0 = s;
  long snapped = 0;
  bool was_snapped = near_nonpositive_integer(s, tol_snap, &snapped);
  if (was_snapped) s0 = Complex(Real(snapped), Real(0L));
  ValueWithError top = upper_gamma_series(s0 + Real(m), x, wbt - 16, wbt);
  Complex val = top.value;
  Real err = top.err;
  Real lx = log(x);
  for (long j = m - 1; j >= 0; --j) {
    Complex sj = s0 + Real(j);
    if (sj.is_zero()) {
      val = exp_integral_e1(x, wbt);
      err = abs(val) * Real::pow2(-wbt + 8) + Real::pow2(-wbt + 8);
      continue;
    }
    Complex powterm = exp(Complex(sj.re * lx - x, sj.im * lx));
    Real mag = max(abs(val), abs(powterm));
    val = (val - powterm) / sj;
    Real den = abs(sj);
    err = (err + mag * Real::pow2(-wbt + 6)) / den;
  }
  if (was_snapped) {
    // snapped evaluation point: account for the parameter perturbation
    err += (abs(val) + Real(1L)) * tol_snap * (abs(lx) + Real(4L));
  }
  return {val, err};
}

ValueWithError hyp1f1(const Complex& a, const Complex& c, const Complex& z, const Precision& prec) {
  Real tol = Real(10L) * prec.target_eps();
  if (near_nonpositive_integer(c, tol))
    throw PoleError("hyp1f1 lower parameter at non-positive integer");
  if (z.re.sign() < 0) {
    // Kummer reflection keeps the series on its cancellation-free side
    ValueWithError inner = hyp1f1(c - a, c, -z, prec);
    Complex ez = exp(z);
    return {ez * inner.value, abs(ez) * inner.err};
  }
  Real az = abs(z);
  long guard = static_cast<long>(2.0 * az.to_double()) + 48;
  long wbt = prec.working_bits + guard;
  PrecisionScope scope(wbt);
  Complex term(1L), acc(1L);
  Real maxmag(1L);
  Real thresh = Real::pow2(-wbt + 8);
  double burn = 2.0 * az.to_double() + abs(a).to_double() + abs(c).to_double() + 10.0;
  long kmin = static_cast<long>(burn);
  for (long k = 0;; ++k) {
    term *= (a + Real(k)) * z / ((c + Real(k)) * Real(k + 1));
    acc += term;
    Real m = norm1(term);
    if (m > maxmag) maxmag = m;
    if (k >= kmin && m < thresh * max(Real(1L), norm1(acc))) break;
    if (k > 100 * wbt + 10000) throw TruncationError("hyp1f1 series did not converge");
  }
  Real err = maxmag * Real::pow2(-prec.working_bits - 8);
  return {acc, err};
}

ValueWithError hyp2f1(const Complex& a, const Complex& b, const Complex& c, const Complex& z,
                      const Precision& prec) {
  Real tol = Real(10L) * prec.target_eps();
  if (near_nonpositive_integer(c, tol))
    throw PoleError("hyp2f1 lower parameter at non-positive integer");
  Real az = abs(z);
  if (az >= Real(1L) - Real::pow2(-8))
    throw DomainError("hyp2f1 argument too close to the unit circle");
  long wbt = prec.working_bits + 48;
  PrecisionScope scope(wbt);
  Complex term(1L), acc(1L);
  Real thresh = Real::pow2(-wbt + 8);
  Real pabs = abs(a) + abs(b) + abs(c) + Real(2L);
  long kmin = static_cast<long>((pabs * az / (Real(1L) - az)).to_double()) + 20;
  for (long k = 0;; ++k) {
    term *= (a + Real(k)) * (b + Real(k)) * z / ((c + Real(k)) * Real(k + 1));
    acc += term;
    if (k >= kmin && abs(term) < thresh * max(Real(1L), abs(acc))) {
      // geometric tail estimate
      Real r = az * (Real(1L) + pabs / Real(k + 1));
      Real tail = r < Real(1L) ? abs(term) * r / (Real(1L) - r) : abs(term) * Real(4L);
      Real err = tail + abs(acc) * Real::pow2(-prec.working_bits - 8);
      return {acc, err};
    }
    if (k > 200 * wbt + 20000) throw TruncationError("hyp2f1 series did not converge");
  }
}

namespace {

long bessel_series_radius(long wb) { return static_cast<long>(0.35 * static_cast<double>(wb + 26)) + 4; }

// ascending series for (z/2)^{-nu} J_nu(z) (sign = -1) or I (sign = +1)
ValueWithError bessel_scaled_series(const Real& nu, const Complex& z, int sign,
                                    const Precision& prec) {
  if (nu <= Real(-1L)) throw DomainError("scaled Bessel series requires nu > -1");
  Real az = abs(z);
  long guard = static_cast<long>(3.0 * az.to_double()) + 48;
  long wbt = prec.working_bits + guard;
  PrecisionScope scope(wbt);
  Complex q = z * z / Real(4L);
  if (sign < 0) q = -q;
  Real g0 = real_gamma(nu + Real(1L));
  Complex term = Complex(Real(1L) / g0);
  Complex acc = term;
  Real maxmag = abs(term);
  Real thresh = Real::pow2(-wbt + 8);
  long kmin = static_cast<long>(az.to_double()) + 4;
  for (long k = 0;; ++k) {
    term *= q / ((nu + Real(k + 1)) * Real(k + 1));
    acc += term;
    Real m = abs(term);
    if (m > maxmag) maxmag = m;
    if (k >= kmin && m < thresh * max(maxmag * Real::pow2(-guard), abs(acc))) break;
    if (k > 40 * wbt + 4000) throw TruncationError("Bessel series did not converge");
  }
  Real err = maxmag * Real::pow2(-prec.working_bits - 8);
  return {acc, err};
}

// Hankel-style large-argument expansions. u_k = a_k(nu) / z^k with
// a_k the Hankel symbol coefficients.
struct HankelSums {
  Complex even_alt;  // sum_k (-1)^k u_{2k}
  Complex odd_alt;   // sum_k (-1)^k u_{2k+1}
  Complex plain;     // sum_k u_k
  Complex plain_alt; // sum_k (-1)^k u_k
  Real trunc;        // magnitude of the first omitted term
};

HankelSums hankel_sums(const Real& nu, const Complex& z, long wbt) {
  PrecisionScope scope(wbt);
  Real four_nu2 = Real(4L) * nu * nu;
  Complex u(1L);
  HankelSums s;
  s.even_alt = Complex(1L);
  s.odd_alt = Complex(0L);
  s.plain = Complex(1L);
  s.plain_alt = Complex(1L);
  Real prev = abs(u);
  Real thresh = Real::pow2(-wbt + 8);
  for (long k = 1; k <= 4 * wbt; ++k) {
    Real odd = Real(2 * k - 1);
    u *= (four_nu2 - odd * odd) / (Real(8L) * Real(k) * z);
    Real m = abs(u);
    if (m >= prev || m < thresh) {
      s.trunc = m;
      return s;
    }
    prev = m;
    long km = k % 4;  // i^k pattern for (-1)^{k/2} splits
    if (k % 2 == 0) {
      s.even_alt += (km == 0) ? u : -u;
    } else {
      s.odd_alt += (km == 1) ? u : -u;
    }
    s.plain += u;
    s.plain_alt += (k % 2 == 0) ? u : -u;
  }
  s.trunc = prev;
  return s;
}

ValueWithError bessel_j_asymptotic(const Real& nu, const Complex& z, const Precision& prec) {
  long wbt = prec.working_bits + 48;
  PrecisionScope scope(wbt);
  Real pi = const_pi();
  Complex omega = z - Complex(pi * (ldexp(nu, 1) + Real(1L)) / Real(4L));
  HankelSums h = hankel_sums(nu, z, wbt);
  Complex chi = sqrt(Complex(ldexp(Real(1L), 1)) / (Complex(pi) * z));
  Complex val = chi * (cos(omega) * h.even_alt - sin(omega) * h.odd_alt);
  Real err = abs(chi) * (abs(cos(omega)) + abs(sin(omega))) * (h.trunc + Real::pow2(-wbt + 16));
  return {val, err};
}

ValueWithError bessel_i_asymptotic(const Real& nu, const Complex& z, const Precision& prec) {
  long wbt = prec.working_bits + 48;
  PrecisionScope scope(wbt);
  Real pi = const_pi();
  Complex root = sqrt(Complex(1L) / (Complex(ldexp(pi, 1)) * z));
  HankelSums h = hankel_sums(nu, z, wbt);
  Complex val = exp(z) * root * h.plain_alt;
  // subdominant reflected branch, relevant only when Re(z) is not large
  Real phase = pi * (nu + Real("0.5"));
  Complex rot = z.im.sign() >= 0 ? Complex(cos(phase), sin(phase)) : Complex(cos(phase), -sin(phase));
  val += exp(-z) * rot * root * h.plain;
  Real err = abs(root) * exp(abs(z.re)) * (h.trunc + Real::pow2(-wbt + 16));
  return {val, err};
}

ValueWithError bessel_k_asymptotic(const Real& nu, const Complex& z, const Precision& prec) {
  long wbt = prec.working_bits + 48;
  PrecisionScope scope(wbt);
  Real pi = const_pi();
  HankelSums h = hankel_sums(nu, z, wbt);
  Complex root = sqrt(Complex(ldexp(pi, -1)) / z);
  Complex val = exp(-z) * root * h.plain;
  Real err = abs(root * exp(-z)) * (h.trunc + Real::pow2(-wbt + 16));
  return {val, err};
}

ValueWithError bessel_k_half_integer(long twice_nu, const Complex& z, const Precision& prec) {
  // K_{1/2}(z) = sqrt(pi/2z) e^{-z}; upward K_{v+1} = K_{v-1} + (2v/z) K_v
  long wbt = prec.working_bits + 48;
  PrecisionScope scope(wbt);
  Complex base = sqrt(Complex(ldexp(const_pi(), -1)) / z) * exp(-z);
  long steps = (twice_nu - 1) / 2;  // nu = steps + 1/2
  Complex km = base, k0 = base;     // K_{-1/2} = K_{1/2}
  Real v("0.5");
  for (long i = 0; i < steps; ++i) {
    Complex kn = km + k0 * (ldexp(v, 1) / z);
    km = k0;
    k0 = kn;
    v += Real(1L);
  }
  Real err = abs(k0) * Real::pow2(-prec.working_bits - 8);
  return {k0, err};
}

ValueWithError bessel_k_integer(long n, const Complex& z, const Precision& prec) {
  Real az = abs(z);
  long guard = static_cast<long>(3.0 * az.to_double()) + 64;
  long wbt = prec.working_bits + guard;
  PrecisionScope scope(wbt);
  Complex zh = z / Real(2L);
  Complex q = zh * zh;  // (z/2)^2
  Complex lg = log(zh);
  // finite part: (1/2) (z/2)^{-n} sum_{k<n} ((n-k-1)!/k!) (-q)^k
  Complex finite(0L);
  if (n > 0) {
    Real num = real_gamma(Real(n));  // (n-1)!
    Complex t = Complex(num);
    Complex qk(1L);
    Real kfac(1L);
    for (long k = 0; k < n; ++k) {
      if (k > 0) {
        num /= Real(n - k);  // (n-k-1)!
        kfac *= Real(k);
        qk *= -q;
        t = Complex(num / kfac) * qk;
      }
      finite += t;
    }
    finite = finite * pow(zh, -n) / Real(2L);
  }
  // log part and psi series
  ValueWithError iscaled = bessel_scaled_series(Real(n), z, +1, Precision{wbt - 32});
  Complex in_val = pow(zh, n) * iscaled.value;
  Complex logpart = ((n % 2 == 0) ? -lg : lg) * in_val;

  Real gamma_e = const_euler();
  Real psi_k = -gamma_e;      // psi(1)
  Real psi_nk = -gamma_e;     // psi(n+1)
  for (long i = 1; i <= n; ++i) psi_nk += Real(1L) / Real(i);
  Real kfac(1L), nkfac = real_gamma(Real(n + 1));
  Complex qk(1L);
  Complex psiacc(0L);
  Real thresh = Real::pow2(-wbt + 8);
  Real maxmag(0L);
  for (long k = 0;; ++k) {
    Complex term = (Complex(psi_k + psi_nk) * qk) / Complex(kfac * nkfac);
    psiacc += term;
    Real m = abs(term);
    if (m > maxmag) maxmag = m;
    if (k > static_cast<long>(az.to_double()) + 4 && m < thresh * max(Real(1L), abs(psiacc))) break;
    if (k > 40 * wbt + 4000) throw TruncationError("Bessel K integer series did not converge");
    psi_k += Real(1L) / Real(k + 1);
    psi_nk += Real(1L) / Real(n + k + 1);
    kfac *= Real(k + 1);
    nkfac *= Real(n + k + 1);
    qk *= q;
  }
  Complex psipart = pow(zh, n) * psiacc / Real(2L);
  if (n % 2 != 0) psipart = -psipart;
  Complex val = finite + logpart + psipart;
  Real err = (maxmag + abs(finite) + abs(in_val) * (abs(lg) + Real(1L))) *
             Real::pow2(-prec.working_bits - 8);
  return {val, err};
}

ValueWithError bessel_k_generic(const Real& nu, const Complex& z, const Precision& prec) {
  // K_nu = pi/(2 sin(pi nu)) [ (z/2)^{-nu} Itilde_{-nu} - (z/2)^{nu} Itilde_{nu} ]
  Real az = abs(z);
  Real pi = const_pi();
  Real spn = sin(pi * (nu - floor(nu)));
  long cancel_guard = static_cast<long>(3.0 * az.to_double()) + 64;
  if (!spn.is_zero()) {
    long e = spn.exponent();
    if (e < 0) cancel_guard += -e + 8;
  }
  long wbt = prec.working_bits + cancel_guard;
  PrecisionScope scope(wbt);
  ValueWithError ip = bessel_scaled_series(nu, z, +1, Precision{wbt - 32});
  ValueWithError im = bessel_scaled_series(-nu, z, +1, Precision{wbt - 32});
  Complex zh = z / Real(2L);
  Complex t1 = pow(zh, Complex(-nu, Real(0L))) * im.value;
  Complex t2 = pow(zh, Complex(nu, Real(0L))) * ip.value;
  Real s = sin(pi * nu);
  Complex val = (t1 - t2) * (pi / (ldexp(s, 1)));
  Real err = (abs(t1) + abs(t2)) / abs(s) * Real::pow2(-prec.working_bits - 8);
  return {val, err};
}

}  // namespace

ValueWithError bessel_j_scaled(const Real& nu, const Complex& z, const Precision& prec) {
  long r0 = bessel_series_radius(prec.working_bits);
  if (abs(z) <= Real(r0) || z.is_zero()) return bessel_scaled_series(nu, z, -1, prec);
  ValueWithError j = bessel_j_asymptotic(nu, z, prec);
  Complex zh = z / Real(2L);
  Complex fac = pow(zh, Complex(-nu, Real(0L)));
  return {fac * j.value, abs(fac) * j.err};
}

ValueWithError bessel_i_scaled(const Real& nu, const Complex& z, const Precision& prec) {
  long r0 = bessel_series_radius(prec.working_bits);
  if (abs(z) <= Real(r0) || z.is_zero()) return bessel_scaled_series(nu, z, +1, prec);
  ValueWithError i = bessel_i_asymptotic(nu, z, prec);
  Complex zh = z / Real(2L);
  Complex fac = pow(zh, Complex(-nu, Real(0L)));
  return {fac * i.value, abs(fac) * i.err};
}

ValueWithError bessel(BesselKind kind, const Real& nu, const Complex& z, const Precision& prec) {
  if (!nu.is_finite()) throw DomainError("bessel order must be finite");
  long r0 = bessel_series_radius(prec.working_bits);
  Real az = abs(z);
  switch (kind) {
    case BesselKind::J: {
      if (nu <= Real(-1L) && !nu.is_integer())
        throw DomainError("bessel J requires nu > -1");
      if (az <= Real(r0)) {
        ValueWithError s = bessel_scaled_series(nu, z, -1, prec);
        Complex fac = pow(z / Real(2L), Complex(nu, Real(0L)));
        return {fac * s.value, abs(fac) * s.err};
      }
      return bessel_j_asymptotic(nu, z, prec);
    }
    case BesselKind::I: {
      if (nu <= Real(-1L) && !nu.is_integer())
        throw DomainError("bessel I requires nu > -1");
      if (az <= Real(r0)) {
        ValueWithError s = bessel_scaled_series(nu, z, +1, prec);
        Complex fac = pow(z / Real(2L), Complex(nu, Real(0L)));
        return {fac * s.value, abs(fac) * s.err};
      }
      return bessel_i_asymptotic(nu, z, prec);
    }
    case BesselKind::K: {
      if (nu.sign() < 0) throw DomainError("bessel K implemented for nu >= 0");
      if (z.is_zero()) throw DomainError("bessel K singular at z = 0");
      if (az > Real(r0)) return bessel_k_asymptotic(nu, z, prec);
      Real twice = ldexp(nu, 1);
      if (nu.is_integer()) return bessel_k_integer(nu.to_long(), z, prec);
      if (twice.is_integer()) return bessel_k_half_integer(twice.to_long(), z, prec);
      return bessel_k_generic(nu, z, prec);
    }
  }
  throw DomainError("unknown Bessel kind");
}

ValueWithError hurwitz_zeta_em(const Complex& s, const Real& a, const Precision& prec) {
  if (a.sign() <= 0) throw DomainError("hurwitz_zeta_em requires a > 0");
  Real tol = Real(10L) * prec.target_eps();
  if (abs(s - Complex(1L)) < tol) throw PoleError("zeta evaluated at s = 1");
  long wbt = prec.working_bits + 64;
  PrecisionScope scope(wbt);
  long N = std::max<long>(20, static_cast<long>(0.2 * static_cast<double>(wbt) +
                                                0.9 * abs(s.im).to_double()) + 8);
  for (int attempt = 0; attempt < 2; ++attempt) {
    Complex acc(0L);
    for (long n = 0; n < N; ++n) acc += rpow(Real(n) + a, -s);
    Real Na = Real(N) + a;
    Complex NamS = rpow(Na, -s);
    acc += rpow(Na, Complex(1L) - s) / (s - Complex(1L));
    acc += NamS / Real(2L);
    // Bernoulli corrections
    Complex poch = s;  // (s)_{2j-1}
    Real na2 = Na * Na;
    Complex npow = NamS / Na;  // (N+a)^{-s-2j+1}
    Real fact2j(2L);           // (2j)!
    Real thresh = Real::pow2(-wbt + 8);
    bool done = false;
    Complex last(0L);
    for (long j = 1; j <= 250; ++j) {
      Real coef = real_from_mpq(bernoulli2(j)) / fact2j;
      last = Complex(coef) * poch * npow;
      acc += last;
      if (abs(last) < thresh * max(Real(1L), abs(acc))) {
        done = true;
        break;
      }
      poch *= (s + Real(2 * j - 1)) * (s + Real(2 * j));
      npow /= na2;
      fact2j *= Real((2 * j + 1) * (2 * j + 2));
    }
    if (done) {
      Real err = abs(last) * Real(4L) + abs(acc) * Real::pow2(-prec.working_bits - 8);
      return {acc, err};
    }
    N *= 2;
  }
  throw TruncationError("Euler-Maclaurin zeta did not reach tolerance");
}

ValueWithError zeta_em(const Complex& s, const Precision& prec) {
  return hurwitz_zeta_em(s, Real(1L), prec);
}

const GaussLegendre& gauss_legendre(int order, long bits) {
  static std::mutex mu;
  static std::map<std::pair<int, long>, GaussLegendre> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(order, bits);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  PrecisionScope scope(bits + 32);
  GaussLegendre gl;
  gl.node.reserve(order);
  gl.weight.reserve(order);
  Real thresh = Real::pow2(-bits - 8);
  for (int k = 1; k <= order; ++k) {
    // Chebyshev-flavored initial guess, then Newton on P_n
    double guess = std::cos(3.14159265358979324 * (k - 0.25) / (order + 0.5));
    Real x = Real::from_double(guess);
    Real dp(0L);
    for (int it2 = 0; it2 < 200; ++it2) {
      // evaluate P_n(x), P_n'(x) by recurrence
      Real p0(1L), p1 = x;
      for (int n = 2; n <= order; ++n) {
        Real p2 = (Real(2 * n - 1) * x * p1 - Real(n - 1) * p0) / Real(n);
        p0 = p1;
        p1 = p2;
      }
      dp = Real(order) * (x * p1 - p0) / (x * x - Real(1L));
      Real step = p1 / dp;
      x -= step;
      if (abs(step) < thresh) break;
    }
    gl.node.push_back(x);
    gl.weight.push_back(Real(2L) / ((Real(1L) - x * x) * dp * dp));
  }
  auto [pos, ok] = cache.emplace(key, std::move(gl));
  return pos->second;
}

}  // namespace hecklab::specfun
