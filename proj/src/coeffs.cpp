#include "hecklab/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <utility>

#include "hecklab/specfun.hpp"

namespace hecklab::coeffs {

void CoefficientStream::ensure(long n) {
  std::lock_guard<std::mutex> lk(mu_);
  if (n < limit_) return;
  long target = std::max(n + 1, 2 * std::max(limit_, first_ + 16));
  extend_to(target);
  limit_ = target;
}

long CoefficientStream::limit() const {
  std::lock_guard<std::mutex> lk(mu_);
  return limit_;
}

Complex CoefficientStream::at(long n) const {
  if (n < first_) throw DomainError("coefficient index below first_index");
  return get(n);
}

const mpq_class& CoefficientStream::exact_at(long n) const {
  if (!exact_) throw DomainError("stream holds no exact values");
  if (n < first_) throw DomainError("coefficient index below first_index");
  return get_exact(n);
}

const mpq_class& CoefficientStream::get_exact(long) const {
  throw DomainError("stream holds no exact values");
}

namespace {

long isqrt_floor(long n) {
  if (n < 0) return -1;
  long r = static_cast<long>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// J.C.P. Miller recurrence for f = (1 + sum_k p_k u^k)^alpha with integer
// sparse support; values exact rationals. support(k) must return p_k for
// k >= 1 (zero almost everywhere); support_indices(limit) lists nonzero k.
class MillerStream final : public CoefficientStream {
 public:
  // exposed index n maps to series coefficient f(n - expose_base)
  MillerStream(mpq_class alpha, std::vector<std::pair<long, long>> (*support)(long),
               long first, long expose_base, Real kappa, Real cbound, bool fold_pow2,
               mpq_class pow2_exponent)
      : CoefficientStream(first, std::move(kappa), std::move(cbound), true),
        alpha_(std::move(alpha)),
        support_(support),
        expose_base_(expose_base),
        has_pow2_(false) {
    if (fold_pow2) {
      if (pow2_exponent.get_den() == 1 && pow2_exponent.get_num().fits_slong_p() &&
          pow2_exponent.get_num().get_si() >= 0) {
        pow2_int_ = mpz_class(1) << pow2_exponent.get_num().get_ui();
        fold_int_ = true;
      } else {
        has_pow2_ = true;
        pow2_exp_ = std::move(pow2_exponent);
        exact_ = false;
      }
    }
    vals_.emplace_back(1);
    if (fold_int_) vals_[0] *= pow2_int_;
  }

 private:
  void extend_to(long target) override {
    long need = target - first_ + expose_base_;  // series length required
    if (need <= static_cast<long>(vals_.size())) return;
    auto sup = support_(need);
    mpq_class ap1 = alpha_ + 1;
    for (long n = static_cast<long>(vals_.size()); n < need; ++n) {
      mpq_class acc(0);
      for (const auto& [k, pk] : sup) {
        if (k > n) break;
        acc += (ap1 * k - n) * pk * vals_[static_cast<std::size_t>(n - k)];
      }
      acc /= n;
      vals_.push_back(std::move(acc));
    }
  }

  Complex get(long n) const override {
    const mpq_class& v = vals_[static_cast<std::size_t>(n - first_ + expose_base_)];
    Real r = specfun::real_from_mpq(v);
    if (has_pow2_) {
      Real lg2;
      mpfr_const_log2(lg2.raw(), MPFR_RNDN);
      r = r * exp(specfun::real_from_mpq(pow2_exp_) * lg2);
    }
    return Complex(r, Real(0L));
  }

  const mpq_class& get_exact(long n) const override {
    return vals_[static_cast<std::size_t>(n - first_ + expose_base_)];
  }

  mpq_class alpha_;
  std::vector<std::pair<long, long>> (*support_)(long);
  long expose_base_;
  bool has_pow2_ = false;
  bool fold_int_ = false;
  mpq_class pow2_exp_;
  mpz_class pow2_int_ = 1;
  std::vector<mpq_class> vals_;
};

std::vector<std::pair<long, long>> theta3_support(long limit) {
  std::vector<std::pair<long, long>> s;
  for (long j = 1; j * j < limit; ++j) s.emplace_back(j * j, 2);
  return s;
}

std::vector<std::pair<long, long>> theta2_support(long limit) {
  std::vector<std::pair<long, long>> s;
  for (long m = 1; m * (m + 1) < limit; ++m) s.emplace_back(m * (m + 1), 1);
  return s;
}

std::vector<std::pair<long, long>> pentagonal_support(long limit) {
  std::vector<std::pair<long, long>> s;
  for (long j = 1;; ++j) {
    long g1 = j * (3 * j - 1) / 2, g2 = j * (3 * j + 1) / 2;
    if (g1 >= limit && g2 >= limit) break;
    long sign = (j % 2 == 0) ? 1 : -1;
    if (g1 < limit) s.emplace_back(g1, sign);
    if (g2 < limit) s.emplace_back(g2, sign);
  }
  std::sort(s.begin(), s.end());
  return s;
}

// Exact integer counts stored as rationals (denominator 1).
class CountStream final : public CoefficientStream {
 public:
  CountStream(long A, long B, long C, Real kappa, Real cbound)
      : CoefficientStream(1, std::move(kappa), std::move(cbound), true), A_(A), B_(B), C_(C) {
    disc_ = 4 * A_ * C_ - B_ * B_;
    if (A_ <= 0 || C_ <= 0 || disc_ <= 0)
      throw DomainError("quadratic form must be positive definite");
  }

 private:
  void extend_to(long target) override {
    long N = target - 1;
    vals_.assign(static_cast<std::size_t>(N), 0);
    long mb = isqrt_floor(4 * C_ * N / disc_) + 1;
    long kb = isqrt_floor(4 * A_ * N / disc_) + 1;
    for (long m = -mb; m <= mb; ++m)
      for (long k = -kb; k <= kb; ++k) {
        long n = A_ * m * m + B_ * m * k + C_ * k * k;
        if (n >= 1 && n <= N) ++vals_[static_cast<std::size_t>(n - 1)];
      }
    cache_.resize(vals_.size());
    for (std::size_t i = 0; i < vals_.size(); ++i) cache_[i] = mpq_class(vals_[i]);
  }

  Complex get(long n) const override {
    return Complex(Real(vals_[static_cast<std::size_t>(n - 1)]), Real(0L));
  }
  const mpq_class& get_exact(long n) const override {
    return cache_[static_cast<std::size_t>(n - 1)];
  }

  long A_, B_, C_, disc_;
  std::vector<long> vals_;
  std::vector<mpq_class> cache_;
};

// Complex-valued stream recomputed from scratch on growth (the generators
// are convolutions, cheap relative to their consumers).
class ComplexStream final : public CoefficientStream {
 public:
  using Generator = std::function<std::vector<Complex>(long)>;  // values for [first, first+n)
  ComplexStream(long first, Real kappa, Real cbound, long value_bits, Generator gen)
      : CoefficientStream(first, std::move(kappa), std::move(cbound), false),
        value_bits_(value_bits),
        gen_(std::move(gen)) {}

 private:
  void extend_to(long target) override {
    PrecisionScope scope(value_bits_);
    vals_ = gen_(target - first_);
  }
  Complex get(long n) const override { return vals_[static_cast<std::size_t>(n - first_)]; }

  long value_bits_;
  Generator gen_;
  std::vector<Complex> vals_;
};

}  // namespace

StreamPtr r_alpha_stream(const mpq_class& alpha) {
  if (alpha <= 0) throw DomainError("r_alpha_stream: alpha must be positive");
  double ad = alpha.get_d();
  Real kappa = Real::from_double(ad / 2 + 1.0);
  return std::make_shared<MillerStream>(alpha, theta3_support, 1, 1, kappa, Real(600L), false,
                                        mpq_class(0));
}

StreamPtr r_tilde_alpha_stream(const mpq_class& alpha) {
  if (alpha <= 0) throw DomainError("r_tilde_alpha_stream: alpha must be positive");
  double ad = alpha.get_d();
  Real kappa = Real::from_double(ad / 2);
  Real cbound = Real(540L) * exp(Real::from_double(ad / 2) * log(Real(2L))) *
                exp(specfun::real_from_mpq(alpha) * log(Real(2L)));
  return std::make_shared<MillerStream>(alpha, theta2_support, 0, 0, kappa, cbound, true, alpha);
}

StreamPtr quadratic_reps(long A, long B, long C) {
  return std::make_shared<CountStream>(A, B, C, Real(1L), Real(24L));
}

StreamPtr tau_stream() {
  Real kappa = Real::from_double(6.5);
  // exposed index n reads series coefficient f(n-1): tau(n) = [u^n] u P(u)^24
  return std::make_shared<MillerStream>(mpq_class(24), pentagonal_support, 1, 0, kappa, Real(2L),
                                        false, mpq_class(0));
}

namespace {

long mod_pow(long b, long e, long m) {
  long r = 1 % m;
  b %= m;
  if (b < 0) b += m;
  while (e > 0) {
    if (e & 1) r = (r * b) % m;
    b = (b * b) % m;
    e >>= 1;
  }
  return r;
}

long mult_order(long g, long m) {
  long r = 1, x = g % m;
  while (x != 1) {
    x = (x * g) % m;
    ++r;
    if (r > m) throw DomainError("not a unit");
  }
  return r;
}

struct UnitComponent {
  long modulus;                // prime power piece of q
  long order;                  // cyclic order of this component
  std::vector<long> dlog;      // residue mod `modulus` -> exponent, -1 for non-units
};

// Cyclic decomposition of (Z/q)^*: for 2^e with e >= 3 the two components
// <-1> and <5>; one component per odd prime power.
std::vector<UnitComponent> unit_components(long q) {
  std::vector<UnitComponent> comps;
  long rem = q;
  long e2 = 0;
  while (rem % 2 == 0) {
    rem /= 2;
    ++e2;
  }
  if (e2 >= 2) {
    long m = 1L << e2;
    if (e2 == 2) {
      UnitComponent c{m, 2, std::vector<long>(static_cast<std::size_t>(m), -1)};
      c.dlog[1] = 0;
      c.dlog[3] = 1;
      comps.push_back(std::move(c));
    } else {
      long d5 = 1L << (e2 - 2);
      UnitComponent cm{m, 2, std::vector<long>(static_cast<std::size_t>(m), -1)};
      UnitComponent c5{m, d5, std::vector<long>(static_cast<std::size_t>(m), -1)};
      for (long s = 0; s < 2; ++s) {
        long x = (s == 0) ? 1 : m - 1;
        for (long t = 0; t < d5; ++t) {
          cm.dlog[static_cast<std::size_t>(x)] = s;
          c5.dlog[static_cast<std::size_t>(x)] = t;
          x = (x * 5) % m;
        }
      }
      comps.push_back(std::move(cm));
      comps.push_back(std::move(c5));
    }
  }
  for (long p = 3; rem > 1; p += 2) {
    if (p * p > rem) p = rem;  // remaining cofactor is prime
    if (rem % p != 0) continue;
    long m = 1;
    while (rem % p == 0) {
      rem /= p;
      m *= p;
    }
    long phi = m / p * (p - 1);
    long g = 0;
    for (long cand = 2; cand < m; ++cand) {
      if (std::gcd(cand, m) != 1) continue;
      if (mult_order(cand, m) == phi) {
        g = cand;
        break;
      }
    }
    UnitComponent c{m, phi, std::vector<long>(static_cast<std::size_t>(m), -1)};
    long x = 1;
    for (long t = 0; t < phi; ++t) {
      c.dlog[static_cast<std::size_t>(x)] = t;
      x = (x * g) % m;
    }
    comps.push_back(std::move(c));
  }
  return comps;
}

}  // namespace

Complex DirichletCharacter::value(long n) const {
  long r = ((n % q) + q) % q;
  long e = exps[static_cast<std::size_t>(r)];
  if (e < 0) return Complex(Real(0L), Real(0L));
  if (order == 1 || e == 0) return Complex(Real(1L), Real(0L));
  if (2 * e == order) return Complex(Real(-1L), Real(0L));
  Real ang = Real(2L) * const_pi() * Real(e) / Real(order);
  return Complex(cos(ang), sin(ang));
}

DirichletCharacter DirichletCharacter::conjugate() const {
  DirichletCharacter c = *this;
  for (auto& e : c.exps)
    if (e > 0) e = order - e;
  return c;
}

std::vector<DirichletCharacter> characters_mod(long q) {
  if (q < 1) throw DomainError("characters_mod: modulus must be >= 1");
  if (q == 1) {
    DirichletCharacter one;
    one.q = 1;
    one.exps = {0};
    return {one};
  }
  auto comps = unit_components(q);
  std::vector<long> radix;
  for (const auto& c : comps) radix.push_back(c.order);
  long count = 1;
  for (long d : radix) count *= d;

  std::vector<DirichletCharacter> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long idx = 0; idx < count; ++idx) {
    std::vector<long> t(radix.size());
    long rest = idx;
    for (std::size_t i = 0; i < radix.size(); ++i) {
      t[i] = rest % radix[i];
      rest /= radix[i];
    }
    long m = 1;
    for (long d : radix) m = std::lcm(m, d);
    DirichletCharacter chi;
    chi.q = q;
    chi.index = idx;
    chi.exps.assign(static_cast<std::size_t>(q), -1);
    long g_all = m;
    for (long n = 0; n < q; ++n) {
      if (std::gcd(n, q) != 1) continue;
      long e = 0;
      bool unit = true;
      for (std::size_t i = 0; i < comps.size(); ++i) {
        long d = comps[i].dlog[static_cast<std::size_t>(n % comps[i].modulus)];
        if (d < 0) {
          unit = false;
          break;
        }
        e = (e + t[i] * d % m * (m / radix[i])) % m;
      }
      if (!unit) continue;
      chi.exps[static_cast<std::size_t>(n)] = e;
      if (e > 0) g_all = std::gcd(g_all, e);
    }
    chi.order = m / g_all;
    for (auto& e : chi.exps)
      if (e > 0) e /= g_all;
    chi.parity = (chi.exps[static_cast<std::size_t>(q - 1)] != 0) ? 1 : 0;
    // conductor: least d | q with chi trivial on {n == 1 mod d, unit mod q}
    chi.conductor = q;
    for (long d = 1; d <= q; ++d) {
      if (q % d != 0) continue;
      bool trivial = true;
      for (long n = 1; n < q && trivial; ++n) {
        if (n % d != 1 % d || std::gcd(n, q) != 1) continue;
        if (chi.exps[static_cast<std::size_t>(n)] != 0) trivial = false;
      }
      if (trivial) {
        chi.conductor = d;
        break;
      }
    }
    chi.primitive = (chi.conductor == q);
    out.push_back(std::move(chi));
  }
  return out;
}

DirichletCharacter character(long q, long index) {
  auto all = characters_mod(q);
  if (index < 0 || index >= static_cast<long>(all.size()))
    throw DomainError("character index out of range");
  return all[static_cast<std::size_t>(index)];
}

DirichletCharacter primitive_character(long q, int parity, long which) {
  for (const auto& chi : characters_mod(q)) {
    if (!chi.primitive || chi.parity != parity) continue;
    if (which-- == 0) return chi;
  }
  throw DomainError("no primitive character with the requested parity");
}

ValueWithError gauss_sum(const DirichletCharacter& chi, const Precision& prec) {
  PrecisionScope scope(prec.working_bits + 32);
  Complex acc(Real(0L), Real(0L));
  Real two_pi = Real(2L) * const_pi();
  for (long a = 1; a <= chi.q; ++a) {
    Complex v = chi.value(a);
    if (v.re.is_zero() && v.im.is_zero()) continue;
    Real ang = two_pi * Real(a) / Real(chi.q);
    acc = acc + v * Complex(cos(ang), sin(ang));
  }
  return {acc, Real(chi.q) * Real::pow2(-prec.working_bits - 24)};
}

namespace {

// One-dimensional square-support layer: c1[j] = sum over m in Z with
// m^2 = j of m^delta w(m), for a periodic weight w.
std::vector<Complex> square_layer(long n, long delta, long period,
                                  const std::function<Complex(long)>& w) {
  std::vector<Complex> c1(static_cast<std::size_t>(n), Complex(Real(0L), Real(0L)));
  if (delta == 0 && n > 0) c1[0] = w(0);
  for (long m = 1; m * m < n; ++m) {
    Complex term = w(((m % period) + period) % period);
    Complex mirror = w(((-m % period) + period) % period);
    if (delta == 1) {
      term = term * Real(m);
      mirror = mirror * Real(-m);
    }
    c1[static_cast<std::size_t>(m * m)] = term + mirror;
  }
  return c1;
}

std::vector<Complex> sparse_convolve(const std::vector<Complex>& sparse,
                                     const std::vector<Complex>& dense) {
  std::vector<Complex> out(dense.size(), Complex(Real(0L), Real(0L)));
  for (std::size_t j = 0; j < sparse.size(); ++j) {
    const Complex& s = sparse[j];
    if (s.re.is_zero() && s.im.is_zero()) continue;
    for (std::size_t i = 0; i + j < dense.size(); ++i) {
      const Complex& d = dense[i];
      if (d.re.is_zero() && d.im.is_zero()) continue;
      out[i + j] = out[i + j] + s * d;
    }
  }
  return out;
}

}  // namespace

StreamPtr r_k_chi_stream(const DirichletCharacter& chi, long k, const Precision& prec) {
  if (k < 1) throw DomainError("r_k_chi_stream: k must be >= 1");
  long delta = chi.parity;
  long bits = 2 * prec.working_bits;
  DirichletCharacter cc = chi;
  auto gen = [cc, k, delta](long n) {
    auto w = [&cc](long r) { return cc.value(r); };
    std::vector<Complex> c1 = square_layer(n + 1, delta, cc.q, w);
    std::vector<Complex> acc = c1;
    for (long j = 1; j < k; ++j) acc = sparse_convolve(c1, acc);
    return std::vector<Complex>(acc.begin() + 1, acc.end());
  };
  Real kappa = Real::from_double(static_cast<double>(k) / 2.0 + (delta ? k / 2.0 : 0.0) + 0.5);
  Real cbound = exp(Real(k + 2) * log(Real(2L)));
  return std::make_shared<ComplexStream>(1, kappa, cbound, bits, gen);
}

Complex epstein_gauss_term(long A, long B, long C, long p, long q, const Precision& prec) {
  PrecisionScope scope(prec.working_bits + 32);
  Real two_pi = Real(2L) * const_pi();
  Complex acc(Real(0L), Real(0L));
  for (long k1 = 0; k1 < q; ++k1)
    for (long k2 = 0; k2 < q; ++k2) {
      long Qv = ((A * k1 * k1 + B * k1 * k2 + C * k2 * k2) % q + q) % q;
      Real ang = -two_pi * Real(p) * Real(Qv) / Real(q);
      acc = acc + Complex(cos(ang), sin(ang));
    }
  return acc;
}

StreamPtr epstein_exp_dual_stream(long A, long B, long C, long p, long q, const Precision& prec) {
  long disc = 4 * A * C - B * B;
  if (A <= 0 || C <= 0 || disc <= 0)
    throw DomainError("quadratic form must be positive definite");
  if (q < 1) throw DomainError("twist denominator must be >= 1");
  long bits = 2 * prec.working_bits;
  auto gen = [A, B, C, p, q, disc](long n) {
    long N = n;
    Real two_pi = Real(2L) * const_pi();
    // S[a][b] = sum_{k1,k2 mod q} e^{-2 pi i p Q(k1,k2)/q} e^{2 pi i (a k1 + b k2)/q}
    std::vector<std::vector<Complex>> S(
        static_cast<std::size_t>(q),
        std::vector<Complex>(static_cast<std::size_t>(q), Complex(Real(0L), Real(0L))));
    for (long a = 0; a < q; ++a)
      for (long b = 0; b < q; ++b) {
        Complex acc(Real(0L), Real(0L));
        for (long k1 = 0; k1 < q; ++k1)
          for (long k2 = 0; k2 < q; ++k2) {
            long Qv = ((A * k1 * k1 + B * k1 * k2 + C * k2 * k2) % q + q) % q;
            long lin = ((a * k1 + b * k2) % q + q) % q;
            Real ang = two_pi * (Real(lin) - Real(p) * Real(Qv)) / Real(q);
            acc = acc + Complex(cos(ang), sin(ang));
          }
        S[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = acc;
      }
    std::vector<Complex> out(static_cast<std::size_t>(N), Complex(Real(0L), Real(0L)));
    long mb = isqrt_floor(4 * C * N / disc) + 1;
    long kb = isqrt_floor(4 * A * N / disc) + 1;
    for (long m = -mb; m <= mb; ++m)
      for (long k = -kb; k <= kb; ++k) {
        long nv = A * m * m + B * m * k + C * k * k;
        if (nv < 1 || nv > N) continue;
        long a = ((m % q) + q) % q, b = ((k % q) + q) % q;
        out[static_cast<std::size_t>(nv - 1)] =
            out[static_cast<std::size_t>(nv - 1)] +
            S[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      }
    Real inv_q = Real(1L) / Real(q);
    for (auto& v : out) v = v * inv_q;
    return out;
  };
  return std::make_shared<ComplexStream>(1, Real(1L), Real(24L * q), bits, gen);
}

StreamPtr char_exp_dual_stream(const DirichletCharacter& chi, long k, long p, long q,
                               const Precision& prec) {
  if (chi.q != q) throw DomainError("twist denominator must equal the character modulus");
  if (k < 1) throw DomainError("char_exp_dual_stream: k must be >= 1");
  long delta = chi.parity;
  long bits = 2 * prec.working_bits;
  DirichletCharacter cc = chi;
  auto gen = [cc, k, p, q, delta](long n) {
    Real pi = const_pi();
    // S[t] = sum_{r mod 2q} chi(r) e^{i pi (-p r^2 + t r)/q}
    std::vector<Complex> S(static_cast<std::size_t>(2 * q));
    for (long t = 0; t < 2 * q; ++t) {
      Complex acc(Real(0L), Real(0L));
      for (long r = 0; r < 2 * q; ++r) {
        Complex cv = cc.value(r);
        if (cv.re.is_zero() && cv.im.is_zero()) continue;
        long num = ((-p * r * r + t * r) % (2 * q) + 2 * q) % (2 * q);
        Real ang = pi * Real(num) / Real(q);
        acc = acc + cv * Complex(cos(ang), sin(ang));
      }
      S[static_cast<std::size_t>(t)] = acc;
    }
    auto w = [&S, q](long t) { return S[static_cast<std::size_t>(((t % (2 * q)) + 2 * q) % (2 * q))]; };
    std::vector<Complex> c1 = square_layer(n + 1, delta, 2 * q, w);
    std::vector<Complex> acc = c1;
    for (long j = 1; j < k; ++j) acc = sparse_convolve(c1, acc);
    Real norm = exp(Real::from_double(-static_cast<double>(k) / 2.0) * log(Real(2 * q)));
    std::vector<Complex> out(acc.begin() + 1, acc.end());
    for (auto& v : out) v = v * norm;
    return out;
  };
  Real kappa = Real::from_double(static_cast<double>(k) / 2.0 + (delta ? k / 2.0 : 0.0) + 0.5);
  Real cbound = exp(Real::from_double(static_cast<double>(k) / 2.0) * log(Real(2 * q))) *
                exp(Real(k + 2) * log(Real(2L)));
  return std::make_shared<ComplexStream>(1, kappa, cbound, bits, gen);
}

StreamPtr exp_dual_stream(long A, long B, long C, long p, long q, const Precision& prec) {
  return epstein_exp_dual_stream(A, B, C, p, q, prec);
}

StreamPtr exp_dual_stream(const DirichletCharacter& chi, long k, long p, long q,
                          const Precision& prec) {
  return char_exp_dual_stream(chi, k, p, q, prec);
}

}  // namespace hecklab::coeffs
