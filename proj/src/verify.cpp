#include "hecklab/verify.hpp"

#include <cctype>
#include <chrono>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <utility>

#ifndef HECKLAB_DEFAULT_GRID_DIR
#define HECKLAB_DEFAULT_GRID_DIR "data/grids"
#endif

#include "json.hpp"

#include "hecklab/coeffs.hpp"
#include "hecklab/hecke.hpp"
#include "hecklab/parallel.hpp"
#include "hecklab/power_sums.hpp"
#include "hecklab/specfun.hpp"
#include "hecklab/theta.hpp"

namespace hecklab::verify {
namespace {

namespace sf = specfun;
using hecke::HeckePair;

long guard_bits(const Precision& prec) {
  return prec.working_bits + 48 + prec.working_bits / 8;
}

// ---------------------------------------------------------------------------
// parameter parsing

std::string stripped(const std::string& text) {
  std::string t;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
  return t;
}

const std::string& need(const ParamMap& pm, const char* key) {
  auto it = pm.find(key);
  if (it == pm.end()) throw UsageError(std::string("missing parameter '") + key + "'");
  return it->second;
}

bool has(const ParamMap& pm, const char* key) { return pm.find(key) != pm.end(); }

Real parse_real(const std::string& text) {
  std::string t = stripped(text);
  if (t.empty()) throw UsageError("empty numeric parameter");
  if (t.find('/') != std::string::npos) {
    try {
      mpq_class q(t);
      q.canonicalize();
      return sf::real_from_mpq(q);
    } catch (const std::invalid_argument&) {
      throw UsageError("unparseable rational parameter: " + text);
    }
  }
  try {
    return Real(t);
  } catch (const DomainError&) {
    throw UsageError("unparseable numeric parameter: " + text);
  }
}

// Accepts "a", "bi", "a+bi", "a-bi"; exponents in either part are fine.
Complex parse_complex(const std::string& text) {
  std::string t = stripped(text);
  if (t.empty()) throw UsageError("empty numeric parameter");
  char tail = t.back();
  if (tail == 'i' || tail == 'I') {
    std::string body = t.substr(0, t.size() - 1);
    size_t cut = std::string::npos;
    for (size_t j = body.size(); j-- > 1;) {
      char c = body[j];
      if ((c == '+' || c == '-') && body[j - 1] != 'e' && body[j - 1] != 'E') {
        cut = j;
        break;
      }
    }
    std::string re_part = "0", im_part;
    if (cut == std::string::npos) {
      im_part = body;
    } else {
      re_part = body.substr(0, cut);
      im_part = body.substr(cut);
    }
    if (im_part.empty() || im_part == "+") im_part = "1";
    if (im_part == "-") im_part = "-1";
    return Complex(parse_real(re_part), parse_real(im_part));
  }
  return Complex(parse_real(t));
}

long parse_long(const std::string& text) {
  std::string t = stripped(text);
  size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(t, &pos);
  } catch (const std::logic_error&) {
    throw UsageError("unparseable integer parameter: " + text);
  }
  if (pos != t.size()) throw UsageError("unparseable integer parameter: " + text);
  return v;
}

Real real_param(const ParamMap& pm, const char* key) { return parse_real(need(pm, key)); }
Complex complex_param(const ParamMap& pm, const char* key) { return parse_complex(need(pm, key)); }
long long_param(const ParamMap& pm, const char* key) { return parse_long(need(pm, key)); }

HeckePair family_pair(const ParamMap& pm, const Precision& prec) {
  return hecke::build_pair(need(pm, "family"), prec);
}

// ---------------------------------------------------------------------------
// envelope-driven series summation

struct SideSum {
  Complex value;
  Real err;
  long n_used = 0;
};

struct Side {
  Complex value;
  Real err;
  std::vector<long> terms;
};

struct Evaluation {
  Side lhs;
  Side rhs;
};

constexpr long kSeriesCap = 4000000;

// coef(n) is the series coefficient, term(n, lam) the remaining factor at
// lam = scale * (n + offset).  envelope(lam) must majorize |term| on the
// tail; the coefficient is majorized by coef_c * idx^coef_kappa.  The loop
// stops once two envelope probes certify the remaining mass below the
// working threshold, so long gaps of zero coefficients are harmless.
template <class Coef, class Term, class Envelope>
SideSum sum_series(long first, const Real& offset, const Real& scale, Coef&& coef, Term&& term,
                   Envelope&& envelope, const Real& coef_c, const Real& coef_kappa,
                   const Precision& prec) {
  const Real one(1L);
  const Real unit = prec.target_eps();
  const Real round_unit = Real::pow2(8 - current_bits());
  Complex acc;
  Real err(0L);
  Real maxmag = Real::pow2(-2 * prec.working_bits);
  long n = first;
  while (true) {
    Real idx = Real(n) + offset;
    Complex c = coef(n);
    if (!c.is_zero()) {
      ValueWithError f = term(n, scale * idx);
      Complex t = c * f.value;
      acc += t;
      err += abs(c) * f.err + abs(t) * round_unit;
      Real m = abs(t);
      if (m > maxmag) maxmag = m;
    }
    if (n >= first + 2) {
      Real thresh = ldexp(unit * maxmag, -4);
      Real idx1 = idx + one;
      Real b1 = coef_c * pow(max(idx1, one), coef_kappa) * envelope(scale * idx1);
      if (b1 < thresh) {
        Real tail(0L);
        bool bounded = b1.is_zero();
        if (!bounded) {
          Real idx2 = idx + Real(2L);
          Real b2 = coef_c * pow(max(idx2, one), coef_kappa) * envelope(scale * idx2);
          if (b2 < b1) {
            Real ratio = b2 / b1;
            if (ratio < Real::from_double(0.95)) {
              tail = b1 / (one - ratio);
              bounded = true;
            } else {
              Real p = log(b1 / b2) / log(idx2 / idx1);
              if (p > Real::from_double(1.5)) {
                tail = b1 * idx1 / (p - one);
                bounded = true;
              }
            }
          }
        }
        if (bounded && tail < thresh) {
          err += tail;
          return {acc, err, n - first + 1};
        }
      }
    }
    ++n;
    if (n - first > kSeriesCap)
      throw TruncationError("series cap exceeded before the tail bound closed");
  }
}

// max(1/Gamma(nu+1), 1/Gamma(nu+2)); with it the normalized Bessel factors
// obey |Jt_nu(w)|, |It_nu(w)| <= C (1 + |w|) e^{|w|} for nu > -1.
Real itilde_norm(const Real& nu, const Precision& prec) {
  ValueWithError g1 = sf::gamma(Complex(nu + Real(1L)), prec);
  ValueWithError g2 = sf::gamma(Complex(nu + Real(2L)), prec);
  return max(Real(1L) / abs(g1.value), Real(1L) / abs(g2.value));
}

// K_nu(w) <= sqrt(2 pi / w) exp(nu^2/(2w) - w); widened slightly.
Real k_envelope(const Real& nu, const Real& w) {
  Real e = exp(nu * nu / ldexp(w, 1) - w);
  return ldexp(max(Real(1L), Real(1L) / sqrt(w)), 2) * e;
}

// ---------------------------------------------------------------------------
// exponential summation formulas (the J/I kernel family)
//
// Normalized form, obtained by dividing the power-weighted display by
// (y/2)^{r-1}:
//   sum a(n) e^{-lambda x} Jt_{r-1}(y sqrt(lambda))
//     = [phi(0)/Gamma(r)] + e^{-y^2/4x} x^{-r} (rho + sum b_eff(n) e^{-mu/x}
//         It_{r-1}(y sqrt(mu)/x)).
// leading_one moves the dual constant to the left side as the lattice
// origin term (Epstein case, where phi(0)/Gamma(r) = -1).

Evaluation exp_summation_core(const HeckePair& pair, const Complex& x, const Complex& y,
                              bool leading_one, bool include_phi0, const Precision& prec) {
  if (x.re.sign() <= 0) throw HypothesisError("requires Re x > 0");
  const Real rv = pair.r_value();
  const Real nu = rv - Real(1L);
  const Real cnu = itilde_norm(nu, prec);
  ValueWithError gr = sf::gamma(Complex(rv), prec);

  const Real a_off = sf::real_from_mpq(pair.lambda_seq.offset);
  const Real ay = abs(y);
  const Real rex = x.re;
  SideSum ls = sum_series(
      pair.a_first(), a_off, pair.scale(), [&](long n) { return pair.a(n); },
      [&](long, const Real& lam) {
        Real rt = sqrt(lam);
        ValueWithError j = sf::bessel_j_scaled(nu, y * Complex(rt), prec);
        Complex e = exp(-(x * Complex(lam)));
        return ValueWithError{e * j.value, abs(e) * j.err};
      },
      [&](const Real& lam) {
        Real rt = sqrt(lam);
        return cnu * (Real(1L) + ay * rt) * exp(ay * rt - rex * lam);
      },
      pair.a_coeffs->growth_C() * abs(pair.a_mult), pair.a_coeffs->growth_kappa(), prec);

  const Complex invx = Complex(1L) / x;
  const Real reinvx = invx.re;
  const Complex yox = y * invx;
  const Real ayox = abs(yox);
  const Real b_off = sf::real_from_mpq(pair.mu_seq.offset);
  SideSum bs = sum_series(
      pair.b_first(), b_off, pair.mu_scale(), [&](long n) { return pair.b_eff(n); },
      [&](long, const Real& mu) {
        Real rt = sqrt(mu);
        ValueWithError i = sf::bessel_i_scaled(nu, yox * Complex(rt), prec);
        Complex e = exp(-(invx * Complex(mu)));
        return ValueWithError{e * i.value, abs(e) * i.err};
      },
      [&](const Real& mu) {
        Real rt = sqrt(mu);
        return cnu * (Real(1L) + ayox * rt) * exp(ayox * rt - reinvx * mu);
      },
      pair.b_coeffs->growth_C() * abs(pair.b_mult * pair.omega), pair.b_coeffs->growth_kappa(),
      prec);

  Complex efac = exp(-(y * y) * invx * Real::from_double(0.25));
  Complex pre = efac * pow(x, -rv);
  Complex rhs_value = pre * (pair.rho + bs.value);
  Real rhs_err = abs(pre) * bs.err;
  if (include_phi0) {
    Complex c0 = pair.phi0 / gr.value;
    rhs_value += c0;
    rhs_err += abs(c0) * (gr.err / abs(gr.value));
  }
  Complex lhs_value = leading_one ? Complex(1L) + ls.value : ls.value;
  return {Side{lhs_value, ls.err, {ls.n_used}}, Side{rhs_value, rhs_err, {bs.n_used}}};
}

Evaluation eval_summation_main(const ParamMap& pm, const Precision& prec) {
  PrecisionScope scope(guard_bits(prec));
  HeckePair pair = family_pair(pm, prec);
  Complex x = complex_param(pm, "x");
  Complex y = complex_param(pm, "y");
  return exp_summation_core(pair, x, y, false, true, prec);
}

Evaluation eval_star_summation(const ParamMap& pm, const Precision& prec) {
  PrecisionScope scope(guard_bits(prec));
  HeckePair pair = family_pair(pm, prec);
  if (pair.family.kind != hecke::FamilyKind::ZetaAlphaStar)
    throw HypothesisError("STAR_SUMMATION applies to the zeta-alpha-star family");
  Complex x = complex_param(pm, "x");
  Complex y = complex_param(pm, "y");
  return exp_summation_core(pair, x, y, false, true, prec);
}

Evaluation eval_epstein_exp_summation(const ParamMap& pm, const Precision& prec) {
  PrecisionScope scope(guard_bits(prec));
  HeckePair pair = family_pair(pm, prec);
  if (pair.family.kind != hecke::FamilyKind::EpsteinExp)
    throw HypothesisError("EPSTEIN_EXP_SUMMATION applies to the epstein-exp family");
  Complex x = complex_param(pm, "x");
  Complex y = complex_param(pm, "y");
  return exp_summation_core(pair, x, y, true, false, prec);
}

Evaluation eval_char_exp_summation(const ParamMap& pm, const Precision& prec) {
  PrecisionScope scope(guard_bits(prec));
  HeckePair pair = family_pair(pm, prec);
  if (pair.family.kind != hecke::FamilyKind::CharKExp)
    throw HypothesisError("CHAR_EXP_SUMMATION applies to the char-k-exp family");
  // even character: the twisted theta constant vanishes only for odd p, q
  if (pair.delta == 0 && (pair.family.p % 2 == 0 || pair.family.q % 2 == 0))
    throw HypothesisError("even character requires odd p and q");
  Complex x = complex_param(pm, "x");
  Complex y = complex_param(pm, "y");
  return exp_summation_core(pair, x, y, false, false, prec);
}

Evaluation eval_cusp_twist(const ParamMap& pm, const Precision& prec) {
  PrecisionScope scope(guard_bits(prec));
  HeckePair pair = family_pair(pm, prec);
  if (pair.family.kind != hecke::FamilyKind::CuspTwist)
    throw HypothesisError("CUSP_TWIST_TRANSFORM applies to the cusp-twist family");
  Complex x = complex_param(pm, "x");
  Complex z = complex_param(pm, "z");
  if (x.re.sign() <= 0) throw HypothesisError("requires Re x > 0");
  const long k = pair.family.k;
  const Real nu = Real(k - 1);
  const Real cnu = itilde_norm(nu, prec);
  const Complex sx = sqrt(x);

  const Complex zsx = z * sx;
  const Real a_zs = abs(zsx);
  const Real rex = x.re;
  const Real a_off = sf::real_from_mpq(pair.lambda_seq.offset);
  SideSum ls = sum_series(
      pair.a_first(), a_off, pair.scale(), [&](long n) { return pair.a(n); },
      [&](long, const Real& lam) {
        Real rt = sqrt(lam);
        ValueWithError j = sf::bessel_j_scaled(nu, zsx * Complex(rt), prec);
        Complex e = exp(-(x * Complex(lam)));
        return ValueWithError{e * j.value, abs(e) * j.err};
      },
      [&](const Real& lam) {
        Real rt = sqrt(lam);
        return cnu * (Real(1L) + a_zs * rt) * exp(a_zs * rt - rex * lam);
      },
      pair.a_coeffs->growth_C() * abs(pair.a_mult), pair.a_coeffs->growth_kappa(), prec);
  Complex xpow = pow(x, ldexp(Real(k - 1), -1));

  const Complex invx = Complex(1L) / x;
  const Complex zosx = z / sx;
  const Real a_zo = abs(zosx);
  const Real reinvx = invx.re;
  const Real b_off = sf::real_from_mpq(pair.mu_seq.offset);
  SideSum bs = sum_series(
      pair.b_first(), b_off, pair.mu_scale(), [&](long n) { return pair.b_eff(n); },
      [&](long, const Real& mu) {
        Real rt = sqrt(mu);
        ValueWithError i = sf::bessel_i_scaled(nu, zosx * Complex(rt), prec);
        Complex e = exp(-(invx * Complex(mu)));
        return ValueWithError{e * i.value, abs(e) * i.err};
      },
      [&](const Real& mu) {
        Real rt = sqrt(mu);
        return cnu * (Real(1L) + a_zo * rt) * exp(a_zo * rt - reinvx * mu);
      },
      pair.b_coeffs->growth_C() * abs(pair.b_mult * pair.omega), pair.b_coeffs->growth_kappa(),
      prec);
  Complex pre = exp(-(z * z) * Real::from_double(0.25)) * pow(x, -ldexp(Real(k + 1), -1));

  return {Side{xpow * ls.value, abs(xpow) * ls.err, {ls.n_used}},
          Side{pre * bs.value, abs(pre) * bs.err, {bs.n_used}}};
}

// ---------------------------------------------------------------------------
// theta reflection formulas

Evaluation modular_core(const HeckePair& pair, const Complex& x, const Complex& y,
                        const Precision& prec) {
  if (x.re.sign() <= 0) throw HypothesisError("requires Re x > 0");
  theta::ThetaValue l = theta::theta_phi(pair, x, y, prec);
  Complex invx = Complex(1L) / x;
  theta::ThetaValue d = theta::theta_phi_dual(pair, invx, Complex::unit_i() * y * invx, prec);
  ValueWithError gr = sf::gamma(Complex(pair.r_value()), prec);
  Complex pre = pow(x, -pair.r_value()) * exp(-(y * y) * invx * Real::from_double(0.25));
  Complex rhs = pair.phi0 + pair.rho * gr.value * pre + pre * d.value;
  Real rerr = abs(pre) * d.err + abs(pair.rho) * gr.err * abs(pre);
  return {Side{l.value, l.err, {l.n_used}}, Side{rhs, rerr, {d.n_used}}};
}

Evaluation eval_bochner(const ParamMap& pm, const Precision& prec) {
  PrecisionScope scope(guard_bits(prec));
  HeckePair pair = family_pair(pm, prec);
  Complex x = complex_param(pm, "x");
  return modular_core(pair, x, Complex(0L), prec);
}

Evaluation eval_modular_theta(const ParamMap& pm, const Precision& prec) {
  PrecisionScope scope(guard_bits(prec));
  HeckePair pair = family_pair(pm, prec);
  Complex x = complex_param(pm, "x");
  Complex y = complex_param(pm, "y");
  return modular_core(pair, x, y, prec);
}

// ---------------------------------------------------------------------------
// symmetric-form character layer: phi(s) = sum a(m) lambda_m^{-s} with
// lambda_m = sqrt(pi/q) m and Gamma((s+delta)/2) on both sides.  Built
// directly from the character, independent of the square-support mapping.

struct CharB {
  long q = 1;
  int delta = 0;
  std::optional<coeffs::DirichletCharacter> chi;
  std::optional<coeffs::DirichletCharacter> chi_bar;
  Complex a_mult{2L};
  Complex b_mult{2L};
  Complex rho_b;
  Complex phi0_b;
  Real c;  // lambda_m = c m

  Complex a(long m) const { return chi ? a_mult * chi->value(m) : a_mult; }
  Complex b(long m) const { return chi_bar ? b_mult * chi_bar->value(m) : b_mult; }
};

CharB make_char_b(const ParamMap& pm, int delta, const Precision& prec) {
  long q = long_param(pm, "q");
  if (q < 1) throw HypothesisError("modulus must be positive");
  CharB d;
  d.q = q;
  d.delta = delta;
  Real pi = const_pi();
  d.c = sqrt(pi / Real(q));
  if (q == 1) {
    if (delta != 0) throw HypothesisError("no odd character exists modulo 1");
    d.rho_b = Complex(Real(2L) / sqrt(pi));
    d.phi0_b = Complex(-1L);
    return d;
  }
  coeffs::DirichletCharacter chi = has(pm, "index")
                                       ? coeffs::character(q, long_param(pm, "index"))
                                       : coeffs::primitive_character(q, delta);
  if (!chi.primitive) throw HypothesisError("character must be primitive");
  if (chi.parity != delta) throw HypothesisError("character parity does not match this identity");
  ValueWithError g = coeffs::gauss_sum(chi, prec);
  Real amp = delta == 0 ? Real(2L) : ldexp(sqrt(Real(q) / pi), 1);
  d.a_mult = Complex(amp);
  Complex ifac = delta == 1 ? -Complex::unit_i() : Complex(1L);
  d.b_mult = ifac * g.value * Complex(amp / sqrt(Real(q)));
  d.chi = chi;
  d.chi_bar = chi.conjugate();
  d.rho_b = Complex(0L);
  d.phi0_b = Complex(0L);
  return d;
}

Evaluation cosine_sine_core(const ParamMap& pm, const Precision& prec, int delta) {
  PrecisionScope scope(guard_bits(prec));
  CharB d = make_char_b(pm, delta, prec);
  Complex al = complex_param(pm, "alpha");
  Complex be = complex_param(pm, "beta");
  Real x = real_param(pm, "x");
  if (al.re.sign() <= 0) throw HypothesisError("requires Re alpha > 0");
  if (x.sign() <= 0) throw HypothesisError("requires x > 0");

  const Real abs_im_be = abs(be.im);
  const Real re_al = al.re;
  SideSum ls = sum_series(
      1, Real(0L), d.c, [&](long m) { return d.a(m); },
      [&](long, const Real& lam) {
        Real lx = lam * x;
        Complex osc = delta == 0 ? cos(be * Complex(lx)) : sin(be * Complex(lx));
        return ValueWithError{exp(-(al * Complex(lx * lx))) * osc, Real(0L)};
      },
      [&](const Real& lam) {
        Real lx = lam * x;
        return ldexp(exp(abs_im_be * lx - re_al * lx * lx), 1);
      },
      abs(d.a_mult), Real(0L), prec);

  Complex sal = sqrt(al);
  Complex efac = exp(-(be * be) / (al * Real(4L)));
  Complex ecoef = Complex(1L) / (al * Complex(x * x));
  Complex hcoef = be / (al * Complex(x));
  const Real re_ec = ecoef.re;
  const Real abs_hc = abs(hcoef);
  SideSum bs = sum_series(
      1, Real(0L), d.c, [&](long m) { return d.b(m); },
      [&](long, const Real& mu) {
        Complex hyp = delta == 0 ? cosh(hcoef * Complex(mu)) : sinh(hcoef * Complex(mu));
        return ValueWithError{exp(-(ecoef * Complex(mu * mu))) * hyp, Real(0L)};
      },
      [&](const Real& mu) { return ldexp(exp(abs_hc * mu - re_ec * mu * mu), 1); },
      abs(d.b_mult), Real(0L), prec);

  Complex dual_pre = efac / (sal * Complex(x));
  Complex rhs = dual_pre * bs.value;
  if (delta == 0) {
    rhs += d.phi0_b + Complex(sqrt(const_pi())) / sal * d.rho_b * efac / Complex(ldexp(x, 1));
  }
  return {Side{ls.value, ls.err, {ls.n_used}},
          Side{rhs, abs(dual_pre) * bs.err, {bs.n_used}}};
}

Evaluation eval_cosine_b0(const ParamMap& pm, const Precision& prec) {
  return cosine_sine_core(pm, prec, 0);
}

Evaluation eval_sine_b1(const ParamMap& pm, const Precision& prec) {
  return cosine_sine_core(pm, prec, 1);
}

// ---------------------------------------------------------------------------
// line integral against the confluent factor

Evaluation eval_integral_rep(const ParamMap& pm, const Precision& prec) {
  PrecisionScope scope(guard_bits(prec));
  HeckePair pair = family_pair(pm, prec);
  Real x = real_param(pm, "x");
  Complex z = complex_param(pm, "z");
  if (x.sign() <= 0) throw HypothesisError("requires x > 0");
  Real T = has(pm, "T") ? real_param(pm, "T") : theta::default_integral_cutoff(pair, x, z, prec);
  ValueWithError l = theta::integral_representation(pair, x, z, prec, T);
  theta::ThetaValue psi = theta::psi_jacobi(pair, Complex(x), z, prec);
  ValueWithError gr = sf::gamma(Complex(pair.r_value()), prec);
  Real xr2 = pow(x, ldexp(pair.r_value(), -1));
  Complex ez = exp(-(z * z) * Real::from_double(0.25));
  Complex rhs = Complex(xr2) * psi.value - pair.rho * gr.value * ez / Complex(xr2);
  Real rerr = xr2 * psi.err + abs(pair.rho * ez) * gr.err / xr2;
  return {Side{l.value, l.err, {}}, Side{rhs, rerr, {psi.n_used}}};
}

// ---------------------------------------------------------------------------
// functional equation through two independent split points

Evaluation eval_func_eq(const ParamMap& pm, const Precision& prec) {
  PrecisionScope scope(guard_bits(prec));
  HeckePair pair = family_pair(pm, prec);
  Complex s = complex_param(pm, "s");
  ValueWithError l = hecke::eval_eta(pair, s, prec, Real(5L) / Real(4L));
  ValueWithError r =
      hecke::eval_eta_dual(pair, Complex(pair.r_value()) - s, prec, Real(17L) / Real(20L));
  return {Side{l.value, l.err, {}}, Side{r.value, r.err, {}}};
}

// ---------------------------------------------------------------------------
// K-Bessel expansions of shifted power sums

Evaluation bessel_2f1_core(const ParamMap& pm, const Precision& prec, bool plus) {
  PrecisionScope scope(guard_bits(prec));
  HeckePair pair = family_pair(pm, prec);
  Real s = real_param(pm, "s");
  Real x = real_param(pm, "x");
  Real y = real_param(pm, "y");
  const Real rv = pair.r_value();
  if (x.sign() <= 0 || y.sign() < 0) throw HypothesisError("requires x > 0 and y >= 0");
  if (!plus && !(x > y)) throw HypothesisError("requires x > y");
  if (!(s > sf::real_from_mpq(pair.sigma_a)) || !(s > rv))
    throw HypothesisError("requires s beyond the abscissa of absolute convergence");

  Real dd = plus ? x * x + y * y : x * x - y * y;
  Real umax = y * y / dd;
  if (!(umax < Real::from_double(0.98)))
    throw HypothesisError("hypergeometric argument too close to the unit circle");

  ValueWithError gs = sf::gamma(Complex(s), prec);
  ValueWithError gr = sf::gamma(Complex(rv), prec);
  const Complex ha(ldexp(s, -1));
  const Complex hb(ldexp(s + Real(1L), -1));
  const Complex hc(rv);
  Real fmax =
      abs(sf::hyp2f1(ha, hb, hc, Complex(umax), prec).value) * Real::from_double(1.25) + Real(1L);

  const Real a_off = sf::real_from_mpq(pair.lambda_seq.offset);
  const Real y2 = y * y;
  SideSum ls = sum_series(
      pair.a_first(), a_off, pair.scale(), [&](long n) { return pair.a(n); },
      [&](long, const Real& lam) {
        Real base = lam + dd;
        Real u = ldexp(lam * y2, 2) / (base * base);
        ValueWithError h = sf::hyp2f1(ha, hb, hc, Complex(plus ? u : -u), prec);
        Real bp = pow(base, -s);
        return ValueWithError{h.value * Complex(bp), bp * h.err};
      },
      [&](const Real& lam) { return fmax * pow(lam, -s); },
      pair.a_coeffs->growth_C() * abs(pair.a_mult), pair.a_coeffs->growth_kappa(), prec);

  const Real korder = s - rv;
  const Real nu = rv - Real(1L);
  const Real cnu = itilde_norm(nu, prec);
  const Real b_off = sf::real_from_mpq(pair.mu_seq.offset);
  const Real two_y = ldexp(y, 1);
  const Real two_x = ldexp(x, 1);
  SideSum bs = sum_series(
      pair.b_first(), b_off, pair.mu_scale(), [&](long n) { return pair.b_eff(n); },
      [&](long, const Real& mu) {
        Real rt = sqrt(mu);
        ValueWithError bj = plus ? sf::bessel_j_scaled(nu, Complex(two_y * rt), prec)
                                 : sf::bessel_i_scaled(nu, Complex(two_y * rt), prec);
        ValueWithError bk = sf::bessel(sf::BesselKind::K, korder, Complex(two_x * rt), prec);
        Real p = pow(mu, ldexp(korder, -1));
        return ValueWithError{Complex(p) * bj.value * bk.value,
                              p * (abs(bj.value) * bk.err + abs(bk.value) * bj.err)};
      },
      [&](const Real& mu) {
        Real rt = sqrt(mu);
        Real w = two_y * rt;
        Real jb = cnu * (Real(1L) + w);
        if (!plus) jb *= exp(w);
        return pow(mu, ldexp(korder, -1)) * jb * k_envelope(korder, two_x * rt);
      },
      pair.b_coeffs->growth_C() * abs(pair.b_mult * pair.omega), pair.b_coeffs->growth_kappa(),
      prec);

  ValueWithError gsr = sf::gamma(Complex(korder), prec);
  Complex rho_term = pair.rho * Complex(pow(x, ldexp(rv - s, 1))) * gsr.value / gs.value;
  Complex phi_term = pair.phi0 * Complex(pow(dd, -s)) / gr.value;
  Complex kpre = Complex(ldexp(pow(x, rv - s), 1)) / gs.value;
  Complex rhs = rho_term + phi_term + kpre * bs.value;
  Real rerr = abs(kpre) * bs.err + abs(pair.rho) * gsr.err / abs(gs.value) +
              abs(phi_term) * gr.err / abs(gr.value);
  return {Side{ls.value / gr.value, ls.err / abs(gr.value), {ls.n_used}},
          Side{rhs, rerr, {bs.n_used}}};
}

Evaluation eval_bessel_plus(const ParamMap& pm, const Precision& prec) {
  return bessel_2f1_core(pm, prec, true);
}

Evaluation eval_bessel_minus(const ParamMap& pm, const Precision& prec) {
  return bessel_2f1_core(pm, prec, false);
}

Evaluation eval_berndt_k(const ParamMap& pm, const Precision& prec) {
  PrecisionScope scope(guard_bits(prec));
  HeckePair pair = family_pair(pm, prec);
  Real s = real_param(pm, "s");
  Real x = real_param(pm, "x");
  const Real rv = pair.r_value();
  if (x.sign() <= 0) throw HypothesisError("requires x > 0");
  if (!(s > sf::real_from_mpq(pair.sigma_a)) || !(s > rv))
    throw HypothesisError("requires s beyond the abscissa of absolute convergence");
  const Real x2 = x * x;

  const Real a_off = sf::real_from_mpq(pair.lambda_seq.offset);
  SideSum ls = sum_series(
      pair.a_first(), a_off, pair.scale(), [&](long n) { return pair.a(n); },
      [&](long, const Real& lam) {
        return ValueWithError{Complex(pow(lam + x2, -s)), Real(0L)};
      },
      [&](const Real& lam) { return pow(lam, -s); },
      pair.a_coeffs->growth_C() * abs(pair.a_mult), pair.a_coeffs->growth_kappa(), prec);

  const Real korder = s - rv;
  const Real b_off = sf::real_from_mpq(pair.mu_seq.offset);
  const Real two_x = ldexp(x, 1);
  SideSum bs = sum_series(
      pair.b_first(), b_off, pair.mu_scale(), [&](long n) { return pair.b_eff(n); },
      [&](long, const Real& mu) {
        Real rt = sqrt(mu);
        ValueWithError bk = sf::bessel(sf::BesselKind::K, korder, Complex(two_x * rt), prec);
        Real p = pow(mu, ldexp(korder, -1));
        return ValueWithError{Complex(p) * bk.value, p * bk.err};
      },
      [&](const Real& mu) {
        return pow(mu, ldexp(korder, -1)) * k_envelope(korder, two_x * sqrt(mu));
      },
      pair.b_coeffs->growth_C() * abs(pair.b_mult * pair.omega), pair.b_coeffs->growth_kappa(),
      prec);

  ValueWithError gs = sf::gamma(Complex(s), prec);
  ValueWithError gr = sf::gamma(Complex(rv), prec);
  ValueWithError gsr = sf::gamma(Complex(korder), prec);
  Complex t1 = pair.rho * gr.value * Complex(pow(x, ldexp(rv - s, 1))) * gsr.value / gs.value;
  Complex t2 = pair.phi0 * Complex(pow(x, ldexp(-s, 1)));
  Complex kpre = Complex(ldexp(pow(x, rv - s), 1)) / gs.value;
  Complex rhs = t1 + t2 + kpre * bs.value;
  Real rerr = abs(kpre) * bs.err + abs(t1) * (gr.err / abs(gr.value) + gsr.err / abs(gsr.value));
  return {Side{ls.value, ls.err, {ls.n_used}}, Side{rhs, rerr, {bs.n_used}}};
}

// ---------------------------------------------------------------------------
// quadratic-argument power sums (Euler-Maclaurin left sides)

Evaluation watson_core(const ParamMap& pm, const Precision& prec, bool cos_side) {
  PrecisionScope scope(guard_bits(prec));
  CharB d = make_char_b(pm, 0, prec);
  Real A = real_param(pm, "A");
  Real B = real_param(pm, "B");
  Real C = real_param(pm, "C");
  Real s = real_param(pm, "s");
  if (A.sign() <= 0) throw HypothesisError("requires A > 0");
  Real disc = ldexp(A * C, 2) - B * B;
  if (disc.sign() <= 0) throw HypothesisError("requires 4AC > B^2");
  if (!(s > Real::from_double(0.5))) throw HypothesisError("requires s > 1/2");
  Real kk = sqrt(disc) / ldexp(A, 1);
  Real beta0 = B / (ldexp(A, 1) * d.c);
  Real k0 = kk / d.c;

  std::vector<Complex> w(static_cast<size_t>(d.q));
  for (long j = 0; j < d.q; ++j) w[static_cast<size_t>(j)] = d.a(j);
  power_sums::QuadraticSumSpec sp{Complex(s), beta0, k0, w, false};
  power_sums::QuadraticSumSpec sm{Complex(s), -beta0, k0, w, false};
  ValueWithError lp = power_sums::quadratic_power_sum(sp, prec);
  ValueWithError lm = power_sums::quadratic_power_sum(sm, prec);
  Real pref = pow(A, -s) * pow(d.c, ldexp(-s, 1));
  Complex lhs_v;
  if (cos_side) {
    if (C.sign() <= 0) throw HypothesisError("requires C > 0");
    lhs_v = Complex(pref) * (lp.value + lm.value) - Complex(ldexp(pow(C, -s), 1)) * d.phi0_b;
  } else {
    lhs_v = Complex(pref) * (lp.value - lm.value);
  }
  Real lhs_e = (lp.err + lm.err) * pref;

  ValueWithError gs = sf::gamma(Complex(s), prec);
  ValueWithError gh = sf::gamma(Complex(s - Real::from_double(0.5)), prec);
  const Real nu = s - Real::from_double(0.5);
  const Real twok = ldexp(kk, 1);
  const Real boa = B / A;
  SideSum ks = sum_series(
      1, Real(0L), d.c, [&](long m) { return d.b(m); },
      [&](long, const Real& mu) {
        ValueWithError kv = sf::bessel(sf::BesselKind::K, nu, Complex(twok * mu), prec);
        Real p = pow(mu, nu) * (cos_side ? cos(boa * mu) : sin(boa * mu));
        return ValueWithError{kv.value * Complex(p), abs(p) * kv.err};
      },
      [&](const Real& mu) { return pow(mu, nu) * k_envelope(nu, twok * mu); },
      abs(d.b_mult), Real(0L), prec);
  Complex coef = Complex(ldexp(pow(kk, Real::from_double(0.5) - s) * pow(A, -s), 2)) / gs.value;
  Complex rhs_v;
  Real rhs_e = abs(coef) * ks.err;
  if (cos_side) {
    Complex main = d.rho_b * Complex(sqrt(const_pi())) * gh.value / gs.value *
                   Complex(pow(A, -s) * pow(kk, Real(1L) - ldexp(s, 1)));
    rhs_v = main + coef * ks.value;
    rhs_e += abs(main) * (gh.err / abs(gh.value) + gs.err / abs(gs.value));
  } else {
    rhs_v = -(coef * ks.value);
  }
  return {Side{lhs_v, lhs_e, {0, 0}}, Side{rhs_v, rhs_e, {ks.n_used}}};
}

Evaluation eval_watson_cos(const ParamMap& pm, const Precision& prec) {
  return watson_core(pm, prec, true);
}

Evaluation eval_watson_sin(const ParamMap& pm, const Precision& prec) {
  return watson_core(pm, prec, false);
}

Evaluation eval_kober(const ParamMap& pm, const Precision& prec) {
  PrecisionScope scope(guard_bits(prec));
  Real s = real_param(pm, "s");
  Real x = real_param(pm, "x");
  Real y = real_param(pm, "y");
  if (x.sign() <= 0) throw HypothesisError("requires x > 0");
  if (!(s > Real::from_double(0.5))) throw HypothesisError("requires s > 1/2");
  power_sums::QuadraticSumSpec spec{Complex(s), y, x, {Complex(1L)}, true};
  ValueWithError l = power_sums::quadratic_power_sum(spec, prec);

  ValueWithError gs = sf::gamma(Complex(s), prec);
  ValueWithError gh = sf::gamma(Complex(s - Real::from_double(0.5)), prec);
  const Real pi = const_pi();
  const Real nu = s - Real::from_double(0.5);
  const Real twopix = ldexp(pi * x, 1);
  const Real twopiy = ldexp(pi * y, 1);
  SideSum ks = sum_series(
      1, Real(0L), Real(1L), [](long) { return Complex(1L); },
      [&](long, const Real& n) {
        ValueWithError kv = sf::bessel(sf::BesselKind::K, nu, Complex(twopix * n), prec);
        Real p = pow(n, nu) * cos(twopiy * n);
        return ValueWithError{kv.value * Complex(p), abs(p) * kv.err};
      },
      [&](const Real& n) { return pow(n, nu) * k_envelope(nu, twopix * n); },
      Real(1L), Real(0L), prec);
  Complex t1 = Complex(sqrt(pi) * pow(x, Real(1L) - ldexp(s, 1))) * gh.value / gs.value;
  Complex coef = Complex(ldexp(pow(pi, s) / pow(x, nu), 2)) / gs.value;
  Complex rhs = t1 + coef * ks.value;
  Real rerr = abs(coef) * ks.err + abs(t1) * (gh.err / abs(gh.value) + gs.err / abs(gs.value));
  return {Side{l.value, l.err, {0}}, Side{rhs, rerr, {ks.n_used}}};
}

Evaluation char_watson_core(const ParamMap& pm, const Precision& prec, int parity) {
  PrecisionScope scope(guard_bits(prec));
  long q = long_param(pm, "q");
  if (q < 3) throw HypothesisError("requires modulus q >= 3");
  coeffs::DirichletCharacter chi = has(pm, "index")
                                       ? coeffs::character(q, long_param(pm, "index"))
                                       : coeffs::primitive_character(q, parity);
  if (!chi.primitive || chi.parity != parity)
    throw HypothesisError("character must be primitive with the required parity");
  Real s = real_param(pm, "s");
  Real x = real_param(pm, "x");
  Real y = real_param(pm, "y");
  if (x.sign() <= 0) throw HypothesisError("requires x > 0");
  if (!(s > Real::from_double(0.5))) throw HypothesisError("requires s > 1/2");

  std::vector<Complex> w(static_cast<size_t>(q));
  for (long j = 0; j < q; ++j) w[static_cast<size_t>(j)] = chi.value(j);
  power_sums::QuadraticSumSpec spec{Complex(s), y, x, w, true};
  ValueWithError l = power_sums::quadratic_power_sum(spec, prec);

  coeffs::DirichletCharacter chib = chi.conjugate();
  ValueWithError g = coeffs::gauss_sum(chi, prec);
  ValueWithError gs = sf::gamma(Complex(s), prec);
  const Real pi = const_pi();
  const Real nu = s - Real::from_double(0.5);
  const Real xq = ldexp(pi * x / Real(q), 1);
  const Real yq = ldexp(pi * y / Real(q), 1);
  const bool odd = parity == 1;
  SideSum ks = sum_series(
      1, Real(0L), Real(1L), [&](long n) { return chib.value(n); },
      [&](long, const Real& n) {
        ValueWithError kv = sf::bessel(sf::BesselKind::K, nu, Complex(xq * n), prec);
        Real p = pow(n, nu) * (odd ? sin(yq * n) : cos(yq * n));
        return ValueWithError{kv.value * Complex(p), abs(p) * kv.err};
      },
      [&](const Real& n) { return pow(n, nu) * k_envelope(nu, xq * n); },
      Real(1L), Real(0L), prec);
  Complex pref = Complex(ldexp(pow(x, Real::from_double(0.5) - s), 2)) * g.value / gs.value /
                 Complex(sqrt(pi)) * Complex(pow(pi / Real(q), s + Real::from_double(0.5)));
  if (odd) pref = pref * Complex::unit_i();
  Complex rhs = pref * ks.value;
  Real rerr = abs(pref) * ks.err + abs(rhs) * (g.err / abs(g.value) + gs.err / abs(gs.value));
  return {Side{l.value, l.err, {0}}, Side{rhs, rerr, {ks.n_used}}};
}

Evaluation eval_char_watson_even(const ParamMap& pm, const Precision& prec) {
  return char_watson_core(pm, prec, 0);
}

Evaluation eval_char_watson_odd(const ParamMap& pm, const Precision& prec) {
  return char_watson_core(pm, prec, 1);
}

// ---------------------------------------------------------------------------
// hypergeometric power sums with raw integer abscissas

Evaluation eval_ralpha_watson(const ParamMap& pm, const Precision& prec) {
  PrecisionScope scope(guard_bits(prec));
  HeckePair pair = hecke::build_pair("zeta-alpha:alpha=" + stripped(need(pm, "alpha")), prec);
  Real s = real_param(pm, "s");
  Real x = real_param(pm, "x");
  Real y = real_param(pm, "y");
  const Real half_alpha = pair.r_value();  // alpha / 2
  if (x.sign() <= 0 || y.sign() < 0) throw HypothesisError("requires x > 0 and y >= 0");
  if (!(s > half_alpha)) throw HypothesisError("requires s > alpha/2");
  const Real c2 = x * x + y * y;
  Real umax = y * y / c2;
  if (!(umax < Real::from_double(0.98)))
    throw HypothesisError("hypergeometric argument too close to the unit circle");

  const Complex ha(ldexp(s, -1));
  const Complex hb(ldexp(s + Real(1L), -1));
  const Complex hc(half_alpha);
  Real fmax =
      abs(sf::hyp2f1(ha, hb, hc, Complex(umax), prec).value) * Real::from_double(1.25) + Real(1L);
  const Real y2 = y * y;
  SideSum ls = sum_series(
      pair.a_first(), Real(0L), Real(1L), [&](long n) { return pair.a(n); },
      [&](long, const Real& n) {
        Real base = n + c2;
        Real u = ldexp(n * y2, 2) / (base * base);
        ValueWithError h = sf::hyp2f1(ha, hb, hc, Complex(u), prec);
        Real bp = pow(base, -s);
        return ValueWithError{h.value * Complex(bp), bp * h.err};
      },
      [&](const Real& n) { return fmax * pow(n, -s); },
      pair.a_coeffs->growth_C() * abs(pair.a_mult), pair.a_coeffs->growth_kappa(), prec);
  Complex lhs = Complex(pow(c2, -s)) + ls.value;

  ValueWithError gs = sf::gamma(Complex(s), prec);
  ValueWithError gha = sf::gamma(Complex(half_alpha), prec);
  const Real korder = s - half_alpha;
  ValueWithError gsa = sf::gamma(Complex(korder), prec);
  const Real pi = const_pi();
  const Real nuj = half_alpha - Real(1L);
  const Real cnu = itilde_norm(nuj, prec);
  const Real fy = ldexp(pi * y, 1);
  const Real fx = ldexp(pi * x, 1);
  SideSum ks = sum_series(
      pair.a_first(), Real(0L), Real(1L), [&](long n) { return pair.a(n); },
      [&](long, const Real& n) {
        Real rt = sqrt(n);
        ValueWithError bj = sf::bessel_j_scaled(nuj, Complex(fy * rt), prec);
        ValueWithError bk = sf::bessel(sf::BesselKind::K, korder, Complex(fx * rt), prec);
        Real p = pow(n, ldexp(korder, -1));
        return ValueWithError{Complex(p) * bj.value * bk.value,
                              p * (abs(bj.value) * bk.err + abs(bk.value) * bj.err)};
      },
      [&](const Real& n) {
        Real rt = sqrt(n);
        return pow(n, ldexp(korder, -1)) * cnu * (Real(1L) + fy * rt) *
               k_envelope(korder, fx * rt);
      },
      pair.a_coeffs->growth_C() * abs(pair.a_mult), pair.a_coeffs->growth_kappa(), prec);

  Complex t1 = Complex(pow(pi, half_alpha) * pow(x, ldexp(half_alpha - s, 1))) * gsa.value /
               gs.value;
  Complex coef =
      Complex(ldexp(pow(pi, s) * pow(x, half_alpha - s), 1)) * gha.value / gs.value;
  Complex rhs = t1 + coef * ks.value;
  Real rerr = abs(coef) * ks.err + abs(t1) * (gsa.err / abs(gsa.value) + gs.err / abs(gs.value));
  return {Side{lhs, ls.err, {ls.n_used}}, Side{rhs, rerr, {ks.n_used}}};
}

Evaluation eval_epstein_watson(const ParamMap& pm, const Precision& prec) {
  PrecisionScope scope(guard_bits(prec));
  long A = long_param(pm, "A"), B = long_param(pm, "B"), C = long_param(pm, "C");
  long disc = 4 * A * C - B * B;
  if (A <= 0 || disc <= 0) throw HypothesisError("requires a positive definite form");
  coeffs::StreamPtr reps = coeffs::quadratic_reps(A, B, C);
  Real s = real_param(pm, "s");
  Real x = real_param(pm, "x");
  Real y = real_param(pm, "y");
  if (x.sign() <= 0 || y.sign() < 0) throw HypothesisError("requires x > 0 and y >= 0");
  if (!(s > Real(1L))) throw HypothesisError("requires s > 1");
  const Real c2 = x * x + y * y;
  Real umax = y * y / c2;
  if (!(umax < Real::from_double(0.98)))
    throw HypothesisError("hypergeometric argument too close to the unit circle");

  const Complex ha(ldexp(s, -1));
  const Complex hb(ldexp(s + Real(1L), -1));
  const Complex hc{Real(1L)};
  Real fmax =
      abs(sf::hyp2f1(ha, hb, hc, Complex(umax), prec).value) * Real::from_double(1.25) + Real(1L);
  const Real y2 = y * y;
  auto coef = [&](long n) {
    reps->ensure(n);
    return reps->at(n);
  };
  SideSum ls = sum_series(
      reps->first_index(), Real(0L), Real(1L), coef,
      [&](long, const Real& n) {
        Real base = n + c2;
        Real u = ldexp(n * y2, 2) / (base * base);
        ValueWithError h = sf::hyp2f1(ha, hb, hc, Complex(u), prec);
        Real bp = pow(base, -s);
        return ValueWithError{h.value * Complex(bp), bp * h.err};
      },
      [&](const Real& n) { return fmax * pow(n, -s); }, reps->growth_C(), reps->growth_kappa(),
      prec);
  Complex lhs = Complex(pow(c2, -s)) + ls.value;

  ValueWithError gs = sf::gamma(Complex(s), prec);
  const Real pi = const_pi();
  const Real sd = sqrt(Real(disc));
  const Real korder = s - Real(1L);
  const Real fy = ldexp(ldexp(pi, 1) * y / sd, 1);  // 4 pi y / sqrt(disc)
  const Real fx = ldexp(ldexp(pi, 1) * x / sd, 1);
  SideSum ks = sum_series(
      reps->first_index(), Real(0L), Real(1L), coef,
      [&](long, const Real& n) {
        Real rt = sqrt(n);
        ValueWithError bj = sf::bessel_j_scaled(Real(0L), Complex(fy * rt), prec);
        ValueWithError bk = sf::bessel(sf::BesselKind::K, korder, Complex(fx * rt), prec);
        Real p = pow(n, ldexp(korder, -1));
        return ValueWithError{Complex(p) * bj.value * bk.value,
                              p * (abs(bj.value) * bk.err + abs(bk.value) * bj.err)};
      },
      [&](const Real& n) {
        Real rt = sqrt(n);
        return pow(n, ldexp(korder, -1)) * (Real(1L) + fy * rt) *
               k_envelope(korder, fx * rt);
      },
      reps->growth_C(), reps->growth_kappa(), prec);

  Real t1 = ldexp(pi, 1) / sd * pow(x, ldexp(Real(1L) - s, 1)) / (s - Real(1L));
  Complex coefk = Complex(ldexp(pow(x, Real(1L) - s), 1)) / gs.value *
                  Complex(pow(ldexp(pi, 1) / sd, s));
  Complex rhs = Complex(t1) + coefk * ks.value;
  Real rerr = abs(coefk) * ks.err + t1 * gs.err / abs(gs.value);
  return {Side{lhs, ls.err, {ls.n_used}}, Side{rhs, rerr, {ks.n_used}}};
}

Evaluation eval_cusp_watson(const ParamMap& pm, const Precision& prec) {
  PrecisionScope scope(guard_bits(prec));
  HeckePair pair = family_pair(pm, prec);
  if (pair.family.kind != hecke::FamilyKind::Cusp)
    throw HypothesisError("CUSP_WATSON applies to the untwisted cusp family");
  const long k = pair.family.k;
  Real s = real_param(pm, "s");
  Real x = real_param(pm, "x");
  Real y = real_param(pm, "y");
  if (x.sign() <= 0 || y.sign() < 0) throw HypothesisError("requires x > 0 and y >= 0");
  if (!(s > ldexp(Real(k + 1), -1))) throw HypothesisError("requires s > (k+1)/2");
  const Real c2 = x * x + y * y;
  Real umax = y * y / c2;
  if (!(umax < Real::from_double(0.98)))
    throw HypothesisError("hypergeometric argument too close to the unit circle");

  const Complex ha(ldexp(s, -1));
  const Complex hb(ldexp(s + Real(1L), -1));
  const Complex hc{Real(k)};
  Real fmax =
      abs(sf::hyp2f1(ha, hb, hc, Complex(umax), prec).value) * Real::from_double(1.25) + Real(1L);
  const Real y2 = y * y;
  SideSum ls = sum_series(
      pair.a_first(), Real(0L), Real(1L), [&](long n) { return pair.a(n); },
      [&](long, const Real& n) {
        Real base = n + c2;
        Real u = ldexp(n * y2, 2) / (base * base);
        ValueWithError h = sf::hyp2f1(ha, hb, hc, Complex(u), prec);
        Real bp = pow(base, -s);
        return ValueWithError{h.value * Complex(bp), bp * h.err};
      },
      [&](const Real& n) { return fmax * pow(n, -s); },
      pair.a_coeffs->growth_C() * abs(pair.a_mult), pair.a_coeffs->growth_kappa(), prec);

  ValueWithError gs = sf::gamma(Complex(s), prec);
  const Real pi = const_pi();
  const Real sk = s - Real(k);
  const Real korder = abs(sk);
  const Real nuj = Real(k - 1);
  const Real cnu = itilde_norm(nuj, prec);
  const Real fy = ldexp(pi * y, 2);
  const Real fx = ldexp(pi * x, 2);
  SideSum ks = sum_series(
      pair.a_first(), Real(0L), Real(1L), [&](long n) { return pair.a(n); },
      [&](long, const Real& n) {
        Real rt = sqrt(n);
        ValueWithError bj = sf::bessel_j_scaled(nuj, Complex(fy * rt), prec);
        ValueWithError bk = sf::bessel(sf::BesselKind::K, korder, Complex(fx * rt), prec);
        Real p = pow(n, ldexp(sk, -1));
        return ValueWithError{Complex(p) * bj.value * bk.value,
                              p * (abs(bj.value) * bk.err + abs(bk.value) * bj.err)};
      },
      [&](const Real& n) {
        Real rt = sqrt(n);
        return pow(n, ldexp(sk, -1)) * cnu * (Real(1L) + fy * rt) * k_envelope(korder, fx * rt);
      },
      pair.a_coeffs->growth_C() * abs(pair.a_mult), pair.a_coeffs->growth_kappa(), prec);

  Real sgn = (k / 2) % 2 == 0 ? Real(1L) : Real(-1L);
  Complex coef = Complex(ldexp(pow(ldexp(pi, 1), s), 1) * sf::factorial_real(k - 1) * sgn *
                         pow(x, Real(k) - s)) /
                 gs.value;
  Complex rhs = coef * ks.value;
  Real rerr = abs(coef) * ks.err + abs(rhs) * gs.err / abs(gs.value);
  return {Side{ls.value, ls.err, {ls.n_used}}, Side{rhs, rerr, {ks.n_used}}};
}

// ---------------------------------------------------------------------------
// dispatch

using EvalFn = Evaluation (*)(const ParamMap&, const Precision&);

const std::map<std::string, EvalFn>& evaluator_table() {
  static const std::map<std::string, EvalFn> table = {
      {"SUMMATION_MAIN", eval_summation_main},
      {"STAR_SUMMATION", eval_star_summation},
      {"EPSTEIN_EXP_SUMMATION", eval_epstein_exp_summation},
      {"CHAR_EXP_SUMMATION", eval_char_exp_summation},
      {"CUSP_TWIST_TRANSFORM", eval_cusp_twist},
      {"BOCHNER", eval_bochner},
      {"MODULAR_THETA", eval_modular_theta},
      {"COSINE_B0", eval_cosine_b0},
      {"SINE_B1", eval_sine_b1},
      {"INTEGRAL_REP", eval_integral_rep},
      {"FUNC_EQ", eval_func_eq},
      {"BESSEL_2F1_PLUS", eval_bessel_plus},
      {"BESSEL_2F1_MINUS", eval_bessel_minus},
      {"BERNDT_K", eval_berndt_k},
      {"WATSON_COS", eval_watson_cos},
      {"WATSON_SIN", eval_watson_sin},
      {"KOBER", eval_kober},
      {"RALPHA_WATSON", eval_ralpha_watson},
      {"EPSTEIN_WATSON", eval_epstein_watson},
      {"CHAR_WATSON_EVEN", eval_char_watson_even},
      {"CHAR_WATSON_ODD", eval_char_watson_odd},
      {"CUSP_WATSON", eval_cusp_watson},
  };
  return table;
}

}  // namespace

Real parse_real_text(const std::string& text) { return parse_real(text); }
Complex parse_complex_text(const std::string& text) { return parse_complex(text); }
long parse_long_text(const std::string& text) { return parse_long(text); }

const std::vector<std::string>& identity_ids() {
  static const std::vector<std::string> ids = {
      "SUMMATION_MAIN",   "STAR_SUMMATION",  "EPSTEIN_EXP_SUMMATION", "CHAR_EXP_SUMMATION",
      "CUSP_TWIST_TRANSFORM", "BOCHNER",     "MODULAR_THETA",         "COSINE_B0",
      "SINE_B1",          "INTEGRAL_REP",    "FUNC_EQ",               "BESSEL_2F1_PLUS",
      "BESSEL_2F1_MINUS", "BERNDT_K",        "WATSON_COS",            "WATSON_SIN",
      "KOBER",            "RALPHA_WATSON",   "EPSTEIN_WATSON",        "CHAR_WATSON_EVEN",
      "CHAR_WATSON_ODD",  "CUSP_WATSON"};
  return ids;
}

Real default_tolerance(const Precision& prec) {
  PrecisionScope scope(guard_bits(prec));
  Real digits = Real::from_double(-0.6 * static_cast<double>(prec.decimal_digits()));
  return exp(digits * log(Real(10L)));
}

VerificationReport verify_identity(const std::string& id, const ParamMap& params,
                                   const Precision& prec, const Real& tol) {
  auto start = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.id = id;
  rep.params = params;
  const auto& table = evaluator_table();
  auto it = table.find(id);
  if (it == table.end()) throw UsageError("unknown identity id: " + id);
  try {
    Evaluation ev = it->second(params, prec);
    PrecisionScope scope(guard_bits(prec));
    rep.lhs = ev.lhs.value;
    rep.rhs = ev.rhs.value;
    rep.truncation = ev.lhs.terms;
    rep.truncation.insert(rep.truncation.end(), ev.rhs.terms.begin(), ev.rhs.terms.end());
    rep.abs_residual = abs(rep.lhs - rep.rhs);
    Real span = max(abs(rep.lhs), abs(rep.rhs));
    Real denom = max(span, Real::pow2(-4 * prec.working_bits));
    rep.rel_residual = rep.abs_residual / denom;
    Real err_rel = (ev.lhs.err + ev.rhs.err) / denom;
    rep.status = (rep.rel_residual <= tol && err_rel <= ldexp(tol, -2)) ? "PASS" : "FAIL";
  } catch (const TruncationError&) {
    rep.abs_residual = Real(0L);
    rep.rel_residual = Real(0L);
    rep.status = "INCONCLUSIVE";
  } catch (const QuadratureError&) {
    rep.abs_residual = Real(0L);
    rep.rel_residual = Real(0L);
    rep.status = "INCONCLUSIVE";
  }
  rep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

VerificationReport verify_identity(const std::string& id, const ParamMap& params,
                                   const Precision& prec) {
  return verify_identity(id, params, prec, default_tolerance(prec));
}

std::vector<SuiteEntry> load_suite(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open suite file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("malformed suite file " + path + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array())
    throw UsageError("suite file must hold an object with an 'entries' array");
  std::vector<SuiteEntry> out;
  for (const auto& e : doc["entries"]) {
    if (!e.is_object() || !e.contains("id") || !e["id"].is_string())
      throw UsageError("every suite entry needs a string 'id'");
    SuiteEntry se;
    se.id = e["id"].get<std::string>();
    if (e.contains("params")) {
      if (!e["params"].is_object()) throw UsageError("entry 'params' must be an object");
      for (const auto& [key, value] : e["params"].items())
        se.params[key] = value.is_string() ? value.get<std::string>() : value.dump();
    }
    out.push_back(std::move(se));
  }
  return out;
}

std::string default_suite_path(const std::string& name) {
  return std::string(HECKLAB_DEFAULT_GRID_DIR) + "/" + name + ".json";
}

std::vector<VerificationReport> run_suite(const std::vector<SuiteEntry>& entries,
                                          const Precision& prec, bool parallel) {
  Real tol = default_tolerance(prec);
  std::vector<VerificationReport> out(entries.size());
  parallel_for(static_cast<long>(entries.size()), parallel, [&](long i) {
    out[static_cast<size_t>(i)] =
        verify_identity(entries[static_cast<size_t>(i)].id, entries[static_cast<size_t>(i)].params,
                        prec, tol);
  });
  return out;
}

}  // namespace hecklab::verify
