#include "hecklab/theta.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <vector>

#include "hecklab/coeffs.hpp"
#include "hecklab/parallel.hpp"
#include "hecklab/specfun.hpp"

namespace hecklab::theta {

namespace sf = specfun;
using hecke::HeckePair;

namespace {

struct SideView {
  coeffs::StreamPtr stream;
  Complex mult;
  Real scale;
  Real offset;
  long first;
};

SideView primary_side(const HeckePair& pair) {
  return {pair.a_coeffs, pair.a_mult, pair.scale(),
          sf::real_from_mpq(pair.lambda_seq.offset), pair.a_first()};
}

SideView dual_side(const HeckePair& pair) {
  return {pair.b_coeffs, pair.b_mult * pair.omega, pair.mu_scale(),
          sf::real_from_mpq(pair.mu_seq.offset), pair.b_first()};
}

constexpr long kThetaCap = 4000000;

// Sum_{n >= first} c(n) e^{-lambda_n x} Jn_{nu}(sqrt(lambda_n) y) with
// nu = r - 1, then multiply by Gamma(r).  Terms are cut once an absolute
// envelope C n^kappa |mult| e^{sqrt(lambda)|y| - lambda Re x} (valid for
// the normalized Bessel factor up to a fixed constant) falls below the
// working threshold; the envelope is immune to gaps of exact zeros in the
// coefficient stream.
ThetaValue theta_sum(const SideView& side, const Real& rv, const Complex& x, const Complex& y,
                     const Precision& prec) {
  if (!(Real(0L) < x.re)) throw DomainError("theta sum requires Re x > 0");
  long wb = prec.working_bits;
  PrecisionScope scope(wb + 48 + wb / 8);
  Real nu = rv - Real(1L);
  auto gr = sf::gamma(Complex(rv), prec);
  Real inv_gr = Real(1L) / abs(gr.value);
  Real bnorm = max(Real(1L), inv_gr) * Real(3L);
  Real ay = abs(y);
  Real kappa = side.stream->growth_kappa();
  Real cmul = side.stream->growth_C() * abs(side.mult) * bnorm;
  Real unit = prec.target_eps();

  Complex acc(0L);
  Real err(0L);
  Real maxmag(1L);
  long n = side.first;
  long used = side.first;
  Real prev_bound(0L);
  bool decaying = false;
  while (true) {
    side.stream->ensure(n);
    Real idx = Real(n) + side.offset;
    Real lam = side.scale * idx;
    Real sl = sqrt(lam);
    Complex coef = side.mult * side.stream->at(n);
    if (!coef.is_zero()) {
      Complex ex = exp(x * (-lam));
      auto jn = sf::bessel_j_scaled(nu, Complex(sl) * y, prec);
      Complex term = coef * ex * jn.value;
      err += abs(coef) * abs(ex) * jn.err + abs(term) * Real::pow2(16 - wb - 32);
      acc += term;
      Real m = abs(term);
      if (m > maxmag) maxmag = m;
    }
    used = n;
    Real bound = cmul * pow(max(idx, Real(1L)), kappa) * exp(sl * ay - lam * x.re) *
                 (Real(1L) + sl * ay);
    Real thresh = ldexp(unit * maxmag, -6);
    if (decaying && bound < prev_bound && bound < thresh && n > side.first) {
      // Geometric tail: the exponential ratio between consecutive bounds.
      Real ratio = bound / prev_bound;
      Real tail = bound;
      if (ratio < Real::from_double(0.9)) tail = bound / (Real(1L) - ratio);
      err += tail;
      break;
    }
    if (bound < prev_bound) decaying = true;
    prev_bound = bound;
    ++n;
    if (n - side.first > kThetaCap) throw TruncationError("theta series truncation cap reached");
  }
  Complex value = gr.value * acc;
  Real verr = abs(gr.value) * err + abs(acc) * gr.err;
  return {value, verr, used};
}

}  // namespace

ThetaValue theta_phi(const HeckePair& pair, const Complex& x, const Complex& y,
                     const Precision& prec) {
  pair.require_build_precision(prec);
  return theta_sum(primary_side(pair), pair.r_value(), x, y, prec);
}

ThetaValue theta_phi_dual(const HeckePair& pair, const Complex& x, const Complex& y,
                          const Precision& prec) {
  pair.require_build_precision(prec);
  return theta_sum(dual_side(pair), pair.r_value(), x, y, prec);
}

ThetaValue psi_jacobi(const HeckePair& pair, const Complex& x, const Complex& z,
                      const Precision& prec) {
  return theta_phi(pair, x, sqrt(x) * z, prec);
}

ThetaValue psi_jacobi_dual(const HeckePair& pair, const Complex& x, const Complex& z,
                           const Precision& prec) {
  return theta_phi_dual(pair, x, sqrt(x) * z, prec);
}

namespace {

// One integrand evaluation: eta(r/2 + it) 1F1(r/2 + it; r; -z^2/4) x^{-it}.
Complex eta_integrand(const HeckePair& pair, const Real& t, const Complex& kummer_z,
                      const Real& log_x, const Precision& prec, Real& err_out) {
  Real rv = pair.r_value();
  auto eta = hecke::eval_eta_line(pair, t, prec);
  auto f1 = sf::hyp1f1(Complex(ldexp(rv, -1), t), Complex(rv), kummer_z, prec);
  Real ph = t * log_x;
  Complex rot(cos(ph), -sin(ph));
  Complex val = eta.value * f1.value * rot;
  err_out = eta.err * abs(f1.value) + abs(eta.value) * f1.err;
  return val;
}

}  // namespace

ValueWithError integral_representation(const HeckePair& pair, const Real& x, const Complex& z,
                                       const Precision& prec, const Real& T) {
  pair.require_build_precision(prec);
  if (!(Real(0L) < x)) throw DomainError("integral representation requires x > 0");
  if (!(Real(0L) < T)) throw DomainError("integral cutoff must be positive");
  long wb = prec.working_bits;
  PrecisionScope scope(wb + 48 + wb / 8);
  Real log_x = log(x);
  Complex kummer_z = -(z * z) * Real::from_double(0.25);

  // When the line values satisfy f(-t) = conj(f(t)) (real coefficient data
  // and a real Kummer argument), the integral equals 2 Re of the [0, T]
  // half. Detected by probes so every family gets the correct fallback.
  bool mirror = kummer_z.im.is_zero();
  if (mirror) {
    for (double tp : {0.37, 1.07}) {
      Real t = Real::from_double(tp);
      Real ep(0L);
      Real em(0L);
      Complex fp = eta_integrand(pair, t, kummer_z, log_x, prec, ep);
      Complex fm = eta_integrand(pair, -t, kummer_z, log_x, prec, em);
      Real slack = ldexp(ep + em, 6) + Real::pow2(-wb) * max(Real(1L), abs(fp));
      if (!(abs(fm - conj(fp)) <= slack)) {
        mirror = false;
        break;
      }
    }
  }

  // Panel edges of width 1 upward from the left end; the last panel absorbs
  // the fractional remainder so the union is exact.
  std::vector<Real> lo;
  std::vector<Real> hi;
  Real a = mirror ? Real(0L) : -T;
  while (true) {
    Real b = a + Real(1L);
    if (!(b < T)) {
      lo.push_back(a);
      hi.push_back(T);
      break;
    }
    lo.push_back(a);
    hi.push_back(b);
    a = b;
  }
  long panels = static_cast<long>(lo.size());

  // Escalating rule ladder per panel: accept as soon as two consecutive
  // orders agree to the per-panel slice of the quadrature budget.
  Real eps_quad = Real::pow2(-(5 * wb / 8 + 8));
  Real panel_tol = eps_quad / (Real(10L) * Real(panels));
  static const int ladder[4] = {16, 24, 48, 96};
  for (int ord : ladder) (void)sf::gauss_legendre(ord, current_bits());

  struct PanelResult {
    Complex value;
    Real err;
  };
  std::vector<PanelResult> out(static_cast<size_t>(panels));
  // capture before the loop: worker threads start at the thread-local default
  const long ambient_bits = current_bits();
  parallel_for(panels, panels > 1, [&](long j) {
    PrecisionScope inner(ambient_bits);
    Real half = ldexp(hi[j] - lo[j], -1);
    Real mid = ldexp(hi[j] + lo[j], -1);
    auto integrate = [&](int order, Real& node_err) {
      const auto& rule = sf::gauss_legendre(order, current_bits());
      Complex acc(0L);
      for (size_t i = 0; i < rule.node.size(); ++i) {
        Real t = mid + half * rule.node[i];
        Real e(0L);
        Complex f = eta_integrand(pair, t, kummer_z, log_x, prec, e);
        acc += f * (half * rule.weight[i]);
        node_err += e * half * rule.weight[i];
      }
      return acc;
    };
    Real prev_err(0L);
    Complex prev = integrate(ladder[0], prev_err);
    for (int li = 1; li < 4; ++li) {
      Real cur_err(0L);
      Complex cur = integrate(ladder[li], cur_err);
      Real gap = abs(cur - prev);
      if (gap <= panel_tol) {
        out[static_cast<size_t>(j)] = {cur, gap + cur_err};
        return;
      }
      prev = cur;
      prev_err = cur_err;
    }
    throw QuadratureError("panel refinement stalled before reaching the target accuracy");
  });

  Complex total(0L);
  Real spread(0L);
  for (const auto& pr : out) {
    total += pr.value;
    spread += pr.err;
  }
  Real two_pi = ldexp(const_pi(), 1);

  // Tail estimate: |f| decays at least like e^{-(pi/2)|t|} past T, so the
  // clipped mass is bounded by the endpoint magnitudes over pi/2.
  Real e_pos(0L);
  Complex f_pos = eta_integrand(pair, T, kummer_z, log_x, prec, e_pos);
  Real end_mag = abs(f_pos);
  if (!mirror) {
    Real e_neg(0L);
    Complex f_neg = eta_integrand(pair, -T, kummer_z, log_x, prec, e_neg);
    end_mag += abs(f_neg);
  } else {
    end_mag = ldexp(end_mag, 1);
  }
  Real tail = end_mag / (const_pi() * const_pi());

  Complex value = mirror ? Complex(ldexp(total.re, 1), Real(0L)) : total;
  Real err = (mirror ? ldexp(spread, 1) : spread) / two_pi + tail;
  return {value / two_pi, err};
}

Real default_integral_cutoff(const HeckePair& pair, const Real& x, const Complex& z,
                             const Precision& prec) {
  pair.require_build_precision(prec);
  long wb = prec.working_bits;
  PrecisionScope scope(wb + 32);
  Real rv = pair.r_value();
  Real kappa = pair.a_coeffs->growth_kappa();
  Real p = ldexp(rv, -1) + kappa + Real(2L);
  // matches the quadrature budget 2^-(5wb/8+8) with margin for the prefactor
  Real lbits = Real(5 * wb / 8 + 16) * log(Real(2L));
  Real az = abs(z);
  Real t(40L);
  Real two_over_pi = Real(2L) / const_pi();
  (void)x;
  for (int i = 0; i < 3; ++i) {
    Real cand = two_over_pi * (lbits + p * log(Real(2L) + t) + az * sqrt(t) + Real(10L));
    t = max(Real(40L), cand);
  }
  return t;
}

namespace {

long isqrt_long(long v) {
  if (v < 0) return -1;
  long r = static_cast<long>(std::sqrt(static_cast<double>(v)));
  while (r > 0 && r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

long mod_inverse_local(long a, long m) {
  long r0 = m, r1 = ((a % m) + m) % m;
  long s0 = 0, s1 = 1;
  while (r1 != 0) {
    long q = r0 / r1;
    long r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    long s2 = s0 - q * s1;
    s0 = s1;
    s1 = s2;
  }
  if (r0 != 1) return -1;
  return ((s0 % m) + m) % m;
}

// Shared loop for the reflected boundary series: accumulates
// sum_n c(n) e^{-rate (n + off)} In_nu(sqrt(q (n + off)) z_eff) against an
// envelope that tolerates zero gaps, then applies `front`.
struct ReflectedSeries {
  coeffs::StreamPtr stream;
  long first = 1;
  Real off;                 // index offset inside the exponent
  Real rate;                // exponential decay rate per unit index
  Real arg_q;               // w_n = sqrt(arg_q * (n + off)) * z_eff
  Complex z_eff;
  Real nu;
  Complex extra_phase;      // per-term constant multiplier (1 if unused)
  Real growth_kappa;
  Real growth_c;
};

Complex reflected_sum(const ReflectedSeries& rs, const Precision& prec) {
  long wb = prec.working_bits;
  Real unit = prec.target_eps();
  Real az = abs(rs.z_eff);
  Complex acc(0L);
  Real maxmag(1L);
  Real prev_bound(0L);
  bool decaying = false;
  long n = rs.first;
  while (true) {
    rs.stream->ensure(n);
    Real idx = Real(n) + rs.off;
    Complex coef = rs.extra_phase * rs.stream->at(n);
    Real wmag = sqrt(rs.arg_q * idx) * az;
    if (!coef.is_zero()) {
      Complex w = sqrt(Complex(rs.arg_q * idx)) * rs.z_eff;
      auto in = sf::bessel_i_scaled(rs.nu, w, prec);
      Complex term = coef * exp(Complex(-(rs.rate * idx))) * in.value;
      acc += term;
      Real m = abs(term);
      if (m > maxmag) maxmag = m;
    }
    Real bound = rs.growth_c * pow(max(idx, Real(1L)), rs.growth_kappa) *
                 exp(wmag - rs.rate * idx) * (Real(1L) + wmag) * Real(3L);
    Real thresh = ldexp(unit * maxmag, -4);
    if (decaying && bound < prev_bound && bound < thresh && n > rs.first) break;
    if (bound < prev_bound) decaying = true;
    prev_bound = bound;
    ++n;
    if (n - rs.first > kThetaCap)
      throw TruncationError("reflected boundary series truncation cap reached");
  }
  (void)wb;
  return acc;
}

Complex boundary_r_zeta_alpha(const HeckePair& pair, const Complex& z, const Real& delta,
                              const Precision& prec) {
  mpq_class alpha = pair.family.alpha;
  Real al = sf::real_from_mpq(alpha);
  Real half_al = ldexp(al, -1);
  Complex xc(delta, Real(1L));  // i + delta
  Complex efac = exp(-(xc * (z * z)) / (ldexp(delta, 2)));
  auto gr = sf::gamma(Complex(half_al), prec);
  Complex pref = Complex(exp(-half_al * log(delta))) * gr.value * efac;

  ReflectedSeries rs;
  rs.stream = coeffs::r_tilde_alpha_stream(alpha);
  rs.first = 0;
  rs.off = ldexp(al, -2);  // n + alpha/4
  rs.rate = const_pi() / delta;
  rs.arg_q = const_pi();
  rs.z_eff = (sqrt(xc) * z) / delta;
  rs.nu = half_al - Real(1L);
  rs.extra_phase = Complex(1L);
  rs.growth_kappa = rs.stream->growth_kappa();
  rs.growth_c = rs.stream->growth_C();
  return pref * reflected_sum(rs, prec);
}

Complex boundary_r_epstein(const HeckePair& pair, const Complex& z, const Real& delta,
                           const Precision& prec) {
  long A = pair.family.A, B = pair.family.B, C = pair.family.C;
  long disc = 4 * A * C - B * B;
  long sq = isqrt_long(disc);
  if (sq <= 0 || sq * sq != disc)
    throw DomainError("boundary decay for epstein requires a square discriminant");
  Complex xc(delta, Real(1L));
  Complex efac = exp(-(xc * (z * z)) / (ldexp(delta, 2)));
  Real rdisc = Real(disc);
  Real disc34 = Real(sq) * sqrt(Real(sq));  // disc^{3/4}
  Complex gq = coeffs::epstein_gauss_term(A, B, C, 1, sq, prec);
  Complex front = gq / (rdisc * delta);

  ReflectedSeries rs;
  rs.stream = coeffs::epstein_exp_dual_stream(A, B, C, 1, sq, prec);
  rs.first = 1;
  rs.off = Real(0L);
  rs.rate = ldexp(const_pi(), 1) / (Real(sq) * rdisc * delta);  // 2 pi / disc^{3/2}
  rs.arg_q = ldexp(const_pi(), 1);
  rs.z_eff = (sqrt(xc) * z) / (disc34 * delta);
  rs.nu = Real(0L);
  rs.extra_phase = Complex(1L);
  rs.growth_kappa = rs.stream->growth_kappa();
  rs.growth_c = rs.stream->growth_C();
  Complex tail = reflected_sum(rs, prec) / (sqrt(rdisc) * delta);
  return efac * (front + tail);
}

Complex boundary_r_char_k(const HeckePair& pair, const Complex& z, const Real& delta,
                          const Precision& prec) {
  if (!pair.chi) throw DomainError("char-k boundary decay requires a character");
  long q = pair.family.char_q;
  long k = pair.family.k;
  int dl = pair.delta;
  Real rv = pair.r_value();
  Real nu = rv - Real(1L);
  Complex xc(delta, Real(1L));
  Complex efac = exp(-(xc * (z * z)) / (ldexp(delta, 2)));
  auto gn = sf::gamma(Complex(nu + Real(1L)), prec);
  // Gamma(nu+1) 2^{-nu-1} eps^{-nu-1}
  Complex pref = Complex(exp(-(nu + Real(1L)) * (log(Real(2L)) + log(delta)))) * gn.value * efac;
  // (-i)^{delta k}
  long ipow = ((-(static_cast<long>(dl) * k)) % 4 + 4) % 4;
  static const long re_tab[4] = {1, 0, -1, 0};
  static const long im_tab[4] = {0, 1, 0, -1};
  Complex phase(re_tab[ipow], im_tab[ipow]);

  ReflectedSeries rs;
  rs.stream = coeffs::exp_dual_stream(*pair.chi, k, 1, q, prec);
  rs.first = 1;
  rs.off = Real(0L);
  rs.rate = const_pi() / (ldexp(Real(q), 2) * delta);  // pi / (4 q eps)
  rs.arg_q = const_pi() / Real(q);
  rs.z_eff = (sqrt(xc) * z) / ldexp(delta, 1);
  rs.nu = nu;
  rs.extra_phase = phase;
  rs.growth_kappa = rs.stream->growth_kappa();
  rs.growth_c = rs.stream->growth_C();
  return pref * reflected_sum(rs, prec);
}

Complex boundary_r_cusp_twist(const HeckePair& pair, const Complex& z, const Real& delta,
                              const Precision& prec) {
  long q = pair.family.q;
  long pm = ((pair.family.p % q) + q) % q;
  long k = pair.family.k;
  long pm1 = ((pm - 1) % q + q) % q;
  long rbar = mod_inverse_local(pm1, q);
  if (rbar < 0)
    throw DomainError("cusp twist boundary decay requires gcd(p - 1, q) = 1");
  Complex xc(delta, Real(1L));
  Complex efac = exp(-(xc * (z * z)) / (ldexp(delta, 2)));
  Real pref_mag = sf::factorial_real(k - 1) * exp(-Real(k) * log(delta));
  Complex pref = Complex(pref_mag) * efac;
  if ((k / 2) % 2 != 0) pref = -pref;

  // a_f(n) e^{-2 pi i rbar n / q} = a(n) e^{-2 pi i (rbar + pm) n / q} with
  // a(n) the pair's twisted coefficients; fold the correction in per term.
  long shift = ((rbar + pm) % q + q) % q;
  ReflectedSeries rs;
  rs.stream = pair.a_coeffs;
  rs.first = pair.a_first();
  rs.off = Real(0L);
  rs.rate = ldexp(const_pi(), 1) / (Real(q) * delta);
  rs.arg_q = ldexp(const_pi(), 1) / Real(q);
  rs.z_eff = (sqrt(xc) * z) / delta;
  rs.nu = Real(k - 1);
  rs.extra_phase = Complex(1L);
  rs.growth_kappa = rs.stream->growth_kappa();
  rs.growth_c = rs.stream->growth_C();

  // reflected_sum applies a constant extra phase only; the per-index twist
  // needs a bespoke loop here.
  long wb = prec.working_bits;
  Real unit = prec.target_eps();
  Real az = abs(rs.z_eff);
  Complex acc(0L);
  Real maxmag(1L);
  Real prev_bound(0L);
  bool decaying = false;
  long n = rs.first;
  Real two_pi = ldexp(const_pi(), 1);
  while (true) {
    rs.stream->ensure(n);
    Real idx(n);
    Real ang = -(two_pi * Real(((shift * (n % q)) % q))) / Real(q);
    Complex coef = rs.stream->at(n) * Complex(cos(ang), sin(ang));
    Real wmag = sqrt(rs.arg_q * idx) * az;
    if (!coef.is_zero()) {
      Complex w = sqrt(Complex(rs.arg_q * idx)) * rs.z_eff;
      auto in = sf::bessel_i_scaled(rs.nu, w, prec);
      Complex term = coef * exp(Complex(-(rs.rate * idx))) * in.value;
      acc += term;
      Real m = abs(term);
      if (m > maxmag) maxmag = m;
    }
    Real bound = rs.growth_c * pow(max(idx, Real(1L)), rs.growth_kappa) *
                 exp(wmag - rs.rate * idx) * (Real(1L) + wmag) * Real(3L);
    Real thresh = ldexp(unit * maxmag, -4);
    if (decaying && bound < prev_bound && bound < thresh && n > rs.first) break;
    if (bound < prev_bound) decaying = true;
    prev_bound = bound;
    ++n;
    if (n - rs.first > kThetaCap)
      throw TruncationError("reflected boundary series truncation cap reached");
  }
  (void)wb;
  return pref * acc;
}

}  // namespace

std::vector<DecayPoint> boundary_decay(const HeckePair& pair, const Complex& z,
                                       const std::vector<Real>& deltas, const Precision& prec) {
  pair.require_build_precision(prec);
  long wb = prec.working_bits;
  std::vector<DecayPoint> out;
  out.reserve(deltas.size());
  for (const Real& d : deltas) {
    if (!(Real(0L) < d) || !(d < Real(1L)))
      throw DomainError("boundary decay offsets must lie in (0, 1)");
    PrecisionScope scope(wb + 48 + wb / 8);
    Complex r;
    switch (pair.family.kind) {
      case hecke::FamilyKind::ZetaAlpha:
        r = boundary_r_zeta_alpha(pair, z, d, prec);
        break;
      case hecke::FamilyKind::Epstein:
        r = boundary_r_epstein(pair, z, d, prec);
        break;
      case hecke::FamilyKind::CharK:
        r = boundary_r_char_k(pair, z, d, prec);
        break;
      case hecke::FamilyKind::CuspTwist:
        r = boundary_r_cusp_twist(pair, z, d, prec);
        break;
      default:
        throw DomainError("boundary decay is not available for this family");
    }
    out.push_back({d, abs(r)});
  }
  return out;
}

Real fit_decay_slope(const std::vector<DecayPoint>& points) {
  if (points.size() < 3) throw DomainError("decay slope fit needs at least three points");
  // Model ln|R| = c0 + c1 (1/delta) + c2 ln delta; slope = -c1.
  Real m[3][3];
  Real rhs[3];
  for (int i = 0; i < 3; ++i) {
    rhs[i] = Real(0L);
    for (int j = 0; j < 3; ++j) m[i][j] = Real(0L);
  }
  for (const auto& pt : points) {
    if (!(Real(0L) < pt.abs_r)) throw DomainError("decay slope fit needs positive magnitudes");
    Real b1 = Real(1L) / pt.delta;
    Real b2 = log(pt.delta);
    Real y = log(pt.abs_r);
    Real basis[3] = {Real(1L), b1, b2};
    for (int i = 0; i < 3; ++i) {
      rhs[i] += basis[i] * y;
      for (int j = 0; j < 3; ++j) m[i][j] += basis[i] * basis[j];
    }
  }
  // Gaussian elimination with partial pivoting on the 3x3 system.
  int perm[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int best = col;
    for (int r2 = col + 1; r2 < 3; ++r2)
      if (abs(m[perm[r2]][col]) > abs(m[perm[best]][col])) best = r2;
    std::swap(perm[col], perm[best]);
    Real piv = m[perm[col]][col];
    if (piv.is_zero()) throw DomainError("decay slope fit is singular");
    for (int r2 = col + 1; r2 < 3; ++r2) {
      Real f = m[perm[r2]][col] / piv;
      for (int c2 = col; c2 < 3; ++c2) m[perm[r2]][c2] -= f * m[perm[col]][c2];
      rhs[perm[r2]] -= f * rhs[perm[col]];
    }
  }
  Real sol[3];
  for (int row = 2; row >= 0; --row) {
    Real acc = rhs[perm[row]];
    for (int c2 = row + 1; c2 < 3; ++c2) acc -= m[perm[row]][c2] * sol[c2];
    sol[row] = acc / m[perm[row]][row];
  }
  return -sol[1];
}

}  // namespace hecklab::theta
