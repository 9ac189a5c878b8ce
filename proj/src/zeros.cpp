#include "hecklab/zeros.hpp"

#include <utility>

#include "hecklab/coeffs.hpp"
#include "hecklab/parallel.hpp"
#include "hecklab/specfun.hpp"

namespace hecklab::zeros {
namespace {

namespace sf = specfun;
using hecke::FamilyDescriptor;
using hecke::FamilyKind;
using hecke::HeckePair;

long guard_bits(const Precision& prec) {
  return prec.working_bits + 48 + prec.working_bits / 8;
}

// Phase e^{-i theta} making eta real on the critical line.  Self-dual
// real families need none; the character family carries the explicit
// Gauss-sum phase; anything else is probed at one off-axis point and the
// phase snapped to the nearest quarter turn (the root-of-unity cases).
Complex line_rotation(const HeckePair& pair, const Precision& prec) {
  if (pair.self_dual_real) return Complex(1L);
  const FamilyDescriptor& fam = pair.family;
  if (fam.kind == FamilyKind::CharK) {
    coeffs::DirichletCharacter chi = fam.char_index >= 0
                                         ? coeffs::character(fam.char_q, fam.char_index)
                                         : coeffs::primitive_character(fam.char_q, fam.parity);
    ValueWithError g = coeffs::gauss_sum(chi, prec);
    Complex root = g.value / Complex(sqrt(Real(fam.char_q)));
    if (pair.delta == 1) root = root * (-Complex::unit_i());
    Real gamma = arg(root);
    Real half_k = ldexp(Real(fam.k), -1);
    return exp(-(Complex::unit_i() * Complex(gamma * half_k)));
  }
  ValueWithError probe = hecke::eval_eta_line(pair, Real::from_double(0.3711), prec);
  if (abs(probe.value) < ldexp(probe.err, 6))
    probe = hecke::eval_eta_line(pair, Real::from_double(0.8219), prec);
  Real theta = arg(probe.value);
  Real quarter = ldexp(const_pi(), -1);
  Real snapped = quarter * floor(theta / quarter + Real::from_double(0.5));
  return exp(-(Complex::unit_i() * Complex(snapped)));
}

ValueWithError combination_core(const HeckePair& pair, const Complex& rotation,
                                const CombinationSpec& spec, const Real& t,
                                const Precision& prec) {
  PrecisionScope scope(guard_bits(prec));
  const Real round_unit = Real::pow2(8 - current_bits());
  const Real rv = pair.r_value();
  const Real half_r = ldexp(rv, -1);
  Complex zbar = conj(spec.z);
  Complex zarg = zbar * zbar * Real::from_double(0.25);
  Complex acc;
  Real err(0L);
  for (const CombinationTerm& term : spec.terms) {
    Real tau = t + term.lambda;
    ValueWithError eta = hecke::eval_eta_line(pair, tau, prec);
    Complex w(half_r, tau);
    ValueWithError y = sf::hyp1f1(w, Complex(rv), zarg, prec);
    Real two_re = ldexp(y.value.re, 1);
    Complex contrib = Complex(term.c * two_re) * eta.value;
    acc += contrib;
    Real ac = abs(term.c);
    err += ac * (eta.err * abs(two_re) + abs(eta.value) * ldexp(y.err, 1)) +
           abs(contrib) * round_unit;
  }
  return {rotation * acc, err};
}

int certified_sign(const ValueWithError& f, const Precision& prec) {
  Real mag = abs(f.value);
  Real gate = max(ldexp(f.err, 2), Real(10L) * prec.target_eps() * max(Real(1L), mag));
  if (abs(f.value.re) <= gate) return 0;
  return f.value.re.sign() > 0 ? 1 : -1;
}

void check_realness(const ValueWithError& f, const Real& t, const Precision& prec) {
  Real mag = abs(f.value);
  Real gate = max(ldexp(f.err, 2), Real(10L) * prec.target_eps() * max(Real(1L), mag));
  if (abs(f.value.im) > gate)
    throw RealnessError("combination is not real on the critical line near t = " + t.str(8));
}

}  // namespace

Rectangle admissible_domain(const FamilyDescriptor& family) {
  PrecisionScope scope(128);
  Real pi = const_pi();
  Real half;
  switch (family.kind) {
    case FamilyKind::ZetaAlpha:
    case FamilyKind::ZetaAlphaStar:
      half = sqrt(ldexp(pi * sf::real_from_mpq(family.alpha), -1));
      break;
    case FamilyKind::Epstein:
    case FamilyKind::EpsteinExp: {
      Real disc = Real(4 * family.A * family.C - family.B * family.B);
      half = ldexp(sqrt(pi), 1) / pow(disc, Real(3L) / Real(4L));
      break;
    }
    case FamilyKind::CharK:
    case FamilyKind::CharKExp:
      half = sqrt(pi / Real(2 * family.char_q));
      break;
    case FamilyKind::Cusp:
    case FamilyKind::CuspTwist:
      half = ldexp(sqrt(pi / Real(family.kind == FamilyKind::CuspTwist ? family.q : 1L)), 1);
      break;
    default:
      throw DomainError("no admissible-domain formula for this family");
  }
  return {half, half};
}

ValueWithError combination_value(const CombinationSpec& spec, const Real& t,
                                 const Precision& prec) {
  PrecisionScope scope(guard_bits(prec));
  HeckePair pair = hecke::build_pair(spec.family, prec);
  Complex rotation = line_rotation(pair, prec);
  return combination_core(pair, rotation, spec, t, prec);
}

ScanDiagnostics scan_diagnostics(const CombinationSpec& spec, const Precision& prec) {
  PrecisionScope scope(guard_bits(prec));
  HeckePair pair = hecke::build_pair(spec.family, prec);
  ScanDiagnostics d;
  Real rv = pair.r_value();
  for (const CombinationTerm& term : spec.terms) {
    Real two_lam = ldexp(term.lambda, 1);
    d.r_j.push_back(hypot(rv, two_lam));
    d.theta_j.push_back(atan2(rv, -two_lam));
  }
  Complex w = spec.z * spec.z * Real::pow2(-3);
  Complex val = exp(w) * sinh(w);
  d.u_z = Real(1L) + val.re;
  d.v_z = val.im;
  d.w_z = hypot(d.u_z, d.v_z);
  if (d.u_z.is_zero()) {
    d.beta_z = d.v_z.sign() >= 0 ? ldexp(const_pi(), -1) : -ldexp(const_pi(), -1);
  } else {
    d.beta_z = atan2(d.v_z / d.u_z, Real(1L));
  }
  return d;
}

ZeroReport scan_sign_changes(const CombinationSpec& spec, const Real& t0, const Real& t1,
                             const Real& step, const Precision& prec) {
  PrecisionScope scope(guard_bits(prec));
  if (!(t0 < t1)) throw UsageError("scan requires t0 < t1");
  if (step.sign() <= 0) throw UsageError("scan requires a positive step");
  HeckePair pair = hecke::build_pair(spec.family, prec);
  Complex rotation = line_rotation(pair, prec);

  std::vector<Real> ts;
  for (Real t = t0; t < t1; t += step) ts.push_back(t);
  ts.push_back(t1);
  const long n = static_cast<long>(ts.size());

  std::vector<ValueWithError> fv(static_cast<size_t>(n));
  // warm both ends serially so the coefficient caches stop growing
  // before the concurrent phase (truncation depth barely depends on t)
  fv[0] = combination_core(pair, rotation, spec, ts[0], prec);
  fv[static_cast<size_t>(n - 1)] =
      combination_core(pair, rotation, spec, ts[static_cast<size_t>(n - 1)], prec);
  const long ambient_bits = current_bits();
  parallel_for(n - 2, n > 3, [&](long i) {
    PrecisionScope inner(ambient_bits);
    fv[static_cast<size_t>(i + 1)] =
        combination_core(pair, rotation, spec, ts[static_cast<size_t>(i + 1)], prec);
  });

  ZeroReport rep;
  rep.t0 = t0;
  rep.t1 = t1;
  rep.step = step;
  rep.diagnostics = scan_diagnostics(spec, prec);
  rep.realness_max = Real(0L);

  std::vector<int> sign(static_cast<size_t>(n));
  std::vector<Real> mag(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) {
    const ValueWithError& f = fv[static_cast<size_t>(i)];
    check_realness(f, ts[static_cast<size_t>(i)], prec);
    mag[static_cast<size_t>(i)] = abs(f.value);
    Real ratio = abs(f.value.im) / max(Real(1L), mag[static_cast<size_t>(i)]);
    if (ratio > rep.realness_max) rep.realness_max = ratio;
    sign[static_cast<size_t>(i)] = certified_sign(f, prec);
  }

  const Real refine_tol = step * Real::from_double(1e-6);
  auto evaluate = [&](const Real& t) { return combination_core(pair, rotation, spec, t, prec); };
  auto bisect = [&](Real lo, Real hi, int slo) -> ZeroHit {
    while (hi - lo > ldexp(refine_tol, 1)) {
      Real mid = ldexp(lo + hi, -1);
      ValueWithError fm = evaluate(mid);
      check_realness(fm, mid, prec);
      int sm = certified_sign(fm, prec);
      if (sm == 0) return {mid, ldexp(hi - lo, -2)};
      if (sm == slo)
        lo = mid;
      else
        hi = mid;
    }
    return {ldexp(lo + hi, -1), ldexp(hi - lo, -1)};
  };
  auto local_scale = [&](long i) {
    Real m(0L);
    for (long j = std::max(0L, i - 2); j <= std::min(n - 1, i + 2); ++j)
      m = max(m, mag[static_cast<size_t>(j)]);
    return m;
  };

  long prev = -1;
  for (long i = 0; i < n; ++i) {
    int si = sign[static_cast<size_t>(i)];
    if (si == 0) {
      rep.zeros.push_back({ts[static_cast<size_t>(i)], refine_tol});
      continue;
    }
    if (prev >= 0) {
      int sp = sign[static_cast<size_t>(prev)];
      if (sp != si) {
        rep.sign_changes += 1;
        // a flip spanning an exact grid hit is already represented by it
        if (i == prev + 1)
          rep.zeros.push_back(bisect(ts[static_cast<size_t>(prev)], ts[static_cast<size_t>(i)],
                                     sp));
      } else if (i == prev + 1) {
        Real small = min(mag[static_cast<size_t>(prev)], mag[static_cast<size_t>(i)]);
        if (small < Real::from_double(0.05) * local_scale(i)) {
          Real mid = ldexp(ts[static_cast<size_t>(prev)] + ts[static_cast<size_t>(i)], -1);
          ValueWithError fm = evaluate(mid);
          check_realness(fm, mid, prec);
          int sm = certified_sign(fm, prec);
          if (sm == 0) {
            rep.zeros.push_back({mid, refine_tol});
          } else if (sm != si) {
            rep.sign_changes += 2;
            rep.zeros.push_back(bisect(ts[static_cast<size_t>(prev)], mid, sp));
            rep.zeros.push_back(bisect(mid, ts[static_cast<size_t>(i)], sm));
          }
        }
      }
    }
    prev = i;
  }
  return rep;
}

}  // namespace hecklab::zeros
