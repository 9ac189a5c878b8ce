#include "hecklab/precision.hpp"

#include <cstdio>
#include <vector>

namespace hecklab {

namespace {
thread_local long g_bits = 128;
}

long current_bits() { return g_bits; }

void set_current_bits(long bits) {
  if (bits < 64) throw DomainError("working precision below 64 bits");
  g_bits = bits;
}

Real Precision::target_eps() const { return Real::pow2(16 - working_bits); }

long Precision::decimal_digits() const {
  // digits representable at working_bits, floor(bits * log10 2)
  return static_cast<long>(static_cast<double>(working_bits) * 0.30102999566398) ;
}

std::string Real::str(long digits) const {
  if (digits < 2) digits = 2;
  std::vector<char> buf(static_cast<size_t>(digits) + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Re", static_cast<int>(digits - 1), v_);
  return std::string(buf.data());
}

#define HECKLAB_UNARY(name, fn)              \
  Real name(const Real& x) {                 \
    Real r;                                  \
    fn(r.raw(), x.raw(), MPFR_RNDN);         \
    return r;                                \
  }

HECKLAB_UNARY(abs, mpfr_abs)
HECKLAB_UNARY(sqrt, mpfr_sqrt)
HECKLAB_UNARY(cbrt, mpfr_cbrt)
HECKLAB_UNARY(exp, mpfr_exp)
HECKLAB_UNARY(log, mpfr_log)
HECKLAB_UNARY(log2, mpfr_log2)
HECKLAB_UNARY(sin, mpfr_sin)
HECKLAB_UNARY(cos, mpfr_cos)
HECKLAB_UNARY(tan, mpfr_tan)
HECKLAB_UNARY(sinh, mpfr_sinh)
HECKLAB_UNARY(cosh, mpfr_cosh)
HECKLAB_UNARY(coth, mpfr_coth)
HECKLAB_UNARY(atan, mpfr_atan)
HECKLAB_UNARY(real_gamma, mpfr_gamma)
HECKLAB_UNARY(real_zeta, mpfr_zeta)

#undef HECKLAB_UNARY

Real floor(const Real& x) {
  Real r;
  mpfr_rint(r.raw(), x.raw(), MPFR_RNDD);
  return r;
}

Real ceil(const Real& x) {
  Real r;
  mpfr_rint(r.raw(), x.raw(), MPFR_RNDU);
  return r;
}

Real atan2(const Real& y, const Real& x) {
  Real r;
  mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real pow(const Real& x, const Real& y) {
  Real r;
  mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}

Real pow(const Real& x, long n) {
  Real r;
  mpfr_pow_si(r.raw(), x.raw(), n, MPFR_RNDN);
  return r;
}

Real hypot(const Real& x, const Real& y) {
  Real r;
  mpfr_hypot(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}

Real min(const Real& a, const Real& b) { return a <= b ? a : b; }
Real max(const Real& a, const Real& b) { return a >= b ? a : b; }

Real ldexp(const Real& x, long e) {
  Real r;
  mpfr_mul_2si(r.raw(), x.raw(), e, MPFR_RNDN);
  return r;
}

Real const_pi() {
  Real r;
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

Real const_euler() {
  Real r;
  mpfr_const_euler(r.raw(), MPFR_RNDN);
  return r;
}

Real bessel_jn_real(long n, const Real& x) {
  Real r;
  mpfr_jn(r.raw(), n, x.raw(), MPFR_RNDN);
  return r;
}

}  // namespace hecklab
