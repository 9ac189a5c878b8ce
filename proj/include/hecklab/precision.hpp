#pragma once

#include <mpfr.h>

#include <stdexcept>
#include <string>
#include <utility>

namespace hecklab {

// Error taxonomy shared by all modules.
struct PoleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RealnessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DescriptorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct HypothesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Working precision for Real values created on this thread.
long current_bits();
void set_current_bits(long bits);

// RAII scope: raises (or lowers) the thread's working precision.
class PrecisionScope {
 public:
  explicit PrecisionScope(long bits) : saved_(current_bits()) { set_current_bits(bits); }
  ~PrecisionScope() { set_current_bits(saved_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  long saved_;
};

class Real;

// Evaluation precision contract: values are computed at working_bits and the
// caller may trust results down to target_eps (absolute-or-relative floor).
struct Precision {
  long working_bits = 128;

  Real target_eps() const;            // 2^(16 - working_bits)
  long decimal_digits() const;        // digits carried by working_bits
  static Precision bits(long b) { return Precision{b}; }
};

// Value-semantic arbitrary-precision real. Precision of a freshly constructed
// value is the thread's current working precision.
class Real {
 public:
  Real() { mpfr_init2(v_, current_bits()); }
  explicit Real(long n) : Real() { mpfr_set_si(v_, n, MPFR_RNDN); }
  explicit Real(int n) : Real(static_cast<long>(n)) {}
  explicit Real(unsigned long n) : Real() { mpfr_set_ui(v_, n, MPFR_RNDN); }
  explicit Real(const char* s) : Real() {
    if (mpfr_set_str(v_, s, 10, MPFR_RNDN) != 0)
      throw DomainError(std::string("unparseable real literal: ") + s);
  }
  explicit Real(const std::string& s) : Real(s.c_str()) {}

  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, 2);
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  static Real from_double(double d) {
    Real r;
    mpfr_set_d(r.v_, d, MPFR_RNDN);
    return r;
  }
  static Real nan() { return Real(); }
  static Real pow2(long e) {  // 2^e exactly
    Real r;
    mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
    return r;
  }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }
  long bits() const { return mpfr_get_prec(v_); }

  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_inf() const { return mpfr_inf_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  bool is_integer() const { return mpfr_integer_p(v_) != 0; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
  long exponent() const { return is_zero() || !is_finite() ? 0 : static_cast<long>(mpfr_get_exp(v_)); }

  // Decimal string with the given significant digit count, %.*Re format.
  std::string str(long digits) const;

  Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator+=(long n) { mpfr_add_si(v_, v_, n, MPFR_RNDN); return *this; }
  Real& operator-=(long n) { mpfr_sub_si(v_, v_, n, MPFR_RNDN); return *this; }
  Real& operator*=(long n) { mpfr_mul_si(v_, v_, n, MPFR_RNDN); return *this; }
  Real& operator/=(long n) { mpfr_div_si(v_, v_, n, MPFR_RNDN); return *this; }

  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }
  friend Real operator+(Real a, long b) { return a += b; }
  friend Real operator-(Real a, long b) { return a -= b; }
  friend Real operator*(Real a, long b) { return a *= b; }
  friend Real operator/(Real a, long b) { return a /= b; }
  friend Real operator+(long a, Real b) { return b += a; }
  friend Real operator*(long a, Real b) { return b *= a; }
  friend Real operator-(long a, const Real& b) {
    Real r;
    mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator/(long a, const Real& b) {
    Real r;
    mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator-(const Real& a) {
    Real r;
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }
  friend bool operator<(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) < 0; }
  friend bool operator<=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) <= 0; }
  friend bool operator>(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) > 0; }
  friend bool operator>=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) >= 0; }
  friend bool operator==(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) == 0; }

 private:
  mpfr_t v_;
};

// Elementary functions on Real (results at the thread's working precision
// unless the operation is in-place on the argument's storage).
Real abs(const Real& x);
Real sqrt(const Real& x);
Real cbrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real log2(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real tan(const Real& x);
Real sinh(const Real& x);
Real cosh(const Real& x);
Real coth(const Real& x);
Real atan(const Real& x);
Real atan2(const Real& y, const Real& x);
Real pow(const Real& x, const Real& y);  // x > 0 required
Real pow(const Real& x, long n);
Real hypot(const Real& x, const Real& y);
Real floor(const Real& x);
Real ceil(const Real& x);
Real min(const Real& a, const Real& b);
Real max(const Real& a, const Real& b);
Real ldexp(const Real& x, long e);  // x * 2^e
Real const_pi();
Real const_euler();
Real real_gamma(const Real& x);      // MPFR's real-argument gamma (oracle use)
Real real_zeta(const Real& x);       // MPFR's real-argument zeta (oracle use)
Real bessel_jn_real(long n, const Real& x);  // MPFR j_n (oracle use)

}  // namespace hecklab
