#pragma once

#include "hecklab/precision.hpp"

namespace hecklab {

// Rectangular complex value over Real. Principal branches throughout.
struct Complex {
  Real re, im;

  Complex() : re(0L), im(0L) {}
  explicit Complex(Real r) : re(std::move(r)), im(0L) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  explicit Complex(long r) : re(r), im(0L) {}
  Complex(long r, long i) : re(r), im(i) {}

  static Complex unit_i() { return Complex(Real(0L), Real(1L)); }

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool is_finite() const { return re.is_finite() && im.is_finite(); }
  bool is_real() const { return im.is_zero(); }

  Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
  Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
  Complex& operator*=(const Complex& o) {
    Real nre = re * o.re - im * o.im;
    Real nim = re * o.im + im * o.re;
    re = std::move(nre);
    im = std::move(nim);
    return *this;
  }
  Complex& operator/=(const Complex& o) {
    Real d = o.re * o.re + o.im * o.im;
    Real nre = (re * o.re + im * o.im) / d;
    Real nim = (im * o.re - re * o.im) / d;
    re = std::move(nre);
    im = std::move(nim);
    return *this;
  }
  Complex& operator+=(const Real& x) { re += x; return *this; }
  Complex& operator-=(const Real& x) { re -= x; return *this; }
  Complex& operator*=(const Real& x) { re *= x; im *= x; return *this; }
  Complex& operator/=(const Real& x) { re /= x; im /= x; return *this; }
  Complex& operator*=(long n) { re *= n; im *= n; return *this; }
  Complex& operator/=(long n) { re /= n; im /= n; return *this; }

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  friend Complex operator+(Complex a, const Real& b) { return a += b; }
  friend Complex operator-(Complex a, const Real& b) { return a -= b; }
  friend Complex operator*(Complex a, const Real& b) { return a *= b; }
  friend Complex operator/(Complex a, const Real& b) { return a /= b; }
  friend Complex operator+(const Real& a, Complex b) { return b += a; }
  friend Complex operator*(const Real& a, Complex b) { return b *= a; }
  friend Complex operator-(const Real& a, const Complex& b) {
    return Complex(a - b.re, -b.im);
  }
  friend Complex operator/(const Real& a, const Complex& b) {
    return Complex(a) / b;
  }
  friend Complex operator*(long n, Complex b) { return b *= n; }
  friend Complex operator*(Complex b, long n) { return b *= n; }
  friend Complex operator/(Complex b, long n) { return b /= n; }
  friend Complex operator-(const Complex& a) { return Complex(-a.re, -a.im); }
};

inline Complex conj(const Complex& z) { return Complex(z.re, -z.im); }
inline Real abs(const Complex& z) { return hypot(z.re, z.im); }
// cheap magnitude proxy: within sqrt(2) of abs, for loop thresholds
inline Real norm1(const Complex& z) { return abs(z.re) + abs(z.im); }
inline Real arg(const Complex& z) { return atan2(z.im, z.re); }
inline Real norm2(const Complex& z) { return z.re * z.re + z.im * z.im; }

inline Complex exp(const Complex& z) {
  Real m = exp(z.re);
  return Complex(m * cos(z.im), m * sin(z.im));
}

inline Complex log(const Complex& z) {
  if (z.is_zero()) throw DomainError("log of zero");
  return Complex(log(abs(z)), arg(z));
}

inline Complex sqrt(const Complex& z) {
  // branch-stable principal square root
  if (z.im.is_zero()) {
    if (z.re.sign() >= 0) return Complex(sqrt(z.re), Real(0L));
    return Complex(Real(0L), sqrt(-z.re));
  }
  Real t = sqrt(ldexp(abs(z) + abs(z.re), -1));
  if (z.re.sign() >= 0) return Complex(t, ldexp(z.im, -1) / t);
  Real u = ldexp(abs(z.im), -1) / t;
  return Complex(u, z.im.sign() >= 0 ? t : -t);
}

// z^w, principal branch.
inline Complex pow(const Complex& z, const Complex& w) {
  if (z.is_zero()) {
    if (w.is_zero()) return Complex(1L);
    if (w.re.sign() > 0) return Complex(0L);
    throw DomainError("0 raised to non-positive power");
  }
  return exp(log(z) * w);
}

inline Complex pow(const Complex& z, const Real& w) { return pow(z, Complex(w)); }

inline Complex pow(const Complex& z, long n) {
  if (n == 0) return Complex(1L);
  Complex base = n > 0 ? z : Complex(1L) / z;
  unsigned long k = n > 0 ? static_cast<unsigned long>(n) : 0UL - static_cast<unsigned long>(n);
  Complex acc(1L);
  while (k) {
    if (k & 1UL) acc *= base;
    base *= base;
    k >>= 1;
  }
  return acc;
}

// x^w for real x > 0 and complex w (cheaper than the general pow).
inline Complex rpow(const Real& x, const Complex& w) {
  if (x.sign() <= 0) throw DomainError("rpow requires positive base");
  Real lx = log(x);
  Real m = exp(w.re * lx);
  Real t = w.im * lx;
  return Complex(m * cos(t), m * sin(t));
}

inline Complex sin(const Complex& z) {
  return Complex(sin(z.re) * cosh(z.im), cos(z.re) * sinh(z.im));
}
inline Complex cos(const Complex& z) {
  return Complex(cos(z.re) * cosh(z.im), -sin(z.re) * sinh(z.im));
}
inline Complex sinh(const Complex& z) {
  return Complex(sinh(z.re) * cos(z.im), cosh(z.re) * sin(z.im));
}
inline Complex cosh(const Complex& z) {
  return Complex(cosh(z.re) * cos(z.im), sinh(z.re) * sin(z.im));
}

// A computed value together with an absolute error estimate.
struct ValueWithError {
  Complex value;
  Real err;

  ValueWithError() : err(0L) {}
  ValueWithError(Complex v, Real e) : value(std::move(v)), err(std::move(e)) {}
};

}  // namespace hecklab
