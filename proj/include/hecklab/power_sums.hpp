#pragma once

#include <vector>

#include "hecklab/complexval.hpp"
#include "hecklab/precision.hpp"

namespace hecklab::power_sums {

// Sums of ((n + shift)^2 + width^2)^{-s} with periodic complex weights,
// evaluated by Euler-Maclaurin tails so the result is accurate far beyond
// the abscissa where direct summation is practical.  Bilateral form sums
// over all n in Z (including n = 0); one-sided form sums over n >= 1.
// weights[j] multiplies the term with n == j (mod period); period >= 1.
// width must be positive (keeps the base nonzero for every real shift).
struct QuadraticSumSpec {
  Complex s;
  Real shift;                    // y in (n + y)^2 + x^2
  Real width;                    // x > 0
  std::vector<Complex> weights;  // period = weights.size()
  bool bilateral = true;
};

ValueWithError quadratic_power_sum(const QuadraticSumSpec& spec, const Precision& prec);

// One-sided Euler-Maclaurin tail: sum over m >= 0 of
// w(u0 + h m) where w(u) = (u^2 + width^2)^{-s}, h > 0, u0 + h m
// eventually dominates width.  Used by quadratic_power_sum per residue
// class; exposed for direct testing against slowly converging references.
ValueWithError quadratic_tail(const Complex& s, const Real& u0, const Real& h, const Real& width,
                              const Precision& prec);

}  // namespace hecklab::power_sums
