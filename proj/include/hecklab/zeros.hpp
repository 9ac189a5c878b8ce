#pragma once

#include <vector>

#include "hecklab/complexval.hpp"
#include "hecklab/hecke.hpp"
#include "hecklab/precision.hpp"

namespace hecklab::zeros {

/// One term of a combination: coefficient c and vertical shift lambda.
struct CombinationTerm {
  Real c;
  Real lambda;
};

/// A finite real-coefficient combination of shifted completed functions,
/// evaluated with the confluent factor at argument z.
struct CombinationSpec {
  std::vector<CombinationTerm> terms;
  Complex z;
  hecke::FamilyDescriptor family;
};

/// Half-widths of the centered rectangle of admissible z values.
struct Rectangle {
  Real re_bound;
  Real im_bound;
};

/// Per-term polar data (i r - 2 lambda_j = r_j e^{i theta_j}) and the
/// z-dependent coordinates used in reporting.
struct ScanDiagnostics {
  std::vector<Real> r_j;
  std::vector<Real> theta_j;
  Real u_z;
  Real v_z;
  Real w_z;
  Real beta_z;
};

struct ZeroHit {
  Real t;    // refined abscissa on the critical line
  Real err;  // half-width of the final bracket
};

struct ZeroReport {
  Real t0;
  Real t1;
  Real step;
  std::vector<ZeroHit> zeros;
  long sign_changes = 0;
  Real realness_max;  // max |Im F| / max(1, |F|) over the grid
  ScanDiagnostics diagnostics;
};

/// Rectangle of z values for which the boundary contribution decays.
/// Half-widths: sqrt(pi alpha / 2); 2 sqrt(pi) / Delta^{3/4}; sqrt(pi/2q)
/// for the character families; 2 sqrt(pi/q) for the cusp families.
Rectangle admissible_domain(const hecke::FamilyDescriptor& family);

/// F_z(sigma_c + i t) where sigma_c = r/2 is the family's critical
/// abscissa: sum of c_j eta(sigma_c + i(t + lambda_j)) times twice the
/// real part of the confluent factor at conj(z)^2/4.  The value is
/// rotated by the family's line phase (for the character family the
/// explicit Gauss-sum phase) so that it is real under the corresponding
/// theorem's hypotheses.
ValueWithError combination_value(const CombinationSpec& spec, const Real& t,
                                 const Precision& prec);

/// Diagnostics for a spec: per-term polar data and the z coordinates.
ScanDiagnostics scan_diagnostics(const CombinationSpec& spec, const Precision& prec);

/// Samples F on the grid t0, t0+step, ..., verifies realness at every
/// sample (RealnessError otherwise), brackets sign changes, and refines
/// each bracket by bisection to half-width <= step * 1e-6.  Consecutive
/// same-sign samples with small minimum magnitude get one midpoint probe
/// so that close pairs separated by less than a step are usually caught;
/// the reported count remains a lower bound for the true number of sign
/// changes.  Grid samples indistinguishable from zero are reported once
/// and absorb the sign change across them.
ZeroReport scan_sign_changes(const CombinationSpec& spec, const Real& t0, const Real& t1,
                             const Real& step, const Precision& prec);

}  // namespace hecklab::zeros
