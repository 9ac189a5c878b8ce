#pragma once

#include <map>
#include <string>
#include <vector>

#include "hecklab/complexval.hpp"
#include "hecklab/precision.hpp"

namespace hecklab::verify {

using ParamMap = std::map<std::string, std::string>;

// Numeric literals as they appear in parameter maps and CLI flags:
// decimals, rationals ("5/2"), and complex values with a trailing i
// ("0.8+0.3i", "2i", "-i").  UsageError on anything unparseable.
Real parse_real_text(const std::string& text);
Complex parse_complex_text(const std::string& text);
long parse_long_text(const std::string& text);

// Outcome of checking one catalogued identity at one parameter point.
// Both sides are evaluated through independent routes (different series,
// split points, or quadrature), so agreement is evidence rather than
// tautology.
struct VerificationReport {
  std::string id;
  ParamMap params;
  Complex lhs;
  Complex rhs;
  Real abs_residual;
  Real rel_residual;
  std::vector<long> truncation;  // terms consumed per series, lhs first
  double elapsed_seconds = 0.0;
  std::string status;  // "PASS" | "FAIL" | "INCONCLUSIVE"
};

// Catalogue identifiers, in canonical order.
const std::vector<std::string>& identity_ids();

// 10^{-0.6 * decimal_digits(prec)}.
Real default_tolerance(const Precision& prec);

// Check one identity; `tol` is the relative-residual gate, and both error
// estimates must stay below tol/4 of the larger side for PASS.  Throws
// UsageError for unknown ids or missing parameters and HypothesisError
// when a parameter violates the identity's validity region; numeric
// truncation or quadrature failures yield status INCONCLUSIVE.
VerificationReport verify_identity(const std::string& id, const ParamMap& params,
                                   const Precision& prec, const Real& tol);
VerificationReport verify_identity(const std::string& id, const ParamMap& params,
                                   const Precision& prec);

struct SuiteEntry {
  std::string id;
  ParamMap params;
};

// Reads a grid file: {"entries": [{"id": ..., "params": {...}}, ...]}.
std::vector<SuiteEntry> load_suite(const std::string& path);
// Path of a named suite under the compiled-in grid directory.
std::string default_suite_path(const std::string& name);

// Runs all entries, optionally in parallel; the report order matches the
// entry order regardless of scheduling.
std::vector<VerificationReport> run_suite(const std::vector<SuiteEntry>& entries,
                                          const Precision& prec, bool parallel);

}  // namespace hecklab::verify
