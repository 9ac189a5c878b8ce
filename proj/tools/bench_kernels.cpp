// Times the OpenMP kernels against the serial reference path and checks
// that both produce bit-identical output.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "hecklab/parallel.hpp"
#include "hecklab/precision.hpp"
#include "hecklab/verify.hpp"
#include "hecklab/zeros.hpp"

namespace {

using hecklab::Precision;
using hecklab::Real;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string suite_fingerprint(const std::vector<hecklab::verify::VerificationReport>& reps) {
  hecklab::PrecisionScope scope(256);
  std::string out;
  for (const auto& r : reps)
    out += r.id + ":" + r.status + ":" + r.rel_residual.str(40) + ";";
  return out;
}

std::string scan_fingerprint(const hecklab::zeros::ZeroReport& rep) {
  hecklab::PrecisionScope scope(256);
  std::string out = std::to_string(rep.sign_changes) + ";";
  for (const auto& z : rep.zeros) out += z.t.str(40) + "+-" + z.err.str(10) + ";";
  return out;
}

}  // namespace

int main() {
  Precision prec = Precision::bits(128);

  std::vector<hecklab::verify::SuiteEntry> entries = {
      {"KOBER", {{"s", "1"}, {"x", "1"}, {"y", "0"}}},
      {"KOBER", {{"s", "2.5"}, {"x", "0.8"}, {"y", "0.45"}}},
      {"BERNDT_K", {{"family", "zeta-alpha:alpha=1"}, {"s", "6"}, {"x", "1"}}},
      {"BOCHNER", {{"family", "zeta-alpha:alpha=1"}, {"x", "1"}}},
      {"BOCHNER", {{"family", "epstein:A=1,B=0,C=1"}, {"x", "1.2"}}},
      {"FUNC_EQ", {{"family", "zeta-alpha:alpha=2"}, {"s", "0.6+2.0i"}}},
  };

  auto t0 = std::chrono::steady_clock::now();
  auto serial_reports = hecklab::verify::run_suite(entries, prec, false);
  double suite_serial = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  auto parallel_reports = hecklab::verify::run_suite(entries, prec, true);
  double suite_parallel = seconds_since(t0);

  bool suite_same = suite_fingerprint(serial_reports) == suite_fingerprint(parallel_reports);

  hecklab::zeros::CombinationSpec spec;
  {
    hecklab::PrecisionScope scope(192);
    spec.terms = {{Real(1L), Real(0L)}};
    spec.z = hecklab::Complex(0L);
    spec.family = hecklab::hecke::FamilyDescriptor::parse("zeta-alpha:alpha=1");
  }
  Real lo, hi, step;
  {
    hecklab::PrecisionScope scope(192);
    lo = Real(5L);
    hi = Real(9L);
    step = Real(1L) / Real(10L);
  }

  omp_set_num_threads(1);
  t0 = std::chrono::steady_clock::now();
  auto scan_serial = hecklab::zeros::scan_sign_changes(spec, lo, hi, step, prec);
  double line_serial = seconds_since(t0);

  omp_set_num_threads(omp_get_max_threads() > 1 ? omp_get_max_threads() : 1);
#ifdef _OPENMP
  omp_set_num_threads(omp_get_num_procs());
#endif
  t0 = std::chrono::steady_clock::now();
  auto scan_parallel = hecklab::zeros::scan_sign_changes(spec, lo, hi, step, prec);
  double line_parallel = seconds_since(t0);

  bool scan_same = scan_fingerprint(scan_serial) == scan_fingerprint(scan_parallel);

  std::printf("%-28s %10s %10s %8s %10s\n", "kernel", "serial_s", "parallel_s", "speedup",
              "identical");
  std::printf("%-28s %10.2f %10.2f %7.2fx %10s\n", "identity suite (6 entries)", suite_serial,
              suite_parallel, suite_serial / (suite_parallel > 0 ? suite_parallel : 1e-9),
              suite_same ? "yes" : "NO");
  std::printf("%-28s %10.2f %10.2f %7.2fx %10s\n", "line scan (41 points)", line_serial,
              line_parallel, line_serial / (line_parallel > 0 ? line_parallel : 1e-9),
              scan_same ? "yes" : "NO");
  return suite_same && scan_same ? 0 : 1;
}
