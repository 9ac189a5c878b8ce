#include "hecklab/cli.hpp"

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"

#include "hecklab/hecke.hpp"
#include "hecklab/parallel.hpp"
#include "hecklab/precision.hpp"
#include "hecklab/theta.hpp"
#include "hecklab/verify.hpp"
#include "hecklab/zeros.hpp"

namespace hecklab::cli {
namespace {

std::string trimmed(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

long guard_bits(const Precision& prec) {
  return prec.working_bits + 48 + prec.working_bits / 8;
}

// ---------------------------------------------------------------------------
// deterministic emission

std::string nstr(const Real& x, long digits) { return x.str(digits); }

std::string jstr(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  out += '"';
  return out;
}

std::string jcomplex(const Complex& v, long digits) {
  return "{\"re\":" + nstr(v.re, digits) + ",\"im\":" + nstr(v.im, digits) + "}";
}

std::string report_json(const verify::VerificationReport& rep, long digits) {
  std::string out = "{\"id\":" + jstr(rep.id) + ",\"params\":{";
  bool first = true;
  for (const auto& [key, value] : rep.params) {
    if (!first) out += ',';
    first = false;
    out += jstr(key) + ":" + jstr(value);
  }
  out += "},\"lhs\":" + jcomplex(rep.lhs, digits) + ",\"rhs\":" + jcomplex(rep.rhs, digits);
  out += ",\"abs_residual\":" + nstr(rep.abs_residual, digits);
  out += ",\"rel_residual\":" + nstr(rep.rel_residual, digits);
  out += ",\"truncation\":[";
  for (size_t i = 0; i < rep.truncation.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(rep.truncation[i]);
  }
  out += "],\"status\":" + jstr(rep.status) + "}";
  return out;
}

std::string zero_report_json(const zeros::ZeroReport& rep, long digits) {
  std::string out = "{\"t0\":" + nstr(rep.t0, digits) + ",\"t1\":" + nstr(rep.t1, digits) +
                    ",\"step\":" + nstr(rep.step, digits) + ",\"zeros\":[";
  for (size_t i = 0; i < rep.zeros.size(); ++i) {
    if (i) out += ',';
    out += "{\"t\":" + nstr(rep.zeros[i].t, digits) + ",\"err\":" + nstr(rep.zeros[i].err, digits) +
           "}";
  }
  out += "],\"sign_changes\":" + std::to_string(rep.sign_changes);
  out += ",\"realness_max\":" + nstr(rep.realness_max, digits) + "}";
  return out;
}

struct Sink {
  std::ofstream file;
  std::ostream* os = &std::cout;
  bool no_meta = false;

  void open(const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw UsageError("cannot open output file: " + path);
    os = &file;
  }
  void meta(const std::string& line) {
    if (!no_meta) *os << "# " << line << '\n';
  }
  void payload(const std::string& text) { *os << text << '\n'; }
};

std::string timestamp_utc() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

// ---------------------------------------------------------------------------
// shared option groups

struct CommonFlags {
  long bits = 0;
  long threads = 0;
  bool no_meta = false;
  std::string output;
  std::string config;
  CLI::Option* o_bits = nullptr;

  void attach(CLI::App* sub) {
    o_bits = sub->add_option("--bits", bits, "working precision in bits");
    sub->add_option("--threads", threads, "thread budget, 0 = all cores");
    sub->add_flag("--no-meta", no_meta, "suppress '#' meta lines for byte-stable output");
    sub->add_option("--output", output, "write to a file instead of standard output");
    sub->add_option("--config", config, "flat key = value config file");
  }

  Precision precision() const {
    long b = bits;
    if (o_bits->count() == 0) {
      const char* env = std::getenv("HECKELAB_BITS");
      b = env ? std::atol(env) : 128;
    }
    if (b < 64) throw UsageError("precision below 64 bits is not supported");
    return Precision::bits(b);
  }

  bool parallel() const {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(static_cast<int>(threads));
#endif
    return threads != 1;
  }
};

struct FamilyFlags {
  std::string family;
  std::string alpha;
  long A = 1, B = 0, C = 1;
  long p = 0, q = 1;
  std::string parity;
  long k = 1;
  long index = -1;
  std::string name;
  CLI::Option *o_alpha = nullptr, *o_A = nullptr, *o_B = nullptr, *o_C = nullptr,
              *o_p = nullptr, *o_q = nullptr, *o_parity = nullptr, *o_k = nullptr,
              *o_index = nullptr, *o_name = nullptr;

  void attach(CLI::App* sub) {
    sub->add_option("--family", family, "family name or full descriptor text")->required();
    o_alpha = sub->add_option("--alpha", alpha, "exponent parameter");
    o_A = sub->add_option("--A", A, "quadratic form coefficient");
    o_B = sub->add_option("--B", B, "quadratic form coefficient");
    o_C = sub->add_option("--C", C, "quadratic form coefficient");
    o_p = sub->add_option("--p", p, "twist numerator");
    o_q = sub->add_option("--q", q, "twist denominator or character modulus");
    o_parity = sub->add_option("--parity", parity, "character parity, even or odd");
    o_k = sub->add_option("--k", k, "power or weight");
    o_index = sub->add_option("--index", index, "character index");
    o_name = sub->add_option("--name", name, "cusp form name");
  }

  std::string descriptor() const {
    if (family.find(':') != std::string::npos) return family;
    std::string d = family;
    char sep = ':';
    auto add = [&](const char* key, const std::string& value, CLI::Option* opt) {
      if (opt != nullptr && opt->count() > 0) {
        d += sep;
        sep = ',';
        d += key;
        d += '=';
        d += value;
      }
    };
    add("alpha", alpha, o_alpha);
    add("A", std::to_string(A), o_A);
    add("B", std::to_string(B), o_B);
    add("C", std::to_string(C), o_C);
    add("name", name, o_name);
    add("k", std::to_string(k), o_k);
    add("q", std::to_string(q), o_q);
    add("parity", parity, o_parity);
    add("index", std::to_string(index), o_index);
    add("p", std::to_string(p), o_p);
    return d;
  }
};

// Items separate on ';' when one is present, else on ','. Values such as
// family descriptors contain commas, so those invocations must use ';'.
verify::ParamMap parse_params(const std::string& text) {
  verify::ParamMap out;
  std::string t = trimmed(text);
  if (t.empty()) return out;
  const char sep = t.find(';') != std::string::npos ? ';' : ',';
  size_t pos = 0;
  while (pos <= t.size()) {
    size_t comma = t.find(sep, pos);
    std::string item = t.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    size_t eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("parameter item needs key=value: " + item);
    out[trimmed(item.substr(0, eq))] = trimmed(item.substr(eq + 1));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<zeros::CombinationTerm> parse_terms(const std::string& text) {
  std::vector<zeros::CombinationTerm> out;
  std::string t = trimmed(text);
  size_t pos = 0;
  while (pos <= t.size()) {
    size_t comma = t.find(',', pos);
    std::string item = t.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    size_t at = item.find('@');
    if (at == std::string::npos) throw UsageError("term needs the form c@lambda: " + item);
    out.push_back({verify::parse_real_text(item.substr(0, at)),
                   verify::parse_real_text(item.substr(at + 1))});
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw UsageError("term list is empty");
  return out;
}

std::vector<Real> parse_real_list(const std::string& text) {
  std::vector<Real> out;
  std::string t = trimmed(text);
  size_t pos = 0;
  while (pos <= t.size()) {
    size_t comma = t.find(',', pos);
    std::string item = t.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    out.push_back(verify::parse_real_text(item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

void standard_meta(Sink& sink, const char* subcommand, const Precision& prec) {
  sink.meta(std::string("hecklab ") + subcommand);
  sink.meta("bits = " + std::to_string(prec.working_bits));
  sink.meta("generated = " + timestamp_utc());
}

}  // namespace

// ---------------------------------------------------------------------------
// configuration

std::map<std::string, std::string> RunConfig::effective(const std::string& subcommand) const {
  std::map<std::string, std::string> out;
  auto g = sections.find("");
  if (g != sections.end()) out = g->second;
  auto s = sections.find(subcommand);
  if (s != sections.end())
    for (const auto& [key, value] : s->second) out[key] = value;
  return out;
}

std::string RunConfig::canonical_text() const {
  std::string out;
  auto dump = [&](const std::map<std::string, std::string>& kv) {
    for (const auto& [key, value] : kv) out += key + " = " + value + "\n";
  };
  auto g = sections.find("");
  if (g != sections.end()) dump(g->second);
  for (const auto& [name, kv] : sections) {
    if (name.empty()) continue;
    out += "[" + name + "]\n";
    dump(kv);
  }
  return out;
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trimmed(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw UsageError("config line " + std::to_string(lineno) +
                                            ": unterminated section header");
      section = trimmed(t.substr(1, t.size() - 2));
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trimmed(t.substr(0, eq));
    std::string value = trimmed(t.substr(eq + 1));
    if (key.empty()) throw UsageError("config line " + std::to_string(lineno) + ": empty key");
    cfg.sections[section][key] = value;
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

// ---------------------------------------------------------------------------
// entry point

int run(const std::vector<std::string>& args) {
  CLI::App app{"theta transformation laboratory for Hecke-type Dirichlet series"};
  app.require_subcommand(1);

  CLI::App* c_coeffs = app.add_subcommand("coeffs", "dump coefficients a(n) as CSV n,re,im");
  CommonFlags coeffs_common;
  FamilyFlags coeffs_family;
  coeffs_common.attach(c_coeffs);
  coeffs_family.attach(c_coeffs);
  long coeffs_n = 10;
  c_coeffs->add_option("--n", coeffs_n, "number of coefficients");

  CLI::App* c_eval = app.add_subcommand(
      "eval", "analytic continuation: one point as JSON, or a line as CSV t,re,im,err");
  CommonFlags eval_common;
  FamilyFlags eval_family;
  eval_common.attach(c_eval);
  eval_family.attach(c_eval);
  std::string eval_s, eval_what = "eta", eval_t0, eval_t1, eval_step;
  c_eval->add_option("--s", eval_s, "evaluation point, complex");
  c_eval->add_option("--what", eval_what, "eta | eta-dual | phi");
  c_eval->add_option("--t0", eval_t0, "line start");
  c_eval->add_option("--t1", eval_t1, "line end");
  c_eval->add_option("--step", eval_step, "line step");

  CLI::App* c_theta = app.add_subcommand("eval-theta", "theta sum value as JSON");
  CommonFlags theta_common;
  FamilyFlags theta_family;
  theta_common.attach(c_theta);
  theta_family.attach(c_theta);
  std::string theta_x, theta_z = "0";
  bool theta_dual = false;
  c_theta->add_option("--x", theta_x, "argument with positive real part")->required();
  c_theta->add_option("--z", theta_z, "confluent argument");
  c_theta->add_flag("--dual", theta_dual, "evaluate the dual-side sum");

  CLI::App* c_verify = app.add_subcommand("verify", "check catalogued identities");
  CommonFlags verify_common;
  verify_common.attach(c_verify);
  std::string verify_id, verify_params, verify_suite = "default", verify_tol;
  c_verify->add_option("--id", verify_id, "identity id, e.g. KOBER");
  c_verify->add_option("--params", verify_params,
                       "key=value list; ';'-separated when a value itself contains commas");
  c_verify->add_option("--suite", verify_suite, "suite name or path to a suite JSON file");
  c_verify->add_option("--tolerance", verify_tol, "relative residual gate");

  CLI::App* c_scan = app.add_subcommand("scan", "critical-line sign-change scan");
  CommonFlags scan_common;
  FamilyFlags scan_family;
  scan_common.attach(c_scan);
  scan_family.attach(c_scan);
  std::string scan_terms, scan_z = "0", scan_t0, scan_t1, scan_step = "0.05", scan_trace;
  c_scan->add_option("--terms", scan_terms, "combination terms c@lambda[,c@lambda...]")
      ->required();
  c_scan->add_option("--z", scan_z, "confluent argument");
  c_scan->add_option("--t0", scan_t0, "scan start")->required();
  c_scan->add_option("--t1", scan_t1, "scan end")->required();
  c_scan->add_option("--step", scan_step, "grid step");
  c_scan->add_option("--trace", scan_trace, "also write a CSV t,F trace to this file");

  CLI::App* c_decay = app.add_subcommand("decay", "boundary remainder magnitudes as CSV");
  CommonFlags decay_common;
  FamilyFlags decay_family;
  decay_common.attach(c_decay);
  decay_family.attach(c_decay);
  std::string decay_z = "0", decay_deltas = "0.05,0.04,0.03,0.02,0.01";
  c_decay->add_option("--z", decay_z, "confluent argument");
  c_decay->add_option("--deltas", decay_deltas, "comma list of positive offsets from x = i");

  // config file: applies to the chosen subcommand; explicit flags win
  std::vector<std::string> argv = args;
  try {
    std::string config_path;
    for (size_t i = 0; i < argv.size(); ++i) {
      if (argv[i] == "--config" && i + 1 < argv.size())
        config_path = argv[i + 1];
      else if (argv[i].rfind("--config=", 0) == 0)
        config_path = argv[i].substr(9);
    }
    if (!config_path.empty()) {
      RunConfig cfg = load_config(config_path);
      std::string subname;
      CLI::App* sub = nullptr;
      for (const std::string& a : argv) {
        for (CLI::App* cand : app.get_subcommands({})) {
          if (cand->get_name() == a) {
            subname = a;
            sub = cand;
          }
        }
        if (sub) break;
      }
      if (sub) {
        auto given = [&](const std::string& flag) {
          for (const std::string& a : argv)
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
          return false;
        };
        bool in_section = cfg.sections.count(subname) > 0;
        for (const auto& [key, value] : cfg.effective(subname)) {
          std::string flag = "--" + key;
          CLI::Option* opt = sub->get_option_no_throw(flag);
          if (opt == nullptr) {
            if (in_section && cfg.sections.at(subname).count(key))
              throw UsageError("config key '" + key + "' is not a flag of " + subname);
            continue;  // global key for some other subcommand
          }
          if (given(flag)) continue;
          if (opt->get_expected_min() == 0) {
            if (value == "true" || value == "1" || value == "yes") argv.push_back(flag);
          } else {
            argv.push_back(flag);
            argv.push_back(value);
          }
        }
      }
    }

    std::vector<std::string> rev(argv.rbegin(), argv.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const DescriptorError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(c_coeffs)) {
      Precision prec = coeffs_common.precision();
      long digits = prec.decimal_digits();
      Sink sink;
      sink.no_meta = coeffs_common.no_meta;
      sink.open(coeffs_common.output);
      PrecisionScope scope(guard_bits(prec));
      hecke::HeckePair pair = hecke::build_pair(coeffs_family.descriptor(), prec);
      standard_meta(sink, "coeffs", prec);
      sink.meta("family = " + coeffs_family.descriptor());
      std::string csv = "n,re,im";
      for (long i = pair.a_first(); i < pair.a_first() + coeffs_n; ++i) {
        Complex v = pair.a(i);
        csv += "\n" + std::to_string(i) + "," + nstr(v.re, digits) + "," + nstr(v.im, digits);
      }
      sink.payload(csv);
      return 0;
    }

    if (app.got_subcommand(c_eval)) {
      Precision prec = eval_common.precision();
      long digits = prec.decimal_digits();
      Sink sink;
      sink.no_meta = eval_common.no_meta;
      sink.open(eval_common.output);
      PrecisionScope scope(guard_bits(prec));
      hecke::HeckePair pair = hecke::build_pair(eval_family.descriptor(), prec);
      standard_meta(sink, "eval", prec);
      sink.meta("family = " + eval_family.descriptor());
      if (!eval_t0.empty() || !eval_t1.empty()) {
        if (eval_t0.empty() || eval_t1.empty() || eval_step.empty())
          throw UsageError("line mode needs --t0, --t1, and --step");
        Real t0 = verify::parse_real_text(eval_t0);
        Real t1 = verify::parse_real_text(eval_t1);
        Real step = verify::parse_real_text(eval_step);
        if (step.sign() <= 0 || !(t0 < t1)) throw UsageError("line mode needs t0 < t1, step > 0");
        long count =
            static_cast<long>(std::floor(((t1 - t0) / step).to_double() + 1e-9)) + 1;
        std::string csv = "t,re,im,err";
        for (long i = 0; i < count; ++i) {
          Real t = t0 + step * Real(i);
          ValueWithError v = hecke::eval_eta_line(pair, t, prec);
          csv += "\n" + nstr(t, digits) + "," + nstr(v.value.re, digits) + "," +
                 nstr(v.value.im, digits) + "," + nstr(v.err, digits);
        }
        sink.payload(csv);
        return 0;
      }
      if (eval_s.empty()) throw UsageError("eval needs --s, or --t0/--t1/--step for a line");
      Complex s = verify::parse_complex_text(eval_s);
      ValueWithError v;
      if (eval_what == "eta")
        v = hecke::eval_eta(pair, s, prec);
      else if (eval_what == "eta-dual")
        v = hecke::eval_eta_dual(pair, s, prec, Real(17L) / Real(20L));
      else if (eval_what == "phi")
        v = hecke::eval_phi(pair, s, prec);
      else
        throw UsageError("--what must be eta, eta-dual, or phi");
      sink.payload("{\"s\":" + jcomplex(s, digits) + ",\"value\":" + jcomplex(v.value, digits) +
                   ",\"err\":" + nstr(v.err, digits) + "}");
      return 0;
    }

    if (app.got_subcommand(c_theta)) {
      Precision prec = theta_common.precision();
      long digits = prec.decimal_digits();
      Sink sink;
      sink.no_meta = theta_common.no_meta;
      sink.open(theta_common.output);
      PrecisionScope scope(guard_bits(prec));
      hecke::HeckePair pair = hecke::build_pair(theta_family.descriptor(), prec);
      Complex x = verify::parse_complex_text(theta_x);
      Complex z = verify::parse_complex_text(theta_z);
      theta::ThetaValue v = theta_dual ? theta::psi_jacobi_dual(pair, x, z, prec)
                                       : theta::psi_jacobi(pair, x, z, prec);
      standard_meta(sink, "eval-theta", prec);
      sink.meta("family = " + theta_family.descriptor());
      sink.payload("{\"x\":" + jcomplex(x, digits) + ",\"z\":" + jcomplex(z, digits) +
                   ",\"value\":" + jcomplex(v.value, digits) + ",\"err\":" + nstr(v.err, digits) +
                   ",\"N_used\":" + std::to_string(v.n_used) + "}");
      return 0;
    }

    if (app.got_subcommand(c_verify)) {
      Precision prec = verify_common.precision();
      long digits = prec.decimal_digits();
      Sink sink;
      sink.no_meta = verify_common.no_meta;
      sink.open(verify_common.output);
      Real tol;
      {
        PrecisionScope scope(guard_bits(prec));
        tol = verify_tol.empty() ? verify::default_tolerance(prec)
                                 : verify::parse_real_text(verify_tol);
      }
      standard_meta(sink, "verify", prec);
      auto exit_code = [](const std::vector<verify::VerificationReport>& reps) {
        int code = 0;
        for (const auto& r : reps) {
          if (r.status == "FAIL") return 1;
          if (r.status == "INCONCLUSIVE") code = 3;
        }
        return code;
      };
      if (!verify_id.empty()) {
        verify::VerificationReport rep =
            verify::verify_identity(verify_id, parse_params(verify_params), prec, tol);
        sink.meta(rep.id + " " + rep.status);
        sink.payload(report_json(rep, digits));
        return exit_code({rep});
      }
      std::string path = verify_suite.find('/') != std::string::npos ||
                                 verify_suite.find(".json") != std::string::npos
                             ? verify_suite
                             : verify::default_suite_path(verify_suite);
      std::vector<verify::SuiteEntry> entries = verify::load_suite(path);
      bool parallel = verify_common.parallel();
      std::vector<verify::VerificationReport> reps(entries.size());
      parallel_for(static_cast<long>(entries.size()), parallel, [&](long i) {
        reps[static_cast<size_t>(i)] = verify::verify_identity(
            entries[static_cast<size_t>(i)].id, entries[static_cast<size_t>(i)].params, prec, tol);
      });
      PrecisionScope scope(guard_bits(prec));
      for (const auto& rep : reps) {
        std::string ptext;
        for (const auto& [key, value] : rep.params) {
          if (!ptext.empty()) ptext += ',';
          ptext += key + "=" + value;
        }
        std::ostringstream el;
        el.precision(2);
        el << std::fixed << rep.elapsed_seconds;
        sink.meta(rep.id + " " + (ptext.empty() ? "-" : ptext) + " " + rep.status +
                  " rel=" + nstr(rep.rel_residual, 3) + " " + el.str() + "s");
      }
      std::string payload = "[";
      for (size_t i = 0; i < reps.size(); ++i) {
        if (i) payload += ',';
        payload += "\n" + report_json(reps[i], digits);
      }
      payload += "\n]";
      sink.payload(payload);
      return exit_code(reps);
    }

    if (app.got_subcommand(c_scan)) {
      Precision prec = scan_common.precision();
      long digits = prec.decimal_digits();
      Sink sink;
      sink.no_meta = scan_common.no_meta;
      sink.open(scan_common.output);
      scan_common.parallel();
      PrecisionScope scope(guard_bits(prec));
      zeros::CombinationSpec spec;
      spec.terms = parse_terms(scan_terms);
      spec.z = verify::parse_complex_text(scan_z);
      spec.family = hecke::FamilyDescriptor::parse(scan_family.descriptor());
      Real t0 = verify::parse_real_text(scan_t0);
      Real t1 = verify::parse_real_text(scan_t1);
      Real step = verify::parse_real_text(scan_step);
      zeros::ZeroReport rep = zeros::scan_sign_changes(spec, t0, t1, step, prec);
      standard_meta(sink, "scan", prec);
      sink.meta("family = " + scan_family.descriptor());
      sink.meta("u_z = " + nstr(rep.diagnostics.u_z, digits));
      sink.meta("v_z = " + nstr(rep.diagnostics.v_z, digits));
      sink.meta("w_z = " + nstr(rep.diagnostics.w_z, digits));
      sink.meta("beta_z = " + nstr(rep.diagnostics.beta_z, digits));
      for (size_t j = 0; j < rep.diagnostics.r_j.size(); ++j)
        sink.meta("term " + std::to_string(j) + ": r = " + nstr(rep.diagnostics.r_j[j], digits) +
                  ", theta = " + nstr(rep.diagnostics.theta_j[j], digits));
      sink.payload(zero_report_json(rep, digits));
      if (!scan_trace.empty()) {
        std::ofstream tr(scan_trace);
        if (!tr) throw UsageError("cannot open trace file: " + scan_trace);
        tr << "t,F\n";
        long count =
            static_cast<long>(std::floor(((t1 - t0) / step).to_double() + 1e-9)) + 1;
        for (long i = 0; i < count; ++i) {
          Real t = t0 + step * Real(i);
          ValueWithError v = zeros::combination_value(spec, t, prec);
          tr << nstr(t, digits) << "," << nstr(v.value.re, digits) << "\n";
        }
      }
      return 0;
    }

    if (app.got_subcommand(c_decay)) {
      Precision prec = decay_common.precision();
      long digits = prec.decimal_digits();
      Sink sink;
      sink.no_meta = decay_common.no_meta;
      sink.open(decay_common.output);
      PrecisionScope scope(guard_bits(prec));
      hecke::HeckePair pair = hecke::build_pair(decay_family.descriptor(), prec);
      Complex z = verify::parse_complex_text(decay_z);
      std::vector<Real> deltas = parse_real_list(decay_deltas);
      std::vector<theta::DecayPoint> points = theta::boundary_decay(pair, z, deltas, prec);
      Real slope = theta::fit_decay_slope(points);
      standard_meta(sink, "decay", prec);
      sink.meta("family = " + decay_family.descriptor());
      sink.meta("fitted_slope = " + nstr(slope, digits));
      std::string csv = "delta,abs_R,log_abs_R";
      for (const auto& pt : points)
        csv += "\n" + nstr(pt.delta, digits) + "," + nstr(pt.abs_r, digits) + "," +
               nstr(log(pt.abs_r), digits);
      sink.payload(csv);
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const DescriptorError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

}  // namespace hecklab::cli
