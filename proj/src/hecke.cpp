#include "hecklab/hecke.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "hecklab/specfun.hpp"

namespace hecklab::hecke {

namespace sf = specfun;

namespace {

std::string trimmed(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

mpq_class parse_rational(const std::string& raw) {
  std::string t = trimmed(raw);
  if (t.empty()) throw DescriptorError("empty numeric value");
  try {
    if (t.find('/') != std::string::npos) {
      mpq_class v(t);
      v.canonicalize();
      return v;
    }
    auto dot = t.find('.');
    if (dot == std::string::npos) {
      mpq_class v(t);
      v.canonicalize();
      return v;
    }
    std::string digits = t.substr(0, dot) + t.substr(dot + 1);
    if (digits.empty() || digits == "-" || digits == "+") throw std::invalid_argument(t);
    mpz_class num(digits);
    mpz_class den(1);
    for (std::size_t j = dot + 1; j < t.size(); ++j) {
      if (!std::isdigit(static_cast<unsigned char>(t[j]))) throw std::invalid_argument(t);
      den *= 10;
    }
    mpq_class v(num, den);
    v.canonicalize();
    return v;
  } catch (const std::invalid_argument&) {
    throw DescriptorError("malformed numeric value: " + t);
  }
}

long parse_integer(const std::string& raw) {
  std::string t = trimmed(raw);
  try {
    std::size_t pos = 0;
    long v = std::stol(t, &pos);
    if (pos != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw DescriptorError("malformed integer value: " + t);
  }
}

long isqrt_long(long n) {
  if (n < 0) return -1;
  long r = static_cast<long>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

long mod_inverse(long a, long m) {
  if (m == 1) return 0;
  long r0 = m, r1 = ((a % m) + m) % m, t0 = 0, t1 = 1;
  while (r1 != 0) {
    long qq = r0 / r1;
    long r2 = r0 - qq * r1;
    long t2 = t0 - qq * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  if (r0 != 1) throw DescriptorError("value is not invertible for the requested modulus");
  return ((t0 % m) + m) % m;
}

// i^e for any integer e
Complex i_power(long e) {
  e %= 4;
  if (e < 0) e += 4;
  switch (e) {
    case 0: return Complex(1L);
    case 1: return Complex(0L, 1L);
    case 2: return Complex(-1L);
    default: return Complex(0L, -1L);
  }
}

Complex half(const Complex& z) { return Complex(ldexp(z.re, -1), ldexp(z.im, -1)); }

// e^{2 pi i j / m}
Complex root_of_unity(long j, long m) {
  j %= m;
  if (j < 0) j += m;
  Real ang = ldexp(const_pi(), 1) * Real(j) / Real(m);
  return Complex(cos(ang), sin(ang));
}

// pull square factors of d into rat so pi * rat / sqrt(d) stays exact
void normalize_sqrt(mpq_class& rat, long& d) {
  for (long j = 2; j * j <= d; ++j) {
    while (d % (j * j) == 0) {
      d /= j * j;
      rat /= j;
    }
  }
}

mpq_class sigma_for_theta_power(const mpq_class& alpha) {
  if (alpha >= 4) return alpha / 2;
  return 1 + alpha / 4;
}

// ---------------------------------------------------------------------------
// coefficient adapters

class AlternatingStream final : public coeffs::CoefficientStream {
 public:
  explicit AlternatingStream(StreamPtr base)
      : CoefficientStream(base->first_index(), base->growth_kappa(), base->growth_C(),
                          base->is_exact()),
        base_(std::move(base)) {}

 private:
  void extend_to(long target) override {
    base_->ensure(target - 1);
    if (!exact_) return;
    for (long n = first_ + static_cast<long>(vals_.size()); n < target; ++n) {
      mpq_class v = base_->exact_at(n);
      if (n & 1) v = -v;
      vals_.push_back(std::move(v));
    }
  }

  Complex get(long n) const override {
    if (exact_) {
      return Complex(sf::real_from_mpq(vals_[static_cast<std::size_t>(n - first_)]), Real(0L));
    }
    Complex v = base_->at(n);
    return (n & 1) ? -v : v;
  }

  const mpq_class& get_exact(long n) const override {
    return vals_[static_cast<std::size_t>(n - first_)];
  }

  StreamPtr base_;
  std::vector<mpq_class> vals_;
};

class TwistStream final : public coeffs::CoefficientStream {
 public:
  // value(n) = base(n) * e^{2 pi i num n / den}; table held at the working
  // precision current at construction
  TwistStream(StreamPtr base, long num, long den)
      : CoefficientStream(base->first_index(), base->growth_kappa(), base->growth_C(), false),
        base_(std::move(base)),
        den_(den) {
    if (den_ < 1) throw DomainError("twist denominator must be positive");
    num_ = ((num % den_) + den_) % den_;
    table_.reserve(static_cast<std::size_t>(den_));
    for (long j = 0; j < den_; ++j) table_.push_back(root_of_unity(j, den_));
  }

 private:
  void extend_to(long target) override { base_->ensure(target - 1); }

  Complex get(long n) const override {
    long idx = ((n % den_) * num_) % den_;
    return base_->at(n) * table_[static_cast<std::size_t>(idx)];
  }

  StreamPtr base_;
  long num_ = 0;
  long den_ = 1;
  std::vector<Complex> table_;
};

class CharValueStream final : public coeffs::CoefficientStream {
 public:
  explicit CharValueStream(coeffs::DirichletCharacter chi)
      : CoefficientStream(1, Real(0L), Real(1L), false), chi_(std::move(chi)) {}

 private:
  void extend_to(long) override {}
  Complex get(long n) const override { return chi_.value(n); }

  coeffs::DirichletCharacter chi_;
};

class SquareSupportStream final : public coeffs::CoefficientStream {
 public:
  SquareSupportStream(StreamPtr base, int delta)
      : CoefficientStream(1, ldexp(base->growth_kappa() + Real(static_cast<long>(delta)), -1),
                          base->growth_C(), base->is_exact()),
        base_(std::move(base)),
        delta_(delta) {
    if (base_->first_index() > 1) throw DomainError("square support needs a base starting at 1");
  }

 private:
  void extend_to(long target) override {
    base_->ensure(std::max<long>(isqrt_long(target - 1), base_->first_index()));
    if (!exact_) return;
    for (long n = first_ + static_cast<long>(vals_.size()); n < target; ++n) {
      long m = isqrt_long(n);
      if (m * m == n && m >= base_->first_index()) {
        mpq_class v = base_->exact_at(m);
        if (delta_) v *= m;
        vals_.push_back(std::move(v));
      } else {
        vals_.emplace_back(0);
      }
    }
  }

  Complex get(long n) const override {
    if (exact_) {
      return Complex(sf::real_from_mpq(vals_[static_cast<std::size_t>(n - first_)]), Real(0L));
    }
    long m = isqrt_long(n);
    if (m * m != n || m < base_->first_index()) return Complex(0L);
    Complex v = base_->at(m);
    return delta_ ? v * Real(m) : v;
  }

  const mpq_class& get_exact(long n) const override {
    return vals_[static_cast<std::size_t>(n - first_)];
  }

  StreamPtr base_;
  int delta_ = 0;
  std::vector<mpq_class> vals_;
};

}  // namespace

StreamPtr alternating_stream(StreamPtr base) {
  return std::make_shared<AlternatingStream>(std::move(base));
}

StreamPtr twist_stream(StreamPtr base, long num, long den) {
  return std::make_shared<TwistStream>(std::move(base), num, den);
}

StreamPtr character_stream(const coeffs::DirichletCharacter& chi) {
  return std::make_shared<CharValueStream>(chi);
}

StreamPtr square_support_stream(StreamPtr base, int delta) {
  return std::make_shared<SquareSupportStream>(std::move(base), delta);
}

// ---------------------------------------------------------------------------
// descriptors

const char* family_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::ZetaAlpha: return "zeta-alpha";
    case FamilyKind::ZetaAlphaStar: return "zeta-alpha-star";
    case FamilyKind::Epstein: return "epstein";
    case FamilyKind::EpsteinExp: return "epstein-exp";
    case FamilyKind::CharK: return "char-k";
    case FamilyKind::CharKExp: return "char-k-exp";
    case FamilyKind::Cusp: return "cusp";
    case FamilyKind::CuspTwist: return "cusp-twist";
    case FamilyKind::Custom: return "custom";
  }
  return "custom";
}

FamilyDescriptor FamilyDescriptor::parse(const std::string& text) {
  std::string t = trimmed(text);
  std::string head = t, params;
  if (auto pos = t.find(':'); pos != std::string::npos) {
    head = trimmed(t.substr(0, pos));
    params = t.substr(pos + 1);
  }

  FamilyDescriptor d;
  static const std::map<std::string, FamilyKind> kinds = {
      {"zeta-alpha", FamilyKind::ZetaAlpha},   {"zeta-alpha-star", FamilyKind::ZetaAlphaStar},
      {"epstein", FamilyKind::Epstein},        {"epstein-exp", FamilyKind::EpsteinExp},
      {"char-k", FamilyKind::CharK},           {"char-k-exp", FamilyKind::CharKExp},
      {"cusp", FamilyKind::Cusp},              {"cusp-twist", FamilyKind::CuspTwist},
  };
  auto it = kinds.find(head);
  if (it == kinds.end()) throw DescriptorError("unknown family: " + head);
  d.kind = it->second;

  std::map<std::string, std::string> kv;
  std::stringstream ss(params);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    piece = trimmed(piece);
    if (piece.empty()) continue;
    auto eq = piece.find('=');
    if (eq == std::string::npos) throw DescriptorError("expected key=value, got: " + piece);
    std::string key = trimmed(piece.substr(0, eq));
    std::string val = trimmed(piece.substr(eq + 1));
    if (!kv.emplace(key, val).second) throw DescriptorError("duplicate key: " + key);
  }

  auto take = [&kv](const char* key) -> std::optional<std::string> {
    auto f = kv.find(key);
    if (f == kv.end()) return std::nullopt;
    std::string v = f->second;
    kv.erase(f);
    return v;
  };

  switch (d.kind) {
    case FamilyKind::ZetaAlpha:
    case FamilyKind::ZetaAlphaStar:
      if (auto v = take("alpha")) d.alpha = parse_rational(*v);
      break;
    case FamilyKind::Epstein:
    case FamilyKind::EpsteinExp:
      if (auto v = take("A")) d.A = parse_integer(*v);
      if (auto v = take("B")) d.B = parse_integer(*v);
      if (auto v = take("C")) d.C = parse_integer(*v);
      if (d.kind == FamilyKind::EpsteinExp) {
        if (auto v = take("p")) d.p = parse_integer(*v);
        if (auto v = take("q")) d.q = parse_integer(*v);
      }
      break;
    case FamilyKind::CharK:
    case FamilyKind::CharKExp:
      if (auto v = take("q")) d.char_q = parse_integer(*v);
      if (auto v = take("parity")) {
        if (*v == "even") {
          d.parity = 0;
        } else if (*v == "odd") {
          d.parity = 1;
        } else {
          throw DescriptorError("parity must be even or odd");
        }
      }
      if (auto v = take("k")) d.k = parse_integer(*v);
      if (auto v = take("index")) d.char_index = parse_integer(*v);
      if (d.kind == FamilyKind::CharKExp) {
        if (auto v = take("p")) d.p = parse_integer(*v);
        d.q = d.char_q;
      }
      break;
    case FamilyKind::Cusp:
    case FamilyKind::CuspTwist:
      d.k = 12;
      if (auto v = take("name")) d.name = *v;
      if (auto v = take("k")) d.k = parse_integer(*v);
      if (d.kind == FamilyKind::CuspTwist) {
        if (auto v = take("p")) d.p = parse_integer(*v);
        if (auto v = take("q")) d.q = parse_integer(*v);
      }
      break;
    case FamilyKind::Custom:
      break;
  }
  if (!kv.empty()) {
    throw DescriptorError("unknown key for family " + std::string(family_name(d.kind)) + ": " +
                          kv.begin()->first);
  }
  return d;
}

std::string FamilyDescriptor::text() const {
  std::ostringstream os;
  os << family_name(kind);
  switch (kind) {
    case FamilyKind::ZetaAlpha:
    case FamilyKind::ZetaAlphaStar:
      os << ":alpha=" << alpha.get_str();
      break;
    case FamilyKind::Epstein:
      os << ":A=" << A << ",B=" << B << ",C=" << C;
      break;
    case FamilyKind::EpsteinExp:
      os << ":A=" << A << ",B=" << B << ",C=" << C << ",p=" << p << ",q=" << q;
      break;
    case FamilyKind::CharK:
    case FamilyKind::CharKExp:
      os << ":q=" << char_q << ",parity=" << (parity ? "odd" : "even") << ",k=" << k;
      if (char_index >= 0) os << ",index=" << char_index;
      if (kind == FamilyKind::CharKExp) os << ",p=" << p;
      break;
    case FamilyKind::Cusp:
      os << ":name=" << name << ",k=" << k;
      break;
    case FamilyKind::CuspTwist:
      os << ":name=" << name << ",k=" << k << ",p=" << p << ",q=" << q;
      break;
    case FamilyKind::Custom:
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// pair accessors

Real HeckePair::r_value() const { return sf::real_from_mpq(r); }

Real HeckePair::scale() const {
  Real s = const_pi() * sf::real_from_mpq(scale_rat);
  if (scale_sqrt != 1) s /= sqrt(Real(scale_sqrt));
  return s;
}

Real HeckePair::mu_scale() const {
  Real s = const_pi() * sf::real_from_mpq(mu_scale_rat);
  if (mu_scale_sqrt != 1) s /= sqrt(Real(mu_scale_sqrt));
  return s;
}

Real HeckePair::lambda(long n) const {
  return scale() * (Real(n) + sf::real_from_mpq(lambda_seq.offset));
}

Real HeckePair::mu(long n) const {
  return mu_scale() * (Real(n) + sf::real_from_mpq(mu_seq.offset));
}

Complex HeckePair::a(long n) const {
  a_coeffs->ensure(n);
  return a_mult * a_coeffs->at(n);
}

Complex HeckePair::b(long n) const {
  b_coeffs->ensure(n);
  return b_mult * b_coeffs->at(n);
}

Complex HeckePair::b_eff(long n) const { return omega * b(n); }

void HeckePair::require_build_precision(const Precision& prec) const {
  if (prec.working_bits > build_bits) {
    throw UsageError("pair constants were built at " + std::to_string(build_bits) +
                     " bits; rebuild the pair for evaluation at " +
                     std::to_string(prec.working_bits));
  }
}

// ---------------------------------------------------------------------------
// builders

namespace {

HeckePair build_theta_power(const FamilyDescriptor& desc, const Precision& prec, bool star) {
  if (desc.alpha <= 0) throw DescriptorError("alpha must be positive");
  const mpq_class& alpha = desc.alpha;

  HeckePair pr;
  pr.family = desc;
  pr.build_bits = prec.working_bits;
  Precision bprec = prec.bits(2 * prec.working_bits + 32);
  PrecisionScope scope(bprec.working_bits);

  pr.r = alpha / 2;
  pr.scale_rat = 1;
  pr.scale_sqrt = 1;
  pr.mu_scale_rat = 1;
  pr.mu_scale_sqrt = 1;
  pr.sigma_a = sigma_for_theta_power(alpha);
  pr.sigma_b = star ? alpha / 2 + 1 : pr.sigma_a;
  pr.omega = Complex(1L);
  pr.phi0 = Complex(-1L);

  auto gr = sf::gamma(Complex(sf::real_from_mpq(pr.r)), bprec);
  Complex inv_gamma_r = Complex(1L) / gr.value;
  pr.rho_star = inv_gamma_r;
  if (star) {
    pr.rho = Complex(0L);
    pr.a_coeffs = alternating_stream(coeffs::r_alpha_stream(alpha));
    pr.b_coeffs = coeffs::r_tilde_alpha_stream(alpha);
    pr.mu_seq.first = 0;
    pr.mu_seq.offset = alpha / 4;
    pr.self_dual_real = false;
  } else {
    pr.rho = inv_gamma_r;
    pr.a_coeffs = coeffs::r_alpha_stream(alpha);
    pr.b_coeffs = pr.a_coeffs;
    pr.self_dual_real = true;
    pr.dual_is_conjugate = true;
  }
  pr.a_mult = Complex(1L);
  pr.b_mult = Complex(1L);
  return pr;
}

HeckePair build_epstein(const FamilyDescriptor& desc, const Precision& prec, bool twisted) {
  long disc = 4 * desc.A * desc.C - desc.B * desc.B;
  if (desc.A <= 0 || disc <= 0) throw DescriptorError("form must be positive definite");
  long q = twisted ? desc.q : 1;
  if (q < 1) throw DescriptorError("twist denominator must be positive");

  HeckePair pr;
  pr.family = desc;
  pr.build_bits = prec.working_bits;
  Precision bprec = prec.bits(2 * prec.working_bits + 32);
  PrecisionScope scope(bprec.working_bits);

  pr.r = 1;
  pr.scale_rat = mpq_class(2, q);
  pr.scale_sqrt = disc;
  normalize_sqrt(pr.scale_rat, pr.scale_sqrt);
  pr.mu_scale_rat = pr.scale_rat;
  pr.mu_scale_sqrt = pr.scale_sqrt;
  pr.sigma_a = 1;
  pr.omega = Complex(1L);
  pr.phi0 = Complex(-1L);
  pr.rho_star = Complex(1L);

  StreamPtr reps = coeffs::quadratic_reps(desc.A, desc.B, desc.C);
  if (!twisted) {
    pr.rho = Complex(1L);
    pr.a_coeffs = reps;
    pr.b_coeffs = reps;
    pr.sigma_b = pr.sigma_a;
    pr.self_dual_real = true;
    pr.dual_is_conjugate = true;
  } else {
    long pm = ((desc.p % q) + q) % q;
    pr.a_coeffs = twist_stream(reps, -pm, q);
    pr.b_coeffs = coeffs::epstein_exp_dual_stream(desc.A, desc.B, desc.C, pm, q, bprec);
    pr.rho = coeffs::epstein_gauss_term(desc.A, desc.B, desc.C, pm, q, bprec) / Real(q);
    pr.sigma_b = 2;
    pr.self_dual_real = false;
  }
  pr.a_mult = Complex(1L);
  pr.b_mult = Complex(1L);
  return pr;
}

HeckePair build_char_k(const FamilyDescriptor& desc, const Precision& prec, bool twisted) {
  if (desc.char_q < 3) throw DescriptorError("character modulus must be at least 3");
  if (desc.k < 1) throw DescriptorError("k must be a positive integer");

  coeffs::DirichletCharacter chi;
  try {
    chi = desc.char_index >= 0 ? coeffs::character(desc.char_q, desc.char_index)
                               : coeffs::primitive_character(desc.char_q, desc.parity, 0);
  } catch (const DomainError& e) {
    throw DescriptorError(e.what());
  }
  if (!chi.primitive) throw DescriptorError("character must be primitive");
  int delta = chi.parity;
  if (delta == 0 && desc.char_q % 4 == 0) {
    throw DescriptorError("even-character families need a modulus not divisible by 4");
  }

  HeckePair pr;
  pr.family = desc;
  pr.family.parity = delta;
  pr.build_bits = prec.working_bits;
  Precision bprec = prec.bits(2 * prec.working_bits + 32);
  PrecisionScope scope(bprec.working_bits);

  long k = desc.k;
  long q = desc.char_q;
  pr.r = mpq_class(k * (1 + 2 * delta), 2);
  pr.scale_rat = mpq_class(1, twisted ? 2 * q : q);
  pr.scale_sqrt = 1;
  pr.mu_scale_rat = pr.scale_rat;
  pr.mu_scale_sqrt = 1;
  pr.delta = delta;
  pr.chi = chi;
  pr.sigma_a = delta == 0 ? sigma_for_theta_power(mpq_class(k)) : mpq_class(k);
  pr.rho_star = Complex(0L);
  pr.phi0 = Complex(0L);

  StreamPtr rk = coeffs::r_k_chi_stream(chi, k, bprec);
  if (!twisted) {
    pr.a_coeffs = rk;
    pr.b_coeffs = coeffs::r_k_chi_stream(chi.conjugate(), k, bprec);
    auto gauss = coeffs::gauss_sum(chi, bprec);
    pr.omega = i_power(-delta * k) * pow(gauss.value, k) *
               exp(Real(-k) * ldexp(log(Real(q)), -1));
    pr.rho = Complex(0L);
    pr.sigma_b = pr.sigma_a;
    pr.self_dual_real = chi.is_real();
    pr.dual_is_conjugate = true;
  } else {
    long pm = ((desc.p % (2 * q)) + 2 * q) % (2 * q);
    pr.a_coeffs = twist_stream(rk, -pm, 2 * q);
    pr.b_coeffs = coeffs::char_exp_dual_stream(chi, k, pm, q, bprec);
    pr.omega = i_power(-delta * k);
    if (delta == 0) {
      Complex s_sum(0L);
      for (long t = 1; t < 2 * q; ++t) {
        Complex cv = chi.value(t);
        if (cv.is_zero()) continue;
        s_sum += cv * root_of_unity(-pm * t * t, 2 * q);
      }
      auto gk2 = sf::gamma(Complex(ldexp(Real(k), -1)), bprec);
      pr.rho = pow(s_sum, k) / (gk2.value * exp(ldexp(Real(k), -1) * log(Real(2 * q))));
    } else {
      pr.rho = Complex(0L);
    }
    pr.sigma_b = pr.sigma_a + 1;
    pr.self_dual_real = false;
  }
  pr.a_mult = Complex(1L);
  pr.b_mult = Complex(1L);
  return pr;
}

HeckePair build_cusp(const FamilyDescriptor& desc, StreamPtr stream, const Precision& prec,
                     bool twisted) {
  if (desc.k < 2 || desc.k % 2 != 0) {
    throw DescriptorError("cusp form weight must be a positive even integer");
  }
  long q = twisted ? desc.q : 1;
  if (q < 1) throw DescriptorError("twist denominator must be positive");

  HeckePair pr;
  pr.family = desc;
  pr.build_bits = prec.working_bits;
  Precision bprec = prec.bits(2 * prec.working_bits + 32);
  PrecisionScope scope(bprec.working_bits);

  pr.r = desc.k;
  pr.scale_rat = mpq_class(2, q);
  pr.scale_sqrt = 1;
  pr.mu_scale_rat = pr.scale_rat;
  pr.mu_scale_sqrt = 1;
  pr.omega = Complex((desc.k / 2) % 2 == 0 ? 1L : -1L);
  pr.rho = Complex(0L);
  pr.rho_star = Complex(0L);
  pr.phi0 = Complex(0L);
  pr.sigma_a = mpq_class(desc.k + 1, 2);
  pr.sigma_b = pr.sigma_a;

  if (!twisted) {
    pr.a_coeffs = stream;
    pr.b_coeffs = stream;
    pr.self_dual_real = true;
    pr.dual_is_conjugate = true;
  } else {
    long pm = ((desc.p % q) + q) % q;
    if (q > 1 && std::gcd(pm, q) != 1) {
      throw DescriptorError("twist numerator must be invertible modulo q");
    }
    long pbar = mod_inverse(pm, q);
    pr.a_coeffs = twist_stream(stream, pm, q);
    pr.b_coeffs = twist_stream(stream, -pbar, q);
    pr.self_dual_real = q == 1;
    pr.dual_is_conjugate = (pm * pm) % q == 1 % q;
  }
  pr.a_mult = Complex(1L);
  pr.b_mult = Complex(1L);
  return pr;
}

StreamPtr builtin_cusp_stream(const FamilyDescriptor& desc) {
  if (desc.name != "tau") throw DescriptorError("unknown cusp form: " + desc.name);
  if (desc.k != 12) throw DescriptorError("built-in form tau has weight 12");
  return coeffs::tau_stream();
}

}  // namespace

HeckePair build_pair(const FamilyDescriptor& desc, const Precision& prec) {
  switch (desc.kind) {
    case FamilyKind::ZetaAlpha: return build_theta_power(desc, prec, false);
    case FamilyKind::ZetaAlphaStar: return build_theta_power(desc, prec, true);
    case FamilyKind::Epstein: return build_epstein(desc, prec, false);
    case FamilyKind::EpsteinExp: return build_epstein(desc, prec, true);
    case FamilyKind::CharK: return build_char_k(desc, prec, false);
    case FamilyKind::CharKExp: return build_char_k(desc, prec, true);
    case FamilyKind::Cusp: return build_cusp(desc, builtin_cusp_stream(desc), prec, false);
    case FamilyKind::CuspTwist: return build_cusp(desc, builtin_cusp_stream(desc), prec, true);
    case FamilyKind::Custom: break;
  }
  throw DescriptorError("family is not constructible from a descriptor");
}

HeckePair build_pair(const std::string& descriptor, const Precision& prec) {
  return build_pair(FamilyDescriptor::parse(descriptor), prec);
}

HeckePair build_pair(const FamilyDescriptor& desc, StreamPtr cusp_coeffs, const Precision& prec) {
  if (desc.kind != FamilyKind::Cusp && desc.kind != FamilyKind::CuspTwist) {
    throw DescriptorError("explicit coefficient streams fit only the cusp families");
  }
  return build_cusp(desc, std::move(cusp_coeffs), prec, desc.kind == FamilyKind::CuspTwist);
}

HeckePair bochner_to_hecke(const mpq_class& lambda2_rat, StreamPtr a_coeffs,
                           const Complex& a_mult, const mpq_class& mu2_rat, StreamPtr b_coeffs,
                           const Complex& b_mult, int delta, const Complex& rho,
                           const Complex& rho_star, const Precision& prec) {
  if (delta != 0 && delta != 1) throw DomainError("delta must be 0 or 1");
  if (lambda2_rat <= 0 || mu2_rat <= 0) throw DomainError("scales must be positive");

  HeckePair pr;
  pr.family.kind = FamilyKind::Custom;
  pr.build_bits = prec.working_bits;
  PrecisionScope scope(2 * prec.working_bits + 32);

  pr.delta = delta;
  pr.r = mpq_class(1 + 2 * delta, 2);
  pr.scale_rat = lambda2_rat;
  pr.scale_sqrt = 1;
  pr.mu_scale_rat = mu2_rat;
  pr.mu_scale_sqrt = 1;
  pr.sigma_a = 1 + delta;
  pr.sigma_b = pr.sigma_a;

  pr.a_coeffs = square_support_stream(std::move(a_coeffs), delta);
  pr.b_coeffs = square_support_stream(std::move(b_coeffs), delta);
  Real pi = const_pi();
  if (delta == 1) {
    pr.a_mult = a_mult * sqrt(pi * sf::real_from_mpq(lambda2_rat));
    pr.b_mult = b_mult * sqrt(pi * sf::real_from_mpq(mu2_rat));
    pr.rho = Complex(0L);
    pr.rho_star = Complex(0L);
    pr.phi0 = Complex(0L);
  } else {
    pr.a_mult = a_mult;
    pr.b_mult = b_mult;
    pr.rho = half(rho);
    pr.rho_star = half(rho_star);
    pr.phi0 = -(pr.rho_star * sqrt(pi));
  }
  pr.omega = Complex(1L);
  pr.self_dual_real = false;
  return pr;
}

HeckePair bochner_to_hecke(const mpq_class& lambda2_rat, StreamPtr a_coeffs,
                           const mpq_class& mu2_rat, StreamPtr b_coeffs, int delta,
                           const Complex& rho, const Precision& prec) {
  return bochner_to_hecke(lambda2_rat, std::move(a_coeffs), Complex(1L), mu2_rat,
                          std::move(b_coeffs), Complex(1L), delta, rho, rho, prec);
}

// ---------------------------------------------------------------------------
// truncation

long truncation_index(const Real& growth_c, const Real& growth_kappa, const Real& scale,
                      const mpq_class& offset, long first, const Real& sigma,
                      const Real& split_x, const Real& eps, const Precision& prec) {
  Precision solver = prec.bits(64);
  PrecisionScope scope(96);
  Real off = sf::real_from_mpq(offset);
  auto bound = [&](long n) -> Real {
    Real idx = Real(n) + off;
    Real lam = scale * idx;
    auto g = sf::upper_incomplete_gamma(Complex(sigma), lam * split_x, solver);
    Real mag = abs(g.value);
    Real np = max(idx, Real(1L));
    return growth_c * exp(growth_kappa * log(np)) * mag * exp(-(sigma * log(lam)));
  };

  const long cap = 2000000;
  long n = first;
  Real bn = bound(n);
  for (int iter = 0; iter < 240; ++iter) {
    long step = std::max<long>(1, n / 8);
    long n2 = n + step;
    if (n2 > cap) break;
    Real b2 = bound(n2);
    if (b2.is_finite() && bn.is_finite() && !bn.is_zero() && b2 < eps && b2 <= bn) {
      Real rh = exp(log(max(b2, Real::pow2(-60000)) / bn) / Real(step));
      if (rh < Real::from_double(0.9)) {
        Real tail = b2 * rh / (Real(1L) - rh);
        if (tail < eps) return n2;
      }
    }
    n = n2;
    bn = b2;
  }
  throw TruncationError("series tail bound does not reach the requested accuracy");
}

// ---------------------------------------------------------------------------
// evaluation

namespace {

struct SeriesSide {
  StreamPtr stream;
  Complex mult;
  Real scale;
  mpq_class offset;
  long first = 1;
};

// sum_{n} coef(n) Gamma(expo, lam_n x) lam_n^{-expo}
Complex sum_incomplete_side(const SeriesSide& side, const Complex& expo, const Real& x,
                            long last, const Precision& prec, Real& err_acc) {
  side.stream->ensure(last);
  Real off = sf::real_from_mpq(side.offset);
  Real ln_scale = log(side.scale);
  Real round_unit = Real::pow2(16 - current_bits());
  Complex acc(0L);
  for (long n = side.first; n <= last; ++n) {
    Complex coef = side.mult * side.stream->at(n);
    if (coef.is_zero()) continue;  // sparse streams skip the expensive factors
    Real idx = Real(n) + off;
    Real lam = side.scale * idx;
    auto g = sf::upper_incomplete_gamma(expo, lam * x, prec);
    Complex lpow = exp(-(expo * (ln_scale + log(idx))));
    Complex term = coef * g.value * lpow;
    acc += term;
    err_acc += abs(coef) * g.err * abs(lpow) + abs(term) * round_unit;
  }
  return acc;
}

ValueWithError bracket_eval(const HeckePair& pair, const Complex& s, const Precision& prec,
                            const Real& split_x, bool dual) {
  pair.require_build_precision(prec);
  if (!(Real(0L) < split_x)) throw DomainError("split point must be positive");

  long wb = prec.working_bits;
  PrecisionScope scope(wb + 48 + wb / 8);

  Real rv = pair.r_value();
  Complex w = s;
  Complex w_ref = Complex(rv) - s;

  auto gr = sf::gamma(Complex(rv), prec);
  Complex c_res = dual ? pair.rho_star : pair.rho;
  Complex c_zero = dual ? -(pair.rho * gr.value) : pair.phi0;

  Real pole_tol = prec.target_eps() * Real(10L);
  if (!c_res.is_zero() && abs(w - Complex(rv)) < pole_tol) {
    throw PoleError("evaluation point collides with the pole at s = r");
  }
  if (!c_zero.is_zero() && abs(w) < pole_tol) {
    throw PoleError("evaluation point collides with the pole at s = 0");
  }

  SeriesSide primary, reflected;
  if (!dual) {
    primary = {pair.a_coeffs, pair.a_mult, pair.scale(), pair.lambda_seq.offset, pair.a_first()};
    reflected = {pair.b_coeffs, pair.b_mult * pair.omega, pair.mu_scale(), pair.mu_seq.offset,
                 pair.b_first()};
  } else {
    primary = {pair.b_coeffs, pair.b_mult * pair.omega, pair.mu_scale(), pair.mu_seq.offset,
               pair.b_first()};
    reflected = {pair.a_coeffs, pair.a_mult, pair.scale(), pair.lambda_seq.offset,
                 pair.a_first()};
  }

  Real eps_tail = ldexp(prec.target_eps(), -2);
  Real x_ref = Real(1L) / split_x;
  long n_primary =
      truncation_index(primary.stream->growth_C() * abs(primary.mult),
                       primary.stream->growth_kappa(), primary.scale, primary.offset,
                       primary.first, w.re, split_x, eps_tail, prec);
  long n_reflected =
      truncation_index(reflected.stream->growth_C() * abs(reflected.mult),
                       reflected.stream->growth_kappa(), reflected.scale, reflected.offset,
                       reflected.first, w_ref.re, x_ref, eps_tail, prec);

  Real err(0L);
  Complex total = sum_incomplete_side(primary, w, split_x, n_primary, prec, err);
  total += sum_incomplete_side(reflected, w_ref, x_ref, n_reflected, prec, err);
  err += ldexp(eps_tail, 1);

  Real ln_x = log(split_x);
  if (!c_zero.is_zero()) {
    Complex term = c_zero * exp(w * Complex(ln_x)) / w;
    total += term;
    err += abs(term) * Real::pow2(16 - wb - 32);
  }
  if (!c_res.is_zero()) {
    Complex term = c_res * gr.value * exp((w - Complex(rv)) * Complex(ln_x)) / (w - Complex(rv));
    total += term;
    err += abs(term) * Real::pow2(16 - wb - 32) + abs(c_res) * gr.err;
  }
  return {total, err};
}

}  // namespace

ValueWithError eval_eta(const HeckePair& pair, const Complex& s, const Precision& prec,
                        const Real& split_x) {
  return bracket_eval(pair, s, prec, split_x, false);
}

ValueWithError eval_eta(const HeckePair& pair, const Complex& s, const Precision& prec) {
  return bracket_eval(pair, s, prec, Real(1L), false);
}

ValueWithError eval_eta_dual(const HeckePair& pair, const Complex& s, const Precision& prec,
                             const Real& split_x) {
  return bracket_eval(pair, s, prec, split_x, true);
}

ValueWithError eval_eta_line(const HeckePair& pair, const Real& t, const Precision& prec) {
  pair.require_build_precision(prec);
  long wb = prec.working_bits;
  PrecisionScope scope(wb + 48 + wb / 8);
  Real rv = pair.r_value();
  Complex s(ldexp(rv, -1), t);
  if (!pair.dual_is_conjugate) return bracket_eval(pair, s, prec, Real(1L), false);

  auto gr = sf::gamma(Complex(rv), prec);
  SeriesSide primary{pair.a_coeffs, pair.a_mult, pair.scale(), pair.lambda_seq.offset,
                     pair.a_first()};
  Real eps_tail = ldexp(prec.target_eps(), -2);
  long last = truncation_index(primary.stream->growth_C() * abs(primary.mult),
                               primary.stream->growth_kappa(), primary.scale, primary.offset,
                               primary.first, s.re, Real(1L), eps_tail, prec);
  Real err(0L);
  Complex aside = sum_incomplete_side(primary, s, Real(1L), last, prec, err);
  Complex total = aside + pair.omega * conj(aside);
  err = ldexp(err, 1) + ldexp(eps_tail, 1);
  if (!pair.phi0.is_zero()) {
    Complex term = pair.phi0 / s;
    total += term;
    err += abs(term) * Real::pow2(16 - wb - 32);
  }
  if (!pair.rho.is_zero()) {
    Complex term = pair.rho * gr.value / (s - Complex(rv));
    total += term;
    err += abs(term) * Real::pow2(16 - wb - 32) + abs(pair.rho) * gr.err;
  }
  return {total, err};
}

ValueWithError eval_phi(const HeckePair& pair, const Complex& s, const Precision& prec,
                        const Real& split_x) {
  ValueWithError br = eval_eta(pair, s, prec, split_x);
  PrecisionScope scope(prec.working_bits + 32);
  if (s.re >= Real::from_double(0.5)) {
    auto g = sf::gamma(s, prec);
    Complex value = br.value / g.value;
    Real gm = abs(g.value);
    return {value, br.err / gm + abs(value) * g.err / gm};
  }
  Complex rg = sf::reciprocal_gamma(s, prec);
  Complex value = br.value * rg;
  Real err = br.err * abs(rg) + abs(value) * Real::pow2(8 - prec.working_bits);
  return {value, err};
}

ValueWithError eval_phi(const HeckePair& pair, const Complex& s, const Precision& prec) {
  return eval_phi(pair, s, prec, Real(1L));
}

Real functional_equation_residual(const HeckePair& pair, const Complex& s,
                                  const Precision& prec) {
  PrecisionScope scope(prec.working_bits + 16);
  Real x_lhs = Real(5L) / Real(4L);
  Real x_rhs = Real(17L) / Real(20L);
  ValueWithError lhs = eval_eta(pair, s, prec, x_lhs);
  ValueWithError rhs = eval_eta_dual(pair, Complex(pair.r_value()) - s, prec, x_rhs);
  Real num = abs(lhs.value - rhs.value);
  Real den = abs(lhs.value);
  if (den.is_zero()) den = abs(rhs.value);
  if (den.is_zero()) return Real(0L);
  return num / den;
}

}  // namespace hecklab::hecke
