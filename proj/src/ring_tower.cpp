#include "hasse/ring_tower.hpp"

#include <algorithm>
#include <cassert>

#include "hasse/error.hpp"
#include "hasse/random.hpp"

namespace hasse {

namespace {

int mod(long a, int m) {
  long r = a % m;
  return static_cast<int>(r < 0 ? r + m : r);
}

// Dense polynomials over F_p, least significant coefficient first.
using Poly = std::vector<int>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int inv_mod_p(int a, int p) {
  for (int x = 1; x < p; ++x)
    if ((a * x) % p == 1) return x;
  throw Error(ErrorKind::Precondition, "zero has no inverse mod p");
}

Poly poly_rem(Poly a, const Poly& m, int p) {
  trim(a);
  Poly b = m;
  trim(b);
  const int lead_inv = inv_mod_p(b.back(), p);
  while (a.size() >= b.size()) {
    const int c = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - b.size();
    for (std::size_t t = 0; t < b.size(); ++t) a[shift + t] = mod(a[shift + t] - c * b[t], p);
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, int p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (std::size_t s = 0; s < a.size(); ++s)
    for (std::size_t t = 0; t < b.size(); ++t) c[s + t] = (c[s + t] + a[s] * b[t]) % p;
  return poly_rem(std::move(c), m, p);
}

Poly poly_gcd(Poly a, Poly b, int p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// x^(p^j) mod m by repeated p-th powering.
Poly frobenius_power_of_x(const Poly& m, int p, int j) {
  Poly r = poly_rem(Poly{0, 1}, m, p);
  for (int step = 0; step < j; ++step) {
    Poly acc{1};
    for (int t = 0; t < p; ++t) acc = poly_mulmod(acc, r, m, p);
    r = acc;
  }
  return r;
}

}  // namespace

bool is_irreducible_mod_p(const std::vector<int>& poly, int p) {
  Poly g = poly;
  for (int& c : g) c = mod(c, p);
  trim(g);
  const int deg = static_cast<int>(g.size()) - 1;
  if (deg < 1) return false;
  if (deg == 1) return true;
  for (int j = 1; j <= deg / 2; ++j) {
    Poly h = frobenius_power_of_x(g, p, j);
    h.resize(std::max<std::size_t>(h.size(), 2), 0);
    h[1] = mod(h[1] - 1, p);
    Poly d = poly_gcd(g, h, p);
    if (d.size() > 1) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// FiniteField

FiniteField::FiniteField(int p, std::vector<int> modulus) : p_(p), modulus_(std::move(modulus)) {
  f_ = static_cast<int>(modulus_.size()) - 1;
  if (f_ < 1 || modulus_.back() != 1)
    throw Error(ErrorKind::InvalidSpec, "field modulus must be monic of degree >= 1");
  q_ = 1;
  for (int t = 0; t < f_; ++t) q_ *= static_cast<Elem>(p_);
  if (q_ > (1u << 16)) throw Error(ErrorKind::InvalidSpec, "residue field larger than 2^16");

  auto to_poly = [&](Elem a) {
    Poly r(f_, 0);
    for (int t = 0; t < f_; ++t) {
      r[t] = static_cast<int>(a % p_);
      a /= p_;
    }
    return r;
  };
  auto from_poly = [&](Poly a) {
    a.resize(f_, 0);
    Elem r = 0;
    for (int t = f_ - 1; t >= 0; --t) r = r * p_ + static_cast<Elem>(a[t]);
    return r;
  };

  // Primitive element search: the smallest code whose powers have period q-1.
  log_.assign(q_, 0);
  exp_.assign(2 * (q_ - 1) + 1, 0);
  bool found = false;
  for (Elem g = 1; g < q_ && !found; ++g) {
    Poly gp = to_poly(g);
    Poly acc{1};
    std::vector<Elem> powers;
    powers.reserve(q_ - 1);
    bool ok = true;
    for (Elem n = 0; n < q_ - 1; ++n) {
      const Elem code = from_poly(acc);
      if (n > 0 && code == 1) {
        ok = false;
        break;
      }
      powers.push_back(code);
      acc = poly_mulmod(acc, gp, modulus_, p_);
    }
    if (!ok || from_poly(acc) != 1) continue;
    found = true;
    for (Elem n = 0; n < q_ - 1; ++n) {
      exp_[n] = powers[n];
      exp_[n + q_ - 1] = powers[n];
      log_[powers[n]] = n;
    }
  }
  if (!found) throw Error(ErrorKind::InvalidSpec, "field modulus is not irreducible");

  frob_.assign(f_, std::vector<Elem>(q_, 0));
  for (int a = 0; a < f_; ++a) {
    std::uint64_t e = 1;
    for (int t = 0; t < a; ++t) e *= static_cast<std::uint64_t>(p_);
    for (Elem x = 0; x < q_; ++x) frob_[a][x] = pow(x, e);
  }
}

FiniteField::Elem FiniteField::add(Elem a, Elem b) const noexcept {
  if (f_ == 1) return (a + b) % q_;
  Elem r = 0, scale = 1;
  for (int t = 0; t < f_; ++t) {
    r += ((a % p_ + b % p_) % p_) * scale;
    a /= p_;
    b /= p_;
    scale *= p_;
  }
  return r;
}

FiniteField::Elem FiniteField::neg(Elem a) const noexcept {
  if (f_ == 1) return (q_ - a) % q_;
  Elem r = 0, scale = 1;
  for (int t = 0; t < f_; ++t) {
    r += ((p_ - a % p_) % p_) * scale;
    a /= p_;
    scale *= p_;
  }
  return r;
}

FiniteField::Elem FiniteField::sub(Elem a, Elem b) const noexcept { return add(a, neg(b)); }

FiniteField::Elem FiniteField::inv(Elem a) const {
  if (a == 0) throw Error(ErrorKind::Precondition, "inverse of zero in residue field");
  return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

FiniteField::Elem FiniteField::pow(Elem a, std::uint64_t n) const noexcept {
  if (n == 0) return 1;
  if (a == 0) return 0;
  return exp_[static_cast<std::uint64_t>(log_[a]) * (n % (q_ - 1)) % (q_ - 1)];
}

FiniteField::Elem FiniteField::frob(Elem a, long power) const noexcept {
  return frob_[mod(power, f_)][a];
}

FiniteField::Elem FiniteField::from_coeffs(std::span<const int> coeffs) const {
  Elem r = 0;
  for (int t = f_ - 1; t >= 0; --t) {
    const int c = t < static_cast<int>(coeffs.size()) ? mod(coeffs[t], p_) : 0;
    r = r * p_ + static_cast<Elem>(c);
  }
  return r;
}

std::vector<int> FiniteField::coeffs(Elem a) const {
  std::vector<int> r(f_, 0);
  for (int t = 0; t < f_; ++t) {
    r[t] = static_cast<int>(a % p_);
    a /= p_;
  }
  return r;
}

FiniteField::Elem FiniteField::from_int(long n) const noexcept {
  return static_cast<Elem>(mod(n, p_));
}

// ---------------------------------------------------------------------------
// RingSpec

void RingSpec::check() const {
  if (p != 2 && p != 3 && p != 5 && p != 7)
    throw Error(ErrorKind::InvalidSpec, "p must be one of 2, 3, 5, 7");
  if (f < 1 || e < 1) throw Error(ErrorKind::InvalidSpec, "f and e must be >= 1");
  if (static_cast<int>(field_modulus.size()) != f + 1 || field_modulus.back() != 1)
    throw Error(ErrorKind::InvalidSpec, "field_modulus must be monic of degree f");
  for (int c : field_modulus)
    if (c < 0 || c >= p) throw Error(ErrorKind::InvalidSpec, "field_modulus coefficient out of range");
  if (!is_irreducible_mod_p(field_modulus, p))
    throw Error(ErrorKind::InvalidSpec, "field_modulus is reducible over F_p");
  if (static_cast<int>(eisenstein.size()) != e + 1 || eisenstein.back() != 1)
    throw Error(ErrorKind::InvalidSpec, "eisenstein polynomial must be monic of degree e");
  const int p2 = p * p;
  for (int r = 0; r < e; ++r) {
    const int c = eisenstein[r];
    if (c < 0 || c >= p2) throw Error(ErrorKind::InvalidSpec, "eisenstein coefficient out of range");
    if (c % p != 0) throw Error(ErrorKind::InvalidSpec, "eisenstein polynomial is not X^e mod p");
  }
  if (eisenstein[0] == 0)
    throw Error(ErrorKind::InvalidSpec, "eisenstein constant term must have valuation exactly 1");
}

RingSpec RingSpec::standard(int p, int f, int e) {
  RingSpec s;
  s.p = p;
  s.f = f;
  s.e = e;
  long count = 1;
  for (int t = 0; t < f; ++t) count *= p;
  for (long n = 0; n < count; ++n) {
    std::vector<int> g(f + 1, 0);
    long m = n;
    for (int t = 0; t < f; ++t) {
      g[t] = static_cast<int>(m % p);
      m /= p;
    }
    g[f] = 1;
    if (is_irreducible_mod_p(g, p)) {
      s.field_modulus = g;
      break;
    }
  }
  s.eisenstein.assign(e + 1, 0);
  s.eisenstein[0] = p * p - p;
  s.eisenstein[e] = 1;
  s.check();
  return s;
}

const char* to_string(RingTag tag) {
  switch (tag) {
    case RingTag::k: return "k";
    case RingTag::R: return "R";
    case RingTag::W2: return "W2";
    case RingTag::What: return "What";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// ChainRing

ChainRing::ChainRing(RingTag tag, const RingSpec& spec, std::shared_ptr<const FiniteField> field)
    : tag_(tag), p_(spec.p), f_(spec.f), field_(std::move(field)) {
  const bool lifted = tag == RingTag::W2 || tag == RingTag::What;
  const bool ramified = tag == RingTag::R || tag == RingTag::What;
  q_ = lifted ? p_ * p_ : p_;
  e_ = ramified ? spec.e : 1;
  field_mod_.resize(f_ + 1);
  for (int t = 0; t <= f_; ++t) field_mod_[t] = mod(spec.field_modulus[t], q_);
  eis_low_.assign(e_, 0);
  if (ramified)
    for (int r = 0; r < e_; ++r) eis_low_[r] = mod(spec.eisenstein[r], q_);

  // Frobenius on the x-ring: x^p, Hensel-corrected to a root of g^ mod p^2.
  std::vector<int> x = xmod({0, 1});
  std::vector<int> theta = xmod({1});
  for (int t = 0; t < p_; ++t) theta = xmul(theta, x);
  if (lifted) {
    std::vector<int> deriv(f_, 0);
    for (int t = 1; t <= f_; ++t) deriv[t - 1] = mod(static_cast<long>(t) * field_mod_[t], q_);
    const std::vector<int> g_at = xpow_eval(field_mod_, theta);
    const std::vector<int> d_at = xpow_eval(deriv, theta);
    const std::vector<int> corr = xmul(g_at, xinverse(d_at));
    for (int t = 0; t < f_; ++t) theta[t] = mod(theta[t] - corr[t], q_);
  }
  theta_.assign(f_, {});
  theta_[0] = x;
  for (int a = 1; a < f_; ++a) theta_[a] = xpow_eval(theta, theta_[a - 1]);

  if (tag == RingTag::What) {
    // p * S = -(E(pi) - pi^e) with S = sum alpha_r pi^r; then u = -S^{-1}.
    std::vector<int> s(width(), 0);
    for (int r = 0; r < e_; ++r) {
      int alpha = (eis_low_[r] / p_) % p_;
      if (alpha > p_ / 2 && p_ > 2) alpha -= p_;
      s[static_cast<std::size_t>(r) * f_] = mod(alpha, q_);
    }
    RingElement u = neg(inverse(make(s)));
    u_ = u.coeffs;
  }
}

int ChainRing::capacity() const noexcept {
  switch (tag_) {
    case RingTag::k: return 1;
    case RingTag::R: return e_;
    case RingTag::W2: return 2;
    case RingTag::What: return 2 * e_;
  }
  return 1;
}

std::vector<int> ChainRing::xmod(std::vector<int> a) const {
  for (int& c : a) c = mod(c, q_);
  // field_mod_ is monic, so plain long division works over Z/q.
  for (int deg = static_cast<int>(a.size()) - 1; deg >= f_; --deg) {
    const int c = a[deg];
    if (c == 0) continue;
    for (int t = 0; t <= f_; ++t) a[deg - f_ + t] = mod(a[deg - f_ + t] - static_cast<long>(c) * field_mod_[t], q_);
  }
  a.resize(f_, 0);
  return a;
}

std::vector<int> ChainRing::xmul(std::span<const int> a, std::span<const int> b) const {
  std::vector<int> c(a.size() + b.size(), 0);
  for (std::size_t s = 0; s < a.size(); ++s) {
    if (a[s] == 0) continue;
    for (std::size_t t = 0; t < b.size(); ++t) c[s + t] = (c[s + t] + a[s] * b[t]) % q_;
  }
  return xmod(std::move(c));
}

std::vector<int> ChainRing::xpow_eval(std::span<const int> poly, std::span<const int> at) const {
  std::vector<int> acc(f_, 0);
  for (int t = static_cast<int>(poly.size()) - 1; t >= 0; --t) {
    acc = xmul(acc, at);
    acc[0] = mod(acc[0] + poly[t], q_);
  }
  return acc;
}

std::vector<int> ChainRing::xinverse(std::span<const int> a) const {
  std::vector<int> residue(a.begin(), a.end());
  for (int& c : residue) c %= p_;
  const auto inv = field_->coeffs(field_->inv(field_->from_coeffs(residue)));
  std::vector<int> y(inv.begin(), inv.end());
  for (int it = 0; it < 4; ++it) {
    std::vector<int> ay = xmul(a, y);
    for (int& c : ay) c = mod(-c, q_);
    ay[0] = mod(ay[0] + 2, q_);
    y = xmul(y, ay);
  }
  return y;
}

void ChainRing::check_tag(const RingElement& a) const {
  if (a.tag != tag_ || a.coeffs.size() != width())
    throw Error(ErrorKind::Precondition, std::string("element does not belong to ring ") + to_string(tag_));
}

RingElement ChainRing::zero() const { return RingElement{tag_, std::vector<int>(width(), 0)}; }

RingElement ChainRing::one() const { return from_int(1); }

RingElement ChainRing::from_int(long n) const {
  RingElement r = zero();
  r.coeffs[0] = mod(n, q_);
  return r;
}

RingElement ChainRing::pi() const { return pi_power(1); }

RingElement ChainRing::pi_power(int n) const {
  RingElement r = one();
  if (e_ > 1) {
    RingElement base = zero();
    base.coeffs[static_cast<std::size_t>(f_)] = 1;
    for (int t = 0; t < n; ++t) r = mul(r, base);
  } else if (n > 0) {
    // pi^e = -eis_low_[0] in an unramified slice; zero for k and W2.
    RingElement base = from_int(-static_cast<long>(eis_low_[0]));
    for (int t = 0; t < n; ++t) r = mul(r, base);
  }
  return r;
}

RingElement ChainRing::make(std::vector<int> coeffs) const {
  if (coeffs.size() != width()) throw Error(ErrorKind::Precondition, "coefficient vector has wrong length");
  for (int& c : coeffs) c = mod(c, q_);
  return RingElement{tag_, std::move(coeffs)};
}

RingElement ChainRing::add(const RingElement& a, const RingElement& b) const {
  RingElement r = a;
  for (std::size_t t = 0; t < r.coeffs.size(); ++t) r.coeffs[t] = (r.coeffs[t] + b.coeffs[t]) % q_;
  return r;
}

RingElement ChainRing::sub(const RingElement& a, const RingElement& b) const {
  RingElement r = a;
  for (std::size_t t = 0; t < r.coeffs.size(); ++t) r.coeffs[t] = mod(r.coeffs[t] - b.coeffs[t], q_);
  return r;
}

RingElement ChainRing::neg(const RingElement& a) const {
  RingElement r = a;
  for (int& c : r.coeffs) c = mod(-c, q_);
  return r;
}

RingElement ChainRing::scale(const RingElement& a, long n) const {
  RingElement r = a;
  for (int& c : r.coeffs) c = mod(static_cast<long>(c) * mod(n, q_), q_);
  return r;
}

RingElement ChainRing::mul(const RingElement& a, const RingElement& b) const {
  const std::size_t f = static_cast<std::size_t>(f_);
  std::vector<std::vector<int>> slot(2 * e_ - 1, std::vector<int>(f, 0));
  for (int r = 0; r < e_; ++r) {
    std::span<const int> ar(a.coeffs.data() + r * f, f);
    bool nz = std::any_of(ar.begin(), ar.end(), [](int c) { return c != 0; });
    if (!nz) continue;
    for (int s = 0; s < e_; ++s) {
      std::span<const int> bs(b.coeffs.data() + s * f, f);
      std::vector<int> prod = xmul(ar, bs);
      for (std::size_t t = 0; t < f; ++t) slot[r + s][t] = (slot[r + s][t] + prod[t]) % q_;
    }
  }
  for (int r = 2 * e_ - 2; r >= e_; --r) {
    for (int s = 0; s < e_; ++s) {
      if (eis_low_[s] == 0) continue;
      for (std::size_t t = 0; t < f; ++t)
        slot[r - e_ + s][t] = mod(slot[r - e_ + s][t] - static_cast<long>(eis_low_[s]) * slot[r][t], q_);
    }
  }
  RingElement out{tag_, std::vector<int>(width(), 0)};
  for (int r = 0; r < e_; ++r)
    for (std::size_t t = 0; t < f; ++t) out.coeffs[r * f + t] = slot[r][t];
  return out;
}

bool ChainRing::is_zero(const RingElement& a) const {
  return std::all_of(a.coeffs.begin(), a.coeffs.end(), [](int c) { return c == 0; });
}

std::uint32_t ChainRing::residue(const RingElement& a) const {
  std::vector<int> r(a.coeffs.begin(), a.coeffs.begin() + f_);
  return field_->from_coeffs(r);
}

bool ChainRing::is_unit(const RingElement& a) const { return residue(a) != 0; }

RingElement ChainRing::inverse(const RingElement& a) const {
  check_tag(a);
  const std::uint32_t res = residue(a);
  if (res == 0) throw Error(ErrorKind::Precondition, "inverse of a non-unit");
  RingElement y = zero();
  const auto c = field_->coeffs(field_->inv(res));
  for (int t = 0; t < f_; ++t) y.coeffs[t] = c[t];
  const RingElement two = from_int(2);
  // Newton iteration doubles the pi-adic precision each step.
  for (int it = 0; it < 8; ++it) {
    RingElement ay = mul(a, y);
    if (ay == one()) return y;
    y = mul(y, sub(two, ay));
  }
  if (mul(a, y) != one()) throw Error(ErrorKind::InvariantViolation, "Newton inversion did not converge");
  return y;
}

RingElement ChainRing::frobenius(const RingElement& a, long power) const {
  check_tag(a);
  const int s = mod(power, f_);
  if (s == 0) return a;
  RingElement r = zero();
  const std::size_t f = static_cast<std::size_t>(f_);
  for (int slot = 0; slot < e_; ++slot) {
    std::span<const int> c(a.coeffs.data() + slot * f, f);
    std::vector<int> v = xpow_eval(c, theta_[s]);
    std::copy(v.begin(), v.end(), r.coeffs.begin() + slot * f);
  }
  return r;
}

RingElement ChainRing::divide_by_pi(const RingElement& a) const {
  const std::size_t f = static_cast<std::size_t>(f_);
  RingElement r = zero();
  for (int slot = 1; slot < e_; ++slot)
    for (std::size_t t = 0; t < f; ++t) r.coeffs[(slot - 1) * f + t] = a.coeffs[slot * f + t];
  // slot 0 = p * b = pi^e * u * b, so it contributes b * u * pi^(e-1).
  RingElement b = zero();
  for (std::size_t t = 0; t < f; ++t) {
    assert(a.coeffs[t] % p_ == 0);
    b.coeffs[t] = a.coeffs[t] / p_;
  }
  RingElement extra = mul(mul(b, RingElement{tag_, u_}), pi_power(e_ - 1));
  return add(r, extra);
}

Valuation ChainRing::valuation_split(const RingElement& a) const {
  check_tag(a);
  const std::size_t f = static_cast<std::size_t>(f_);
  if (tag_ == RingTag::R) {
    for (int v = 0; v < e_; ++v) {
      bool nz = false;
      for (std::size_t t = 0; t < f; ++t) nz = nz || a.coeffs[v * f + t] != 0;
      if (!nz) continue;
      RingElement unit = zero();
      for (int s = v; s < e_; ++s)
        for (std::size_t t = 0; t < f; ++t) unit.coeffs[(s - v) * f + t] = a.coeffs[s * f + t];
      return Valuation{v, unit};
    }
    return Valuation{e_, one()};
  }
  if (tag_ != RingTag::What) throw Error(ErrorKind::Precondition, "valuation_split needs R or W^");

  // pi-adic digit expansion with digits in {sum c_t x^t : 0 <= c_t < p}.
  std::vector<RingElement> digits;
  RingElement y = a;
  for (int t = 0; t < 2 * e_; ++t) {
    RingElement d = zero();
    for (std::size_t s = 0; s < f; ++s) d.coeffs[s] = y.coeffs[s] % p_;
    digits.push_back(d);
    y = divide_by_pi(sub(y, d));
  }
  int v = 0;
  while (v < 2 * e_ && is_zero(digits[v])) ++v;
  if (v == 2 * e_) return Valuation{v, one()};
  RingElement unit = zero();
  const RingElement p1 = pi();
  for (int t = 2 * e_ - 1; t >= v; --t) unit = add(mul(unit, p1), digits[t]);
  return Valuation{v, unit};
}

RingElement ChainRing::random(std::mt19937_64& rng) const {
  RingElement r = zero();
  for (int& c : r.coeffs) c = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(q_)));
  return r;
}

std::vector<RingElement> ChainRing::enumerate() const {
  std::size_t count = 1;
  for (std::size_t t = 0; t < width(); ++t) count *= static_cast<std::size_t>(q_);
  std::vector<RingElement> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    RingElement r = zero();
    std::size_t m = n;
    for (std::size_t t = 0; t < width(); ++t) {
      r.coeffs[t] = static_cast<int>(m % q_);
      m /= q_;
    }
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// RingTower

namespace {

std::shared_ptr<const FiniteField> checked_field(const RingSpec& spec) {
  spec.check();
  return std::make_shared<const FiniteField>(spec.p, spec.field_modulus);
}

}  // namespace

RingTower::RingTower(const RingSpec& spec)
    : spec_(spec),
      field_(checked_field(spec)),
      k_(RingTag::k, spec, field_),
      R_(RingTag::R, spec, field_),
      W2_(RingTag::W2, spec, field_),
      What_(RingTag::What, spec, field_) {
  RingElement u{RingTag::What, What_.u_};
  // Canonical representative modulo p W^ = pi^e W^.
  for (int& c : u.coeffs) {
    int d = c % spec.p;
    if (spec.p > 2 && d > spec.p / 2) d -= spec.p;
    c = mod(d, spec.p * spec.p);
  }
  if (What_.mul(u, What_.pi_power(spec.e)) != What_.from_int(spec.p))
    throw Error(ErrorKind::InvariantViolation, "unit u does not satisfy p = u pi^e");
  u_ = u;
}

const ChainRing& RingTower::ring(RingTag tag) const {
  switch (tag) {
    case RingTag::k: return k_;
    case RingTag::R: return R_;
    case RingTag::W2: return W2_;
    case RingTag::What: return What_;
  }
  return R_;
}

RingElement RingTower::reduce(const RingElement& a) const {
  RingElement r = a;
  for (int& c : r.coeffs) c %= spec_.p;
  if (a.tag == RingTag::What) r.tag = RingTag::R;
  else if (a.tag == RingTag::W2) r.tag = RingTag::k;
  return r;
}

RingElement RingTower::lift(const RingElement& a) const {
  RingElement r = a;
  if (a.tag == RingTag::R) r.tag = RingTag::What;
  else if (a.tag == RingTag::k) r.tag = RingTag::W2;
  return r;
}

std::vector<std::uint32_t> RingTower::slots(const RingElement& a) const {
  const std::size_t f = static_cast<std::size_t>(spec_.f);
  const std::size_t e = a.coeffs.size() / f;
  std::vector<std::uint32_t> out(e);
  for (std::size_t r = 0; r < e; ++r) {
    std::vector<int> c(a.coeffs.begin() + r * f, a.coeffs.begin() + (r + 1) * f);
    for (int& x : c) x %= spec_.p;
    out[r] = field_->from_coeffs(c);
  }
  return out;
}

RingElement RingTower::from_slots(std::span<const std::uint32_t> s) const {
  RingElement r = R_.zero();
  const std::size_t f = static_cast<std::size_t>(spec_.f);
  for (std::size_t slot = 0; slot < s.size(); ++slot) {
    const auto c = field_->coeffs(s[slot]);
    std::copy(c.begin(), c.end(), r.coeffs.begin() + slot * f);
  }
  return r;
}

std::shared_ptr<const RingTower> make_tower(const RingSpec& spec) {
  return std::make_shared<const RingTower>(spec);
}

}  // namespace hasse
