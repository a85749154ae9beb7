#pragma once

// Coefficient rings of the project:
//   k  = F_p[x]/(g)                 residue field, f = deg g
//   R  = k[pi]/(pi^e)               residue chain ring
//   W2 = (Z/p^2)[x]/(g^)            length-two Witt vectors of k
//   W^ = W2[pi]/(E(pi))             lifted chain ring, E Eisenstein over Z/p^2
// plus a table-driven FiniteField used by all k-linear algebra.

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace hasse {

/// F_{p^f} with elements encoded as integers sum c_t p^t (c_t the
/// coefficients of the residue polynomial in x, least significant first).
class FiniteField {
 public:
  using Elem = std::uint32_t;

  FiniteField(int p, std::vector<int> modulus);

  int characteristic() const noexcept { return p_; }
  int degree() const noexcept { return f_; }
  Elem order() const noexcept { return q_; }

  Elem add(Elem a, Elem b) const noexcept;
  Elem sub(Elem a, Elem b) const noexcept;
  Elem neg(Elem a) const noexcept;
  Elem mul(Elem a, Elem b) const noexcept {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t n) const noexcept;
  /// x -> x^(p^a); a is taken modulo f, negative values allowed.
  Elem frob(Elem a, long power) const noexcept;

  Elem from_coeffs(std::span<const int> coeffs) const;
  std::vector<int> coeffs(Elem a) const;
  Elem from_int(long n) const noexcept;

  const std::vector<int>& modulus() const noexcept { return modulus_; }

 private:
  int p_;
  int f_;
  Elem q_;
  std::vector<int> modulus_;
  std::vector<Elem> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<std::vector<Elem>> frob_;  // frob_[a][x] = x^(p^a)
};

/// Serializable description of the ring tower.
struct RingSpec {
  int p = 0;
  int f = 1;
  int e = 1;
  std::vector<int> field_modulus;  // length f+1, monic, mod p, least significant first
  std::vector<int> eisenstein;     // length e+1, monic, mod p^2, least significant first

  /// Throws Error(InvalidSpec) when an invariant fails.
  void check() const;

  /// Canonical choices: first irreducible monic of degree f in lexicographic
  /// order, and X^e - p.
  static RingSpec standard(int p, int f, int e);

  bool operator==(const RingSpec&) const = default;
};

bool is_irreducible_mod_p(const std::vector<int>& poly, int p);

enum class RingTag { k, R, W2, What };

const char* to_string(RingTag tag);

/// Element of one of the four rings.  coeffs has e*f entries, the entry
/// r*f + t being the coefficient of pi^r x^t (e = 1 for k and W2).
struct RingElement {
  RingTag tag = RingTag::R;
  std::vector<int> coeffs;

  bool operator==(const RingElement&) const = default;
};

/// x = unit_part * pi^val; val equals the nilpotency length for zero.
struct Valuation {
  int val = 0;
  RingElement unit_part;
};

/// One ring of the tower.  All four share this implementation: a polynomial
/// ring in (x, pi) over Z/q with q in {p, p^2}, reduced by the field modulus
/// and the Eisenstein relation.
class ChainRing {
 public:
  ChainRing(RingTag tag, const RingSpec& spec, std::shared_ptr<const FiniteField> field);

  RingTag tag() const noexcept { return tag_; }
  int p() const noexcept { return p_; }
  int modulus() const noexcept { return q_; }
  int f() const noexcept { return f_; }
  int e() const noexcept { return e_; }
  std::size_t width() const noexcept { return static_cast<std::size_t>(e_ * f_); }
  /// Smallest n with pi^n = 0 (for k and W2 this is the p-adic length).
  int capacity() const noexcept;

  RingElement zero() const;
  RingElement one() const;
  RingElement from_int(long n) const;
  RingElement pi() const;
  RingElement pi_power(int n) const;
  /// Element with the given raw coefficient vector, reduced mod q.
  RingElement make(std::vector<int> coeffs) const;

  RingElement add(const RingElement& a, const RingElement& b) const;
  RingElement sub(const RingElement& a, const RingElement& b) const;
  RingElement neg(const RingElement& a) const;
  RingElement mul(const RingElement& a, const RingElement& b) const;
  RingElement scale(const RingElement& a, long n) const;

  bool is_zero(const RingElement& a) const;
  bool is_unit(const RingElement& a) const;
  /// Throws Error(Precondition) for non-units.
  RingElement inverse(const RingElement& a) const;

  RingElement frobenius(const RingElement& a, long power) const;

  /// Only for R and W^.
  Valuation valuation_split(const RingElement& a) const;
  int valuation(const RingElement& a) const { return valuation_split(a).val; }

  /// Residue of the pi^0 slot in k, as FiniteField code.
  std::uint32_t residue(const RingElement& a) const;

  RingElement random(std::mt19937_64& rng) const;

  /// All elements, in coefficient-lexicographic order (tiny rings only).
  std::vector<RingElement> enumerate() const;

 private:
  friend class RingTower;

  std::vector<int> xmul(std::span<const int> a, std::span<const int> b) const;
  std::vector<int> xpow_eval(std::span<const int> poly, std::span<const int> at) const;
  RingElement divide_by_pi(const RingElement& a) const;
  std::vector<int> xmod(std::vector<int> a) const;
  std::vector<int> xinverse(std::span<const int> a) const;
  void check_tag(const RingElement& a) const;

  RingTag tag_;
  int p_;
  int q_;
  int f_;
  int e_;
  std::vector<int> field_mod_;  // monic, length f+1, mod q
  std::vector<int> eis_low_;    // E(pi) = pi^e + sum eis_low_[r] pi^r, mod q
  std::vector<std::vector<int>> theta_;  // theta_[a] = sigma^a(x), a in [0, f)
  std::vector<int> u_;                   // coefficients of p / pi^e (W^ only)
  std::shared_ptr<const FiniteField> field_;
};

/// The four rings built from one RingSpec.  Immutable after construction.
class RingTower {
 public:
  explicit RingTower(const RingSpec& spec);

  const RingSpec& spec() const noexcept { return spec_; }
  const FiniteField& field() const noexcept { return *field_; }
  const ChainRing& k() const noexcept { return k_; }
  const ChainRing& R() const noexcept { return R_; }
  const ChainRing& W2() const noexcept { return W2_; }
  const ChainRing& What() const noexcept { return What_; }
  const ChainRing& ring(RingTag tag) const;

  /// The unit u with p = u * pi^e in W^.  It is unique modulo pi^e; the
  /// representative returned has coefficients in the symmetric range mod p.
  const RingElement& unit_u() const noexcept { return u_; }

  /// Coefficientwise reduction W^ -> R (and W2 -> k).
  RingElement reduce(const RingElement& a) const;
  /// Digit lift R -> W^ with coefficients in [0, p).
  RingElement lift(const RingElement& a) const;

  /// R element -> its e residue-field slots as FiniteField codes.
  std::vector<std::uint32_t> slots(const RingElement& a) const;
  RingElement from_slots(std::span<const std::uint32_t> slots) const;

 private:
  RingSpec spec_;
  std::shared_ptr<const FiniteField> field_;
  ChainRing k_;
  ChainRing R_;
  ChainRing W2_;
  ChainRing What_;
  RingElement u_;
};

std::shared_ptr<const RingTower> make_tower(const RingSpec& spec);

}  // namespace hasse
