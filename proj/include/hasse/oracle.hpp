#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hasse/dieudonne.hpp"

namespace hasse {

/// Coefficient of v_1 ^ ... ^ v_n on e_1 ^ ... ^ e_n, expanding the wedge
/// product one factor at a time over sorted index sets.
Elem wedge_coefficient(const FiniteField& K, const std::vector<Vec>& vectors);

/// Every element of R^h1 (one copy per embedding) listed by code, with maps
/// tabulated element by element through the ring arithmetic.  Sets are
/// membership masks indexed by code.
class ModuleEnumerator {
 public:
  using Set = std::vector<char>;

  /// Precondition: e*h1 <= 12 and q^(e*h1) <= 2^20.
  explicit ModuleEnumerator(const DieudonneDatum& D);

  std::size_t size() const noexcept { return vectors_.size(); }
  const Vec& vector(std::size_t code) const { return vectors_.at(code); }
  std::size_t code(const Vec& v) const;

  Set members(const Subspace& s) const;
  bool same(const Set& set, const Subspace& s) const;
  std::size_t count(const Set& set) const;

  /// Tables code -> code.
  const std::vector<std::size_t>& F(int i) const { return F_.at(i); }
  const std::vector<std::size_t>& V(int i) const { return V_.at(i); }
  const std::vector<std::size_t>& pi() const noexcept { return pi_; }

  Set image(const std::vector<std::size_t>& map, const Set& domain) const;
  Set preimage(const std::vector<std::size_t>& map, const Set& target) const;
  Set zero_set() const;
  Set full_set() const;
  Set sum(const Set& a, const Set& b) const;
  Set intersect(const Set& a, const Set& b) const;
  /// {y : <x, y> = 0 for all x in s}, pairing = top pi-coefficient of sum x_t y_t.
  Set annihilator(const Set& s) const;

  /// Whether x -> map(x) induces a bijection num1/den1 -> num2/den2.
  /// False when the map does not respect the quotients.
  bool bijective(const std::vector<std::size_t>& map, const Set& num1, const Set& den1, const Set& num2,
                 const Set& den2) const;

 private:
  std::vector<std::size_t> tabulate(const SemilinearMap& m) const;
  std::size_t add(std::size_t a, std::size_t b) const;

  const DieudonneDatum* D_;
  std::vector<Vec> vectors_;
  std::vector<std::vector<RingElement>> elements_;
  std::vector<std::vector<std::size_t>> F_;
  std::vector<std::vector<std::size_t>> V_;
  std::vector<std::size_t> pi_;
};

struct OracleCheck {
  std::string check;
  int i = 0;
  int j = 0;
  bool agree = false;
  std::string detail;
};

/// Check families: validate, kernel, image, preimage, sum, intersect,
/// dual_hodge, prop_dual, invariants.
const std::vector<std::string>& oracle_check_names();

/// Every check on one datum.
std::vector<OracleCheck> enumeration_oracle(const DieudonneDatum& D);
/// True iff every row of the named family agrees.  Throws Precondition on unknown names.
bool enumeration_oracle(const std::string& check, const DieudonneDatum& D);

/// x = iso*y and x, y against wedge coefficients for one complementary pair in F_q^r.
OracleCheck prop_dual_oracle(const FiniteField& K, std::size_t r, const std::vector<Vec>& b, const std::vector<Vec>& c);
/// Every ordered pair of complementary subspaces of F_q^r (small q^r only).
std::vector<OracleCheck> prop_dual_exhaustive(const FiniteField& K, std::size_t r);

/// p = 2, f = 1, e = 2, h1 = 2, d1 = 1: every (F, V, PR flag) passing the
/// set-level axioms, in a fixed order.
std::vector<DieudonneDatum> exhaustive_tiny_family();

}  // namespace hasse
