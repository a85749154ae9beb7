#pragma once

#include <string>
#include <vector>

#include "hasse/dieudonne.hpp"

namespace hasse {

/// One factor det(space)^exponent, with the Frobenius power the space is
/// twisted by.
struct LineFactor {
  std::string space;
  int exponent = 1;
  long twist = 0;
  bool operator==(const LineFactor&) const = default;
};

/// Lifted basis vectors, stored untwisted; `twist` says how the section uses them.
struct LabeledBasis {
  std::string label;
  long twist = 0;
  std::vector<Vec> vectors;
};

/// A section of a determinant line over a point: the determinant of a map
/// between two spaces of equal dimension, trivialized by the recorded bases.
/// Bases "source" and "target" are always present.
struct LineSection {
  Elem scalar = 0;
  std::vector<LineFactor> line;
  std::vector<LabeledBasis> bases;
  KMatrix matrix;

  bool vanished() const noexcept { return scalar == 0; }
  /// Throws Precondition when absent.
  const LabeledBasis& basis(const std::string& label) const;
};

struct PropDualSections {
  LineSection x;  // det(C -> A/B)
  LineSection y;  // det(B -> A/C)
  Elem iso = 0;   // x = iso * y
};

/// A, B, C share a denominator, B and C sit inside A and dim B + dim C =
/// dim A (else NotComplementary).  A/B and A/C use the pivot-rule bases.
/// iso = (-1)^{s(r-s)} det[c | q_C]_a / det[b | q_B]_a where s = dim B,
/// r = dim A and q_B, q_C are the lifted bases of A/B and A/C.
PropDualSections prop_dual_sections(const FiniteField& K, const QuotientPresentation& A,
                                    const QuotientPresentation& B, const QuotientPresentation& C);

/// Basis of omega_i adapted to the PR flag: the lifted bases of the graded
/// pieces, level 1 first.
std::vector<Vec> adapted_hodge_basis(const DieudonneDatum& D, int i);

/// det V on the whole Hodge space, blocks ordered by i ascending on both sides.
LineSection hasse_invariant(const DieudonneDatum& D);
/// det(V_i : omega_i -> sigma omega_{i-1}) in adapted bases.
LineSection partial_hasse(const DieudonneDatum& D, int i);
/// det(pi : omega^[j]/omega^[j-1] -> omega^[j-1]/omega^[j-2]), 2 <= j <= e.
LineSection primitive_m(const DieudonneDatum& D, int i, int j);
/// Divide by pi^{e-1}, then V_i: F_i^[1] -> sigma(omega_{i-1}/omega_{i-1}^[e-1]).  Needs e >= 2.
LineSection primitive_hasse(const DieudonneDatum& D, int i);
LineSection primitive_hasse(const LiftedDatum& L, int i);
/// det(V_i : F_i^[j]/F_i^[j-1] -> sigma(F_{i-1}^[j]/F_{i-1}^[j-1])), 1 <= j <= e.
LineSection partial_hasse_pr(const DieudonneDatum& D, int i, int j);

/// Map-level equality Ha_i^[j] = sigma M_{i-1}^[j+1] ... sigma M_{i-1}^[e] Hasse_i M_i^[2] ... M_i^[j].
bool factorization_check(const DieudonneDatum& D, int i, int j);

/// Invariant names: "ha", "ha_i", "m", "hasse", "ha_pr".
const std::vector<std::string>& invariant_names();

struct NaturalMapCheck {
  Elem definition = 0;
  Elem natural = 0;
  bool agree = false;
};

/// The invariant computed from its definition against its factorization
/// through the natural map B -> A/C; for "ha_pr" this is the scalar form of
/// the factorization.
NaturalMapCheck natural_map_check(const std::string& name, const DieudonneDatum& D, int i, int j);

struct DualityVerdict {
  std::string name;
  int i = 0;
  int j = 0;
  Elem scalar_G = 0;
  Elem scalar_GD = 0;
  Elem canonical_iso = 0;
  bool equal = false;
  /// Definition and natural-map computations agree on both sides.
  bool natural_agrees = false;
  /// False when the identification is undefined because the datum admits no
  /// lift (hasse and ha_pr with e >= 2); equal is then false as well.
  bool applicable = true;
  std::string detail;
};

/// Verdict for one cell; `dual` must be dualize(D).
DualityVerdict duality_check(const std::string& name, const DieudonneDatum& D, const DieudonneDatum& dual, int i,
                             int j);
DualityVerdict duality_check(const std::string& name, const DieudonneDatum& D, int i, int j);

struct Cell {
  std::string name;
  int i = 0;
  int j = 0;
};

/// Every cell in a fixed order: ha; ha_i for all i; m for 2 <= j <= e; hasse for e >= 2; ha_pr for 1 <= j <= e.
std::vector<Cell> invariant_cells(const Params& params);
/// The section of one cell computed from its definition.
LineSection invariant_section(const Cell& cell, const DieudonneDatum& D);

/// Verdicts over invariant_cells.
std::vector<DualityVerdict> all_duality_verdicts(const DieudonneDatum& D);
std::vector<DualityVerdict> all_duality_verdicts(const DieudonneDatum& D, const DieudonneDatum& dual);

struct ProductIdentity {
  Elem ha = 0;
  Elem sign = 0;  // (-1)^{d0 (f-1)}
  Elem product_partial = 0;
  Elem product_pr = 0;
  std::vector<Elem> partial;           // ha_i
  std::vector<Elem> partial_products;  // prod_j ha_i^[j]
  bool holds = false;
};

/// ha = sign * prod_i ha_i and ha_i = prod_j ha_i^[j], adapted bases.
ProductIdentity product_identity(const DieudonneDatum& D);

}  // namespace hasse
