#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hasse/dieudonne.hpp"

namespace hasse {

enum class FlagKind { pi_torsion, hodge_extended, hodge_aux, conjugate };

const char* to_string(FlagKind kind);

struct Flag {
  int i = 0;
  FlagKind kind = FlagKind::hodge_extended;
  std::vector<Submodule> levels;
};

/// E_i[pi^j], 0 <= j <= e.
Submodule pi_torsion(const DieudonneDatum& D, int i, int j);
Flag pi_torsion_flag(const DieudonneDatum& D, int i);

/// Levels 0..2e: the PR flag, then (pi^j)^{-1} of level e-j.
/// Throws InvariantViolation on any failed rank or inclusion check.
Flag extended_hodge_flag(const DieudonneDatum& D, int i);
/// Levels 0..e-1: pi^{-1} of the PR levels.
Flag hodge_aux_flag(const DieudonneDatum& D, int i);
/// Levels 0..2e: F_i(sigma F_{i-1}^[e+j]) below e, V_i^{-1}(sigma F_{i-1}^[j]) above.
Flag conjugate_flag(const DieudonneDatum& D, int i);

/// Image of sigma(S) under a k-linear map given on twisted coordinates.
Submodule twisted_image(const DieudonneDatum& D, const KMatrix& map, const Submodule& s, long power);

/// The graded isomorphisms induced by F_i and V_i between the extended
/// flag at i-1 and the conjugate flag at i, for all 1 <= j <= e.
bool graded_isomorphisms_hold(const DieudonneDatum& D, int i);

/// pi^j * conj^[e+j] == conj^[e-j] as submodules (any datum, 1 <= j <= e-1).
bool pi_divisibility_holds(const DieudonneDatum& D, int i, int j);

struct PiDivisibilityReport {
  bool applicable = true;
  bool submodule_equal = true;
  bool lemma_holds = true;
  int points_checked = 0;
  std::string detail;

  bool ok() const noexcept { return !applicable || (submodule_equal && lemma_holds); }
};

/// Submodule equality on the reduction plus the pointwise lemma on the
/// lift: for 20 random points and all basis points x of
/// F_i^{-1}(E_i[pi^{e-j}]), dividing F x by pi^j and applying V gives
/// pi^{e-j} u x, both exactly over W^ and modulo sigma(pi^{e-j} omega_{i-1})
/// over R.
PiDivisibilityReport check_pi_divisibility(const LiftedDatum& L, int i, int j, std::uint64_t seed = 0);
PiDivisibilityReport check_pi_divisibility(const LiftedDatum& L, const DieudonneDatum& reduced, int i, int j,
                                           std::uint64_t seed = 0);
/// Report for char-p-only data.
PiDivisibilityReport pi_divisibility_not_applicable();

}  // namespace hasse
