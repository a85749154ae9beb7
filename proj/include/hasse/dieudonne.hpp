#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hasse/chain_linalg.hpp"
#include "hasse/ring_tower.hpp"

namespace hasse {

struct Params {
  RingSpec spec;
  int h1 = 2;
  int d1 = 1;

  int p() const noexcept { return spec.p; }
  int f() const noexcept { return spec.f; }
  int e() const noexcept { return spec.e; }
  int h0() const noexcept { return spec.e * h1; }
  int d0() const noexcept { return spec.e * d1; }
  int h() const noexcept { return spec.f * h0(); }
  int d() const noexcept { return spec.f * d0(); }

  /// Throws InvalidSpec on 0 < d1 < h1 failures or when f*e*h1 exceeds
  /// size_limit().
  void check() const;
  /// HASSE_FORGE_LIMIT if set, else 96.
  static int size_limit();

  bool operator==(const Params&) const = default;
};

/// Mod-p datum.  For i in Z/f (stored 0..f-1, prev(i) = i-1 mod f):
///   F[i] : E_{i-1} -> E_i, x -> A_i sigma(x)            (twist +1)
///   V[i] : E_i -> E_{i-1}, y -> C_i sigma^{-1}(y)       (twist -1)
///   pr_flag[i][j], j = 0..e, submodules of E_i.
/// The linear matrix of V_i into the twisted E_{i-1} is B_i = sigma(C_i).
struct DieudonneDatum {
  Params params;
  std::shared_ptr<const RingTower> tower;
  std::vector<SemilinearMap> F;
  std::vector<SemilinearMap> V;
  std::vector<std::vector<Submodule>> pr_flag;

  int f() const noexcept { return params.f(); }
  int prev(int i) const noexcept { return (i + f() - 1) % f(); }
  int next(int i) const noexcept { return (i + 1) % f(); }
  const Matrix& A(int i) const { return F.at(static_cast<std::size_t>(i)).matrix; }
  Matrix B(int i) const;
  const FiniteField& field() const { return tower->field(); }
};

/// Lift over W^.  The PR flag lives on the reduction.
struct LiftedDatum {
  Params params;
  std::shared_ptr<const RingTower> tower;
  std::vector<SemilinearMap> F;
  std::vector<SemilinearMap> V;
  std::vector<std::vector<Submodule>> pr_flag;

  int f() const noexcept { return params.f(); }
  int prev(int i) const noexcept { return (i + f() - 1) % f(); }
};

struct AxiomCheck {
  std::string axiom;
  int i = 0;
  int j = -1;
  bool pass = true;
  std::string detail;
  /// For a failed check: an R-vector (coefficient lists) exhibiting it.
  std::optional<std::vector<RingElement>> witness;
};

struct ValidationReport {
  std::vector<AxiomCheck> checks;

  bool valid() const;
  std::vector<AxiomCheck> failures() const;
};

ValidationReport validate(const DieudonneDatum& D);
/// Lift-level checks (F V = V F = p exactly) followed by validation of the reduction.
ValidationReport validate(const LiftedDatum& L);

/// Entrywise reduction; throws InvalidLift when the result is not valid.
DieudonneDatum reduce(const LiftedDatum& L);

/// Dual datum in the same index set with the pi^(e-1)-coefficient pairing;
/// throws InvalidDatum when D is invalid.
DieudonneDatum dualize(const DieudonneDatum& D);
/// Transposed lift with the PR flag of dualize(reduce(L)).
LiftedDatum dualize(const LiftedDatum& L);

/// omega_i = ker F_{i+1} = im V_{i+1}
Submodule hodge(const DieudonneDatum& D, int i);
/// ker V_i = im F_i
Submodule conjugate(const DieudonneDatum& D, int i);

/// Gram matrix of the duality pairing on the restriction of scalars of E_i.
KMatrix pairing_gram(const DieudonneDatum& D);

}  // namespace hasse
