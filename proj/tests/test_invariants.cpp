#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "hasse/error.hpp"
#include "hasse/generator.hpp"
#include "hasse/invariants.hpp"
#include "hasse/random.hpp"

using namespace hasse;
using QP = QuotientPresentation;

namespace {

// Leibniz-formula determinant, independent of the library's elimination.
Elem leibniz(const FiniteField& K, const std::vector<Vec>& cols) {
  const std::size_t n = cols.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Elem total = 0;
  do {
    std::size_t inversions = 0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) inversions += perm[a] > perm[b];
    Elem term = K.from_int(inversions % 2 ? -1 : 1);
    for (std::size_t c = 0; c < n; ++c) term = K.mul(term, cols[c][perm[c]]);
    total = K.add(total, term);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

Vec random_vec(const FiniteField& K, std::size_t n, std::mt19937_64& rng) {
  Vec v(n);
  for (auto& x : v) x = static_cast<Elem>(uniform_below(rng, K.order()));
  return v;
}

GeneratorConfig config(int p, int f, int e, int h1, int d1, Strategy s, int count, std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.params = Params{RingSpec::standard(p, f, e), h1, d1};
  cfg.strategy = s;
  cfg.count = count;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST(PropDual, SplitCasePinsTheSign) {
  auto tower = make_tower(RingSpec::standard(3, 1, 1));
  const FiniteField& K = tower->field();
  for (std::size_t r = 1; r <= 5; ++r)
    for (std::size_t s = 0; s <= r; ++s) {
      std::vector<Vec> b, c;
      for (std::size_t t = 0; t < r; ++t) {
        Vec v(r, 0);
        v[t] = 1;
        (t < s ? b : c).push_back(v);
      }
      const Subspace z = Subspace::zero(r);
      const QP A = QP::make(K, Subspace::full(r), z);
      const QP B = QP::make(K, Subspace::span(K, r, b), z);
      const QP C = QP::make(K, Subspace::span(K, r, c), z);
      const auto pd = prop_dual_sections(K, A, B, C);
      EXPECT_EQ(pd.x.scalar, 1u);
      EXPECT_EQ(pd.y.scalar, 1u);
      EXPECT_EQ(pd.iso, 1u) << r << " " << s;
      const auto sw = prop_dual_sections(K, A, C, B);
      EXPECT_EQ(sw.x.scalar, pd.y.scalar);
      EXPECT_EQ(sw.y.scalar, pd.x.scalar);
      EXPECT_EQ(K.mul(sw.iso, pd.iso), 1u);
    }
}

TEST(PropDual, DimensionMismatchThrows) {
  auto tower = make_tower(RingSpec::standard(2, 1, 1));
  const FiniteField& K = tower->field();
  const Subspace z = Subspace::zero(3);
  const QP A = QP::make(K, Subspace::full(3), z);
  const QP B = QP::make(K, Subspace::span(K, 3, {{1, 0, 0}}), z);
  try {
    prop_dual_sections(K, A, B, B);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotComplementary);
  }
}

// x and y against det[b|c] = x det[b|q_B] with Leibniz determinants.
TEST(PropDual, RandomAgainstWedgeOracle) {
  std::mt19937_64 rng(2024);
  for (int p : {2, 3}) {
    auto tower = make_tower(RingSpec::standard(p, 1, 1));
    const FiniteField& K = tower->field();
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t r = 1 + uniform_below(rng, 6);
      const std::size_t s = uniform_below(rng, r + 1);
      std::vector<Vec> b, c;
      while (b.size() < s) b.push_back(random_vec(K, r, rng));
      while (c.size() < r - s) c.push_back(random_vec(K, r, rng));
      const Subspace Bs = Subspace::span(K, r, b), Cs = Subspace::span(K, r, c);
      if (Bs.dim() != s || Cs.dim() != r - s) continue;
      const Subspace z = Subspace::zero(r);
      const QP A = QP::make(K, Subspace::full(r), z);
      const QP B = QP::make(K, Bs, z), C = QP::make(K, Cs, z);
      const auto pd = prop_dual_sections(K, A, B, C);
      EXPECT_EQ(pd.x.scalar, K.mul(pd.iso, pd.y.scalar));
      std::vector<Vec> bc = B.basis(), bq = B.basis();
      for (const Vec& v : C.basis()) bc.push_back(v);
      const QP qB = QP::make(K, Subspace::full(r), Bs), qC = QP::make(K, Subspace::full(r), Cs);
      for (const Vec& v : qB.basis()) bq.push_back(v);
      EXPECT_EQ(leibniz(K, bc), K.mul(pd.x.scalar, leibniz(K, bq)));
      std::vector<Vec> cb = C.basis(), cq = C.basis();
      for (const Vec& v : B.basis()) cb.push_back(v);
      for (const Vec& v : qC.basis()) cq.push_back(v);
      EXPECT_EQ(leibniz(K, cb), K.mul(pd.y.scalar, leibniz(K, cq)));
    }
  }
}

TEST(Invariants, OrdinarySplitAllUnits) {
  const DieudonneDatum& D = named_instance("ord-split").datum;
  EXPECT_FALSE(hasse_invariant(D).vanished());
  EXPECT_FALSE(partial_hasse(D, 0).vanished());
  EXPECT_FALSE(partial_hasse_pr(D, 0, 1).vanished());
  for (const auto& v : all_duality_verdicts(D)) {
    EXPECT_TRUE(v.equal) << v.name;
    EXPECT_TRUE(v.natural_agrees) << v.name;
    EXPECT_NE(v.scalar_G, 0u) << v.name;
  }
}

TEST(Invariants, SupersingularVanishes) {
  const DieudonneDatum& D = named_instance("ss").datum;
  EXPECT_TRUE(hasse_invariant(D).vanished());
  for (const auto& v : all_duality_verdicts(D)) {
    EXPECT_TRUE(v.equal) << v.name;
    EXPECT_EQ(v.scalar_G, 0u);
    EXPECT_EQ(v.scalar_GD, 0u);
  }
}

TEST(Invariants, SplitRamifiedAllUnits) {
  const DieudonneDatum& D = named_instance("ram-split").datum;
  EXPECT_EQ(primitive_m(D, 0, 2).scalar, 1u);
  EXPECT_FALSE(primitive_hasse(D, 0).vanished());
  EXPECT_FALSE(partial_hasse_pr(D, 0, 1).vanished());
  EXPECT_FALSE(partial_hasse_pr(D, 0, 2).vanished());
  EXPECT_TRUE(factorization_check(D, 0, 1));
  EXPECT_TRUE(factorization_check(D, 0, 2));
  for (const auto& v : all_duality_verdicts(D)) {
    EXPECT_TRUE(v.equal) << v.name;
    EXPECT_NE(v.scalar_G, 0u) << v.name;
  }
}

TEST(Invariants, TorsionHodgeKillsM) {
  const Params P{RingSpec::standard(3, 1, 2), 2, 1};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::mt19937_64 rng = instance_rng(seed, 0);
    const DieudonneDatum D = charp_with_types(P, {{1, 1}}, rng);
    ASSERT_TRUE(validate(D).valid());
    EXPECT_EQ(primitive_m(D, 0, 2).scalar, 0u);
    for (const auto& v : all_duality_verdicts(D)) EXPECT_TRUE(v.equal) << v.name;
  }
}

TEST(Invariants, Preconditions) {
  const DieudonneDatum& D1 = named_instance("ord-split").datum;
  EXPECT_THROW(primitive_m(D1, 0, 2), Error);
  EXPECT_THROW(primitive_hasse(D1, 0), Error);
  const DieudonneDatum& D2 = named_instance("ram-split").datum;
  EXPECT_THROW(primitive_m(D2, 0, 1), Error);
  EXPECT_THROW(primitive_m(D2, 0, 3), Error);
  EXPECT_THROW(partial_hasse_pr(D2, 0, 0), Error);
  EXPECT_THROW(duality_check("nope", D2, 0, 0), Error);
}

TEST(Invariants, UnramifiedDegeneration) {
  for (const Instance& inst : generate(config(3, 2, 1, 3, 1, Strategy::charp_flag, 5, 4))) {
    for (int i = 0; i < 2; ++i)
      EXPECT_EQ(partial_hasse_pr(inst.datum, i, 1).scalar, partial_hasse(inst.datum, i).scalar);
  }
}

// Every cell on generated data: duality, natural maps, factorization,
// product identity, and equal vanishing sets for D and its dual.
TEST(Invariants, CampaignOnGeneratedData) {
  std::vector<GeneratorConfig> cfgs;
  for (auto s : {Strategy::diagonal_lift, Strategy::charp_flag}) {
    cfgs.push_back(config(3, 1, 1, 3, 1, s, 8, 1));
    cfgs.push_back(config(5, 2, 1, 2, 1, s, 6, 2));
    cfgs.push_back(config(3, 1, 2, 2, 1, s, 8, 3));
    cfgs.push_back(config(2, 2, 2, 3, 1, s, 6, 4));
    cfgs.push_back(config(3, 2, 3, 2, 1, s, 4, 5));
    cfgs.push_back(config(2, 1, 3, 3, 2, s, 4, 6));
    cfgs.push_back(config(7, 3, 1, 2, 1, s, 4, 7));
  }
  int zeros = 0, units = 0;
  for (const auto& cfg : cfgs)
    for (const Instance& inst : generate(cfg)) {
      const DieudonneDatum& D = inst.datum;
      const DieudonneDatum Dd = dualize(D);
      std::vector<bool> vanish_g, vanish_d;
      for (const auto& v : all_duality_verdicts(D, Dd)) {
        EXPECT_TRUE(v.equal) << v.name << " i=" << v.i << " j=" << v.j << " seed=" << inst.seed;
        EXPECT_TRUE(v.natural_agrees) << v.name << " i=" << v.i << " j=" << v.j;
        EXPECT_NE(v.canonical_iso, 0u);
        vanish_g.push_back(v.scalar_G == 0);
        vanish_d.push_back(v.scalar_GD == 0);
        (v.scalar_G == 0 ? zeros : units)++;
      }
      EXPECT_EQ(vanish_g, vanish_d);
      EXPECT_TRUE(product_identity(D).holds);
      EXPECT_TRUE(product_identity(Dd).holds);
      if (D.params.e() >= 2)
        for (int i = 0; i < D.f(); ++i)
          for (int j = 1; j <= D.params.e(); ++j) {
            EXPECT_TRUE(factorization_check(D, i, j));
            EXPECT_TRUE(factorization_check(Dd, i, j));
          }
    }
  EXPECT_GT(zeros, 0);
  EXPECT_GT(units, 0);
}

// Unit iff ordinary (Hodge and conjugate complementary at every i).
TEST(Invariants, UnitIffComplementary) {
  for (const Instance& inst : generate(config(2, 2, 1, 3, 1, Strategy::charp_flag, 30, 8))) {
    const DieudonneDatum& D = inst.datum;
    bool ordinary = true;
    for (int i = 0; i < D.f(); ++i)
      ordinary = ordinary && intersect(*D.tower, hodge(D, i), conjugate(D, i)).dim_k() == 0;
    EXPECT_EQ(ordinary, !hasse_invariant(D).vanished());
  }
}

// Rescaling F^D by c and V^D by c^{-1} keeps the dual valid but moves its
// sections by powers of c, which the verdicts must notice.
TEST(Invariants, RescaledDualIsDetected) {
  int detected = 0, nontrivial_iso = 0;
  for (const Instance& inst : generate(config(5, 1, 2, 2, 1, Strategy::diagonal_lift, 4, 11))) {
    const DieudonneDatum& D = inst.datum;
    DieudonneDatum Dd = dualize(D);
    const ChainRing& R = D.tower->R();
    const RingElement c = R.from_int(2), cinv = R.from_int(3);
    for (auto& m : Dd.F) m.matrix = mat_scale(R, m.matrix, c);
    for (auto& m : Dd.V) m.matrix = mat_scale(R, m.matrix, cinv);
    ASSERT_TRUE(validate(Dd).valid());
    for (const auto& v : all_duality_verdicts(D, dualize(D))) nontrivial_iso += v.canonical_iso != 1;
    for (const auto& v : all_duality_verdicts(D, Dd))
      if (v.scalar_G != 0 && (v.name == "ha" || v.name == "ha_i" || v.name == "ha_pr" || v.name == "hasse")) {
        EXPECT_FALSE(v.equal) << v.name;
        ++detected;
      }
  }
  EXPECT_GT(detected, 0);
  EXPECT_GT(nontrivial_iso, 0);
}

// Non-free Hodge types at e = 3 make the M^[l] matrices non-commuting, so the
// order of the product matters.
TEST(Invariants, FactorizationOrderOnNonFreeTypes) {
  const Params P{RingSpec::standard(3, 1, 3), 3, 2};
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    std::mt19937_64 rng = instance_rng(seed, 0);
    const DieudonneDatum D = charp_with_types(P, {random_type(P, rng)}, rng);
    for (int j = 1; j <= 3; ++j) {
      EXPECT_TRUE(factorization_check(D, 0, j)) << "seed " << seed << " j " << j;
      ++checked;
    }
  }
  EXPECT_EQ(checked, 120u);
}
