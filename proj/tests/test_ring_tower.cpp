#include <gtest/gtest.h>

#include <random>
#include <set>

#include "hasse/error.hpp"
#include "hasse/ring_tower.hpp"

using namespace hasse;

namespace {

RingSpec spec_of(int p, std::vector<int> g, std::vector<int> eis) {
  RingSpec s;
  s.p = p;
  s.f = static_cast<int>(g.size()) - 1;
  s.e = static_cast<int>(eis.size()) - 1;
  s.field_modulus = std::move(g);
  s.eisenstein = std::move(eis);
  return s;
}

}  // namespace

TEST(RingTower, DefiningRelationOfTheLift) {
  RingTower t(spec_of(3, {0, 1}, {-3 + 9, 0, 1}));
  const ChainRing& W = t.What();
  EXPECT_EQ(W.pi_power(2), W.from_int(3));
  EXPECT_TRUE(t.R().is_zero(t.reduce(W.pi_power(2))));
}

TEST(RingTower, LiftOfF4HasSixteenElements) {
  RingTower t(RingSpec::standard(2, 2, 1));
  const auto all = t.What().enumerate();
  std::set<std::vector<int>> distinct;
  for (const auto& x : all) distinct.insert(x.coeffs);
  EXPECT_EQ(distinct.size(), 16u);
}

TEST(RingTower, FrobeniusOnF4) {
  RingTower t(RingSpec::standard(2, 2, 1));
  const FiniteField& F = t.field();
  const std::vector<int> w = {0, 1};
  const auto omega = F.from_coeffs(w);
  EXPECT_EQ(F.frob(omega, 1), F.mul(omega, omega));
  EXPECT_EQ(F.frob(omega, 1), F.add(omega, 1));
}

TEST(RingTower, FrobeniusLiftHasOrderF) {
  for (const auto& spec : {RingSpec::standard(2, 2, 1), RingSpec::standard(3, 2, 2), RingSpec::standard(2, 3, 1)}) {
    RingTower t(spec);
    for (const ChainRing* ring : {&t.W2(), &t.What(), &t.R()}) {
      for (const auto& x : ring->enumerate()) {
        EXPECT_EQ(ring->frobenius(x, spec.f), x);
        EXPECT_EQ(ring->frobenius(ring->frobenius(x, 1), -1), x);
        EXPECT_EQ(ring->frobenius(x, 0), x);
      }
    }
  }
}

TEST(RingTower, FrobeniusIsTrivialForPrimeField) {
  RingTower t(RingSpec::standard(3, 1, 2));
  for (const auto& x : t.R().enumerate()) EXPECT_EQ(t.R().frobenius(x, 1), x);
}

TEST(RingTower, UnitU) {
  EXPECT_EQ(RingTower(spec_of(3, {0, 1}, {6, 0, 1})).unit_u(), RingTower(spec_of(3, {0, 1}, {6, 0, 1})).What().one());
  RingTower minus(spec_of(3, {0, 1}, {3, 0, 1}));
  EXPECT_EQ(minus.unit_u(), minus.What().from_int(-1));
  RingTower cube(spec_of(2, {0, 1}, {2, 0, 0, 1}));
  EXPECT_EQ(cube.unit_u(), cube.What().one());
  for (const auto& spec : {spec_of(3, {2, 2, 1}, {3, 6, 1}), spec_of(5, {2, 4, 1}, {10, 15, 20, 1}),
                           spec_of(2, {1, 1, 1}, {2, 2, 2, 1})}) {
    RingTower t(spec);
    EXPECT_EQ(t.What().mul(t.unit_u(), t.What().pi_power(spec.e)), t.What().from_int(spec.p));
    EXPECT_TRUE(t.What().is_unit(t.unit_u()));
  }
}

TEST(RingTower, RejectsBadSpecs) {
  EXPECT_THROW(RingTower(spec_of(2, {1, 0, 1}, {2, 1})), Error);       // x^2+1 = (x+1)^2 mod 2
  EXPECT_THROW(RingTower(spec_of(3, {0, 1}, {1, 0, 1})), Error);       // not Eisenstein
  EXPECT_THROW(RingTower(spec_of(3, {0, 1}, {9, 0, 1})), Error);       // constant term p^2 = 0
  EXPECT_THROW(RingTower(spec_of(3, {0, 1}, {3, 1, 1})), Error);       // middle coefficient a unit
  EXPECT_THROW(RingTower(spec_of(4, {0, 1}, {2, 1})), Error);          // not a prime
  try {
    RingTower(spec_of(2, {1, 0, 1}, {2, 1}));
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidSpec);
  }
}

TEST(RingTower, ValuationSplit) {
  RingTower t(spec_of(3, {0, 1}, {6, 0, 1}));
  const ChainRing& R = t.R();
  const Valuation v = R.valuation_split(R.mul(R.from_int(2), R.pi()));
  EXPECT_EQ(v.val, 1);
  EXPECT_EQ(v.unit_part, R.from_int(2));
  const Valuation z = R.valuation_split(R.zero());
  EXPECT_EQ(z.val, 2);
  EXPECT_EQ(z.unit_part, R.one());
  const Valuation w = t.What().valuation_split(t.What().from_int(3));
  EXPECT_EQ(w.val, 2);
  EXPECT_EQ(w.unit_part, t.What().one());
}

TEST(RingTower, ValuationRoundTrip) {
  for (const auto& spec : {RingSpec::standard(3, 1, 2), RingSpec::standard(2, 2, 2), RingSpec::standard(2, 1, 3)}) {
    RingTower t(spec);
    for (const ChainRing* ring : {&t.R(), &t.What()}) {
      for (const auto& x : ring->enumerate()) {
        const Valuation v = ring->valuation_split(x);
        if (ring->is_zero(x)) {
          EXPECT_EQ(v.val, ring->capacity());
          continue;
        }
        EXPECT_TRUE(ring->is_unit(v.unit_part));
        EXPECT_EQ(ring->mul(v.unit_part, ring->pi_power(v.val)), x);
        EXPECT_FALSE(ring->is_zero(ring->pi_power(v.val)));
      }
    }
  }
}

// Exhaustive ring axioms and Frobenius homomorphism on tiny rings.
TEST(RingTower, AxiomsExhaustive) {
  for (const auto& spec : {RingSpec::standard(2, 2, 1), RingSpec::standard(3, 1, 2), RingSpec::standard(2, 1, 2)}) {
    RingTower t(spec);
    for (const ChainRing* ring : {&t.k(), &t.R(), &t.W2(), &t.What()}) {
      const auto all = ring->enumerate();
      ASSERT_LE(all.size(), 4096u);
      const std::size_t step = all.size() > 64 ? 7 : 1;
      for (std::size_t a = 0; a < all.size(); ++a)
        for (std::size_t b = 0; b < all.size(); ++b) {
          const auto& x = all[a];
          const auto& y = all[b];
          EXPECT_EQ(ring->mul(x, y), ring->mul(y, x));
          EXPECT_EQ(ring->frobenius(ring->mul(x, y), 1), ring->mul(ring->frobenius(x, 1), ring->frobenius(y, 1)));
          EXPECT_EQ(ring->frobenius(ring->add(x, y), 1), ring->add(ring->frobenius(x, 1), ring->frobenius(y, 1)));
          for (std::size_t c = 0; c < all.size(); c += step) {
            const auto& z = all[c];
            EXPECT_EQ(ring->mul(ring->mul(x, y), z), ring->mul(x, ring->mul(y, z)));
            EXPECT_EQ(ring->mul(x, ring->add(y, z)), ring->add(ring->mul(x, y), ring->mul(x, z)));
          }
        }
      for (const auto& x : all) {
        EXPECT_EQ(ring->mul(x, ring->one()), x);
        if (ring->is_unit(x)) EXPECT_EQ(ring->mul(x, ring->inverse(x)), ring->one());
        else EXPECT_THROW(ring->inverse(x), Error);
      }
    }
  }
}

TEST(RingTower, ReductionIsAHomomorphism) {
  RingTower t(RingSpec::standard(3, 2, 2));
  const ChainRing& W = t.What();
  std::mt19937_64 rng(11);
  for (int n = 0; n < 300; ++n) {
    const auto x = W.random(rng);
    const auto y = W.random(rng);
    EXPECT_EQ(t.reduce(W.mul(x, y)), t.R().mul(t.reduce(x), t.reduce(y)));
    EXPECT_EQ(t.reduce(W.add(x, y)), t.R().add(t.reduce(x), t.reduce(y)));
    EXPECT_EQ(t.reduce(W.frobenius(x, 1)), t.R().frobenius(t.reduce(x), 1));
    EXPECT_EQ(t.reduce(W.mul(W.pi(), x)), t.R().mul(t.R().pi(), t.reduce(x)));
    EXPECT_EQ(t.reduce(t.lift(t.reduce(x))), t.reduce(x));
  }
}

TEST(RingTower, RandomizedAxiomsOnLargerRing) {
  RingTower t(RingSpec::standard(5, 3, 3));
  std::mt19937_64 rng(3);
  for (const ChainRing* ring : {&t.R(), &t.What()}) {
    for (int n = 0; n < 200; ++n) {
      const auto x = ring->random(rng), y = ring->random(rng), z = ring->random(rng);
      EXPECT_EQ(ring->mul(ring->mul(x, y), z), ring->mul(x, ring->mul(y, z)));
      EXPECT_EQ(ring->mul(x, ring->add(y, z)), ring->add(ring->mul(x, y), ring->mul(x, z)));
      EXPECT_EQ(ring->frobenius(ring->mul(x, y), 2), ring->mul(ring->frobenius(x, 2), ring->frobenius(y, 2)));
      EXPECT_EQ(ring->frobenius(ring->pi(), 1), ring->pi());
    }
  }
}

TEST(RingTower, StandardSpecIsValid) {
  for (int p : {2, 3, 5, 7})
    for (int f = 1; f <= 3; ++f)
      for (int e = 1; e <= 3; ++e) EXPECT_NO_THROW(RingSpec::standard(p, f, e).check());
}
