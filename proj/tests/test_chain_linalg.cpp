#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "hasse/chain_linalg.hpp"
#include "hasse/error.hpp"
#include "hasse/random.hpp"

using namespace hasse;

namespace {

using RVec = std::vector<RingElement>;

// All tuples of ring elements of length n.
std::vector<RVec> all_tuples(const ChainRing& ring, std::size_t n) {
  const auto elems = ring.enumerate();
  std::vector<RVec> out{RVec{}};
  for (std::size_t t = 0; t < n; ++t) {
    std::vector<RVec> next;
    for (const auto& v : out)
      for (const auto& a : elems) {
        RVec w = v;
        w.push_back(a);
        next.push_back(std::move(w));
      }
    out = std::move(next);
  }
  return out;
}

// Every element of a k-subspace, as k-vectors.
std::set<Vec> elements(const FiniteField& F, const Subspace& s) {
  std::set<Vec> out{Vec(s.ambient(), 0)};
  for (const Vec& b : s.basis()) {
    std::set<Vec> next;
    for (const Vec& v : out)
      for (Elem c = 0; c < F.order(); ++c) {
        Vec w = v;
        for (std::size_t t = 0; t < w.size(); ++t) w[t] = F.add(w[t], F.mul(c, b[t]));
        next.insert(w);
      }
    out = std::move(next);
  }
  return out;
}

Matrix random_matrix(const ChainRing& ring, std::size_t r, std::size_t c, std::mt19937_64& rng) {
  Matrix m = Matrix::zero(ring, r, c);
  for (auto& a : m.entries) a = ring.random(rng);
  return m;
}

// Random matrix biased towards small rank: entries drawn from pi * R with probability 1/2.
Matrix sparse_matrix(const ChainRing& ring, std::size_t r, std::size_t c, std::mt19937_64& rng) {
  Matrix m = random_matrix(ring, r, c, rng);
  for (auto& a : m.entries)
    if (uniform_below(rng, 2) == 0) a = ring.mul(ring.pi(), a);
  return m;
}

Elem cofactor_det(const FiniteField& F, const KMatrix& m) {
  const std::size_t n = m.rows;
  if (n == 0) return 1;
  if (n == 1) return m(0, 0);
  Elem acc = 0;
  for (std::size_t c = 0; c < n; ++c) {
    KMatrix minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0, jj = 0; j < n; ++j)
        if (j != c) minor(i - 1, jj++) = m(i, j);
    Elem term = F.mul(m(0, c), cofactor_det(F, minor));
    if (c % 2 == 1) term = F.neg(term);
    acc = F.add(acc, term);
  }
  return acc;
}

Submodule random_submodule(const RingTower& t, std::size_t rank, std::mt19937_64& rng) {
  const std::size_t ngen = uniform_below(rng, rank + 1);
  return Submodule::from_generators(t, sparse_matrix(t.R(), rank, ngen, rng));
}

}  // namespace

TEST(KLinear, DeterminantAgainstCofactorExpansion) {
  RingTower t(RingSpec::standard(3, 2, 1));
  const FiniteField& F = t.field();
  ASSERT_EQ(F.order(), 9u);
  std::mt19937_64 rng(5);
  EXPECT_EQ(determinant(F, KMatrix::identity(4)), 1u);
  for (int n = 0; n < 300; ++n) {
    KMatrix m(4, 4);
    for (auto& a : m.a) a = static_cast<Elem>(uniform_below(rng, 9));
    if (n % 5 == 0)
      for (std::size_t j = 0; j < 4; ++j) m(3, j) = m(1, j);
    EXPECT_EQ(determinant(F, m), cofactor_det(F, m));
    if (n % 5 == 0) EXPECT_EQ(determinant(F, m), 0u);
  }
}

TEST(KLinear, KernelImageAndPreimage) {
  RingTower t(RingSpec::standard(2, 2, 1));
  const FiniteField& F = t.field();
  std::mt19937_64 rng(9);
  for (int n = 0; n < 100; ++n) {
    KMatrix m(3, 4);
    for (auto& a : m.a) a = static_cast<Elem>(uniform_below(rng, 4));
    const Subspace ker = kernel(F, m);
    const Subspace im = image(F, m);
    EXPECT_EQ(ker.dim() + im.dim(), 4u);
    for (const Vec& v : ker.basis()) EXPECT_TRUE(is_zero(kapply(F, m, v)));
    // Oracle: brute force over all of F4^4.
    std::size_t count = 0;
    Vec v(4, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
      if (pos == 4) {
        if (is_zero(kapply(F, m, v))) {
          ++count;
          EXPECT_TRUE(ker.contains(F, v));
        }
        EXPECT_TRUE(im.contains(F, kapply(F, m, v)));
        return;
      }
      for (Elem c = 0; c < 4; ++c) {
        v[pos] = c;
        rec(pos + 1);
      }
    };
    rec(0);
    std::size_t expect = 1;
    for (std::size_t d = 0; d < ker.dim(); ++d) expect *= 4;
    EXPECT_EQ(count, expect);
    EXPECT_EQ(preimage(F, m, im), Subspace::full(4));
  }
}

TEST(KLinear, QuotientPresentationPivotRule) {
  RingTower t(RingSpec::standard(3, 1, 1));
  const FiniteField& F = t.field();
  const Subspace den = Subspace::span(F, 3, {{1, 1, 0}});
  const auto q = QuotientPresentation::make(F, Subspace::full(3), den);
  ASSERT_EQ(q.dim(), 2u);
  EXPECT_EQ(q.basis()[0], (Vec{0, 1, 0}));
  EXPECT_EQ(q.basis()[1], (Vec{0, 0, 1}));
  const auto c = q.coordinates(F, Vec{1, 2, 2});  // = (1,1,0) + (0,1,2)
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(*c, (Vec{1, 2}));
  EXPECT_THROW(QuotientPresentation::make(F, den, Subspace::full(3)), Error);
  try {
    QuotientPresentation::make(F, den, Subspace::span(F, 3, {{0, 0, 1}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotNested);
  }
}

TEST(KLinear, InducedMapErrorsAndIdentity) {
  RingTower t(RingSpec::standard(3, 1, 1));
  const FiniteField& F = t.field();
  const Subspace a = Subspace::span(F, 3, {{1, 0, 0}, {0, 1, 0}});
  const Subspace b = Subspace::span(F, 3, {{1, 0, 0}});
  const auto q = QuotientPresentation::make(F, a, b);
  EXPECT_EQ(induced_map(F, KMatrix::identity(3), q, q), KMatrix::identity(1));
  KMatrix swap(3, 3);
  swap(0, 2) = swap(2, 0) = swap(1, 1) = 1;
  try {
    induced_map(F, swap, q, q);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WellDefinednessViolation);
  }
}

TEST(ChainMatrix, SmithNormalForm) {
  RingTower t(RingSpec::standard(3, 1, 2));
  const ChainRing& R = t.R();
  {
    const SmithForm s = smith_normal_form(R, Matrix::identity(R, 3));
    EXPECT_EQ(s.U, Matrix::identity(R, 3));
    EXPECT_EQ(s.D, Matrix::identity(R, 3));
    EXPECT_EQ(s.W, Matrix::identity(R, 3));
  }
  {
    const SmithForm s = smith_normal_form(R, Matrix::diagonal(R, {R.pi(), R.one()}));
    EXPECT_EQ(s.D, Matrix::diagonal(R, {R.one(), R.pi()}));
    EXPECT_EQ(s.valuations, (std::vector<int>{0, 1}));
  }
  std::mt19937_64 rng(17);
  for (const ChainRing* ring : {&t.R(), &t.What()}) {
    for (int n = 0; n < 200; ++n) {
      const std::size_t r = 1 + uniform_below(rng, 4), c = 1 + uniform_below(rng, 4);
      const Matrix m = sparse_matrix(*ring, r, c, rng);
      const SmithForm s = smith_normal_form(*ring, m);
      EXPECT_EQ(mat_mul(*ring, mat_mul(*ring, s.U, m), s.W), s.D);
      const auto Ui = mat_inverse(*ring, s.U);
      const auto Wi = mat_inverse(*ring, s.W);
      ASSERT_TRUE(Ui && Wi);
      EXPECT_EQ(mat_mul(*ring, mat_mul(*ring, *Ui, s.D), *Wi), m);
      EXPECT_TRUE(std::is_sorted(s.valuations.begin(), s.valuations.end()));
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
          if (i != j) EXPECT_TRUE(ring->is_zero(s.D.at(i, j)));
          else EXPECT_EQ(s.D.at(i, i), s.valuations[i] >= ring->capacity() ? ring->zero() : ring->pi_power(s.valuations[i]));
        }
    }
  }
}

TEST(ChainMatrix, InverseRoundTrip) {
  RingTower t(RingSpec::standard(2, 2, 3));
  std::mt19937_64 rng(2);
  int invertible = 0;
  for (int n = 0; n < 200; ++n) {
    const Matrix m = random_matrix(t.What(), 3, 3, rng);
    const auto inv = mat_inverse(t.What(), m);
    if (!inv) {
      EXPECT_EQ(determinant(t.field(), restrict_scalars(t, mat_reduce(t, m))), 0u);
      continue;
    }
    ++invertible;
    EXPECT_EQ(mat_mul(t.What(), m, *inv), Matrix::identity(t.What(), 3));
    EXPECT_EQ(mat_mul(t.What(), *inv, m), Matrix::identity(t.What(), 3));
  }
  EXPECT_GT(invertible, 0);
}

TEST(ChainMatrix, RestrictionOfScalarsIsMultiplicative) {
  RingTower t(RingSpec::standard(3, 2, 3));
  const FiniteField& F = t.field();
  std::mt19937_64 rng(4);
  for (int n = 0; n < 100; ++n) {
    const Matrix a = random_matrix(t.R(), 2, 3, rng);
    const Matrix b = random_matrix(t.R(), 3, 2, rng);
    EXPECT_EQ(restrict_scalars(t, mat_mul(t.R(), a, b)), kmul(F, restrict_scalars(t, a), restrict_scalars(t, b)));
    RVec v(3);
    for (auto& x : v) x = t.R().random(rng);
    EXPECT_EQ(to_kvector(t, mat_apply(t.R(), a, v)), kapply(F, restrict_scalars(t, a), to_kvector(t, v)));
    EXPECT_EQ(from_kvector(t, to_kvector(t, v)), v);
  }
}

TEST(Submodules, RestrictScalarsExamples) {
  RingTower t(RingSpec::standard(3, 1, 2));
  EXPECT_EQ(restrict_scalars(Submodule::full(t, 1)).dim(), 2u);
  Matrix g = Matrix::zero(t.R(), 1, 1);
  g.at(0, 0) = t.R().pi();
  EXPECT_EQ(restrict_scalars(Submodule::from_generators(t, g)).dim(), 1u);
  const SemilinearMap pi{Matrix::diagonal(t.R(), {t.R().pi(), t.R().pi()}), 0};
  EXPECT_EQ(kernel(t, pi), Submodule::from_generators(t, mat_scale(t.R(), Matrix::identity(t.R(), 2), t.R().pi())));
  EXPECT_EQ(kernel(t, pi).dim_k(), 2u);
  EXPECT_EQ(preimage(t, pi, Submodule::zero(t, 2)), kernel(t, pi));
  const SemilinearMap zero{Matrix::zero(t.R(), 2, 2), 1};
  EXPECT_EQ(kernel(t, zero), Submodule::full(t, 2));
}

TEST(Submodules, TypeAndNormalForm) {
  RingTower t(RingSpec::standard(3, 1, 2));
  const ChainRing& R = t.R();
  const Submodule s = Submodule::from_generators(t, Matrix::diagonal(R, {R.pi(), R.one()}));
  EXPECT_EQ(s.type(t), (std::vector<int>{0, 1}));
  EXPECT_EQ(Submodule::zero(t, 2).type(t), (std::vector<int>{2, 2}));
  EXPECT_EQ(Submodule::full(t, 3).type(t), (std::vector<int>{0, 0, 0}));
  std::mt19937_64 rng(8);
  for (int n = 0; n < 100; ++n) {
    const Submodule a = random_submodule(t, 3, rng);
    // Same module from a different generating set: add redundant combinations.
    Matrix g = a.generators(t);
    Matrix extra = mat_mul(R, g, random_matrix(R, g.cols, 2, rng));
    Matrix both = Matrix::zero(R, 3, g.cols + 2);
    for (std::size_t r = 0; r < 3; ++r) {
      for (std::size_t c = 0; c < g.cols; ++c) both.at(r, c) = g.at(r, c);
      for (std::size_t c = 0; c < 2; ++c) both.at(r, g.cols + c) = extra.at(r, c);
    }
    const Submodule b = Submodule::from_generators(t, both);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.generators(t), b.generators(t));
    EXPECT_EQ(Submodule::from_generators(t, a.generators(t)), a);
    int dim = 0;
    for (int v : a.type(t)) dim += 2 - v;
    EXPECT_EQ(static_cast<std::size_t>(dim), a.dim_k());
  }
}

TEST(Submodules, InducedPiMapOnFreeRankOne) {
  RingTower t(RingSpec::standard(3, 1, 2));
  const FiniteField& F = t.field();
  const Submodule all = Submodule::full(t, 1);
  const Submodule pi_all = kernel(t, SemilinearMap{Matrix::diagonal(t.R(), {t.R().pi()}), 0});
  const auto src = QuotientPresentation::with_basis(F, all.span(), pi_all.span(), {Vec{1, 0}});
  const auto dst = QuotientPresentation::with_basis(F, pi_all.span(), Subspace::zero(2), {Vec{0, 1}});
  EXPECT_EQ(induced_map(F, pi_power_map(t, 1, 1), src, dst), KMatrix::identity(1));
}

// Enumeration oracle, p = 2, f = 1, e = 2: maps on R^6 (4096 elements),
// sums and intersections in R^3.
TEST(Submodules, EnumerationOracleTinyRing) {
  RingTower t(RingSpec::standard(2, 1, 2));
  const ChainRing& R = t.R();
  const FiniteField& F = t.field();
  const auto domain = all_tuples(R, 6);
  ASSERT_EQ(domain.size(), 4096u);
  std::mt19937_64 rng(21);
  for (int n = 0; n < 20; ++n) {
    const SemilinearMap phi{sparse_matrix(R, 6, 6, rng), 1};
    const Submodule ker = kernel(t, phi);
    const Submodule im = image(t, phi);
    const Submodule T = random_submodule(t, 6, rng);
    const Submodule pre = preimage(t, phi, T);
    std::set<Vec> ker_o, im_o, pre_o;
    for (const auto& x : domain) {
      const auto y = apply(R, phi, x);
      const Vec kx = to_kvector(t, x), ky = to_kvector(t, y);
      if (is_zero(ky)) ker_o.insert(kx);
      im_o.insert(ky);
      if (T.span().contains(F, ky)) pre_o.insert(kx);
    }
    EXPECT_EQ(elements(F, ker.span()), ker_o);
    EXPECT_EQ(elements(F, im.span()), im_o);
    EXPECT_EQ(elements(F, pre.span()), pre_o);
    EXPECT_EQ(ker.dim_k() + im.dim_k(), 12u);
    EXPECT_EQ(preimage(t, phi, im), Submodule::full(t, 6));
    for (const Vec& v : pre.span().basis())
      EXPECT_TRUE(T.span().contains(F, to_kvector(t, apply(R, phi, from_kvector(t, v)))));
  }
  for (int n = 0; n < 40; ++n) {
    const Submodule S = random_submodule(t, 3, rng);
    const Submodule T = random_submodule(t, 3, rng);
    const auto s_el = elements(F, S.span()), t_el = elements(F, T.span());
    std::set<Vec> inter, sums;
    for (const auto& a : s_el) {
      if (t_el.count(a)) inter.insert(a);
      for (const auto& b : t_el) {
        Vec c = a;
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = F.add(c[i], b[i]);
        sums.insert(c);
      }
    }
    EXPECT_EQ(elements(F, intersect(t, S, T).span()), inter);
    EXPECT_EQ(elements(F, sum(t, S, T).span()), sums);
    EXPECT_EQ(S.dim_k() + T.dim_k(), sum(t, S, T).dim_k() + intersect(t, S, T).dim_k());
    EXPECT_EQ(sum(t, S, S), S);
    EXPECT_EQ(intersect(t, S, S), S);
    // The k-span is R-stable, and its size is p^dim.
    std::size_t log_size = 0;
    for (std::size_t sz = s_el.size(); sz > 1; sz /= 2) ++log_size;
    EXPECT_EQ(log_size, S.dim_k());
    for (const auto& a : s_el)
      EXPECT_TRUE(S.span().contains(F, to_kvector(t, mat_apply(R, Matrix::diagonal(R, {R.pi(), R.pi(), R.pi()}),
                                                                  from_kvector(t, a)))));
  }
}

TEST(Submodules, SemilinearKernelOverF4) {
  RingTower t(RingSpec::standard(2, 2, 1));
  const ChainRing& R = t.R();
  const FiniteField& F = t.field();
  const auto domain = all_tuples(R, 3);
  std::mt19937_64 rng(23);
  for (int twist : {-1, 1, 2}) {
    for (int n = 0; n < 20; ++n) {
      Matrix m = random_matrix(R, 3, 3, rng);
      for (std::size_t j = 0; j < 3; ++j) m.at(2, j) = R.add(m.at(0, j), m.at(1, j));
      const SemilinearMap phi{m, twist};
      std::set<Vec> ker_o;
      for (const auto& x : domain)
        if (is_zero(to_kvector(t, apply(R, phi, x)))) ker_o.insert(to_kvector(t, x));
      EXPECT_EQ(elements(F, kernel(t, phi).span()), ker_o);
      const SemilinearMap psi{random_matrix(R, 3, 3, rng), -1};
      const auto comp = compose(R, phi, psi);
      for (int s = 0; s < 10; ++s) {
        const auto& x = domain[uniform_below(rng, domain.size())];
        EXPECT_EQ(apply(R, comp, x), apply(R, phi, apply(R, psi, x)));
      }
    }
  }
}

TEST(Submodules, TwistCommutesWithGenerators) {
  RingTower t(RingSpec::standard(3, 2, 2));
  std::mt19937_64 rng(31);
  for (int n = 0; n < 50; ++n) {
    const Submodule s = random_submodule(t, 3, rng);
    const Submodule tw = twist(t, s, 1);
    EXPECT_EQ(tw, Submodule::from_generators(t, mat_frobenius(t.R(), s.generators(t), 1)));
    EXPECT_EQ(twist(t, tw, -1), s);
    EXPECT_EQ(tw.type(t), s.type(t));
  }
}
