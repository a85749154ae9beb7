#include <gtest/gtest.h>

#include "hasse/error.hpp"
#include "hasse/filtration.hpp"
#include "hasse/generator.hpp"

using namespace hasse;

namespace {

std::vector<std::size_t> dims(const Flag& fl) {
  std::vector<std::size_t> out;
  for (const auto& s : fl.levels) out.push_back(s.dim_k());
  return out;
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

TEST(Filtration, SplitRamifiedDimensions) {
  const DieudonneDatum& D = named_instance("ram-split").datum;
  EXPECT_EQ(dims(extended_hodge_flag(D, 0)), (std::vector<std::size_t>{0, 1, 2, 3, 4}));
  EXPECT_EQ(dims(hodge_aux_flag(D, 0)), (std::vector<std::size_t>{2, 3}));
  EXPECT_EQ(dims(conjugate_flag(D, 0)), (std::vector<std::size_t>{0, 1, 2, 3, 4}));
  EXPECT_EQ(dims(pi_torsion_flag(D, 0)), (std::vector<std::size_t>{0, 2, 4}));
  EXPECT_TRUE(graded_isomorphisms_hold(D, 0));
}

TEST(Filtration, ConjugateMiddleLevelIsConjugate) {
  for (const auto& cfg : {config(3, 2, 2, 3, 1, Strategy::charp_flag, 5, 9), config(2, 1, 3, 3, 2, Strategy::charp_flag, 5, 9)})
    for (const Instance& inst : generate(cfg)) {
      const DieudonneDatum& D = inst.datum;
      const int e = D.params.e();
      for (int i = 0; i < D.f(); ++i) {
        const Flag c = conjugate_flag(D, i);
        EXPECT_EQ(c.levels[e], conjugate(D, i));
        const Flag x = extended_hodge_flag(D, i);
        EXPECT_EQ(x.levels[e], hodge(D, i));
        EXPECT_EQ(x.levels[2 * e], Submodule::full(*D.tower, D.params.h1));
      }
    }
}

// Level dimensions follow the closed formulas, and pi maps each extended
// level into the previous one.
TEST(Filtration, DimensionFormulasOnGeneratedData) {
  for (auto s : {Strategy::diagonal_lift, Strategy::charp_flag})
    for (const auto& cfg : {config(2, 1, 1, 3, 1, s, 5, 3), config(3, 1, 2, 3, 2, s, 5, 3),
                            config(2, 2, 3, 2, 1, s, 4, 3), config(5, 1, 2, 2, 1, s, 4, 3)})
      for (const Instance& inst : generate(cfg)) {
        const DieudonneDatum& D = inst.datum;
        const std::size_t e = static_cast<std::size_t>(D.params.e());
        const std::size_t h1 = static_cast<std::size_t>(D.params.h1);
        const std::size_t d1 = static_cast<std::size_t>(D.params.d1);
        for (int i = 0; i < D.f(); ++i) {
          const auto xd = dims(extended_hodge_flag(D, i));
          const auto ad = dims(hodge_aux_flag(D, i));
          const auto cd = dims(conjugate_flag(D, i));
          for (std::size_t j = 0; j <= e; ++j) {
            EXPECT_EQ(xd[j], j * d1);
            EXPECT_EQ(xd[e + j], j * h1 + (e - j) * d1);
            EXPECT_EQ(cd[j], (h1 - d1) * j);
            EXPECT_EQ(cd[e + j], e * (h1 - d1) + j * d1);
          }
          for (std::size_t j = 0; j < e; ++j) EXPECT_EQ(ad[j], h1 + j * d1);
          EXPECT_TRUE(graded_isomorphisms_hold(D, i));
        }
      }
}

TEST(Filtration, UnramifiedDegeneration) {
  const DieudonneDatum& D = named_instance("unram-f2").datum;
  for (int i = 0; i < D.f(); ++i) {
    const Flag x = extended_hodge_flag(D, i);
    ASSERT_EQ(x.levels.size(), 3u);
    EXPECT_EQ(x.levels[1], hodge(D, i));
    const Flag c = conjugate_flag(D, i);
    EXPECT_EQ(c.levels[1], conjugate(D, i));
    EXPECT_EQ(dims(hodge_aux_flag(D, i)), std::vector<std::size_t>{static_cast<std::size_t>(D.params.h1)});
  }
}

TEST(Filtration, PiDivisibilityOnLifts) {
  for (const auto& cfg : {config(3, 1, 2, 2, 1, Strategy::diagonal_lift, 6, 21),
                          config(2, 2, 3, 3, 1, Strategy::diagonal_lift, 4, 22),
                          config(5, 1, 3, 3, 2, Strategy::diagonal_lift, 4, 23)})
    for (const Instance& inst : generate(cfg)) {
      ASSERT_TRUE(inst.lift.has_value());
      for (int i = 0; i < inst.datum.f(); ++i)
        for (int j = 1; j < inst.datum.params.e(); ++j) {
          const PiDivisibilityReport rep = check_pi_divisibility(*inst.lift, i, j, 5);
          EXPECT_TRUE(rep.applicable);
          EXPECT_TRUE(rep.submodule_equal) << rep.detail;
          EXPECT_TRUE(rep.lemma_holds) << rep.detail;
          EXPECT_GE(rep.points_checked, 20);
        }
    }
  for (const char* id : {"ram-split", "ram-ss"}) {
    const Instance inst = named_instance(id);
    EXPECT_TRUE(check_pi_divisibility(*inst.lift, 0, 1).ok()) << id;
  }
}

TEST(Filtration, NotApplicableWithoutLift) {
  const PiDivisibilityReport rep = pi_divisibility_not_applicable();
  EXPECT_FALSE(rep.applicable);
  EXPECT_TRUE(rep.ok());
}

TEST(Filtration, BrokenFlagThrows) {
  DieudonneDatum D = named_instance("ram-split").datum;
  D.pr_flag[0][1] = D.pr_flag[0][2];
  EXPECT_THROW(extended_hodge_flag(D, 0), Error);
}
