#include <gtest/gtest.h>

#include "dtx/lab.hpp"
#include "oracles.hpp"

using namespace dtx;

namespace {

Distortion step_half() { return Distortion::step_open(Rat(1, 2)); }
Distortion min2t() { return Distortion(PiecewiseMonotone::bounded_through({{0, 0}, {Rat(1, 2), 1}, {1, 1}})); }
Utility max0() { return Utility(PiecewiseMonotone::reals(0, 1, {{0, 0, 0, 0}})); }
Utility jump_half() {
  return Utility(PiecewiseMonotone::reals(1, 1, {{Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(3, 2)}}));
}

std::vector<Rat> grid(long lo, long hi, long den) {
  std::vector<Rat> g;
  for (long k = lo; k <= hi; ++k) g.emplace_back(k, den);
  return g;
}

oracle::Mixture as_mixture(const Cdf& F) {
  oracle::Mixture m;
  for (const auto& c : decompose(F)) {
    if (const auto* a = std::get_if<Atom>(&c)) m.atoms.push_back(*a);
    else m.pieces.push_back(std::get<Uniform>(c));
  }
  return m;
}

}  // namespace

TEST(DistortionType, ClassChecks) {
  EXPECT_THROW(Distortion(PiecewiseMonotone::identity()), ClassError);
  EXPECT_THROW(Distortion(PiecewiseMonotone::identity_on(0, 2)), ClassError);
  EXPECT_THROW(Distortion(PiecewiseMonotone::bounded_through({{0, Rat(1, 4)}, {1, 1}})), ClassError);
  EXPECT_TRUE(step_half().cls().left_continuous);
  EXPECT_FALSE(step_half().right_continuous());
  EXPECT_TRUE(Distortion::step_closed(Rat(1, 2)).right_continuous());
  EXPECT_THROW(Distortion::step_open(1), LevelError);
}

TEST(UtilityType, ClassChecks) {
  EXPECT_THROW(Utility(PiecewiseMonotone::identity_on(0, 1)), ClassError);
  EXPECT_TRUE(Utility::affine(2, 3).invertible());
  EXPECT_FALSE(max0().invertible());
  EXPECT_TRUE(jump_half().left_continuous());
  EXPECT_FALSE(jump_half().continuous());
}

TEST(ApplyDistortion, Examples) {
  for (const auto& F : default_corpus().items) EXPECT_EQ(apply_distortion(Distortion::identity(), F.cdf), F.cdf);
  EXPECT_EQ(apply_distortion(step_half(), bernoulli(Rat(1, 2))), point_mass(1));
  Cdf F = bernoulli(Rat(1, 2));
  EXPECT_EQ(apply_distortion(step_half(), F)(0), 0);
  EXPECT_EQ(apply_distortion(Distortion::step_closed(Rat(1, 2)), F)(0), 1);
}

TEST(ApplyDistortion, MatchesRightLimitOracle) {
  Corpus c = seeded_corpus(1, 20);
  for (std::uint64_t s = 0; s < 80; ++s) {
    auto d = gen_distortion(s, DistortionClass::any, 4);
    const auto& item = c.items[s % c.size()];
    Cdf G = apply_distortion(d, item.cdf);
    auto m = as_mixture(item.cdf);
    auto dF = [&](const Rat& x) { return oracle::value(d.fn(), m.cdf(x)); };
    for (const auto& x : grid(-36, 36, 12)) EXPECT_EQ(G(x), oracle::right_limit(dF, x)) << "seed " << s;
    EXPECT_GE(G.lo(), item.cdf.lo());
    EXPECT_LE(G.hi(), item.cdf.hi());
  }
}

TEST(ApplyUtility, Examples) {
  for (const auto& F : default_corpus().items) EXPECT_EQ(apply_utility(Utility::identity(), F.cdf), F.cdf);
  EXPECT_EQ(apply_utility(Utility::affine(2, 3), bernoulli(Rat(1, 2))),
            make({Atom{3, Rat(1, 2)}, Atom{5, Rat(1, 2)}}));
  EXPECT_EQ(apply_utility(max0(), uniform(-1, 1)), make({Atom{0, Rat(1, 2)}, Uniform{0, 1, Rat(1, 2)}}));
}

TEST(ApplyUtility, MatchesPushforwardOracle) {
  // P(u(X) <= x) = P(X <= s) or P(X < s) with s = sup{y : u(y) <= x}.
  Corpus c = seeded_corpus(2, 20);
  for (std::uint64_t s = 0; s < 80; ++s) {
    auto u = gen_utility(s, UtilityClass::left_continuous, 4);
    const auto& item = c.items[s % c.size()];
    Cdf G = apply_utility(u, item.cdf);
    auto m = as_mixture(item.cdf);
    for (const auto& x : grid(-40, 40, 8)) {
      auto sup = oracle::sup_sublevel(u.fn(), x);
      Rat expect;
      if (sup.pos_inf) expect = 1;
      else if (!sup.neg_inf) {
        bool closed = oracle::value(u.fn(), sup.value) <= x;
        expect = closed ? m.cdf(sup.value) : oracle::left_limit([&](const Rat& y) { return m.cdf(y); }, sup.value);
      }
      EXPECT_EQ(G(x), expect) << "seed " << s << " x " << x;
    }
  }
}

TEST(ApplyUtility, JumpLeavesGapEmpty) {
  Cdf G = apply_utility(jump_half(), uniform(0, 1));
  EXPECT_EQ(G, make({Uniform{0, Rat(1, 2), Rat(1, 2)}, Uniform{Rat(3, 2), 2, Rat(1, 2)}}));
}

TEST(ApplyWord, Examples) {
  EXPECT_EQ(apply_word({}, uniform(0, 1)), uniform(0, 1));
  TransformWord ids{{Distort{Distortion::identity()}, Push{Utility::identity()}}};
  EXPECT_EQ(apply_word(ids, bernoulli(Rat(1, 3))), bernoulli(Rat(1, 3)));
  TransformWord w{{Distort{step_half()}, Push{Utility::affine(2, 0)}}};
  EXPECT_EQ(apply_word(w, bernoulli(Rat(1, 2))), point_mass(2));
}

TEST(ComposeUtilities, Examples) {
  auto u2 = Utility::affine(3, -1);
  EXPECT_EQ(compose_utilities(Utility::identity(), u2), u2);
  EXPECT_EQ(compose_utilities(Utility::affine(2, 0), Utility::affine(1, 1)), Utility::affine(2, 2));
  auto shifted = compose_utilities(max0(), Utility::affine(1, -1));
  EXPECT_EQ(shifted, Utility(PiecewiseMonotone::reals(0, 1, {{1, 0, 0, 0}})));
  for (const auto& F : default_corpus().items)
    EXPECT_EQ(apply_utility(shifted, F.cdf), apply_utility(max0(), apply_utility(Utility::affine(1, -1), F.cdf)));
}

TEST(ComposeDistortions, Examples) {
  EXPECT_EQ(compose_distortions(Distortion::identity(), step_half()), step_half());
  EXPECT_EQ(compose_distortions(Distortion::identity(), Distortion::identity()), Distortion::identity());
  Distortion dd = compose_distortions(min2t(), step_half());
  EXPECT_EQ(dd, step_half());
  for (const auto& F : seeded_corpus(3, 10).items)
    EXPECT_EQ(apply_distortion(dd, F.cdf), apply_distortion(min2t(), apply_distortion(step_half(), F.cdf)));
}

TEST(ComposeDistortions, RefusesWhenNeitherSideIsRightContinuous) {
  EXPECT_THROW(compose_distortions(step_half(), Distortion::step_open(Rat(1, 3))), ClassError);
}

TEST(ComposeDistortions, CollapseLawWithOneRightContinuousSide) {
  Corpus c = seeded_corpus(4, 10);
  for (std::uint64_t s = 0; s < 60; ++s) {
    auto any = gen_distortion(derive_seed(s, 1), DistortionClass::any, 4);
    auto rc = gen_distortion(derive_seed(s, 2), DistortionClass::right_continuous, 4);
    for (const auto& [outer, inner] : {std::pair{rc, any}, std::pair{any, rc}}) {
      Distortion dd = compose_distortions(outer, inner);
      for (const auto& F : c.items)
        EXPECT_EQ(apply_distortion(dd, F.cdf), apply_distortion(outer, apply_distortion(inner, F.cdf)));
    }
  }
}

TEST(NormalForm, Examples) {
  auto u = Utility::affine(2, 1);
  auto d = gen_distortion(9, DistortionClass::any, 3);
  EXPECT_EQ(normal_form({{Push{u}}}), (RduForm{Distortion::identity(), u}));
  auto nf = normal_form({{Push{u}, Distort{d}}});
  EXPECT_EQ(nf, (RduForm{d, u}));
  for (const auto& F : default_corpus().items)
    EXPECT_EQ(apply_word(nf.word(), F.cdf), apply_word({{Push{u}, Distort{d}}}, F.cdf));

  auto d1 = Distortion::step_closed(Rat(1, 3));
  auto d2 = min2t();
  auto nf3 = normal_form({{Distort{d1}, Push{max0()}, Distort{d2}}});
  EXPECT_EQ(nf3.d, Distortion(compose(d1.fn(), d2.fn())));
  EXPECT_EQ(nf3.u, max0());
  for (const auto& F : default_corpus().items)
    EXPECT_EQ(apply_word(nf3.word(), F.cdf), apply_word({{Distort{d1}, Push{max0()}, Distort{d2}}}, F.cdf));
}

TEST(NormalForm, RejectsInadmissibleWords) {
  EXPECT_THROW(normal_form({{Push{jump_half()}}}), NormalFormError);
  EXPECT_THROW(normal_form({{Distort{min2t()}, Distort{step_half()}}}), NormalFormError);
  EXPECT_NO_THROW(normal_form({{Distort{step_half()}, Distort{min2t()}}}));
}

TEST(Conjugacy, Utilities) {
  auto u2 = Utility::affine(3, -2);
  EXPECT_EQ(conjugate_utility(Utility::identity(), u2), u2);
  EXPECT_EQ(conjugate_utility(Utility::affine(2, 0), Utility::affine(1, 1)), Utility::affine(1, 2));
  auto u3 = conjugate_utility(Utility::affine(2, 0), max0());
  EXPECT_EQ(u3, max0());
  EXPECT_EQ(compose(u3.fn(), Utility::affine(2, 0).fn()), compose(Utility::affine(2, 0).fn(), max0().fn()));
  EXPECT_THROW(conjugate_utility(max0(), u2), NotInvertibleError);
}

TEST(Conjugacy, Distortions) {
  auto d1 = gen_distortion(4, DistortionClass::right_continuous, 3);
  EXPECT_EQ(conjugate_distortion(Distortion::identity(), d1), d1);
  Distortion d(PiecewiseMonotone::bounded_through({{0, 0}, {Rat(1, 2), Rat(1, 4)}, {1, 1}}));
  auto d2 = conjugate_distortion(d, step_half());
  EXPECT_EQ(d2, Distortion::step_open(Rat(1, 4)));
  EXPECT_EQ(compose(d2.fn(), d.fn()), compose(d.fn(), step_half().fn()));
  EXPECT_EQ(conjugate_distortion(Distortion::identity(), min2t()), min2t());
  EXPECT_THROW(conjugate_distortion(step_half(), min2t()), NotInvertibleError);
}

TEST(Functionals, Examples) {
  EXPECT_EQ(evaluate_functional(EU{Utility::identity()}, uniform(0, 1)), Rat(1, 2));
  EXPECT_EQ(evaluate_functional(DU{Distortion::identity()}, bernoulli(Rat(1, 2))), Rat(1, 2));
  EXPECT_EQ(evaluate_functional(DU{step_half()}, uniform(0, 1)), Rat(1, 2));
  EXPECT_EQ(evaluate_functional(RDU{step_half(), Utility::affine(2, 0)}, bernoulli(Rat(1, 2))), 2);
}

TEST(Functionals, DistortedMeanMatchesRiemannSumOfCdf) {
  // mean = -int_{-inf}^0 G + int_0^inf (1 - G); G is affine between grid
  // points chosen to include all breakpoints, so midpoint sums are exact.
  Cdf F = uniform(0, 1);
  Cdf G = apply_distortion(step_half(), F);
  Rat sum;
  const int n = 96;
  for (int i = 0; i < n; ++i) sum += (1 - G(Rat(2 * i + 1, 2 * n))) / n;
  EXPECT_EQ(sum, evaluate_functional(DU{step_half()}, F));
}

TEST(RiskMeasures, Examples) {
  EXPECT_EQ(risk_measure(VaR{Rat(1, 2)}, uniform(0, 1)), Rat(1, 2));
  EXPECT_EQ(risk_measure(ES{Rat(1, 2)}, uniform(0, 1)), Rat(3, 4));
  for (const auto& F : default_corpus().items) EXPECT_EQ(risk_measure(ES{1}, F.cdf), mean(F.cdf));
  EXPECT_THROW(risk_measure(VaR{1}, uniform(0, 1)), LevelError);
  EXPECT_THROW(risk_measure(ES{0}, uniform(0, 1)), LevelError);
}

TEST(RiskMeasures, VaRIsRightQuantile) {
  for (const auto& item : seeded_corpus(6, 20).items)
    for (const auto& p : grid(1, 11, 12)) EXPECT_EQ(risk_measure(VaR{p}, item.cdf), right_quantile(item.cdf, p));
}

TEST(RiskMeasures, ESMatchesQuantileIntegral) {
  // Canonical corpus quantiles only kink at levels in 1/12 Z, and so does the
  // ES weight for p in 1/12 Z, so 240 midpoint cells integrate exactly.
  for (const auto& item : default_corpus().items) {
    auto m = as_mixture(item.cdf);
    for (const auto& p : grid(1, 12, 12)) {
      auto w = [&](const Rat& s) { return s > 1 - p ? 1 / p : Rat(0); };
      EXPECT_EQ(risk_measure(ES{p}, item.cdf), oracle::quantile_integral(m, w, 240)) << item.name << " " << p;
    }
  }
}
