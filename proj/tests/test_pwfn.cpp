#include <gtest/gtest.h>

#include "dtx/gen.hpp"
#include "oracles.hpp"

using namespace dtx;

namespace {

PiecewiseMonotone step_open_half() {
  return PiecewiseMonotone::bounded(0, 1, {{0, 0, 0, 0}, {Rat(1, 2), 0, 0, 1}, {1, 1, 1, 1}});
}

PiecewiseMonotone jump_half() {
  return PiecewiseMonotone::reals(1, 1, {{Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(3, 2)}});
}

std::vector<Rat> grid(long lo, long hi, long den) {
  std::vector<Rat> g;
  for (long k = lo; k <= hi; ++k) g.emplace_back(k, den);
  return g;
}

}  // namespace

TEST(Rat, ParsesAndPrintsCanonically) {
  EXPECT_EQ(Rat::parse("6/4"), Rat(3, 2));
  EXPECT_EQ(Rat::parse("-2"), Rat(-2));
  EXPECT_EQ(Rat(6, -4).str(), "-3/2");
  EXPECT_EQ(Rat(4, 2).str(), "2");
  EXPECT_THROW(Rat::parse("1/0"), ParseError);
  EXPECT_THROW(Rat::parse("0.5"), ParseError);
  EXPECT_THROW(Rat(1) / Rat(0), DomainError);
}

TEST(Rat, ExtendedOrdering) {
  EXPECT_LT(ExtendedRat::neg_inf(), ExtendedRat(Rat(-1000)));
  EXPECT_LT(ExtendedRat(Rat(1000)), ExtendedRat::pos_inf());
  EXPECT_EQ(ExtendedRat::neg_inf().str(), "-inf");
  EXPECT_THROW(ExtendedRat::pos_inf().value(), DomainError);
}

TEST(Eval3, IdentityOnUnitInterval) {
  auto f = PiecewiseMonotone::identity_on(0, 1);
  EXPECT_EQ(eval3(f, Rat(1, 2)), (Triple{Rat(1, 2), Rat(1, 2), Rat(1, 2)}));
}

TEST(Eval3, IndicatorOfHalfOpenInterval) {
  EXPECT_EQ(eval3(step_open_half(), Rat(1, 2)), (Triple{0, 0, 1}));
}

TEST(Eval3, ReadsStoredTriple) {
  auto f = PiecewiseMonotone::reals(0, 0, {{0, 0, Rat(1, 4), Rat(1, 2)}, {1, 1, 1, 1}});
  EXPECT_EQ(eval3(f, 0), (Triple{0, Rat(1, 4), Rat(1, 2)}));
}

TEST(Eval3, EndpointsFallBackToValueAndOutsideThrows) {
  auto f = step_open_half();
  EXPECT_EQ(eval3(f, 0), (Triple{0, 0, 0}));
  EXPECT_EQ(eval3(f, 1), (Triple{1, 1, 1}));
  EXPECT_THROW(eval3(f, Rat(3, 2)), DomainError);
  EXPECT_THROW(eval3(f, -1), DomainError);
}

TEST(Eval3, AgreesWithScanOracleAndOneSidedLimits) {
  for (std::uint64_t s = 0; s < 40; ++s) {
    auto u = gen_utility(s, UtilityClass::left_continuous, 4).fn();
    for (const auto& x : grid(-16, 16, 4)) {
      Triple t = eval3(u, x);
      auto g = [&](const Rat& y) { return oracle::value(u, y); };
      EXPECT_EQ(t.at, oracle::value(u, x));
      EXPECT_EQ(t.right, oracle::right_limit(g, x));
      EXPECT_EQ(t.left, oracle::left_limit(g, x));
      EXPECT_LE(t.left, t.at);
      EXPECT_LE(t.at, t.right);
    }
  }
}

TEST(RightInverse, Examples) {
  EXPECT_EQ(right_inverse(PiecewiseMonotone::identity(), 3), ExtendedRat(Rat(3)));
  EXPECT_EQ(right_inverse(jump_half(), 1), ExtendedRat(Rat(1, 2)));
  auto zero = PiecewiseMonotone::bounded(0, 1, {{0, 0, 0, 0}, {1, 0, 0, 0}});
  EXPECT_EQ(right_inverse(zero, -1), ExtendedRat::neg_inf());
}

TEST(RightInverse, JumpExampleMatchesGridEnumeration) {
  // sup of {y on a fine grid : f(y) <= 1} is the jump abscissa.
  Rat best(-100);
  for (const auto& y : grid(-400, 400, 100))
    if (oracle::value(jump_half(), y) <= 1 && y > best) best = y;
  EXPECT_EQ(best, Rat(1, 2));
}

TEST(RightInverse, GaloisPropertyAndScanOracle) {
  for (std::uint64_t s = 0; s < 40; ++s) {
    auto u = gen_utility(s, UtilityClass::left_continuous, 4).fn();
    for (const auto& x : grid(-20, 20, 4)) {
      ExtendedRat r = right_inverse(u, x);
      auto o = oracle::sup_sublevel(u, x);
      if (o.neg_inf) {
        EXPECT_EQ(r, ExtendedRat::neg_inf());
      } else if (o.pos_inf) {
        EXPECT_EQ(r, ExtendedRat::pos_inf());
      } else {
        ASSERT_TRUE(r.is_finite());
        EXPECT_EQ(r.value(), o.value) << "seed " << s << " x " << x;
      }
      // Left-continuous functions have closed sublevel sets, so the Galois
      // equivalence holds exactly.
      for (const auto& y : grid(-20, 20, 4))
        EXPECT_EQ(oracle::value(u, y) <= x, ExtendedRat(y) <= r) << "seed " << s << " x " << x << " y " << y;
    }
  }
}

TEST(Compose, IdentityLaws) {
  auto g = gen_distortion(3, DistortionClass::any, 4).fn();
  EXPECT_EQ(compose(PiecewiseMonotone::identity_on(0, 1), g), g);
  EXPECT_EQ(compose(g, PiecewiseMonotone::identity_on(0, 1)), g);
  auto f = PiecewiseMonotone::bounded_through({{0, 0}, {1, 2}});
  EXPECT_EQ(compose(f, PiecewiseMonotone::identity_on(0, 1)), f);
}

TEST(Compose, IndicatorAfterIdentityKeepsOneSidedLimits) {
  auto h = compose(step_open_half(), PiecewiseMonotone::identity_on(0, 1));
  EXPECT_EQ(h, step_open_half());
  // Oracle: pointwise on a grid plus extrapolated limits at 1/2.
  auto g = [&](const Rat& x) { return oracle::value(step_open_half(), x); };
  EXPECT_EQ(oracle::left_limit(g, Rat(1, 2)), 0);
  EXPECT_EQ(g(Rat(1, 2)), 0);
  EXPECT_EQ(oracle::right_limit(g, Rat(1, 2)), 1);
  for (const auto& x : grid(0, 48, 48)) EXPECT_EQ(eval(h, x), g(x));
}

TEST(Compose, RangeMustNest) {
  auto wide = PiecewiseMonotone::bounded_through({{0, 0}, {1, 2}});
  EXPECT_THROW(compose(PiecewiseMonotone::identity_on(0, 1), wide), DomainError);
}

TEST(Compose, MatchesPointwiseOracleWithLimits) {
  for (std::uint64_t s = 0; s < 60; ++s) {
    auto f = gen_utility(derive_seed(s, 1), UtilityClass::left_continuous, 3).fn();
    auto g = gen_utility(derive_seed(s, 2), UtilityClass::continuous, 3).fn();
    auto h = compose(f, g);
    auto fg = [&](const Rat& x) { return oracle::value(f, oracle::value(g, x)); };
    for (const auto& x : grid(-24, 24, 8)) {
      Triple t = eval3(h, x);
      EXPECT_EQ(t.at, fg(x));
      EXPECT_EQ(t.left, oracle::left_limit(fg, x));
      EXPECT_EQ(t.right, oracle::right_limit(fg, x));
    }
  }
}

TEST(Compose, Associative) {
  for (std::uint64_t s = 0; s < 60; ++s) {
    auto f = gen_distortion(derive_seed(s, 1), DistortionClass::any, 3).fn();
    auto g = gen_distortion(derive_seed(s, 2), DistortionClass::any, 3).fn();
    auto h = gen_distortion(derive_seed(s, 3), DistortionClass::right_continuous, 3).fn();
    EXPECT_EQ(compose(f, compose(g, h)), compose(compose(f, g), h)) << "seed " << s;
    auto a = gen_utility(derive_seed(s, 4), UtilityClass::left_continuous, 3).fn();
    auto b = gen_utility(derive_seed(s, 5), UtilityClass::continuous, 3).fn();
    auto c = gen_utility(derive_seed(s, 6), UtilityClass::left_continuous, 3).fn();
    EXPECT_EQ(compose(a, compose(b, c)), compose(compose(a, b), c)) << "seed " << s;
  }
}

TEST(StrictInverse, AffineOnReals) {
  auto inv = strict_inverse(PiecewiseMonotone::affine(2, 3));
  EXPECT_EQ(inv, PiecewiseMonotone::reals(Rat(1, 2), Rat(1, 2), {{3, 0, 0, 0}}));
  EXPECT_EQ(eval(inv, 7), 2);
}

TEST(StrictInverse, PiecewiseOnUnitInterval) {
  auto f = PiecewiseMonotone::bounded_through({{0, 0}, {Rat(1, 2), Rat(1, 4)}, {1, 1}});
  auto inv = strict_inverse(f);
  EXPECT_EQ(inv, PiecewiseMonotone::bounded_through({{0, 0}, {Rat(1, 4), Rat(1, 2)}, {1, 1}}));
  EXPECT_EQ(compose(f, inv), PiecewiseMonotone::identity_on(0, 1));
  EXPECT_EQ(compose(inv, f), PiecewiseMonotone::identity_on(0, 1));
}

TEST(StrictInverse, RejectsJumpsAndFlats) {
  EXPECT_THROW(strict_inverse(step_open_half()), NotInvertibleError);
  EXPECT_THROW(strict_inverse(PiecewiseMonotone::reals(0, 1, {{0, 0, 0, 0}})), NotInvertibleError);
  EXPECT_THROW(strict_inverse(jump_half()), NotInvertibleError);
}

TEST(StrictInverse, RoundTripsOnSeededInvertibles) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    auto u = gen_utility(s, UtilityClass::invertible, 4).fn();
    auto inv = strict_inverse(u);
    EXPECT_EQ(compose(u, inv), PiecewiseMonotone::identity());
    EXPECT_EQ(compose(inv, u), PiecewiseMonotone::identity());
    auto d = gen_distortion(s, DistortionClass::strict_continuous, 4).fn();
    EXPECT_EQ(compose(d, strict_inverse(d)), PiecewiseMonotone::identity_on(0, 1));
  }
}

TEST(Classify, Identity) {
  auto c = classify(PiecewiseMonotone::identity_on(0, 1));
  EXPECT_TRUE(c.increasing && c.strictly_increasing && c.continuous && c.left_continuous && c.right_continuous &&
              c.surjective);
}

TEST(Classify, IndicatorIsLeftButNotRightContinuous) {
  auto c = classify(step_open_half());
  EXPECT_TRUE(c.increasing);
  EXPECT_TRUE(c.left_continuous);
  EXPECT_FALSE(c.continuous);
  EXPECT_FALSE(c.right_continuous);
  EXPECT_FALSE(c.strictly_increasing);
}

TEST(Classify, JumpUtility) {
  auto c = classify(jump_half());
  EXPECT_TRUE(c.increasing);
  EXPECT_TRUE(c.left_continuous);
  EXPECT_FALSE(c.continuous);
}

TEST(Classify, SurjectivityOnReals) {
  EXPECT_TRUE(classify(PiecewiseMonotone::affine(2, 3)).surjective);
  EXPECT_FALSE(classify(PiecewiseMonotone::reals(0, 1, {{0, 0, 0, 0}})).surjective);
}

TEST(Canonical, DropsRedundantPointsAndIsIdempotent) {
  auto f = PiecewiseMonotone::bounded_through({{0, 0}, {Rat(1, 3), Rat(1, 3)}, {Rat(1, 2), Rat(1, 2)}, {1, 1}});
  EXPECT_EQ(f.points().size(), 2u);
  EXPECT_EQ(f, PiecewiseMonotone::identity_on(0, 1));
  for (std::uint64_t s = 0; s < 30; ++s) {
    auto u = gen_utility(s, UtilityClass::left_continuous, 5).fn();
    auto again = PiecewiseMonotone::reals(u.slope_lo(), u.slope_hi(), u.points());
    EXPECT_EQ(again, u);
  }
}

TEST(Canonical, AffineOnRealsIsAnchoredAtZero) {
  auto f = PiecewiseMonotone::reals(2, 2, {{5, 13, 13, 13}});
  EXPECT_EQ(f, PiecewiseMonotone::affine(2, 3));
}

TEST(Validation, RejectsMalformedFunctions) {
  EXPECT_THROW(PiecewiseMonotone::reals(1, 1, {{0, 1, 0, 1}}), ClassError);
  EXPECT_THROW(PiecewiseMonotone::reals(1, 1, {{0, 0, 0, 1}, {1, 0, 0, 0}}), ClassError);
  EXPECT_THROW(PiecewiseMonotone::reals(-1, 1, {{0, 0, 0, 0}}), ClassError);
  EXPECT_THROW(PiecewiseMonotone::reals(1, 1, {{1, 0, 0, 0}, {0, 1, 1, 1}}), DomainError);
  EXPECT_THROW(PiecewiseMonotone::bounded(0, 1, {{0, 0, 0, 0}}), DomainError);
  EXPECT_THROW(PiecewiseMonotone::reals(1, 1, {}), DomainError);
}
