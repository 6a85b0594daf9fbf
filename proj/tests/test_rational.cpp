#include <gtest/gtest.h>

#include <cmath>
#include <span>
#include <vector>

#include "lyness/dual.hpp"
#include "lyness/gradient.hpp"
#include "lyness/invariants.hpp"
#include "lyness/matrix.hpp"
#include "lyness/random.hpp"
#include "lyness/rational.hpp"
#include "lyness/scalar.hpp"
#include "oracles.hpp"

using namespace lyness;
using oracle::R;

TEST(Rat, CanonicalForm) {
  const Rat r(mpz_class(6), mpz_class(-4));
  EXPECT_EQ(r.numerator(), -3);
  EXPECT_EQ(r.denominator(), 2);
  EXPECT_EQ(r.str(), "-3/2");
  EXPECT_EQ(Rat(5).str(), "5");
  EXPECT_THROW(Rat(mpz_class(1), mpz_class(0)), DomainError);
}

TEST(Rat, Arithmetic) {
  EXPECT_EQ(R(1, 3) + R(1, 6), R(1, 2));
  EXPECT_EQ(R(1, 3) - R(1, 2), R(-1, 6));
  EXPECT_EQ(R(2, 3) * R(9, 4), R(3, 2));
  EXPECT_EQ(R(2, 3) / R(4, 9), R(3, 2));
  EXPECT_EQ(-R(2, 3), R(-2, 3));
  EXPECT_THROW(R(1) / R(0), DomainError);
  EXPECT_LT(R(1, 3), R(1, 2));
  EXPECT_GT(R(-1, 3), R(-1, 2));
  EXPECT_EQ(abs(R(-7, 2)), R(7, 2));
  EXPECT_DOUBLE_EQ(R(1, 4).to_double(), 0.25);
}

TEST(Rat, NoRoundingOnLongChains) {
  Rat sum(0);
  for (long n = 1; n <= 200; ++n) sum += R(1, n * (n + 1));
  EXPECT_EQ(sum, R(200, 201));
}

TEST(ParseRational, Examples) {
  EXPECT_EQ(parse_rational("7/3"), R(7, 3));
  EXPECT_EQ(parse_rational("0.5"), R(1, 2));
  EXPECT_EQ(parse_rational("0.25"), R(1, 4));
  EXPECT_THROW(parse_rational("4/0"), ParseError);
}

TEST(ParseRational, Forms) {
  EXPECT_EQ(parse_rational("12"), R(12));
  EXPECT_EQ(parse_rational("-3"), R(-3));
  EXPECT_EQ(parse_rational(" 10/4 "), R(5, 2));
  EXPECT_EQ(parse_rational("-1.125"), R(-9, 8));
  EXPECT_EQ(parse_rational(".5"), R(1, 2));
  EXPECT_EQ(parse_rational("123456789012345678901234567890"),
            Rat(mpz_class("123456789012345678901234567890"), mpz_class(1)));
}

TEST(ParseRational, Malformed) {
  for (const char* bad : {"", "abc", "1/", "/2", "1/-2", "1.2.3", "1e5", "--1", "3/2/1", "."}) {
    EXPECT_THROW(parse_rational(bad), ParseError) << bad;
  }
}

TEST(Dual, ProductAndQuotientRules) {
  const DualRat x(R(2), R(1));
  const DualRat y(R(3), R(0));
  const DualRat p = x * y;
  EXPECT_EQ(p.value, R(6));
  EXPECT_EQ(p.deriv, R(3));
  const DualRat q = DualRat(R(1)) / x;
  EXPECT_EQ(q.value, R(1, 2));
  EXPECT_EQ(q.deriv, R(-1, 4));
  EXPECT_THROW(DualRat(R(1)) / DualRat(R(0), R(1)), DomainError);
}

TEST(ScalarCast, RoundTrips) {
  EXPECT_EQ(scalar_cast<double>(R(3, 4)), 0.75);
  EXPECT_EQ(scalar_cast<Rat>(0.75), R(3, 4));
  const auto d = scalar_cast<Dual<double>>(R(1, 2));
  EXPECT_EQ(d.value, 0.5);
  EXPECT_EQ(d.deriv, 0.0);
  EXPECT_TRUE(is_positive(R(1, 9)));
  EXPECT_EQ(sign_of(R(-2)), -1);
}

TEST(ExactRank, Examples) {
  EXPECT_EQ(exact_rank(RatMatrix::from_rows({{R(1), R(0)}, {R(0), R(1)}})), 2u);
  EXPECT_EQ(exact_rank(RatMatrix::from_rows({{R(1), R(2)}, {R(1), R(2)}})), 1u);
  EXPECT_EQ(exact_rank(RatMatrix(3, 5)), 0u);
}

TEST(ExactRank, DetectsDependenceThatFloatsBlur) {
  // Third row = first + 1/3 second, with entries that are not exact in binary.
  const auto m = RatMatrix::from_rows({{R(1, 3), R(2, 7), R(5, 11)},
                                       {R(1, 10), R(3, 10), R(7, 10)},
                                       {R(1, 3) + R(1, 30), R(2, 7) + R(1, 10), R(5, 11) + R(7, 30)}});
  EXPECT_EQ(exact_rank(m), 2u);
  EXPECT_TRUE(exact_determinant(m).is_zero());
}

TEST(ExactRank, AgreesWithFloatOracleOnRandomMatrices) {
  PointSampler s(7, {1});
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t rows = static_cast<std::size_t>(s.integer(1, 5));
    const std::size_t cols = static_cast<std::size_t>(s.integer(1, 5));
    RatMatrix m(rows, cols);
    std::vector<std::vector<double>> f(rows, std::vector<double>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        // Small integers with forced duplicates so deficient ranks show up.
        const long v = s.integer(-2, 2);
        m(i, j) = R(v);
        f[i][j] = static_cast<double>(v);
      }
    }
    if (rows > 1 && s.integer(0, 1) == 1) {
      for (std::size_t j = 0; j < cols; ++j) {
        m(rows - 1, j) = m(0, j) * R(3);
        f[rows - 1][j] = f[0][j] * 3;
      }
    }
    EXPECT_EQ(exact_rank(m), oracle::float_rank(f)) << "trial " << trial;
  }
}

TEST(ExactDeterminant, AgreesWithCofactorOracle) {
  PointSampler s(11, {2});
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = static_cast<std::size_t>(s.integer(1, 5));
    std::vector<std::vector<Rat>> rows(n, std::vector<Rat>(n));
    for (auto& r : rows)
      for (auto& v : r) v = s.integer(0, 2) == 0 ? R(0) : s.rational() * R(s.integer(0, 1) ? 1 : -1);
    EXPECT_EQ(exact_determinant(RatMatrix::from_rows(rows)), oracle::cofactor_det(rows)) << "trial " << trial;
  }
}

TEST(Matrix, ProductAndApply) {
  const auto a = RatMatrix::from_rows({{R(1), R(2)}, {R(3), R(4)}});
  const auto b = RatMatrix::from_rows({{R(0), R(1)}, {R(1), R(0)}});
  EXPECT_EQ(a * b, RatMatrix::from_rows({{R(2), R(1)}, {R(4), R(3)}}));
  const std::vector<Rat> v{R(1), R(-1)};
  EXPECT_EQ(a.apply(v), (std::vector<Rat>{R(-1), R(-1)}));
}

TEST(Gradient, Examples) {
  const std::vector<Rat> x{R(2), R(3)};
  const auto g = gradient<Rat>([](std::span<const DualRat> v) { return v[0] * v[1]; }, x);
  EXPECT_EQ(g, (std::vector<Rat>{R(3), R(2)}));

  const std::vector<Rat> y{R(2)};
  const auto h = gradient<Rat>([](std::span<const DualRat> v) { return DualRat(R(1)) / v[0]; }, y);
  EXPECT_EQ(h, (std::vector<Rat>{R(-1, 4)}));
}

TEST(Gradient, PoleIsDomainError) {
  const std::vector<Rat> x{R(0)};
  EXPECT_THROW(gradient<Rat>([](std::span<const DualRat> v) { return DualRat(R(1)) / v[0]; }, x), DomainError);
}

TEST(Gradient, V1AtUnitPointMatchesFiniteDifferences) {
  const Params<Rat> p{3, R(1)};
  const auto g = invariant_gradient(Invariant::V1, p, oracle::pt({1, 1, 1}));
  const Params<double> pd{3, 1.0};
  const auto fd = oracle::finite_gradient([&](const std::vector<double>& v) { return eval_V1<double>(pd, v); },
                                          {1.0, 1.0, 1.0});
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(g[i].to_double(), fd[i], 1e-6 * std::max(1.0, std::fabs(fd[i])));
  }
}

TEST(Gradient, PropertyAgreesWithFiniteDifferences) {
  PointSampler s(42, {3});
  for (int trial = 0; trial < 50; ++trial) {
    const int k = trial % 2 == 0 ? 3 : 5;
    const double a = s.uniform(0.0, 5.0);
    const Params<double> p{k, a};
    const auto x = s.uniform_point(k, 0.5, 10.0);
    for (Invariant which : {Invariant::V1, Invariant::V2, Invariant::V3, Invariant::W}) {
      const auto g = invariant_gradient<double>(which, p, x);
      const auto fd = oracle::finite_gradient(
          [&](const std::vector<double>& v) { return evaluate<double>(which, p, v); }, x);
      double norm = 0.0;
      for (double v : fd) norm = std::max(norm, std::fabs(v));
      for (std::size_t i = 0; i < g.size(); ++i) {
        EXPECT_LE(std::fabs(g[i] - fd[i]), 1e-5 * norm) << name_of(which) << " trial " << trial << " i " << i;
      }
    }
  }
}

TEST(PointSampler, Reproducible) {
  PointSampler a(5, {1, 2});
  PointSampler b(5, {1, 2});
  PointSampler c(5, {1, 3});
  const auto pa = a.rational_point(6);
  EXPECT_EQ(pa, b.rational_point(6));
  EXPECT_NE(pa, c.rational_point(6));
  for (const auto& v : pa) {
    EXPECT_GT(v, R(0));
    EXPECT_LE(v, R(50));
  }
}
