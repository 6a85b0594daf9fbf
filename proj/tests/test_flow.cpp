#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "lyness/flow.hpp"
#include "lyness/map.hpp"
#include "oracles.hpp"

using namespace lyness;

namespace {

const Params<double> fig1{4, 4.0};
const std::vector<double> fig1_x0{1.0, 2.0, 3.0, 4.0};

}  // namespace

TEST(Flow, FigureOneSetupConservesInvariants) {
  const auto tr = integrate_flow(fig1, fig1_x0, 1e-3, 10.0);
  EXPECT_FALSE(tr.boundary_hit);
  EXPECT_EQ(tr.states.size(), 10001u);
  EXPECT_NEAR(tr.times.back(), 10.0, 1e-9);
  EXPECT_LE(tr.drift_of("V1"), 1e-6);
  EXPECT_LE(tr.drift_of("V2"), 1e-6);
  EXPECT_THROW((void)tr.drift_of("V3"), DomainError);
}

TEST(Flow, HalvingStepImprovesDrift) {
  const auto coarse = integrate_flow(fig1, fig1_x0, 1e-3, 10.0);
  const auto fine = integrate_flow(fig1, fig1_x0, 5e-4, 10.0);
  EXPECT_GE(coarse.drift_of("V1") / fine.drift_of("V1"), 8.0);
  EXPECT_GE(coarse.drift_of("V2") / fine.drift_of("V2"), 8.0);
}

TEST(Flow, StepOfOracleRk4MatchesFirstSample) {
  // One classical RK4 step computed here from eval_X directly.
  const double h = 1e-2;
  auto f = [&](const std::vector<double>& x) { return eval_X<double>(fig1, x); };
  auto add = [](std::vector<double> x, double s, const std::vector<double>& v) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += s * v[i];
    return x;
  };
  const auto k1 = f(fig1_x0);
  const auto k2 = f(add(fig1_x0, h / 2, k1));
  const auto k3 = f(add(fig1_x0, h / 2, k2));
  const auto k4 = f(add(fig1_x0, h, k3));
  std::vector<double> expect = fig1_x0;
  for (std::size_t i = 0; i < 4; ++i) expect[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  const auto tr = integrate_flow(fig1, fig1_x0, h, h);
  ASSERT_EQ(tr.states.size(), 2u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(tr.states[1][i], expect[i], 1e-14 * (1 + std::fabs(expect[i])));
}

TEST(Flow, EquilibriaGiveConstantTraces) {
  const auto fp = fixed_point(Params<Rat>{4, oracle::R(4)});
  const auto tr = integrate_flow(fig1, fp.point, 1e-2, 1.0);
  for (const auto& s : tr.states) EXPECT_EQ(s, fp.point);

  const Params<double> k5{5, 1.0};
  const std::vector<double> on_l{3, 7, 3, 7, 3};
  const auto tl = integrate_flow(k5, on_l, 1e-2, 1.0, FlowMethod::rk45);
  for (const auto& s : tl.states) EXPECT_EQ(s, on_l);
  EXPECT_EQ(tl.max_drift(), 0.0);
}

TEST(Flow, AdaptiveMethodTracksFixedStep) {
  const Params<double> p{5, 1.0};
  const std::vector<double> x0{1, 2, 3, 4, 5};
  const auto a = integrate_flow(p, x0, 1e-5, 0.05, FlowMethod::rk4);
  const auto b = integrate_flow(p, x0, 1e-3, 0.05, FlowMethod::rk45);
  ASSERT_EQ(b.states.size(), 51u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(a.states.back()[i], b.states.back()[i], 1e-8 * (1 + a.states.back()[i]));
  EXPECT_LE(b.drift_of("V3"), 1e-8);
  EXPECT_EQ(b.method, FlowMethod::rk45);
  EXPECT_STREQ(name_of(b.method), "rk45-adaptive");
}

TEST(Flow, BoundaryTruncates) {
  // Near the boundary the field is large and a fixed RK4 step overshoots.
  const Params<double> p{3, 0.0};
  const std::vector<double> x0{5.0, 1.0, 0.01};
  const auto tr = integrate_flow(p, x0, 1e-3, 50.0);
  EXPECT_TRUE(tr.boundary_hit);
  EXPECT_LT(tr.states.size(), 50001u);
  EXPECT_EQ(tr.times.size(), tr.states.size());
  for (const auto& s : tr.states)
    for (double v : s) EXPECT_GT(v, 0.0);

  const auto adaptive = integrate_flow(p, x0, 1e-3, 50.0, FlowMethod::rk45);
  EXPECT_FALSE(adaptive.boundary_hit);
  EXPECT_EQ(adaptive.states.size(), 50001u);
}

TEST(Flow, Errors) {
  EXPECT_THROW(integrate_flow(fig1, fig1_x0, 0.0, 1.0), DomainError);
  EXPECT_THROW(integrate_flow(fig1, fig1_x0, 1e-3, -1.0), DomainError);
  EXPECT_THROW(integrate_flow(fig1, std::vector<double>{1, 2, 0, 4}, 1e-3, 1.0), DomainError);
  EXPECT_THROW(integrate_flow(Params<double>{2, 1.0}, std::vector<double>{1, 2}, 1e-3, 1.0), DomainError);
}

TEST(Transport, FigureOneReportIsEmitted) {
  const auto r = transport_diagnostic(fig1, fig1_x0, 2.0, 20);
  EXPECT_EQ(r.distances.size(), 20u);
  EXPECT_GE(r.max_distance, r.mean_distance);
  EXPECT_GT(r.curve_scale, 0.0);
}

TEST(Transport, FixedPointHasZeroDistances) {
  const auto fp = fixed_point(Params<Rat>{4, oracle::R(4)});
  const auto r = transport_diagnostic(fig1, fp.point, 1.0, 5);
  for (double d : r.distances) EXPECT_EQ(d, 0.0);
  EXPECT_THROW(transport_diagnostic(fig1, fig1_x0, 1.0, 0), DomainError);
}
