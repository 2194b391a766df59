#include <gtest/gtest.h>

#include <numbers>

#include "fzero/zerofinder.hpp"

using namespace fzero;
using std::numbers::pi;

namespace {

ZeroPoint zero_at(cplx h) {
  ZeroPoint z;
  z.h = h;
  return z;
}

double theta_distance(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 2 * pi);
  return std::min(d, 2 * pi - d);
}

}  // namespace

TEST(ZeroFinder, ChainZerosStayInFerromagneticSide) {
  const AnalyticGapEvaluator ev(10);
  const auto zs = find_zeros_on_line(ev, 0.5, 0.0, 1.5, 300);
  ASSERT_FALSE(zs.empty());
  for (const auto& z : zs) {
    EXPECT_LT(z.h.real(), 1.1);
    EXPECT_EQ(z.h.imag(), 0.5);
    // Bisection stops early once the two sectors are numerically tied.
    if (!z.degenerate) {
      EXPECT_LE(z.bracket_width, 1e-10);
    }
    EXPECT_NE(z.left, z.right);
  }
  EXPECT_TRUE(find_zeros_on_line(ev, 0.5, 1.2, 1.5, 300).empty());
}

TEST(ZeroFinder, ConstantSignGivesNoZeros) {
  const FunctionGapEvaluator ev(LatticeSpec::chain(4), [](cplx h) { return GapSample{cplx{-2.0 - h.real(), 0}, 0.0}; });
  EXPECT_TRUE(find_zeros_on_line(ev, 0.3, -1.0, 1.0, 64).empty());
}

TEST(ZeroFinder, SyntheticZeroIsBisected) {
  const FunctionGapEvaluator ev(LatticeSpec::chain(4), [](cplx h) { return GapSample{h - 0.3141, 0.0}; });
  const auto zs = find_zeros_on_line(ev, 0.2, 0.0, 1.0, 16, 1e-12);
  ASSERT_EQ(zs.size(), 1u);
  EXPECT_NEAR(zs[0].h.real(), 0.3141, 1e-12);
  EXPECT_EQ(zs[0].left, Parity::Even);
  EXPECT_EQ(zs[0].right, Parity::Odd);
}

TEST(ZeroFinder, ArgumentChecks) {
  const AnalyticGapEvaluator ev(10);
  EXPECT_THROW(find_zeros_on_line(ev, 0.5, 0.0, 1.5, 15), ConfigError);
  EXPECT_THROW(find_zeros_on_line(ev, 0.5, 0.0, 1.5, 100, 0.0), ConfigError);
  EXPECT_THROW(find_zeros_on_circle(ev, 0.5, 79), ConfigError);
  EXPECT_THROW(find_zeros_on_circle(ev, -0.5, 200), ConfigError);
  EXPECT_THROW(AnalyticGapEvaluator(9), ConfigError);
}

TEST(ZeroFinder, CircleCounts) {
  for (int L : {10, 32})
    for (double g : {0.5, 1.5}) {
      const AnalyticGapEvaluator ev(L);
      EXPECT_EQ(find_zeros_on_circle(ev, g, 32 * L).size(), static_cast<std::size_t>(2 * L)) << L << " " << g;
    }
}

TEST(ZeroFinder, CircleGapAboveCriticalField) {
  const AnalyticGapEvaluator ev(10);
  for (const auto& z : find_zeros_on_circle(ev, 1.5, 320)) {
    EXPECT_GE(theta_distance(*z.theta, 0.0), 0.5);
    EXPECT_NEAR(std::abs(z.h), 1.5, 1e-12);
    EXPECT_EQ(z.source, ZeroSource::Circle);
  }
}

TEST(ZeroFinder, SmallCircleMatchesBruteForce) {
  const AnalyticGapEvaluator ev(4);
  const auto coarse = find_zeros_on_circle(ev, 0.3, 32);
  EXPECT_EQ(coarse.size(), 8u);
  auto ctx = ev.context();
  int changes = 0;
  const int n = 100000;
  Parity first = (*ctx)(std::polar(0.3, 0.0)).ground(), prev = first;
  for (int i = 1; i < n; ++i) {
    const Parity p = (*ctx)(std::polar(0.3, 2 * pi * i / n)).ground();
    changes += p != prev;
    prev = p;
  }
  changes += prev != first;
  EXPECT_EQ(changes, 8);
}

TEST(ZeroFinder, CircleZeroFamilies) {
  const AnalyticGapEvaluator ev(10);
  const auto zs = find_zeros_on_circle(ev, 0.5, 320, 1e-12);
  auto has = [&](double t) {
    return std::any_of(zs.begin(), zs.end(), [&](const ZeroPoint& z) { return theta_distance(*z.theta, t) < 1e-8; });
  };
  for (const auto& z : zs) {
    EXPECT_TRUE(has(-*z.theta));
    EXPECT_TRUE(has(pi - *z.theta));
  }
}

TEST(ZeroFinder, EdgeAngles) {
  EXPECT_NEAR(*analytic_edge_angle(1.0, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(*analytic_edge_angle(1.5, 1.0), 0.841069, 1e-6);
  EXPECT_NEAR(*analytic_edge_angle(3.5, 3.044), 0.516173, 1e-6);
  EXPECT_FALSE(analytic_edge_angle(0.5, 1.0));
}

TEST(ZeroFinder, FidelityEdgeChain) {
  const AnalyticGapEvaluator ev(32);
  const auto rep = fidelity_edge(ev, 1.5, 1.0, 32 * 32);
  EXPECT_TRUE(rep.gap_present);
  ASSERT_TRUE(rep.theta_edge_numeric);
  EXPECT_GT(*rep.theta_edge_numeric, 0.0);
  EXPECT_LT(*rep.theta_edge_numeric, pi / 2);
  EXPECT_NEAR(*rep.theta_edge_numeric, 0.841069, 0.05);

  const auto below = fidelity_edge(ev, 0.5, 1.0, 32 * 32);
  EXPECT_FALSE(below.theta_edge_analytic);
  EXPECT_FALSE(below.gap_present);
  EXPECT_EQ(below.zeros.size(), 64u);
}

TEST(ZeroFinder, SelectHL) {
  EXPECT_EQ(select_hL({zero_at({0.9, 0.1}), zero_at({0.8, 0.05})}).h, cplx(0.9, 0.1));
  EXPECT_EQ(select_hL({zero_at({0.9, 0.1}), zero_at({0.9, 0.05})}).h, cplx(0.9, 0.05));
  EXPECT_EQ(select_hL({zero_at({1.5, -0.1}), zero_at({0.9, 0.05})}).h, cplx(0.9, 0.05));
  EXPECT_THROW(select_hL({}), ConfigError);
  EXPECT_THROW(select_hL({zero_at({1.0, -0.2})}), ConfigError);
}

TEST(ZeroFinder, ChainHLFrozen) {
  const auto r = locate_hL(AnalyticGapEvaluator(10), ScanBox::chain_default());
  EXPECT_TRUE(r.refined);
  EXPECT_FALSE(r.at_box_edge);
  EXPECT_NEAR(r.hL.h.real(), 1.0517251, 1e-6);
  EXPECT_NEAR(r.hL.h.imag(), 0.3937121, 1e-6);
  EXPECT_GE(r.hL.h.real(), r.grid_hL.h.real());
}

TEST(ZeroFinder, ChainHLDriftsTowardRealAxis) {
  double prev_im = INFINITY, prev_re = INFINITY;
  for (int L = 10; L <= 32; L += 2) {
    const auto r = locate_hL(AnalyticGapEvaluator(L), ScanBox::chain_default());
    EXPECT_LT(r.hL.h.imag(), prev_im) << L;
    EXPECT_LT(r.hL.h.real(), prev_re) << L;
    prev_im = r.hL.h.imag();
    prev_re = r.hL.h.real();
  }
}

TEST(ZeroFinder, LabelScanFindsNoMissedSwitch) {
  const AnalyticGapEvaluator ev(12);
  auto ctx = ev.context();
  for (double im : {0.1, 0.3, 0.5}) {
    const int steps = 300;
    const auto zs = find_zeros_on_line(ev, im, 0.0, 1.5, steps);
    int changes = 0;
    Parity prev = (*ctx)(cplx{0.0, im}).ground();
    for (int i = 1; i <= steps; ++i) {
      const Parity p = (*ctx)(cplx{1.5 * i / steps, im}).ground();
      changes += p != prev;
      prev = p;
    }
    EXPECT_EQ(static_cast<int>(zs.size()), changes);
  }
}

TEST(ZeroFinder, RefinementCertificate) {
  const AnalyticGapEvaluator ev(10);
  auto ctx = ev.context();
  const int steps = 300;
  const double dx = 1.5 / steps;
  for (const auto& z : find_zeros_on_line(ev, 0.4, 0.0, 1.5, steps)) {
    if (z.degenerate) continue;
    const double i0 = std::floor(z.h.real() / dx);
    const double s_mid = std::abs((*ctx)(z.h).gap());
    EXPECT_LE(s_mid, std::abs((*ctx)(cplx{i0 * dx, 0.4}).gap()));
    EXPECT_LE(s_mid, std::abs((*ctx)(cplx{(i0 + 1) * dx, 0.4}).gap()));
  }
}

TEST(ZeroFinder, ConjugateLinesMirror) {
  const AnalyticGapEvaluator ev(10);
  for (double im : {0.15, 0.45}) {
    const auto up = find_zeros_on_line(ev, im, 0.0, 1.5, 300);
    const auto down = find_zeros_on_line(ev, -im, 0.0, 1.5, 300);
    ASSERT_EQ(up.size(), down.size());
    for (std::size_t i = 0; i < up.size(); ++i) EXPECT_NEAR(up[i].h.real(), down[i].h.real(), 1e-9);
  }
  const ExactGapEvaluator sq(LatticeSpec::square(2));
  const auto up = find_zeros_on_line(sq, 0.7, 0.0, 3.5, 140, 1e-9);
  const auto down = find_zeros_on_line(sq, -0.7, 0.0, 3.5, 140, 1e-9);
  ASSERT_EQ(up.size(), down.size());
  for (std::size_t i = 0; i < up.size(); ++i) EXPECT_NEAR(up[i].h.real(), down[i].h.real(), 1e-8);
}

TEST(ZeroFinder, ExactChainMatchesFreeFermions) {
  const AnalyticGapEvaluator an(10);
  const ExactGapEvaluator ed(LatticeSpec::chain(10));
  const auto a = find_zeros_on_line(an, 0.5, 0.0, 1.5, 150, 1e-10);
  const auto b = find_zeros_on_line(ed, 0.5, 0.0, 1.5, 150, 1e-10);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i].h.real(), b[i].h.real(), 1e-8);
}

TEST(ZeroFinder, ThreeByThreeLineMatchesReferenceScan) {
  // Zeros of the 3x3 lattice on Im h = 0.5 from an independent numpy
  // label scan with spacing 0.025.
  const std::vector<double> ref{0.188, 0.413, 0.838, 2.138};
  const ExactGapEvaluator ev(LatticeSpec::square(3));
  const auto zs = find_zeros_on_line(ev, 0.5, 0.0, 3.5, 140, 1e-8);
  ASSERT_EQ(zs.size(), ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(zs[i].h.real(), ref[i], 0.02);
}

TEST(ZeroFinder, ScanBoxValidation) {
  ScanBox b = ScanBox::chain_default();
  b.re_steps = 10;
  EXPECT_THROW(b.validate(), ConfigError);
  b = ScanBox::chain_default();
  b.re_hi = -1;
  EXPECT_THROW(b.validate(), ConfigError);
}
