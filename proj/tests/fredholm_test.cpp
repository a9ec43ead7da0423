#include "lattri/fredholm.hpp"
#include "lattri/laurent.hpp"
#include "lattri/series.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace lattri;
using C = Cplx<double>;

namespace {

const char* kLimit =
    "4.239369481548025671877625742045235772100695711251795499830801"
    "687833358238276728987837054831763341276708855553395893005289";

C cis(double tau) { return circle_point(tau); }

LaurentPoly lp(std::initializer_list<std::pair<const int, BigCount>> v) { return LaurentPoly(v); }

}  // namespace

TEST(P, Values) {
  const C t = cis(0.17), u = cis(0.61);
  const C p0 = eval_P(0.0, t, u);
  const C want = u * u * t * t;
  EXPECT_NEAR((p0 - want).abs(), 0.0, 1e-15);
  EXPECT_NEAR(eval_P(17.0 / 35, C(1), C(1)).re, 0.021831, 1e-6);
  for (double x : {0.1, 0.3, 0.45}) EXPECT_NEAR((eval_P(x, t, u) - eval_P(x, u, t)).abs(), 0.0, 1e-14);
}

TEST(P, SubstitutionIdentity) {
  // P(x, t, x) = x^6 (x - t)
  for (double x : {0.01, 0.2, 0.4}) {
    const C t = cis(0.3);
    const C want = (C(x) - t) * std::pow(x, 6);
    EXPECT_NEAR((eval_P(x, t, C(x)) - want).abs(), 0.0, 1e-15);
  }
}

TEST(UnitDiskRoots, TwoSimpleRootsWithSmallResidual) {
  const auto r = unit_disk_roots(0.1, C(1));
  for (const auto& u : r) {
    EXPECT_LT(u.abs(), 1.0);
    EXPECT_LT(eval_P(0.1, C(1), u).abs(), 1e-12);
  }
  EXPECT_GT((r[0] - r[1]).abs(), 1e-6);
}

TEST(UnitDiskRoots, NearRootAtSmallX) {
  const double x = 0.01;
  const auto r = unit_disk_roots(x, C(1));
  const double d = std::min((r[0] - C(x)).abs(), (r[1] - C(x)).abs());
  EXPECT_LT(d, 10 * std::pow(x, 5));
}

TEST(UnitDiskRoots, HighPrecisionResidual) {
  PrecisionScope p(50);
  const HighReal x("0.3");
  const auto t = circle_point(HighReal("0.2"));
  for (const auto& u : unit_disk_roots(x, t)) EXPECT_LT(eval_P(x, t, u).abs(), HighReal("1e-42"));
}

TEST(UnitDiskRoots, CountOnGrid) {
  int bad = 0;
  for (int i = 1; i <= 100; ++i)
    for (int j = 0; j < 100; ++j) {
      try {
        unit_disk_roots(0.486 * i / 100.0, cis(j / 100.0));
      } catch (const RootCountError&) {
        ++bad;
      }
    }
  EXPECT_EQ(bad, 0);
}

TEST(PhiSeries, LowOrderCoefficients) {
  const auto phi = Phi_series(6);
  EXPECT_TRUE(phi[0].empty());
  EXPECT_TRUE(phi[1].empty());
  EXPECT_EQ(phi[2], lp({{-2, 1}}));
  EXPECT_EQ(phi[3], lp({{-3, 1}, {0, 1}}));
  // the x^5 coefficient (the source's display labels it x^6)
  EXPECT_EQ(phi[5], lp({{-5, 1}, {-2, 3}, {1, 3}}));
}

TEST(PhiSeries, ResidueFormulaAgrees) {
  PrecisionScope p(30);
  const auto phi = Phi_series(40);
  const HighReal x("0.2");
  const auto t = circle_point(HighReal("0.3"));
  EXPECT_LT((eval_Phi(x, t) - phi.eval(x, t)).abs(), HighReal("1e-10"));
  // and for a few more points of the common domain
  for (double xv : {0.05, 0.1, 0.15})
    for (double tau : {0.0, 0.125, 0.5}) {
      const auto tt = circle_point(HighReal(tau));
      EXPECT_LT((eval_Phi(HighReal(xv), tt) - phi.eval(HighReal(xv), tt)).abs(), HighReal("1e-12"));
    }
}

// Both sides of the Cauchy integral: residues vs the trapezoidal rule on |u| = 1.
TEST(PhiSeries, ContourQuadratureAgrees) {
  for (double x : {0.2, 0.4, 0.48}) {
    const C t = cis(0.37);
    const int m = 2000;
    C s(0);
    for (int k = 0; k < m; ++k) {
      const C u = cis(static_cast<double>(k) / m);
      s += u * u * u * u / eval_P(x, t, u);
    }
    s = s * (1.0 / m);
    EXPECT_LT((s - eval_Phi(x, t)).abs(), 1e-8) << x;
  }
}

TEST(PsiSeries, Coefficients) {
  const auto psi = Psi_series(7);
  EXPECT_EQ(psi[0], lp({{0, 1}}));
  for (int k = 1; k <= 3; ++k) EXPECT_TRUE(psi[k].empty()) << k;
  EXPECT_EQ(psi[4], lp({{-1, -1}}));
  EXPECT_EQ(psi[5], lp({{1, -1}}));
  // through x^7, from Psi_k = -t Phi_{k-2} + Phi_{k-3}
  const auto phi = Phi_series(5);
  for (int k = 6; k <= 7; ++k) {
    LaurentPoly want;
    for (const auto& [e, v] : phi[k - 2]) want[e + 1] -= v;
    for (const auto& [e, v] : phi[k - 3]) want[e] += v;
    for (auto it = want.begin(); it != want.end();) it = it->second == 0 ? want.erase(it) : std::next(it);
    EXPECT_EQ(psi[k], want) << k;
  }
}

TEST(PsiSeries, ResidueFormulaAgrees) {
  PrecisionScope p(30);
  const auto psi = Psi_series(40);
  for (double xv : {0.05, 0.1, 0.2})
    for (double tau : {0.0, 0.3, 0.71}) {
      const auto t = circle_point(HighReal(tau));
      EXPECT_LT((eval_Psi(HighReal(xv), t) - psi.eval(HighReal(xv), t)).abs(), HighReal("1e-10"));
    }
  EXPECT_EQ(eval_Psi(0.0, cis(0.4)).re, 1.0);
}

TEST(Psi, CertificationValue) { EXPECT_NEAR(eval_Psi(17.0 / 35, C(1)).re, 0.44768, 5e-5); }

TEST(Kernel, ZeroAtOriginAndPeriodic) {
  const auto k0 = kernel_and_rhs(0.0, 0.3, 0.8);
  EXPECT_EQ(k0.K.abs(), 0.0);
  const auto a = kernel_and_rhs(0.4, 0.3, 0.8);
  const auto b = kernel_and_rhs(0.4, 1.3, 0.8);
  const auto c = kernel_and_rhs(0.4, 0.3, -0.2);
  EXPECT_LT((a.K - b.K).abs(), 1e-12);
  EXPECT_LT((a.K - c.K).abs(), 1e-12);
  EXPECT_LT((a.f - b.f).abs(), 1e-12);
}

TEST(Kernel, MatrixMatchesPointwise) {
  const auto s = nystrom_assemble(0.45, 16);
  for (int j : {0, 3, 11})
    for (int k : {0, 5, 15}) {
      const auto kv = kernel_and_rhs(0.45, j / 16.0, k / 16.0);
      EXPECT_LT((s.K(j, k) - kv.K * (1.0 / 16)).abs(), 1e-13);
      EXPECT_LT((s.rhs[j] - kv.f).abs(), 1e-13);
    }
}

TEST(Kernel, N2AtRightEnd) { EXPECT_NEAR(N2(17.0 / 35, 200), 0.88525, 1e-3); }

TEST(Nystrom, ZeroX) {
  const auto s = nystrom_solve(0.0, 32);
  for (int j = 0; j < 32; ++j) EXPECT_LT((s.phi[j] - s.nodes[j]).abs(), 1e-15);
  EXPECT_NEAR(s.H().re, 0.0, 1e-17);
}

TEST(Nystrom, SmallXMatchesSeries) {
  const double x = 0.05;
  const auto s = nystrom_solve(x, 64);
  double dev = 0;
  for (int j = 0; j < 64; ++j) {
    const C t = s.nodes[j];
    const C g = t + C(x) + C(x * x) / t + (C(1) / (t * t) + t) * (x * x * x);
    dev = std::max(dev, (s.phi[j] - g).abs());
  }
  EXPECT_LT(dev, 1e-4);
}

TEST(Nystrom, ResidualAndConjugateSymmetry) {
  PrecisionScope p(30);
  const auto s = nystrom_solve(HighReal("0.47"), 100);
  EXPECT_LT(s.residual, HighReal("1e-25"));
  for (int j = 1; j < 100; ++j) EXPECT_LT((s.phi[100 - j] - s.phi[j].conj()).abs(), HighReal("1e-25"));
  EXPECT_LT(abs(s.H().im), HighReal("1e-25"));
  const auto d = nystrom_solve(0.47, 100);
  EXPECT_LT(d.residual, 1e-12);
}

TEST(H, AgreesWithCountingSeries) {
  // h_n from exact trapezoid counts, enough terms that truncation is negligible at x^3 = 0.027
  const auto h = H_from_Hstar(hstar_from_trapezoids(16));
  PrecisionScope p(30);
  for (double xv : {0.2, 0.3}) {
    const HighReal x(xv);
    const HighReal y = x * x * x;
    EXPECT_LT(abs(H_eval(x, 100) - h.eval(y)), HighReal("1e-9")) << xv << " " << (H_eval(x, 100) - h.eval(y)).str(5);
  }
  // the four published terms alone leave a gap of about 712 y^5
  const PowerSeries four{0, 1, 2, 14, 86};
  EXPECT_NEAR(H_eval(0.3, 100), static_cast<double>(four.eval(HighReal("0.027"))), 2e-5);
}

TEST(H, MonotoneOnBracket) {
  double prev = -1;
  for (int i = 0; i <= 50; ++i) {
    const double x = (17.0 / 35) * i / 50;
    const double h = H_eval(x, 100);
    EXPECT_GT(h, prev) << x;
    prev = h;
  }
  EXPECT_EQ(H_eval(0.0, 16), 0.0);
}

TEST(H, ResidualAtPublishedRoot) {
  PrecisionScope p(24);
  const HighReal x0 = 1 / sqrt(HighReal(kLimit));
  const auto s = nystrom_solve(x0, 100);
  EXPECT_LT(abs(s.H().re - 1), HighReal("1e-8"));
  // refining the grid shrinks the residual geometrically
  PrecisionScope q(36);
  const HighReal x1 = 1 / sqrt(HighReal(kLimit));
  EXPECT_LT(abs(H_eval(x1, 200) - 1), HighReal("1e-20"));
}

TEST(SolveX0, HundredNodes) {
  PrecisionContext ctx;
  ctx.digits = 24;
  ctx.nodes = 100;
  const auto r = solve_x0_c3(ctx);
  EXPECT_GT(r.x0, HighReal(16) / 33);
  EXPECT_LT(r.x0, HighReal(17) / 35);
  EXPECT_NEAR(static_cast<double>(r.c3), 2.0838497, 5e-8);
  EXPECT_LT(abs(r.x0 - 1 / sqrt(HighReal(kLimit))), HighReal("1e-10"));
  EXPECT_LT(abs(r.limit - HighReal(kLimit)), HighReal("1e-9"));
  EXPECT_LT(abs(r.residual), HighReal("1e-18"));
}
