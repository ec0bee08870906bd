#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dsim/config.hpp"
#include "dsim/observables.hpp"
#include "dsim/random.hpp"
#include "dsim/rmat.hpp"

using namespace dsim;

namespace {
const cplx I(0.0, 1.0);
}

TEST(RMatrix, WorkedExamples) {
  const double pi = std::numbers::pi;
  MatC e12 = MatC::unit(2, 0, 1);
  MatC q1 = MatC::diag(std::vector<cplx>{I, -I});
  EXPECT_LT(apply_R_Q(q1, e12).norm_fro(), 1e-15);
  MatC q2 = MatC::diag(std::vector<cplx>{std::polar(1.0, pi / 4), std::polar(1.0, -pi / 4)});
  EXPECT_LT(dist_fro(apply_R_Q(q2, e12), e12 * (-0.5 * I)), 1e-15);
  const double a = 0.7;
  MatC lam = MatC::diag(std::vector<cplx>{I * a, -I * a});
  EXPECT_LT(dist_fro(apply_r_lambda(lam, e12), e12 * (-I / (2 * a))), 1e-15);
  MatC gam = MatC::diag(std::vector<double>{std::exp(1.0), std::exp(-1.0)});
  EXPECT_LT(dist_fro(apply_rho_Gamma(gam, e12), e12 * cplx(1.0 / std::sinh(2.0))), 1e-15);
  MatC x = MatC::unit(2, 0, 1) - MatC::unit(2, 1, 0);
  EXPECT_LT(dist_fro(apply_R_i(x), (MatC::unit(2, 0, 1) + MatC::unit(2, 1, 0)) * I), 1e-15);
}

TEST(RMatrix, KillCartanAndAntisymmetry) {
  Rng rng(1);
  for (std::size_t n : {2, 3, 4}) {
    MatC q = random_regular_torus(n, Variant::su, rng);
    MatC lam = random_regular_cartan(n, Variant::su, rng);
    MatC gam = random_regular_b0(n, Variant::su, rng);
    MatC d = random_regular_cartan(n, Variant::su, rng);
    EXPECT_EQ(apply_R_Q(q, d).norm_fro(), 0.0);
    EXPECT_EQ(apply_r_lambda(lam, d).norm_fro(), 0.0);
    EXPECT_EQ(apply_rho_Gamma(gam, d).norm_fro(), 0.0);
    EXPECT_EQ(apply_R_Gamma2(gam, d).norm_fro(), 0.0);
    EXPECT_EQ(apply_R_i(d).norm_fro(), 0.0);
    for (int t = 0; t < 20; ++t) {
      MatC x = random_G(n, Variant::su, rng), y = random_G(n, Variant::su, rng);
      EXPECT_NEAR(form_G(apply_R_Q(q, x), y), -form_G(x, apply_R_Q(q, y)), 1e-12);
      EXPECT_NEAR(form_G(apply_r_lambda(lam, x), y), -form_G(x, apply_r_lambda(lam, y)), 1e-12);
      EXPECT_NEAR(form_G(apply_R_i(x), y), -form_G(x, apply_R_i(y)), 1e-12);
      EXPECT_TRUE(in_subspace(apply_R_Q(q, x), Subspace::G, Variant::su, 1e-12));
      MatC u = random_ginibre(n, rng);
      EXPECT_LT(dist_fro(apply_R_Gamma2(gam, u.adjoint()), -apply_R_Gamma2(gam, u).adjoint()), 1e-12);
      // R(Q) evaluated at Q = Gamma^2 is the coth form.
      EXPECT_LT(dist_fro(apply_R_Q(gam * gam, u), apply_R_Gamma2(gam, u)), 1e-12);
      MatC bu = strict_upper(u);
      EXPECT_TRUE(in_subspace(apply_rho_Gamma(gam, bu), Subspace::Bgt, Variant::su, 1e-14));
    }
  }
}

TEST(RMatrix, RiRelatesDerivatives) {
  // D f = i nabla f + R^i(nabla f) for functions on G.
  Rng rng(2);
  PhasePoint p = random_point(Space::heisenberg_GB, 3, Variant::su, rng);
  auto f = make_trace_observable(Space::heisenberg_GB, WordSpec{{"g", "g", "L"}, true, 1.0, {}});
  MatC nab = f.analytic(p, Flavor::nabla1);
  MatC d = f.analytic(p, Flavor::D1);
  EXPECT_LT(dist_fro(d, nab * I + apply_R_i(nab)), 1e-10);
  EXPECT_LT(dist_fro(d, proj_B(nab * I)), 1e-10);
}

TEST(RMatrix, CdybeHolds) {
  Rng rng(3);
  for (Variant v : {Variant::su, Variant::u})
    for (std::size_t n : {2, 3, 4})
      for (int t = 0; t < 30; ++t) {
        MatC lam = random_regular_cartan(n, v, rng);
        MatC x = random_G(n, v, rng), y = random_G(n, v, rng);
        EXPECT_LT(cdybe_residual(lam, x, y, v), 1e-9) << "n=" << n;
      }
  // The printed sign convention does not hold for r = (ad lambda)^{-1}.
  {
    MatC lam = random_regular_cartan(3, Variant::su, rng);
    MatC x = random_G(3, Variant::su, rng), y = random_G(3, Variant::su, rng);
    EXPECT_GT(cdybe_residual(lam, x, y, Variant::su, CdybeForm::printed), 1e-3);
  }
  MatC lam = random_regular_cartan(3, Variant::su, rng);
  MatC x0 = random_regular_cartan(3, Variant::su, rng), y0 = random_regular_cartan(3, Variant::su, rng);
  EXPECT_LT(cdybe_residual(lam, x0, y0, Variant::su), 1e-14);
  MatC x = random_G(3, Variant::su, rng);
  EXPECT_LT(dist_fro(apply_dr_lambda(lam, lam, x), -apply_r_lambda(lam, x)), 1e-12);
}

TEST(RMatrix, RegularityGuard) {
  MatC q = MatC::identity(2);
  EXPECT_THROW(apply_R_Q(q, MatC::unit(2, 0, 1)), Error);
}
