#include <gtest/gtest.h>

#include "dsim/config.hpp"
#include "dsim/lie.hpp"
#include "dsim/random.hpp"

using namespace dsim;

TEST(Lie, SplitIsDirectAndPartsLieInSubspaces) {
  Rng rng(1);
  for (Variant v : {Variant::su, Variant::u})
    for (std::size_t n : {2, 3, 4}) {
      MatC x = remove_trace(random_ginibre(n, rng), v);
      MatC g = proj_G(x), b = proj_B(x);
      EXPECT_LT(dist_fro(g + b, x), 1e-14);
      EXPECT_TRUE(in_subspace(g, Subspace::G, v, 1e-13));
      EXPECT_TRUE(in_subspace(b, Subspace::B, v, 1e-13));
      EXPECT_LT(dist_fro(proj_G(g), g), 1e-14);
      EXPECT_LT(dist_fro(proj_B(b), b), 1e-14);
    }
}

TEST(Lie, WorkedSplitExample) {
  const cplx i(0.0, 1.0);
  MatC x{{1.0 + 2.0 * i, 3.0}, {4.0 + i, 5.0}};
  MatC g{{2.0 * i, -(4.0 - i)}, {4.0 + i, 0.0}};
  MatC b{{1.0, 3.0 + 4.0 - i}, {0.0, 5.0}};
  EXPECT_LT(dist_fro(proj_G(x), g), 1e-15);
  EXPECT_LT(dist_fro(proj_B(x), b), 1e-15);
}

TEST(Lie, ImaginaryFormIsotropicOnBothSubalgebras) {
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    MatC a = random_G(3, Variant::su, rng), c = random_G(3, Variant::su, rng);
    MatC p = random_B_alg(3, Variant::su, rng), q = random_B_alg(3, Variant::su, rng);
    EXPECT_NEAR(form_I(a, c), 0.0, 1e-13);
    EXPECT_NEAR(form_I(p, q), 0.0, 1e-13);
  }
}

TEST(Lie, RootNormalizationAndDualBasis) {
  for (Variant v : {Variant::su, Variant::u}) {
    auto rb = root_basis(4, v);
    EXPECT_EQ(rb.positive.size(), 6u);
    for (std::size_t a = 0; a < rb.cartan_G.size(); ++a)
      for (std::size_t b = 0; b < rb.cartan_G.size(); ++b)
        EXPECT_NEAR(form_G(rb.cartan_G[a], rb.cartan_dual[b]), a == b ? 1.0 : 0.0, 1e-13);
  }
  auto rb = root_basis(3, Variant::su);
  // Simple coroots of A_2 have squared length 2 in the trace form.
  EXPECT_NEAR(form_G(rb.cartan[0], rb.cartan[0]), 2.0, 1e-15);
  EXPECT_NEAR(form_G(rb.cartan[0], rb.cartan[1]), -1.0, 1e-15);
}

TEST(Lie, SubspaceDimensions) {
  const std::size_t n = 3;
  EXPECT_EQ(subspace_basis(n, Subspace::G, Variant::su).size(), 8u);
  EXPECT_EQ(subspace_basis(n, Subspace::B, Variant::su).size(), 8u);
  EXPECT_EQ(subspace_basis(n, Subspace::G, Variant::u).size(), 9u);
  EXPECT_EQ(subspace_basis(n, Subspace::full, Variant::u).size(), 18u);
  auto on = orthonormal_G_basis(n, Variant::su);
  for (std::size_t a = 0; a < on.size(); ++a)
    for (std::size_t b = 0; b < on.size(); ++b) EXPECT_NEAR(form_G(on[a], on[b]), a == b ? -1.0 : 0.0, 1e-13);
}

TEST(Lie, Regularity) {
  MatC q = MatC::diag(std::vector<cplx>{1.0, 1.0});
  EXPECT_FALSE(is_regular(q, RegularKind::torus));
  Rng rng(4);
  EXPECT_TRUE(is_regular(random_regular_torus(3, Variant::su, rng), RegularKind::torus));
  EXPECT_TRUE(is_regular(random_regular_b0(3, Variant::su, rng), RegularKind::b0));
  EXPECT_THROW(is_regular(MatC{{1.0, 1.0}, {0.0, 1.0}}, RegularKind::torus), Error);
}
