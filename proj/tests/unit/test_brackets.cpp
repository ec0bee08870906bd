#include <gtest/gtest.h>

#include "dsim/brackets.hpp"
#include "dsim/config.hpp"
#include "dsim/random.hpp"
#include "dsim/rmat.hpp"

using namespace dsim;

namespace {

std::vector<Observable> panel(Space s) {
  std::vector<Observable> out;
  for (const auto& w : invariant_word_panel(s)) out.push_back(make_trace_observable(s, w));
  return out;
}

constexpr BracketKind kReduced[] = {BracketKind::red_cot_1, BracketKind::red_cot_2, BracketKind::red_heis_1,
                                    BracketKind::red_heis_2, BracketKind::red_quasi_1, BracketKind::red_quasi_2};

}  // namespace

TEST(Brackets, LinearFunctionsOnCotangent) {
  Rng rng(1);
  PhasePoint p = random_point(Space::cotangent, 3, Variant::su, rng);
  MatC a = random_G(3, Variant::su, rng), b = random_G(3, Variant::su, rng);
  auto fa = linear_observable(Space::cotangent, 1, a), fb = linear_observable(Space::cotangent, 1, b);
  EXPECT_NEAR(bracket(BracketKind::pb_cotangent, fa, fb, p), form_G(p[1], commutator(a, b)), 1e-12);
}

TEST(Brackets, ReducedMatchUnreducedOnSlices) {
  Rng rng(2);
  for (Variant v : {Variant::su, Variant::u})
    for (BracketKind k : kReduced)
      for (std::size_t n : {2, 3, 4}) {
        const Space s = bracket_space(k);
        auto obs = panel(s);
        for (int t = 0; t < 3; ++t) {
          PhasePoint p = random_point(s, n, v, rng);
          for (std::size_t i = 0; i + 1 < obs.size(); ++i) {
            const auto &f = obs[i], &h = obs[(i * 3 + 1) % obs.size()];
            const double red = bracket(k, f, h, p);
            const double full = bracket(unreduced_kind(k), f, h, lift(p));
            EXPECT_NEAR(red, full, 1e-8 * std::max(1.0, std::abs(full)))
                << to_string(k) << " n=" << n << " " << f.descriptor() << " , " << h.descriptor();
          }
        }
      }
}

TEST(Brackets, Antisymmetry) {
  Rng rng(3);
  for (BracketKind k : {BracketKind::pb_cotangent, BracketKind::pb_plus, BracketKind::pb_minus, BracketKind::pb_fM,
                        BracketKind::qpb, BracketKind::red_heis_2}) {
    const Space s = bracket_space(k);
    PhasePoint p = random_point(s, 3, Variant::su, rng);
    auto words = generic_word_panel(s);
    auto f = make_trace_observable(s, words[2]), h = make_trace_observable(s, words.back());
    EXPECT_NEAR(bracket(k, f, h, p), -bracket(k, h, f, p), 1e-10);
    EXPECT_NEAR(bracket(k, f, f, p), 0.0, 1e-10);
  }
}

TEST(Brackets, ModelMapIsPoisson) {
  Rng rng(4);
  for (int t = 0; t < 5; ++t) {
    MatC k = random_K(3, Variant::su, rng);
    PhasePoint pk{Space::heisenberg_K, Variant::su, {k}};
    PhasePoint pm = model_map(k);
    auto words = generic_word_panel(Space::heisenberg_GB);
    auto f = make_trace_observable(Space::heisenberg_GB, words[t]);
    auto h = make_trace_observable(Space::heisenberg_GB, words[words.size() - 1 - t]);
    const double lhs = bracket(BracketKind::pb_fM, f, h, pm);
    const double rhs = bracket(BracketKind::pb_plus, pullback_to_K(f), pullback_to_K(h), pk);
    EXPECT_NEAR(lhs, rhs, 1e-8 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(Brackets, SklyaninIdentity) {
  Rng rng(5);
  PhasePoint p = random_point(Space::heisenberg_GB, 3, Variant::su, rng);
  auto f1 = make_trace_observable(Space::heisenberg_GB, WordSpec{{"g", "g"}, true, 1.0, {}});
  auto f2 = make_trace_observable(Space::heisenberg_GB, WordSpec{{"C0", "g"}, false, 1.0, {random_ginibre(3, rng)}});
  EXPECT_NEAR(sklyanin_residual(f1, f2, p), 0.0, 1e-10);
}

TEST(Brackets, CenterOfPoissonLieB) {
  Rng rng(6);
  PhasePoint p = random_point(Space::heisenberg_GB, 3, Variant::su, rng);
  auto phi = make_trace_observable(Space::heisenberg_GB, WordSpec{{"L", "L"}, false, 1.0, {}});
  auto psi = make_trace_observable(Space::heisenberg_GB, WordSpec{{"b", "C0"}, true, 1.0, {random_ginibre(3, rng)}});
  EXPECT_NEAR(bracket(BracketKind::pb_B, phi, psi, p), 0.0, 1e-10);
  EXPECT_NEAR(bracket(BracketKind::pb_B, psi, phi, p), 0.0, 1e-10);
}

TEST(Brackets, CasimirOfQuasiBracket) {
  Rng rng(7);
  auto cas = make_trace_observable(Space::quasi, WordSpec{{"g1", "g2", "g1inv", "g2inv"}, false, 1.0, {}});
  for (const auto& h : panel(Space::quasi)) {
    PhasePoint p = random_point(Space::quasi, 3, Variant::su, rng);
    EXPECT_NEAR(bracket(BracketKind::qpb, cas, h, p), 0.0, 1e-9);
  }
}

TEST(Brackets, LeibnizRule) {
  Rng rng(8);
  PhasePoint p = random_point(Space::quasi, 3, Variant::su, rng);
  auto obs = panel(Space::quasi);
  const auto &f = obs[2], &g = obs[5], &h = obs[7];
  const double lhs = bracket(BracketKind::qpb, product(f, g), h, p);
  const double rhs = f(p) * bracket(BracketKind::qpb, g, h, p) + g(p) * bracket(BracketKind::qpb, f, h, p);
  EXPECT_NEAR(lhs, rhs, 1e-8);
  // Same with finite-difference derivatives of the product.
  Observable fg_fd(Space::quasi, [f, g](const PhasePoint& q) { return f(q) * g(q); });
  EXPECT_NEAR(bracket(BracketKind::qpb, fg_fd, h, p), rhs, 1e-7);
}

TEST(Brackets, Jacobiators) {
  Rng rng(9);
  {
    PhasePoint p = random_point(Space::heisenberg_K, 2, Variant::su, rng);
    auto w = generic_word_panel(Space::heisenberg_K);
    auto a = make_trace_observable(Space::heisenberg_K, w[0]), b = make_trace_observable(Space::heisenberg_K, w[3]),
         c = make_trace_observable(Space::heisenberg_K, w[5]);
    EXPECT_LT(std::abs(jacobiator(BracketKind::pb_plus, a, b, c, p)), 1e-4);
  }
  auto obs = panel(Space::quasi);
  PhasePoint q = random_point(Space::quasi, 3, Variant::su, rng);
  EXPECT_LT(std::abs(jacobiator(BracketKind::qpb, obs[2], obs[4], obs[6], q)), 1e-4);
  double worst = 0.0;
  for (int t = 0; t < 5 && worst <= 1e-2; ++t) {
    PhasePoint r = random_point(Space::quasi, 3, Variant::su, rng);
    auto c0 = random_ginibre(3, rng), c1 = random_ginibre(3, rng), c2 = random_ginibre(3, rng);
    auto a = make_trace_observable(Space::quasi, WordSpec{{"C0", "g1"}, false, 1.0, {c0}});
    auto b = make_trace_observable(Space::quasi, WordSpec{{"C0", "g2"}, false, 1.0, {c1}});
    auto c = make_trace_observable(Space::quasi, WordSpec{{"C0", "g1", "g2"}, true, 1.0, {c2}});
    worst = std::max(worst, std::abs(jacobiator(BracketKind::qpb, a, b, c, r)));
  }
  EXPECT_GT(worst, 1e-2);
}

TEST(Brackets, SliceDerivativeReconstruction) {
  Rng rng(10);
  for (Variant v : {Variant::su, Variant::u})
    for (std::size_t n : {2, 3, 4}) {
      PhasePoint p = random_point(Space::red_heis_2, n, v, rng);
      for (const auto& f : panel(Space::heisenberg_GB)) {
        SliceDerivatives sd = slice_derivatives(f, p);
        const PhasePoint full = lift(p);
        const MatC d2p = f.analytic(full, Flavor::D2p), d2 = f.analytic(full, Flavor::D2);
        EXPECT_LT(dist_fro(sd.D2p, d2p), 1e-9) << f.descriptor();
        EXPECT_LT(dist_fro(sd.D2, d2), 1e-9) << f.descriptor();
        EXPECT_LT(dist_fro(sd.conj, p[1] * d2p * inverse(p[1])), 1e-9);
      }
    }
}

TEST(Brackets, WrongSpaceAndRegularity) {
  Rng rng(11);
  auto f = make_trace_observable(Space::quasi, WordSpec{{"g1"}, false, 1.0, {}});
  PhasePoint p = random_point(Space::cotangent, 2, Variant::su, rng);
  EXPECT_THROW(bracket(BracketKind::qpb, f, f, p), Error);
  PhasePoint s{Space::red_quasi_1, Variant::su, {MatC::identity(2), random_unitary(2, Variant::su, rng)}};
  try {
    bracket(BracketKind::red_quasi_1, f, f, s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Regularity);
  }
}

TEST(Brackets, ModelMapPullbackDerivatives) {
  // For F = f(g) or phi(b) on the (g,b) model and K = gL bR^{-1} = bL gR^{-1}:
  //   nabla'(phi o Lambda_R) = -bR D'phi bR^{-1},  nabla'(f o Xi_R) = -gR D'f gR^{-1}
  //   nabla (phi o Lambda_R) = -gL D'phi gL^{-1},  nabla (f o Xi_R) = -bL D'f bL^{-1}
  Rng rng(31);
  auto w = [](std::vector<std::string> l, bool imag) { return WordSpec{std::move(l), imag, 1.0, {}}; };
  const std::vector<WordSpec> phis = {w({"L"}, false), w({"b", "b"}, false), w({"b", "bdag", "b"}, true)};
  const std::vector<WordSpec> fs = {w({"g"}, false), w({"g", "g"}, true), w({"g", "gdag", "g"}, false)};
  for (Variant v : {Variant::su, Variant::u})
    for (std::size_t n : {2, 3}) {
      const MatC k = random_K(n, v, rng);
      const Iwasawa iw = iwasawa(k);
      const PhasePoint kp{Space::heisenberg_K, v, {k}};
      const PhasePoint gb = model_map(k, v);
      double largest = 0.0;
      for (int which = 0; which < 2; ++which)
        for (const auto& word : which == 0 ? phis : fs) {
          const Observable f = make_trace_observable(Space::heisenberg_GB, word);
          const Observable fk = pullback_to_K(f);
          const MatC right = fd_gradient(fk, kp, Flavor::nablap);
          const MatC left = fd_gradient(fk, kp, Flavor::nabla);
          MatC want_right, want_left;
          if (which == 0) {
            const MatC dp = derivative(f, gb, Flavor::D2p);
            want_right = iw.bR * dp * inverse(iw.bR) * cplx(-1.0);
            want_left = iw.gL * dp * inverse(iw.gL) * cplx(-1.0);
          } else {
            const MatC dp = derivative(f, gb, Flavor::D1p);
            want_right = iw.gR * dp * inverse(iw.gR) * cplx(-1.0);
            want_left = iw.bL * dp * inverse(iw.bL) * cplx(-1.0);
          }
          const double scale = std::max(1.0, want_right.norm_fro());
          EXPECT_LT(dist_fro(right, want_right) / scale, 1e-7) << which << " n=" << n;
          EXPECT_LT(dist_fro(left, want_left) / std::max(1.0, want_left.norm_fro()), 1e-7) << which << " n=" << n;
          largest = std::max(largest, want_right.norm_fro());
        }
      EXPECT_GT(largest, 1e-1);
    }
}
