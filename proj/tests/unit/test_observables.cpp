#include <gtest/gtest.h>

#include "dsim/config.hpp"
#include "dsim/observables.hpp"
#include "dsim/random.hpp"

using namespace dsim;

namespace {

constexpr Space kSpaces[] = {Space::cotangent,  Space::heisenberg_K, Space::heisenberg_GB, Space::quasi,
                             Space::red_cot_1,  Space::red_cot_2,    Space::red_heis_1,    Space::red_heis_2,
                             Space::red_quasi_1, Space::red_quasi_2};

WordSpec constant_word(Space s, Rng& rng, std::size_t n) {
  // Non-invariant words built from a fixed matrix.
  switch (parent_space(s)) {
    case Space::cotangent: return {{"C0", "g", "J"}, false, 1.0, {random_ginibre(n, rng)}};
    case Space::quasi: return {{"g1", "C0", "g2"}, true, 1.0, {random_ginibre(n, rng)}};
    default: return {{"C0", "g"}, false, 1.0, {random_ginibre(n, rng)}};
  }
}

}  // namespace

TEST(Observables, WorkedValues) {
  auto h = make_trace_observable(Space::quasi, WordSpec{{"g1"}, false, 1.0, {}});
  PhasePoint q{Space::quasi, Variant::su, {MatC::identity(2), MatC::identity(2)}};
  EXPECT_DOUBLE_EQ(h(q), 2.0);
  auto phi = make_trace_observable(Space::heisenberg_GB, WordSpec{{"L"}, false, 1.0, {}});
  PhasePoint b{Space::heisenberg_GB, Variant::u, {MatC::identity(2), MatC::diag(std::vector<double>{2.0, 3.0})}};
  EXPECT_NEAR(phi(b), 13.0, 1e-14);
  EXPECT_THROW(make_trace_observable(Space::cotangent, WordSpec{{"L"}, false, 1.0, {}}), Error);
  EXPECT_TRUE(make_trace_observable(Space::heisenberg_GB, WordSpec{{"g", "L"}, false, 1.0, {}}).invariant());
  EXPECT_FALSE(make_trace_observable(Space::heisenberg_GB, WordSpec{{"g", "b"}, false, 1.0, {}}).invariant());
  EXPECT_EQ(canonical_letter("g₁⁻¹"), "g1inv");
}

TEST(Observables, GradientOfRealTraceIsProjectedPower) {
  // h(g) = Re tr(g^2): nabla h = traceless anti-Hermitian part of 2 g^2.
  Rng rng(1);
  PhasePoint p = random_point(Space::quasi, 3, Variant::su, rng);
  auto h = make_trace_observable(Space::quasi, WordSpec{{"g1", "g1"}, false, 1.0, {}});
  MatC want = remove_trace(antihermitian_part(p[0] * p[0] * cplx(2.0)), Variant::su);
  EXPECT_LT(dist_fro(h.analytic(p, Flavor::nabla1), want), 1e-13);
}

TEST(Observables, AllFlavorsMatchFiniteDifferences) {
  Rng rng(2);
  for (Variant v : {Variant::su, Variant::u})
    for (Space s : kSpaces)
      for (std::size_t n : {2, 3}) {
        PhasePoint p = random_point(s, n, v, rng);
        std::vector<WordSpec> words = generic_word_panel(s);
        if (parent_space(s) != Space::heisenberg_K) words.push_back(constant_word(s, rng, n));
        for (const auto& w : words) {
          Observable f = make_trace_observable(s, w);
          for (Flavor fl : flavors_of(s)) {
            const double err = fd_validation_error(f, p, fl);
            EXPECT_LT(err, 1e-7) << to_string(s) << " " << to_string(v) << " n=" << n << " " << f.descriptor()
                                 << " " << to_string(fl);
          }
        }
      }
}

TEST(Observables, FdOfConstantAndLinear) {
  Rng rng(3);
  PhasePoint p = random_point(Space::cotangent, 3, Variant::su, rng);
  auto c = constant_observable(Space::cotangent, 4.0);
  MatC x = random_G(3, Variant::su, rng);
  EXPECT_NEAR(fd_derivative(c, p, Flavor::nabla1, x), 0.0, 1e-12);
  MatC a = random_G(3, Variant::su, rng);
  auto lin = linear_observable(Space::cotangent, 1, a);
  EXPECT_NEAR(fd_derivative(lin, p, Flavor::d2, x), form_G(a, x), 1e-9);
  EXPECT_LT(dist_fro(lin.analytic(p, Flavor::d2), a), 1e-13);
}

TEST(Observables, InvarianceUnderActions) {
  Rng rng(4);
  for (Space s : {Space::cotangent, Space::heisenberg_GB, Space::quasi})
    for (const auto& w : invariant_word_panel(s)) {
      Observable f = make_trace_observable(s, w);
      ASSERT_TRUE(f.invariant());
      for (int t = 0; t < 5; ++t) {
        PhasePoint p = random_point(s, 3, Variant::su, rng);
        MatC eta = random_unitary(3, Variant::su, rng);
        EXPECT_NEAR(f(act(eta, p)), f(p), 1e-9);
        if (s == Space::heisenberg_GB) EXPECT_NEAR(f(act(eta, p, HeisAction::quasi_adjoint)), f(p), 1e-9);
        EXPECT_LT(invariance_defect(f, p), 1e-8) << f.descriptor();
      }
    }
}

TEST(Observables, InvarianceDefectNegativeControls) {
  Rng rng(5);
  PhasePoint p = random_point(Space::heisenberg_GB, 3, Variant::su, rng);
  auto f = make_trace_observable(Space::heisenberg_GB, WordSpec{{"g", "b"}, false, 1.0, {}});
  EXPECT_GT(invariance_defect(f, p), 1e-3);
  PhasePoint c = random_point(Space::cotangent, 3, Variant::su, rng);
  auto fc = make_trace_observable(Space::cotangent, constant_word(Space::cotangent, rng, 3));
  EXPECT_GT(invariance_defect(fc, c), 1e-3);
  EXPECT_EQ(invariance_defect(constant_observable(Space::quasi, 1.0), random_point(Space::quasi, 3, Variant::su, rng)),
            0.0);
}

TEST(Observables, LeftRightAgreeForClassFunctions) {
  Rng rng(6);
  PhasePoint p = random_point(Space::quasi, 3, Variant::su, rng);
  auto h = make_trace_observable(Space::quasi, WordSpec{{"g1", "g1", "g1"}, true, 1.0, {}});
  EXPECT_LT(dist_fro(h.analytic(p, Flavor::nabla1), h.analytic(p, Flavor::nabla1p)), 1e-12);
}

TEST(Observables, InvariantPhiOfBConjugatesDerivatives) {
  // D phi(b) = b D'phi(b) b^{-1} for phi a trace word in L.
  Rng rng(7);
  for (Variant v : {Variant::su, Variant::u}) {
    PhasePoint p = random_point(Space::heisenberg_GB, 3, v, rng);
    auto phi = make_trace_observable(Space::heisenberg_GB, WordSpec{{"L", "L", "L"}, false, 1.0, {}});
    MatC d = phi.analytic(p, Flavor::D2), dp = phi.analytic(p, Flavor::D2p);
    EXPECT_LT(dist_fro(d, p[1] * dp * inverse(p[1])), 1e-9);
  }
}

TEST(Observables, ProductRuleAgainstFiniteDifferences) {
  Rng rng(8);
  PhasePoint p = random_point(Space::cotangent, 3, Variant::su, rng);
  auto f = make_trace_observable(Space::cotangent, WordSpec{{"g", "J"}, false, 1.0, {}});
  auto h = make_trace_observable(Space::cotangent, WordSpec{{"J", "J", "g"}, true, 1.0, {}});
  auto fh = product(f, h);
  for (Flavor fl : {Flavor::nabla1, Flavor::nabla1p, Flavor::d2}) EXPECT_LT(fd_validation_error(fh, p, fl), 1e-8);
}

TEST(Observables, ModelPullbackEvaluates) {
  Rng rng(9);
  MatC k = random_K(3, Variant::su, rng);
  auto f = make_trace_observable(Space::heisenberg_GB, WordSpec{{"g", "L"}, false, 1.0, {}});
  auto fk = pullback_to_K(f);
  PhasePoint pk{Space::heisenberg_K, Variant::su, {k}};
  EXPECT_NEAR(fk(pk), f(model_map(k)), 1e-14);
  auto back = pullback_to_GB(fk);
  EXPECT_NEAR(back(model_map(k)), f(model_map(k)), 1e-10);
}

TEST(Observables, ModelPullbackGradientMatchesFiniteDifferences) {
  Rng rng(10);
  for (Variant v : {Variant::su, Variant::u})
    for (std::size_t n : {2, 3}) {
      const PhasePoint pk{Space::heisenberg_K, v, {random_K(n, v, rng)}};
      for (const auto& w : generic_word_panel(Space::heisenberg_GB)) {
        const Observable fk = pullback_to_K(make_trace_observable(Space::heisenberg_GB, w));
        ASSERT_TRUE(fk.has_analytic());
        for (Flavor fl : {Flavor::nabla, Flavor::nablap})
          EXPECT_LT(fd_validation_error(fk, pk, fl), 1e-7) << to_string(v) << " n=" << n << " " << fk.descriptor();
      }
    }
}
