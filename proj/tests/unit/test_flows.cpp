#include <gtest/gtest.h>

#include <cmath>

#include "dsim/brackets.hpp"
#include "dsim/config.hpp"
#include "dsim/flows.hpp"
#include "dsim/random.hpp"
#include "dsim/rmat.hpp"

using namespace dsim;

namespace {

WordSpec re(std::vector<std::string> l, double c = 1.0) { return WordSpec{std::move(l), false, c, {}}; }
WordSpec im(std::vector<std::string> l, double c = 1.0) { return WordSpec{std::move(l), true, c, {}}; }

// A non-quadratic invariant Hamiltonian of the given family.
Observable family_hamiltonian(Space s, Family f) {
  const Space base = parent_space(s) == Space::heisenberg_K ? Space::heisenberg_GB : parent_space(s);
  switch (base) {
    case Space::cotangent:
      return f == Family::pi2 ? make_trace_observable(base, {re({"J", "J"}, -0.5), im({"J", "J", "J"}, 0.3)})
                              : make_trace_observable(base, {re({"g"}), im({"g", "g"}, 0.5)});
    case Space::heisenberg_GB:
      return f == Family::pi2 ? make_trace_observable(base, {re({"L"}), re({"L", "L"}, 0.05)})
                              : make_trace_observable(base, {re({"g"}), im({"g", "g"}, 0.3)});
    case Space::quasi:
      return f == Family::pi2 ? make_trace_observable(base, {re({"g2"}), im({"g2", "g2"}, 0.5)})
                              : make_trace_observable(base, {re({"g1"}), im({"g1", "g1"}, 0.5)});
    default: break;
  }
  throw Error(ErrorCode::Usage, "no test Hamiltonian");
}

double point_distance(const PhasePoint& a, const PhasePoint& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.components.size(); ++i) d = std::max(d, dist_fro(a[i], b[i]));
  return d;
}

constexpr Space kUnreduced[] = {Space::cotangent, Space::heisenberg_GB, Space::heisenberg_K, Space::quasi};
constexpr Space kSlices[] = {Space::red_cot_1,  Space::red_cot_2,   Space::red_heis_1,
                             Space::red_heis_2, Space::red_quasi_1, Space::red_quasi_2};

FlowSpec slice_spec(Space s, double t_max, double dt, std::size_t stride) {
  FlowSpec spec;
  spec.space = s;
  spec.family = slice_family(s);
  spec.hamiltonian = family_hamiltonian(s, spec.family);
  spec.t_max = t_max;
  spec.dt = dt;
  spec.stride = stride;
  return spec;
}

}  // namespace

TEST(Flows, ZeroTimeIsIdentity) {
  Rng rng(1);
  for (Space s : kUnreduced)
    for (Family f : {Family::pi1, Family::pi2}) {
      PhasePoint p = random_point(s, 3, Variant::su, rng);
      EXPECT_LT(point_distance(exact_flow(f, family_hamiltonian(s, f), p, 0.0), p), 1e-14);
    }
}

TEST(Flows, GroupLaw) {
  Rng rng(2);
  for (Variant v : {Variant::su, Variant::u})
    for (Space s : kUnreduced)
      for (Family f : {Family::pi1, Family::pi2}) {
        const Observable h = family_hamiltonian(s, f);
        PhasePoint p = random_point(s, 3, v, rng);
        const PhasePoint a = exact_flow(f, h, p, 0.7);
        const PhasePoint b = exact_flow(f, h, exact_flow(f, h, p, 0.3), 0.4);
        EXPECT_LT(point_distance(a, b), 1e-9) << to_string(s) << " " << to_string(f);
        validate(a, 1e-9);
      }
}

TEST(Flows, CotangentQuadraticExample) {
  Rng rng(3);
  PhasePoint p = random_point(Space::cotangent, 3, Variant::su, rng);
  const Observable h = make_trace_observable(Space::cotangent, re({"J", "J"}, -0.5));
  const double t = 0.8;
  const PhasePoint q = exact_flow(Family::pi2, h, p, t);
  EXPECT_LT(dist_fro(q[0], mat_exp(p[1] * cplx(-t)) * p[0]), 1e-12);
  EXPECT_LT(dist_fro(q[1], p[1]), 1e-15);
}

TEST(Flows, HeisenbergPhiKeepsBothB) {
  Rng rng(4);
  const Observable h = make_trace_observable(Space::heisenberg_GB, re({"L"}));
  for (Variant v : {Variant::su, Variant::u}) {
    const MatC k0 = random_K(3, v, rng);
    const PhasePoint p{Space::heisenberg_K, v, {k0}};
    const MatC kt = exact_flow(Family::pi2, h, p, 0.9)[0];
    const Iwasawa a = iwasawa(k0), b = iwasawa(kt);
    EXPECT_LT(dist_fro(a.bR, b.bR), 1e-10);
    EXPECT_LT(dist_fro(a.bL, b.bL), 1e-10);
    // K(t) = K(0) exp(-t Dphi(b_R(0))).
    const MatC dphi = derivative(h, model_map(k0, v), Flavor::D2);
    EXPECT_LT(dist_fro(kt, k0 * mat_exp(dphi * cplx(-0.9))), 1e-10);
    EXPECT_GT(dist_fro(kt, k0), 1e-2);
  }
}

TEST(Flows, HeisenbergHSolutionSatisfiesEquation) {
  Rng rng(5);
  const Observable h = family_hamiltonian(Space::heisenberg_GB, Family::pi1);
  PhasePoint p = random_point(Space::heisenberg_GB, 3, Variant::su, rng);
  const double t = 0.6, e = 1e-3;
  auto at = [&](double s) { return exact_flow(Family::pi1, h, p, s); };
  const PhasePoint q = at(t);
  const PhasePoint a1 = at(t + e), b1 = at(t - e), a2 = at(t + 2 * e), b2 = at(t - 2 * e);
  for (std::size_t c = 0; c < 2; ++c) {
    const MatC fd = ((a1[c] - b1[c]) * cplx(8.0) - (a2[c] - b2[c])) * cplx(1.0 / (12 * e));
    const MatC grad = derivative(h, q, Flavor::nabla1);
    const MatC rhs = c == 0 ? commutator(proj_G(grad * cplx(0, 1)), q[0]) : proj_B(grad * cplx(0, -1)) * q[1];
    EXPECT_LT(dist_fro(fd, rhs), 1e-7);
    EXPECT_GT(rhs.norm_fro(), 1e-2);
  }
}

TEST(Flows, KModelAgreesWithGBModel) {
  Rng rng(6);
  for (Family f : {Family::pi1, Family::pi2}) {
    const Observable h = family_hamiltonian(Space::heisenberg_GB, f);
    const MatC k0 = random_K(3, Variant::su, rng);
    const PhasePoint kt = exact_flow(f, h, PhasePoint{Space::heisenberg_K, Variant::su, {k0}}, 0.5);
    const PhasePoint gt = exact_flow(f, h, model_map(k0), 0.5);
    EXPECT_LT(point_distance(model_map(kt[0]), gt), 1e-10);
  }
}

TEST(Flows, TransformedInitialValueForHeisenbergH) {
  Rng rng(7);
  const Observable h = family_hamiltonian(Space::heisenberg_GB, Family::pi1);
  for (int trial = 0; trial < 5; ++trial) {
    PhasePoint p = random_point(Space::heisenberg_GB, 3, Variant::su, rng);
    const MatC eta = random_unitary(3, Variant::su, rng);
    const double t = 0.7;
    const MatC beta = factor_BG(mat_exp(derivative(h, p, Flavor::nabla1) * cplx(0.0, t))).beta;
    const PhasePoint direct = exact_flow(Family::pi1, h, act(eta, p), t);
    const PhasePoint moved = act(inverse(xi_R(eta * beta)), exact_flow(Family::pi1, h, p, t));
    EXPECT_LT(point_distance(direct, moved), 1e-8);
    // A fixed eta does not commute with the flow.
    EXPECT_GT(point_distance(direct, act(eta, exact_flow(Family::pi1, h, p, t))), 1e-4);
  }
}

TEST(Flows, CotangentAndQuasiFlowsCommuteWithConjugation) {
  Rng rng(8);
  for (Space s : {Space::cotangent, Space::quasi})
    for (Family f : {Family::pi1, Family::pi2}) {
      const Observable h = family_hamiltonian(s, f);
      PhasePoint p = random_point(s, 3, Variant::u, rng);
      const MatC eta = random_unitary(3, Variant::u, rng);
      EXPECT_LT(point_distance(exact_flow(f, h, act(eta, p), 0.9), act(eta, exact_flow(f, h, p, 0.9))), 1e-9);
    }
}

TEST(Flows, ConstantsOfMotion) {
  Rng rng(9);
  const Variant v = Variant::su;
  {
    PhasePoint p = random_point(Space::cotangent, 3, v, rng);
    const Observable h = family_hamiltonian(Space::cotangent, Family::pi2);
    const PhasePoint q = exact_flow(Family::pi2, h, p, 1.3);
    auto jt = [](const PhasePoint& x) { return inverse(x[0]) * x[1] * x[0]; };
    EXPECT_LT(dist_fro(q[1], p[1]), 1e-10);
    EXPECT_LT(dist_fro(jt(q), jt(p)), 1e-10);
  }
  {
    PhasePoint p = random_point(Space::heisenberg_GB, 3, v, rng);
    const Observable h = family_hamiltonian(Space::heisenberg_GB, Family::pi1);
    auto w = [](const PhasePoint& x) {
      const MatC bl = lambda_L(model_map_inv(x[0], x[1]));
      return bl * x[0] * inverse(bl);
    };
    const MatC w0 = w(p), w1 = w(exact_flow(Family::pi1, h, p, 1.1));
    MatC a = w0, b = w1;
    for (int k = 1; k <= 3; ++k) {
      EXPECT_LT(std::abs(a.trace() - b.trace()), 1e-9);
      a = a * w0;
      b = b * w1;
    }
  }
  {
    PhasePoint p = random_point(Space::quasi, 3, v, rng);
    const Observable h = family_hamiltonian(Space::quasi, Family::pi2);
    const PhasePoint q = exact_flow(Family::pi2, h, p, 1.2);
    EXPECT_LT(dist_fro(q[1], p[1]), 1e-10);
    EXPECT_LT(dist_fro(q[0] * q[1] * inverse(q[0]), p[0] * p[1] * inverse(p[0])), 1e-10);
  }
}

TEST(Flows, FamilyHamiltoniansAreInInvolution) {
  Rng rng(10);
  const std::pair<Space, BracketKind> cases[] = {
      {Space::cotangent, BracketKind::pb_cotangent}, {Space::heisenberg_GB, BracketKind::pb_fM},
      {Space::quasi, BracketKind::qpb}};
  for (auto [s, k] : cases)
    for (Family f : {Family::pi1, Family::pi2}) {
      std::vector<Observable> fam = {family_hamiltonian(s, f)};
      const char* letter = s == Space::cotangent ? (f == Family::pi1 ? "g" : "J")
                           : s == Space::quasi   ? (f == Family::pi1 ? "g1" : "g2")
                                                 : (f == Family::pi1 ? "g" : "L");
      fam.push_back(make_trace_observable(s, im({letter, letter, letter})));
      if (s == Space::heisenberg_GB && f == Family::pi2) fam.back() = make_trace_observable(s, re({"L", "L", "L"}));
      ASSERT_GE(fam.size(), 2u) << to_string(s);
      for (int t = 0; t < 5; ++t) {
        PhasePoint p = random_point(s, 3, Variant::su, rng);
        EXPECT_LT(std::abs(bracket(k, fam[0], fam[1], p)), 1e-9);
      }
    }
}

TEST(Flows, WordFamilies) {
  EXPECT_EQ(word_family(Space::cotangent, re({"J", "J"})), Family::pi2);
  EXPECT_EQ(word_family(Space::cotangent, re({"g", "ginv"})), Family::pi1);
  EXPECT_EQ(word_family(Space::cotangent, re({"g", "J"})), std::nullopt);
  EXPECT_EQ(word_family(Space::heisenberg_GB, re({"L"})), Family::pi2);
  EXPECT_EQ(word_family(Space::red_quasi_1, re({"g2"})), Family::pi2);
  EXPECT_THROW(word_family(Space::quasi, re({"J"})), Error);
}

TEST(Flows, ReducedRhsTrivialCases) {
  Rng rng(11);
  // dphi(J) = -J is Cartan when J is diagonal, and R(Q) kills the Cartan part.
  PhasePoint p{Space::red_cot_1, Variant::su, {random_regular_torus(3, Variant::su, rng), MatC()}};
  p[1] = diagonal_part(random_G(3, Variant::su, rng));
  const Observable h = make_trace_observable(Space::cotangent, re({"J", "J"}, -0.5));
  const auto rhs = reduced_rhs(Family::pi2, h, p);
  EXPECT_LT(rhs[1].max_abs(), 1e-15);
  EXPECT_LT(dist_fro(rhs[0], p[1] * cplx(-1.0) * p[0]), 1e-14);

  PhasePoint q{Space::red_quasi_1, Variant::su,
               {random_regular_torus(3, Variant::su, rng), random_regular_torus(3, Variant::su, rng)}};
  const auto qr = reduced_rhs(Family::pi2, family_hamiltonian(Space::quasi, Family::pi2), q);
  EXPECT_LT(qr[1].max_abs(), 1e-15);

  EXPECT_THROW(reduced_rhs(Family::pi1, h, p), Error);
}

TEST(Flows, SpinSutherlandRhsByHand) {
  // su(2): Q = diag(e^{iq}, e^{-iq}), H = -1/2 <J,J>, dphi = -J.
  const double q = 0.4;
  const cplx I(0, 1);
  const cplx a(0.3, -0.2);
  const MatC Q{{std::exp(I * q), 0.0}, {0.0, std::exp(-I * q)}};
  const MatC J{{I * 0.7, a}, {-std::conj(a), -I * 0.7}};
  const PhasePoint p{Space::red_cot_1, Variant::su, {Q, J}};
  const auto rhs = reduced_rhs(Family::pi2, make_trace_observable(Space::cotangent, re({"J", "J"}, -0.5)), p);
  // R(Q) multiplies E_12 by 1/2 (mu+1)/(mu-1), mu = e^{2iq}, i.e. by -i/2 cot q, and E_21 by the opposite.
  const cplx r12 = -0.5 * I / std::tan(q);
  const MatC rj{{0.0, -r12 * a}, {-r12 * std::conj(a), 0.0}};
  const MatC expect = commutator(rj, p[1]);
  EXPECT_LT(dist_fro(rhs[1], expect), 1e-14);
  EXPECT_LT(dist_fro(rhs[0], MatC{{-I * 0.7 * std::exp(I * q), 0.0}, {0.0, I * 0.7 * std::exp(-I * q)}}), 1e-14);
}

TEST(Flows, LaxFormMatchesBForm) {
  Rng rng(12);
  for (Variant v : {Variant::su, Variant::u}) {
    PhasePoint p = random_point(Space::red_heis_1, 3, v, rng);
    const Observable h = family_hamiltonian(Space::heisenberg_GB, Family::pi2);
    const auto rb = reduced_rhs(Family::pi2, h, p);
    const auto rl = reduced_rhs_lax(h, p);
    EXPECT_LT(dist_fro(rb[0], rl[0]), 1e-12);
    EXPECT_LT(dist_fro(rb[1] * p[1].adjoint() + p[1] * rb[1].adjoint(), rl[1]), 1e-11);
    EXPECT_GT(rl[1].norm_fro(), 1e-2);
  }
}

TEST(Flows, ProjectionMethodAgreesOnEverySlice) {
  Rng rng(13);
  for (Space s : kSlices)
    for (std::size_t n : {2, 3}) {
      const FlowSpec spec = slice_spec(s, 0.5, 1e-3, 50);
      const PhasePoint p0 = random_point(s, n, Variant::su, rng);
      const ProjectionReport rep = projection_check(spec, p0);
      EXPECT_LT(rep.invariant_deviation, 1e-6) << to_string(s) << " n=" << n;
      EXPECT_LT(rep.coordinate_deviation, 1e-6) << to_string(s) << " n=" << n;
      EXPECT_GT(rep.panel_scale, 0.1);
      EXPECT_EQ(rep.samples, 11u);
    }
}

TEST(Flows, EnergyDriftAndStructure) {
  Rng rng(14);
  const FlowSpec spec = slice_spec(Space::red_cot_1, 1.0, 1e-3, 100);
  const Trajectory tr = integrate(spec, random_point(Space::red_cot_1, 2, Variant::su, rng));
  ASSERT_TRUE(tr.completed);
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    EXPECT_LT(std::abs(tr.hamiltonian[i] - tr.hamiltonian[0]), 1e-8);
    EXPECT_LT(tr.structure_residual[i], 1e-8);
  }
}

TEST(Flows, FourthOrderConvergence) {
  Rng rng(15);
  const PhasePoint p0 = random_point(Space::red_cot_1, 3, Variant::su, rng);
  auto end_point = [&](double dt) {
    FlowSpec spec = slice_spec(Space::red_cot_1, 1.0, dt, 1000000);
    spec.restore = false;
    return integrate(spec, p0).points.back();
  };
  const double dt = 0.04;
  const PhasePoint ref = end_point(dt / 8);
  const double e1 = point_distance(end_point(dt), ref), e2 = point_distance(end_point(dt / 2), ref);
  const double ratio = e1 / e2;
  EXPECT_GT(ratio, 12.0) << e1 << " " << e2;
  EXPECT_LT(ratio, 20.0) << e1 << " " << e2;
}

TEST(Flows, ZeroHamiltonianIsStatic) {
  Rng rng(16);
  FlowSpec spec = slice_spec(Space::red_quasi_1, 0.1, 1e-2, 1);
  spec.hamiltonian = constant_observable(Space::quasi, 2.0);
  const PhasePoint p0 = random_point(Space::red_quasi_1, 3, Variant::su, rng);
  const Trajectory tr = integrate(spec, p0);
  EXPECT_EQ(tr.points.size(), 11u);
  EXPECT_LT(point_distance(tr.points.back(), p0), 1e-9);
}

TEST(Flows, RegularityLossStopsTheRun) {
  // red_cot_2 with g diagonal: g stays put and lambda moves at constant speed
  // -(nabla h)_0 = -i sin(theta), so the two eigenvalues collide at t ~ 0.104.
  const cplx I(0, 1);
  PhasePoint p{Space::red_cot_2, Variant::su,
               {MatC{{std::exp(I * 0.5), 0.0}, {0.0, std::exp(-I * 0.5)}}, MatC{{I * 0.05, 0.0}, {0.0, -I * 0.05}}}};
  Tolerances saved = tolerances(), tol = saved;
  tol.regular = 0.02;
  set_tolerances(tol);
  FlowSpec spec;
  spec.space = Space::red_cot_2;
  spec.family = Family::pi1;
  spec.hamiltonian = make_trace_observable(Space::cotangent, re({"g"}));
  spec.t_max = 0.5;
  spec.dt = 1e-3;
  const Trajectory tr = integrate(spec, p);
  set_tolerances(saved);
  EXPECT_FALSE(tr.completed);
  EXPECT_NE(tr.status.find("regularity"), std::string::npos);
  EXPECT_GT(tr.times.back(), 0.07);
  EXPECT_LT(tr.times.back(), 0.11);
}

TEST(GaugeFix, SlicedInputIsUntouched) {
  Rng rng(17);
  for (Space s : kSlices) {
    const PhasePoint p = random_point(s, 3, Variant::su, rng);
    const GaugeFix gf = gauge_fix(s, lift(p));
    EXPECT_LT(point_distance(gf.point, p), 1e-12) << to_string(s);
    EXPECT_LT(dist_fro(gf.eta, MatC::identity(3)), 1e-12);
  }
}

TEST(GaugeFix, RecoversSlicePointAfterAction) {
  Rng rng(18);
  for (Variant v : {Variant::su, Variant::u})
    for (Space s : kSlices) {
      const PhasePoint p = random_point(s, 3, v, rng);
      const MatC eta = random_unitary(3, v, rng);
      const PhasePoint moved = act(eta, lift(p));
      const GaugeFix canon = gauge_fix(s, moved);
      validate(canon.point, 1e-9);
      const GaugeFix gf = gauge_fix(s, moved, &p);
      EXPECT_LT(point_distance(gf.point, p), 1e-9) << to_string(s);
      EXPECT_LT(point_distance(lift(gf.point), act(gf.eta, moved)), 1e-9);
    }
}

TEST(GaugeFix, ContinuityAlongSmoothPath) {
  Rng rng(19);
  for (Space s : {Space::red_cot_1, Space::red_heis_2, Space::red_quasi_2}) {
    const Family f = slice_family(s);
    const Observable h = family_hamiltonian(s, f);
    // Start away from the slice so the path needs a moving gauge.
    PhasePoint start = act(random_unitary(3, Variant::su, rng), lift(random_point(s, 3, Variant::su, rng)));
    GaugeFix prev = gauge_fix(s, start);
    for (int k = 1; k <= 40; ++k) {
      const PhasePoint x = exact_flow(f, h, start, 0.01 * k);
      const GaugeFix cur = gauge_fix(s, x, &prev.point);
      for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(cur.residual.perm[j], j);
      EXPECT_LT(point_distance(cur.point, prev.point), 0.1) << to_string(s) << " step " << k;
      prev = cur;
    }
  }
}
