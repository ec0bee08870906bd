#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dsim/observables.hpp"

namespace dsim {

/// Pullback families: pi1 Hamiltonians depend on the first component only
/// (h(g), h(g1)), pi2 Hamiltonians on the second (phi(J), phi(b), phi(g2)).
enum class Family { pi1, pi2 };

const char* to_string(Family f);
Family parse_family(const std::string& s);

/// The family whose reduced equation is formulated on a slice: pi2 on the
/// red_*_1 slices, pi1 on the red_*_2 slices.
Family slice_family(Space slice);

/// Family of a trace word on an unreduced space (or the parent of a slice):
/// the family whose component carries every letter. nullopt when the word
/// mixes components, uses constants, or the space is heisenberg_K.
std::optional<Family> word_family(Space s, const WordSpec& w);

/// exp(X) = beta gamma with beta in B and gamma unitary, from qr_pos(exp(X)^{-1}).
struct BGFactor {
  MatC beta, gamma;
};
BGFactor factor_BG(const MatC& p);

/**
 * Closed-form integral curve of the pullback Hamiltonian H through p0.
 *
 *   cotangent  pi2: g -> exp(t dphi(J)) g            pi1: J -> J - t nabla h(g)
 *   (g,b)      pi2: g -> exp(t Dphi(b)) g            pi1: g -> gamma g gamma^{-1}, b -> beta^{-1} b
 *              with exp(i t nabla h(g)) = beta gamma
 *   K          through the model map
 *   quasi      pi2: g1 -> g1 exp(-t nabla phi(g2))    pi1: g2 -> g2 exp(t nabla phi(g1))
 *
 * Slice points are lifted; the result lives on the unreduced space. H may be
 * given on the (g,b) model or on the K model for either Heisenberg space.
 */
PhasePoint exact_flow(Family family, const Observable& h, const PhasePoint& p0, double t);

/// H evaluated at p, translating between the two Heisenberg models when needed.
double eval_hamiltonian(const Observable& h, const PhasePoint& p);

/**
 * Right-hand side of the reduced equation on a slice, in the slice's own
 * coordinates:
 *
 *   red_cot_1   (Q,J)      Qdot = (dphi)_0 Q,  Jdot = [R(Q) dphi, J]
 *   red_cot_2   (g,lambda) gdot = [g, r(lambda) nabla h],  lambdadot = -(nabla h)_0
 *   red_heis_1  (Q,b)      Qdot = (Dphi)_0 Q,  bdot = b (b^{-1} (R(Q) Dphi) b)_B
 *   red_heis_2  (g,Gamma)  gdot = 2 [g, R(Gamma^2)(i nabla h)],  Gammadot = -i (nabla h)_0 Gamma
 *   red_quasi_1 (Q,g)      Qdot = -(nabla phi)_0 Q,  gdot = [g, R(Q) nabla phi]
 *   red_quasi_2 (g,Q)      Qdot = (nabla phi)_0 Q,  gdot = -[g, R(Q) nabla phi]
 *
 * The Gamma equation is the square-root form of Pdot = -2i (nabla h)_0 P, P = Gamma^2.
 * Throws Usage for a family that does not match the slice and Regularity when
 * the diagonal component is singular.
 */
std::vector<MatC> reduced_rhs(Family family, const Observable& h, const PhasePoint& p);

/// red_heis_1 in the variables (Q, L = b b^dagger):
/// Qdot = (scriptD phi)_0 Q, Ldot = [R(Q) scriptD phi, L].
std::vector<MatC> reduced_rhs_lax(const Observable& h, const PhasePoint& p);

struct FlowSpec {
  Space space = Space::red_cot_1;  // slice: RK4 on the reduced equation; unreduced: exact flow samples
  Family family = Family::pi2;
  Observable hamiltonian;
  double t_max = 1.0;
  double dt = 1e-3;
  std::size_t stride = 1;  // record every stride-th step
  bool restore = true;     // structure restoration after RK4 steps
  std::uint64_t seed = 0;  // recorded only
};

struct Trajectory {
  std::vector<double> times;
  std::vector<PhasePoint> points;
  std::vector<double> hamiltonian;
  std::vector<double> structure_residual;
  std::string method;  // "rk4" or "exact"
  double dt = 0.0;
  std::uint64_t seed = 0;
  bool restore = true;
  std::size_t restorations = 0;
  bool completed = true;
  std::string status = "ok";
};

/// Largest violation of the structural tags of p (unitarity, Hermiticity,
/// triangularity, diagonal slice components, unit determinant for su).
double structure_residual(const PhasePoint& p);

/// Pulls p back onto its structure; returns whether anything changed beyond
/// the configured trigger.
bool restore_structure(PhasePoint& p);

/// Fixed-step classical RK4 on slices, exact samples on unreduced spaces.
/// Regularity loss stops the run; the trajectory keeps the last good state and
/// reports the time in `status`.
Trajectory integrate(const FlowSpec& spec, const PhasePoint& p0);

/**
 * Gauge fixing of an unreduced point onto a slice.
 *
 * The designated component is diagonalized (g, g1 or g2 for torus slices, iJ
 * for red_cot_2, L = b b^dagger for red_heis_2) and the G element eta doing so
 * is applied with the space's action (the simple action on (g,b)). Already
 * diagonal components are left alone. The residual normalizer freedom
 * (permutation times phases) is fixed by ascending order, or, when `prev` is
 * given, by the nearest match to prev: eigenvalues are paired by distance and
 * phases chosen to align the partner component.
 *
 *   point    = act(eta, p) tagged with the slice
 *   residual = normalizer element applied after the canonical diagonalization
 */
struct GaugeFix {
  PhasePoint point;
  MatC eta;
  GaugeElement residual;
};

GaugeFix gauge_fix(Space slice, const PhasePoint& p, const PhasePoint* prev = nullptr);

struct ProjectionReport {
  double invariant_deviation = 0.0;   // max over samples and panel words
  double coordinate_deviation = 0.0;  // gauge-fixed slice coordinates, diagnostic
  double panel_scale = 0.0;           // max |panel value| seen, shows the comparison is not vacuous
  std::size_t samples = 0;
};

/// Integrates the reduced equation from p0 (a slice point) and compares each
/// sample with the gauge-fixed exact unreduced flow from the same point.
ProjectionReport projection_check(const FlowSpec& spec, const PhasePoint& p0);

}  // namespace dsim
