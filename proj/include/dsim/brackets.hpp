#pragma once

#include <string>

#include "dsim/observables.hpp"

namespace dsim {

/**
 * Bracket kinds and the point space each one is evaluated on.
 *
 *   pb_cotangent (g,J)       canonical bracket on T*G
 *   pb_plus, pb_minus  K     the two brackets on the complex group
 *   pb_B, pb_G       (g,b)   Poisson-Lie brackets on B (uses b) and G (uses g)
 *   pb_fM            (g,b)   bracket of the (g,b) model of the Heisenberg double
 *   qpb              (g1,g2) quasi-Poisson bracket
 *   red_*            the matching slice
 */
enum class BracketKind {
  pb_cotangent,
  pb_plus,
  pb_minus,
  pb_B,
  pb_G,
  pb_fM,
  qpb,
  red_cot_1,
  red_cot_2,
  red_heis_1,
  red_heis_2,
  red_quasi_1,
  red_quasi_2
};

const char* to_string(BracketKind k);
BracketKind parse_bracket_kind(const std::string& s);
/// Space of the points the bracket is evaluated at.
Space bracket_space(BracketKind k);
/// Unreduced bracket whose restriction a reduced kind reproduces (identity otherwise).
BracketKind unreduced_kind(BracketKind k);
bool is_reduced(BracketKind k);

double bracket(BracketKind k, const Observable& f, const Observable& h, const PhasePoint& p);

/// {F,H} as an observable (finite-difference derivatives with the second-order step).
Observable bracket_observable(BracketKind k, const Observable& f, const Observable& h);

/// {{F,G},H} + {{G,H},F} + {{H,F},G}.
double jacobiator(BracketKind k, const Observable& f, const Observable& g, const Observable& h, const PhasePoint& p);

/// Derivatives of the unreduced invariant function rebuilt from slice data at
/// a (g,Gamma) slice point: X0 = D2 F, Y = D1p F - D1 F and
///   D2p  = X0 + 1/2 rho(Gamma)(Y + Y^dagger)
///   conj = Gamma D2p Gamma^{-1} = X0 + 1/2 (Y + Y^dagger) + R(Gamma^2)(Y + Y^dagger)
///   D2   = X0 + 1/2 (Y^dagger - Y) + R(Gamma^2)(Y + Y^dagger)
struct SliceDerivatives {
  MatC D2p, conj, D2;
};
SliceDerivatives slice_derivatives(const Observable& f, const PhasePoint& p);

/// -<D'f1, g^{-1} D f2 g>_I - (<nabla' f1, R^i nabla' f2>_G - <nabla f1, R^i nabla f2>_G) at a (g,b) point.
double sklyanin_residual(const Observable& f1, const Observable& f2, const PhasePoint& p);

}  // namespace dsim
