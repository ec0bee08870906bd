#pragma once

#include <string>
#include <vector>

#include "dsim/cxmat.hpp"
#include "dsim/lie.hpp"

namespace dsim {

/**
 * Phase spaces.
 *
 * Unreduced: cotangent (g,J), heisenberg_K (K), heisenberg_GB (g,b), quasi (g1,g2).
 * Slices keep the component layout of their parent space with one component
 * restricted to the diagonal torus (or Cartan / positive diagonal):
 *   red_cot_1 (Q,J)  red_cot_2 (g,lambda)  red_heis_1 (Q,b)  red_heis_2 (g,Gamma)
 *   red_quasi_1 (Q,g) with Q = g1      red_quasi_2 (g,Q) with Q = g2
 * "red_quasi" is accepted as a name for red_quasi_1.
 */
enum class Space {
  cotangent,
  heisenberg_K,
  heisenberg_GB,
  quasi,
  red_cot_1,
  red_cot_2,
  red_heis_1,
  red_heis_2,
  red_quasi_1,
  red_quasi_2
};

const char* to_string(Space s);
Space parse_space(const std::string& s);
bool is_slice(Space s);
/// Parent unreduced space of a slice (identity on unreduced spaces).
Space parent_space(Space s);
std::size_t component_count(Space s);
/// Index of the diagonal component of a slice.
std::size_t slice_component(Space s);

struct PhasePoint {
  Space space = Space::cotangent;
  Variant variant = Variant::su;
  std::vector<MatC> components;

  std::size_t n() const { return components.empty() ? 0 : components.front().n(); }
  const MatC& operator[](std::size_t i) const { return components.at(i); }
  MatC& operator[](std::size_t i) { return components.at(i); }
};

PhasePoint make_point(Space s, Variant v, std::vector<MatC> comps);

/// Same components, tagged with the parent space.
PhasePoint lift(const PhasePoint& p);

/// Checks the structural tags of every component. Throws ContractViolation.
void validate(const PhasePoint& p, double tol = 1e-8);

// ---- Iwasawa maps ----------------------------------------------------------

/// K = gL bR^{-1} = bL gR^{-1}. gL, bR come from qr_pos(K) = Q R (gL = Q,
/// bR = R^{-1}); gR, bL from qr_pos(K^{-1}) = Q' R' (gR = Q', bL = R'^{-1}).
struct Iwasawa {
  MatC gL, bR, bL, gR;
};

Iwasawa iwasawa(const MatC& k);
MatC xi_L(const MatC& k);
MatC xi_R(const MatC& k);
MatC lambda_L(const MatC& k);
MatC lambda_R(const MatC& k);

/// Dress_eta(b) = Lambda_L(eta b).
MatC dressing(const MatC& eta, const MatC& b);
/// d/dt Dress_{exp(tX)}(b) at t = 0, equal to b (b^{-1} X b)_B.
MatC infinitesimal_dressing(const MatC& x, const MatC& b);

MatC nu(const MatC& b);      // b b^dagger
MatC nu_inv(const MatC& l);  // chol_upper

/// m(K) = (Xi_R(K), Lambda_R(K)) as a heisenberg_GB point.
PhasePoint model_map(const MatC& k, Variant v = Variant::su);
/// Inverse of m: with b^{-1} g = Q R, K = Q^dagger b^{-1}.
MatC model_map_inv(const MatC& g, const MatC& b);

// ---- actions ---------------------------------------------------------------

/// Heisenberg actions: simple is (eta g eta^{-1}, Dress_eta b); quasi_adjoint is
/// the Poisson-Lie action on (g,b) or on K, whichever model the point uses.
enum class HeisAction { simple, quasi_adjoint };

/// Conjugation for cotangent and quasi points. Heisenberg (g,b) points use the
/// selected action; K points always use the quasi-adjoint action
/// eta K Xi_R(eta Lambda_L(K)). Slice points are lifted first.
PhasePoint act(const MatC& eta, const PhasePoint& p, HeisAction kind = HeisAction::simple);

/// The element eta' with quasi_adjoint(eta) = simple(eta') on (g,b):
/// eta' = Xi_R(eta b_L)^{-1} with b_L = Lambda_L(g^{-1} b)^{-1}.
MatC quasi_adjoint_partner(const MatC& eta, const PhasePoint& p);

/// Cotangent: J - g^{-1} J g. Heisenberg: Lambda_L(K) Lambda_R(K) = bL bR.
/// Quasi: g1 g2 g1^{-1} g2^{-1}.
MatC moment(const PhasePoint& p);

// ---- normalizer elements ---------------------------------------------------

/// eta = P diag(phases): column j carries phases[j] in row perm[j].
struct GaugeElement {
  std::vector<std::size_t> perm;
  std::vector<cplx> phases;

  static GaugeElement identity(std::size_t n);
  MatC matrix() const;
  /// (this * other).matrix() == this->matrix() * other.matrix().
  GaugeElement compose(const GaugeElement& other) const;
  GaugeElement inverse() const;
};

}  // namespace dsim
