#pragma once

#include "dsim/cxmat.hpp"
#include "dsim/lie.hpp"

namespace dsim {

/**
 * Dynamical r-matrices, all diagonal in the matrix-unit basis: component
 * (j,k), j != k, is multiplied by a number built from the diagonal site data
 * and the diagonal of the input is dropped.
 *
 *   R(Q)        1/2 (mu + 1)/(mu - 1), mu = Q_j / Q_k   (Q torus, or Q = Gamma^2)
 *   r(lambda)   1 / (lambda_j - lambda_k)
 *   rho(Gamma)  1 / sinh(gamma_j - gamma_k),   gamma = log Gamma
 *   R(Gamma^2)  1/2 coth(gamma_j - gamma_k)
 */
enum class RKind { R_Q, r_lambda, rho_Gamma, R_Gamma2, R_i };

MatC apply_R_Q(const MatC& q, const MatC& x);
MatC apply_r_lambda(const MatC& lambda, const MatC& x);
MatC apply_rho_Gamma(const MatC& gamma, const MatC& x);
MatC apply_R_Gamma2(const MatC& gamma, const MatC& x);
/// R^i(X) = (-iX)_G = i (X_upper - X_lower).
MatC apply_R_i(const MatC& x);

/// Directional derivative of r at lambda along the Cartan element z:
/// component multiplier -(z_j - z_k)/(lambda_j - lambda_k)^2.
MatC apply_dr_lambda(const MatC& lambda, const MatC& z, const MatC& x);

/// Which sign convention of the derivative terms to test. With r = (ad lambda)^{-1}
/// and ordinary directional derivatives the identity reads
///   [rX, rY] = r([X, rY] + [rX, Y]) - d_{Y0} r X + d_{X0} r Y - sum_i K^i <X, d_{K_i} r Y>_G
/// (`holds`). The `printed` form has the opposite sign on the three
/// derivative terms; it is the same identity for r = -(ad lambda)^{-1}.
enum class CdybeForm { holds, printed };

/// Norm of the difference of the two sides, K_i and K^i dual bases of G0.
double cdybe_residual(const MatC& lambda, const MatC& x, const MatC& y, Variant v,
                      CdybeForm form = CdybeForm::holds);

}  // namespace dsim
