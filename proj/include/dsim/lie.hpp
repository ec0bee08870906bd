#pragma once

#include <string>
#include <vector>

#include "dsim/cxmat.hpp"

namespace dsim {

/// su(n) (traceless, default) or u(n).
enum class Variant { su, u };

const char* to_string(Variant v);
Variant parse_variant(const std::string& s);

/**
 * Real subspaces of gl(n,C).
 *
 *   G      anti-Hermitian (traceless for su)
 *   B      upper triangular with real diagonal (traceless for su)
 *   G0     imaginary diagonal           iG0   real diagonal
 *   Gperp  anti-Hermitian, zero diagonal
 *   Bgt    strictly upper triangular
 *   GCperp zero diagonal (complex)
 */
enum class Subspace { full, G, B, G0, iG0, Gperp, Bgt, GCperp };

const char* to_string(Subspace s);
Subspace parse_subspace(const std::string& s);

struct AlgElem {
  MatC mat;
  Subspace tag = Subspace::full;
};

/// X = X_G + X_B. With X = L + D + U (strict lower, diagonal, strict upper):
/// X_G = L - L^dagger + i Im D and X_B = U + L^dagger + Re D.
MatC proj_G(const MatC& x);
MatC proj_B(const MatC& x);

/// Projection onto the tagged subspace. G and B use the split above; the
/// Cartan tags keep the diagonal (imaginary / real part), the perp tags zero it.
MatC project(const MatC& x, Subspace target);
AlgElem project(const AlgElem& x, Subspace target);

/// Subtracts tr(X)/n from the diagonal (su) or returns X unchanged (u).
MatC remove_trace(const MatC& x, Variant v);

bool in_subspace(const MatC& x, Subspace s, Variant v, double tol);

double form_G(const MatC& x, const MatC& y);  // Re tr(XY)
double form_I(const MatC& x, const MatC& y);  // Im tr(XY)

MatC tau(const MatC& z);        // Z^dagger
MatC tau_group(const MatC& k);  // K^dagger

enum class RegularKind { torus, cartan, b0 };

/// Pairwise gap test on the diagonal entries of x: |Q_j - Q_k| for torus
/// elements, |lambda_j - lambda_k| for Cartan elements and |log G_j - log G_k|
/// for B0 elements. Throws Usage for non-diagonal input.
bool is_regular(const MatC& x, RegularKind kind, double tol);
bool is_regular(const MatC& x, RegularKind kind);

/// Smallest pairwise gap used by is_regular.
double regularity_gap(const MatC& x, RegularKind kind);

/// Weyl-Chevalley data for A_{n-1} in the matrix-unit basis.
struct RootBasis {
  std::size_t n = 0;
  Variant variant = Variant::su;
  std::vector<std::pair<std::size_t, std::size_t>> positive;  // (j,k), j<k
  std::vector<MatC> cartan;       // H_j = E_jj - E_{j+1,j+1} (su) or E_jj (u)
  std::vector<MatC> cartan_G;     // K_i = i H_i, a basis of G0
  std::vector<MatC> cartan_dual;  // K^i with form_G(K_i, K^j) = delta
};

RootBasis root_basis(std::size_t n, Variant v);

/// Real basis of a subspace (dimension matches the variant).
std::vector<MatC> subspace_basis(std::size_t n, Subspace s, Variant v);

/// Orthonormal (with respect to -form_G) basis e_a of G: form_G(e_a, e_b) = -delta.
std::vector<MatC> orthonormal_G_basis(std::size_t n, Variant v);

}  // namespace dsim
