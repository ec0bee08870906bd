#pragma once

#include <cstdint>
#include <random>

#include "dsim/cxmat.hpp"
#include "dsim/doubles.hpp"
#include "dsim/lie.hpp"

namespace dsim {

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

/// Complex Ginibre matrix with independent standard normal real and imaginary parts.
MatC random_ginibre(std::size_t n, Rng& rng);

/// Haar-distributed unitary (QR of a Ginibre matrix with the phase fix).
/// For su the determinant is rotated to 1 by a scalar phase.
MatC random_unitary(std::size_t n, Variant v, Rng& rng);

/// Element of G with Gaussian entries of the given scale.
MatC random_G(std::size_t n, Variant v, Rng& rng, double scale = 1.0);
/// Hermitian matrix with Gaussian entries (traceless for su).
MatC random_hermitian(std::size_t n, Variant v, Rng& rng, double scale = 1.0);
/// Element of the Lie algebra B (upper triangular, real diagonal).
MatC random_B_alg(std::size_t n, Variant v, Rng& rng, double scale = 1.0);
/// Group element of B: exp of a random B element (det 1 for su).
MatC random_B(std::size_t n, Variant v, Rng& rng, double scale = 0.5);
/// Invertible complex matrix: random_unitary * random_B.
MatC random_K(std::size_t n, Variant v, Rng& rng);

/// Regular diagonal torus element diag(exp(i q)) with distinct phases that
/// stay at least `gap` apart (sum of phases zero for su).
MatC random_regular_torus(std::size_t n, Variant v, Rng& rng, double gap = 0.3);
/// Regular element of G0 (imaginary diagonal) with separated entries.
MatC random_regular_cartan(std::size_t n, Variant v, Rng& rng, double gap = 0.3);
/// Regular positive diagonal Gamma = exp(real diagonal) with separated logs.
MatC random_regular_b0(std::size_t n, Variant v, Rng& rng, double gap = 0.3);

/// Random point of a space; slice points have well separated diagonal parts.
PhasePoint random_point(Space s, std::size_t n, Variant v, Rng& rng);

double uniform(Rng& rng, double lo, double hi);
double normal(Rng& rng);

}  // namespace dsim
