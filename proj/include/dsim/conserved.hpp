#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dsim/flows.hpp"

namespace dsim {

/**
 * Matrix-valued constants of motion.
 *
 *   psi1             cotangent  (g^{-1} J g, J)          constant along pi2 flows
 *   psi2             cotangent  (g, J - g^{-1} J g)      constant along pi1 flows
 *   psi3             (g,b)      (g^{-1} L g, L), L = b b^dagger   pi2 flows
 *   psi4             K or (g,b) W = b_L g_R b_L^{-1}     pi1 flows
 *   quasi_pair       quasi      (g2, g1 g2 g1^{-1})      pi2 flows
 *   quasi_pair_dual  quasi      (g1, g2 g1 g2^{-1})      pi1 flows
 *   casimir_arg      quasi      g1 g2 g1^{-1} g2^{-1}
 *
 * Slice points are lifted. Every map is equivariant: the simple action on
 * (g,b), the quasi-adjoint action on K and conjugation elsewhere go over to
 * conjugation of each output matrix.
 */
enum class ConservedKind { psi1, psi2, psi3, psi4, quasi_pair, quasi_pair_dual, casimir_arg };

const char* to_string(ConservedKind k);
ConservedKind parse_conserved_kind(const std::string& s);
/// Unreduced space the map is defined on (psi4 also accepts (g,b) points).
Space conserved_space(ConservedKind k);
/// Whether the flows of the given pullback family keep the map constant.
bool conserved_along(ConservedKind k, Family f);

std::vector<MatC> conserved_value(ConservedKind k, const PhasePoint& p);

/// Kinds that apply to points of the given space.
std::vector<ConservedKind> conserved_kinds(Space s);

// ---- spin Sutherland ------------------------------------------------------------

/// J = -i p - R(Q) xi - xi/2 with Q = exp(i q). q, p real diagonal, xi in Gperp.
MatC spin_suth_pack(const MatC& q, const MatC& p, const MatC& xi);
/// -1/2 <ip, ip> + 1/2 sum_{j<k} |xi_jk|^2 / (2 sin^2((q_j - q_k)/2)).
double spin_suth_hamiltonian(const MatC& q, const MatC& p, const MatC& xi);

/// Unipotent upper-triangular b with Q^{-1} b^{-1} Q b S = 1, solved one
/// superdiagonal at a time: (u_k/u_j - 1) b_jk = S_jk + sum_{j<m<k} b_jm S_mk.
MatC solve_bplus(const MatC& q, const MatC& s_plus);
/// e^p b b^dagger e^p with b = solve_bplus(Q, S_plus).
MatC deformed_lax(const MatC& q, const MatC& p, const MatC& s_plus);

// ---- SL(2,Z) on the quasi double -------------------------------------------------

enum class Sl2zMap { S, T };

/// S(g1,g2) = (g2^{-1}, g2^{-1} g1 g2), T(g1,g2) = (g1 g2, g2).
PhasePoint sl2z_map(Sl2zMap which, const PhasePoint& p);
/// Applies a word such as "STS" right to left (the last letter acts first).
PhasePoint sl2z_word(const std::string& word, const PhasePoint& p);

/// Largest discrepancy, over the quasi invariant panel, between S^2 and (S T)^3
/// and between S^4 and the identity. The relations hold on orbits only.
double sl2z_relation_defect(const PhasePoint& p);

// ---- Haar averaging -----------------------------------------------------------

struct HaarEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Monte-Carlo estimate of the integral of F(act(eta, p)) over Haar-random eta.
/// Samples come from qr_pos of complex Gaussian matrices; the positive diagonal
/// of R is the phase correction that makes the Q factor Haar distributed.
HaarEstimate haar_average(const Observable& f, const PhasePoint& p, std::size_t num_samples, std::uint64_t seed);

}  // namespace dsim
