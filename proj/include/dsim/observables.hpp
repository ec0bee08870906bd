#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dsim/doubles.hpp"

namespace dsim {

/**
 * Derivative flavors.
 *
 *   nabla1, nabla1p  G-valued, <X, .>_G = d/dt F(e^{tX} c0), F(c0 e^{tX})
 *   nabla2, nabla2p  the same for the second component (quasi double)
 *   d2               G-valued, <X, .>_G = d/dt F(g, J + tX)
 *   D1, D1p          B-valued, <X, .>_I for X in G acting on the first component
 *   D2, D2p          G-valued, <X, .>_I for X in B acting on the second component
 *   scriptD          derivative of phi(L) through L = b b^dagger; equals D2
 *   nabla, nablap    gl-valued, <X, .>_I for X in gl acting on K
 *
 * On slice points the slice component only moves along the Cartan torus, so
 * its flavors take values in G0 or iG0.
 */
enum class Flavor { nabla1, nabla1p, nabla2, nabla2p, d2, D1, D1p, D2, D2p, scriptD, nabla, nablap };

const char* to_string(Flavor f);
Flavor parse_flavor(const std::string& s);

enum class Side { left, right, additive };

struct FlavorSpec {
  std::size_t component = 0;
  Side side = Side::left;
  Subspace direction = Subspace::G;  // X ranges over this subspace
  bool imaginary_form = false;       // pairing: Im tr (true) or Re tr (false)
  Subspace target = Subspace::G;     // the derivative lives here
};

/// Throws MissingFlavor when the flavor does not exist on the space.
FlavorSpec flavor_spec(Space s, Flavor f);
std::vector<Flavor> flavors_of(Space s);

/// Trace-word specification: coeff * (Re|Im) tr(letters...).
struct WordSpec {
  std::vector<std::string> letters;
  bool imaginary = false;
  double coeff = 1.0;
  std::vector<MatC> constants;  // referenced by letters "C0", "C1", ...
};

class Observable {
 public:
  using Eval = std::function<double(const PhasePoint&)>;
  /// Returns the flavor value already mapped to the flavor's target subspace.
  using Grad = std::function<MatC(const PhasePoint&, Flavor)>;

  Observable() = default;
  Observable(Space space, Eval eval, Grad grad = {}, bool invariant = false, std::string descriptor = "");

  Space space() const { return space_; }
  bool invariant() const { return invariant_; }
  const std::string& descriptor() const { return descriptor_; }
  bool has_analytic() const { return static_cast<bool>(grad_); }
  /// Finite-difference step override (0 uses the configured step).
  double fd_step() const { return fd_step_; }
  Observable& set_fd_step(double h) {
    fd_step_ = h;
    return *this;
  }

  double operator()(const PhasePoint& p) const;
  MatC analytic(const PhasePoint& p, Flavor f) const;

 private:
  Space space_ = Space::cotangent;
  Eval eval_;
  Grad grad_;
  bool invariant_ = false;
  std::string descriptor_;
  double fd_step_ = 0.0;
};

/// Whether an observable defined on `obs_space` may be evaluated at a point of `point_space`.
bool accepts(Space obs_space, Space point_space);

Observable make_trace_observable(Space s, const WordSpec& w);
/// Sum of trace words.
Observable make_trace_observable(Space s, const std::vector<WordSpec>& ws);
Observable constant_observable(Space s, double c);
/// F = Re tr(A c_k) for a fixed matrix A and component k.
Observable linear_observable(Space s, std::size_t component, const MatC& a);
Observable sum(const Observable& f, const Observable& h);
Observable scale(const Observable& f, double c);
Observable product(const Observable& f, const Observable& h);
/// F o m on the K model, for F on the (g,b) model (no analytic flavors).
Observable pullback_to_K(const Observable& f);
/// F o m^{-1} on the (g,b) model, for F on the K model (no analytic flavors).
Observable pullback_to_GB(const Observable& f);

/// Letters valid for a space (canonical spelling).
std::vector<std::string> alphabet(Space s);
/// Canonical letter spelling: "g⁻¹" -> "ginv", "g₁" -> "g1", "K†" -> "Kdag".
std::string canonical_letter(const std::string& letter);
/// Whether the word's trace is invariant under the space's G-action.
bool word_is_invariant(Space s, const WordSpec& w);
/// The single component every letter of the word refers to; nullopt for
/// words mixing components or using constants. Throws Schema on unknown letters.
std::optional<std::size_t> word_component(Space s, const WordSpec& w);

/// A fixed family of words per space used by the verification suites. The
/// invariant panel holds only G-invariant words; the generic panel adds words
/// that break invariance.
std::vector<WordSpec> invariant_word_panel(Space s);
std::vector<WordSpec> generic_word_panel(Space s);

/// Analytic value if available, otherwise the finite-difference gradient.
MatC derivative(const Observable& f, const PhasePoint& p, Flavor fl);

/// Central difference along the exp-chart curve of the flavor in direction x,
/// Richardson-extrapolated once. step <= 0 selects the observable's step.
double fd_derivative(const Observable& f, const PhasePoint& p, Flavor fl, const MatC& x, double step = 0.0);

/// Full finite-difference gradient: directional derivatives along a basis of
/// the direction subspace, solved against the pairing Gram matrix.
MatC fd_gradient(const Observable& f, const PhasePoint& p, Flavor fl, double step = 0.0);

/// ||analytic - fd|| / max(1, ||analytic||).
double fd_validation_error(const Observable& f, const PhasePoint& p, Flavor fl);

/// Residual norm of the infinitesimal invariance identity for the space of p:
///   cotangent  g^{-1} nabla1 g - nabla1 - [J, d2]
///   (g,b)      D1 - D1p + (b D2p b^{-1})_B
///   quasi      nabla1 - nabla1p + nabla2 - nabla2p
double invariance_defect(const Observable& f, const PhasePoint& p);

/// Point perturbed along the flavor's curve: c -> e^{tX} c, c e^{tX} or c + tX.
PhasePoint move_along(const PhasePoint& p, const FlavorSpec& spec, const MatC& x, double t);

}  // namespace dsim
