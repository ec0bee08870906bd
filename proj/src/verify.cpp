#include "dsim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>

#include "dsim/brackets.hpp"
#include "dsim/config.hpp"
#include "dsim/conserved.hpp"
#include "dsim/random.hpp"
#include "dsim/rmat.hpp"

namespace dsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr const char* kVersion = "0.1.0";

// ---- small helpers ------------------------------------------------------------

/// Worst residual seen; NaN counts as a failure.
struct Worst {
  double value = 0.0;
  void add(double r) { value = std::isnan(r) ? kInf : std::max(value, r); }
};

std::size_t dim_of(std::size_t i) { return 2 + i % 3; }
Variant variant_of(std::size_t i) { return (i / 3) % 2 ? Variant::u : Variant::su; }

double rel(const MatC& a, const MatC& b) { return dist_fro(a, b) / std::max(1.0, b.norm_fro()); }
double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double point_distance(const PhasePoint& a, const PhasePoint& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.components.size(); ++i) d = std::max(d, dist_fro(a[i], b[i]));
  return d;
}

double max_dist(const std::vector<MatC>& a, const std::vector<MatC>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, rel(a[i], b[i]));
  return d;
}

MatC conj_by(const MatC& eta, const MatC& m) { return eta * m * inverse(eta); }

/// Distance of b from the upper-triangular positive-diagonal set; infinite for a nonpositive pivot.
double upper_positive_defect(const MatC& b) {
  double d = strict_lower(b).norm_fro();
  for (std::size_t j = 0; j < b.n(); ++j) {
    if (b(j, j).real() <= 0.0) return kInf;
    d = std::max(d, std::abs(b(j, j).imag()));
  }
  return d;
}

/// Largest difference of tr(A^k) and tr(B^k), k = 1..n: compares spectra without sorting.
double power_sum_gap(const MatC& a, const MatC& b) {
  double d = 0.0;
  MatC pa = a, pb = b;
  for (std::size_t k = 1; k <= a.n(); ++k) {
    d = std::max(d, std::abs(pa.trace() - pb.trace()) / std::max(1.0, std::abs(pb.trace())));
    pa = pa * a;
    pb = pb * b;
  }
  return d;
}

WordSpec re(std::vector<std::string> l, double c = 1.0) { return WordSpec{std::move(l), false, c, {}}; }
WordSpec im(std::vector<std::string> l, double c = 1.0) { return WordSpec{std::move(l), true, c, {}}; }

std::vector<Observable> panel(Space s) {
  std::vector<Observable> out;
  for (const auto& w : invariant_word_panel(s)) out.push_back(make_trace_observable(parent_space(s), w));
  return out;
}

/// A non-quadratic invariant Hamiltonian of the given family.
Observable family_hamiltonian(Space s, Family f) {
  Space base = parent_space(s);
  if (base == Space::heisenberg_K) base = Space::heisenberg_GB;
  switch (base) {
    case Space::cotangent:
      return f == Family::pi2 ? make_trace_observable(base, {re({"J", "J"}, -0.5), im({"J", "J", "J"}, 0.3)})
                              : make_trace_observable(base, {re({"g"}), im({"g", "g"}, 0.5)});
    case Space::heisenberg_GB:
      return f == Family::pi2 ? make_trace_observable(base, {re({"L"}), re({"L", "L"}, 0.05)})
                              : make_trace_observable(base, {re({"g"}), im({"g", "g"}, 0.3)});
    default:
      return f == Family::pi2 ? make_trace_observable(base, {re({"g2"}), im({"g2", "g2"}, 0.5)})
                              : make_trace_observable(base, {re({"g1"}), im({"g1", "g1"}, 0.5)});
  }
}

/// Second family member for involution checks.
Observable family_partner(Space s, Family f) {
  switch (s) {
    case Space::cotangent: return make_trace_observable(s, im(f == Family::pi1 ? std::vector<std::string>{"g", "g", "g"}
                                                                                : std::vector<std::string>{"J", "J", "J"}));
    case Space::heisenberg_GB:
      return make_trace_observable(s, f == Family::pi1 ? im({"g", "g", "g"}) : re({"L", "L", "L"}));
    default: return make_trace_observable(s, f == Family::pi1 ? im({"g1", "g1", "g1"}) : im({"g2", "g2", "g2"}));
  }
}

constexpr Space kSlices[] = {Space::red_cot_1,  Space::red_cot_2,   Space::red_heis_1,
                             Space::red_heis_2, Space::red_quasi_1, Space::red_quasi_2};
constexpr Space kUnreduced[] = {Space::cotangent, Space::heisenberg_GB, Space::heisenberg_K, Space::quasi};
constexpr ConservedKind kKinds[] = {ConservedKind::psi1,       ConservedKind::psi2,
                                    ConservedKind::psi3,       ConservedKind::psi4,
                                    ConservedKind::quasi_pair, ConservedKind::quasi_pair_dual,
                                    ConservedKind::casimir_arg};

// Word sets on the (g,b) model that depend on one component only.
std::vector<WordSpec> b_words() { return {re({"L"}), re({"b", "b"}), im({"b", "bdag", "b"}), re({"L", "L"}, 0.5)}; }
std::vector<WordSpec> g_words() { return {re({"g"}), im({"g", "g"}), re({"g", "gdag", "g"}), im({"g", "g", "g"})}; }
std::vector<WordSpec> l_words() { return {re({"L"}), re({"L", "L"}, 0.5), re({"L", "L", "L"}, 0.2)}; }

// ---- registry -------------------------------------------------------------------

using Body = std::function<double(Rng&, std::size_t)>;

struct Entry {
  PropertyInfo info;
  Body body;
};

std::vector<Entry> build_registry();

const std::vector<Entry>& registry() {
  static const std::vector<Entry> r = build_registry();
  return r;
}

void add(std::vector<Entry>& r, const char* suite, const char* name, const char* about, std::size_t samples,
         double tol, Body body, const char* comparison = "below") {
  r.push_back(Entry{PropertyInfo{name, suite, about, samples, tol, comparison}, std::move(body)});
}

// ---- cxmat ------------------------------------------------------------------------

void cxmat_suite(std::vector<Entry>& r) {
  add(r, "cxmat", "qr_roundtrip", "QR with positive pivots reconstructs random invertible matrices, n <= 6", 200, 1e-10,
      [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          const MatC a = random_ginibre(2 + i % 5, rng);
          const QR f = qr_pos(a);
          w.add(dist_fro(f.q * f.r, a) / a.norm_fro());
          w.add(unitarity_residual(f.q));
          w.add(upper_positive_defect(f.r));
        }
        return w.value;
      });
  add(r, "cxmat", "eigen_residuals", "unitary and Hermitian eigendecompositions reproduce regular inputs", 1000, 1e-9,
      [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          const std::size_t n = dim_of(i);
          const Variant v = variant_of(i);
          const MatC u = random_unitary(n, v, rng);
          const MatC g = u * random_regular_torus(n, v, rng) * u.adjoint();
          const UnitaryEigen e = diag_unitary(g);
          std::vector<cplx> ph;
          for (double a : e.phases) ph.push_back(std::polar(1.0, a));
          w.add(dist_fro(e.vectors * MatC::diag(std::span<const cplx>(ph)) * e.vectors.adjoint(), g));
          w.add(unitarity_residual(e.vectors));
          const MatC h = random_hermitian(n, v, rng);
          const HermitianEigen he = eig_herm(h);
          w.add(dist_fro(h * he.vectors, he.vectors * MatC::diag(std::span<const double>(he.values))));
          w.add(unitarity_residual(he.vectors));
        }
        return w.value;
      });
  add(r, "cxmat", "cholesky_uniqueness", "upper Cholesky of b b^dagger returns the triangular positive factor b", 200,
      1e-10, [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          const MatC b = random_B(dim_of(i), variant_of(i), rng);
          w.add(dist_fro(chol_upper(nu(b)), b) / b.norm_fro());
        }
        return w.value;
      });
  add(r, "cxmat", "exp_inverse", "exp(X) exp(-X) is the identity for |X| <= 5", 200, 1e-11,
      [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          MatC x = random_ginibre(dim_of(i), rng);
          x = x * cplx(uniform(rng, 0.0, 5.0) / x.norm_fro());
          w.add(dist_fro(mat_exp(x) * mat_exp(x * cplx(-1.0)), MatC::identity(x.n())));
        }
        return w.value;
      });
}

// ---- lie ----------------------------------------------------------------------------

void lie_suite(std::vector<Entry>& r) {
  add(r, "lie", "split_identity", "compact and triangular parts add up to the input and lie in their subalgebras",
      1000, 1e-13, [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          const MatC x = random_ginibre(dim_of(i), rng);
          const MatC xg = proj_G(x), xb = proj_B(x);
          w.add(dist_fro(xg + xb, x));
          w.add((xg + xg.adjoint()).norm_fro());
          w.add(strict_lower(xb).norm_fro());
          for (std::size_t j = 0; j < x.n(); ++j) w.add(std::abs(xb(j, j).imag()));
        }
        return w.value;
      });
  add(r, "lie", "imaginary_form_isotropy", "Im tr vanishes on pairs from the compact and from the triangular algebra",
      1000, 1e-13, [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          const std::size_t n = dim_of(i);
          const Variant v = variant_of(i);
          const MatC x = random_G(n, v, rng), y = random_G(n, v, rng);
          const MatC a = random_B_alg(n, v, rng), b = random_B_alg(n, v, rng);
          w.add(std::abs(form_I(x, y)) / (x.norm_fro() * y.norm_fro()));
          w.add(std::abs(form_I(a, b)) / (a.norm_fro() * b.norm_fro()));
        }
        return w.value;
      });
  add(r, "lie", "tau_antiautomorphism", "the adjoint map reverses commutators", 1000, 1e-12,
      [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          const MatC x = random_ginibre(dim_of(i), rng), y = random_ginibre(dim_of(i), rng);
          w.add((tau(commutator(x, y)) + commutator(tau(x), tau(y))).norm_fro());
        }
        return w.value;
      });
  add(r, "lie", "tau_flips_imaginary_form", "Im tr(tau Z1 tau Z2) = -Im tr(Z1 Z2)", 1000, 1e-12,
      [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          const MatC x = random_ginibre(dim_of(i), rng), y = random_ginibre(dim_of(i), rng);
          w.add(std::abs(form_I(tau(x), tau(y)) + form_I(x, y)));
        }
        return w.value;
      });
}

// ---- doubles -------------------------------------------------------------------------

void doubles_suite(std::vector<Entry>& r) {
  add(r, "doubles", "iwasawa_roundtrip", "both Iwasawa factorizations reconstruct K with unitary and triangular factors",
      1000, 1e-10, [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          const MatC k = random_K(dim_of(i), variant_of(i), rng);
          const Iwasawa d = iwasawa(k);
          w.add(dist_fro(d.gL * inverse(d.bR), k) / k.norm_fro());
          w.add(dist_fro(d.bL * d.gR.adjoint(), k) / k.norm_fro());
          w.add(std::max(unitarity_residual(d.gL), unitarity_residual(d.gR)));
          w.add(std::max(upper_positive_defect(d.bL), upper_positive_defect(d.bR)));
        }
        return w.value;
      });
  add(r, "doubles", "left_right_b_identity", "bL^-1 bL^-dagger = gR^-1 bR bR^dagger gR", 1000, 1e-10,
      [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          const Iwasawa d = iwasawa(random_K(dim_of(i), variant_of(i), rng));
          const MatC bli = inverse(d.bL);
          w.add(rel(bli * bli.adjoint(), d.gR.adjoint() * nu(d.bR) * d.gR));
        }
        return w.value;
      });
  add(r, "doubles", "moment_equivariance", "moment maps of T*G and of the quasi double transform by conjugation", 200,
      1e-10, [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i)
          for (Space s : {Space::cotangent, Space::quasi}) {
            const PhasePoint p = random_point(s, dim_of(i), variant_of(i), rng);
            const MatC eta = random_unitary(p.n(), p.variant, rng);
            w.add(rel(moment(act(eta, p)), conj_by(eta, moment(p))));
          }
        return w.value;
      });
  add(r, "doubles", "quasi_adjoint_invariance", "invariant functions are unchanged by the quasi-adjoint action", 100,
      1e-10, [](Rng& rng, std::size_t num) {
        Worst w;
        const auto obs = panel(Space::heisenberg_GB);
        for (std::size_t i = 0; i < num; ++i) {
          const PhasePoint p = random_point(Space::heisenberg_GB, dim_of(i), variant_of(i), rng);
          const PhasePoint pk{Space::heisenberg_K, p.variant, {model_map_inv(p[0], p[1])}};
          const MatC eta = random_unitary(p.n(), p.variant, rng);
          const PhasePoint moved = act(eta, p, HeisAction::quasi_adjoint), moved_k = act(eta, pk);
          for (const auto& f : obs) {
            w.add(rel(f(moved), f(p)));
            w.add(rel(f(model_map(moved_k[0], p.variant)), f(p)));
          }
        }
        return w.value;
      });
  add(r, "doubles", "dressing_derivative_equivariance",
      "derivatives of dressing-invariant functions of b transform by conjugation under dressing", 100, 1e-9,
      [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          const PhasePoint p = random_point(Space::heisenberg_GB, dim_of(i), variant_of(i), rng);
          const MatC eta = random_unitary(p.n(), p.variant, rng);
          PhasePoint q = p;
          q[1] = dressing(eta, p[1]);
          for (const auto& word : l_words()) {
            const Observable phi = make_trace_observable(Space::heisenberg_GB, word);
            w.add(rel(derivative(phi, q, Flavor::D2), conj_by(eta, derivative(phi, p, Flavor::D2))));
          }
        }
        return w.value;
      });
  add(r, "doubles", "model_map_intertwines_actions", "m carries the quasi-adjoint action on K to the one on (g,b)", 200,
      1e-10, [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          const Variant v = variant_of(i);
          const PhasePoint pk{Space::heisenberg_K, v, {random_K(dim_of(i), v, rng)}};
          const MatC eta = random_unitary(pk.n(), v, rng);
          const PhasePoint a = model_map(act(eta, pk)[0], v);
          const PhasePoint b = act(eta, model_map(pk[0], v), HeisAction::quasi_adjoint);
          w.add(std::max(rel(a[0], b[0]), rel(a[1], b[1])));
        }
        return w.value;
      });
}

// ---- observables ---------------------------------------------------------------------

void observables_suite(std::vector<Entry>& r) {
  add(r, "observables", "invariance_defect_panel",
      "every shipped invariant word satisfies the derivative identity of invariance on all three doubles", 100, 1e-8,
      [](Rng& rng, std::size_t num) {
        Worst w;
        for (Space s : {Space::cotangent, Space::heisenberg_GB, Space::quasi}) {
          const auto obs = panel(s);
          for (std::size_t i = 0; i < num; ++i) {
            const PhasePoint p = random_point(s, dim_of(i), variant_of(i), rng);
            for (const auto& f : obs) w.add(invariance_defect(f, p));
          }
        }
        return w.value;
      });
  add(r, "observables", "invariant_of_L_conjugates_derivatives", "D phi(b) = b D'phi(b) b^-1 for trace words in L", 100,
      1e-9, [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          const PhasePoint p = random_point(Space::heisenberg_GB, dim_of(i), variant_of(i), rng);
          for (const auto& word : l_words()) {
            const Observable phi = make_trace_observable(Space::heisenberg_GB, word);
            w.add(rel(derivative(phi, p, Flavor::D2), conj_by(p[1], derivative(phi, p, Flavor::D2p))));
          }
        }
        return w.value;
      });
  add(r, "observables", "class_function_left_right", "left and right gradients agree for class functions", 100, 1e-10,
      [](Rng& rng, std::size_t num) {
        Worst w;
        const std::pair<Space, std::vector<WordSpec>> cases[] = {
            {Space::cotangent, g_words()},
            {Space::heisenberg_GB, g_words()},
            {Space::quasi, {re({"g1"}), im({"g1", "g1"}), re({"g1", "g1", "g1"})}}};
        for (std::size_t i = 0; i < num; ++i)
          for (const auto& [s, words] : cases) {
            const PhasePoint p = random_point(s, dim_of(i), variant_of(i), rng);
            for (const auto& word : words) {
              const Observable h = make_trace_observable(s, word);
              w.add(rel(derivative(h, p, Flavor::nabla1), derivative(h, p, Flavor::nabla1p)));
            }
          }
        return w.value;
      });
  add(r, "observables", "triangular_from_compact_gradient", "D f = i nabla f + R^i(nabla f) for functions of g", 100,
      1e-10, [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          const PhasePoint p = random_point(Space::heisenberg_GB, dim_of(i), variant_of(i), rng);
          for (const auto& word : g_words()) {
            const Observable f = make_trace_observable(Space::heisenberg_GB, word);
            const MatC nab = derivative(f, p, Flavor::nabla1);
            w.add(rel(derivative(f, p, Flavor::D1), nab * cplx(0.0, 1.0) + apply_R_i(nab)));
          }
        }
        return w.value;
      });
  add(r, "observables", "analytic_derivatives_match_fd",
      "closed-form gradients of every flavor agree with finite differences on every space", 4, 1e-7,
      [](Rng& rng, std::size_t num) {
        Worst w;
        const Space spaces[] = {Space::cotangent,  Space::heisenberg_K, Space::heisenberg_GB, Space::quasi,
                                Space::red_cot_1,  Space::red_cot_2,    Space::red_heis_1,    Space::red_heis_2,
                                Space::red_quasi_1, Space::red_quasi_2};
        for (std::size_t i = 0; i < num; ++i)
          for (Space s : spaces) {
            const PhasePoint p = random_point(s, 2 + i % 2, variant_of(i * 3), rng);
            for (const auto& word : generic_word_panel(s)) {
              const Observable f = make_trace_observable(s, word);
              for (Flavor fl : flavors_of(s)) w.add(fd_validation_error(f, p, fl));
            }
          }
        return w.value;
      });
}

// ---- rmatrix --------------------------------------------------------------------------

void rmatrix_suite(std::vector<Entry>& r) {
  add(r, "rmatrix", "cartan_kernel", "the dynamical r-matrices annihilate the diagonal, R^i the diagonal of the compact algebra", 200, 1e-12,
      [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          const std::size_t n = dim_of(i);
          const Variant v = variant_of(i);
          const MatC q = random_regular_torus(n, v, rng), lam = random_regular_cartan(n, v, rng);
          const MatC gam = random_regular_b0(n, v, rng);
          const MatC d = diagonal_part(random_ginibre(n, rng));
          w.add(apply_R_Q(q, d).norm_fro());
          w.add(apply_r_lambda(lam, d).norm_fro());
          w.add(apply_rho_Gamma(gam, d).norm_fro());
          w.add(apply_R_Gamma2(gam, d).norm_fro());
          w.add(apply_R_i(project(d, Subspace::G0)).norm_fro());
        }
        return w.value;
      });
  add(r, "rmatrix", "antisymmetry", "R(Q), r(lambda) and R^i are antisymmetric for Re tr", 500, 1e-12,
      [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          const std::size_t n = dim_of(i);
          const Variant v = variant_of(i);
          const MatC q = random_regular_torus(n, v, rng), lam = random_regular_cartan(n, v, rng);
          const MatC x = random_G(n, v, rng), y = random_G(n, v, rng);
          const double s = x.norm_fro() * y.norm_fro();
          w.add(std::abs(form_G(apply_R_Q(q, x), y) + form_G(x, apply_R_Q(q, y))) / s);
          w.add(std::abs(form_G(apply_r_lambda(lam, x), y) + form_G(x, apply_r_lambda(lam, y))) / s);
          w.add(std::abs(form_G(apply_R_i(x), y) + form_G(x, apply_R_i(y))) / s);
        }
        return w.value;
      });
  add(r, "rmatrix", "subspace_preservation", "R(Q) maps the compact algebra to itself and rho the strict upper part",
      500, 1e-12, [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          const std::size_t n = dim_of(i);
          const Variant v = variant_of(i);
          const MatC rx = apply_R_Q(random_regular_torus(n, v, rng), random_G(n, v, rng));
          w.add((rx + rx.adjoint()).norm_fro());
          const MatC ru = apply_rho_Gamma(random_regular_b0(n, v, rng), strict_upper(random_ginibre(n, rng)));
          w.add((ru - strict_upper(ru)).norm_fro());
        }
        return w.value;
      });
  add(r, "rmatrix", "coth_matrix_adjoint", "R(Gamma^2)(Y^dagger) = -(R(Gamma^2) Y)^dagger", 500, 1e-12,
      [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          const MatC gam = random_regular_b0(dim_of(i), variant_of(i), rng);
          const MatC y = random_ginibre(gam.n(), rng);
          w.add(rel(apply_R_Gamma2(gam, y.adjoint()), apply_R_Gamma2(gam, y).adjoint() * cplx(-1.0)));
        }
        return w.value;
      });
  add(r, "rmatrix", "cdybe", "r(lambda) solves the classical dynamical Yang-Baxter equation", 500, 1e-9,
      [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          const std::size_t n = dim_of(i);
          const Variant v = variant_of(i);
          const MatC lam = random_regular_cartan(n, v, rng);
          w.add(cdybe_residual(lam, random_G(n, v, rng), random_G(n, v, rng), v));
        }
        return w.value;
      });
  add(r, "rmatrix", "cdybe_opposite_sign_control",
      "with the derivative terms sign-flipped the equation fails, so the check is sensitive", 5, 1e-3,
      [](Rng& rng, std::size_t num) {
        double best = 0.0;
        for (std::size_t i = 0; i < num; ++i) {
          const MatC lam = random_regular_cartan(3, Variant::su, rng);
          best = std::max(best, cdybe_residual(lam, random_G(3, Variant::su, rng), random_G(3, Variant::su, rng),
                                               Variant::su, CdybeForm::printed));
        }
        return best;
      },
      "above");
  add(r, "rmatrix", "coth_matches_torus_formula", "R(Q) at Q = Gamma^2 equals the coth form of R(Gamma^2)", 500, 1e-12,
      [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          const MatC gam = random_regular_b0(dim_of(i), variant_of(i), rng);
          const MatC u = random_ginibre(gam.n(), rng);
          w.add(rel(apply_R_Q(gam * gam, u), apply_R_Gamma2(gam, u)));
        }
        return w.value;
      });
}

// ---- brackets ------------------------------------------------------------------------

void brackets_suite(std::vector<Entry>& r) {
  add(r, "brackets", "reduced_matches_unreduced",
      "reduced bracket formulas reproduce the unreduced brackets of invariant functions on every slice", 20, 1e-8,
      [](Rng& rng, std::size_t num) {
        Worst w;
        const BracketKind kinds[] = {BracketKind::red_cot_1,  BracketKind::red_cot_2,   BracketKind::red_heis_1,
                                     BracketKind::red_heis_2, BracketKind::red_quasi_1, BracketKind::red_quasi_2};
        for (BracketKind k : kinds) {
          const Space s = bracket_space(k);
          const auto obs = panel(s);
          const std::size_t m = obs.size();
          for (std::size_t i = 0; i < num; ++i) {
            const PhasePoint p = random_point(s, dim_of(i), variant_of(i), rng);
            const PhasePoint full = lift(p);
            for (std::size_t j = 0; j < 10; ++j) {
              const std::size_t a = j % m, b = (3 * j + 1 + j / m) % m == a ? (a + 1) % m : (3 * j + 1 + j / m) % m;
              const double red = bracket(k, obs[a], obs[b], p);
              w.add(rel(red, bracket(unreduced_kind(k), obs[a], obs[b], full)));
            }
          }
        }
        return w.value;
      });
  add(r, "brackets", "model_map_is_poisson", "m takes the bracket on K to the bracket of the (g,b) model", 50, 1e-8,
      [](Rng& rng, std::size_t num) {
        Worst w;
        const auto words = generic_word_panel(Space::heisenberg_GB);
        for (std::size_t i = 0; i < num; ++i) {
          const Variant v = variant_of(i);
          const MatC k = random_K(dim_of(i), v, rng);
          const PhasePoint pk{Space::heisenberg_K, v, {k}};
          const Observable f = make_trace_observable(Space::heisenberg_GB, words[i % words.size()]);
          const Observable h = make_trace_observable(Space::heisenberg_GB, words[(3 * i + 1) % words.size()]);
          const double lhs = bracket(BracketKind::pb_fM, f, h, model_map(k, v));
          w.add(rel(lhs, bracket(BracketKind::pb_plus, pullback_to_K(f), pullback_to_K(h), pk)));
        }
        return w.value;
      });
  add(r, "brackets", "model_map_derivative_identities",
      "gradients of functions of Xi_R and Lambda_R are conjugates of their right derivatives (finite differences)", 10,
      1e-7, [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          const Variant v = variant_of(i);
          const MatC k = random_K(2 + i % 2, v, rng);
          const Iwasawa iw = iwasawa(k);
          const PhasePoint kp{Space::heisenberg_K, v, {k}};
          const PhasePoint gb = model_map(k, v);
          for (int which = 0; which < 2; ++which)
            for (const auto& word : which == 0 ? b_words() : g_words()) {
              const Observable f = make_trace_observable(Space::heisenberg_GB, word);
              const Observable fk(Space::heisenberg_K, [f](const PhasePoint& x) { return f(model_map(x[0], x.variant)); });
              const MatC dp = derivative(f, gb, which == 0 ? Flavor::D2p : Flavor::D1p);
              const MatC& right = which == 0 ? iw.bR : iw.gR;
              const MatC& left = which == 0 ? iw.gL : iw.bL;
              w.add(rel(fd_gradient(fk, kp, Flavor::nablap), conj_by(right, dp) * cplx(-1.0)));
              w.add(rel(fd_gradient(fk, kp, Flavor::nabla), conj_by(left, dp) * cplx(-1.0)));
            }
        }
        return w.value;
      });
  add(r, "brackets", "pullback_bracket_identities",
      "brackets on K of functions of Xi_R and Lambda_R reduce to the brackets on G and B and to the Im-form pairing",
      50, 1e-8, [](Rng& rng, std::size_t num) {
        Worst w;
        const auto bs = b_words(), gs = g_words();
        for (std::size_t i = 0; i < num; ++i) {
          const Variant v = variant_of(i);
          const MatC k = random_K(dim_of(i), v, rng);
          const PhasePoint pk{Space::heisenberg_K, v, {k}};
          const PhasePoint gb = model_map(k, v);
          const Observable phi1 = make_trace_observable(Space::heisenberg_GB, bs[i % bs.size()]);
          const Observable phi2 = make_trace_observable(Space::heisenberg_GB, bs[(i + 1) % bs.size()]);
          const Observable f1 = make_trace_observable(Space::heisenberg_GB, gs[i % gs.size()]);
          const Observable f2 = make_trace_observable(Space::heisenberg_GB, gs[(i + 1) % gs.size()]);
          auto plus = [&](const Observable& a, const Observable& b) {
            return bracket(BracketKind::pb_plus, pullback_to_K(a), pullback_to_K(b), pk);
          };
          w.add(rel(plus(phi1, phi2), bracket(BracketKind::pb_B, phi1, phi2, gb)));
          w.add(rel(plus(f1, f2), bracket(BracketKind::pb_G, f1, f2, gb)));
          w.add(rel(plus(f1, phi1), form_I(derivative(f1, gb, Flavor::D1), derivative(phi1, gb, Flavor::D2))));
        }
        return w.value;
      });
  add(r, "brackets", "bracket_antisymmetry", "every bracket is antisymmetric", 20, 1e-10,
      [](Rng& rng, std::size_t num) {
        Worst w;
        const BracketKind kinds[] = {BracketKind::pb_cotangent, BracketKind::pb_plus, BracketKind::pb_minus,
                                     BracketKind::pb_B,         BracketKind::pb_G,    BracketKind::pb_fM,
                                     BracketKind::qpb,          BracketKind::red_cot_1, BracketKind::red_cot_2,
                                     BracketKind::red_heis_1,   BracketKind::red_heis_2, BracketKind::red_quasi_1,
                                     BracketKind::red_quasi_2};
        for (std::size_t i = 0; i < num; ++i)
          for (BracketKind k : kinds) {
            const Space s = bracket_space(k);
            const PhasePoint p = random_point(s, dim_of(i), variant_of(i), rng);
            const auto words = is_reduced(k) ? invariant_word_panel(s) : generic_word_panel(s);
            const Space os = parent_space(s);
            const Observable f = make_trace_observable(os, words[i % words.size()]);
            const Observable h = make_trace_observable(os, words[(i + 2) % words.size()]);
            w.add(std::abs(bracket(k, f, h, p) + bracket(k, h, f, p)));
            w.add(std::abs(bracket(k, f, f, p)));
          }
        return w.value;
      });
  add(r, "brackets", "sklyanin_identity", "the Poisson-Lie bracket on G written with the Im form equals the R^i form",
      100, 1e-10, [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          const std::size_t n = dim_of(i);
          const PhasePoint p = random_point(Space::heisenberg_GB, n, variant_of(i), rng);
          const Observable f1 = make_trace_observable(Space::heisenberg_GB, g_words()[i % 4]);
          const Observable f2 = make_trace_observable(
              Space::heisenberg_GB, WordSpec{{"C0", "g"}, i % 2 == 1, 1.0, {random_ginibre(n, rng)}});
          w.add(std::abs(sklyanin_residual(f1, f2, p)));
        }
        return w.value;
      });
  add(r, "brackets", "dressing_invariants_are_central", "dressing-invariant functions Poisson-commute with everything on B",
      100, 1e-10, [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          const std::size_t n = dim_of(i);
          const PhasePoint p = random_point(Space::heisenberg_GB, n, variant_of(i), rng);
          const Observable phi = make_trace_observable(Space::heisenberg_GB, l_words()[i % 3]);
          const Observable psi = make_trace_observable(
              Space::heisenberg_GB, WordSpec{{"b", "C0"}, i % 2 == 0, 1.0, {random_ginibre(n, rng)}});
          w.add(std::abs(bracket(BracketKind::pb_B, phi, psi, p)));
        }
        return w.value;
      });
  add(r, "brackets", "quasi_casimir", "functions of the commutator g1 g2 g1^-1 g2^-1 are central for invariants", 50,
      1e-9, [](Rng& rng, std::size_t num) {
        Worst w;
        const Observable cas = make_trace_observable(
            Space::quasi, {re({"g1", "g2", "g1inv", "g2inv"}), im({"g1", "g2", "g1inv", "g2inv", "g1", "g2", "g1inv", "g2inv"}, 0.5)});
        const auto obs = panel(Space::quasi);
        for (std::size_t i = 0; i < num; ++i) {
          const PhasePoint p = random_point(Space::quasi, dim_of(i), variant_of(i), rng);
          for (const auto& h : obs) w.add(std::abs(bracket(BracketKind::qpb, cas, h, p)));
        }
        return w.value;
      });
  add(r, "brackets", "slice_derivative_reconstruction",
      "derivatives rebuilt from slice data match the unreduced derivatives on the (g,Gamma) slice", 30, 1e-9,
      [](Rng& rng, std::size_t num) {
        Worst w;
        const auto obs = panel(Space::heisenberg_GB);
        for (std::size_t i = 0; i < num; ++i) {
          const PhasePoint p = random_point(Space::red_heis_2, dim_of(i), variant_of(i), rng);
          const PhasePoint full = lift(p);
          for (const auto& f : obs) {
            const SliceDerivatives sd = slice_derivatives(f, p);
            const MatC d2p = derivative(f, full, Flavor::D2p);
            w.add(rel(sd.D2p, d2p));
            w.add(rel(sd.D2, derivative(f, full, Flavor::D2)));
            w.add(rel(sd.conj, conj_by(p[1], d2p)));
          }
        }
        return w.value;
      });
  add(r, "brackets", "quasi_jacobi_on_invariants", "the quasi-Poisson bracket satisfies Jacobi on invariant functions",
      3, 1e-4, [](Rng& rng, std::size_t num) {
        Worst w;
        const auto obs = panel(Space::quasi);
        for (std::size_t i = 0; i < num; ++i) {
          const PhasePoint p = random_point(Space::quasi, 2 + i % 2, variant_of(i), rng);
          w.add(std::abs(jacobiator(BracketKind::qpb, obs[(2 + i) % obs.size()], obs[(4 + 2 * i) % obs.size()],
                                    obs[(6 + 3 * i) % obs.size()], p)));
        }
        return w.value;
      });
  add(r, "brackets", "quasi_jacobi_fails_generically",
      "on non-invariant functions the quasi-Poisson Jacobiator is clearly nonzero", 5, 1e-2,
      [](Rng& rng, std::size_t num) {
        double best = 0.0;
        for (std::size_t i = 0; i < num; ++i) {
          const PhasePoint p = random_point(Space::quasi, 3, Variant::su, rng);
          const auto a = make_trace_observable(Space::quasi, WordSpec{{"C0", "g1"}, false, 1.0, {random_ginibre(3, rng)}});
          const auto b = make_trace_observable(Space::quasi, WordSpec{{"C0", "g2"}, false, 1.0, {random_ginibre(3, rng)}});
          const auto c =
              make_trace_observable(Space::quasi, WordSpec{{"C0", "g1", "g2"}, true, 1.0, {random_ginibre(3, rng)}});
          best = std::max(best, std::abs(jacobiator(BracketKind::qpb, a, b, c, p)));
        }
        return best;
      },
      "above");
}

// ---- flows -------------------------------------------------------------------------------

void flows_suite(std::vector<Entry>& r) {
  add(r, "flows", "exact_flow_group_law", "closed-form flows compose: flow(t1 + t2) = flow(t2) o flow(t1)", 20, 1e-9,
      [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i)
          for (Space s : kUnreduced)
            for (Family f : {Family::pi1, Family::pi2}) {
              const Observable h = family_hamiltonian(s, f);
              const PhasePoint p = random_point(s, dim_of(i), variant_of(i), rng);
              const double t1 = uniform(rng, 0.0, 0.5), t2 = uniform(rng, 0.0, 0.5);
              const PhasePoint a = exact_flow(f, h, p, t1 + t2);
              w.add(point_distance(a, exact_flow(f, h, exact_flow(f, h, p, t1), t2)));
              w.add(structure_residual(a));
            }
        return w.value;
      });
  add(r, "flows", "cotangent_invariants_of_J_conserved", "invariants of J and of g^-1 J g stay constant along pi2 flows on T*G",
      50, 1e-10, [](Rng& rng, std::size_t num) {
        Worst w;
        const Observable h = family_hamiltonian(Space::cotangent, Family::pi2);
        for (std::size_t i = 0; i < num; ++i) {
          const PhasePoint p = random_point(Space::cotangent, dim_of(i), variant_of(i), rng);
          const PhasePoint q = exact_flow(Family::pi2, h, p, uniform(rng, 0.0, 1.0));
          w.add(power_sum_gap(q[1], p[1]));
          w.add(power_sum_gap(inverse(q[0]) * q[1] * q[0], inverse(p[0]) * p[1] * p[0]));
        }
        return w.value;
      });
  add(r, "flows", "heisenberg_W_spectrum_conserved", "the spectrum of W = bL gR bL^-1 is constant along pi1 flows", 50,
      1e-9, [](Rng& rng, std::size_t num) {
        Worst w;
        const Observable h = family_hamiltonian(Space::heisenberg_GB, Family::pi1);
        for (std::size_t i = 0; i < num; ++i) {
          const PhasePoint p = random_point(Space::heisenberg_K, dim_of(i), variant_of(i), rng);
          const PhasePoint q = exact_flow(Family::pi1, h, p, uniform(rng, 0.0, 1.0));
          w.add(power_sum_gap(conserved_value(ConservedKind::psi4, q)[0], conserved_value(ConservedKind::psi4, p)[0]));
        }
        return w.value;
      });
  add(r, "flows", "quasi_pair_conserved", "g2 and g1 g2 g1^-1 stay constant along pi2 flows on the quasi double", 50,
      1e-10, [](Rng& rng, std::size_t num) {
        Worst w;
        const Observable h = family_hamiltonian(Space::quasi, Family::pi2);
        for (std::size_t i = 0; i < num; ++i) {
          const PhasePoint p = random_point(Space::quasi, dim_of(i), variant_of(i), rng);
          const PhasePoint q = exact_flow(Family::pi2, h, p, uniform(rng, 0.0, 1.0));
          w.add(dist_fro(q[1], p[1]));
          w.add(dist_fro(q[0] * q[1] * inverse(q[0]), p[0] * p[1] * inverse(p[0])));
        }
        return w.value;
      });
  add(r, "flows", "family_involution", "Hamiltonians of one family Poisson-commute", 200, 1e-9,
      [](Rng& rng, std::size_t num) {
        Worst w;
        const std::pair<Space, BracketKind> cases[] = {{Space::cotangent, BracketKind::pb_cotangent},
                                                       {Space::heisenberg_GB, BracketKind::pb_fM},
                                                       {Space::quasi, BracketKind::qpb}};
        for (auto [s, k] : cases)
          for (Family f : {Family::pi1, Family::pi2}) {
            const Observable a = family_hamiltonian(s, f), b = family_partner(s, f);
            for (std::size_t i = 0; i < num; ++i)
              w.add(std::abs(bracket(k, a, b, random_point(s, dim_of(i), variant_of(i), rng))));
          }
        return w.value;
      });
  add(r, "flows", "heisenberg_solution_derivative",
      "the closed-form pi1 flow on (g,b) satisfies its equation of motion (finite differences in t)", 10, 1e-7,
      [](Rng& rng, std::size_t num) {
        Worst w;
        const Observable h = family_hamiltonian(Space::heisenberg_GB, Family::pi1);
        const double e = 1e-3;
        for (std::size_t i = 0; i < num; ++i) {
          const PhasePoint p = random_point(Space::heisenberg_GB, dim_of(i), variant_of(i), rng);
          const double t = uniform(rng, 0.1, 1.0);
          auto at = [&](double s) { return exact_flow(Family::pi1, h, p, s); };
          const PhasePoint q = at(t), a1 = at(t + e), b1 = at(t - e), a2 = at(t + 2 * e), b2 = at(t - 2 * e);
          const MatC grad = derivative(h, q, Flavor::nabla1);
          for (std::size_t c = 0; c < 2; ++c) {
            const MatC fd = ((a1[c] - b1[c]) * cplx(8.0) - (a2[c] - b2[c])) * cplx(1.0 / (12 * e));
            const MatC rhs = c == 0 ? commutator(proj_G(grad * cplx(0, 1)), q[0]) : proj_B(grad * cplx(0, -1)) * q[1];
            w.add(dist_fro(fd, rhs));
          }
        }
        return w.value;
      });
  add(r, "flows", "transformed_initial_value",
      "the pi1 curve from an acted-on initial value is the original curve acted on by a time-dependent element", 50,
      1e-8, [](Rng& rng, std::size_t num) {
        Worst w;
        const Observable h = family_hamiltonian(Space::heisenberg_GB, Family::pi1);
        for (std::size_t i = 0; i < num; ++i) {
          const PhasePoint p = random_point(Space::heisenberg_GB, dim_of(i), variant_of(i), rng);
          const MatC eta = random_unitary(p.n(), p.variant, rng);
          const double t = uniform(rng, 0.0, 1.0);
          const MatC beta = factor_BG(mat_exp(derivative(h, p, Flavor::nabla1) * cplx(0.0, t))).beta;
          const PhasePoint direct = exact_flow(Family::pi1, h, act(eta, p), t);
          w.add(point_distance(direct, act(inverse(xi_R(eta * beta)), exact_flow(Family::pi1, h, p, t))));
        }
        return w.value;
      });
  add(r, "flows", "flow_equivariance", "flows on T*G and on the quasi double commute with conjugation", 50, 1e-9,
      [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i)
          for (Space s : {Space::cotangent, Space::quasi})
            for (Family f : {Family::pi1, Family::pi2}) {
              const Observable h = family_hamiltonian(s, f);
              const PhasePoint p = random_point(s, dim_of(i), variant_of(i), rng);
              const MatC eta = random_unitary(p.n(), p.variant, rng);
              const double t = uniform(rng, 0.0, 1.0);
              w.add(point_distance(exact_flow(f, h, act(eta, p), t), act(eta, exact_flow(f, h, p, t))));
            }
        return w.value;
      });
  add(r, "flows", "projection_method",
      "RK4 on every reduced equation matches the gauge-fixed exact flow on invariant panels, su(2) and su(3)", 1, 1e-6,
      [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i)
          for (Space s : kSlices)
            for (std::size_t n : {2, 3}) {
              FlowSpec spec;
              spec.space = s;
              spec.family = slice_family(s);
              spec.hamiltonian = family_hamiltonian(s, spec.family);
              spec.t_max = 0.5;
              spec.dt = 1e-3;
              spec.stride = 50;
              const ProjectionReport rep = projection_check(spec, random_point(s, n, Variant::su, rng));
              w.add(rep.invariant_deviation);
            }
        return w.value;
      });
  add(r, "flows", "trajectory_structure", "RK4 samples keep unitarity, positivity and slice membership", 1, 1e-8,
      [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i)
          for (Space s : kSlices) {
            FlowSpec spec;
            spec.space = s;
            spec.family = slice_family(s);
            spec.hamiltonian = family_hamiltonian(s, spec.family);
            spec.t_max = 0.5;
            spec.dt = 1e-3;
            spec.stride = 25;
            const Trajectory tr = integrate(spec, random_point(s, dim_of(i), variant_of(i), rng));
            if (!tr.completed) return kInf;
            for (double x : tr.structure_residual) w.add(x);
          }
        return w.value;
      });
  add(r, "flows", "gauge_fix_recovers_slice_point", "gauge fixing an acted-on slice point with continuity returns it",
      50, 1e-9, [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i)
          for (Space s : kSlices) {
            const PhasePoint p = random_point(s, dim_of(i), variant_of(i), rng);
            const PhasePoint moved = act(random_unitary(p.n(), p.variant, rng), lift(p));
            const GaugeFix gf = gauge_fix(s, moved, &p);
            w.add(point_distance(gf.point, p));
            w.add(point_distance(lift(gf.point), act(gf.eta, moved)));
          }
        return w.value;
      });
}

// ---- conserved ----------------------------------------------------------------------------

void conserved_suite(std::vector<Entry>& r) {
  add(r, "conserved", "conserved_constancy", "every constant-of-motion map is constant along its designated family", 30,
      1e-9, [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i)
          for (ConservedKind k : kKinds)
            for (Family f : {Family::pi1, Family::pi2}) {
              if (!conserved_along(k, f)) continue;
              const Space s = conserved_space(k);
              const PhasePoint p = random_point(s, dim_of(i), variant_of(i), rng);
              const PhasePoint q = exact_flow(f, family_hamiltonian(s, f), p, uniform(rng, 0.0, 1.0));
              w.add(max_dist(conserved_value(k, q), conserved_value(k, p)));
            }
        return w.value;
      });
  add(r, "conserved", "invariants_of_J_and_J_tilde_agree", "psi(J) = psi(g^-1 J g) for invariant psi", 200, 1e-10,
      [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          const auto v = conserved_value(ConservedKind::psi1, random_point(Space::cotangent, dim_of(i), variant_of(i), rng));
          w.add(power_sum_gap(v[0], v[1]));
        }
        return w.value;
      });
  add(r, "conserved", "moment_orthogonal_to_isotropy", "J - g^-1 J g is Re-tr orthogonal to the centralizer of regular g",
      200, 1e-12, [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          const std::size_t n = dim_of(i);
          const Variant v = variant_of(i);
          const PhasePoint p{Space::cotangent, v, {random_regular_torus(n, v, rng), random_G(n, v, rng)}};
          const MatC phi = conserved_value(ConservedKind::psi2, p)[1];
          for (const auto& x : subspace_basis(n, Subspace::G0, v))
            w.add(std::abs(form_G(phi, x)) / std::max(1.0, phi.norm_fro()));
        }
        return w.value;
      });
  add(r, "conserved", "left_right_b_invariants", "invariant functions agree on bL^-1 bL^-dagger and bR bR^dagger", 200,
      1e-9, [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          const Iwasawa d = iwasawa(random_K(dim_of(i), variant_of(i), rng));
          const MatC bli = inverse(d.bL);
          w.add(power_sum_gap(bli * bli.adjoint(), nu(d.bR)));
        }
        return w.value;
      });
  add(r, "conserved", "conserved_equivariance", "constant-of-motion maps intertwine the group actions with conjugation",
      50, 1e-9, [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          for (ConservedKind k : kKinds) {
            const Space s = conserved_space(k);
            const PhasePoint p = random_point(s, dim_of(i), variant_of(i), rng);
            const MatC eta = random_unitary(p.n(), p.variant, rng);
            auto expect = conserved_value(k, p);
            for (auto& m : expect) m = conj_by(eta, m);
            w.add(max_dist(conserved_value(k, act(eta, p)), expect));
          }
          const PhasePoint p = random_point(Space::heisenberg_GB, dim_of(i), variant_of(i), rng);
          const MatC eta = random_unitary(p.n(), p.variant, rng);
          w.add(rel(conserved_value(ConservedKind::psi4, act(eta, p, HeisAction::quasi_adjoint))[0],
                    conj_by(eta, conserved_value(ConservedKind::psi4, p)[0])));
        }
        return w.value;
      });
  add(r, "conserved", "trace_of_W", "tr W(K) = tr Xi_R(K) in the defining representation", 200, 1e-12,
      [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          const Variant v = variant_of(i);
          const MatC k = random_K(dim_of(i), v, rng);
          const MatC wk = conserved_value(ConservedKind::psi4, PhasePoint{Space::heisenberg_K, v, {k}})[0];
          w.add(std::abs(wk.trace() - xi_R(k).trace()));
        }
        return w.value;
      });
  add(r, "conserved", "spin_sutherland_identity", "-1/2 <J,J> equals the spin Sutherland Hamiltonian", 500, 1e-10,
      [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          const std::size_t n = dim_of(i);
          const Variant v = variant_of(i);
          const MatC qt = random_regular_torus(n, v, rng);
          MatC q(n), p(n);
          double trace_p = 0.0;
          for (std::size_t j = 0; j < n; ++j) {
            q(j, j) = std::arg(qt(j, j));
            p(j, j) = normal(rng);
            trace_p += p(j, j).real();
          }
          if (v == Variant::su)
            for (std::size_t j = 0; j < n; ++j) p(j, j) -= trace_p / static_cast<double>(n);
          const MatC xi = project(random_G(n, v, rng), Subspace::Gperp);
          const MatC j = spin_suth_pack(q, p, xi);
          w.add(rel(-0.5 * form_G(j, j), spin_suth_hamiltonian(q, p, xi)));
        }
        return w.value;
      });
  add(r, "conserved", "solve_bplus_residual", "b+ solves Q^-1 b+^-1 Q b+ S+ = 1", 200, 1e-10,
      [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i) {
          const std::size_t n = dim_of(i);
          const MatC q = random_regular_torus(n, variant_of(i), rng);
          const MatC sp = MatC::identity(n) + strict_upper(random_ginibre(n, rng));
          const MatC b = solve_bplus(q, sp);
          w.add(dist_fro(inverse(q) * inverse(b) * q * b * sp, MatC::identity(n)));
        }
        return w.value;
      });
  add(r, "conserved", "sl2z_relations", "S^4 = 1 and S^2 = (S T)^3 on invariant functions of the quasi double", 100,
      1e-10, [](Rng& rng, std::size_t num) {
        Worst w;
        for (std::size_t i = 0; i < num; ++i)
          w.add(sl2z_relation_defect(random_point(Space::quasi, dim_of(i), variant_of(i), rng)));
        return w.value;
      });
  add(r, "conserved", "sl2z_preserves_brackets", "S and T preserve quasi-Poisson brackets of invariant functions", 20,
      1e-8, [](Rng& rng, std::size_t num) {
        Worst w;
        const auto words = invariant_word_panel(Space::quasi);
        auto pulled = [](Sl2zMap m, const Observable& f) {
          return Observable(Space::quasi, [m, f](const PhasePoint& x) { return f(sl2z_map(m, x)); });
        };
        for (std::size_t i = 0; i < num; ++i)
          for (Sl2zMap m : {Sl2zMap::S, Sl2zMap::T}) {
            const PhasePoint p = random_point(Space::quasi, dim_of(i), variant_of(i), rng);
            const Observable f = make_trace_observable(Space::quasi, words[i % words.size()]);
            const Observable h = make_trace_observable(Space::quasi, words[(i + 3) % words.size()]);
            const double before = bracket(BracketKind::qpb, f, h, sl2z_map(m, p));
            w.add(rel(bracket(BracketKind::qpb, pulled(m, f), pulled(m, h), p), before));
          }
        return w.value;
      });
  add(r, "conserved", "haar_average_flow_constant",
      "the group average of a non-invariant constant of motion stays constant, in units of the combined standard error",
      10000, 5.0, [](Rng& rng, std::size_t num) {
        const std::size_t n = 3;
        const PhasePoint p0 = random_point(Space::cotangent, n, Variant::su, rng);
        const MatC c = random_hermitian(n, Variant::u, rng);
        const Observable f = make_trace_observable(
            Space::cotangent, WordSpec{{"C0", "J", "C0", "ginv", "J", "g"}, false, 1.0, {c}});
        const PhasePoint p1 = exact_flow(Family::pi2, family_hamiltonian(Space::cotangent, Family::pi2), p0, 1.0);
        const std::uint64_t s1 = rng(), s2 = rng();
        const HaarEstimate a = haar_average(f, p0, num, s1), b = haar_average(f, p1, num, s2);
        const double se = std::hypot(a.std_error, b.std_error);
        return se > 0.0 ? std::abs(a.mean - b.mean) / se : kInf;
      });
}

std::vector<Entry> build_registry() {
  std::vector<Entry> r;
  cxmat_suite(r);
  lie_suite(r);
  doubles_suite(r);
  observables_suite(r);
  rmatrix_suite(r);
  brackets_suite(r);
  flows_suite(r);
  conserved_suite(r);
  return r;
}

Rng property_rng(std::uint64_t seed, const std::string& name) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char ch : name) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return Rng(seq);
}

PropertyRecord run_entry(const Entry& e, std::uint64_t seed, std::size_t samples) {
  PropertyRecord rec;
  rec.name = e.info.name;
  rec.suite = e.info.suite;
  rec.about = e.info.about;
  rec.samples = samples ? samples : e.info.default_samples;
  rec.tolerance = e.info.tolerance;
  rec.comparison = e.info.comparison;
  Rng rng = property_rng(seed, e.info.name);
  try {
    rec.max_residual = e.body(rng, rec.samples);
    rec.pass = rec.comparison == "above" ? rec.max_residual > rec.tolerance : rec.max_residual < rec.tolerance;
  } catch (const Error& err) {
    rec.max_residual = kInf;
    rec.pass = false;
    rec.note = err.what();
  }
  return rec;
}

}  // namespace

bool VerifyReport::all_pass() const {
  return std::all_of(properties.begin(), properties.end(), [](const PropertyRecord& p) { return p.pass; });
}

std::vector<std::string> suite_names() {
  return {"cxmat", "lie", "doubles", "observables", "rmatrix", "brackets", "flows", "conserved"};
}

std::vector<PropertyInfo> property_catalog() {
  std::vector<PropertyInfo> out;
  for (const auto& e : registry()) out.push_back(e.info);
  return out;
}

PropertyRecord run_property(const std::string& name, std::uint64_t seed, std::size_t samples) {
  for (const auto& e : registry())
    if (e.info.name == name) return run_entry(e, seed, samples);
  throw Error(ErrorCode::Usage, "unknown property '" + name + "'");
}

VerifyReport run_suite(const std::string& suite, std::uint64_t seed) {
  const auto names = suite_names();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end())
    throw Error(ErrorCode::Usage, "unknown suite '" + suite + "'");
  VerifyReport rep;
  rep.suite = suite;
  rep.seed = seed;
  for (const auto& e : registry())
    if (suite == "all" || e.info.suite == suite) rep.properties.push_back(run_entry(e, seed, 0));
  return rep;
}

Json to_json(const PropertyRecord& r) {
  Json j{{"name", r.name},
         {"suite", r.suite},
         {"about", r.about},
         {"samples", r.samples},
         {"tolerance", r.tolerance},
         {"comparison", r.comparison},
         {"pass", r.pass}};
  // JSON has no infinity; a sample that threw or produced NaN is reported as null.
  j["max_residual"] = std::isfinite(r.max_residual) ? Json(r.max_residual) : Json(nullptr);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json to_json(const VerifyReport& r) {
  const Tolerances& t = tolerances();
  Json props = Json::array();
  std::size_t failed = 0;
  for (const auto& p : r.properties) {
    props.push_back(to_json(p));
    failed += p.pass ? 0 : 1;
  }
  Json env{{"library", "dsim"},
           {"version", kVersion},
           {"tolerances",
            {{"structure", t.structure},
             {"subspace", t.subspace},
             {"pivot", t.pivot},
             {"posdef", t.posdef},
             {"regular", t.regular},
             {"exp_norm_bound", t.exp_norm_bound},
             {"fd_step", t.fd_step},
             {"fd_step_second", t.fd_step_second},
             {"restore_trigger", t.restore_trigger},
             {"jacobi_max_sweeps", t.jacobi_max_sweeps}}}};
  return Json{{"suite", r.suite},          {"seed", r.seed},          {"pass", failed == 0},
              {"failed", failed},          {"properties", props},     {"environment", env}};
}

}  // namespace dsim
