#include "dsim/flows.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "dsim/config.hpp"
#include "dsim/rmat.hpp"

namespace dsim {

const char* to_string(Family f) { return f == Family::pi1 ? "pi1" : "pi2"; }

Family parse_family(const std::string& s) {
  if (s == "pi1") return Family::pi1;
  if (s == "pi2") return Family::pi2;
  throw Error(ErrorCode::Usage, "unknown family '" + s + "' (expected pi1 or pi2)");
}

Family slice_family(Space slice) {
  switch (slice) {
    case Space::red_cot_1:
    case Space::red_heis_1:
    case Space::red_quasi_1: return Family::pi2;
    case Space::red_cot_2:
    case Space::red_heis_2:
    case Space::red_quasi_2: return Family::pi1;
    default: break;
  }
  throw Error(ErrorCode::Usage, std::string(to_string(slice)) + " is not a slice");
}

std::optional<Family> word_family(Space s, const WordSpec& w) {
  const Space base = parent_space(s);
  if (base == Space::heisenberg_K) return std::nullopt;
  const auto comp = word_component(base, w);
  if (!comp) return std::nullopt;
  return *comp == 0 ? Family::pi1 : Family::pi2;
}

BGFactor factor_BG(const MatC& p) {
  // p^{-1} = gamma^{-1} beta^{-1} = Q R.
  const QR f = qr_pos(inverse(p));
  return {inverse(f.r), f.q.adjoint()};
}

namespace {

const cplx I(0.0, 1.0);

Observable on_gb(const Observable& h) {
  return h.space() == Space::heisenberg_K ? pullback_to_GB(h) : h;
}

MatC times(double t, const MatC& x) { return x * cplx(t); }

[[noreturn]] void wrong_family(Family f, Space s) {
  throw Error(ErrorCode::Usage,
              std::string("family ") + to_string(f) + " has no reduced equation on " + to_string(s));
}

RegularKind slice_regular_kind(Space s) {
  switch (s) {
    case Space::red_cot_2: return RegularKind::cartan;
    case Space::red_heis_2: return RegularKind::b0;
    default: return RegularKind::torus;
  }
}

void require_slice_regular(const PhasePoint& p) {
  const MatC& d = p[slice_component(p.space)];
  if (!is_regular(diagonal_part(d), slice_regular_kind(p.space)))
    throw Error(ErrorCode::Regularity, std::string("slice component of ") + to_string(p.space) + " is not regular");
}

}  // namespace

double eval_hamiltonian(const Observable& h, const PhasePoint& p) {
  const Space ps = parent_space(p.space);
  if (h.space() == Space::heisenberg_K && ps == Space::heisenberg_GB)
    return h(PhasePoint{Space::heisenberg_K, p.variant, {model_map_inv(p[0], p[1])}});
  if (h.space() == Space::heisenberg_GB && ps == Space::heisenberg_K) return h(model_map(p[0], p.variant));
  return h(p);
}

PhasePoint exact_flow(Family family, const Observable& h, const PhasePoint& p0, double t) {
  PhasePoint p = lift(p0);
  switch (p.space) {
    case Space::cotangent:
      if (family == Family::pi2)
        p[0] = mat_exp(times(t, derivative(h, p, Flavor::d2))) * p[0];
      else
        p[1] = p[1] - times(t, derivative(h, p, Flavor::nabla1));
      return p;
    case Space::heisenberg_K: {
      const PhasePoint q = exact_flow(family, h, model_map(p[0], p.variant), t);
      return PhasePoint{Space::heisenberg_K, p.variant, {model_map_inv(q[0], q[1])}};
    }
    case Space::heisenberg_GB: {
      const Observable hg = on_gb(h);
      if (family == Family::pi2) {
        p[0] = mat_exp(times(t, derivative(hg, p, Flavor::D2))) * p[0];
      } else {
        const BGFactor f = factor_BG(mat_exp(derivative(hg, p, Flavor::nabla1) * cplx(0.0, t)));
        p[0] = f.gamma * p[0] * f.gamma.adjoint();
        p[1] = inverse(f.beta) * p[1];
      }
      return p;
    }
    case Space::quasi:
      if (family == Family::pi2)
        p[0] = p[0] * mat_exp(times(-t, derivative(h, p, Flavor::nabla2)));
      else
        p[1] = p[1] * mat_exp(times(t, derivative(h, p, Flavor::nabla1)));
      return p;
    default: break;
  }
  throw Error(ErrorCode::WrongSpace, "exact_flow: unsupported space");
}

std::vector<MatC> reduced_rhs(Family family, const Observable& h, const PhasePoint& p) {
  if (!is_slice(p.space)) throw Error(ErrorCode::WrongSpace, "reduced_rhs needs a slice point");
  if (family != slice_family(p.space)) wrong_family(family, p.space);
  require_slice_regular(p);
  switch (p.space) {
    case Space::red_cot_1: {
      const MatC x = derivative(h, p, Flavor::d2);
      return {diagonal_part(x) * p[0], commutator(apply_R_Q(p[0], x), p[1])};
    }
    case Space::red_cot_2: {
      const MatC x = derivative(h, p, Flavor::nabla1);
      return {commutator(p[0], apply_r_lambda(p[1], x)), -diagonal_part(x)};
    }
    case Space::red_heis_1: {
      const MatC x = derivative(on_gb(h), p, Flavor::D2);
      const MatC& b = p[1];
      return {diagonal_part(x) * p[0], b * proj_B(inverse(b) * apply_R_Q(p[0], x) * b)};
    }
    case Space::red_heis_2: {
      const MatC x = derivative(on_gb(h), p, Flavor::nabla1);
      return {commutator(p[0], apply_R_Gamma2(p[1], x * I)) * cplx(2.0), diagonal_part(x) * p[1] * (-I)};
    }
    case Space::red_quasi_1: {
      const MatC x = derivative(h, p, Flavor::nabla2);
      return {-(diagonal_part(x) * p[0]), commutator(p[1], apply_R_Q(p[0], x))};
    }
    case Space::red_quasi_2: {
      const MatC x = derivative(h, p, Flavor::nabla1);
      return {-commutator(p[0], apply_R_Q(p[1], x)), diagonal_part(x) * p[1]};
    }
    default: break;
  }
  throw Error(ErrorCode::WrongSpace, "reduced_rhs: unsupported space");
}

std::vector<MatC> reduced_rhs_lax(const Observable& h, const PhasePoint& p) {
  if (p.space != Space::red_heis_1) throw Error(ErrorCode::WrongSpace, "reduced_rhs_lax needs a red_heis_1 point");
  require_slice_regular(p);
  const MatC x = derivative(on_gb(h), p, Flavor::scriptD);
  return {diagonal_part(x) * p[0], commutator(apply_R_Q(p[0], x), nu(p[1]))};
}

// ---- structure ------------------------------------------------------------------

namespace {

enum class Tag { unitary, torus, antiherm, cartan, upper, positive_diag, general };

std::vector<Tag> tags_of(Space s) {
  switch (s) {
    case Space::cotangent: return {Tag::unitary, Tag::antiherm};
    case Space::heisenberg_K: return {Tag::general};
    case Space::heisenberg_GB: return {Tag::unitary, Tag::upper};
    case Space::quasi: return {Tag::unitary, Tag::unitary};
    case Space::red_cot_1: return {Tag::torus, Tag::antiherm};
    case Space::red_cot_2: return {Tag::unitary, Tag::cartan};
    case Space::red_heis_1: return {Tag::torus, Tag::upper};
    case Space::red_heis_2: return {Tag::unitary, Tag::positive_diag};
    case Space::red_quasi_1: return {Tag::torus, Tag::unitary};
    case Space::red_quasi_2: return {Tag::unitary, Tag::torus};
  }
  return {};
}

double lower_defect(const MatC& b) {
  double d = strict_lower(b).max_abs();
  for (std::size_t j = 0; j < b.n(); ++j) d = std::max(d, std::abs(b(j, j).imag()));
  return d;
}

double component_residual(const MatC& m, Tag tag, Variant v) {
  const bool su = v == Variant::su;
  double r = 0.0;
  switch (tag) {
    case Tag::torus: r = off_diagonal(m).max_abs(); [[fallthrough]];
    case Tag::unitary:
      r = std::max(r, unitarity_residual(m));
      if (su) r = std::max(r, std::abs(determinant(m) - 1.0));
      return r;
    case Tag::cartan: r = off_diagonal(m).max_abs(); [[fallthrough]];
    case Tag::antiherm:
      r = std::max(r, (m + m.adjoint()).max_abs());
      if (su) r = std::max(r, std::abs(m.trace()));
      return r;
    case Tag::positive_diag: r = off_diagonal(m).max_abs(); [[fallthrough]];
    case Tag::upper:
      r = std::max(r, lower_defect(m));
      if (su) r = std::max(r, std::abs(determinant(m) - 1.0));
      return r;
    case Tag::general:
      if (su) r = std::abs(determinant(m) - 1.0);
      return r;
  }
  return r;
}

void restore_component(MatC& m, Tag tag, Variant v) {
  const std::size_t n = m.n();
  const bool su = v == Variant::su;
  auto fix_det = [&] {
    if (!su) return;
    const cplx d = determinant(m);
    m *= std::pow(d, -1.0 / static_cast<double>(n));
  };
  switch (tag) {
    case Tag::torus:
      m = diagonal_part(m);
      for (std::size_t j = 0; j < n; ++j) m(j, j) /= std::abs(m(j, j));
      fix_det();
      break;
    case Tag::unitary:
      m = polar_unitary(m);
      fix_det();
      break;
    case Tag::cartan:
      m = diagonal_part(m);
      [[fallthrough]];
    case Tag::antiherm: m = remove_trace(antihermitian_part(m), v); break;
    case Tag::positive_diag:
      m = diagonal_part(m);
      [[fallthrough]];
    case Tag::upper:
      m = m - strict_lower(m);
      for (std::size_t j = 0; j < n; ++j) m(j, j) = m(j, j).real();
      if (su) m *= std::pow(determinant(m).real(), -1.0 / static_cast<double>(n));
      break;
    case Tag::general: break;
  }
}

}  // namespace

double structure_residual(const PhasePoint& p) {
  const auto tags = tags_of(p.space);
  double r = 0.0;
  for (std::size_t i = 0; i < p.components.size() && i < tags.size(); ++i)
    r = std::max(r, component_residual(p[i], tags[i], p.variant));
  return r;
}

bool restore_structure(PhasePoint& p) {
  const double trig = tolerances().restore_trigger;
  const auto tags = tags_of(p.space);
  bool changed = false;
  for (std::size_t i = 0; i < p.components.size() && i < tags.size(); ++i)
    if (component_residual(p[i], tags[i], p.variant) > trig) {
      restore_component(p[i], tags[i], p.variant);
      changed = true;
    }
  return changed;
}

// ---- integration ----------------------------------------------------------------

namespace {

PhasePoint axpy(const PhasePoint& p, const std::vector<MatC>& k, double s) {
  PhasePoint q = p;
  for (std::size_t i = 0; i < q.components.size(); ++i) q[i] += k[i] * cplx(s);
  return q;
}

PhasePoint rk4_step(Family fam, const Observable& h, const PhasePoint& p, double dt) {
  const auto k1 = reduced_rhs(fam, h, p);
  const auto k2 = reduced_rhs(fam, h, axpy(p, k1, dt / 2));
  const auto k3 = reduced_rhs(fam, h, axpy(p, k2, dt / 2));
  const auto k4 = reduced_rhs(fam, h, axpy(p, k3, dt));
  PhasePoint q = p;
  for (std::size_t i = 0; i < q.components.size(); ++i)
    q[i] += (k1[i] + k2[i] * cplx(2.0) + k3[i] * cplx(2.0) + k4[i]) * cplx(dt / 6.0);
  return q;
}

void record(Trajectory& tr, const Observable& h, double t, const PhasePoint& p) {
  tr.times.push_back(t);
  tr.points.push_back(p);
  tr.hamiltonian.push_back(eval_hamiltonian(h, p));
  tr.structure_residual.push_back(structure_residual(p));
}

}  // namespace

Trajectory integrate(const FlowSpec& spec, const PhasePoint& p0) {
  if (!(spec.dt > 0.0) || !(spec.t_max >= 0.0) || spec.stride == 0)
    throw Error(ErrorCode::Usage, "integrate: need dt > 0, t_max >= 0 and stride >= 1");
  const bool space_ok = p0.space == spec.space || (!is_slice(spec.space) && parent_space(p0.space) == spec.space);
  if (!space_ok)
    throw Error(ErrorCode::WrongSpace, "integrate: initial point does not live on the requested space");
  const std::size_t steps = static_cast<std::size_t>(std::llround(spec.t_max / spec.dt));
  Trajectory tr;
  tr.dt = spec.dt;
  tr.seed = spec.seed;
  tr.restore = spec.restore;
  tr.method = is_slice(spec.space) ? "rk4" : "exact";

  if (!is_slice(spec.space)) {
    const PhasePoint start = lift(p0);
    record(tr, spec.hamiltonian, 0.0, start);
    for (std::size_t k = 1; k <= steps; ++k)
      if (k % spec.stride == 0 || k == steps) {
        const double t = static_cast<double>(k) * spec.dt;
        record(tr, spec.hamiltonian, t, exact_flow(spec.family, spec.hamiltonian, start, t));
      }
    return tr;
  }

  if (spec.family != slice_family(spec.space)) wrong_family(spec.family, spec.space);
  PhasePoint p = p0;
  require_slice_regular(p);
  record(tr, spec.hamiltonian, 0.0, p);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k) * spec.dt;
    PhasePoint next;
    try {
      next = rk4_step(spec.family, spec.hamiltonian, p, spec.dt);
      if (spec.restore && restore_structure(next)) ++tr.restorations;
      require_slice_regular(next);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Regularity) throw;
      std::ostringstream os;
      os << "regularity lost at t=" << t << "; last good state at t=" << (t - spec.dt);
      tr.completed = false;
      tr.status = os.str();
      if (tr.times.back() != t - spec.dt) record(tr, spec.hamiltonian, t - spec.dt, p);
      return tr;
    }
    p = std::move(next);
    if (k % spec.stride == 0 || k == steps) record(tr, spec.hamiltonian, t, p);
  }
  return tr;
}

// ---- gauge fixing ---------------------------------------------------------------

namespace {

// Partner component whose phases resolve the torus ambiguity.
std::size_t partner_component(Space slice) { return 1 - slice_component(slice); }

void clean_slice(PhasePoint& q, Space slice) {
  q.space = slice;
  MatC& d = q[slice_component(slice)];
  d = diagonal_part(d);
  if (slice == Space::red_heis_2)
    for (std::size_t j = 0; j < d.n(); ++j) d(j, j) = d(j, j).real();
}

std::vector<std::size_t> match_permutation(const std::vector<cplx>& d, const std::vector<cplx>& dp) {
  // perm[j] = position that the current entry j should move to.
  const std::size_t n = d.size();
  std::vector<std::size_t> best(n), perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  if (n <= 7) {
    double best_cost = std::numeric_limits<double>::infinity();
    do {
      double c = 0.0;
      for (std::size_t j = 0; j < n; ++j) c += std::norm(d[j] - dp[perm[j]]);
      if (c < best_cost) {
        best_cost = c;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  std::vector<bool> used(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t arg = 0;
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
      if (!used[i] && std::abs(d[j] - dp[i]) < m) {
        m = std::abs(d[j] - dp[i]);
        arg = i;
      }
    used[arg] = true;
    best[j] = arg;
  }
  return best;
}

// Phases alpha maximizing Re sum conj(Y_jk) e^{i(alpha_j - alpha_k)} X_jk, by coordinate ascent.
std::vector<double> align_phases(const MatC& x, const MatC& y) {
  const std::size_t n = x.n();
  std::vector<double> alpha(n, 0.0);
  for (int sweep = 0; sweep < 50; ++sweep) {
    double change = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == j) continue;
        s += std::conj(y(j, k)) * x(j, k) * std::polar(1.0, -alpha[k]);
        s += std::conj(std::conj(y(k, j)) * x(k, j) * std::polar(1.0, alpha[k]));
      }
      if (std::abs(s) < 1e-300) continue;
      const double a = -std::arg(s);
      change = std::max(change, std::abs(std::remainder(a - alpha[j], 2 * M_PI)));
      alpha[j] = a;
    }
    if (change < 1e-14) break;
  }
  return alpha;
}

}  // namespace

GaugeFix gauge_fix(Space slice, const PhasePoint& p_in, const PhasePoint* prev) {
  if (!is_slice(slice)) throw Error(ErrorCode::Usage, std::string(to_string(slice)) + " is not a slice");
  PhasePoint p = lift(p_in);
  if (p.space == Space::heisenberg_K && parent_space(slice) == Space::heisenberg_GB) p = model_map(p[0], p.variant);
  if (p.space != parent_space(slice))
    throw Error(ErrorCode::WrongSpace, std::string("cannot gauge fix a ") + to_string(p_in.space) + " point onto " +
                                           to_string(slice));
  const std::size_t n = p.n();
  const std::size_t c = slice_component(slice);

  MatC target;
  switch (slice) {
    case Space::red_cot_2: target = p[1] * I; break;
    case Space::red_heis_2: target = nu(p[1]); break;
    default: target = p[c]; break;
  }
  MatC u = MatC::identity(n);
  if (!is_diagonal(target, 1e-12 * std::max(1.0, target.norm_fro()))) {
    if (slice == Space::red_cot_2 || slice == Space::red_heis_2)
      u = eig_herm(target).vectors;
    else
      u = diag_unitary(target).vectors;
  }
  MatC eta = u.adjoint();
  GaugeElement w = GaugeElement::identity(n);

  if (prev) {
    if (prev->space != slice) throw Error(ErrorCode::WrongSpace, "gauge_fix: prev must be a point of the slice");
    PhasePoint q = act(eta, p);
    clean_slice(q, slice);
    w.perm = match_permutation(q[c].diagonal(), (*prev)[c].diagonal());
    q = act(w.matrix(), q);
    const std::size_t o = partner_component(slice);
    const auto alpha = align_phases(q[o], (*prev)[o]);
    for (std::size_t j = 0; j < n; ++j) w.phases[j] = std::polar(1.0, alpha[w.perm[j]]);
    eta = w.matrix() * eta;
  }
  if (p.variant == Variant::su) eta *= std::pow(determinant(eta), -1.0 / static_cast<double>(n));
  PhasePoint q = act(eta, p);
  clean_slice(q, slice);
  return {std::move(q), std::move(eta), std::move(w)};
}

// ---- projection method ----------------------------------------------------------

ProjectionReport projection_check(const FlowSpec& spec, const PhasePoint& p0) {
  if (!is_slice(spec.space) || p0.space != spec.space)
    throw Error(ErrorCode::Usage, "projection_check needs a slice spec and a point of that slice");
  const Trajectory tr = integrate(spec, p0);
  if (!tr.completed) throw Error(ErrorCode::Regularity, "projection_check: " + tr.status);
  std::vector<Observable> panel;
  for (const auto& w : invariant_word_panel(parent_space(spec.space)))
    panel.push_back(make_trace_observable(parent_space(spec.space), w));

  ProjectionReport rep;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const PhasePoint ex = exact_flow(spec.family, spec.hamiltonian, p0, tr.times[i]);
    const PhasePoint red = lift(tr.points[i]);
    for (const auto& f : panel) {
      const double a = f(ex), b = f(red);
      rep.invariant_deviation = std::max(rep.invariant_deviation, std::abs(a - b));
      rep.panel_scale = std::max(rep.panel_scale, std::abs(a));
    }
    const GaugeFix gf = gauge_fix(spec.space, ex, &tr.points[i]);
    for (std::size_t k = 0; k < gf.point.components.size(); ++k)
      rep.coordinate_deviation = std::max(rep.coordinate_deviation, dist_fro(gf.point[k], tr.points[i][k]));
    ++rep.samples;
  }
  return rep;
}

}  // namespace dsim
