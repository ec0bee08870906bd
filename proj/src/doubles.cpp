#include "dsim/doubles.hpp"

#include <cmath>

#include "dsim/config.hpp"

namespace dsim {

namespace {
constexpr Space kAllSpaces[] = {Space::cotangent,   Space::heisenberg_K, Space::heisenberg_GB, Space::quasi,
                                Space::red_cot_1,   Space::red_cot_2,    Space::red_heis_1,    Space::red_heis_2,
                                Space::red_quasi_1, Space::red_quasi_2};
}

const char* to_string(Space s) {
  switch (s) {
    case Space::cotangent: return "cotangent";
    case Space::heisenberg_K: return "heisenberg_K";
    case Space::heisenberg_GB: return "heisenberg_GB";
    case Space::quasi: return "quasi";
    case Space::red_cot_1: return "red_cot_1";
    case Space::red_cot_2: return "red_cot_2";
    case Space::red_heis_1: return "red_heis_1";
    case Space::red_heis_2: return "red_heis_2";
    case Space::red_quasi_1: return "red_quasi_1";
    case Space::red_quasi_2: return "red_quasi_2";
  }
  return "?";
}

Space parse_space(const std::string& s) {
  if (s == "red_quasi") return Space::red_quasi_1;
  for (Space t : kAllSpaces)
    if (s == to_string(t)) return t;
  throw Error(ErrorCode::Schema, "unknown space '" + s + "'");
}

bool is_slice(Space s) { return parent_space(s) != s; }

Space parent_space(Space s) {
  switch (s) {
    case Space::red_cot_1:
    case Space::red_cot_2: return Space::cotangent;
    case Space::red_heis_1:
    case Space::red_heis_2: return Space::heisenberg_GB;
    case Space::red_quasi_1:
    case Space::red_quasi_2: return Space::quasi;
    default: return s;
  }
}

std::size_t component_count(Space s) { return s == Space::heisenberg_K ? 1 : 2; }

std::size_t slice_component(Space s) {
  switch (s) {
    case Space::red_cot_1:
    case Space::red_heis_1:
    case Space::red_quasi_1: return 0;
    case Space::red_cot_2:
    case Space::red_heis_2:
    case Space::red_quasi_2: return 1;
    default: throw Error(ErrorCode::WrongSpace, std::string(to_string(s)) + " is not a slice");
  }
}

PhasePoint make_point(Space s, Variant v, std::vector<MatC> comps) {
  PhasePoint p{s, v, std::move(comps)};
  if (p.components.size() != component_count(s))
    throw Error(ErrorCode::Schema, std::string("wrong number of components for ") + to_string(s));
  const std::size_t n = p.components.front().n();
  for (const auto& c : p.components)
    if (c.n() != n || n == 0) throw Error(ErrorCode::Schema, "component dimensions differ");
  return p;
}

PhasePoint lift(const PhasePoint& p) {
  PhasePoint q = p;
  q.space = parent_space(p.space);
  return q;
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::ContractViolation, what);
}

void check_unitary(const MatC& g, Variant v, double tol, const char* name) {
  require(unitarity_residual(g) < tol, std::string(name) + " is not unitary");
  if (v == Variant::su) require(std::abs(determinant(g) - 1.0) < tol, std::string(name) + " does not have det 1");
}

void check_b(const MatC& b, Variant v, double tol, const char* name) {
  require(is_upper_positive(b, tol), std::string(name) + " is not upper triangular with positive diagonal");
  if (v == Variant::su) require(std::abs(determinant(b) - 1.0) < tol, std::string(name) + " does not have det 1");
}

}  // namespace

void validate(const PhasePoint& p, double tol) {
  if (p.components.size() != component_count(p.space))
    throw Error(ErrorCode::ContractViolation, "wrong number of components");
  for (const auto& c : p.components) require(c.all_finite(), "non-finite component");
  const Variant v = p.variant;
  switch (p.space) {
    case Space::cotangent:
      check_unitary(p[0], v, tol, "g");
      require(in_subspace(p[1], Subspace::G, v, tol), "J is not in G");
      break;
    case Space::heisenberg_K:
      if (v == Variant::su) require(std::abs(determinant(p[0]) - 1.0) < tol, "K does not have det 1");
      break;
    case Space::heisenberg_GB:
      check_unitary(p[0], v, tol, "g");
      check_b(p[1], v, tol, "b");
      break;
    case Space::quasi:
      check_unitary(p[0], v, tol, "g1");
      check_unitary(p[1], v, tol, "g2");
      break;
    case Space::red_cot_1:
      check_unitary(p[0], v, tol, "Q");
      require(is_diagonal(p[0], tol), "Q is not diagonal");
      require(in_subspace(p[1], Subspace::G, v, tol), "J is not in G");
      break;
    case Space::red_cot_2:
      check_unitary(p[0], v, tol, "g");
      require(in_subspace(p[1], Subspace::G0, v, tol), "lambda is not in G0");
      break;
    case Space::red_heis_1:
      check_unitary(p[0], v, tol, "Q");
      require(is_diagonal(p[0], tol), "Q is not diagonal");
      check_b(p[1], v, tol, "b");
      break;
    case Space::red_heis_2:
      check_unitary(p[0], v, tol, "g");
      check_b(p[1], v, tol, "Gamma");
      require(is_diagonal(p[1], tol), "Gamma is not diagonal");
      break;
    case Space::red_quasi_1:
      check_unitary(p[0], v, tol, "Q");
      require(is_diagonal(p[0], tol), "Q is not diagonal");
      check_unitary(p[1], v, tol, "g");
      break;
    case Space::red_quasi_2:
      check_unitary(p[0], v, tol, "g");
      check_unitary(p[1], v, tol, "Q");
      require(is_diagonal(p[1], tol), "Q is not diagonal");
      break;
  }
}

Iwasawa iwasawa(const MatC& k) {
  QR f = qr_pos(k);
  QR h = qr_pos(inverse(k));
  return {f.q, inverse(f.r), inverse(h.r), h.q};
}

MatC xi_L(const MatC& k) { return qr_pos(k).q; }
MatC lambda_R(const MatC& k) { return inverse(qr_pos(k).r); }
MatC xi_R(const MatC& k) { return qr_pos(inverse(k)).q; }
MatC lambda_L(const MatC& k) { return inverse(qr_pos(inverse(k)).r); }

MatC dressing(const MatC& eta, const MatC& b) { return lambda_L(eta * b); }

MatC infinitesimal_dressing(const MatC& x, const MatC& b) { return b * proj_B(inverse(b) * x * b); }

MatC nu(const MatC& b) { return b * b.adjoint(); }
MatC nu_inv(const MatC& l) { return chol_upper(l); }

PhasePoint model_map(const MatC& k, Variant v) {
  Iwasawa d = iwasawa(k);
  return PhasePoint{Space::heisenberg_GB, v, {d.gR, d.bR}};
}

MatC model_map_inv(const MatC& g, const MatC& b) {
  const MatC binv = inverse(b);
  QR f = qr_pos(binv * g);
  return f.q.adjoint() * binv;
}

MatC quasi_adjoint_partner(const MatC& eta, const PhasePoint& p) {
  if (parent_space(p.space) != Space::heisenberg_GB)
    throw Error(ErrorCode::WrongSpace, "quasi_adjoint_partner needs a (g,b) point");
  const MatC bl = inverse(lambda_L(p[0].adjoint() * p[1]));
  return xi_R(eta * bl).adjoint();
}

PhasePoint act(const MatC& eta, const PhasePoint& p0, HeisAction kind) {
  PhasePoint p = lift(p0);
  const MatC etainv = eta.adjoint();
  switch (p.space) {
    case Space::cotangent:
    case Space::quasi:
      p[0] = eta * p[0] * etainv;
      p[1] = eta * p[1] * etainv;
      return p;
    case Space::heisenberg_GB: {
      const MatC e = kind == HeisAction::simple ? eta : quasi_adjoint_partner(eta, p);
      p[1] = dressing(e, p[1]);
      p[0] = e * p[0] * e.adjoint();
      return p;
    }
    case Space::heisenberg_K: {
      const MatC& k = p[0];
      p[0] = eta * k * xi_R(eta * lambda_L(k));
      return p;
    }
    default: break;
  }
  throw Error(ErrorCode::WrongSpace, "act: unsupported space");
}

MatC moment(const PhasePoint& p0) {
  PhasePoint p = lift(p0);
  switch (p.space) {
    case Space::cotangent: return p[1] - p[0].adjoint() * p[1] * p[0];
    case Space::heisenberg_K: {
      Iwasawa d = iwasawa(p[0]);
      return d.bL * d.bR;
    }
    case Space::heisenberg_GB: {
      const MatC bl = inverse(lambda_L(p[0].adjoint() * p[1]));
      return bl * p[1];
    }
    case Space::quasi: return p[0] * p[1] * p[0].adjoint() * p[1].adjoint();
    default: break;
  }
  throw Error(ErrorCode::WrongSpace, "moment: unsupported space");
}

GaugeElement GaugeElement::identity(std::size_t n) {
  GaugeElement e;
  for (std::size_t j = 0; j < n; ++j) {
    e.perm.push_back(j);
    e.phases.push_back(1.0);
  }
  return e;
}

MatC GaugeElement::matrix() const {
  const std::size_t n = perm.size();
  MatC m(n);
  for (std::size_t j = 0; j < n; ++j) m(perm[j], j) = phases[j];
  return m;
}

GaugeElement GaugeElement::compose(const GaugeElement& o) const {
  // (A B) column j: B has phase o.phases[j] in row o.perm[j]; A maps that row
  // index r to row perm[r] with phase phases[r].
  GaugeElement out;
  for (std::size_t j = 0; j < perm.size(); ++j) {
    const std::size_t r = o.perm[j];
    out.perm.push_back(perm[r]);
    out.phases.push_back(phases[r] * o.phases[j]);
  }
  return out;
}

GaugeElement GaugeElement::inverse() const {
  GaugeElement out;
  const std::size_t n = perm.size();
  out.perm.assign(n, 0);
  out.phases.assign(n, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    out.perm[perm[j]] = j;
    out.phases[perm[j]] = std::conj(phases[j]);
  }
  return out;
}

}  // namespace dsim
