#include "dsim/conserved.hpp"

#include <cmath>

#include "dsim/config.hpp"
#include "dsim/random.hpp"
#include "dsim/rmat.hpp"

namespace dsim {

namespace {
constexpr ConservedKind kAllKinds[] = {ConservedKind::psi1,       ConservedKind::psi2,
                                       ConservedKind::psi3,       ConservedKind::psi4,
                                       ConservedKind::quasi_pair, ConservedKind::quasi_pair_dual,
                                       ConservedKind::casimir_arg};
}

const char* to_string(ConservedKind k) {
  switch (k) {
    case ConservedKind::psi1: return "psi1";
    case ConservedKind::psi2: return "psi2";
    case ConservedKind::psi3: return "psi3";
    case ConservedKind::psi4: return "psi4";
    case ConservedKind::quasi_pair: return "quasi_pair";
    case ConservedKind::quasi_pair_dual: return "quasi_pair_dual";
    case ConservedKind::casimir_arg: return "casimir_arg";
  }
  return "?";
}

ConservedKind parse_conserved_kind(const std::string& s) {
  if (s == "W") return ConservedKind::psi4;
  for (ConservedKind k : kAllKinds)
    if (s == to_string(k)) return k;
  throw Error(ErrorCode::Usage, "unknown conserved map '" + s + "'");
}

Space conserved_space(ConservedKind k) {
  switch (k) {
    case ConservedKind::psi1:
    case ConservedKind::psi2: return Space::cotangent;
    case ConservedKind::psi3: return Space::heisenberg_GB;
    case ConservedKind::psi4: return Space::heisenberg_K;
    default: return Space::quasi;
  }
}

bool conserved_along(ConservedKind k, Family f) {
  switch (k) {
    case ConservedKind::psi1:
    case ConservedKind::psi3:
    case ConservedKind::quasi_pair: return f == Family::pi2;
    case ConservedKind::psi2:
    case ConservedKind::psi4:
    case ConservedKind::quasi_pair_dual: return f == Family::pi1;
    case ConservedKind::casimir_arg: return true;
  }
  return false;
}

std::vector<ConservedKind> conserved_kinds(Space s) {
  const Space base = parent_space(s);
  std::vector<ConservedKind> out;
  for (ConservedKind k : kAllKinds) {
    const Space cs = conserved_space(k);
    const bool heis = (base == Space::heisenberg_GB || base == Space::heisenberg_K);
    if (cs == base || (k == ConservedKind::psi4 && heis) || (k == ConservedKind::psi3 && base == Space::heisenberg_K))
      out.push_back(k);
  }
  return out;
}

std::vector<MatC> conserved_value(ConservedKind k, const PhasePoint& p_in) {
  PhasePoint p = lift(p_in);
  const Space base = p.space;
  auto need = [&](Space s) {
    if (base != s)
      throw Error(ErrorCode::WrongSpace,
                  std::string(to_string(k)) + " is not defined on " + to_string(p_in.space) + " points");
  };
  switch (k) {
    case ConservedKind::psi1:
      need(Space::cotangent);
      return {inverse(p[0]) * p[1] * p[0], p[1]};
    case ConservedKind::psi2:
      need(Space::cotangent);
      return {p[0], moment(p)};
    case ConservedKind::psi3: {
      if (base == Space::heisenberg_K) p = model_map(p[0], p.variant);
      need(Space::heisenberg_GB);
      const MatC l = nu(p[1]);
      return {inverse(p[0]) * l * p[0], l};
    }
    case ConservedKind::psi4: {
      MatC kk;
      if (base == Space::heisenberg_GB)
        kk = model_map_inv(p[0], p[1]);
      else {
        need(Space::heisenberg_K);
        kk = p[0];
      }
      const Iwasawa w = iwasawa(kk);
      return {w.bL * w.gR * inverse(w.bL)};
    }
    case ConservedKind::quasi_pair:
      need(Space::quasi);
      return {p[1], p[0] * p[1] * inverse(p[0])};
    case ConservedKind::quasi_pair_dual:
      need(Space::quasi);
      return {p[0], p[1] * p[0] * inverse(p[1])};
    case ConservedKind::casimir_arg:
      need(Space::quasi);
      return {moment(p)};
  }
  throw Error(ErrorCode::Usage, "conserved_value: unknown kind");
}

// ---- spin Sutherland ------------------------------------------------------------

namespace {

void require_real_diag(const MatC& m, const char* what) {
  for (std::size_t j = 0; j < m.n(); ++j)
    for (std::size_t k = 0; k < m.n(); ++k) {
      const double bad = j == k ? std::abs(m(j, j).imag()) : std::abs(m(j, k));
      if (bad > 1e-12 * std::max(1.0, m.max_abs()))
        throw Error(ErrorCode::ContractViolation, std::string(what) + " must be a real diagonal matrix");
    }
}

MatC torus_of(const MatC& q) {
  MatC out(q.n());
  for (std::size_t j = 0; j < q.n(); ++j) out(j, j) = std::polar(1.0, q(j, j).real());
  return out;
}

}  // namespace

MatC spin_suth_pack(const MatC& q, const MatC& p, const MatC& xi) {
  require_real_diag(q, "q");
  require_real_diag(p, "p");
  if (!in_subspace(xi, Subspace::Gperp, Variant::u, 1e-12 * std::max(1.0, xi.max_abs())))
    throw Error(ErrorCode::ContractViolation, "xi must be anti-Hermitian with zero diagonal");
  return p * cplx(0.0, -1.0) - apply_R_Q(torus_of(q), xi) - xi * cplx(0.5);
}

double spin_suth_hamiltonian(const MatC& q, const MatC& p, const MatC& xi) {
  require_real_diag(q, "q");
  require_real_diag(p, "p");
  const MatC ip = p * cplx(0.0, 1.0);
  double h = -0.5 * form_G(ip, ip);
  const double reg = tolerances().regular;
  for (std::size_t j = 0; j < q.n(); ++j)
    for (std::size_t k = j + 1; k < q.n(); ++k) {
      const double s = std::sin(0.5 * (q(j, j).real() - q(k, k).real()));
      if (std::abs(s) < reg) throw Error(ErrorCode::Regularity, "spin Sutherland: coinciding positions");
      h += 0.5 * std::norm(xi(j, k)) / (2.0 * s * s);
    }
  return h;
}

MatC solve_bplus(const MatC& q, const MatC& s_plus) {
  const std::size_t n = q.n();
  if (s_plus.n() != n) throw Error(ErrorCode::ContractViolation, "solve_bplus: size mismatch");
  if (!is_diagonal(q, 1e-12)) throw Error(ErrorCode::ContractViolation, "solve_bplus: Q must be diagonal");
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(s_plus(j, j) - 1.0) > 1e-12)
      throw Error(ErrorCode::ContractViolation, "solve_bplus: S_plus must have unit diagonal");
    for (std::size_t k = 0; k < j; ++k)
      if (std::abs(s_plus(j, k)) > 1e-12)
        throw Error(ErrorCode::ContractViolation, "solve_bplus: S_plus must be upper triangular");
  }
  const double reg = tolerances().regular;
  MatC b = MatC::identity(n);
  for (std::size_t d = 1; d < n; ++d)
    for (std::size_t j = 0; j + d < n; ++j) {
      const std::size_t k = j + d;
      const cplx coeff = q(k, k) / q(j, j) - 1.0;
      if (std::abs(coeff) < reg) throw Error(ErrorCode::Regularity, "solve_bplus: Q is not regular");
      cplx rhs = s_plus(j, k);
      for (std::size_t m = j + 1; m < k; ++m) rhs += b(j, m) * s_plus(m, k);
      b(j, k) = rhs / coeff;
    }
  return b;
}

MatC deformed_lax(const MatC& q, const MatC& p, const MatC& s_plus) {
  require_real_diag(p, "p");
  const MatC b = solve_bplus(q, s_plus);
  MatC ep(p.n());
  for (std::size_t j = 0; j < p.n(); ++j) ep(j, j) = std::exp(p(j, j).real());
  return ep * b * b.adjoint() * ep;
}

// ---- SL(2,Z) --------------------------------------------------------------------

PhasePoint sl2z_map(Sl2zMap which, const PhasePoint& p_in) {
  const PhasePoint p = lift(p_in);
  if (p.space != Space::quasi) throw Error(ErrorCode::WrongSpace, "SL(2,Z) maps act on the quasi double");
  PhasePoint q = p;
  if (which == Sl2zMap::S) {
    const MatC g2inv = inverse(p[1]);
    q[0] = g2inv;
    q[1] = g2inv * p[0] * p[1];
  } else {
    q[0] = p[0] * p[1];
  }
  return q;
}

PhasePoint sl2z_word(const std::string& word, const PhasePoint& p) {
  PhasePoint q = lift(p);
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    if (*it == 'S')
      q = sl2z_map(Sl2zMap::S, q);
    else if (*it == 'T')
      q = sl2z_map(Sl2zMap::T, q);
    else
      throw Error(ErrorCode::Usage, std::string("SL(2,Z) word letter must be S or T, got '") + *it + "'");
  }
  return q;
}

double sl2z_relation_defect(const PhasePoint& p) {
  const PhasePoint a = sl2z_word("SS", p), b = sl2z_word("STSTST", p), c = sl2z_word("SSSS", p);
  const PhasePoint base = lift(p);
  double d = 0.0;
  for (const auto& w : invariant_word_panel(Space::quasi)) {
    const Observable f = make_trace_observable(Space::quasi, w);
    d = std::max({d, std::abs(f(a) - f(b)), std::abs(f(c) - f(base))});
  }
  return d;
}

// ---- Haar averaging ---------------------------------------------------------------

HaarEstimate haar_average(const Observable& f, const PhasePoint& p, std::size_t num_samples, std::uint64_t seed) {
  if (num_samples < 2) throw Error(ErrorCode::Usage, "haar_average needs at least two samples");
  Rng rng = make_rng(seed);
  const std::size_t n = p.n();
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < num_samples; ++i) {
    const double v = f(act(random_unitary(n, p.variant, rng), p));
    sum += v;
    sum_sq += v * v;
  }
  const double m = sum / static_cast<double>(num_samples);
  const double var = std::max(0.0, (sum_sq - num_samples * m * m) / static_cast<double>(num_samples - 1));
  return {m, std::sqrt(var / static_cast<double>(num_samples)), num_samples};
}

}  // namespace dsim
