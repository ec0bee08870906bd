#include "dsim/rmat.hpp"

#include <cmath>
#include <functional>

#include "dsim/config.hpp"

namespace dsim {

namespace {

void require_diag(const MatC& d, const char* what) {
  if (!is_diagonal(d, 1e-12 * std::max(1.0, d.norm_fro())))
    throw Error(ErrorCode::ContractViolation, std::string(what) + " must be diagonal");
}

MatC componentwise(const MatC& x, const std::function<cplx(std::size_t, std::size_t)>& mult) {
  const std::size_t n = x.n();
  MatC out(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      if (j != k) out(j, k) = mult(j, k) * x(j, k);
  return out;
}

void require_regular(const MatC& d, RegularKind kind, const char* what) {
  if (!is_regular(d, kind)) throw Error(ErrorCode::Regularity, std::string(what) + " is not regular");
}

}  // namespace

MatC apply_R_Q(const MatC& q, const MatC& x) {
  require_diag(q, "Q");
  const double reg = tolerances().regular;
  return componentwise(x, [&](std::size_t j, std::size_t k) {
    const cplx mu = q(j, j) / q(k, k);
    if (std::abs(mu - 1.0) < reg) throw Error(ErrorCode::Regularity, "R(Q): |mu - 1| below the regularity tolerance");
    return 0.5 * (mu + 1.0) / (mu - 1.0);
  });
}

MatC apply_r_lambda(const MatC& lambda, const MatC& x) {
  require_diag(lambda, "lambda");
  require_regular(lambda, RegularKind::cartan, "lambda");
  return componentwise(x, [&](std::size_t j, std::size_t k) { return 1.0 / (lambda(j, j) - lambda(k, k)); });
}

MatC apply_dr_lambda(const MatC& lambda, const MatC& z, const MatC& x) {
  require_diag(lambda, "lambda");
  require_regular(lambda, RegularKind::cartan, "lambda");
  return componentwise(x, [&](std::size_t j, std::size_t k) {
    const cplx d = lambda(j, j) - lambda(k, k);
    return -(z(j, j) - z(k, k)) / (d * d);
  });
}

MatC apply_rho_Gamma(const MatC& gamma, const MatC& x) {
  require_diag(gamma, "Gamma");
  require_regular(gamma, RegularKind::b0, "Gamma");
  return componentwise(x, [&](std::size_t j, std::size_t k) {
    return cplx(1.0 / std::sinh(std::log(gamma(j, j).real()) - std::log(gamma(k, k).real())));
  });
}

MatC apply_R_Gamma2(const MatC& gamma, const MatC& x) {
  require_diag(gamma, "Gamma");
  require_regular(gamma, RegularKind::b0, "Gamma");
  return componentwise(x, [&](std::size_t j, std::size_t k) {
    return cplx(0.5 / std::tanh(std::log(gamma(j, j).real()) - std::log(gamma(k, k).real())));
  });
}

MatC apply_R_i(const MatC& x) { return proj_G(x * cplx(0.0, -1.0)); }

double cdybe_residual(const MatC& lambda, const MatC& x, const MatC& y, Variant v, CdybeForm form) {
  auto r = [&](const MatC& m) { return apply_r_lambda(lambda, m); };
  auto dr = [&](const MatC& z, const MatC& m) { return apply_dr_lambda(lambda, z, m); };
  const MatC x0 = diagonal_part(x), y0 = diagonal_part(y);
  const MatC rx = r(x), ry = r(y);
  // The derivative terms enter with sign s: s = -1 is the form as printed,
  // s = +1 the form that holds for r = (ad lambda)^{-1}.
  const cplx s = form == CdybeForm::printed ? -1.0 : 1.0;
  MatC res = commutator(rx, ry) - r(commutator(x, ry) + commutator(rx, y)) + (dr(y0, x) - dr(x0, y)) * s;
  const RootBasis rb = root_basis(x.n(), v);
  for (std::size_t i = 0; i < rb.cartan_G.size(); ++i)
    res += rb.cartan_dual[i] * (s * form_G(x, dr(rb.cartan_G[i], y)));
  return res.norm_fro();
}

}  // namespace dsim
