#include "dsim/lie.hpp"

#include <cmath>
#include <limits>

#include "dsim/config.hpp"

namespace dsim {

const char* to_string(Variant v) { return v == Variant::su ? "su" : "u"; }

Variant parse_variant(const std::string& s) {
  if (s == "su") return Variant::su;
  if (s == "u") return Variant::u;
  throw Error(ErrorCode::Usage, "unknown variant '" + s + "'");
}

const char* to_string(Subspace s) {
  switch (s) {
    case Subspace::full: return "full";
    case Subspace::G: return "G";
    case Subspace::B: return "B";
    case Subspace::G0: return "G0";
    case Subspace::iG0: return "iG0";
    case Subspace::Gperp: return "Gperp";
    case Subspace::Bgt: return "Bgt";
    case Subspace::GCperp: return "GCperp";
  }
  return "?";
}

Subspace parse_subspace(const std::string& s) {
  for (Subspace t : {Subspace::full, Subspace::G, Subspace::B, Subspace::G0, Subspace::iG0, Subspace::Gperp,
                     Subspace::Bgt, Subspace::GCperp})
    if (s == to_string(t)) return t;
  throw Error(ErrorCode::Usage, "unknown subspace tag '" + s + "'");
}

MatC proj_G(const MatC& x) {
  const std::size_t n = x.n();
  MatC out(n);
  for (std::size_t j = 0; j < n; ++j) {
    out(j, j) = cplx(0.0, x(j, j).imag());
    for (std::size_t k = 0; k < j; ++k) {
      out(j, k) = x(j, k);
      out(k, j) = -std::conj(x(j, k));
    }
  }
  return out;
}

MatC proj_B(const MatC& x) {
  const std::size_t n = x.n();
  MatC out(n);
  for (std::size_t j = 0; j < n; ++j) {
    out(j, j) = x(j, j).real();
    for (std::size_t k = j + 1; k < n; ++k) out(j, k) = x(j, k) + std::conj(x(k, j));
  }
  return out;
}

MatC project(const MatC& x, Subspace target) {
  const std::size_t n = x.n();
  switch (target) {
    case Subspace::full: return x;
    case Subspace::G: return proj_G(x);
    case Subspace::B: return proj_B(x);
    case Subspace::G0: {
      MatC out(n);
      for (std::size_t j = 0; j < n; ++j) out(j, j) = cplx(0.0, x(j, j).imag());
      return out;
    }
    case Subspace::iG0: {
      MatC out(n);
      for (std::size_t j = 0; j < n; ++j) out(j, j) = x(j, j).real();
      return out;
    }
    case Subspace::Gperp: return off_diagonal(proj_G(x));
    case Subspace::Bgt: return strict_upper(x);
    case Subspace::GCperp: return off_diagonal(x);
  }
  throw Error(ErrorCode::Usage, "project: unknown subspace");
}

AlgElem project(const AlgElem& x, Subspace target) { return {project(x.mat, target), target}; }

MatC remove_trace(const MatC& x, Variant v) {
  if (v == Variant::u) return x;
  MatC out = x;
  const cplx t = x.trace() / static_cast<double>(x.n());
  for (std::size_t j = 0; j < x.n(); ++j) out(j, j) -= t;
  return out;
}

bool in_subspace(const MatC& x, Subspace s, Variant v, double tol) {
  const std::size_t n = x.n();
  const bool traceless_ok = (v == Variant::u) || std::abs(x.trace()) < tol;
  auto lower_zero = [&] {
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < j; ++k)
        if (std::abs(x(j, k)) > tol) return false;
    return true;
  };
  auto real_diag = [&] {
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(x(j, j).imag()) > tol) return false;
    return true;
  };
  auto imag_diag = [&] {
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(x(j, j).real()) > tol) return false;
    return true;
  };
  auto zero_diag = [&] {
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(x(j, j)) > tol) return false;
    return true;
  };
  switch (s) {
    case Subspace::full: return v == Variant::u || traceless_ok;
    case Subspace::G: return is_anti_hermitian(x, tol) && traceless_ok;
    case Subspace::B: return lower_zero() && real_diag() && traceless_ok;
    case Subspace::G0: return is_diagonal(x, tol) && imag_diag() && traceless_ok;
    case Subspace::iG0: return is_diagonal(x, tol) && real_diag() && traceless_ok;
    case Subspace::Gperp: return is_anti_hermitian(x, tol) && zero_diag();
    case Subspace::Bgt: return lower_zero() && zero_diag();
    case Subspace::GCperp: return zero_diag();
  }
  return false;
}

double form_G(const MatC& x, const MatC& y) { return trace_product(x, y).real(); }
double form_I(const MatC& x, const MatC& y) { return trace_product(x, y).imag(); }

MatC tau(const MatC& z) { return z.adjoint(); }
MatC tau_group(const MatC& k) { return k.adjoint(); }

double regularity_gap(const MatC& x, RegularKind kind) {
  if (!is_diagonal(x, 1e-12 * std::max(1.0, x.norm_fro())))
    throw Error(ErrorCode::Usage, "is_regular: input is not diagonal in the declared chart");
  const std::size_t n = x.n();
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k) {
      double d = 0.0;
      switch (kind) {
        case RegularKind::torus:
        case RegularKind::cartan: d = std::abs(x(j, j) - x(k, k)); break;
        case RegularKind::b0:
          if (x(j, j).real() <= 0.0 || x(k, k).real() <= 0.0) return 0.0;
          d = std::abs(std::log(x(j, j).real()) - std::log(x(k, k).real()));
          break;
      }
      gap = std::min(gap, d);
    }
  return gap;
}

bool is_regular(const MatC& x, RegularKind kind, double tol) { return regularity_gap(x, kind) > tol; }
bool is_regular(const MatC& x, RegularKind kind) { return is_regular(x, kind, tolerances().regular); }

RootBasis root_basis(std::size_t n, Variant v) {
  if (n < 1) throw Error(ErrorCode::Usage, "root_basis: n must be positive");
  RootBasis rb;
  rb.n = n;
  rb.variant = v;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k) rb.positive.emplace_back(j, k);
  if (v == Variant::su) {
    for (std::size_t j = 0; j + 1 < n; ++j) rb.cartan.push_back(MatC::unit(n, j, j) - MatC::unit(n, j + 1, j + 1));
  } else {
    for (std::size_t j = 0; j < n; ++j) rb.cartan.push_back(MatC::unit(n, j, j));
  }
  for (const auto& h : rb.cartan) rb.cartan_G.push_back(h * cplx(0.0, 1.0));
  // Dual basis: K^j = sum_m (Gram^{-1})_{jm} K_m with Gram_{im} = form_G(K_i, K_m).
  const std::size_t r = rb.cartan_G.size();
  std::vector<double> gram(r * r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t m = 0; m < r; ++m) gram[i * r + m] = form_G(rb.cartan_G[i], rb.cartan_G[m]);
  // Small dense inverse through the complex kernel.
  MatC gm(r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t m = 0; m < r; ++m) gm(i, m) = gram[i * r + m];
  const MatC ginv = r > 0 ? inverse(gm) : MatC();
  for (std::size_t j = 0; j < r; ++j) {
    MatC kj(n);
    for (std::size_t m = 0; m < r; ++m) kj += rb.cartan_G[m] * cplx(ginv(j, m).real());
    rb.cartan_dual.push_back(kj);
  }
  return rb;
}

std::vector<MatC> subspace_basis(std::size_t n, Subspace s, Variant v) {
  std::vector<MatC> out;
  const cplx I(0.0, 1.0);
  auto diag_basis = [&](cplx scale) {
    if (v == Variant::su) {
      for (std::size_t j = 0; j + 1 < n; ++j)
        out.push_back((MatC::unit(n, j, j) - MatC::unit(n, j + 1, j + 1)) * scale);
    } else {
      for (std::size_t j = 0; j < n; ++j) out.push_back(MatC::unit(n, j, j) * scale);
    }
  };
  auto perp_G = [&] {
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        out.push_back(MatC::unit(n, j, k) - MatC::unit(n, k, j));
        out.push_back((MatC::unit(n, j, k) + MatC::unit(n, k, j)) * I);
      }
  };
  auto upper = [&] {
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        out.push_back(MatC::unit(n, j, k));
        out.push_back(MatC::unit(n, j, k) * I);
      }
  };
  switch (s) {
    case Subspace::G: diag_basis(I); perp_G(); break;
    case Subspace::B: diag_basis(1.0); upper(); break;
    case Subspace::G0: diag_basis(I); break;
    case Subspace::iG0: diag_basis(1.0); break;
    case Subspace::Gperp: perp_G(); break;
    case Subspace::Bgt: upper(); break;
    case Subspace::GCperp:
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (j != k) {
            out.push_back(MatC::unit(n, j, k));
            out.push_back(MatC::unit(n, j, k) * I);
          }
      break;
    case Subspace::full:
      diag_basis(1.0);
      diag_basis(I);
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (j != k) {
            out.push_back(MatC::unit(n, j, k));
            out.push_back(MatC::unit(n, j, k) * I);
          }
      break;
  }
  return out;
}

std::vector<MatC> orthonormal_G_basis(std::size_t n, Variant v) {
  // Gram-Schmidt on the G basis with respect to -form_G (positive definite on G).
  std::vector<MatC> raw = subspace_basis(n, Subspace::G, v);
  std::vector<MatC> out;
  for (auto& e : raw) {
    MatC w = e;
    for (const auto& q : out) w -= q * cplx(-form_G(w, q));
    const double nrm = std::sqrt(-form_G(w, w));
    out.push_back(w * cplx(1.0 / nrm));
  }
  return out;
}

}  // namespace dsim
