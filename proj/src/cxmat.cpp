#include "dsim/cxmat.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "dsim/config.hpp"

namespace dsim {

namespace {

void require_same(const MatC& a, const MatC& b, const char* where) {
  if (a.n() != b.n()) throw Error(ErrorCode::ContractViolation, std::string(where) + ": dimension mismatch");
}

}  // namespace

MatC::MatC(std::size_t n, std::vector<cplx> entries) : n_(n), a_(std::move(entries)) {
  if (a_.size() != n * n) throw Error(ErrorCode::ContractViolation, "MatC: entry count is not n*n");
}

MatC::MatC(std::initializer_list<std::initializer_list<cplx>> rows) : n_(rows.size()) {
  a_.reserve(n_ * n_);
  for (const auto& r : rows) {
    if (r.size() != n_) throw Error(ErrorCode::ContractViolation, "MatC: ragged initializer");
    a_.insert(a_.end(), r.begin(), r.end());
  }
}

MatC MatC::identity(std::size_t n) {
  MatC m(n);
  for (std::size_t j = 0; j < n; ++j) m(j, j) = 1.0;
  return m;
}

MatC MatC::diag(std::span<const cplx> d) {
  MatC m(d.size());
  for (std::size_t j = 0; j < d.size(); ++j) m(j, j) = d[j];
  return m;
}

MatC MatC::diag(std::span<const double> d) {
  MatC m(d.size());
  for (std::size_t j = 0; j < d.size(); ++j) m(j, j) = d[j];
  return m;
}

MatC MatC::unit(std::size_t n, std::size_t j, std::size_t k) {
  MatC m(n);
  m(j, k) = 1.0;
  return m;
}

MatC& MatC::operator+=(const MatC& o) {
  require_same(*this, o, "operator+");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

MatC& MatC::operator-=(const MatC& o) {
  require_same(*this, o, "operator-");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

MatC& MatC::operator*=(cplx s) {
  for (auto& x : a_) x *= s;
  return *this;
}

MatC MatC::adjoint() const {
  MatC m(n_);
  for (std::size_t j = 0; j < n_; ++j)
    for (std::size_t k = 0; k < n_; ++k) m(k, j) = std::conj((*this)(j, k));
  return m;
}

MatC MatC::transpose() const {
  MatC m(n_);
  for (std::size_t j = 0; j < n_; ++j)
    for (std::size_t k = 0; k < n_; ++k) m(k, j) = (*this)(j, k);
  return m;
}

cplx MatC::trace() const {
  cplx t = 0.0;
  for (std::size_t j = 0; j < n_; ++j) t += (*this)(j, j);
  return t;
}

std::vector<cplx> MatC::diagonal() const {
  std::vector<cplx> d(n_);
  for (std::size_t j = 0; j < n_; ++j) d[j] = (*this)(j, j);
  return d;
}

double MatC::norm_fro() const {
  double s = 0.0;
  for (const auto& x : a_) s += std::norm(x);
  return std::sqrt(s);
}

double MatC::norm_1() const {
  double best = 0.0;
  for (std::size_t k = 0; k < n_; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += std::abs((*this)(j, k));
    best = std::max(best, s);
  }
  return best;
}

double MatC::max_abs() const {
  double m = 0.0;
  for (const auto& x : a_) m = std::max(m, std::abs(x));
  return m;
}

bool MatC::all_finite() const {
  return std::all_of(a_.begin(), a_.end(),
                     [](const cplx& x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); });
}

MatC operator+(MatC a, const MatC& b) { return a += b; }
MatC operator-(MatC a, const MatC& b) { return a -= b; }
MatC operator-(MatC a) { return a *= -1.0; }
MatC operator*(cplx s, MatC a) { return a *= s; }
MatC operator*(MatC a, cplx s) { return a *= s; }

MatC operator*(const MatC& a, const MatC& b) {
  require_same(a, b, "operator*");
  const std::size_t n = a.n();
  MatC c(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t m = 0; m < n; ++m) {
      const cplx ajm = a(j, m);
      if (ajm == cplx(0.0)) continue;
      for (std::size_t k = 0; k < n; ++k) c(j, k) += ajm * b(m, k);
    }
  return c;
}

MatC commutator(const MatC& a, const MatC& b) { return a * b - b * a; }

cplx trace_product(const MatC& a, const MatC& b) {
  require_same(a, b, "trace_product");
  cplx t = 0.0;
  for (std::size_t j = 0; j < a.n(); ++j)
    for (std::size_t k = 0; k < a.n(); ++k) t += a(j, k) * b(k, j);
  return t;
}

double re_trace_product(const MatC& a, const MatC& b) { return trace_product(a, b).real(); }

double dist_fro(const MatC& a, const MatC& b) { return (a - b).norm_fro(); }

namespace {

struct LU {
  MatC lu;
  std::vector<std::size_t> perm;
  int sign = 1;
};

LU lu_decompose(const MatC& a, bool throw_on_singular) {
  const std::size_t n = a.n();
  LU out{a, std::vector<std::size_t>(n), 1};
  std::iota(out.perm.begin(), out.perm.end(), 0);
  MatC& m = out.lu;
  const double floor = tolerances().pivot * std::max(a.norm_fro(), 1e-300);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t j = k + 1; j < n; ++j)
      if (std::abs(m(j, k)) > std::abs(m(piv, k))) piv = j;
    if (std::abs(m(piv, k)) <= floor) {
      if (throw_on_singular) throw Error(ErrorCode::SingularInput, "LU pivot below tolerance");
      m(k, k) = 0.0;
      out.sign = 0;
      return out;
    }
    if (piv != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m(k, c), m(piv, c));
      std::swap(out.perm[k], out.perm[piv]);
      out.sign = -out.sign;
    }
    for (std::size_t j = k + 1; j < n; ++j) {
      m(j, k) /= m(k, k);
      const cplx f = m(j, k);
      for (std::size_t c = k + 1; c < n; ++c) m(j, c) -= f * m(k, c);
    }
  }
  return out;
}

}  // namespace

MatC inverse(const MatC& a) {
  const std::size_t n = a.n();
  LU d = lu_decompose(a, true);
  MatC inv(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::vector<cplx> x(n);
    for (std::size_t j = 0; j < n; ++j) x[j] = (d.perm[j] == col) ? 1.0 : 0.0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t m = 0; m < j; ++m) x[j] -= d.lu(j, m) * x[m];
    for (std::size_t j = n; j-- > 0;) {
      for (std::size_t m = j + 1; m < n; ++m) x[j] -= d.lu(j, m) * x[m];
      x[j] /= d.lu(j, j);
    }
    for (std::size_t j = 0; j < n; ++j) inv(j, col) = x[j];
  }
  return inv;
}

cplx determinant(const MatC& a) {
  LU d = lu_decompose(a, false);
  if (d.sign == 0) return 0.0;
  cplx det = static_cast<double>(d.sign);
  for (std::size_t j = 0; j < a.n(); ++j) det *= d.lu(j, j);
  return det;
}

MatC hermitian_part(const MatC& a) { return 0.5 * (a + a.adjoint()); }
MatC antihermitian_part(const MatC& a) { return 0.5 * (a - a.adjoint()); }

MatC strict_upper(const MatC& a) {
  MatC m(a.n());
  for (std::size_t j = 0; j < a.n(); ++j)
    for (std::size_t k = j + 1; k < a.n(); ++k) m(j, k) = a(j, k);
  return m;
}

MatC strict_lower(const MatC& a) {
  MatC m(a.n());
  for (std::size_t j = 0; j < a.n(); ++j)
    for (std::size_t k = 0; k < j; ++k) m(j, k) = a(j, k);
  return m;
}

MatC diagonal_part(const MatC& a) {
  MatC m(a.n());
  for (std::size_t j = 0; j < a.n(); ++j) m(j, j) = a(j, j);
  return m;
}

MatC off_diagonal(const MatC& a) {
  MatC m = a;
  for (std::size_t j = 0; j < a.n(); ++j) m(j, j) = 0.0;
  return m;
}

double unitarity_residual(const MatC& m) { return (m.adjoint() * m - MatC::identity(m.n())).norm_fro(); }

bool is_unitary(const MatC& m, double tol) { return unitarity_residual(m) < tol; }

bool is_upper_positive(const MatC& m, double tol) {
  for (std::size_t j = 0; j < m.n(); ++j) {
    for (std::size_t k = 0; k < j; ++k)
      if (std::abs(m(j, k)) > tol) return false;
    if (std::abs(m(j, j).imag()) > tol || m(j, j).real() <= 0.0) return false;
  }
  return true;
}

bool is_hermitian(const MatC& m, double tol) { return (m - m.adjoint()).norm_fro() < tol; }
bool is_anti_hermitian(const MatC& m, double tol) { return (m + m.adjoint()).norm_fro() < tol; }

bool is_positive_hermitian(const MatC& m, double tol) {
  if (!is_hermitian(m, tol)) return false;
  auto e = eig_herm(hermitian_part(m));
  return e.values.front() > 0.0;
}

bool is_diagonal(const MatC& m, double tol) { return off_diagonal(m).norm_fro() < tol; }

// ---- exponential ----------------------------------------------------------

MatC mat_exp(const MatC& x) {
  const double nrm = x.norm_1();
  if (!x.all_finite() || nrm > tolerances().exp_norm_bound)
    throw Error(ErrorCode::BoundedInput, "mat_exp argument norm exceeds the declared bound");
  int squarings = 0;
  if (nrm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
  const MatC a = x * cplx(std::ldexp(1.0, -squarings));
  const std::size_t n = x.n();
  // Horner evaluation of sum_{k<=18} a^k / k!.
  constexpr int kDegree = 18;
  MatC result = MatC::identity(n);
  for (int k = kDegree; k >= 1; --k) {
    result = MatC::identity(n) + (a * result) * cplx(1.0 / k);
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

// ---- QR -------------------------------------------------------------------

QR qr_pos(const MatC& a) {
  const std::size_t n = a.n();
  const double scale = a.norm_fro();
  const double floor = tolerances().pivot * std::max(scale, 1e-300);
  MatC r = a;
  MatC q = MatC::identity(n);
  std::vector<cplx> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    double sub = 0.0;
    for (std::size_t j = k; j < n; ++j) sub += std::norm(r(j, k));
    const double xnorm = std::sqrt(sub);
    if (xnorm <= floor) throw Error(ErrorCode::SingularInput, "qr_pos: rank-deficient input");
    const cplx x0 = r(k, k);
    const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx(1.0);
    const cplx alpha = -phase * xnorm;
    std::fill(v.begin(), v.end(), cplx(0.0));
    for (std::size_t j = k; j < n; ++j) v[j] = r(j, k);
    v[k] -= alpha;
    double vnorm2 = 0.0;
    for (std::size_t j = k; j < n; ++j) vnorm2 += std::norm(v[j]);
    if (vnorm2 > 0.0) {
      // r <- (I - 2 v v^dagger / |v|^2) r ; q <- q (I - 2 v v^dagger / |v|^2)
      for (std::size_t c = k; c < n; ++c) {
        cplx dot = 0.0;
        for (std::size_t j = k; j < n; ++j) dot += std::conj(v[j]) * r(j, c);
        dot *= 2.0 / vnorm2;
        for (std::size_t j = k; j < n; ++j) r(j, c) -= v[j] * dot;
      }
      for (std::size_t row = 0; row < n; ++row) {
        cplx dot = 0.0;
        for (std::size_t j = k; j < n; ++j) dot += q(row, j) * v[j];
        dot *= 2.0 / vnorm2;
        for (std::size_t j = k; j < n; ++j) q(row, j) -= dot * std::conj(v[j]);
      }
    }
    for (std::size_t j = k + 1; j < n; ++j) r(j, k) = 0.0;
  }
  // Make the diagonal of R real positive: A = (Q D)(D^* R), D = diag(phase of R_kk).
  for (std::size_t k = 0; k < n; ++k) {
    const double mod = std::abs(r(k, k));
    if (mod <= floor) throw Error(ErrorCode::SingularInput, "qr_pos: rank-deficient input");
    const cplx ph = r(k, k) / mod;
    for (std::size_t c = k; c < n; ++c) r(k, c) *= std::conj(ph);
    r(k, k) = mod;
    for (std::size_t row = 0; row < n; ++row) q(row, k) *= ph;
  }
  return {std::move(q), std::move(r)};
}

// ---- Cholesky (upper, b b^dagger = P) -------------------------------------

MatC chol_upper(const MatC& p) {
  const std::size_t n = p.n();
  if (!is_hermitian(p, tolerances().structure * std::max(1.0, p.norm_fro())))
    throw Error(ErrorCode::NotPositiveDefinite, "chol_upper: input is not Hermitian");
  const double floor = tolerances().posdef * p.norm_fro();
  MatC b(n);
  for (std::size_t k = n; k-- > 0;) {
    double d = p(k, k).real();
    for (std::size_t m = k + 1; m < n; ++m) d -= std::norm(b(k, m));
    if (!(d > floor)) throw Error(ErrorCode::NotPositiveDefinite, "chol_upper: pivot not positive");
    const double bkk = std::sqrt(d);
    b(k, k) = bkk;
    for (std::size_t j = 0; j < k; ++j) {
      cplx s = p(j, k);
      for (std::size_t m = k + 1; m < n; ++m) s -= b(j, m) * std::conj(b(k, m));
      b(j, k) = s / bkk;
    }
  }
  return b;
}

// ---- Hermitian eigenproblem (cyclic Jacobi) --------------------------------

namespace {

void normalize_column_phases(MatC& u) {
  const std::size_t n = u.n();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < n; ++j)
      if (std::abs(u(j, k)) > std::abs(u(best, k)) + 1e-12) best = j;
    const double mod = std::abs(u(best, k));
    if (mod == 0.0) continue;
    const cplx ph = std::conj(u(best, k) / mod);
    for (std::size_t j = 0; j < n; ++j) u(j, k) *= ph;
    u(best, k) = mod;
  }
}

MatC permute_columns(const MatC& u, const std::vector<std::size_t>& order) {
  MatC out(u.n());
  for (std::size_t c = 0; c < order.size(); ++c)
    for (std::size_t j = 0; j < u.n(); ++j) out(j, c) = u(j, order[c]);
  return out;
}

}  // namespace

HermitianEigen eig_herm(const MatC& h) {
  const std::size_t n = h.n();
  const double hn = h.norm_fro();
  if ((h - h.adjoint()).norm_fro() > tolerances().structure * std::max(1.0, hn))
    throw Error(ErrorCode::ContractViolation, "eig_herm: input is not Hermitian");
  MatC a = hermitian_part(h);
  MatC v = MatC::identity(n);
  const int max_sweeps = tolerances().jacobi_max_sweeps;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-17 * std::max(hn, 1e-300)) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag <= 1e-300) continue;
        const cplx eph = a(p, q) / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = 0.5 * std::atan2(2.0 * mag, aqq - app);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        const cplx jpq = s * eph;              // J(p,q)
        const cplx jqp = -s * std::conj(eph);  // J(q,p)
        // a <- a J
        for (std::size_t i = 0; i < n; ++i) {
          const cplx aip = a(i, p), aiq = a(i, q);
          a(i, p) = aip * c + aiq * jqp;
          a(i, q) = aip * jpq + aiq * c;
        }
        // a <- J^dagger a
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t i = 0; i < n; ++i) {
          const cplx vip = v(i, p), viq = v(i, q);
          v(i, p) = vip * c + viq * jqp;
          v(i, q) = vip * jpq + viq * c;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  HermitianEigen out;
  out.values.resize(n);
  for (std::size_t c = 0; c < n; ++c) out.values[c] = a(order[c], order[c]).real();
  out.vectors = permute_columns(v, order);
  normalize_column_phases(out.vectors);
  return out;
}

// ---- unitary diagonalization ----------------------------------------------

UnitaryEigen diag_unitary(const MatC& g) {
  const std::size_t n = g.n();
  if (unitarity_residual(g) > tolerances().structure * std::sqrt(static_cast<double>(n)) * 10.0)
    throw Error(ErrorCode::ContractViolation, "diag_unitary: input is not unitary");
  const MatC h1 = hermitian_part(g);
  const MatC h2 = antihermitian_part(g) * cplx(0.0, -1.0);
  // Generic real combinations; a later one is used only if an earlier one
  // produces a near-degenerate spectrum while g itself is regular.
  static constexpr std::array<double, 6> kMix = {0.7548776662466927, -1.3247179572447460, 2.2360679774997897,
                                                 0.4142135623730950, -3.1415926535897931, 0.1234567890123456};
  UnitaryEigen best;
  double best_res = std::numeric_limits<double>::infinity();
  for (double c : kMix) {
    const auto e = eig_herm(h1 + h2 * cplx(c));
    const MatC& u = e.vectors;
    const MatC d = u.adjoint() * g * u;
    std::vector<double> ph(n);
    for (std::size_t k = 0; k < n; ++k) ph[k] = std::arg(d(k, k));
    const double res = off_diagonal(d).norm_fro();
    if (res < best_res) {
      best_res = res;
      best.phases = ph;
      best.vectors = u;
    }
    if (res < 1e-12 * n) break;
  }
  const double regular = tolerances().regular;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k)
      if (std::abs(std::polar(1.0, best.phases[j]) - std::polar(1.0, best.phases[k])) <= regular)
        throw Error(ErrorCode::Regularity, "diag_unitary: eigenvalue collision");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return best.phases[x] < best.phases[y]; });
  UnitaryEigen out;
  out.phases.resize(n);
  for (std::size_t c = 0; c < n; ++c) out.phases[c] = best.phases[order[c]];
  out.vectors = permute_columns(best.vectors, order);
  normalize_column_phases(out.vectors);
  return out;
}

// ---- functions of positive matrices ----------------------------------------

namespace {

template <class F>
MatC positive_function(const MatC& p, F f, const char* who) {
  const auto e = eig_herm(p);
  if (!(e.values.front() > tolerances().posdef * p.norm_fro()))
    throw Error(ErrorCode::NotPositiveDefinite, std::string(who) + ": smallest eigenvalue not positive");
  const std::size_t n = p.n();
  MatC d(n);
  for (std::size_t k = 0; k < n; ++k) d(k, k) = f(e.values[k]);
  return e.vectors * d * e.vectors.adjoint();
}

}  // namespace

MatC mat_log_pos(const MatC& p) {
  return hermitian_part(positive_function(p, [](double x) { return std::log(x); }, "mat_log_pos"));
}

MatC mat_sqrt_pos(const MatC& p) {
  return hermitian_part(positive_function(p, [](double x) { return std::sqrt(x); }, "mat_sqrt_pos"));
}

MatC polar_unitary(const MatC& a) {
  const MatC inv_sqrt =
      positive_function(hermitian_part(a.adjoint() * a), [](double x) { return 1.0 / std::sqrt(x); }, "polar_unitary");
  return a * inv_sqrt;
}

}  // namespace dsim
