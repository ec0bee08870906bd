#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace dsim {

using cplx = std::complex<double>;

/**
 * Dense square complex matrix, row-major.
 *
 * Value type; all operations below return new matrices. Dimensions are
 * checked at runtime and a mismatch throws `Error(ContractViolation)`.
 */
class MatC {
 public:
  MatC() = default;
  explicit MatC(std::size_t n) : n_(n), a_(n * n) {}
  MatC(std::size_t n, std::vector<cplx> entries);
  MatC(std::initializer_list<std::initializer_list<cplx>> rows);

  static MatC zero(std::size_t n) { return MatC(n); }
  static MatC identity(std::size_t n);
  static MatC diag(std::span<const cplx> d);
  static MatC diag(std::span<const double> d);
  /// Matrix unit E_{jk} (zero-based indices).
  static MatC unit(std::size_t n, std::size_t j, std::size_t k);

  std::size_t n() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }

  cplx& operator()(std::size_t j, std::size_t k) { return a_[j * n_ + k]; }
  const cplx& operator()(std::size_t j, std::size_t k) const { return a_[j * n_ + k]; }

  std::span<cplx> data() { return a_; }
  std::span<const cplx> data() const { return a_; }

  MatC& operator+=(const MatC& o);
  MatC& operator-=(const MatC& o);
  MatC& operator*=(cplx s);

  MatC adjoint() const;
  MatC transpose() const;
  cplx trace() const;
  std::vector<cplx> diagonal() const;
  double norm_fro() const;
  double norm_1() const;
  double max_abs() const;
  bool all_finite() const;

  friend bool operator==(const MatC& a, const MatC& b) = default;

 private:
  std::size_t n_ = 0;
  std::vector<cplx> a_;
};

MatC operator+(MatC a, const MatC& b);
MatC operator-(MatC a, const MatC& b);
MatC operator-(MatC a);
MatC operator*(const MatC& a, const MatC& b);
MatC operator*(cplx s, MatC a);
MatC operator*(MatC a, cplx s);
inline MatC operator*(double s, MatC a) { return cplx(s, 0.0) * std::move(a); }

/// [A, B] = AB - BA.
MatC commutator(const MatC& a, const MatC& b);
/// Re tr(AB) without forming the product.
double re_trace_product(const MatC& a, const MatC& b);
cplx trace_product(const MatC& a, const MatC& b);
double dist_fro(const MatC& a, const MatC& b);

/// General inverse via LU with partial pivoting. Throws SingularInput.
MatC inverse(const MatC& a);
cplx determinant(const MatC& a);

MatC hermitian_part(const MatC& a);       // (A + A^dagger)/2
MatC antihermitian_part(const MatC& a);   // (A - A^dagger)/2
MatC strict_upper(const MatC& a);
MatC strict_lower(const MatC& a);
MatC diagonal_part(const MatC& a);
MatC off_diagonal(const MatC& a);

// ---- structural predicates ---------------------------------------------

bool is_unitary(const MatC& m, double tol);
bool is_upper_positive(const MatC& m, double tol);
bool is_hermitian(const MatC& m, double tol);
bool is_anti_hermitian(const MatC& m, double tol);
bool is_positive_hermitian(const MatC& m, double tol);
bool is_diagonal(const MatC& m, double tol);

/// ||M^dagger M - I||_F.
double unitarity_residual(const MatC& m);

// ---- transcendental functions and factorizations -------------------------

/// Matrix exponential by scaling and squaring of a degree-18 Taylor
/// polynomial, with the argument scaled to 1-norm <= 1/2. Throws BoundedInput
/// if ||X||_1 exceeds the configured bound.
MatC mat_exp(const MatC& x);

struct QR {
  MatC q;  // unitary
  MatC r;  // upper triangular, positive real diagonal
};

/// A = Q R with R upper triangular and diag(R) > 0 (unique for invertible A).
/// Householder based. Throws SingularInput when a pivot falls below
/// tol.pivot * ||A||_F.
QR qr_pos(const MatC& a);

/// Upper triangular b with positive diagonal such that b b^dagger = P, by
/// backward recursion from the last row. Throws NotPositiveDefinite.
MatC chol_upper(const MatC& p);

struct HermitianEigen {
  std::vector<double> values;  // ascending
  MatC vectors;                // unitary, columns are eigenvectors
};

/// Cyclic Jacobi eigensolver. Throws ContractViolation for non-Hermitian input.
HermitianEigen eig_herm(const MatC& h);

struct UnitaryEigen {
  std::vector<double> phases;  // ascending, in (-pi, pi]
  MatC vectors;                // g = U diag(exp(i phases)) U^dagger
};

/// Diagonalizes a regular unitary matrix through a generic real combination of
/// its commuting Hermitian parts. Eigenvector columns are normalized so the
/// component of largest modulus is real positive. Throws Regularity when two
/// eigenvalues are closer than tol.regular.
UnitaryEigen diag_unitary(const MatC& g);

/// Hermitian logarithm of a positive-definite Hermitian matrix.
MatC mat_log_pos(const MatC& p);
/// Positive square root of a positive-definite Hermitian matrix.
MatC mat_sqrt_pos(const MatC& p);

/// Nearest unitary matrix (polar factor) computed from the eigen-decomposition
/// of A^dagger A.
MatC polar_unitary(const MatC& a);

}  // namespace dsim
