#include "dsim/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dsim {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

double normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

MatC random_ginibre(std::size_t n, Rng& rng) {
  MatC z(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) z(j, k) = cplx(normal(rng), normal(rng)) / std::sqrt(2.0);
  return z;
}

MatC random_unitary(std::size_t n, Variant v, Rng& rng) {
  // qr_pos already fixes diag(R) > 0, which is the phase correction that
  // makes Q Haar distributed.
  MatC q = qr_pos(random_ginibre(n, rng)).q;
  if (v == Variant::su) {
    const double ph = std::arg(determinant(q)) / static_cast<double>(n);
    q *= std::polar(1.0, -ph);
  }
  return q;
}

MatC random_G(std::size_t n, Variant v, Rng& rng, double scale) {
  return remove_trace(antihermitian_part(random_ginibre(n, rng)) * cplx(scale), v);
}

MatC random_hermitian(std::size_t n, Variant v, Rng& rng, double scale) {
  return remove_trace(hermitian_part(random_ginibre(n, rng)) * cplx(scale), v);
}

MatC random_B_alg(std::size_t n, Variant v, Rng& rng, double scale) {
  MatC x = proj_B(random_ginibre(n, rng)) * cplx(scale);
  return remove_trace(x, v);
}

MatC random_B(std::size_t n, Variant v, Rng& rng, double scale) { return mat_exp(random_B_alg(n, v, rng, scale)); }

MatC random_K(std::size_t n, Variant v, Rng& rng) {
  MatC g = random_unitary(n, v, rng);
  return g * random_B(n, v, rng);
}

namespace {

// Values in [lo, hi) sorted and pairwise at least `gap` apart, by rejection.
std::vector<double> separated(std::size_t n, double lo, double hi, double gap, Rng& rng) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<double> x(n);
    for (auto& v : x) v = uniform(rng, lo, hi);
    std::sort(x.begin(), x.end());
    bool ok = true;
    for (std::size_t j = 1; j < n; ++j) ok = ok && (x[j] - x[j - 1] > gap);
    if (ok) return x;
  }
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = lo + (hi - lo) * (j + 0.5) / static_cast<double>(n);
  return x;
}

}  // namespace

MatC random_regular_torus(std::size_t n, Variant v, Rng& rng, double gap) {
  const double pi = std::numbers::pi;
  for (;;) {
    std::vector<double> q = separated(n, -pi, pi, gap, rng);
    if (v == Variant::su) {
      double mean = 0.0;
      for (double x : q) mean += x;
      mean /= static_cast<double>(n);
      for (auto& x : q) x -= mean;
    }
    // Also keep the first and last eigenvalue apart on the circle.
    const double wrap = 2 * pi - (q.back() - q.front());
    if (n > 1 && wrap <= gap) continue;
    std::vector<cplx> d(n);
    for (std::size_t j = 0; j < n; ++j) d[j] = std::polar(1.0, q[j]);
    return MatC::diag(std::span<const cplx>(d));
  }
}

MatC random_regular_cartan(std::size_t n, Variant v, Rng& rng, double gap) {
  std::vector<double> q = separated(n, -2.0, 2.0, gap, rng);
  if (v == Variant::su) {
    double mean = 0.0;
    for (double x : q) mean += x;
    mean /= static_cast<double>(n);
    for (auto& x : q) x -= mean;
  }
  std::vector<cplx> d(n);
  for (std::size_t j = 0; j < n; ++j) d[j] = cplx(0.0, q[j]);
  return MatC::diag(std::span<const cplx>(d));
}

MatC random_regular_b0(std::size_t n, Variant v, Rng& rng, double gap) {
  std::vector<double> q = separated(n, -1.0, 1.0, gap, rng);
  if (v == Variant::su) {
    double mean = 0.0;
    for (double x : q) mean += x;
    mean /= static_cast<double>(n);
    for (auto& x : q) x -= mean;
  }
  std::vector<double> d(n);
  for (std::size_t j = 0; j < n; ++j) d[j] = std::exp(q[j]);
  return MatC::diag(std::span<const double>(d));
}

PhasePoint random_point(Space s, std::size_t n, Variant v, Rng& rng) {
  switch (s) {
    case Space::cotangent: return {s, v, {random_unitary(n, v, rng), random_G(n, v, rng)}};
    case Space::heisenberg_K: return {s, v, {random_K(n, v, rng)}};
    case Space::heisenberg_GB: return {s, v, {random_unitary(n, v, rng), random_B(n, v, rng)}};
    case Space::quasi: return {s, v, {random_unitary(n, v, rng), random_unitary(n, v, rng)}};
    case Space::red_cot_1: return {s, v, {random_regular_torus(n, v, rng), random_G(n, v, rng)}};
    case Space::red_cot_2: return {s, v, {random_unitary(n, v, rng), random_regular_cartan(n, v, rng)}};
    case Space::red_heis_1: return {s, v, {random_regular_torus(n, v, rng), random_B(n, v, rng)}};
    case Space::red_heis_2: return {s, v, {random_unitary(n, v, rng), random_regular_b0(n, v, rng)}};
    case Space::red_quasi_1: return {s, v, {random_regular_torus(n, v, rng), random_unitary(n, v, rng)}};
    case Space::red_quasi_2: return {s, v, {random_unitary(n, v, rng), random_regular_torus(n, v, rng)}};
  }
  return {};
}

}  // namespace dsim
