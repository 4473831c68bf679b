#include "masep/kmatrix.hpp"

#include <array>

namespace masep {

Rat k_scalar(const Rat& a, const Rat& c, const Rat& q, const Rat& x) {
  const Rat sigma = a + c;
  const Rat den = (c * x + a) * (sigma * (x - Rat(1)) + (q - Rat(1)) * x);
  if (den.is_zero()) throw Error(ErrorKind::SpectralPole, "k(x) has a pole at x = " + x.str());
  return (x * x - Rat(1)) * sigma / den;
}

Rat k_derivative_at_one(const Rat& q) {
  if (q == Rat(1)) throw Error(ErrorKind::DegenerateQ, "k'(1) = 2/(q - 1) needs q != 1");
  return Rat(2) / (q - Rat(1));
}

QMat k_matrix(const BoundarySpec& spec, const Rat& q, const Rat& x) {
  if (x.is_zero()) throw Error(ErrorKind::SpectralPole, "K(x) is undefined at x = 0");
  const BoundarySpec ks = spec.k_spec();
  const Rat k = k_scalar(ks.rate_a, ks.rate_c, q, x);
  const auto parts = decompose_boundary(ks, q);
  const int n = ks.n_species;
  return QMat::Identity(n, n) + (parts.b0 + parts.b0_plus * x + parts.b0_minus / x) * k;
}

QMat k_matrix_derivative_at_one(const BoundarySpec& spec, const Rat& q) {
  const BoundarySpec ks = spec.k_spec();
  return build_boundary(ks, q) * k_derivative_at_one(q);
}

QMat e0_matrix(const BoundarySpec& spec, const Rat& q) {
  if (q == Rat(1)) throw Error(ErrorKind::DegenerateQ, "e0 = (B + a + c + q - 1)/(1 - q) needs q != 1");
  const BoundarySpec ks = spec.k_spec();
  const int n = ks.n_species;
  const Rat shift = ks.rate_a + ks.rate_c + q - Rat(1);
  return (build_boundary(ks, q) + QMat::Identity(n, n) * shift) / (Rat(1) - q);
}

QMat k_matrix_baxterised(const BoundarySpec& spec, const Rat& q, const Rat& x) {
  if (x.is_zero()) throw Error(ErrorKind::SpectralPole, "K(x) is undefined at x = 0");
  const BoundarySpec ks = spec.k_spec();
  const QMat e0 = e0_matrix(ks, q);
  const Rat shift = ks.rate_a + ks.rate_c + q - Rat(1);
  const Rat inv_x = Rat(1) / x;
  const Rat num = shift * (inv_x - Rat(1)) + q - Rat(1);
  const Rat den = shift * (x - Rat(1)) + q - Rat(1);
  if (den.is_zero()) {
    throw Error(ErrorKind::SpectralPole, "Baxterised K prefactor has a pole at x = " + x.str());
  }
  const int n = ks.n_species;
  const QMat id = QMat::Identity(n, n);
  const QMat upper = id - e0 * (x - Rat(1));
  const QMat lower = id - e0 * (inv_x - Rat(1));
  return upper * invert(lower) * (num / den);
}

QMat kbar_matrix(const BoundarySpec& spec, const Rat& q, const Rat& x) {
  if (x.is_zero()) throw Error(ErrorKind::SpectralPole, "Kbar(x) is undefined at x = 0");
  const QMat u = reversal_operator(spec.n_species);
  return u * k_matrix(spec, q, Rat(1) / x) * u;
}

QMat kbar_matrix_derivative_at_one(const BoundarySpec& spec, const Rat& q) {
  const QMat u = reversal_operator(spec.n_species);
  return -(u * k_matrix_derivative_at_one(spec, q) * u);
}

QMat dual_k_matrix(const BoundarySpec& spec, const Rat& q, const Rat& x) {
  if (x.is_zero()) throw Error(ErrorKind::SpectralPole, "dual K is undefined at x = 0");
  const int n = spec.n_species;
  const std::array<int, 2> dims{n, n};
  const BulkParams bulk{n, q};
  const QMat r = r_matrix(bulk, x * x);
  QMat crossed;
  try {
    crossed = partial_transpose(invert(partial_transpose(r, 2, dims)), 2, dims);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularMatrix) throw;
    throw Error(ErrorKind::SingularMatrix,
                "R(x^2)^{t_1} is singular at x = " + x.str() + " (q = " + q.str() + ")");
  }
  const QMat kbar0 = kron(kbar_matrix(spec, q, Rat(1) / x), QMat::Identity(n, n));
  return partial_trace(kbar0 * crossed * swap_operator(n), 1, dims);
}

int minimal_polynomial_degree(const QMat& m) {
  const Index n = m.rows();
  // columns are vec(m^k); the first k whose column is dependent is the degree
  QMat powers(n * n, 0);
  QMat current = QMat::Identity(n, n);
  for (int k = 0; k <= n; ++k) {
    powers.conservativeResize(n * n, k + 1);
    powers.col(k) = current.reshaped();
    if (rank(powers) < k + 1) return k;
    current = current * m;
  }
  return static_cast<int>(n);
}

QMat e0_quartic(const BoundarySpec& spec, const Rat& q) {
  const BoundarySpec ks = spec.k_spec();
  const QMat e0 = e0_matrix(ks, q);
  const int n = ks.n_species;
  const QMat id = QMat::Identity(n, n);
  const Rat sigma = ks.rate_a + ks.rate_c;
  return e0 * (e0 + id) * (e0 + id * (ks.rate_a / sigma)) *
         (e0 + id * ((sigma + q - Rat(1)) / (q - Rat(1))));
}

}  // namespace masep
