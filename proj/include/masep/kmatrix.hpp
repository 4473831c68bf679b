#pragma once

#include "masep/boundary.hpp"
#include "masep/bulk.hpp"

namespace masep {

/// k(x) = (x^2 - 1)(a + c) / [(c x + a)((a + c)(x - 1) + (q - 1) x)].
/// Throws Error{SpectralPole} where the denominator vanishes.
Rat k_scalar(const Rat& a, const Rat& c, const Rat& q, const Rat& x);

/// Closed-form k'(1) = 2 / (q - 1). Throws Error{DegenerateQ} at q = 1.
Rat k_derivative_at_one(const Rat& q);

/// K(x) = Id + k(x)(b0 + x b0+ + b0- / x), built from spec.k_spec().
QMat k_matrix(const BoundarySpec& spec, const Rat& q, const Rat& x);

/// K'(1) = k'(1) B for the k_spec() boundary B.
QMat k_matrix_derivative_at_one(const BoundarySpec& spec, const Rat& q);

/// e0 = (B + a + c + q - 1) / (1 - q) for the k_spec() boundary.
QMat e0_matrix(const BoundarySpec& spec, const Rat& q);

/// Baxterised form
///   f(1/x)/f(x) (Id - (x - 1) e0)(Id - (1/x - 1) e0)^{-1},
///   f(x) = (a + c + q - 1)(x - 1) + q - 1,
/// with an exact matrix inverse. Throws Error{SpectralPole} or
/// Error{SingularMatrix}.
QMat k_matrix_baxterised(const BoundarySpec& spec, const Rat& q, const Rat& x);

/// Kbar(x) = U K(1/x) U.
QMat kbar_matrix(const BoundarySpec& spec, const Rat& q, const Rat& x);

/// Kbar'(1) = -U K'(1) U, so -(q - 1)/2 Kbar'(1) is the right boundary matrix.
QMat kbar_matrix_derivative_at_one(const BoundarySpec& spec, const Rat& q);

/// Dual K-matrix
///   Kt_1(x) = tr_0( Kbar_0(1/x) ((R_01(x^2)^{t_1})^{-1})^{t_1} P_01 ).
/// Throws Error{SpectralPole} at q x^2 = 1 and Error{SingularMatrix} when the
/// partially transposed R is not invertible.
QMat dual_k_matrix(const BoundarySpec& spec, const Rat& q, const Rat& x);

/// Degree of the minimal polynomial of a square matrix (first linear
/// dependency among Id, m, m^2, ...).
int minimal_polynomial_degree(const QMat& m);

/// e0 (e0 + 1)(e0 + a/(a + c))(e0 + (a + c + q - 1)/(q - 1)).
QMat e0_quartic(const BoundarySpec& spec, const Rat& q);

}  // namespace masep
