#pragma once

#include "masep/linalg.hpp"

namespace masep {

/// Bulk parameters: N species counting holes as species 1, hop asymmetry q.
struct BulkParams {
  int n_species = 2;
  Rat q = Rat(1);

  /// Throws Error{InvalidArgument} unless N >= 2 and q > 0.
  void validate() const;
  /// Additionally rejects q = 1 with Error{DegenerateQ}.
  void require_q_not_one() const;
};

/// Two-site generator: a pair (i, j) with i > j swaps at rate 1, with i < j
/// at rate q.
QMat local_markov(const BulkParams& p);

/// R(x) = P (1 + (x - 1)/(q x - 1) m). Throws Error{SpectralPole} at q x = 1.
QMat r_matrix(const BulkParams& p, const Rat& x);

/// Sum of local generators over the L - 1 bonds; zero for a single site.
QMat bulk_markov(const BulkParams& p, int sites);

/// A = m + q Id. Equals sqrt(q) e_1, so every Hecke identity becomes a
/// rational identity in A: A^2 = (q - 1) A + q and A1 A2 A1 = A2 A1 A2.
QMat hecke_generator_rationalized(const BulkParams& p);

}  // namespace masep
