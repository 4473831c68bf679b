#pragma once

// Zero-tolerance checks of the integrability identities.
//
// Identities in the spectral parameter are checked by exact evaluation at
// seeded random rational points. Both sides are rational functions of
// bounded degree in each variable; the bound is recorded in the report
// params as "degree_bound". Identities that carry sqrt(q) (through
// e_1 = (m + q)/sqrt(q) and omega = sqrt(q) - 1/sqrt(q)) are checked in the
// equivalent form obtained with A = m + q and powers of sqrt(q) cleared.

#include "masep/kmatrix.hpp"
#include "masep/markov.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace masep {

enum class CheckStatus { Passed, Failed, NotInvertible, SamplingError };

std::string_view to_string(CheckStatus s);
CheckStatus parse_check_status(std::string_view s);

/// First entry where two sides of an identity differ.
struct Witness {
  Index row = 0;
  Index col = 0;
  Rat lhs;
  Rat rhs;
  std::string where;  // which identity / sample produced the mismatch

  friend bool operator==(const Witness&, const Witness&) = default;
};

/// status == Failed exactly when a witness is present. NotInvertible marks
/// an inapplicable check (nothing violated) and counts as passed.
struct CheckReport {
  std::string check;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 0;
  std::vector<std::vector<Rat>> samples;
  CheckStatus status = CheckStatus::Passed;
  std::optional<Witness> witness;
  std::vector<std::string> notes;

  bool passed() const { return status == CheckStatus::Passed || status == CheckStatus::NotInvertible; }

  friend bool operator==(const CheckReport&, const CheckReport&) = default;
};

std::optional<Witness> first_mismatch(const QMat& lhs, const QMat& rhs, const std::string& where);

using MatrixOfX = std::function<QMat(const Rat&)>;

/// R(x) = P (1 + (x - 1)/(q x - 1) m) for an arbitrary two-site generator m.
MatrixOfX r_matrix_from_generator(const QMat& m, const Rat& q, int n_species);

CheckReport check_ybe(const BulkParams& p, int samples, std::uint64_t seed);
CheckReport check_ybe_with(const MatrixOfX& r, int n_species, int samples, std::uint64_t seed);

CheckReport check_r_unitarity(const BulkParams& p, int samples, std::uint64_t seed);
CheckReport check_r_unitarity_with(const MatrixOfX& r, int n_species, int samples, std::uint64_t seed);

CheckReport check_reflection(const BoundarySpec& spec, const Rat& q, int samples, std::uint64_t seed);
CheckReport check_reflection_with(const MatrixOfX& r, const MatrixOfX& k, int n_species, int samples,
                                  std::uint64_t seed);

CheckReport check_k_unitarity(const BoundarySpec& spec, const Rat& q, int samples, std::uint64_t seed);
CheckReport check_k_unitarity_with(const MatrixOfX& k, int n_species, int samples, std::uint64_t seed);

/// m^2 = -(1 + q) m and A1 A2 A1 = A2 A1 A2 with A = m + q.
CheckReport check_hecke(const BulkParams& p);
CheckReport check_hecke_with(const QMat& m, const Rat& q, int n_species);

/// A E A E - E A E A = (q - 1)(E^2 A E - E A E^2), A = m_12 + q, E = e0 on
/// site 1.
CheckReport check_boundary_algebra(const BoundarySpec& spec, const Rat& q);
CheckReport check_boundary_algebra_with(const QMat& a, const QMat& e0, const Rat& q);

/// The four recursive families for k = 0..k_max, sqrt(q)-cleared.
CheckReport check_lemma_relations(const BoundarySpec& spec, const Rat& q, int k_max);
CheckReport check_lemma_relations_with(const QMat& a, const QMat& e0, const Rat& q, int k_max);

/// Quadratic relations among b0, b0+, b0- and, for q != 1, the quartic
/// annihilating e0. Notes carry the minimal polynomial degree of e0.
CheckReport check_poly_relations(const BoundarySpec& spec, const Rat& q);

/// ebar = e0 (1 + e0)^{-1} satisfies A ebar A ebar = ebar A ebar A, or
/// NotInvertible when e0 + 1 is singular.
CheckReport check_cyclotomic_map(const BoundarySpec& spec, const Rat& q);

/// Diagnostic, not an integrability identity: compares the right boundary
/// matrix with the left template on the same labels after exchanging
/// a <-> a~ and c <-> c~. The literal exchange agrees only when a = c; the
/// outcome is recorded as measured.
CheckReport check_right_bijection(const BoundarySpec& spec, const Rat& q);

/// t(x) = tr_0(R_0L(x)..R_01(x) K_0(x) R_10(x)..R_L0(x) Kt_0(x)).
QMat open_transfer_matrix(const LatticeModel& model, const Rat& x);

/// [t(x), t(y)] = 0 and [t(x), M] = 0. Throws Error{DimensionCapExceeded}
/// when N^(L+1) exceeds `cap`.
CheckReport check_transfer_commutation(const LatticeModel& model, int samples, std::uint64_t seed,
                                       Index cap = 256);

}  // namespace masep
