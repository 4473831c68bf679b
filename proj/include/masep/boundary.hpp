#pragma once

#include "masep/linalg.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace masep {

enum class Side { Left, Right };
/// Inert: intermediate species never move. Decaying: intermediate species
/// decay to s2 (rate c~) and to f2 (rate a).
enum class Variant { Inert, Decaying };
enum class SpeciesClass { VerySlow, Slow, Intermediate, Fast, VeryFast };

std::string_view to_string(Side s);
std::string_view to_string(Variant v);
std::string_view to_string(SpeciesClass c);
Side parse_side(std::string_view s);
Variant parse_variant(std::string_view s);

/// One member of the integrable boundary family.
///
/// rate_a / rate_c are (alpha, gamma) on the left and (beta, delta) on the
/// right. The four labels satisfy 1 <= s1 <= s2 < f2 <= f1 <= N with
/// f1 - f2 = s2 - s1: species in [s1, s2] are slow, [f2, f1] fast, and
/// slow species t is paired with t' = s1 + f1 - t.
struct BoundarySpec {
  Side side = Side::Left;
  Rat rate_a = Rat(1);
  Rat rate_c = Rat(1);
  int s1 = 1;
  int s2 = 1;
  int f2 = 2;
  int f1 = 2;
  Variant variant = Variant::Inert;
  int n_species = 2;

  /// Validated and normalized (variant forced to Inert when no
  /// intermediate species exist). Throws Error{InvalidSpec}.
  static BoundarySpec make(Side side, Rat a, Rat c, int s1, int s2, int f2, int f1, Variant variant,
                           int n_species);

  /// Throws Error{InvalidSpec} on label or rate violations.
  void validate() const;
  /// Also requires a + c + q - 1 >= 0. Throws Error{NonMarkovian}.
  void validate_for(const Rat& q) const;

  BoundarySpec normalized() const;
  bool has_intermediate() const { return f2 > s2 + 1; }
  /// a + c + q - 1 == 0: admissible, but every tilde rate vanishes.
  bool tilde_degenerate(const Rat& q) const;

  /// The left-form spec whose K-matrix produces this boundary. Identity for
  /// left specs; for right specs the labels are reflected through
  /// t -> N + 1 - t (s''_j = N + 1 - f'_j, f''_j = N + 1 - s'_j).
  BoundarySpec k_spec() const;

  /// "s1,s2,f2,f1,variant:a=..,c=.."
  std::string str() const;

  friend bool operator==(const BoundarySpec&, const BoundarySpec&) = default;
};

/// Parses "s1,s2,f2,f1[,variant][:a=p/q,c=p/q]"; rates missing from the
/// text take `a` and `c`. Throws Error{InvalidSpec} or Error{InvalidRational}.
BoundarySpec parse_spec(std::string_view text, Side side, int n_species, const Rat& a = Rat(1),
                        const Rat& c = Rat(1));

struct TildeRates {
  Rat a;
  Rat c;
};

/// a~ = (a + c + q - 1) a / (a + c), c~ likewise. Throws
/// Error{DegenerateRates} when a + c = 0.
TildeRates tilde_rates(const Rat& a, const Rat& c, const Rat& q);

/// Throws Error{InvalidSpecies} outside 1..N.
SpeciesClass classify(const BoundarySpec& spec, int species);

/// Symbolic name of a boundary rate, as printed in rate tables.
enum class RateSymbol { A, C, ATilde, CTilde };
std::string_view to_string(RateSymbol s);
RateSymbol parse_rate_symbol(std::string_view s);

struct Transition {
  int from = 0;  // 1-based species
  int to = 0;
  RateSymbol symbol = RateSymbol::A;
  Rat rate;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Boundary transitions of a left-form spec read off the class rules,
/// ordered by (from, to).
std::vector<Transition> boundary_transitions(const BoundarySpec& spec, const Rat& q);

/// Independent constructor: B = sum r(i -> j) E_ji - diag(exit rates) from
/// boundary_transitions(). Left-form specs only.
QMat boundary_from_rules(const BoundarySpec& spec, const Rat& q);

/// The block template (B^0 for Inert, B for Decaying) for left specs; right
/// specs are dispatched to build_right_boundary.
QMat build_boundary(const BoundarySpec& spec, const Rat& q);

/// U B(k_spec) U^{-1} with U the species reversal.
QMat build_right_boundary(const BoundarySpec& spec, const Rat& q);

struct BoundaryParts {
  QMat b0;
  QMat b0_plus;   // very slow -> s1 at rate c
  QMat b0_minus;  // very fast -> f1 at rate a~
};

/// B = b0 + b0_plus + b0_minus, each part Markovian. For right specs the
/// parts are U-conjugated so they still sum to the right boundary matrix.
BoundaryParts decompose_boundary(const BoundarySpec& spec, const Rat& q);

/// All label sets for N species, unit rates, left side; a Decaying copy
/// follows each Inert one when intermediate species exist. C(N+1, 3) items.
std::vector<BoundarySpec> enumerate_specs(int n_species);

/// V b V^{-1} with V = diag(weights). Throws Error{SingularConjugation} on a
/// zero weight.
QMat deform_boundary(const QMat& b, const std::vector<Rat>& weights);

}  // namespace masep
