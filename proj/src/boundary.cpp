#include "masep/boundary.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace masep {

std::string_view to_string(Side s) { return s == Side::Left ? "left" : "right"; }

std::string_view to_string(Variant v) { return v == Variant::Inert ? "inert" : "decaying"; }

std::string_view to_string(SpeciesClass c) {
  switch (c) {
    case SpeciesClass::VerySlow: return "very_slow";
    case SpeciesClass::Slow: return "slow";
    case SpeciesClass::Intermediate: return "intermediate";
    case SpeciesClass::Fast: return "fast";
    case SpeciesClass::VeryFast: return "very_fast";
  }
  return "?";
}

std::string_view to_string(RateSymbol s) {
  switch (s) {
    case RateSymbol::A: return "a";
    case RateSymbol::C: return "c";
    case RateSymbol::ATilde: return "a~";
    case RateSymbol::CTilde: return "c~";
  }
  return "?";
}

RateSymbol parse_rate_symbol(std::string_view s) {
  for (auto r : {RateSymbol::A, RateSymbol::C, RateSymbol::ATilde, RateSymbol::CTilde}) {
    if (to_string(r) == s) return r;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown rate symbol '" + std::string(s) + "'");
}

Side parse_side(std::string_view s) {
  if (s == "left") return Side::Left;
  if (s == "right") return Side::Right;
  throw Error(ErrorKind::InvalidSpec, "unknown side '" + std::string(s) + "'");
}

Variant parse_variant(std::string_view s) {
  if (s == "inert") return Variant::Inert;
  if (s == "decaying") return Variant::Decaying;
  throw Error(ErrorKind::InvalidSpec, "unknown variant '" + std::string(s) + "'");
}

BoundarySpec BoundarySpec::make(Side side, Rat a, Rat c, int s1, int s2, int f2, int f1,
                                Variant variant, int n_species) {
  BoundarySpec spec{side, std::move(a), std::move(c), s1, s2, f2, f1, variant, n_species};
  spec.validate();
  return spec.normalized();
}

void BoundarySpec::validate() const {
  const auto fail = [this](const std::string& why) {
    throw Error(ErrorKind::InvalidSpec, str() + ": " + why);
  };
  if (n_species < 2) fail("N must be >= 2");
  if (!(1 <= s1 && s1 <= s2 && s2 < f2 && f2 <= f1 && f1 <= n_species)) {
    fail("labels must satisfy 1 <= s1 <= s2 < f2 <= f1 <= N");
  }
  if (f1 - f2 != s2 - s1) fail("labels must satisfy f1 - f2 = s2 - s1");
  if (rate_a.sign() < 0 || rate_c.sign() < 0) fail("rates must be nonnegative");
  if ((rate_a + rate_c).is_zero()) fail("rates must not both vanish");
}

void BoundarySpec::validate_for(const Rat& q) const {
  validate();
  if ((rate_a + rate_c + q - Rat(1)).sign() < 0) {
    throw Error(ErrorKind::NonMarkovian,
                str() + ": a + c + q - 1 < 0 makes the tilde rates negative at q = " + q.str());
  }
}

BoundarySpec BoundarySpec::normalized() const {
  BoundarySpec out = *this;
  if (!out.has_intermediate()) out.variant = Variant::Inert;
  return out;
}

bool BoundarySpec::tilde_degenerate(const Rat& q) const {
  return (rate_a + rate_c + q - Rat(1)).is_zero();
}

BoundarySpec BoundarySpec::k_spec() const {
  if (side == Side::Left) return normalized();
  const int n1 = n_species + 1;
  BoundarySpec out = *this;
  out.side = Side::Left;
  out.s1 = n1 - f1;
  out.s2 = n1 - f2;
  out.f2 = n1 - s2;
  out.f1 = n1 - s1;
  return out.normalized();
}

std::string BoundarySpec::str() const {
  std::ostringstream os;
  os << s1 << ',' << s2 << ',' << f2 << ',' << f1 << ',' << to_string(variant) << ":a=" << rate_a
     << ",c=" << rate_c;
  return os.str();
}

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

int parse_label(std::string_view text) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::InvalidSpec, "malformed species label '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

BoundarySpec parse_spec(std::string_view text, Side side, int n_species, const Rat& a, const Rat& c) {
  const std::size_t colon = text.find(':');
  const auto labels = split(text.substr(0, colon), ',');
  if (labels.size() != 4 && labels.size() != 5) {
    throw Error(ErrorKind::InvalidSpec, "spec needs s1,s2,f2,f1[,variant]: '" + std::string(text) + "'");
  }
  Rat rate_a = a;
  Rat rate_c = c;
  if (colon != std::string_view::npos) {
    for (std::string_view item : split(text.substr(colon + 1), ',')) {
      const std::size_t eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw Error(ErrorKind::InvalidSpec, "rate suffix needs key=value: '" + std::string(item) + "'");
      }
      const std::string_view key = item.substr(0, eq);
      if (key == "a") {
        rate_a = Rat::parse(item.substr(eq + 1));
      } else if (key == "c") {
        rate_c = Rat::parse(item.substr(eq + 1));
      } else {
        throw Error(ErrorKind::InvalidSpec, "unknown rate key '" + std::string(key) + "'");
      }
    }
  }
  Variant variant = Variant::Inert;
  if (labels.size() == 5) {
    variant = parse_variant(labels[4]);
  }
  return BoundarySpec::make(side, rate_a, rate_c, parse_label(labels[0]), parse_label(labels[1]),
                            parse_label(labels[2]), parse_label(labels[3]), variant, n_species);
}

TildeRates tilde_rates(const Rat& a, const Rat& c, const Rat& q) {
  const Rat sum = a + c;
  if (sum.is_zero()) throw Error(ErrorKind::DegenerateRates, "a + c = 0");
  const Rat scale = (sum + q - Rat(1)) / sum;
  return {scale * a, scale * c};
}

SpeciesClass classify(const BoundarySpec& spec, int species) {
  if (species < 1 || species > spec.n_species) {
    throw Error(ErrorKind::InvalidSpecies,
                "species " + std::to_string(species) + " outside 1.." + std::to_string(spec.n_species));
  }
  if (species < spec.s1) return SpeciesClass::VerySlow;
  if (species <= spec.s2) return SpeciesClass::Slow;
  if (species < spec.f2) return SpeciesClass::Intermediate;
  if (species <= spec.f1) return SpeciesClass::Fast;
  return SpeciesClass::VeryFast;
}

namespace {

void require_left(const BoundarySpec& spec, const char* what) {
  if (spec.side != Side::Left) {
    throw Error(ErrorKind::InvalidSpec, std::string(what) + " expects a left-form spec");
  }
}

}  // namespace

std::vector<Transition> boundary_transitions(const BoundarySpec& raw, const Rat& q) {
  require_left(raw, "boundary_transitions");
  raw.validate_for(q);
  const BoundarySpec spec = raw.normalized();
  const Rat& a = spec.rate_a;
  const Rat& c = spec.rate_c;
  const auto [at, ct] = tilde_rates(a, c, q);

  std::vector<Transition> out;
  const auto add = [&](int from, int to, RateSymbol sym, const Rat& rate) {
    if (from != to) out.push_back({from, to, sym, rate});
  };
  for (int t = 1; t <= spec.n_species; ++t) {
    const int partner = spec.s1 + spec.f1 - t;
    switch (classify(spec, t)) {
      case SpeciesClass::VerySlow:
        add(t, spec.s1, RateSymbol::C, c);
        add(t, spec.f1, RateSymbol::A, a);
        break;
      case SpeciesClass::Slow:
        add(t, partner, RateSymbol::A, a);
        break;
      case SpeciesClass::Intermediate:
        if (spec.variant == Variant::Decaying) {
          add(t, spec.s2, RateSymbol::CTilde, ct);
          add(t, spec.f2, RateSymbol::A, a);
        }
        break;
      case SpeciesClass::Fast:
        add(t, partner, RateSymbol::CTilde, ct);
        break;
      case SpeciesClass::VeryFast:
        add(t, spec.s1, RateSymbol::CTilde, ct);
        add(t, spec.f1, RateSymbol::ATilde, at);
        break;
    }
  }
  std::sort(out.begin(), out.end(), [](const Transition& x, const Transition& y) {
    return std::pair(x.from, x.to) < std::pair(y.from, y.to);
  });
  return out;
}

QMat boundary_from_rules(const BoundarySpec& spec, const Rat& q) {
  const int n = spec.n_species;
  QMat b = QMat::Zero(n, n);
  for (const auto& tr : boundary_transitions(spec, q)) {
    if (tr.rate.is_zero()) continue;
    b(tr.to - 1, tr.from - 1) += tr.rate;
    b(tr.from - 1, tr.from - 1) -= tr.rate;
  }
  return b;
}

QMat build_boundary(const BoundarySpec& raw, const Rat& q) {
  if (raw.side == Side::Right) return build_right_boundary(raw, q);
  raw.validate_for(q);
  const BoundarySpec spec = raw.normalized();
  const int n = spec.n_species;
  const Rat& a = spec.rate_a;
  const Rat& c = spec.rate_c;
  const auto [at, ct] = tilde_rates(a, c, q);

  // 0-based block boundaries
  const Index s1 = spec.s1 - 1, s2 = spec.s2 - 1, f2 = spec.f2 - 1, f1 = spec.f1 - 1;
  const Index n_very_slow = s1;
  const Index n_slow = s2 - s1 + 1;
  const Index n_inter = f2 - s2 - 1;
  const Index n_very_fast = n - 1 - f1;

  QMat b = QMat::Zero(n, n);

  // very slow block: -sigma on the diagonal, c into row s1, a into row f1
  b.diagonal().head(n_very_slow).setConstant(-(a + c));
  b.block(s1, 0, 1, n_very_slow).setConstant(c);
  b.block(f1, 0, 1, n_very_slow).setConstant(a);

  // slow block: -a on the diagonal, a on the anti-diagonal into the fast block
  b.diagonal().segment(s1, n_slow).setConstant(-a);
  for (Index k = 0; k < n_slow; ++k) b(f1 - k, s1 + k) = a;

  // intermediate block: zero (B^0) or decaying to s2 and f2 (B)
  if (spec.variant == Variant::Decaying) {
    b.diagonal().segment(s2 + 1, n_inter).setConstant(-(a + ct));
    b.block(s2, s2 + 1, 1, n_inter).setConstant(ct);
    b.block(f2, s2 + 1, 1, n_inter).setConstant(a);
  }

  // fast block: -c~ on the diagonal, c~ on the anti-diagonal into the slow block
  b.diagonal().segment(f2, n_slow).setConstant(-ct);
  for (Index k = 0; k < n_slow; ++k) b(s1 + k, f1 - k) = ct;

  // very fast block: -sigma~ on the diagonal, c~ into row s1, a~ into row f1
  b.diagonal().tail(n_very_fast).setConstant(-(at + ct));
  b.block(s1, f1 + 1, 1, n_very_fast).setConstant(ct);
  b.block(f1, f1 + 1, 1, n_very_fast).setConstant(at);
  return b;
}

QMat build_right_boundary(const BoundarySpec& spec, const Rat& q) {
  if (spec.side != Side::Right) {
    throw Error(ErrorKind::InvalidSpec, "build_right_boundary expects a right spec");
  }
  const QMat u = reversal_operator(spec.n_species);
  return u * build_boundary(spec.k_spec(), q) * u;
}

BoundaryParts decompose_boundary(const BoundarySpec& raw, const Rat& q) {
  if (raw.side == Side::Right) {
    const QMat u = reversal_operator(raw.n_species);
    auto parts = decompose_boundary(raw.k_spec(), q);
    return {u * parts.b0 * u, u * parts.b0_plus * u, u * parts.b0_minus * u};
  }
  const QMat b = build_boundary(raw, q);
  const BoundarySpec spec = raw.normalized();
  const int n = spec.n_species;
  const auto at = tilde_rates(spec.rate_a, spec.rate_c, q).a;
  const Index s1 = spec.s1 - 1, f1 = spec.f1 - 1;

  QMat plus = QMat::Zero(n, n);
  for (Index t = 0; t < s1; ++t) {
    plus(t, t) = -spec.rate_c;
    plus(s1, t) = spec.rate_c;
  }
  QMat minus = QMat::Zero(n, n);
  for (Index t = f1 + 1; t < n; ++t) {
    minus(t, t) = -at;
    minus(f1, t) = at;
  }
  QMat b0 = b - plus - minus;
  return {std::move(b0), std::move(plus), std::move(minus)};
}

std::vector<BoundarySpec> enumerate_specs(int n_species) {
  if (n_species < 2) throw Error(ErrorKind::InvalidArgument, "N must be >= 2");
  std::vector<BoundarySpec> out;
  for (int s1 = 1; s1 <= n_species; ++s1) {
    for (int s2 = s1; s2 <= n_species; ++s2) {
      for (int f2 = s2 + 1; f2 <= n_species; ++f2) {
        const int f1 = f2 + (s2 - s1);
        if (f1 > n_species) continue;
        BoundarySpec spec{Side::Left, Rat(1), Rat(1), s1, s2, f2, f1, Variant::Inert, n_species};
        out.push_back(spec);
        if (spec.has_intermediate()) {
          spec.variant = Variant::Decaying;
          out.push_back(spec);
        }
      }
    }
  }
  return out;
}

QMat deform_boundary(const QMat& b, const std::vector<Rat>& weights) {
  if (static_cast<Index>(weights.size()) != b.rows() || b.rows() != b.cols()) {
    throw Error(ErrorKind::InvalidDimension, "need one weight per species");
  }
  for (const auto& w : weights) {
    if (w.is_zero()) throw Error(ErrorKind::SingularConjugation, "zero conjugation weight");
  }
  QMat out = b;
  for (Index i = 0; i < b.rows(); ++i) {
    for (Index j = 0; j < b.cols(); ++j) {
      if (i != j && !b(i, j).is_zero()) {
        out(i, j) = b(i, j) * weights[static_cast<std::size_t>(i)] / weights[static_cast<std::size_t>(j)];
      }
    }
  }
  return out;
}

}  // namespace masep
