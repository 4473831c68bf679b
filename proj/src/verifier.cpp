#include "masep/verifier.hpp"

#include "masep/random.hpp"

#include <array>
#include <sstream>

namespace masep {

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Passed: return "passed";
    case CheckStatus::Failed: return "failed";
    case CheckStatus::NotInvertible: return "not_invertible";
    case CheckStatus::SamplingError: return "sampling_error";
  }
  return "?";
}

CheckStatus parse_check_status(std::string_view s) {
  for (auto st : {CheckStatus::Passed, CheckStatus::Failed, CheckStatus::NotInvertible,
                  CheckStatus::SamplingError}) {
    if (to_string(st) == s) return st;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown check status '" + std::string(s) + "'");
}

std::optional<Witness> first_mismatch(const QMat& lhs, const QMat& rhs, const std::string& where) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
    throw Error(ErrorKind::InvalidDimension, "identity sides differ in shape: " + where);
  }
  for (Index r = 0; r < lhs.rows(); ++r) {
    for (Index c = 0; c < lhs.cols(); ++c) {
      if (lhs(r, c) != rhs(r, c)) return Witness{r, c, lhs(r, c), rhs(r, c), where};
    }
  }
  return std::nullopt;
}

namespace {

void record(CheckReport& report, std::optional<Witness> w) {
  if (w && !report.witness) {
    report.witness = std::move(w);
    report.status = CheckStatus::Failed;
  }
}

std::string join_points(const std::vector<Rat>& pts) {
  std::ostringstream os;
  for (std::size_t i = 0; i < pts.size(); ++i) os << (i ? "," : "") << pts[i];
  return os.str();
}

/// Draws `samples` tuples of `arity` points; `evaluate` may throw a pole or
/// singularity error, in which case the tuple is redrawn.
template <typename Fn>
void run_sampled(CheckReport& report, int samples, int arity, Fn&& evaluate) {
  if (samples < 1) throw Error(ErrorKind::InvalidArgument, "samples must be >= 1");
  SamplePointGenerator gen(report.seed);
  for (int s = 0; s < samples && report.status == CheckStatus::Passed; ++s) {
    bool done = false;
    for (int attempt = 0; attempt < SamplePointGenerator::kMaxAttempts; ++attempt) {
      std::vector<Rat> pts;
      for (int i = 0; i < arity; ++i) pts.push_back(gen.next());
      try {
        auto w = evaluate(pts);
        report.samples.push_back(pts);
        record(report, std::move(w));
        done = true;
        break;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::SpectralPole && e.kind() != ErrorKind::SingularMatrix) throw;
        gen.note_redraw();
        report.notes.push_back("redrew (" + join_points(pts) + "): " + e.what());
      }
    }
    if (!done) {
      report.status = CheckStatus::SamplingError;
      report.notes.push_back("no admissible sample point after " +
                             std::to_string(SamplePointGenerator::kMaxAttempts) + " attempts");
    }
  }
}

CheckReport make_report(std::string name, std::uint64_t seed = 0) {
  CheckReport r;
  r.check = std::move(name);
  r.seed = seed;
  return r;
}

void add_spec_params(CheckReport& r, const BoundarySpec& spec, const Rat& q) {
  r.params["N"] = std::to_string(spec.n_species);
  r.params["q"] = q.str();
  r.params["side"] = std::string(to_string(spec.side));
  r.params["spec"] = spec.normalized().str();
  if (spec.tilde_degenerate(q)) {
    r.notes.push_back("warning: a + c + q - 1 = 0, all tilde rates vanish");
  }
}

void add_bulk_params(CheckReport& r, int n, const Rat& q) {
  r.params["N"] = std::to_string(n);
  r.params["q"] = q.str();
}

QMat two_site_a(const QMat& m, const Rat& q) {
  return m + QMat::Identity(m.rows(), m.cols()) * q;
}

QMat commutator(const QMat& a, const QMat& b) { return a * b - b * a; }

}  // namespace

MatrixOfX r_matrix_from_generator(const QMat& m, const Rat& q, int n_species) {
  const QMat p = swap_operator(n_species);
  return [m, q, p](const Rat& x) -> QMat {
    const Rat den = q * x - Rat(1);
    if (den.is_zero()) throw Error(ErrorKind::SpectralPole, "R(x) pole at x = " + x.str());
    return p * (QMat::Identity(m.rows(), m.cols()) + m * ((x - Rat(1)) / den));
  };
}

CheckReport check_ybe(const BulkParams& p, int samples, std::uint64_t seed) {
  p.validate();
  auto report = check_ybe_with(r_matrix_from_generator(local_markov(p), p.q, p.n_species), p.n_species,
                               samples, seed);
  report.params["q"] = p.q.str();
  return report;
}

CheckReport check_ybe_with(const MatrixOfX& r, int n_species, int samples, std::uint64_t seed) {
  auto report = make_report("ybe", seed);
  report.params["N"] = std::to_string(n_species);
  report.params["degree_bound"] = "2 per variable";
  const TensorSpace space{n_species, 3};
  const std::array<int, 2> s12{1, 2}, s13{1, 3}, s23{2, 3};
  run_sampled(report, samples, 3, [&](const std::vector<Rat>& x) {
    const QMat r12 = embed_on_sites(r(x[0] / x[1]), s12, space);
    const QMat r13 = embed_on_sites(r(x[0] / x[2]), s13, space);
    const QMat r23 = embed_on_sites(r(x[1] / x[2]), s23, space);
    return first_mismatch(r12 * r13 * r23, r23 * r13 * r12, "ybe at (" + join_points(x) + ")");
  });
  return report;
}

CheckReport check_r_unitarity(const BulkParams& p, int samples, std::uint64_t seed) {
  p.validate();
  auto report = check_r_unitarity_with(r_matrix_from_generator(local_markov(p), p.q, p.n_species),
                                       p.n_species, samples, seed);
  report.params["q"] = p.q.str();
  return report;
}

CheckReport check_r_unitarity_with(const MatrixOfX& r, int n_species, int samples, std::uint64_t seed) {
  auto report = make_report("runitarity", seed);
  report.params["N"] = std::to_string(n_species);
  report.params["degree_bound"] = "2";
  const QMat p = swap_operator(n_species);
  const Index d = p.rows();
  run_sampled(report, samples, 1, [&](const std::vector<Rat>& x) {
    const QMat r21_inv = p * r(Rat(1) / x[0]) * p;
    return first_mismatch(r(x[0]) * r21_inv, QMat::Identity(d, d), "R(x)R21(1/x) at x=" + x[0].str());
  });
  return report;
}

CheckReport check_reflection(const BoundarySpec& spec, const Rat& q, int samples, std::uint64_t seed) {
  spec.validate_for(q);
  const BulkParams p{spec.n_species, q};
  auto report = check_reflection_with(
      [&p](const Rat& x) { return r_matrix(p, x); },
      [&spec, &q](const Rat& x) { return k_matrix(spec, q, x); }, spec.n_species, samples, seed);
  add_spec_params(report, spec, q);
  return report;
}

CheckReport check_reflection_with(const MatrixOfX& r, const MatrixOfX& k, int n_species, int samples,
                                  std::uint64_t seed) {
  auto report = make_report("reflection", seed);
  report.params["N"] = std::to_string(n_species);
  report.params["degree_bound"] = "6 per variable";
  const TensorSpace space{n_species, 2};
  const std::array<int, 2> s12{1, 2}, s21{2, 1};
  run_sampled(report, samples, 2, [&](const std::vector<Rat>& x) {
    const Rat ratio = x[0] / x[1];
    const Rat prod = x[0] * x[1];
    const QMat k1 = embed(k(x[0]), 1, space);
    const QMat k2 = embed(k(x[1]), 2, space);
    const QMat lhs =
        embed_on_sites(r(ratio), s12, space) * k1 * embed_on_sites(r(prod), s21, space) * k2;
    const QMat rhs =
        k2 * embed_on_sites(r(prod), s12, space) * k1 * embed_on_sites(r(ratio), s21, space);
    return first_mismatch(lhs, rhs, "reflection at (" + join_points(x) + ")");
  });
  return report;
}

CheckReport check_k_unitarity(const BoundarySpec& spec, const Rat& q, int samples, std::uint64_t seed) {
  spec.validate_for(q);
  auto report = check_k_unitarity_with([&spec, &q](const Rat& x) { return k_matrix(spec, q, x); },
                                       spec.n_species, samples, seed);
  add_spec_params(report, spec, q);
  return report;
}

CheckReport check_k_unitarity_with(const MatrixOfX& k, int n_species, int samples, std::uint64_t seed) {
  auto report = make_report("kunitarity", seed);
  report.params["N"] = std::to_string(n_species);
  report.params["degree_bound"] = "8";
  run_sampled(report, samples, 1, [&](const std::vector<Rat>& x) {
    return first_mismatch(k(x[0]) * k(Rat(1) / x[0]), QMat::Identity(n_species, n_species),
                          "K(x)K(1/x) at x=" + x[0].str());
  });
  return report;
}

CheckReport check_hecke(const BulkParams& p) {
  p.validate();
  return check_hecke_with(local_markov(p), p.q, p.n_species);
}

CheckReport check_hecke_with(const QMat& m, const Rat& q, int n_species) {
  auto report = make_report("hecke");
  add_bulk_params(report, n_species, q);
  record(report, first_mismatch(m * m, m * (-(Rat(1) + q)), "m^2 = -(1+q) m"));
  if (report.status != CheckStatus::Passed) return report;
  const TensorSpace space{n_species, 3};
  const QMat a = two_site_a(m, q);
  const QMat a1 = embed(a, 1, space);
  const QMat a2 = embed(a, 2, space);
  record(report, first_mismatch(a1 * a2 * a1, a2 * a1 * a2, "A1 A2 A1 = A2 A1 A2"));
  return report;
}

CheckReport check_boundary_algebra(const BoundarySpec& spec, const Rat& q) {
  spec.validate_for(q);
  const BulkParams p{spec.n_species, q};
  p.require_q_not_one();
  auto report = check_boundary_algebra_with(hecke_generator_rationalized(p), e0_matrix(spec, q), q);
  add_spec_params(report, spec, q);
  return report;
}

CheckReport check_boundary_algebra_with(const QMat& a, const QMat& e0, const Rat& q) {
  if (q == Rat(1)) throw Error(ErrorKind::DegenerateQ, "boundary algebra check needs q != 1");
  auto report = make_report("algebra");
  const int n = static_cast<int>(e0.rows());
  add_bulk_params(report, n, q);
  const QMat e = embed(e0, 1, TensorSpace{n, 2});
  const QMat e2 = e * e;
  const QMat lhs = a * e * a * e - e * a * e * a;
  const QMat rhs = (e2 * a * e - e * a * e2) * (q - Rat(1));
  record(report, first_mismatch(lhs, rhs, "AEAE - EAEA = (q-1)(E^2AE - EAE^2)"));
  return report;
}

CheckReport check_lemma_relations(const BoundarySpec& spec, const Rat& q, int k_max) {
  spec.validate_for(q);
  const BulkParams p{spec.n_species, q};
  p.require_q_not_one();
  auto report = check_lemma_relations_with(hecke_generator_rationalized(p), e0_matrix(spec, q), q, k_max);
  add_spec_params(report, spec, q);
  return report;
}

CheckReport check_lemma_relations_with(const QMat& a, const QMat& e0, const Rat& q, int k_max) {
  if (q == Rat(1)) throw Error(ErrorKind::DegenerateQ, "lemma relations need q != 1");
  if (k_max < 1) throw Error(ErrorKind::InvalidArgument, "k_max must be >= 1");
  auto report = make_report("lemma");
  const int n = static_cast<int>(e0.rows());
  add_bulk_params(report, n, q);
  report.params["k_max"] = std::to_string(k_max);
  const Rat w = q - Rat(1);
  const Index d = a.rows();
  const QMat id = QMat::Identity(d, d);
  const QMat e = embed(e0, 1, TensorSpace{n, 2});
  const QMat f = e + id;

  QMat ek = id;  // E^k
  QMat fk = id;  // F^k
  for (int k = 0; k <= k_max && report.status == CheckStatus::Passed; ++k) {
    const QMat ek1 = ek * e;
    const QMat fk1 = fk * f;
    const std::string tag = " (k=" + std::to_string(k) + ")";
    record(report, first_mismatch(a * e * a * ek - ek * a * e * a, (ek1 * a * e - e * a * ek1) * w,
                                  "A E A E^k - E^k A E A" + tag));
    record(report, first_mismatch(a * ek * a * e - e * a * ek * a,
                                  (ek1 * a * e - e * a * ek1 + ek * a * e - e * a * ek) * w,
                                  "A E^k A E - E A E^k A" + tag));
    record(report, first_mismatch(a * fk * a * e - e * a * fk * a, (fk1 * a * e - e * a * fk1) * w,
                                  "A F^k A E - E A F^k A" + tag));
    record(report, first_mismatch(a * e * fk * a * e - e * a * e * fk * a,
                                  (e * fk1 * a * e - e * a * e * fk1) * w,
                                  "A E F^k A E - E A E F^k A" + tag));
    ek = ek1;
    fk = fk1;
  }
  return report;
}

CheckReport check_poly_relations(const BoundarySpec& spec, const Rat& q) {
  spec.validate_for(q);
  auto report = make_report("poly");
  add_spec_params(report, spec, q);
  const BoundarySpec ks = spec.k_spec();
  const auto parts = decompose_boundary(ks, q);
  const auto [at, ct] = tilde_rates(ks.rate_a, ks.rate_c, q);
  const Rat& a = ks.rate_a;
  const Rat& c = ks.rate_c;
  const QMat& b0 = parts.b0;
  const QMat& bp = parts.b0_plus;
  const QMat& bm = parts.b0_minus;
  const int n = ks.n_species;
  const QMat zero = QMat::Zero(n, n);

  record(report, first_mismatch(b0 * b0, b0 * (-(a + ct)) + bp * at + bm * c,
                                "b0^2 = -(a+c~) b0 + a~ b0+ + c b0-"));
  record(report, first_mismatch(bp * bp, bp * (-c), "(b0+)^2 = -c b0+"));
  record(report, first_mismatch(bm * bm, bm * (-at), "(b0-)^2 = -a~ b0-"));
  record(report, first_mismatch(b0 * bp, bp * (-a), "b0 b0+ = -a b0+"));
  record(report, first_mismatch(bp * b0, bp * (-a), "b0+ b0 = -a b0+"));
  record(report, first_mismatch(b0 * bm, bm * (-ct), "b0 b0- = -c~ b0-"));
  record(report, first_mismatch(bm * b0, bm * (-ct), "b0- b0 = -c~ b0-"));
  record(report, first_mismatch(bp * bm, zero, "b0+ b0- = 0"));
  record(report, first_mismatch(bm * bp, zero, "b0- b0+ = 0"));
  if (q == Rat(1)) {
    report.notes.push_back("quartic for e0 skipped at q = 1");
    return report;
  }
  record(report, first_mismatch(e0_quartic(ks, q), zero, "e0(e0+1)(e0+a/(a+c))(e0+(a+c+q-1)/(q-1)) = 0"));
  report.params["e0_minimal_polynomial_degree"] = std::to_string(minimal_polynomial_degree(e0_matrix(ks, q)));
  return report;
}

CheckReport check_cyclotomic_map(const BoundarySpec& spec, const Rat& q) {
  spec.validate_for(q);
  const BulkParams p{spec.n_species, q};
  p.require_q_not_one();
  auto report = make_report("cyclotomic");
  add_spec_params(report, spec, q);
  const int n = spec.n_species;
  const QMat e0 = e0_matrix(spec, q);
  QMat ebar;
  try {
    ebar = e0 * invert(QMat(e0 + QMat::Identity(n, n)));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularMatrix) throw;
    report.status = CheckStatus::NotInvertible;
    report.notes.push_back("e0 + 1 is singular; the map ebar = e0 (1 + e0)^{-1} is unavailable");
    return report;
  }
  const QMat a = hecke_generator_rationalized(p);
  const QMat eb = embed(ebar, 1, TensorSpace{n, 2});
  record(report, first_mismatch(a * eb * a * eb, eb * a * eb * a, "A Ebar A Ebar = Ebar A Ebar A"));
  return report;
}

CheckReport check_right_bijection(const BoundarySpec& spec, const Rat& q) {
  spec.validate_for(q);
  auto report = make_report("bijection");
  BoundarySpec right = spec;
  right.side = Side::Right;
  BoundarySpec left = spec;
  left.side = Side::Left;
  add_spec_params(report, right, q);
  report.notes.push_back("diagnostic: literal exchange of a, c with their tilde rates");

  const auto [at, ct] = tilde_rates(spec.rate_a, spec.rate_c, q);
  const int n = spec.n_species;
  QMat swapped = QMat::Zero(n, n);
  for (const Transition& t : boundary_transitions(left, q)) {
    Rat rate;
    switch (t.symbol) {
      case RateSymbol::A: rate = at; break;
      case RateSymbol::ATilde: rate = spec.rate_a; break;
      case RateSymbol::C: rate = ct; break;
      case RateSymbol::CTilde: rate = spec.rate_c; break;
    }
    swapped(t.to - 1, t.from - 1) += rate;
    swapped(t.from - 1, t.from - 1) -= rate;
  }
  record(report, first_mismatch(build_right_boundary(right, q), swapped, "Bbar vs B with z <-> z~"));
  return report;
}

QMat open_transfer_matrix(const LatticeModel& model, const Rat& x) {
  const int n = model.n_species;
  const int l = model.sites;
  const TensorSpace space{n, l + 1};  // auxiliary space is factor 1
  const BulkParams bulk = model.bulk();
  const QMat r = r_matrix(bulk, x);
  const QMat k = k_matrix(model.left, model.q, x);
  const QMat kt = dual_k_matrix(model.right, model.q, x);

  const Index dim = space.dimension();
  QMat forward = QMat::Identity(dim, dim);  // R_0L ... R_01
  for (int j = l; j >= 1; --j) {
    const std::array<int, 2> sites{1, j + 1};
    forward = forward * embed_on_sites(r, sites, space);
  }
  QMat backward = QMat::Identity(dim, dim);  // R_10 ... R_L0
  for (int j = 1; j <= l; ++j) {
    const std::array<int, 2> sites{j + 1, 1};
    backward = backward * embed_on_sites(r, sites, space);
  }
  const QMat monodromy = forward * embed(k, 1, space) * backward * embed(kt, 1, space);
  std::vector<int> dims(static_cast<std::size_t>(l) + 1, n);
  return partial_trace(monodromy, 1, dims);
}

CheckReport check_transfer_commutation(const LatticeModel& model, int samples, std::uint64_t seed,
                                       Index cap) {
  model.validate();
  const Index dim = model.space().dimension() * model.n_species;
  if (dim > cap) {
    throw Error(ErrorKind::DimensionCapExceeded,
                "N^L * N = " + std::to_string(dim) + " exceeds cap " + std::to_string(cap));
  }
  auto report = make_report("transfer", seed);
  report.params["N"] = std::to_string(model.n_species);
  report.params["L"] = std::to_string(model.sites);
  report.params["q"] = model.q.str();
  report.params["left"] = model.left.normalized().str();
  report.params["right"] = model.right.normalized().str();
  report.params["degree_bound"] = "2L + 2N^2 + 8 per variable";
  for (const auto* spec : {&model.left, &model.right}) {
    if (spec->tilde_degenerate(model.q)) {
      report.notes.push_back("warning: " + std::string(to_string(spec->side)) +
                             " boundary has a + c + q - 1 = 0");
    }
  }
  const QMat m = full_markov(model);
  run_sampled(report, samples, 2, [&](const std::vector<Rat>& x) -> std::optional<Witness> {
    const QMat tx = open_transfer_matrix(model, x[0]);
    const QMat ty = open_transfer_matrix(model, x[1]);
    const QMat zero = QMat::Zero(tx.rows(), tx.cols());
    if (auto w = first_mismatch(commutator(tx, ty), zero, "[t(x), t(y)] at (" + join_points(x) + ")")) {
      return w;
    }
    return first_mismatch(commutator(tx, m), zero, "[t(x), M] at x=" + x[0].str());
  });
  return report;
}

}  // namespace masep
