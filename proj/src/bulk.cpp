#include "masep/bulk.hpp"

namespace masep {

void BulkParams::validate() const {
  if (n_species < 2) {
    throw Error(ErrorKind::InvalidArgument, "N must be >= 2, got " + std::to_string(n_species));
  }
  if (q.sign() <= 0) throw Error(ErrorKind::InvalidArgument, "q must be positive, got " + q.str());
}

void BulkParams::require_q_not_one() const {
  validate();
  if (q == Rat(1)) throw Error(ErrorKind::DegenerateQ, "operation requires q != 1");
}

QMat local_markov(const BulkParams& p) {
  p.validate();
  const int n = p.n_species;
  const Index d = static_cast<Index>(n) * n;
  const auto pair = [n](int a, int b) { return static_cast<Index>(a) * n + b; };
  QMat m = QMat::Zero(d, d);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      // (j, i) -> (i, j) at rate 1
      m(pair(i, j), pair(j, i)) += Rat(1);
      m(pair(j, i), pair(j, i)) -= Rat(1);
      // (i, j) -> (j, i) at rate q
      m(pair(j, i), pair(i, j)) += p.q;
      m(pair(i, j), pair(i, j)) -= p.q;
    }
  }
  return m;
}

QMat r_matrix(const BulkParams& p, const Rat& x) {
  const Rat den = p.q * x - Rat(1);
  if (den.is_zero()) throw Error(ErrorKind::SpectralPole, "R(x) has a pole at x = 1/q = " + x.str());
  const Rat coeff = (x - Rat(1)) / den;
  const Index d = static_cast<Index>(p.n_species) * p.n_species;
  const QMat inner = QMat::Identity(d, d) + local_markov(p) * coeff;
  return swap_operator(p.n_species) * inner;
}

QMat bulk_markov(const BulkParams& p, int sites) {
  if (sites < 1) throw Error(ErrorKind::InvalidArgument, "L must be >= 1");
  const TensorSpace space{p.n_species, sites};
  QMat total = QMat::Zero(space.dimension(), space.dimension());
  if (sites == 1) return total;
  const QMat m = local_markov(p);
  for (int i = 1; i < sites; ++i) total += embed(m, i, space);
  return total;
}

QMat hecke_generator_rationalized(const BulkParams& p) {
  const Index d = static_cast<Index>(p.n_species) * p.n_species;
  return local_markov(p) + QMat::Identity(d, d) * p.q;
}

}  // namespace masep
