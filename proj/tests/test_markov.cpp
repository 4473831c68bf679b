#include "masep/markov.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace masep;
using testing_support::mat;
using testing_support::RatSource;
using testing_support::with_rates;

namespace {

BoundarySpec spec(Side side, const Rat& a, const Rat& c, int s1, int s2, int f2, int f1, int n,
                  Variant v = Variant::Inert) {
  return BoundarySpec::make(side, a, c, s1, s2, f2, f1, v, n);
}

LatticeModel model(int n, int l, const Rat& q, const BoundarySpec& left, const BoundarySpec& right) {
  LatticeModel m;
  m.n_species = n;
  m.sites = l;
  m.q = q;
  m.left = left;
  m.right = right;
  return m;
}

bool nonnegative_off_diagonal(const QMat& m) {
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (r != c && m(r, c).sign() < 0) return false;
    }
  }
  return true;
}

/// Mirror image of a model: species reversed on every site, sites reversed,
/// left and right boundaries exchanged.
LatticeModel mirrored(const LatticeModel& m) {
  BoundarySpec left = m.right.k_spec();
  left.side = Side::Left;
  BoundarySpec right = m.left;
  right.side = Side::Right;
  right = right.k_spec();
  right.side = Side::Right;
  return model(m.n_species, m.sites, m.q, left, right);
}

Index mirror_index(const TensorSpace& space, Index i) {
  auto c = space.config_of(i);
  std::reverse(c.begin(), c.end());
  for (auto& t : c) t = space.local_dim + 1 - t;
  return space.index_of(c);
}

/// Floating-point power iteration of Id + M / lambda.
std::vector<double> power_iteration(const QMat& m) {
  const auto d = static_cast<std::size_t>(m.rows());
  double lambda = 0;
  for (Index i = 0; i < m.rows(); ++i) lambda = std::max(lambda, -m(i, i).to_double());
  lambda *= 1.5;
  std::vector<double> p(d, 1.0 / static_cast<double>(d)), next(d);
  for (int it = 0; it < 200000; ++it) {
    double change = 0;
    for (std::size_t r = 0; r < d; ++r) {
      double acc = p[r];
      for (std::size_t c = 0; c < d; ++c) {
        acc += m(static_cast<Index>(r), static_cast<Index>(c)).to_double() / lambda * p[c];
      }
      next[r] = acc;
    }
    for (std::size_t r = 0; r < d; ++r) change = std::max(change, std::abs(next[r] - p[r]));
    p.swap(next);
    if (change < 1e-15) break;
  }
  return p;
}

}  // namespace

TEST_CASE("single site") {
  const Rat alpha(2, 3), beta(5, 4);
  const auto mdl = model(2, 1, Rat(1, 2), spec(Side::Left, alpha, Rat(0), 1, 1, 2, 2, 2),
                         spec(Side::Right, beta, Rat(0), 1, 1, 2, 2, 2));
  CHECK(full_markov(mdl) == mat({{-alpha, beta}, {alpha, -beta}}));
  const auto st = stationary_distribution(mdl);
  CHECK(st.irreducible);
  CHECK(st.kernel_dimension == 1);
  CHECK(st.distribution == std::vector<Rat>{beta / (alpha + beta), alpha / (alpha + beta)});
  CHECK(st.basis.empty());
}

TEST_CASE("two sites, assembled by hand") {
  const Rat q(3), alpha(1, 2), gamma(2), beta(3, 2), delta(1, 3);
  const auto mdl = model(2, 2, q, spec(Side::Left, alpha, gamma, 1, 1, 2, 2, 2),
                         spec(Side::Right, beta, delta, 1, 1, 2, 2, 2));
  const Rat gt = gamma * (alpha + gamma + q - Rat(1)) / (alpha + gamma);
  const Rat dt = delta * (beta + delta + q - Rat(1)) / (beta + delta);
  // configurations 11, 12, 21, 22; M(to, from)
  QMat expected = QMat::Zero(4, 4);
  expected(2, 0) = alpha;
  expected(1, 0) = dt;
  expected(3, 1) = alpha;
  expected(0, 1) = beta;
  expected(2, 1) = q;
  expected(0, 2) = gt;
  expected(3, 2) = dt;
  expected(1, 2) = Rat(1);
  expected(1, 3) = gt;
  expected(2, 3) = beta;
  for (Index c = 0; c < 4; ++c) expected(c, c) = -expected.col(c).sum();
  CHECK(full_markov(mdl) == expected);
}

TEST_CASE("generator properties") {
  RatSource src(51);
  for (int n = 2; n <= 4; ++n) {
    const auto specs = enumerate_specs(n);
    for (int t = 0; t < 4; ++t) {
      const auto [a, c, q] = src.admissible();
      const auto [b, d, q2] = src.admissible();
      if ((b + d + q - Rat(1)).sign() < 0) continue;
      const auto& ls = specs[static_cast<std::size_t>(src.integer(0, static_cast<int>(specs.size()) - 1))];
      const auto& rs = specs[static_cast<std::size_t>(src.integer(0, static_cast<int>(specs.size()) - 1))];
      const int l = n == 4 ? 2 : 3;
      const auto mdl = model(n, l, q, with_rates(ls, a, c), with_rates(rs, b, d, Side::Right));
      CAPTURE(n);
      const QMat m = full_markov(mdl);
      CHECK(has_zero_column_sums(m));
      CHECK(nonnegative_off_diagonal(m));
      Rat biggest(0);
      for (Index i = 0; i < m.rows(); ++i) biggest = std::max(biggest, -m(i, i));
      const Rat eps = Rat(1) / (biggest + Rat(1));
      const QMat step = QMat::Identity(m.rows(), m.cols()) + m * eps;
      bool nonneg = true;
      for (Index i = 0; i < step.size(); ++i) nonneg = nonneg && step.data()[i].sign() >= 0;
      CHECK(nonneg);

      const QMat bulk_part = bulk_markov(mdl.bulk(), l);
      const TensorSpace space = mdl.space();
      CHECK(m == QMat(bulk_part + embed(left_boundary_matrix(mdl), 1, space) +
                      embed(right_boundary_matrix(mdl), l, space)));
      CHECK(right_boundary_matrix(mdl) == build_right_boundary(mdl.right, q));

      const auto st = stationary_distribution(mdl);
      if (is_irreducible(mdl)) {
        CHECK(st.kernel_dimension == 1);
        CHECK(st.irreducible);
        for (const Rat& p : st.distribution) CHECK(p.sign() > 0);
      }
      if (st.kernel_dimension == 1) {
        Rat sum(0);
        QMat v(static_cast<Index>(st.distribution.size()), 1);
        for (std::size_t i = 0; i < st.distribution.size(); ++i) {
          CHECK(st.distribution[i].sign() >= 0);
          sum += st.distribution[i];
          v(static_cast<Index>(i), 0) = st.distribution[i];
        }
        CHECK(sum == Rat(1));
        CHECK(QMat(m * v).isZero(0));
      }
    }
  }
}

TEST_CASE("model validation") {
  const auto left = spec(Side::Left, Rat(1), Rat(1), 1, 1, 2, 2, 2);
  const auto right = spec(Side::Right, Rat(1), Rat(1), 1, 1, 2, 2, 2);
  CHECK_NOTHROW(model(2, 2, Rat(2), left, right).validate());
  CHECK_THROWS_AS(model(2, 0, Rat(2), left, right).validate(), Error);
  CHECK_THROWS_AS(model(2, 2, Rat(2), right, right).validate(), Error);
  CHECK_THROWS_AS(model(3, 2, Rat(2), left, right).validate(), Error);
  // a + c + q - 1 < 0 makes tilde rates negative
  const auto small = spec(Side::Left, Rat(1, 10), Rat(1, 10), 1, 1, 2, 2, 2);
  try {
    model(2, 2, Rat(1, 2), small, right).validate();
    FAIL("negative rates accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonMarkovian);
  }
  try {
    full_markov(model(2, 11, Rat(2), left, right));
    FAIL("dense cap not enforced");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionCapExceeded);
  }
}

TEST_CASE("strongly connected components") {
  using Adj = std::vector<std::vector<Index>>;
  int count = 0;
  auto comp = strongly_connected_components(Adj{{1}, {2}, {0}, {2, 4}, {3}, {}}, &count);
  CHECK(count == 3);
  CHECK(comp[0] == comp[1]);
  CHECK(comp[1] == comp[2]);
  CHECK(comp[3] == comp[4]);
  CHECK(comp[0] != comp[3]);
  CHECK(comp[5] != comp[3]);
  CHECK(comp[5] != comp[0]);

  strongly_connected_components(Adj{}, &count);
  CHECK(count == 0);
  strongly_connected_components(Adj{{0}}, &count);
  CHECK(count == 1);

  // a long path, deep enough to overflow a recursive implementation
  Adj chain(200000);
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) chain[i].push_back(static_cast<Index>(i + 1));
  strongly_connected_components(chain, &count);
  CHECK(count == 200000);
  chain.back().push_back(0);
  strongly_connected_components(chain, &count);
  CHECK(count == 1);
}

TEST_CASE("cycle pairings are irreducible") {
  RatSource src(52);
  const auto check_pairing = [&](int n, int l, std::array<int, 4> lt, std::array<int, 4> rt) {
    for (int t = 0; t < 2; ++t) {
      const auto [a, c, q] = src.admissible();
      const auto [b, d, q2] = src.admissible();
      if ((b + d + q - Rat(1)).sign() <= 0) continue;
      const auto mdl = model(n, l, q, spec(Side::Left, a, c, lt[0], lt[1], lt[2], lt[3], n, Variant::Decaying),
                             spec(Side::Right, b, d, rt[0], rt[1], rt[2], rt[3], n, Variant::Decaying));
      CAPTURE(n);
      CAPTURE(l);
      CHECK(is_irreducible(mdl));
      if (n <= 4 && l <= 3) {
        const auto st = stationary_distribution(mdl);
        CHECK(st.kernel_dimension == 1);
        for (const Rat& p : st.distribution) CHECK(p.sign() > 0);
      }
    }
  };
  check_pairing(3, 2, {2, 2, 3, 3}, {1, 1, 2, 2});
  check_pairing(3, 3, {2, 2, 3, 3}, {1, 1, 2, 2});
  check_pairing(4, 2, {2, 2, 4, 4}, {1, 1, 3, 3});
  check_pairing(5, 2, {2, 3, 4, 5}, {1, 2, 3, 4});
  check_pairing(6, 2, {2, 3, 5, 6}, {1, 2, 4, 5});
}

TEST_CASE("reducible models") {
  // left only removes species 2, right only removes species 2: all holes absorbs
  const auto absorbing = model(2, 2, Rat(2), spec(Side::Left, Rat(0), Rat(1), 1, 1, 2, 2, 2),
                               spec(Side::Right, Rat(1), Rat(0), 1, 1, 2, 2, 2));
  CHECK_FALSE(is_irreducible(absorbing));
  const auto st = stationary_distribution(absorbing);
  CHECK_FALSE(st.irreducible);
  CHECK(st.kernel_dimension == 1);
  CHECK(st.distribution == std::vector<Rat>{Rat(1), Rat(0), Rat(0), Rat(0)});

  // species 2 is inert on both sides, so its count is conserved
  for (int l = 1; l <= 3; ++l) {
    const auto frozen = model(3, l, Rat(1, 2), spec(Side::Left, Rat(1), Rat(2), 1, 1, 3, 3, 3),
                              spec(Side::Right, Rat(3), Rat(1), 1, 1, 3, 3, 3));
    CAPTURE(l);
    CHECK_FALSE(is_irreducible(frozen));
    const auto fs = stationary_distribution(frozen);
    CHECK(fs.kernel_dimension == l + 1);
    CHECK_FALSE(fs.irreducible);
    CHECK(fs.distribution.empty());
    REQUIRE(fs.basis.size() == static_cast<std::size_t>(l + 1));
    const QMat m = full_markov(frozen);
    for (const auto& b : fs.basis) {
      QMat v(static_cast<Index>(b.size()), 1);
      for (std::size_t i = 0; i < b.size(); ++i) v(static_cast<Index>(i), 0) = b[i];
      CHECK(QMat(m * v).isZero(0));
    }
  }
}

TEST_CASE("stationary state against floating-point power iteration") {
  const Rat alpha(3, 4);
  for (const Rat& q : {Rat(1, 2), Rat(2)}) {
    const auto mdl = model(2, 2, q, spec(Side::Left, alpha, Rat(0), 1, 1, 2, 2, 2),
                           spec(Side::Right, alpha, Rat(0), 1, 1, 2, 2, 2));
    const auto st = stationary_distribution(mdl);
    REQUIRE(st.kernel_dimension == 1);
    const auto oracle = power_iteration(full_markov(mdl));
    for (std::size_t i = 0; i < oracle.size(); ++i) {
      CHECK(std::abs(st.distribution[i].to_double() - oracle[i]) < 1e-10);
    }
  }
}

TEST_CASE("mirror covariance") {
  RatSource src(53);
  for (int n = 2; n <= 4; ++n) {
    const auto specs = enumerate_specs(n);
    for (const auto& ls : specs) {
      const auto [a, c, q] = src.admissible();
      const auto [b, d, q2] = src.admissible();
      if ((b + d + q - Rat(1)).sign() <= 0) continue;
      const auto& rs = specs[static_cast<std::size_t>(src.integer(0, static_cast<int>(specs.size()) - 1))];
      const int l = n == 4 ? 2 : 3;
      const auto mdl = model(n, l, q, with_rates(ls, a, c), with_rates(rs, b, d, Side::Right));
      const auto mir = mirrored(mdl);
      CAPTURE(mdl.left.str());
      CAPTURE(mdl.right.str());
      const QMat u = reversal_operator(n);
      CHECK(left_boundary_matrix(mir) == QMat(u * right_boundary_matrix(mdl) * u));
      CHECK(right_boundary_matrix(mir) == QMat(u * left_boundary_matrix(mdl) * u));

      const auto st = stationary_distribution(mdl);
      const auto sm = stationary_distribution(mir);
      CHECK(st.kernel_dimension == sm.kernel_dimension);
      CHECK(is_irreducible(mdl) == is_irreducible(mir));
      if (st.kernel_dimension != 1) continue;
      const TensorSpace space = mdl.space();
      for (Index i = 0; i < space.dimension(); ++i) {
        CHECK(sm.distribution[static_cast<std::size_t>(mirror_index(space, i))] ==
              st.distribution[static_cast<std::size_t>(i)]);
      }
    }
  }
}

TEST_CASE("transition graph matches the dense generator") {
  const auto specs = enumerate_specs(3);
  const auto mdl = model(3, 3, Rat(2, 3), with_rates(specs[2], Rat(1), Rat(2)),
                         with_rates(specs[1], Rat(1, 2), Rat(1), Side::Right));
  const QMat m = full_markov(mdl);
  const auto graph = transition_graph(mdl);
  QMat rebuilt = QMat::Zero(m.rows(), m.cols());
  for (std::size_t from = 0; from < graph.size(); ++from) {
    for (const auto& e : graph[from]) {
      CHECK(e.rate.sign() > 0);
      rebuilt(e.to, static_cast<Index>(from)) += e.rate;
      rebuilt(static_cast<Index>(from), static_cast<Index>(from)) -= e.rate;
    }
  }
  CHECK(rebuilt == m);
}
