// One PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.

#include "masep/cli.hpp"
#include "masep/gillespie.hpp"
#include "masep/random.hpp"
#include "masep/verifier.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

using namespace masep;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> run;
};

struct Draw {
  Rat a, c, q;
};

class Draws {
 public:
  explicit Draws(unsigned seed) : gen_(seed) {}

  Rat positive() {
    std::uniform_int_distribution<int> v(1, 9);
    return Rat(v(gen_), v(gen_));
  }

  Draw admissible() {
    while (true) {
      Draw d{positive(), positive(), positive()};
      if (d.q != Rat(1) && (d.a + d.c + d.q - Rat(1)).sign() > 0) return d;
    }
  }

 private:
  std::mt19937 gen_;
};

BoundarySpec rebind(BoundarySpec s, const Rat& a, const Rat& c, Side side = Side::Left) {
  s.rate_a = a;
  s.rate_c = c;
  s.side = side;
  return s;
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

std::string failures_to_string(const std::vector<std::string>& f) {
  std::string s;
  for (std::size_t i = 0; i < f.size() && i < 3; ++i) s += (i ? "; " : "") + f[i];
  if (f.size() > 3) s += "; ...";
  return s;
}

/// Collects failing report descriptions; `reports` counts every report seen.
struct Tally {
  int reports = 0;
  std::vector<std::string> failures;

  void add(const CheckReport& r) {
    ++reports;
    if (r.passed()) return;
    std::string where = r.check;
    for (const auto& [k, v] : r.params) where += " " + k + "=" + v;
    if (r.witness) where += " at " + r.witness->where;
    failures.push_back(where + " [" + std::string(to_string(r.status)) + "]");
  }

  Outcome outcome(const std::string& what) const {
    Outcome o;
    o.pass = failures.empty();
    o.detail = std::to_string(reports) + " " + what;
    if (!o.pass) o.detail += ", " + std::to_string(failures.size()) + " failed: " + failures_to_string(failures);
    return o;
  }
};

long binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Outcome census() {
  std::vector<std::string> bad;
  for (int n = 2; n <= 12; ++n) {
    const long got = static_cast<long>(enumerate_specs(n).size());
    if (got != binomial(n + 1, 3)) bad.push_back("N=" + std::to_string(n) + ": " + std::to_string(got));
  }
  return {bad.empty(), bad.empty() ? "C(N+1,3) for N=2..12" : failures_to_string(bad)};
}

Outcome two_species_fixture() {
  Draws d(1002);
  int matched = 0;
  for (int t = 0; t < 5; ++t) {
    const auto [a, c, q] = d.admissible();
    const Rat ct = (a + c + q - Rat(1)) * c / (a + c);
    QMat expected(2, 2);
    expected << -a, ct, a, -ct;
    const auto s = BoundarySpec::make(Side::Left, a, c, 1, 1, 2, 2, Variant::Inert, 2);
    if (build_boundary(s, q) == expected) ++matched;
  }
  return {matched == 5, std::to_string(matched) + "/5 random draws"};
}

Outcome three_species_table() {
  // transition lists (from, to, rate) for the four three-species boundaries
  const Rat a(3), c(5), q(2);
  const Rat at = (a + c + q - Rat(1)) * a / (a + c);
  const Rat ct = (a + c + q - Rat(1)) * c / (a + c);
  using Row = std::tuple<int, int, Rat>;
  const std::vector<std::vector<Row>> table{
      {{1, 2, a}, {2, 1, ct}, {3, 1, ct}, {3, 2, at}},
      {{1, 3, a}, {3, 1, ct}},
      {{1, 3, a}, {2, 1, ct}, {2, 3, a}, {3, 1, ct}},
      {{1, 2, c}, {1, 3, a}, {2, 3, a}, {3, 2, ct}},
  };
  const auto specs = enumerate_specs(3);
  if (specs.size() != table.size()) return {false, "expected 4 specs"};
  int matched = 0;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto s = rebind(specs[i], a, c);
    std::vector<Row> listed, from_matrix;
    for (const auto& t : boundary_transitions(s, q)) listed.emplace_back(t.from, t.to, t.rate);
    const QMat b = build_boundary(s, q);
    for (int to = 1; to <= 3; ++to) {
      for (int from = 1; from <= 3; ++from) {
        if (to != from && !b(to - 1, from - 1).is_zero()) from_matrix.emplace_back(from, to, b(to - 1, from - 1));
      }
    }
    auto expected = table[i];
    std::sort(listed.begin(), listed.end());
    std::sort(from_matrix.begin(), from_matrix.end());
    std::sort(expected.begin(), expected.end());
    if (listed == expected && from_matrix == expected && boundary_from_rules(s, q) == b) ++matched;
  }
  return {matched == 4, std::to_string(matched) + "/4 rate lists"};
}

Outcome yang_baxter() {
  Tally t;
  for (int n = 2; n <= 4; ++n) {
    for (const Rat& q : {Rat(1, 2), Rat(3, 4), Rat(2)}) t.add(check_ybe({n, q}, 5, 40 + static_cast<unsigned>(n)));
  }
  return t.outcome("reports (N=2..4, q in {1/2,3/4,2}, 5 triples)");
}

Outcome reflection() {
  Tally t;
  Draws d(1005);
  for (int n = 2; n <= 4; ++n) {
    for (const auto& base : enumerate_specs(n)) {
      for (int k = 0; k < 3; ++k) {
        const auto [a, c, q] = d.admissible();
        t.add(check_reflection(rebind(base, a, c), q, 5, 500 + static_cast<unsigned>(k)));
      }
    }
  }
  return t.outcome("reports (every spec N<=4, 3 draws, 5 pairs)");
}

Outcome unitarity() {
  Tally t;
  Draws d(1005);
  for (int n = 2; n <= 4; ++n) {
    for (const Rat& q : {Rat(1, 2), Rat(3, 4), Rat(2)}) t.add(check_r_unitarity({n, q}, 5, 60));
    for (const auto& base : enumerate_specs(n)) {
      for (int k = 0; k < 3; ++k) {
        const auto [a, c, q] = d.admissible();
        t.add(check_k_unitarity(rebind(base, a, c), q, 5, 600 + static_cast<unsigned>(k)));
      }
    }
  }
  return t.outcome("R and K unitarity reports");
}

Outcome boundary_algebra() {
  Tally t;
  Draws d(1007);
  int positions = 0, caught = 0;
  for (int n = 2; n <= 5; ++n) {
    for (const auto& base : enumerate_specs(n)) {
      const auto [a, c, q] = d.admissible();
      const auto s = rebind(base, a, c);
      t.add(check_boundary_algebra(s, q));
      if (n > 4) continue;
      // +1 on a single entry of B, every position
      const QMat big_a = hecke_generator_rationalized({n, q});
      const QMat b = build_boundary(s, q);
      for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
          QMat bad = b;
          bad(i, j) += Rat(1);
          const QMat e0 = QMat((bad + QMat::Identity(n, n) * (a + c + q - Rat(1))) / (Rat(1) - q));
          ++positions;
          if (check_boundary_algebra_with(big_a, e0, q).status == CheckStatus::Failed) ++caught;
        }
      }
    }
  }
  Outcome o = t.outcome("specs N<=5");
  const bool mutation_ok = caught * 100 >= positions * 95;
  o.pass = o.pass && mutation_ok;
  o.detail += "; mutations caught " + std::to_string(caught) + "/" + std::to_string(positions);
  return o;
}

Outcome lemma_and_poly() {
  Tally t;
  Draws d(1008);
  for (int n = 2; n <= 5; ++n) {
    for (const auto& base : enumerate_specs(n)) {
      const auto [a, c, q] = d.admissible();
      const auto s = rebind(base, a, c);
      t.add(check_lemma_relations(s, q, 4));
      t.add(check_poly_relations(s, q));
    }
  }
  return t.outcome("reports (k<=4, specs N<=5)");
}

Outcome k_forms() {
  Draws d(1009);
  int compared = 0;
  std::vector<std::string> bad;
  for (int n = 2; n <= 4; ++n) {
    for (const auto& base : enumerate_specs(n)) {
      const auto [a, c, q] = d.admissible();
      const auto s = rebind(base, a, c);
      SamplePointGenerator gen(900 + static_cast<unsigned>(n));
      int done = 0;
      for (int attempt = 0; done < 5 && attempt < 100; ++attempt) {
        const Rat x = gen.next();
        try {
          if (k_matrix(s, q, x) != k_matrix_baxterised(s, q, x)) bad.push_back(s.str() + " at x=" + x.str());
          ++done;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::SpectralPole && e.kind() != ErrorKind::SingularMatrix) throw;
        }
      }
      if (done < 5) bad.push_back(s.str() + ": too few admissible points");
      compared += done;
    }
  }
  return {bad.empty(), std::to_string(compared) + " evaluations" + (bad.empty() ? "" : ": " + failures_to_string(bad))};
}

Outcome transfer() {
  Tally t;
  const Rat q(2, 3);
  for (const auto& [n, l] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}}) {
    for (const auto& ls : enumerate_specs(n)) {
      for (const auto& rs : enumerate_specs(n)) {
        const auto m = model(n, l, q, rebind(ls, Rat(1), Rat(2)), rebind(rs, Rat(3, 2), Rat(1, 2), Side::Right));
        t.add(check_transfer_commutation(m, 3, 70));
      }
    }
  }
  return t.outcome("spec pairs, 3 points each");
}

Outcome irreducibility() {
  const auto pairing = [](int n) {
    // odd N = 2k+1 and even N = 2k+2
    const int k = (n - 1) / 2;
    if (n % 2 == 1) {
      return std::pair{BoundarySpec::make(Side::Left, Rat(1), Rat(2), 2, k + 1, k + 2, 2 * k + 1, Variant::Decaying, n),
                       BoundarySpec::make(Side::Right, Rat(3, 2), Rat(1), 1, k, k + 1, 2 * k, Variant::Decaying, n)};
    }
    return std::pair{BoundarySpec::make(Side::Left, Rat(1), Rat(2), 2, k + 1, k + 3, 2 * k + 2, Variant::Decaying, n),
                     BoundarySpec::make(Side::Right, Rat(3, 2), Rat(1), 1, k, k + 2, 2 * k + 1, Variant::Decaying, n)};
  };
  std::vector<std::string> bad;
  int ok = 0;
  for (const auto& [n, l] : {std::pair{3, 2}, std::pair{3, 3}, std::pair{4, 2}, std::pair{5, 2}}) {
    const auto [left, right] = pairing(n);
    if (is_irreducible(model(n, l, Rat(1, 2), left, right))) {
      ++ok;
    } else {
      bad.push_back("N=" + std::to_string(n) + " L=" + std::to_string(l));
    }
  }
  return {bad.empty(), std::to_string(ok) + "/4 strongly connected" + (bad.empty() ? "" : ": " + failures_to_string(bad))};
}

Outcome stationary_vs_simulation() {
  std::vector<std::string> bad;
  double worst = 0.0;
  int compared = 0, skipped = 0;
  const auto run = [&](const LatticeModel& m) {
    const auto exact = stationary_distribution(m);
    if (exact.kernel_dimension != 1) {
      ++skipped;  // no unique stationary state to compare with
      return;
    }
    SimConfig cfg;
    cfg.seed = 2024;
    cfg.total_events = 10000000;
    cfg.burn_in_events = 100000;
    cfg.record_stride = 100000;
    const SimReport r = simulate(m, cfg);
    const double tv = compare_empirical(r, exact).total_variation;
    worst = std::max(worst, tv);
    ++compared;
    if (!(tv < 0.01)) bad.push_back(m.left.str() + " | " + m.right.str() + " tv=" + std::to_string(tv));
  };
  for (const auto& [n, l] : {std::pair{2, 3}, std::pair{3, 2}}) {
    for (const auto& ls : enumerate_specs(n)) {
      for (const auto& rs : enumerate_specs(n)) {
        run(model(n, l, Rat(1, 2), rebind(ls, Rat(1), Rat(1, 2)), rebind(rs, Rat(3, 2), Rat(1), Side::Right)));
      }
    }
  }
  std::ostringstream os;
  os << compared << " models at 1e7 events, max TV " << worst;
  if (skipped > 0) os << ", " << skipped << " pairs without a unique stationary state";
  if (!bad.empty()) os << ": " << failures_to_string(bad);
  return {bad.empty() && compared > 0, os.str()};
}

std::string invoke(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"masep"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return std::to_string(code) + "\n" + out.str();
}

Outcome determinism() {
  const std::vector<std::vector<std::string>> commands{
      {"check", "reflection", "--n", "3", "--q", "3/4", "--a", "1", "--c", "2", "--samples", "3", "--seed", "7"},
      {"check", "transfer", "--n", "2", "--l", "2", "--q", "1/2", "--samples", "2", "--seed", "3"},
      {"simulate", "--n", "3", "--l", "2", "--q", "2/3", "--left", "2,2,3,3", "--right", "1,1,2,2", "--events",
       "200000", "--seed", "11", "--replicas", "4", "--track-transitions"},
      {"stationary", "--n", "3", "--l", "2", "--q", "2/3", "--left", "2,2,3,3", "--right", "1,1,2,2"},
  };
  int identical = 0;
  for (const auto& c : commands) {
    if (invoke(c) == invoke(c)) ++identical;
  }
  return {identical == static_cast<int>(commands.size()),
          std::to_string(identical) + "/" + std::to_string(commands.size()) + " commands byte-identical"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "boundary census", 1, census},
      {2, "two-species boundary fixture", 1, two_species_fixture},
      {3, "three-species rate table", 1, three_species_table},
      {4, "Yang-Baxter equation", 30, yang_baxter},
      {5, "reflection equation", 300, reflection},
      {6, "R and K unitarity", 300, unitarity},
      {7, "boundary algebra and mutations", 120, boundary_algebra},
      {8, "lemma and polynomial relations", 120, lemma_and_poly},
      {9, "closed and Baxterised K agree", 60, k_forms},
      {10, "transfer matrix commutation", 300, transfer},
      {11, "irreducibility of cycle pairings", 60, irreducibility},
      {12, "stationary state vs simulation", 600, stationary_vs_simulation},
      {13, "deterministic reports", 60, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = seconds < c.budget_seconds;
    const bool pass = o.pass && in_budget;
    if (!pass) ++failed;
    std::printf("%s %2d %-34s %8.2fs / %4.0fs  %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), seconds,
                c.budget_seconds, o.detail.c_str(), in_budget ? "" : " (over budget)");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
