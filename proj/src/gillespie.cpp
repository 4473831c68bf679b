#include "masep/gillespie.hpp"

#include "masep/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

namespace masep {

void SimConfig::validate() const {
  if (burn_in_events < 0) throw Error(ErrorKind::InvalidArgument, "burn_in_events must be >= 0");
  if (total_events <= burn_in_events) {
    throw Error(ErrorKind::InvalidArgument, "total_events must exceed burn_in_events");
  }
  if (record_stride < 1) throw Error(ErrorKind::InvalidArgument, "record_stride must be >= 1");
}

namespace {

/// Exit channels out of one boundary state: cumulative rates to each target.
struct BoundaryTable {
  std::vector<double> exit;                                // [from]
  std::vector<std::vector<std::pair<int, double>>> moves;  // [from] -> (to, rate)

  explicit BoundaryTable(const QMat& b) : exit(static_cast<std::size_t>(b.rows()), 0.0),
                                          moves(static_cast<std::size_t>(b.rows())) {
    for (Index from = 0; from < b.cols(); ++from) {
      for (Index to = 0; to < b.rows(); ++to) {
        if (to == from || b(to, from).sign() <= 0) continue;
        const double r = b(to, from).to_double();
        moves[static_cast<std::size_t>(from)].emplace_back(static_cast<int>(to), r);
        exit[static_cast<std::size_t>(from)] += r;
      }
    }
  }

  int pick(int from, double u) const {
    const auto& m = moves[static_cast<std::size_t>(from)];
    double target = u * exit[static_cast<std::size_t>(from)];
    for (const auto& [to, r] : m) {
      if (target < r) return to;
      target -= r;
    }
    return m.back().first;
  }
};

struct Tally {
  std::vector<double> time;
  std::vector<std::int64_t> left_net, right_net;
  std::vector<std::vector<double>> left_batches, right_batches;
  std::map<std::pair<Index, Index>, std::int64_t> transitions;
  std::int64_t events = 0;
  double model_time = 0.0;
  bool absorbing = false;
  Index absorbing_state = 0;
};

Tally run_replica(const LatticeModel& model, const SimConfig& cfg, std::uint64_t stream) {
  const int n = model.n_species;
  const int l = model.sites;
  const TensorSpace space = model.space();
  const Index dim = space.dimension();
  const auto ns = static_cast<std::size_t>(n);
  const auto ls = static_cast<std::size_t>(l);

  const BoundaryTable left(left_boundary_matrix(model));
  const BoundaryTable right(right_boundary_matrix(model));
  const double q = model.q.to_double();

  std::vector<int> config(ls, 0);  // 0-based species
  if (cfg.initial) {
    if (cfg.initial->size() != ls) throw Error(ErrorKind::InvalidArgument, "initial configuration length != L");
    for (std::size_t i = 0; i < ls; ++i) {
      const int t = (*cfg.initial)[i];
      if (t < 1 || t > n) throw Error(ErrorKind::InvalidSpecies, "initial species out of range");
      config[i] = t - 1;
    }
  }
  std::vector<Index> weight(ls);
  for (Index w = 1, i = l - 1; i >= 0; --i, w *= n) weight[static_cast<std::size_t>(i)] = w;
  Index state = 0;
  for (std::size_t i = 0; i < ls; ++i) state += config[i] * weight[i];

  // channels: bonds 0..L-2, then left boundary (L-1), then right boundary (L)
  const std::size_t left_ch = ls - 1;
  const std::size_t right_ch = ls;
  std::vector<double> rate(ls + 1, 0.0);
  const auto bond_rate = [&](std::size_t i) {
    const int a = config[i];
    const int b = config[i + 1];
    return a > b ? 1.0 : (a < b ? q : 0.0);
  };
  const auto refresh_site = [&](std::size_t site) {
    if (site > 0) rate[site - 1] = bond_rate(site - 1);
    if (site + 1 < ls) rate[site] = bond_rate(site);
    if (site == 0) rate[left_ch] = left.exit[static_cast<std::size_t>(config[0])];
    if (site == ls - 1) rate[right_ch] = right.exit[static_cast<std::size_t>(config[ls - 1])];
  };
  for (std::size_t i = 0; i < ls; ++i) refresh_site(i);

  Tally t;
  t.time.assign(static_cast<std::size_t>(dim), 0.0);
  t.left_net.assign(ns, 0);
  t.right_net.assign(ns, 0);
  t.left_batches.resize(ns);
  t.right_batches.resize(ns);
  std::vector<std::int64_t> batch_left(ns, 0), batch_right(ns, 0);
  double batch_time = 0.0;
  std::int64_t batch_events = 0;

  Philox4x32 rng(cfg.seed, stream);
  for (std::int64_t step = 0; step < cfg.total_events; ++step) {
    const bool recording = step >= cfg.burn_in_events;
    double total = 0.0;
    for (double r : rate) total += r;
    if (total <= 0.0) {
      t.absorbing = true;
      t.absorbing_state = state;
      break;
    }
    const double dt = -std::log1p(-rng.uniform()) / total;

    double target = rng.uniform() * total;
    std::size_t ch = 0;
    while (ch + 1 < rate.size() && (target >= rate[ch] || rate[ch] == 0.0)) {
      target -= rate[ch];
      ++ch;
    }
    while (rate[ch] == 0.0) --ch;  // rounding overshoot past the last live channel
    const Index before = state;
    const auto move_site = [&](std::size_t site, int to) {
      state += (to - config[site]) * weight[site];
      config[site] = to;
    };
    int gained = -1, lost = -1;
    if (ch < left_ch) {
      const int a = config[ch];
      const int b = config[ch + 1];
      move_site(ch, b);
      move_site(ch + 1, a);
      refresh_site(ch);
      refresh_site(ch + 1);
    } else {
      const std::size_t site = ch == left_ch ? 0 : ls - 1;
      const BoundaryTable& table = ch == left_ch ? left : right;
      lost = config[site];
      gained = table.pick(lost, rng.uniform());
      move_site(site, gained);
      refresh_site(site);
    }
    if (!recording) continue;

    t.time[static_cast<std::size_t>(before)] += dt;
    t.model_time += dt;
    ++t.events;
    if (cfg.track_transitions) ++t.transitions[{before, state}];
    if (gained >= 0) {
      const auto g = static_cast<std::size_t>(gained);
      const auto s = static_cast<std::size_t>(lost);
      if (ch == left_ch) {
        ++t.left_net[g];
        --t.left_net[s];
        ++batch_left[g];
        --batch_left[s];
      } else {
        --t.right_net[g];
        ++t.right_net[s];
        --batch_right[g];
        ++batch_right[s];
      }
    }
    batch_time += dt;
    if (++batch_events == cfg.record_stride) {
      for (std::size_t s = 0; s < ns; ++s) {
        t.left_batches[s].push_back(static_cast<double>(batch_left[s]) / batch_time);
        t.right_batches[s].push_back(static_cast<double>(batch_right[s]) / batch_time);
      }
      std::fill(batch_left.begin(), batch_left.end(), 0);
      std::fill(batch_right.begin(), batch_right.end(), 0);
      batch_time = 0.0;
      batch_events = 0;
    }
  }
  return t;
}

CurrentEstimate estimate(std::int64_t net, double time, const std::vector<double>& batches) {
  CurrentEstimate e;
  e.mean = time > 0.0 ? static_cast<double>(net) / time : 0.0;
  e.batches = static_cast<std::int64_t>(batches.size());
  if (batches.size() >= 2) {
    double mean = 0.0;
    for (double b : batches) mean += b;
    mean /= static_cast<double>(batches.size());
    double ss = 0.0;
    for (double b : batches) ss += (b - mean) * (b - mean);
    const auto k = static_cast<double>(batches.size());
    e.std_error = std::sqrt(ss / (k - 1.0) / k);
  }
  return e;
}

SimReport finalize(const LatticeModel& model, const SimConfig& cfg, const std::vector<Tally>& tallies) {
  const int n = model.n_species;
  const auto ns = static_cast<std::size_t>(n);
  const TensorSpace space = model.space();
  const auto dim = static_cast<std::size_t>(space.dimension());

  SimReport rep;
  rep.generator = std::string(Philox4x32::kName);
  rep.seed = cfg.seed;
  rep.replicas = static_cast<int>(tallies.size());
  rep.n_species = n;
  rep.sites = model.sites;
  rep.burn_in_events = cfg.burn_in_events;

  std::vector<double> time(dim, 0.0);
  std::vector<std::int64_t> left_net(ns, 0), right_net(ns, 0);
  std::vector<std::vector<double>> left_batches(ns), right_batches(ns);
  std::map<std::pair<Index, Index>, std::int64_t> transitions;
  for (const Tally& t : tallies) {
    for (std::size_t i = 0; i < dim; ++i) time[i] += t.time[i];
    for (std::size_t s = 0; s < ns; ++s) {
      left_net[s] += t.left_net[s];
      right_net[s] += t.right_net[s];
      left_batches[s].insert(left_batches[s].end(), t.left_batches[s].begin(), t.left_batches[s].end());
      right_batches[s].insert(right_batches[s].end(), t.right_batches[s].begin(), t.right_batches[s].end());
    }
    for (const auto& [k, c] : t.transitions) transitions[k] += c;
    rep.events += t.events;
    rep.model_time += t.model_time;
    rep.absorbing = rep.absorbing || t.absorbing;
  }

  rep.empirical_distribution.assign(dim, 0.0);
  if (rep.absorbing) {
    // a trapped replica spends all later time in its trap; replicas are
    // weighted equally
    for (const Tally& t : tallies) {
      if (t.absorbing) {
        rep.empirical_distribution[static_cast<std::size_t>(t.absorbing_state)] += 1.0;
      } else if (t.model_time > 0.0) {
        for (std::size_t i = 0; i < dim; ++i) rep.empirical_distribution[i] += t.time[i] / t.model_time;
      }
    }
    double s = 0.0;
    for (double p : rep.empirical_distribution) s += p;
    for (double& p : rep.empirical_distribution) p /= s;
  } else if (rep.model_time > 0.0) {
    for (std::size_t i = 0; i < dim; ++i) rep.empirical_distribution[i] = time[i] / rep.model_time;
  }

  rep.site_densities.assign(static_cast<std::size_t>(model.sites), std::vector<double>(ns, 0.0));
  for (std::size_t i = 0; i < dim; ++i) {
    const double p = rep.empirical_distribution[i];
    if (p == 0.0) continue;
    const auto config = space.config_of(static_cast<Index>(i));
    for (std::size_t site = 0; site < config.size(); ++site) {
      rep.site_densities[site][static_cast<std::size_t>(config[site] - 1)] += p;
    }
  }
  for (std::size_t s = 0; s < ns; ++s) {
    rep.left_current.push_back(estimate(left_net[s], rep.model_time, left_batches[s]));
    rep.right_current.push_back(estimate(right_net[s], rep.model_time, right_batches[s]));
  }
  for (const auto& [k, c] : transitions) rep.transitions.push_back({k.first, k.second, c});
  return rep;
}

void check_simulable(const LatticeModel& model, const SimConfig& cfg) {
  model.validate();
  cfg.validate();
  if (model.space().dimension() > kMaxConfigurations) {
    throw Error(ErrorKind::DimensionCapExceeded,
                "N^L = " + std::to_string(model.space().dimension()) + " exceeds " +
                    std::to_string(kMaxConfigurations));
  }
}

}  // namespace

SimReport simulate(const LatticeModel& model, const SimConfig& cfg) {
  check_simulable(model, cfg);
  return finalize(model, cfg, {run_replica(model, cfg, 0)});
}

SimReport simulate_replicas(const LatticeModel& model, const SimConfig& cfg, int replicas, int threads) {
  check_simulable(model, cfg);
  if (replicas < 1) throw Error(ErrorKind::InvalidArgument, "replicas must be >= 1");
  threads = std::clamp(threads, 1, replicas);
  std::vector<Tally> tallies(static_cast<std::size_t>(replicas));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int r = w; r < replicas; r += threads) {
          tallies[static_cast<std::size_t>(r)] = run_replica(model, cfg, static_cast<std::uint64_t>(r));
        }
      } catch (...) {
        failures[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return finalize(model, cfg, tallies);
}

Divergence compare_empirical(const SimReport& report, const StationaryResult& exact) {
  if (exact.distribution.empty()) {
    throw Error(ErrorKind::InvalidComparison, "exact result has no normalized distribution");
  }
  if (exact.distribution.size() != report.empirical_distribution.size()) {
    throw Error(ErrorKind::InvalidComparison,
                "configuration counts differ: " + std::to_string(report.empirical_distribution.size()) +
                    " vs " + std::to_string(exact.distribution.size()));
  }
  Divergence d;
  double l1 = 0.0;
  for (std::size_t i = 0; i < exact.distribution.size(); ++i) {
    const double p = exact.distribution[i].to_double();
    const double ph = report.empirical_distribution[i];
    const double dev = std::abs(ph - p);
    l1 += dev;
    d.max_deviation = std::max(d.max_deviation, dev);
    if (p > 0.0) {
      d.chi_square += dev * dev / p;
    } else if (ph > 0.0) {
      ++d.unsupported;
    }
  }
  d.total_variation = l1 / 2.0;
  return d;
}

std::string densities_csv(const SimReport& report) {
  std::ostringstream os;
  os.precision(17);
  os << "kind,site,species,value,std_error\n";
  for (std::size_t site = 0; site < report.site_densities.size(); ++site) {
    for (std::size_t s = 0; s < report.site_densities[site].size(); ++s) {
      os << "density," << site + 1 << ',' << s + 1 << ',' << report.site_densities[site][s] << ",\n";
    }
  }
  for (std::size_t s = 0; s < report.left_current.size(); ++s) {
    os << "left_current,1," << s + 1 << ',' << report.left_current[s].mean << ','
       << report.left_current[s].std_error << '\n';
  }
  for (std::size_t s = 0; s < report.right_current.size(); ++s) {
    os << "right_current," << report.sites << ',' << s + 1 << ',' << report.right_current[s].mean << ','
       << report.right_current[s].std_error << '\n';
  }
  return os.str();
}

}  // namespace masep
