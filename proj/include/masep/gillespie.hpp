#pragma once

// Continuous-time simulation of the open chain by the direct Gillespie
// method. Rates are converted to double once; everything else about the
// model stays rational.

#include "masep/markov.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace masep {

struct SimConfig {
  std::uint64_t seed = 0;
  /// Includes the burn-in events.
  std::int64_t total_events = 1000000;
  std::int64_t burn_in_events = 10000;
  /// Events per batch for the batch-means standard errors of the currents.
  std::int64_t record_stride = 10000;
  /// Species labels 1..N per site; all holes when absent.
  std::optional<std::vector<int>> initial;
  bool track_transitions = false;

  /// Throws Error{InvalidArgument}.
  void validate() const;
};

struct CurrentEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t batches = 0;

  friend bool operator==(const CurrentEstimate&, const CurrentEstimate&) = default;
};

struct TransitionCount {
  Index from = 0;
  Index to = 0;
  std::int64_t count = 0;

  friend bool operator==(const TransitionCount&, const TransitionCount&) = default;
};

/// Time-weighted observables after burn-in. Distributions are indexed by the
/// TensorSpace codec. Currents are net rates per species: injection into
/// site 1 at the left, extraction from site L at the right.
struct SimReport {
  std::string generator;
  std::uint64_t seed = 0;
  int replicas = 1;
  int n_species = 0;
  int sites = 0;
  std::int64_t events = 0;  // recorded events, summed over replicas
  std::int64_t burn_in_events = 0;
  double model_time = 0.0;
  /// Some replica reached a configuration without exits; each trapped
  /// replica then contributes its trap to the distribution.
  bool absorbing = false;
  std::vector<double> empirical_distribution;
  std::vector<std::vector<double>> site_densities;  // [site][species - 1]
  std::vector<CurrentEstimate> left_current;        // [species - 1]
  std::vector<CurrentEstimate> right_current;
  std::vector<TransitionCount> transitions;  // sorted by (from, to) when tracked

  friend bool operator==(const SimReport&, const SimReport&) = default;
};

SimReport simulate(const LatticeModel& model, const SimConfig& cfg);

/// Replica r runs on the generator stream (cfg.seed, r). Tallies are merged
/// in replica order, so the result does not depend on `threads`.
SimReport simulate_replicas(const LatticeModel& model, const SimConfig& cfg, int replicas,
                            int threads = 1);

struct Divergence {
  double total_variation = 0.0;
  double max_deviation = 0.0;
  /// Sum over configurations with positive exact weight of (p_hat - p)^2 / p.
  double chi_square = 0.0;
  /// Configurations with exact weight 0 but positive empirical weight.
  std::int64_t unsupported = 0;

  friend bool operator==(const Divergence&, const Divergence&) = default;
};

/// Throws Error{InvalidComparison} when the exact result has no normalized
/// distribution or the lengths differ.
Divergence compare_empirical(const SimReport& report, const StationaryResult& exact);

/// CSV kind,site,species,value,std_error: one density row per site and
/// species, then the left and right currents per species.
std::string densities_csv(const SimReport& report);

}  // namespace masep
