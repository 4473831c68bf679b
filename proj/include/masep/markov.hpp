#pragma once

#include "masep/boundary.hpp"
#include "masep/bulk.hpp"

#include <cstdint>
#include <vector>

namespace masep {

/// An open chain of L sites: bulk hopping with asymmetry q, a left boundary
/// acting on site 1 and a right boundary acting on site L.
struct LatticeModel {
  int n_species = 2;
  int sites = 1;
  Rat q = Rat(1);
  BoundarySpec left;
  BoundarySpec right;

  /// Throws Error{InvalidSpec}/Error{NonMarkovian}/Error{InvalidArgument}.
  void validate() const;
  TensorSpace space() const { return {n_species, sites}; }
  BulkParams bulk() const { return {n_species, q}; }
};

/// Largest configuration space handled by the sparse routines (SCC,
/// simulation).
inline constexpr Index kMaxConfigurations = 100000;
/// Largest configuration space assembled as a dense rational matrix.
inline constexpr Index kMaxDenseConfigurations = 1024;

/// Left and right boundary generators of the model, each N x N.
QMat left_boundary_matrix(const LatticeModel& model);
QMat right_boundary_matrix(const LatticeModel& model);

/// M = M_bulk + B_1 + Bbar_L. Throws Error{DimensionCapExceeded} above
/// kMaxDenseConfigurations.
QMat full_markov(const LatticeModel& model);

/// Sparse transition list: for every configuration index, the reachable
/// configurations with their positive rates.
struct Edge {
  Index to = 0;
  Rat rate;
};
std::vector<std::vector<Edge>> transition_graph(const LatticeModel& model);

/// Strongly connected components of a digraph given by adjacency lists;
/// component[i] is the component id of node i. Iterative Tarjan.
std::vector<int> strongly_connected_components(const std::vector<std::vector<Index>>& adjacency,
                                               int* component_count = nullptr);

/// True iff the configuration digraph of positive rates is strongly
/// connected. Throws Error{DimensionCapExceeded} above kMaxConfigurations.
bool is_irreducible(const LatticeModel& model);

struct StationaryResult {
  /// Normalized distribution when the kernel is one-dimensional, empty
  /// otherwise.
  std::vector<Rat> distribution;
  bool irreducible = false;
  int kernel_dimension = 0;
  /// Unnormalized kernel basis, filled only when kernel_dimension > 1.
  std::vector<std::vector<Rat>> basis;

  friend bool operator==(const StationaryResult&, const StationaryResult&) = default;
};

StationaryResult stationary_distribution(const LatticeModel& model);

}  // namespace masep
