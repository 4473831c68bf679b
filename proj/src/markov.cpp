#include "masep/markov.hpp"

#include <algorithm>
#include <cassert>
#include <utility>

namespace masep {

void LatticeModel::validate() const {
  bulk().validate();
  if (sites < 1) throw Error(ErrorKind::InvalidArgument, "L must be >= 1");
  if (left.side != Side::Left) throw Error(ErrorKind::InvalidSpec, "left boundary must have side=left");
  if (right.side != Side::Right) {
    throw Error(ErrorKind::InvalidSpec, "right boundary must have side=right");
  }
  if (left.n_species != n_species || right.n_species != n_species) {
    throw Error(ErrorKind::InvalidSpec, "boundary species count differs from the model");
  }
  left.validate_for(q);
  right.validate_for(q);
}

QMat left_boundary_matrix(const LatticeModel& model) { return build_boundary(model.left, model.q); }

QMat right_boundary_matrix(const LatticeModel& model) {
  return build_right_boundary(model.right, model.q);
}

QMat full_markov(const LatticeModel& model) {
  model.validate();
  const TensorSpace space = model.space();
  if (space.dimension() > kMaxDenseConfigurations) {
    throw Error(ErrorKind::DimensionCapExceeded,
                "N^L = " + std::to_string(space.dimension()) + " exceeds the dense cap of " +
                    std::to_string(kMaxDenseConfigurations));
  }
  QMat m = bulk_markov(model.bulk(), model.sites);
  m += embed(left_boundary_matrix(model), 1, space);
  m += embed(right_boundary_matrix(model), model.sites, space);
  return m;
}

std::vector<std::vector<Edge>> transition_graph(const LatticeModel& model) {
  model.validate();
  const TensorSpace space = model.space();
  const Index dim = space.dimension();
  if (dim > kMaxConfigurations) {
    throw Error(ErrorKind::DimensionCapExceeded,
                "N^L = " + std::to_string(dim) + " exceeds " + std::to_string(kMaxConfigurations));
  }
  const QMat bl = left_boundary_matrix(model);
  const QMat br = right_boundary_matrix(model);
  const int n = model.n_species;
  const int last = model.sites - 1;

  std::vector<Index> weight(static_cast<std::size_t>(model.sites));
  Index w = 1;
  for (int i = model.sites - 1; i >= 0; --i) {
    weight[static_cast<std::size_t>(i)] = w;
    w *= n;
  }

  std::vector<std::vector<Edge>> graph(static_cast<std::size_t>(dim));
  for (Index c = 0; c < dim; ++c) {
    const auto config = space.config_of(c);
    auto& out = graph[static_cast<std::size_t>(c)];
    for (int i = 0; i + 1 < model.sites; ++i) {
      const int a = config[static_cast<std::size_t>(i)];
      const int b = config[static_cast<std::size_t>(i) + 1];
      if (a == b) continue;
      const Rat rate = a > b ? Rat(1) : model.q;
      const Index to = c + (b - a) * weight[static_cast<std::size_t>(i)] +
                       (a - b) * weight[static_cast<std::size_t>(i) + 1];
      out.push_back({to, rate});
    }
    const auto boundary = [&](const QMat& bm, int site) {
      const int from = config[static_cast<std::size_t>(site)];
      for (int to = 1; to <= n; ++to) {
        if (to == from || bm(to - 1, from - 1).sign() <= 0) continue;
        out.push_back({c + (to - from) * weight[static_cast<std::size_t>(site)], bm(to - 1, from - 1)});
      }
    };
    boundary(bl, 0);
    boundary(br, last);
  }
  return graph;
}

std::vector<int> strongly_connected_components(const std::vector<std::vector<Index>>& adjacency,
                                               int* component_count) {
  const std::size_t n = adjacency.size();
  std::vector<int> index(n, -1), low(n, 0), component(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  // explicit DFS frames: node and position in its adjacency list
  std::vector<std::pair<std::size_t, std::size_t>> frames;
  int next_index = 0;
  int components = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    frames.emplace_back(root, 0);
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      if (pos < adjacency[v].size()) {
        const auto w = static_cast<std::size_t>(adjacency[v][pos++]);
        if (index[w] < 0) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::size_t done = v;
      frames.pop_back();
      if (!frames.empty()) {
        const std::size_t parent = frames.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] == index[done]) {
        std::size_t w = 0;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component[w] = components;
        } while (w != done);
        ++components;
      }
    }
  }
  if (component_count != nullptr) *component_count = components;
  return component;
}

bool is_irreducible(const LatticeModel& model) {
  const auto graph = transition_graph(model);
  std::vector<std::vector<Index>> adjacency(graph.size());
  for (std::size_t i = 0; i < graph.size(); ++i) {
    for (const auto& e : graph[i]) adjacency[i].push_back(e.to);
  }
  int count = 0;
  strongly_connected_components(adjacency, &count);
  return count == 1;
}

StationaryResult stationary_distribution(const LatticeModel& model) {
  const QMat m = full_markov(model);
  const auto kernel = nullspace(m);
  // zero column sums force a nontrivial kernel
  assert(!kernel.empty());

  StationaryResult result;
  result.irreducible = is_irreducible(model);
  result.kernel_dimension = static_cast<int>(kernel.size());
  if (kernel.size() == 1) {
    const QVec& v = kernel.front();
    const Rat total = v.sum();
    result.distribution.reserve(static_cast<std::size_t>(v.size()));
    for (Index i = 0; i < v.size(); ++i) result.distribution.push_back(v(i) / total);
  } else {
    result.irreducible = false;
    for (const auto& v : kernel) result.basis.emplace_back(v.begin(), v.end());
  }
  return result;
}

}  // namespace masep
