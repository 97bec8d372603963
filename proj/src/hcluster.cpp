#include "fdasynth/hcluster.hpp"

#include <algorithm>
#include <functional>
#include <limits>

namespace fdasynth {

Dendrogram complete_linkage(std::span<const double> dist, int n) {
  if (n < 1) throw validation_error("complete_linkage: empty input");
  if (dist.size() != static_cast<size_t>(n) * n)
    throw validation_error("complete_linkage: matrix size mismatch");

  Dendrogram tree;
  tree.n = n;
  if (n == 1) return tree;

  // working copy of inter-cluster distances; cluster c occupies slot c
  std::vector<int> active;  // node ids of live clusters, ascending
  std::vector<int> slot_of_node(2 * n - 1, -1);
  std::vector<int> node_of_slot(n);
  std::vector<int> cluster_size(2 * n - 1, 1);
  std::vector<double> d(dist.begin(), dist.end());
  auto dd = [&](int a, int b) -> double& { return d[static_cast<size_t>(a) * n + b]; };

  for (int i = 0; i < n; ++i) {
    active.push_back(i);
    slot_of_node[i] = i;
    node_of_slot[i] = i;
  }

  tree.merges.reserve(n - 1);
  for (int t = 0; t < n - 1; ++t) {
    // closest active pair; ties toward smallest (node_a, node_b)
    double best = std::numeric_limits<double>::infinity();
    int bi = -1, bj = -1;
    for (size_t ai = 0; ai < active.size(); ++ai) {
      for (size_t aj = ai + 1; aj < active.size(); ++aj) {
        int sa = slot_of_node[active[ai]];
        int sb = slot_of_node[active[aj]];
        double v = dd(sa, sb);
        if (v < best) {
          best = v;
          bi = static_cast<int>(ai);
          bj = static_cast<int>(aj);
        }
      }
    }
    int node_a = active[bi], node_b = active[bj];
    int sa = slot_of_node[node_a], sb = slot_of_node[node_b];
    int new_node = n + t;

    Dendrogram::Merge mg;
    mg.left = node_a;
    mg.right = node_b;
    mg.height = best;
    mg.size = cluster_size[node_a] + cluster_size[node_b];
    cluster_size[new_node] = mg.size;
    tree.merges.push_back(mg);

    // complete linkage: new cluster keeps slot sa with max distances
    for (int node : active) {
      if (node == node_a || node == node_b) continue;
      int sc = slot_of_node[node];
      double v = std::max(dd(sa, sc), dd(sb, sc));
      dd(sa, sc) = v;
      dd(sc, sa) = v;
    }
    active.erase(active.begin() + bj);
    active.erase(active.begin() + bi);
    active.push_back(new_node);  // keeps `active` ascending: new id is the max
    slot_of_node[new_node] = sa;
  }
  return tree;
}

namespace {
std::vector<std::vector<int>> leaves_per_node(const Dendrogram& tree) {
  const int n = tree.n;
  std::vector<std::vector<int>> leaves(2 * n - 1);
  for (int i = 0; i < n; ++i) leaves[i] = {i};
  for (size_t t = 0; t < tree.merges.size(); ++t) {
    const auto& mg = tree.merges[t];
    auto& out = leaves[n + t];
    out = leaves[mg.left];
    out.insert(out.end(), leaves[mg.right].begin(), leaves[mg.right].end());
  }
  return leaves;
}
}  // namespace

std::vector<double> cophenetic_matrix(const Dendrogram& tree) {
  const int n = tree.n;
  std::vector<double> coph(static_cast<size_t>(n) * n, 0.0);
  auto leaves = leaves_per_node(tree);
  for (size_t t = 0; t < tree.merges.size(); ++t) {
    const auto& mg = tree.merges[t];
    for (int i : leaves[mg.left]) {
      for (int j : leaves[mg.right]) {
        coph[static_cast<size_t>(i) * n + j] = mg.height;
        coph[static_cast<size_t>(j) * n + i] = mg.height;
      }
    }
  }
  return coph;
}

ClusterAssignment dynamic_cut(const Dendrogram& tree, const DynamicCutParams& params) {
  const int n = tree.n;
  ClusterAssignment out;
  out.labels.assign(n, 0);

  if (n < params.min_cluster_size) {
    out.G = 1;
    out.sizes = {n};
    for (auto& l : out.labels) l = 1;
    out.single_cluster_warning = true;
    return out;
  }

  auto leaves = leaves_per_node(tree);

  // merge heights inside each subtree, for the adaptive median threshold
  std::vector<std::vector<double>> sub_heights(2 * n - 1);
  for (size_t t = 0; t < tree.merges.size(); ++t) {
    const auto& mg = tree.merges[t];
    auto& h = sub_heights[n + t];
    h = sub_heights[mg.left];
    h.insert(h.end(), sub_heights[mg.right].begin(), sub_heights[mg.right].end());
    h.push_back(mg.height);
  }

  std::vector<int> cluster_roots;
  std::function<void(int)> cut = [&](int node) {
    if (node < n) {
      cluster_roots.push_back(node);
      return;
    }
    const auto& mg = tree.merges[node - n];
    int left_size = static_cast<int>(leaves[mg.left].size());
    int right_size = static_cast<int>(leaves[mg.right].size());
    double threshold = median_linear(sub_heights[node]);
    if (mg.height > threshold && left_size >= params.min_cluster_size &&
        right_size >= params.min_cluster_size) {
      cut(mg.left);
      cut(mg.right);
    } else {
      cluster_roots.push_back(node);
    }
  };
  cut(n == 1 ? 0 : 2 * n - 2);

  out.G = static_cast<int>(cluster_roots.size());
  out.sizes.resize(out.G);
  for (int c = 0; c < out.G; ++c) {
    out.sizes[c] = static_cast<int>(leaves[cluster_roots[c]].size());
    for (int leaf : leaves[cluster_roots[c]]) out.labels[leaf] = c + 1;
  }
  return out;
}

}  // namespace fdasynth
