#pragma once

#include <span>
#include <vector>

#include "fdasynth/types.hpp"

namespace fdasynth {

// Agglomerative dendrogram. Leaves are 0..n-1; merge t creates node n+t.
struct Dendrogram {
  struct Merge {
    int left = -1;
    int right = -1;
    double height = 0.0;
    int size = 0;
  };
  int n = 0;
  std::vector<Merge> merges;  // n-1 entries, non-decreasing height
};

// Complete-linkage clustering of a full symmetric n x n distance matrix
// (row-major). Ties are broken toward the lexicographically smallest pair
// of cluster ids, so the result is deterministic.
Dendrogram complete_linkage(std::span<const double> dist, int n);

// Cophenetic distances as a full n x n row-major matrix (zero diagonal).
std::vector<double> cophenetic_matrix(const Dendrogram& tree);

struct ClusterAssignment {
  std::vector<int> labels;  // per-item cluster id in 1..G
  int G = 0;
  std::vector<int> sizes;  // indexed by cluster id - 1
  bool single_cluster_warning = false;
};

struct DynamicCutParams {
  int min_cluster_size = 20;
};

// Recursive dendrogram cut: a split is accepted only when both children
// reach min_cluster_size and the joining height exceeds the median merge
// height of the node's subtree.
ClusterAssignment dynamic_cut(const Dendrogram& tree, const DynamicCutParams& params);

}  // namespace fdasynth
