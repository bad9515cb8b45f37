// Copyright 2026 dmf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DMF_GRAPH_HPP_
#define DMF_GRAPH_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dmf/matrix.hpp"

namespace dmf {

/// Per-sample class ids for one attribute; absent means unlabeled.
struct AttributeLabels {
  std::string attribute_name;
  std::vector<std::optional<int>> labels;

  Index size() const { return static_cast<Index>(labels.size()); }
  bool fully_labeled() const;
  /// Number of distinct class ids among the labeled samples.
  int distinct_classes() const;

  static AttributeLabels full(std::string name, std::vector<int> ids);
};

/// Sample similarity graph: symmetric nonnegative weights W with zero
/// diagonal, diagonal degree matrix D, Laplacian L = D - W.
struct AttributeGraph {
  Matrix w;
  Matrix d;
  Matrix l;

  Index n() const { return w.rows(); }

  /// Validates the weight matrix and derives D and L.
  static AttributeGraph from_weights(Matrix weights);
  static AttributeGraph zero(Index n);
};

enum class WeightScheme { kBinary, kRbf, kDot };

/// Label-driven graph: samples i != j are connected iff both are labeled
/// with the same class. Edge weights are 1 (binary), a Gaussian kernel of
/// the sample distance (rbf, requires X and sigma > 0), or the sample inner
/// product (dot, requires X with nonnegative inner products).
AttributeGraph build_weight_matrix(const AttributeLabels& labels,
                                   WeightScheme scheme,
                                   const Matrix* x = nullptr,
                                   double sigma = 0.0);

/// Symmetrized k-nearest-neighbor graph over the columns of X, ignoring any
/// labels: an edge is kept if either endpoint selects the other. Distance
/// ties break toward the lower sample index.
AttributeGraph knn_graph(const Matrix& x, Index n_neighbors,
                         WeightScheme scheme, double sigma = 0.0);

/// Tr(H L H^T) for k x n features H; equals half the weighted double sum
/// of squared feature differences over the graph edges.
double smoothness(const Matrix& h, const AttributeGraph& graph);

/// Sparse triplet text format: header "n nnz", then one "i j w" line per
/// stored entry, 0-based indices.
void save_graph(const AttributeGraph& graph, const std::filesystem::path& path);
AttributeGraph load_graph(const std::filesystem::path& path);

}  // namespace dmf

#endif  // DMF_GRAPH_HPP_
