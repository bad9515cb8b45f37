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

#ifndef DMF_EVAL_HPP_
#define DMF_EVAL_HPP_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "dmf/graph.hpp"
#include "dmf/matrix.hpp"

namespace dmf {

struct ClusterAssignment {
  std::vector<int> labels;  // one entry per sample, in [0, k)
  int k = 0;
  double wcss = 0.0;  // within-cluster sum of squares of the winning run
};

/// Lloyd's algorithm on the columns of H with k-means++ seeding; the best of
/// `restarts` runs by within-cluster sum of squares wins. Deterministic for
/// a fixed seed (restart r uses an independent derived stream).
ClusterAssignment kmeans(const Matrix& h, int k, uint64_t seed,
                         int restarts = 10);

/// Best label-mapping match rate between a clustering and the ground truth,
/// maximized over one-to-one cluster-to-class mappings (Hungarian
/// assignment on the confusion matrix). In [0, 1].
double clustering_accuracy(const ClusterAssignment& pred,
                           const AttributeLabels& truth);

/// Mutual information between the two partitions normalized by the larger
/// marginal entropy; zero-entropy edge cases yield 0. In [0, 1].
double nmi(const ClusterAssignment& pred, const AttributeLabels& truth);

/// One-vs-rest linear classifier with hinge loss, trained by deterministic
/// seeded full-batch subgradient descent on
///   J(w, b) = 1/(2 gamma) ||w||^2 + mean_i max(0, 1 - y_i (w^T x_i + b)).
/// gamma trades regularization against the data term (default 1). Features
/// are standardized internally (training mean/deviation, replayed at
/// prediction time), so the decision function is linear in the raw inputs
/// and insensitive to their scale.
class LinearClassifier {
 public:
  static LinearClassifier train(const Matrix& h, const AttributeLabels& labels,
                                double gamma = 1.0, uint64_t seed = 0);

  /// Predicted class ids for the columns of H.
  AttributeLabels classify(const Matrix& h) const;

  const std::vector<int>& classes() const { return classes_; }

 private:
  std::vector<int> classes_;
  Matrix weights_;  // one row per class, in standardized coordinates
  Vector biases_;
  Vector shift_;  // per-feature training mean
  Vector scale_;  // per-feature training deviation (floored)
};

struct SyntheticDataset {
  Matrix x;
  std::vector<AttributeLabels> attributes;
  uint64_t seed = 0;
};

/// Four isotropic Gaussian clusters at (+-1, +-1) in 2-D. The "identity"
/// attribute is the XOR of the generating center's coordinate signs (so it
/// is not linearly separable); "pose" is the sign of the first coordinate.
SyntheticDataset gen_xor(int n_per_cluster = 100, double sigma = 1.0,
                         uint64_t seed = 0);

/// Hierarchical mixture: identity centroids drawn first, per-identity pose
/// offsets second, isotropic noise last. Attributes: identity, pose.
SyntheticDataset gen_multiattr(int n_ids, int n_poses, int samples_per_cell,
                               int dims, double noise, uint64_t seed);

/// One metric observation, serialized as a CSV row
/// "method,layer,attribute,metric,value,seed".
struct MetricRow {
  std::string method;
  int layer = 1;
  std::string attribute;
  std::string metric;
  double value = 0.0;
  uint64_t seed = 0;
};

void write_metric_csv(std::ostream& out, const std::vector<MetricRow>& rows);

}  // namespace dmf

#endif  // DMF_EVAL_HPP_
