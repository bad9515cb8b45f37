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

#include "dmf/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>

#include "dmf/rng.hpp"

namespace dmf {

namespace {

// Hungarian algorithm (potentials formulation) for a square min-cost
// assignment. Returns the column assigned to each row.
std::vector<int> hungarian_min_cost(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

// Confusion counts with truth ids mapped onto dense indices.
std::vector<std::vector<long>> confusion(const ClusterAssignment& pred,
                                         const AttributeLabels& truth,
                                         int* n_truth_classes) {
  if (pred.labels.size() != truth.labels.size()) {
    throw InvalidInput("prediction and truth lengths differ");
  }
  if (!truth.fully_labeled()) {
    throw InvalidInput("ground truth must be fully labeled");
  }
  std::map<int, int> truth_index;
  for (const auto& l : truth.labels) truth_index.emplace(*l, 0);
  int next = 0;
  for (auto& [id, idx] : truth_index) idx = next++;
  *n_truth_classes = next;

  std::vector<std::vector<long>> counts(
      pred.k, std::vector<long>(next, 0));
  for (size_t i = 0; i < pred.labels.size(); ++i) {
    const int c = pred.labels[i];
    if (c < 0 || c >= pred.k) throw InvalidInput("cluster label out of range");
    ++counts[c][truth_index.at(*truth.labels[i])];
  }
  return counts;
}

struct LloydResult {
  std::vector<int> assignment;
  double wcss = std::numeric_limits<double>::infinity();
};

LloydResult lloyd_once(const Matrix& points, int k, uint64_t seed) {
  const Index n = points.cols();
  Rng rng(seed);

  // k-means++ seeding.
  Matrix centers(points.rows(), k);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  Index first = static_cast<Index>(rng.below(static_cast<uint64_t>(n)));
  centers.col(0) = points.col(first);
  for (int c = 1; c < k; ++c) {
    std::vector<double> weights(n);
    for (Index i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], (points.col(i) - centers.col(c - 1)).squaredNorm());
      weights[i] = d2[i];
    }
    centers.col(c) = points.col(static_cast<Index>(rng.categorical(weights)));
  }

  std::vector<int> assign(n, 0);
  for (int iter = 0; iter < 300; ++iter) {
    bool changed = false;
    for (Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = (points.col(i) - centers.col(0)).squaredNorm();
      for (int c = 1; c < k; ++c) {
        const double d = (points.col(i) - centers.col(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;

    // Recompute centers; an empty cluster steals the point farthest from
    // its current center.
    Matrix sums = Matrix::Zero(points.rows(), k);
    std::vector<long> counts(k, 0);
    for (Index i = 0; i < n; ++i) {
      sums.col(assign[i]) += points.col(i);
      ++counts[assign[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centers.col(c) = sums.col(c) / static_cast<double>(counts[c]);
      } else {
        Index worst = 0;
        double worst_d = -1.0;
        for (Index i = 0; i < n; ++i) {
          const double d =
              (points.col(i) - centers.col(assign[i])).squaredNorm();
          if (d > worst_d) {
            worst_d = d;
            worst = i;
          }
        }
        centers.col(c) = points.col(worst);
        assign[worst] = c;
      }
    }
  }

  LloydResult result;
  result.assignment = std::move(assign);
  result.wcss = 0.0;
  for (Index i = 0; i < n; ++i) {
    result.wcss +=
        (points.col(i) - centers.col(result.assignment[i])).squaredNorm();
  }
  return result;
}

double entropy(const std::vector<double>& probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

}  // namespace

ClusterAssignment kmeans(const Matrix& h, int k, uint64_t seed, int restarts) {
  require_finite(h, "kmeans");
  if (k < 1 || k > h.cols()) {
    throw InvalidInput("kmeans: k must be in [1, n]");
  }
  if (restarts < 1) throw InvalidInput("kmeans: restarts must be >= 1");

  LloydResult best;
  for (int r = 0; r < restarts; ++r) {
    LloydResult res = lloyd_once(h, k, derive_seed(seed, r));
    if (res.wcss < best.wcss) best = std::move(res);
  }
  return ClusterAssignment{std::move(best.assignment), k, best.wcss};
}

double clustering_accuracy(const ClusterAssignment& pred,
                           const AttributeLabels& truth) {
  int n_truth = 0;
  const auto counts = confusion(pred, truth, &n_truth);
  const int n = std::max(pred.k, n_truth);

  // Maximize matches == minimize negated counts on a zero-padded square.
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < pred.k; ++i) {
    for (int j = 0; j < n_truth; ++j) {
      cost[i][j] = -static_cast<double>(counts[i][j]);
    }
  }
  const auto assignment = hungarian_min_cost(cost);
  long matched = 0;
  for (int i = 0; i < pred.k; ++i) {
    if (assignment[i] < n_truth) matched += counts[i][assignment[i]];
  }
  return static_cast<double>(matched) /
         static_cast<double>(pred.labels.size());
}

double nmi(const ClusterAssignment& pred, const AttributeLabels& truth) {
  int n_truth = 0;
  const auto counts = confusion(pred, truth, &n_truth);
  const double n = static_cast<double>(pred.labels.size());

  std::vector<double> pi(pred.k, 0.0), qj(n_truth, 0.0);
  for (int i = 0; i < pred.k; ++i) {
    for (int j = 0; j < n_truth; ++j) {
      pi[i] += counts[i][j] / n;
      qj[j] += counts[i][j] / n;
    }
  }
  double mi = 0.0;
  for (int i = 0; i < pred.k; ++i) {
    for (int j = 0; j < n_truth; ++j) {
      const double pij = counts[i][j] / n;
      if (pij > 0.0) mi += pij * std::log(pij / (pi[i] * qj[j]));
    }
  }
  const double denom = std::max(entropy(pi), entropy(qj));
  if (denom <= 0.0) return 0.0;
  return std::clamp(mi / denom, 0.0, 1.0);
}

LinearClassifier LinearClassifier::train(const Matrix& h,
                                         const AttributeLabels& labels,
                                         double gamma, uint64_t seed) {
  require_finite(h, "LinearClassifier::train");
  if (h.cols() != labels.size()) {
    throw InvalidInput("feature and label counts differ");
  }
  if (!labels.fully_labeled()) {
    throw InvalidInput("training labels must be fully labeled");
  }
  if (!(gamma > 0.0)) throw InvalidInput("gamma must be > 0");

  std::set<int> class_set;
  for (const auto& l : labels.labels) class_set.insert(*l);
  if (class_set.size() < 2) {
    throw InvalidInput("training set must contain at least two classes");
  }

  LinearClassifier clf;
  clf.classes_.assign(class_set.begin(), class_set.end());
  const Index dim = h.rows();
  const Index n = h.cols();
  clf.weights_ = Matrix::Zero(static_cast<Index>(clf.classes_.size()), dim);
  clf.biases_ = Vector::Zero(static_cast<Index>(clf.classes_.size()));

  // Standardize features; the hinge objective is scale-sensitive and its
  // bias subgradient vanishes when every margin is active, which happens
  // whenever the inputs live at a tiny scale.
  clf.shift_ = h.rowwise().mean();
  clf.scale_ = Vector(dim);
  for (Index d = 0; d < dim; ++d) {
    const double var =
        (h.row(d).array() - clf.shift_(d)).square().sum() / n;
    clf.scale_(d) = std::max(std::sqrt(var), 1e-12);
  }
  Matrix hs = (h.colwise() - clf.shift_).array().colwise() / clf.scale_.array();

  const double reg = 1.0 / gamma;
  constexpr int kIters = 2000;
  for (size_t c = 0; c < clf.classes_.size(); ++c) {
    // Tiny seeded init so distinct seeds give distinct (deterministic) runs.
    Rng rng(derive_seed(seed, c));
    Vector w(dim);
    for (Index d = 0; d < dim; ++d) w(d) = 1e-3 * rng.normal();
    double b = 0.0;
    Vector best_w = w;
    double best_b = b;
    double best_obj = std::numeric_limits<double>::infinity();

    for (int t = 1; t <= kIters; ++t) {
      Vector grad_w = reg * w;
      double grad_b = 0.0;
      double hinge_sum = 0.0;
      for (Index i = 0; i < n; ++i) {
        const double y = (*labels.labels[i] == clf.classes_[c]) ? 1.0 : -1.0;
        const double margin = y * (w.dot(hs.col(i)) + b);
        if (margin < 1.0) {
          hinge_sum += 1.0 - margin;
          grad_w -= (y / static_cast<double>(n)) * hs.col(i);
          grad_b -= y / static_cast<double>(n);
        }
      }
      const double obj =
          0.5 * reg * w.squaredNorm() + hinge_sum / static_cast<double>(n);
      if (obj < best_obj) {
        best_obj = obj;
        best_w = w;
        best_b = b;
      }
      const double lr = 1.0 / (reg * (t + 10.0));
      w -= lr * grad_w;
      b -= lr * grad_b;
    }
    clf.weights_.row(static_cast<Index>(c)) = best_w.transpose();
    clf.biases_(static_cast<Index>(c)) = best_b;
  }
  return clf;
}

AttributeLabels LinearClassifier::classify(const Matrix& h) const {
  if (h.rows() != weights_.cols()) {
    throw ShapeError("feature dimension does not match the classifier");
  }
  AttributeLabels out;
  out.attribute_name = "predicted";
  out.labels.reserve(h.cols());
  for (Index i = 0; i < h.cols(); ++i) {
    const Vector x = (h.col(i) - shift_).cwiseQuotient(scale_);
    Index best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (Index c = 0; c < weights_.rows(); ++c) {
      const double score = weights_.row(c).dot(x) + biases_(c);
      if (score > best_score) {
        best_score = score;
        best = c;
      }
    }
    out.labels.emplace_back(classes_[static_cast<size_t>(best)]);
  }
  return out;
}

SyntheticDataset gen_xor(int n_per_cluster, double sigma, uint64_t seed) {
  if (n_per_cluster < 1) throw InvalidInput("gen_xor: n_per_cluster must be >= 1");
  if (sigma < 0.0) throw InvalidInput("gen_xor: sigma must be >= 0");

  const double centers[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  const Index n = 4 * static_cast<Index>(n_per_cluster);
  Rng rng(seed);
  SyntheticDataset data;
  data.seed = seed;
  data.x.resize(2, n);
  std::vector<int> identity(n), pose(n);
  Index col = 0;
  for (int c = 0; c < 4; ++c) {
    const bool x_pos = centers[c][0] > 0;
    const bool y_pos = centers[c][1] > 0;
    for (int s = 0; s < n_per_cluster; ++s, ++col) {
      data.x(0, col) = centers[c][0] + sigma * rng.normal();
      data.x(1, col) = centers[c][1] + sigma * rng.normal();
      identity[col] = (x_pos != y_pos) ? 1 : 0;
      pose[col] = x_pos ? 0 : 1;
    }
  }
  data.attributes.push_back(AttributeLabels::full("identity", identity));
  data.attributes.push_back(AttributeLabels::full("pose", pose));
  return data;
}

SyntheticDataset gen_multiattr(int n_ids, int n_poses, int samples_per_cell,
                               int dims, double noise, uint64_t seed) {
  if (n_ids < 1 || n_poses < 1 || samples_per_cell < 1 || dims < 1) {
    throw InvalidInput("gen_multiattr: all counts must be >= 1");
  }
  if (noise < 0.0) throw InvalidInput("gen_multiattr: noise must be >= 0");

  Rng rng(seed);
  Matrix centroids(dims, n_ids);
  for (int i = 0; i < n_ids; ++i) {
    for (int d = 0; d < dims; ++d) centroids(d, i) = rng.normal();
  }
  // One offset per (identity, pose) cell: poses are modes within an
  // identity, not global directions.
  std::vector<Matrix> offsets(n_ids);
  for (int i = 0; i < n_ids; ++i) {
    offsets[i].resize(dims, n_poses);
    for (int p = 0; p < n_poses; ++p) {
      for (int d = 0; d < dims; ++d) offsets[i](d, p) = rng.normal();
    }
  }

  const Index n =
      static_cast<Index>(n_ids) * n_poses * samples_per_cell;
  SyntheticDataset data;
  data.seed = seed;
  data.x.resize(dims, n);
  std::vector<int> identity(n), pose(n);
  Index col = 0;
  for (int i = 0; i < n_ids; ++i) {
    for (int p = 0; p < n_poses; ++p) {
      for (int s = 0; s < samples_per_cell; ++s, ++col) {
        for (int d = 0; d < dims; ++d) {
          data.x(d, col) =
              centroids(d, i) + offsets[i](d, p) + noise * rng.normal();
        }
        identity[col] = i;
        pose[col] = p;
      }
    }
  }
  data.attributes.push_back(AttributeLabels::full("identity", identity));
  data.attributes.push_back(AttributeLabels::full("pose", pose));
  return data;
}

void write_metric_csv(std::ostream& out, const std::vector<MetricRow>& rows) {
  out << "method,layer,attribute,metric,value,seed\n";
  char buf[64];
  for (const MetricRow& row : rows) {
    std::snprintf(buf, sizeof(buf), "%.12g", row.value);
    out << row.method << ',' << row.layer << ',' << row.attribute << ','
        << row.metric << ',' << buf << ',' << row.seed << '\n';
  }
}

}  // namespace dmf
