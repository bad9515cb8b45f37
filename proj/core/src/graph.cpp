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

#include "dmf/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace dmf {

bool AttributeLabels::fully_labeled() const {
  return std::all_of(labels.begin(), labels.end(),
                     [](const auto& l) { return l.has_value(); });
}

int AttributeLabels::distinct_classes() const {
  std::set<int> ids;
  for (const auto& l : labels) {
    if (l.has_value()) ids.insert(*l);
  }
  return static_cast<int>(ids.size());
}

AttributeLabels AttributeLabels::full(std::string name, std::vector<int> ids) {
  AttributeLabels out;
  out.attribute_name = std::move(name);
  out.labels.reserve(ids.size());
  for (int id : ids) {
    if (id < 0) throw InvalidInput("class ids must be nonnegative");
    out.labels.emplace_back(id);
  }
  return out;
}

AttributeGraph AttributeGraph::from_weights(Matrix weights) {
  if (weights.rows() != weights.cols()) {
    throw ShapeError("graph weights must be square");
  }
  require_nonneg(weights, "graph weights");
  const Index n = weights.rows();
  for (Index i = 0; i < n; ++i) {
    if (weights(i, i) != 0.0) {
      throw InvalidInput("graph weights must have a zero diagonal");
    }
  }
  if (!weights.isApprox(weights.transpose(), 0.0)) {
    throw InvalidInput("graph weights must be symmetric");
  }
  AttributeGraph g;
  g.d = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) g.d(j, j) = weights.row(j).sum();
  g.l = g.d - weights;
  g.w = std::move(weights);
  return g;
}

AttributeGraph AttributeGraph::zero(Index n) {
  AttributeGraph g;
  g.w = Matrix::Zero(n, n);
  g.d = Matrix::Zero(n, n);
  g.l = Matrix::Zero(n, n);
  return g;
}

namespace {

double pair_weight(WeightScheme scheme, const Matrix* x, double sigma,
                   Index i, Index j) {
  switch (scheme) {
    case WeightScheme::kBinary:
      return 1.0;
    case WeightScheme::kRbf: {
      const double d2 = (x->col(i) - x->col(j)).squaredNorm();
      return std::exp(-d2 / (2.0 * sigma * sigma));
    }
    case WeightScheme::kDot: {
      const double w = x->col(i).dot(x->col(j));
      if (w < 0.0) {
        throw InvalidInput(
            "dot-product weighting produced a negative weight; use binary or "
            "rbf for mixed-sign data");
      }
      return w;
    }
  }
  throw InvalidInput("unknown weight scheme");
}

void check_scheme_inputs(WeightScheme scheme, const Matrix* x, double sigma,
                         Index n) {
  if (scheme == WeightScheme::kRbf || scheme == WeightScheme::kDot) {
    if (x == nullptr) {
      throw InvalidInput("rbf/dot weighting requires the data matrix");
    }
    if (x->cols() != n) {
      throw ShapeError("data matrix column count does not match sample count");
    }
  }
  if (scheme == WeightScheme::kRbf && sigma <= 0.0) {
    throw InvalidInput("rbf weighting requires sigma > 0");
  }
}

}  // namespace

AttributeGraph build_weight_matrix(const AttributeLabels& labels,
                                   WeightScheme scheme, const Matrix* x,
                                   double sigma) {
  const Index n = labels.size();
  check_scheme_inputs(scheme, x, sigma, n);
  Matrix w = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    if (!labels.labels[i].has_value()) continue;
    for (Index j = i + 1; j < n; ++j) {
      if (!labels.labels[j].has_value()) continue;
      if (*labels.labels[i] != *labels.labels[j]) continue;
      const double weight = pair_weight(scheme, x, sigma, i, j);
      w(i, j) = weight;
      w(j, i) = weight;
    }
  }
  return AttributeGraph::from_weights(std::move(w));
}

AttributeGraph knn_graph(const Matrix& x, Index n_neighbors,
                         WeightScheme scheme, double sigma) {
  const Index n = x.cols();
  if (n_neighbors < 1 || n_neighbors >= n) {
    throw InvalidInput("knn_graph: n_neighbors must be in [1, n)");
  }
  check_scheme_inputs(scheme, &x, sigma, n);

  // Neighbor selection by squared distance, ties toward the lower index.
  Matrix w = Matrix::Zero(n, n);
  std::vector<Index> order(n);
  for (Index i = 0; i < n; ++i) {
    std::iota(order.begin(), order.end(), Index{0});
    std::vector<double> d2(n);
    for (Index j = 0; j < n; ++j) d2[j] = (x.col(i) - x.col(j)).squaredNorm();
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
      return d2[a] != d2[b] ? d2[a] < d2[b] : a < b;
    });
    Index taken = 0;
    for (Index r = 0; r < n && taken < n_neighbors; ++r) {
      const Index j = order[r];
      if (j == i) continue;
      const double weight = pair_weight(scheme, &x, sigma, i, j);
      w(i, j) = weight;
      w(j, i) = weight;  // edge kept if either endpoint selects the other
      ++taken;
    }
  }
  return AttributeGraph::from_weights(std::move(w));
}

double smoothness(const Matrix& h, const AttributeGraph& graph) {
  if (h.cols() != graph.n()) {
    throw ShapeError("smoothness: H must have one column per graph node");
  }
  return (h * graph.l).cwiseProduct(h).sum();
}

void save_graph(const AttributeGraph& graph,
                const std::filesystem::path& path) {
  const Index n = graph.n();
  Index nnz = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (graph.w(i, j) != 0.0) ++nnz;

  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << n << " " << nnz << "\n";
  char buf[64];
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (graph.w(i, j) == 0.0) continue;
      std::snprintf(buf, sizeof(buf), "%.17g", graph.w(i, j));
      out << i << " " << j << " " << buf << "\n";
    }
  }
  if (!out) throw IoError("failed writing " + path.string());
}

AttributeGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError(path.string() + ":1: missing header line");
  }
  std::istringstream header(line);
  Index n = 0;
  long long nnz = -1;
  if (!(header >> n >> nnz) || n < 1 || nnz < 0) {
    throw ParseError(path.string() + ":1: expected header 'n nnz'");
  }
  Matrix w = Matrix::Zero(n, n);
  for (long long e = 0; e < nnz; ++e) {
    if (!std::getline(in, line)) {
      throw ParseError(path.string() + ": expected " + std::to_string(nnz) +
                       " entries, got " + std::to_string(e));
    }
    std::istringstream row(line);
    Index i = -1, j = -1;
    double weight = 0.0;
    if (!(row >> i >> j >> weight) || i < 0 || j < 0 || i >= n || j >= n) {
      throw ParseError(path.string() + ":" + std::to_string(e + 2) +
                       ": malformed triplet '" + line + "'");
    }
    w(i, j) = weight;
  }
  return AttributeGraph::from_weights(std::move(w));
}

}  // namespace dmf
