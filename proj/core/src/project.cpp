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

#include "dmf/project.hpp"

#include <cmath>
#include <string>

#include "dmf/numerics.hpp"
#include "update_rules.hpp"

namespace dmf {

namespace {

// 0-based index of the requested layer; -1 means the top layer.
size_t resolve_layer(const DeepModel& model, int layer, const char* what) {
  const int m = model.layers();
  if (layer == -1) return static_cast<size_t>(m - 1);
  if (layer < 1 || layer > m) {
    throw InvalidInput(std::string(what) + ": layer " + std::to_string(layer) +
                       " out of range [1, " + std::to_string(m) + "]");
  }
  return static_cast<size_t>(layer - 1);
}

// Reconstruction of x from layer-l features: Z_1 g(Z_2 ... g(Z_{l+1} a)).
Matrix reconstruct(const std::vector<Matrix>& z, const Nonlinearity& g,
                   const Matrix& feats, size_t l) {
  Matrix a = feats;
  for (size_t i = l; i >= 1; --i) a = g.fwd(z[i] * a);
  return z[0] * a;
}

double subchain_cost(const std::vector<Matrix>& z, const Nonlinearity& g,
                     const Matrix& x, const Matrix& feats, size_t l) {
  return 0.5 * (x - reconstruct(z, g, feats, l)).squaredNorm();
}

// Gradient of subchain_cost with respect to the features.
Matrix subchain_grad(const std::vector<Matrix>& z, const Nonlinearity& g,
                     const Matrix& x, const Matrix& feats, size_t l) {
  std::vector<Matrix> preacts(l + 1);
  std::vector<Matrix> acts(l + 1);
  acts[l] = feats;
  for (size_t i = l; i >= 1; --i) {
    preacts[i] = z[i] * acts[i];
    acts[i - 1] = g.fwd(preacts[i]);
  }
  Matrix gr = z[0].transpose() * (z[0] * acts[0] - x);
  for (size_t i = 1; i <= l; ++i) {
    gr = z[i].transpose() * gr.cwiseProduct(g.grad(preacts[i]));
  }
  return gr;
}

// Per-layer method-1 features for every column of x, plus clip flags.
struct PinvFeatures {
  std::vector<Matrix> h;  // h[l]: k_{l+1} x n
  std::vector<bool> clipped;
};

PinvFeatures pinv_features(const DeepModel& model, const Matrix& x) {
  const size_t m = model.z.size();
  PinvFeatures out;
  out.h.resize(m);
  out.clipped.assign(m, false);
  if (model.g.is_identity()) {
    Matrix basis = model.z[0];
    for (size_t l = 0; l < m; ++l) {
      if (l > 0) basis = basis * model.z[l];
      out.h[l] = pinv(basis) * x;
    }
  } else {
    Matrix u = pinv(model.z[0]) * x;
    out.h[0] = u;
    for (size_t l = 1; l < m; ++l) {
      bool clip = false;
      u = pinv(model.z[l]) * model.g.inv(u, &clip);
      out.clipped[l] = clip;
      out.h[l] = u;
    }
  }
  return out;
}

// Method-2 refinement of one layer's features for every column of x.
// Returns false if the iteration cap was reached before the stopping rule.
bool nls_refine(const DeepModel& model, const Matrix& x, size_t l,
                const TrainConfig& cfg, Matrix* feats) {
  *feats = feats->cwiseMax(kDivEps);
  if (model.g.is_identity()) {
    Matrix basis = model.z[0];
    for (size_t i = 1; i <= l; ++i) basis = basis * model.z[i];
    double e_prev = 0.5 * (x - basis * *feats).squaredNorm();
    for (int it = 1; it <= cfg.max_iters; ++it) {
      *feats = detail::seminmf_feature_update(basis, x, *feats, cfg.eta, {});
      const double e = 0.5 * (x - basis * *feats).squaredNorm();
      if (kappa_stop(e_prev, e, cfg.kappa)) return true;
      e_prev = e;
    }
    return false;
  }

  // Projected gradient with backtracking for the nested reconstruction.
  double step = cfg.step;
  double e_prev = subchain_cost(model.z, model.g, x, *feats, l);
  for (int it = 1; it <= cfg.max_iters; ++it) {
    const Matrix gr = subchain_grad(model.z, model.g, x, *feats, l);
    Matrix cand;
    double e_cand = 0.0;
    for (int bt = 0; bt <= 40; ++bt) {
      cand = (*feats - step * gr).cwiseMax(0.0);
      e_cand = subchain_cost(model.z, model.g, x, cand, l);
      if (std::isfinite(e_cand) && e_cand <= e_prev) break;
      step *= 0.5;
    }
    *feats = std::move(cand);
    step = std::min(step * 1.2, cfg.step);
    if (kappa_stop(e_prev, e_cand, cfg.kappa) && e_cand <= e_prev) return true;
    e_prev = e_cand;
  }
  return false;
}

void check_sample(const DeepModel& model, const Matrix& x, const char* what) {
  if (model.z.empty()) throw InvalidInput(std::string(what) + ": empty model");
  require_finite(x, what);
  if (x.rows() != model.features()) {
    throw InvalidInput(std::string(what) + ": sample dimension " +
                       std::to_string(x.rows()) +
                       " does not match the model's feature count " +
                       std::to_string(model.features()));
  }
}

}  // namespace

ProjectionResult project_pinv(const DeepModel& model, const Vector& x_star,
                              int layer) {
  check_sample(model, x_star, "project_pinv");
  const size_t l = resolve_layer(model, layer, "project_pinv");
  PinvFeatures feats = pinv_features(model, x_star);

  ProjectionResult result;
  result.method = ProjectionMethod::kPinv;
  result.layer = static_cast<int>(l) + 1;
  result.clipped = feats.clipped;
  result.h.reserve(model.z.size());
  for (const Matrix& hl : feats.h) result.h.push_back(hl.col(0));
  result.residual =
      (x_star - reconstruct(model.z, model.g, feats.h[l], l)).norm();
  return result;
}

ProjectionResult project_nls(const DeepModel& model, const Vector& x_star,
                             const TrainConfig& cfg, int layer) {
  check_sample(model, x_star, "project_nls");
  cfg.validate();
  const size_t l = resolve_layer(model, layer, "project_nls");
  PinvFeatures init = pinv_features(model, x_star);

  ProjectionResult result;
  result.method = ProjectionMethod::kNls;
  result.layer = static_cast<int>(l) + 1;
  result.clipped.assign(model.z.size(), false);
  result.converged = true;
  result.h.resize(model.z.size());
  for (size_t i = 0; i < model.z.size(); ++i) {
    Matrix feats = init.h[i];
    if (!nls_refine(model, x_star, i, cfg, &feats)) result.converged = false;
    result.h[i] = feats.col(0);
  }
  result.residual =
      (x_star - reconstruct(model.z, model.g, result.h[l], l)).norm();
  return result;
}

Matrix project_batch(const DeepModel& model, const Matrix& x_stars,
                     ProjectionMethod method, int layer,
                     const TrainConfig& cfg) {
  check_sample(model, x_stars, "project_batch");
  const size_t l = resolve_layer(model, layer, "project_batch");
  PinvFeatures feats = pinv_features(model, x_stars);
  if (method == ProjectionMethod::kPinv) return std::move(feats.h[l]);
  cfg.validate();
  Matrix refined = std::move(feats.h[l]);
  nls_refine(model, x_stars, l, cfg, &refined);
  return refined;
}

}  // namespace dmf
