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

#include "dmf/deep.hpp"

#include <cmath>
#include <iostream>
#include <string>

#include "dmf/numerics.hpp"
#include "dmf/project.hpp"
#include "update_rules.hpp"

namespace dmf {

Nonlinearity Nonlinearity::from_name(const std::string& name) {
  if (name == "identity") return identity();
  if (name == "stanh") return stanh();
  if (name == "square") return square();
  throw InvalidInput("unknown nonlinearity '" + name + "'");
}

std::string Nonlinearity::name() const {
  switch (kind) {
    case NonlinKind::kIdentity: return "identity";
    case NonlinKind::kStanh: return "stanh";
    case NonlinKind::kSquare: return "square";
  }
  return "identity";
}

double Nonlinearity::fwd(double v) const {
  switch (kind) {
    case NonlinKind::kIdentity: return v;
    case NonlinKind::kStanh: return alpha * std::tanh(beta * v);
    case NonlinKind::kSquare: return v * v;
  }
  return v;
}

double Nonlinearity::grad(double v) const {
  switch (kind) {
    case NonlinKind::kIdentity: return 1.0;
    case NonlinKind::kStanh: {
      const double t = std::tanh(beta * v);
      return alpha * beta * (1.0 - t * t);
    }
    case NonlinKind::kSquare: return 2.0 * v;
  }
  return 1.0;
}

double Nonlinearity::inv(double y, bool* clipped) const {
  switch (kind) {
    case NonlinKind::kIdentity:
      return y;
    case NonlinKind::kStanh: {
      constexpr double kDelta = 1e-7;
      const double lo = -alpha + kDelta;
      const double hi = alpha - kDelta;
      double v = y;
      if (v < lo) {
        v = lo;
        if (clipped) *clipped = true;
      } else if (v > hi) {
        v = hi;
        if (clipped) *clipped = true;
      }
      return std::atanh(v / alpha) / beta;
    }
    case NonlinKind::kSquare:
      if (y < 0.0) {
        if (clipped) *clipped = true;
        return 0.0;
      }
      return std::sqrt(y);
  }
  return y;
}

Matrix Nonlinearity::fwd(const Matrix& v) const {
  if (is_identity()) return v;
  return v.unaryExpr([this](double x) { return fwd(x); });
}

Matrix Nonlinearity::grad(const Matrix& v) const {
  if (is_identity()) return Matrix::Ones(v.rows(), v.cols());
  return v.unaryExpr([this](double x) { return grad(x); });
}

Matrix Nonlinearity::inv(const Matrix& y, bool* clipped) const {
  if (is_identity()) return y;
  return y.unaryExpr([this, clipped](double x) { return inv(x, clipped); });
}

std::vector<Index> DeepModel::layer_sizes() const {
  std::vector<Index> sizes;
  sizes.reserve(z.size());
  for (const Matrix& zi : z) sizes.push_back(zi.cols());
  return sizes;
}

void DeepModel::validate() const {
  if (z.empty() || z.size() != h.size()) {
    throw ShapeError("model must have at least one layer with matching "
                     "basis/feature counts");
  }
  const Index n = h.back().cols();
  for (size_t i = 0; i < z.size(); ++i) {
    if (z[i].cols() != h[i].rows()) {
      throw ShapeError("layer " + std::to_string(i + 1) +
                       ": basis column count != feature row count");
    }
    if (i + 1 < z.size() && z[i + 1].rows() != z[i].cols()) {
      throw ShapeError("layer " + std::to_string(i + 2) +
                       ": basis row count breaks the shape chain");
    }
    if (h[i].cols() != n) {
      throw ShapeError("layer " + std::to_string(i + 1) +
                       ": sample count differs between layers");
    }
    if (!z[i].allFinite() || !h[i].allFinite()) {
      throw InvalidInput("model factors contain non-finite values");
    }
  }
  if ((h.back().array() < 0.0).any()) {
    throw InvalidInput("top feature matrix has negative entries");
  }
}

namespace {

using detail::GraphTerm;
using detail::LayerTerms;

void check_graphs(const DeepModel& model,
                  const std::vector<AttributeGraph>* graphs,
                  const std::vector<double>* lambdas) {
  if (graphs == nullptr && lambdas == nullptr) return;
  if (graphs == nullptr || lambdas == nullptr ||
      graphs->size() != model.z.size() || lambdas->size() != model.z.size()) {
    throw InvalidInput("need one graph and one lambda per layer");
  }
  for (size_t i = 0; i < graphs->size(); ++i) {
    if ((*lambdas)[i] < 0.0) throw InvalidInput("lambda must be >= 0");
    if ((*lambdas)[i] > 0.0 && (*graphs)[i].n() != model.samples()) {
      throw ShapeError("graph node count does not match sample count");
    }
  }
}

// Forward pass for the nested model. activations[i] is the implicit feature
// matrix of layer i+1 (activations[m-1] == h_top); preacts[i] = Z_{i+1} *
// activations[i+1] for i < m-1, cached for the backward pass.
struct Forward {
  std::vector<Matrix> activations;
  std::vector<Matrix> preacts;
  Matrix xhat;
};

Forward forward_pass(const std::vector<Matrix>& z, const Matrix& h_top,
                     const Nonlinearity& g) {
  const size_t m = z.size();
  Forward f;
  f.activations.resize(m);
  f.preacts.resize(m);
  f.activations[m - 1] = h_top;
  for (size_t i = m - 1; i >= 1; --i) {
    f.preacts[i] = z[i] * f.activations[i];
    f.activations[i - 1] = g.fwd(f.preacts[i]);
  }
  f.xhat = z[0] * f.activations[0];
  return f;
}

double nested_cost(const Matrix& x, const std::vector<Matrix>& z,
                   const Matrix& h_top, const Nonlinearity& g,
                   const std::vector<AttributeGraph>* graphs,
                   const std::vector<double>* lambdas) {
  Matrix a = h_top;
  double smooth = 0.0;
  auto add_smooth = [&](size_t layer, const Matrix& feats) {
    if (graphs != nullptr && (*lambdas)[layer] > 0.0) {
      smooth += 0.5 * (*lambdas)[layer] * smoothness(feats, (*graphs)[layer]);
    }
  };
  add_smooth(z.size() - 1, a);
  for (size_t i = z.size() - 1; i >= 1; --i) {
    a = g.fwd(z[i] * a);
    add_smooth(i - 1, a);
  }
  return 0.5 * (x - z[0] * a).squaredNorm() + smooth;
}

DeepGradients nested_gradients(const Matrix& x, const std::vector<Matrix>& z,
                               const Matrix& h_top, const Nonlinearity& g,
                               const std::vector<AttributeGraph>* graphs,
                               const std::vector<double>* lambdas) {
  const size_t m = z.size();
  Forward f = forward_pass(z, h_top, g);
  DeepGradients grads;
  grads.z.resize(m);

  const Matrix residual = f.xhat - x;
  grads.z[0] = residual * f.activations[0].transpose();

  // G = dC/dA_i, walking from the outermost layer inward.
  Matrix gr = z[0].transpose() * residual;
  if (graphs != nullptr && (*lambdas)[0] > 0.0) {
    gr += (*lambdas)[0] * (f.activations[0] * (*graphs)[0].l);
  }
  for (size_t i = 1; i < m; ++i) {
    const Matrix d = gr.cwiseProduct(g.grad(f.preacts[i]));
    grads.z[i] = d * f.activations[i].transpose();
    gr = z[i].transpose() * d;
    if (graphs != nullptr && (*lambdas)[i] > 0.0) {
      gr += (*lambdas)[i] * (f.activations[i] * (*graphs)[i].l);
    }
  }
  grads.h_top = gr;
  return grads;
}

LayerTerms layer_terms_from(const std::vector<AttributeGraph>& graphs,
                            const std::vector<double>& lambdas) {
  LayerTerms terms(graphs.size());
  for (size_t i = 0; i < graphs.size(); ++i) {
    terms[i].push_back(GraphTerm{lambdas[i], &graphs[i]});
  }
  return terms;
}

}  // namespace

DeepModel pretrain(const Matrix& x, const std::vector<Index>& layer_sizes,
                   const TrainConfig& cfg, Nonlinearity g) {
  if (layer_sizes.empty()) throw InvalidInput("pretrain: no layer sizes");
  for (size_t i = 1; i < layer_sizes.size(); ++i) {
    if (layer_sizes[i] > layer_sizes[i - 1]) {
      std::cerr << "dmf: warning: layer sizes are not decreasing\n";
      break;
    }
  }
  DeepModel model;
  model.g = g;
  const Matrix* input = &x;
  for (Index k : layer_sizes) {
    if (k > input->rows()) {
      throw InvalidInput("pretrain: layer width " + std::to_string(k) +
                         " exceeds its input's row count " +
                         std::to_string(input->rows()));
    }
    auto [factors, report] = semi_nmf(*input, k, cfg);
    model.z.push_back(std::move(factors.z));
    model.h.push_back(std::move(factors.h));
    input = &model.h.back();
  }
  return model;
}

double deep_cost(const DeepModel& model, const Matrix& x) {
  if (model.z.empty() || x.rows() != model.features() ||
      x.cols() != model.samples()) {
    throw ShapeError("deep_cost: data shape does not match the model");
  }
  if (model.g.is_identity()) {
    return detail::linear_reconstruction_cost(x, model.z, model.h);
  }
  return nested_cost(x, model.z, model.h.back(), model.g, nullptr, nullptr);
}

std::pair<DeepModel, TrainReport> finetune_linear(DeepModel model,
                                                  const Matrix& x,
                                                  const TrainConfig& cfg) {
  model.validate();
  if (!model.g.is_identity()) {
    throw InvalidInput(
        "finetune_linear requires the identity nonlinearity; use "
        "finetune_nonlinear");
  }
  TrainReport report = detail::run_linear(x, model.z, model.h, cfg, {});
  return {std::move(model), std::move(report)};
}

DeepGradients grad_deep(const DeepModel& model, const Matrix& x,
                        const std::vector<AttributeGraph>* graphs,
                        const std::vector<double>* lambdas) {
  if (model.z.empty() || x.rows() != model.features() ||
      x.cols() != model.samples()) {
    throw ShapeError("grad_deep: data shape does not match the model");
  }
  check_graphs(model, graphs, lambdas);
  return nested_gradients(x, model.z, model.h.back(), model.g, graphs,
                          lambdas);
}

std::pair<DeepModel, TrainReport> finetune_nonlinear(
    DeepModel model, const Matrix& x, const TrainConfig& cfg,
    const std::vector<AttributeGraph>* graphs,
    const std::vector<double>* lambdas) {
  model.validate();
  cfg.validate();
  if (x.rows() != model.features() || x.cols() != model.samples()) {
    throw ShapeError("finetune_nonlinear: data shape does not match model");
  }
  check_graphs(model, graphs, lambdas);

  struct State {
    std::vector<Matrix> z;
    Matrix h_top;
  };
  auto cost = [&](const State& s) {
    return nested_cost(x, s.z, s.h_top, model.g, graphs, lambdas);
  };
  auto finite = [](const State& s) {
    for (const Matrix& zi : s.z) {
      if (!zi.allFinite()) return false;
    }
    return s.h_top.allFinite();
  };

  State theta{model.z, model.h.back()};
  State lookahead = theta;  // gradient evaluation point
  double momentum = 1.0;
  double step = cfg.step;
  int bad_streak = 0;

  TrainReport report;
  double e_prev = cost(theta);
  report.objective_trace.push_back(e_prev);

  for (int it = 1; it <= cfg.max_iters; ++it) {
    bool at_theta = false;
    const double step_at_entry = step;
    State cand;
    double e_cand = 0.0;
    for (;;) {
      DeepGradients grads = nested_gradients(x, lookahead.z, lookahead.h_top,
                                             model.g, graphs, lambdas);
      bool accepted = false;
      for (int bt = 0; bt <= 40; ++bt) {
        cand.z.resize(lookahead.z.size());
        for (size_t i = 0; i < lookahead.z.size(); ++i) {
          cand.z[i] = lookahead.z[i] - step * grads.z[i];
        }
        cand.h_top = (lookahead.h_top - step * grads.h_top).cwiseMax(0.0);
        e_cand = cost(cand);
        if (std::isfinite(e_cand) && e_cand <= e_prev) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (accepted || at_theta) break;
      // Momentum made the lookahead point unusable; restart from theta.
      lookahead = theta;
      momentum = 1.0;
      step = step_at_entry;
      at_theta = true;
    }
    if (!finite(cand) || !std::isfinite(e_cand)) {
      throw NumericError("non-finite values at iteration " +
                         std::to_string(it));
    }

    const double slack = cfg.kappa * std::max(1.0, e_prev);
    const double progress = e_prev - e_cand;
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    const double gamma = (momentum - 1.0) / t_next;
    lookahead.z.resize(cand.z.size());
    for (size_t i = 0; i < cand.z.size(); ++i) {
      lookahead.z[i] = cand.z[i] + gamma * (cand.z[i] - theta.z[i]);
    }
    lookahead.h_top = cand.h_top + gamma * (cand.h_top - theta.h_top);
    momentum = t_next;
    theta = cand;
    step = std::min(step * 1.2, cfg.step * 100.0);

    report.objective_trace.push_back(e_cand);
    report.iterations = it;
    if (progress > slack) {
      bad_streak = 0;
    } else if (-progress <= slack) {
      report.converged = true;
      break;
    } else if (++bad_streak >= 50) {
      throw NumericError(
          "objective increased for 50 consecutive steps; use a smaller step "
          "size");
    }
    e_prev = e_cand;
  }

  model.z = std::move(theta.z);
  Forward f = forward_pass(model.z, theta.h_top, model.g);
  for (size_t i = 0; i < model.z.size(); ++i) {
    model.h[i] = std::move(f.activations[i]);
  }
  return {std::move(model), std::move(report)};
}

std::pair<DeepModel, TrainReport> train_deep_wsf(
    const Matrix& x, const std::vector<Index>& layer_sizes,
    const std::vector<AttributeGraph>& graphs,
    const std::vector<double>& lambdas, const TrainConfig& cfg,
    Nonlinearity g) {
  if (layer_sizes.empty() || layer_sizes.size() != graphs.size() ||
      graphs.size() != lambdas.size()) {
    throw InvalidInput(
        "train_deep_wsf: need one graph and one lambda per layer");
  }

  // Greedy weakly-supervised pretraining, one graph per layer.
  DeepModel model;
  model.g = g;
  const Matrix* input = &x;
  for (size_t i = 0; i < layer_sizes.size(); ++i) {
    if (layer_sizes[i] > input->rows()) {
      throw InvalidInput("train_deep_wsf: layer width " +
                         std::to_string(layer_sizes[i]) +
                         " exceeds its input's row count " +
                         std::to_string(input->rows()));
    }
    auto [factors, report] =
        wsf(*input, layer_sizes[i], graphs[i], lambdas[i], cfg);
    model.z.push_back(std::move(factors.z));
    model.h.push_back(std::move(factors.h));
    input = &model.h.back();
  }

  if (g.is_identity()) {
    TrainReport report = detail::run_linear(x, model.z, model.h, cfg,
                                            layer_terms_from(graphs, lambdas));
    return {std::move(model), std::move(report)};
  }
  return finetune_nonlinear(std::move(model), x, cfg, &graphs, &lambdas);
}

DeepModel transfer_init(const DeepModel& source, const Matrix& x_target) {
  if (source.z.empty()) throw InvalidInput("transfer_init: empty model");
  require_finite(x_target, "transfer_init");
  if (x_target.rows() != source.features()) {
    throw InvalidInput("transfer_init: target feature count " +
                       std::to_string(x_target.rows()) +
                       " does not match the model's " +
                       std::to_string(source.features()));
  }
  DeepModel model;
  model.z = source.z;
  model.g = source.g;
  model.h.resize(model.z.size());

  TrainConfig cfg;
  cfg.max_iters = 500;
  model.h.back() = project_batch(model, x_target, ProjectionMethod::kNls,
                                 model.layers(), cfg);
  for (size_t i = model.z.size() - 1; i >= 1; --i) {
    model.h[i - 1] = model.g.fwd(model.z[i] * model.h[i]).cwiseMax(0.0);
  }
  // Entries at zero (sparse projections, clipped reconstructions) would be
  // locked there by the multiplicative updates that typically follow.
  for (Matrix& h : model.h) {
    const double fill = 1e-4 * h.mean();
    if (fill > 0.0) h = (h.array() <= 0.0).select(fill, h);
  }
  model.validate();
  return model;
}

}  // namespace dmf
