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

#include "dmf/shallow.hpp"

#include <string>

#include "dmf/numerics.hpp"
#include "dmf/rng.hpp"
#include "update_rules.hpp"

namespace dmf {

namespace detail {

Matrix ls_basis_update(const Matrix& x, const Matrix& h) {
  return x * pinv(h);
}

Matrix seminmf_feature_update(const Matrix& b, const Matrix& x,
                              const Matrix& h, double eta,
                              const std::vector<GraphTerm>& terms) {
  const Matrix btx = b.transpose() * x;
  const Matrix btb = b.transpose() * b;
  SignSplit sx = pos_neg_split(btx);
  SignSplit sb = pos_neg_split(btb);
  Matrix num = sx.pos + sb.neg * h;
  Matrix den = sx.neg + sb.pos * h;
  for (const GraphTerm& t : terms) {
    if (t.lambda == 0.0) continue;
    num += t.lambda * (h * t.graph->w);
    den += t.lambda * (h * t.graph->d);
  }
  return h.cwiseProduct(safe_div(num, den).array().pow(eta).matrix());
}

double linear_reconstruction_cost(const Matrix& x,
                                  const std::vector<Matrix>& z,
                                  const std::vector<Matrix>& h) {
  Matrix a = h.back();
  for (size_t i = z.size() - 1; i >= 1; --i) a = z[i] * a;
  return 0.5 * (x - z[0] * a).squaredNorm();
}

double linear_objective(const Matrix& x, const std::vector<Matrix>& z,
                        const std::vector<Matrix>& h, const LayerTerms& terms) {
  double cost = linear_reconstruction_cost(x, z, h);
  for (size_t i = 0; i < terms.size(); ++i) {
    for (const GraphTerm& t : terms[i]) {
      if (t.lambda == 0.0) continue;
      cost += 0.5 * t.lambda * smoothness(h[i], *t.graph);
    }
  }
  return cost;
}

namespace {

const std::vector<GraphTerm> kNoTerms;

// Reconstruction of layer i's features from the layers above it:
// h[m-1] at the top, otherwise z[i+1] (z[i+2] (... h[m-1])).
Matrix reconstruction_above(const std::vector<Matrix>& z,
                            const std::vector<Matrix>& h, size_t i) {
  Matrix r = h.back();
  for (size_t j = z.size() - 1; j > i; --j) r = z[j] * r;
  return r;
}

void linear_sweep(const Matrix& x, std::vector<Matrix>& z,
                  std::vector<Matrix>& h, double eta,
                  const LayerTerms& terms) {
  const size_t m = z.size();
  for (size_t i = 0; i < m; ++i) {
    const Matrix ht = reconstruction_above(z, h, i);
    Matrix basis;
    if (i == 0) {
      z[0] = ls_basis_update(x, ht);
      basis = z[0];
    } else {
      Matrix psi = z[0];
      for (size_t j = 1; j < i; ++j) psi = psi * z[j];
      z[i] = pinv(psi) * x * pinv(ht);
      basis = psi * z[i];
    }
    const auto& layer_terms = i < terms.size() ? terms[i] : kNoTerms;
    h[i] = seminmf_feature_update(basis, x, h[i], eta, layer_terms);
  }
}

}  // namespace

TrainReport run_linear(const Matrix& x, std::vector<Matrix>& z,
                       std::vector<Matrix>& h, const TrainConfig& cfg,
                       const LayerTerms& terms) {
  cfg.validate();
  TrainReport report;
  double e_prev = linear_objective(x, z, h, terms);
  report.objective_trace.push_back(e_prev);
  for (int it = 1; it <= cfg.max_iters; ++it) {
    try {
      linear_sweep(x, z, h, cfg.eta, terms);
    } catch (const Error&) {
      // Mid-sweep overflow surfaces as an invalid-input complaint from the
      // split/division helpers; report it as the numeric failure it is.
      throw NumericError("non-finite factor values at iteration " +
                         std::to_string(it));
    }
    for (size_t i = 0; i < z.size(); ++i) {
      if (!z[i].allFinite() || !h[i].allFinite()) {
        throw NumericError("non-finite factor values at iteration " +
                           std::to_string(it));
      }
    }
    const double e = linear_objective(x, z, h, terms);
    report.objective_trace.push_back(e);
    report.iterations = it;
    if (kappa_stop(e_prev, e, cfg.kappa)) {
      report.converged = true;
      break;
    }
    e_prev = e;
  }
  return report;
}

std::pair<Matrix, Matrix> init_factors(const Matrix& x, Index k,
                                       const TrainConfig& cfg,
                                       bool nonneg_basis) {
  InitKind kind = cfg.init;
  if (kind == InitKind::kAuto) {
    kind = nonneg_basis ? InitKind::kNndsvd : InitKind::kSvdSemiNmf;
  }
  switch (kind) {
    case InitKind::kNndsvd:
      return nndsvd_init(x, k);
    case InitKind::kSvdSemiNmf:
      if (nonneg_basis) {
        throw InvalidInput(
            "svd_seminmf initialization yields a mixed-sign basis and cannot "
            "seed a nonnegative factorization");
      }
      return svd_seminmf_init(x, k);
    case InitKind::kRandom: {
      Rng rng(cfg.seed);
      Matrix z = rng.normal_matrix(x.rows(), k);
      if (nonneg_basis) z = z.cwiseAbs();
      Matrix h = rng.uniform_matrix(k, x.cols());
      return {z, h};
    }
    case InitKind::kAuto:
      break;
  }
  throw InvalidInput("unknown initialization kind");
}

}  // namespace detail

namespace {

void check_factor_rank(const Matrix& x, Index k, const char* what) {
  const Index limit = std::min(x.rows(), x.cols());
  if (k < 1 || k > limit) {
    throw InvalidInput(std::string(what) + ": k = " + std::to_string(k) +
                       " out of range [1, " + std::to_string(limit) + "]");
  }
}

// Shared driver for semi_nmf / wsf / wsf_ma: a one-layer run of the linear
// alternating machinery, so the zero-lambda reductions are exact.
std::pair<FactorPair, TrainReport> mixed_sign_train(
    const Matrix& x, Index k, const TrainConfig& cfg,
    const std::vector<detail::GraphTerm>& terms, const char* what) {
  require_finite(x, what);
  check_factor_rank(x, k, what);
  for (const auto& t : terms) {
    if (t.lambda < 0.0) throw InvalidInput("lambda must be >= 0");
    if (t.lambda > 0.0 && t.graph->n() != x.cols()) {
      throw ShapeError("graph node count does not match sample count");
    }
  }
  auto [z0, h0] = detail::init_factors(x, k, cfg, /*nonneg_basis=*/false);
  std::vector<Matrix> z{std::move(z0)};
  std::vector<Matrix> h{std::move(h0)};
  TrainReport report = detail::run_linear(x, z, h, cfg, {terms});
  return {FactorPair{std::move(z[0]), std::move(h[0])}, std::move(report)};
}

// Classical multiplicative NMF with an optional Laplacian penalty on H.
std::pair<FactorPair, TrainReport> nonneg_train(const Matrix& x, Index k,
                                                const TrainConfig& cfg,
                                                const AttributeGraph* graph,
                                                double lambda,
                                                const char* what) {
  require_nonneg(x, what);
  check_factor_rank(x, k, what);
  cfg.validate();
  if (lambda < 0.0) throw InvalidInput("lambda must be >= 0");
  if (lambda > 0.0 && graph->n() != x.cols()) {
    throw ShapeError("graph node count does not match sample count");
  }

  auto [z, h] = detail::init_factors(x, k, cfg, /*nonneg_basis=*/true);
  auto objective = [&](const Matrix& zc, const Matrix& hc) {
    double cost = 0.5 * (x - zc * hc).squaredNorm();
    if (lambda > 0.0) cost += 0.5 * lambda * smoothness(hc, *graph);
    return cost;
  };

  TrainReport report;
  double e_prev = objective(z, h);
  report.objective_trace.push_back(e_prev);
  for (int it = 1; it <= cfg.max_iters; ++it) {
    // Z <- Z .* (X H^T) / (Z H H^T)
    z = z.cwiseProduct(safe_div(x * h.transpose(), z * (h * h.transpose())));
    // H <- H .* (Z^T X + l H W) / (Z^T Z H + l H D)
    Matrix num = z.transpose() * x;
    Matrix den = (z.transpose() * z) * h;
    if (lambda > 0.0) {
      num += lambda * (h * graph->w);
      den += lambda * (h * graph->d);
    }
    h = h.cwiseProduct(safe_div(num, den));
    if (!z.allFinite() || !h.allFinite()) {
      throw NumericError("non-finite factor values at iteration " +
                         std::to_string(it));
    }
    const double e = objective(z, h);
    report.objective_trace.push_back(e);
    report.iterations = it;
    if (kappa_stop(e_prev, e, cfg.kappa)) {
      report.converged = true;
      break;
    }
    e_prev = e;
  }
  return {FactorPair{std::move(z), std::move(h)}, std::move(report)};
}

}  // namespace

std::pair<FactorPair, TrainReport> semi_nmf(const Matrix& x, Index k,
                                            const TrainConfig& cfg) {
  return mixed_sign_train(x, k, cfg, {}, "semi_nmf");
}

std::pair<FactorPair, TrainReport> nmf_mul(const Matrix& x, Index k,
                                           const TrainConfig& cfg) {
  return nonneg_train(x, k, cfg, nullptr, 0.0, "nmf_mul");
}

std::pair<FactorPair, TrainReport> gnmf(const Matrix& x, Index k,
                                        const AttributeGraph& graph,
                                        double lambda, const TrainConfig& cfg) {
  return nonneg_train(x, k, cfg, &graph, lambda, "gnmf");
}

std::pair<FactorPair, TrainReport> wsf(const Matrix& x, Index k,
                                       const AttributeGraph& graph,
                                       double lambda, const TrainConfig& cfg) {
  return mixed_sign_train(x, k, cfg, {{lambda, &graph}}, "wsf");
}

std::pair<FactorPair, TrainReport> wsf_ma(const Matrix& x, Index k,
                                          const std::vector<AttributeGraph>& graphs,
                                          const std::vector<double>& lambdas,
                                          const TrainConfig& cfg) {
  if (graphs.empty() || graphs.size() != lambdas.size()) {
    throw InvalidInput("wsf_ma: need one lambda per graph, at least one");
  }
  std::vector<detail::GraphTerm> terms;
  terms.reserve(graphs.size());
  for (size_t i = 0; i < graphs.size(); ++i) {
    terms.push_back({lambdas[i], &graphs[i]});
  }
  return mixed_sign_train(x, k, cfg, terms, "wsf_ma");
}

}  // namespace dmf
