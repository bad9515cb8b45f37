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

#include "dmf/numerics.hpp"

#include <Eigen/SVD>
#include <string>

namespace dmf {

namespace {

struct ThinSvd {
  Matrix u;        // rows x r
  Vector sigma;    // r
  Matrix v;        // cols x r
};

ThinSvd thin_svd(const Matrix& a) {
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw NumericError("SVD did not converge");
  }
  return ThinSvd{svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

void check_rank_range(const Matrix& x, Index k, const char* what) {
  const Index limit = std::min(x.rows(), x.cols());
  if (k < 1 || k > limit) {
    throw InvalidInput(std::string(what) + ": k = " + std::to_string(k) +
                       " out of range [1, " + std::to_string(limit) + "]");
  }
}

}  // namespace

SignSplit pos_neg_split(const Matrix& a) {
  require_finite(a, "pos_neg_split");
  // max(a, 0) equals (|a| + a)/2 for all finite doubles and cannot overflow.
  return SignSplit{a.cwiseMax(0.0), (-a).cwiseMax(0.0)};
}

Matrix pinv(const Matrix& a, double rcond) {
  require_finite(a, "pinv");
  if (rcond < 0.0) throw InvalidInput("pinv: rcond must be >= 0");
  if (a.rows() == 0 || a.cols() == 0) return Matrix::Zero(a.cols(), a.rows());
  ThinSvd svd = thin_svd(a);
  const double cutoff = rcond * svd.sigma(0);
  Vector inv_sigma = Vector::Zero(svd.sigma.size());
  for (Index i = 0; i < svd.sigma.size(); ++i) {
    if (svd.sigma(i) > cutoff && svd.sigma(i) > 0.0) {
      inv_sigma(i) = 1.0 / svd.sigma(i);
    }
  }
  return svd.v * inv_sigma.asDiagonal() * svd.u.transpose();
}

Matrix safe_div(const Matrix& num, const Matrix& den) {
  require_nonneg(num, "safe_div numerator");
  require_nonneg(den, "safe_div denominator");
  if (num.rows() != den.rows() || num.cols() != den.cols()) {
    throw ShapeError("safe_div: operand shapes differ");
  }
  return (num.array() / (den.array() + kDivEps)).matrix();
}

std::pair<Matrix, Matrix> nndsvd_init(const Matrix& x, Index k) {
  require_nonneg(x, "nndsvd_init");
  check_rank_range(x, k, "nndsvd_init");

  ThinSvd svd = thin_svd(x);
  Matrix z0 = Matrix::Zero(x.rows(), k);
  Matrix h0 = Matrix::Zero(k, x.cols());

  // Leading pair is entrywise one-signed up to a global sign; take |.|.
  const double s0 = std::sqrt(svd.sigma(0));
  z0.col(0) = s0 * svd.u.col(0).cwiseAbs();
  h0.row(0) = s0 * svd.v.col(0).cwiseAbs().transpose();

  for (Index j = 1; j < k; ++j) {
    Vector u = svd.u.col(j);
    Vector v = svd.v.col(j);
    Vector up = u.cwiseMax(0.0), un = (-u).cwiseMax(0.0);
    Vector vp = v.cwiseMax(0.0), vn = (-v).cwiseMax(0.0);
    const double mp = up.norm() * vp.norm();
    const double mn = un.norm() * vn.norm();
    Vector bu, bv;
    double m;
    if (mp >= mn) {
      bu = up;
      bv = vp;
      m = mp;
    } else {
      bu = un;
      bv = vn;
      m = mn;
    }
    if (m > 0.0) {
      const double lbd = std::sqrt(svd.sigma(j) * m);
      z0.col(j) = lbd * bu / bu.norm();
      h0.row(j) = (lbd * bv / bv.norm()).transpose();
    }
  }

  // Dense refill: zero entries would stay zero under multiplicative updates.
  const double fill = 1e-4 * x.mean();
  z0 = (z0.array() <= 0.0).select(fill, z0);
  h0 = (h0.array() <= 0.0).select(fill, h0);
  return {z0, h0};
}

std::pair<Matrix, Matrix> svd_seminmf_init(const Matrix& x, Index k) {
  require_finite(x, "svd_seminmf_init");
  check_rank_range(x, k, "svd_seminmf_init");

  ThinSvd svd = thin_svd(x);
  Matrix z0(x.rows(), k);
  Matrix h0(k, x.cols());
  for (Index j = 0; j < k; ++j) {
    Vector v = svd.v.col(j);
    Vector vp = v.cwiseMax(0.0);
    Vector vn = (-v).cwiseMax(0.0);
    // v and -v are both valid singular vectors; keep the section with more
    // mass and flip the basis column to match.
    double sign = 1.0;
    Vector section = vp;
    if (vn.norm() > vp.norm()) {
      sign = -1.0;
      section = vn;
    }
    // Unit root-mean-square rows keep the feature matrix at an O(1) entry
    // scale regardless of the sample count, so regularization weights mean
    // the same thing across dataset sizes; the basis absorbs the magnitude.
    const double rms = section.norm() / std::sqrt(static_cast<double>(x.cols()));
    if (rms > 0.0) section /= rms;
    z0.col(j) = sign * svd.sigma(j) * svd.u.col(j) /
                std::sqrt(static_cast<double>(x.cols()));
    h0.row(j) = section.transpose();
  }
  // Uniform mean shift: entries chopped to zero would otherwise be locked
  // there by the multiplicative updates, and a strictly positive start
  // escapes the truncated support far faster than a tiny refill.
  const double shift = h0.mean();
  if (shift > 0.0) h0.array() += shift;
  return {z0, h0};
}

}  // namespace dmf
