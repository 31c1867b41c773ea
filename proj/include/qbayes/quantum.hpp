// Copyright 2026 The qbayes Authors
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

#pragma once

// Finite-dimensional quantum probability. States are density matrices,
// predicates are effects 0 <= p <= I, and channels H -> K are completely
// positive maps B(K) -> B(H) stored in Heisenberg form as an m x m grid of
// n x n blocks c_{kl} = c(|k><l|).

#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qbayes/classical.hpp"
#include "qbayes/error.hpp"
#include "qbayes/matrix.hpp"

namespace qbayes::quantum {

namespace tol {
inline constexpr double kHermitian = 1e-9;
inline constexpr double kEigen = 1e-10;
inline constexpr double kTrace = 1e-9;
inline constexpr double kValidity = 1e-12;
inline constexpr double kImaginary = 1e-10;
inline constexpr double kUnital = 1e-9;
inline constexpr double kCompletelyPositive = 1e-8;
}  // namespace tol

namespace detail {

inline void check_operator(const CMatrix& mat, const DimList& dims, const char* what) {
  check_dims(dims);
  require_square(mat, what);
  require_finite(mat);
  if (static_cast<std::size_t>(mat.rows()) != flat_dim(dims))
    throw DimensionError(std::string(what) + ": matrix size " + std::to_string(mat.rows()) +
                         " does not match dims " + to_string(dims));
  if (!is_hermitian(mat, tol::kHermitian))
    throw ValidationError(std::string(what) + ": matrix is not Hermitian");
}

inline void require_same_dims(const DimList& a, const DimList& b, const char* what) {
  if (a != b)
    throw DimensionError(std::string(what) + ": dims " + to_string(a) + " and " + to_string(b) +
                         " differ");
}

}  // namespace detail

/// Why a matrix fails to be a state; empty when it is one.
inline std::string state_defect(const CMatrix& mat) {
  if (!is_hermitian(mat, tol::kHermitian)) return "not Hermitian";
  const double lo = min_eigenvalue(mat);
  if (lo < -tol::kEigen) return "negative eigenvalue " + std::to_string(lo);
  const double tr = mat.trace().real();
  if (std::abs(tr - 1.0) > tol::kTrace) return "trace " + std::to_string(tr);
  return {};
}

/// Why a matrix fails to be an effect; empty when it is one.
inline std::string effect_defect(const CMatrix& mat) {
  if (!is_hermitian(mat, tol::kHermitian)) return "not Hermitian";
  auto ev = eigenvalues(mat);
  if (ev.size() == 0) return {};
  if (ev(0) < -tol::kEigen) return "negative eigenvalue " + std::to_string(ev(0));
  if (ev(ev.size() - 1) > 1.0 + tol::kEigen)
    return "eigenvalue " + std::to_string(ev(ev.size() - 1)) + " above 1";
  return {};
}

/// Density matrix: Hermitian, positive, trace one.
class QState {
 public:
  QState(CMatrix mat, DimList dims) : mat_(std::move(mat)), dims_(std::move(dims)) {
    detail::check_operator(mat_, dims_, "QState");
    if (auto why = state_defect(mat_); !why.empty()) throw ValidationError("QState: " + why);
    mat_ = hermitian_part(mat_);
  }
  explicit QState(CMatrix mat) : QState(mat, DimList{static_cast<std::size_t>(mat.rows())}) {}

  const CMatrix& mat() const { return mat_; }
  const DimList& dims() const { return dims_; }
  std::size_t dim() const { return static_cast<std::size_t>(mat_.rows()); }

 private:
  CMatrix mat_;
  DimList dims_;
};

/// Effect (quantum predicate): Hermitian with spectrum in [0, 1].
class Effect {
 public:
  Effect(CMatrix mat, DimList dims) : mat_(std::move(mat)), dims_(std::move(dims)) {
    detail::check_operator(mat_, dims_, "Effect");
    if (auto why = effect_defect(mat_); !why.empty()) throw ValidationError("Effect: " + why);
    mat_ = hermitian_part(mat_);
  }
  explicit Effect(CMatrix mat) : Effect(mat, DimList{static_cast<std::size_t>(mat.rows())}) {}

  static Effect truth(const DimList& dims) { return Effect(identity(flat_dim(dims)), dims); }

  const CMatrix& mat() const { return mat_; }
  const DimList& dims() const { return dims_; }
  std::size_t dim() const { return static_cast<std::size_t>(mat_.rows()); }

 private:
  CMatrix mat_;
  DimList dims_;
};

/// Choi-type matrix sum_{kl} |k><l| (x) c_{kl}; PSD exactly when the map is
/// completely positive.
inline CMatrix choi_matrix(const std::vector<CMatrix>& blocks, std::size_t m, std::size_t n) {
  const auto mi = static_cast<Eigen::Index>(m), ni = static_cast<Eigen::Index>(n);
  CMatrix out(mi * ni, mi * ni);
  for (Eigen::Index k = 0; k < mi; ++k)
    for (Eigen::Index l = 0; l < mi; ++l)
      out.block(k * ni, l * ni, ni, ni) = blocks[static_cast<std::size_t>(k * mi + l)];
  return out;
}

/// Completely positive (sub)unital map H -> K in Heisenberg form.
class QChannel {
 public:
  /// Validates the Hermiticity pattern, subunitality and complete
  /// positivity of the blocks.
  QChannel(DimList in_dims, DimList out_dims, std::vector<CMatrix> blocks)
      : QChannel(std::move(in_dims), std::move(out_dims), std::move(blocks), true) {}

  /// Channel with Schroedinger-picture Kraus operators A_r : H -> K (each
  /// m x n), i.e. c(B) = sum_r A_r^dagger B A_r. Complete positivity holds by
  /// construction and is not re-checked.
  static QChannel from_kraus(const DimList& in_dims, const DimList& out_dims,
                             const std::vector<CMatrix>& kraus) {
    check_dims(in_dims);
    check_dims(out_dims);
    const std::size_t n = flat_dim(in_dims), m = flat_dim(out_dims);
    std::vector<CMatrix> blocks(m * m, CMatrix::Zero(static_cast<Eigen::Index>(n),
                                                     static_cast<Eigen::Index>(n)));
    for (const auto& a : kraus) {
      if (static_cast<std::size_t>(a.rows()) != m || static_cast<std::size_t>(a.cols()) != n)
        throw DimensionError("from_kraus: Kraus operator has wrong shape");
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l)
          blocks[k * m + l] += a.row(static_cast<Eigen::Index>(k)).adjoint() *
                               a.row(static_cast<Eigen::Index>(l));
    }
    return QChannel(in_dims, out_dims, std::move(blocks), false);
  }

  static QChannel identity(const DimList& dims) {
    const std::size_t n = flat_dim(dims);
    std::vector<CMatrix> blocks;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l) blocks.push_back(matrix_unit(n, k, l));
    return QChannel(dims, dims, std::move(blocks), false);
  }

  const DimList& in_dims() const { return in_dims_; }
  const DimList& out_dims() const { return out_dims_; }
  std::size_t in_dim() const { return flat_dim(in_dims_); }
  std::size_t out_dim() const { return flat_dim(out_dims_); }
  bool unital() const { return unital_; }
  const std::vector<CMatrix>& blocks() const { return blocks_; }
  const CMatrix& block(std::size_t k, std::size_t l) const { return blocks_.at(k * out_dim() + l); }

 private:
  QChannel(DimList in_dims, DimList out_dims, std::vector<CMatrix> blocks, bool check_cp)
      : in_dims_(std::move(in_dims)), out_dims_(std::move(out_dims)), blocks_(std::move(blocks)) {
    check_dims(in_dims_);
    check_dims(out_dims_);
    const std::size_t n = in_dim(), m = out_dim();
    if (blocks_.size() != m * m)
      throw DimensionError("QChannel: expected " + std::to_string(m * m) + " blocks");
    for (const auto& b : blocks_) {
      if (static_cast<std::size_t>(b.rows()) != n || static_cast<std::size_t>(b.cols()) != n)
        throw DimensionError("QChannel: block has wrong shape");
      require_finite(b);
    }
    double scale = 1.0;
    for (const auto& b : blocks_) scale = std::max(scale, b.cwiseAbs().maxCoeff());
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t l = k; l < m; ++l) {
        const double dev = (blocks_[l * m + k] - blocks_[k * m + l].adjoint()).cwiseAbs().maxCoeff();
        if (dev > tol::kHermitian * scale)
          throw ValidationError("QChannel: blocks violate c_lk = c_kl^dagger");
      }
    CMatrix unit = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < m; ++k) unit += blocks_[k * m + k];
    unital_ = (unit - qbayes::identity(n)).norm() < tol::kUnital;
    if (!unital_ && eigenvalues(unit).maxCoeff() > 1.0 + tol::kUnital)
      throw ValidationError("QChannel: c(I) is not below the identity");
    if (check_cp) {
      const double lo = min_eigenvalue(choi_matrix(blocks_, m, n));
      if (lo < -tol::kCompletelyPositive)
        throw ValidationError("QChannel: not completely positive (Choi eigenvalue " +
                              std::to_string(lo) + ")");
    }
  }

  DimList in_dims_;
  DimList out_dims_;
  std::vector<CMatrix> blocks_;
  bool unital_ = false;
};

/// Output of pushing a state through a possibly non-unital channel. The
/// trace is at most one; it is exactly one only for unital channels.
struct SubState {
  CMatrix mat;
  DimList dims;
  double trace = 0.0;
  bool subnormalized = false;

  QState normalized() const {
    if (!(trace > tol::kValidity)) throw ZeroValidityError("SubState: zero trace");
    return QState(mat / trace, dims);
  }
};

// ---------------------------------------------------------------------------
// Logic on states and effects.

/// Born rule: tr(sigma p).
inline double validity(const QState& sigma, const Effect& p) {
  detail::require_same_dims(sigma.dims(), p.dims(), "validity");
  const Complex v = sigma.mat().cwiseProduct(p.mat().transpose()).sum();
  if (std::abs(v.imag()) > tol::kImaginary)
    throw ValidationError("validity: imaginary part " + std::to_string(v.imag()));
  return std::clamp(v.real(), 0.0, 1.0);
}

/// I - p.
inline Effect orthosupplement(const Effect& p) {
  return Effect(identity(p.dim()) - p.mat(), p.dims());
}

/// p & q = sqrt(p) q sqrt(p).
inline Effect seq_conj(const Effect& p, const Effect& q) {
  detail::require_same_dims(p.dims(), q.dims(), "seq_conj");
  const CMatrix s = psd_sqrt(p.mat());
  return Effect(hermitian_part(s * q.mat() * s), p.dims());
}

/// Lower conditioning sigma|_p = sqrt(p) sigma sqrt(p) / (sigma |= p).
inline QState cond_lower(const QState& sigma, const Effect& p) {
  const double v = validity(sigma, p);
  if (!(v > tol::kValidity)) throw ZeroValidityError("cond_lower: validity " + std::to_string(v));
  const CMatrix s = psd_sqrt(p.mat());
  return QState(hermitian_part(s * sigma.mat() * s) / v, sigma.dims());
}

/// Upper conditioning sigma|^p = sqrt(sigma) p sqrt(sigma) / (sigma |= p).
inline QState cond_upper(const QState& sigma, const Effect& p) {
  const double v = validity(sigma, p);
  if (!(v > tol::kValidity)) throw ZeroValidityError("cond_upper: validity " + std::to_string(v));
  const CMatrix s = psd_sqrt(sigma.mat());
  return QState(hermitian_part(s * p.mat() * s) / v, sigma.dims());
}

/// Plain transpose in the computational basis.
inline QState transpose(const QState& s) { return QState(s.mat().transpose(), s.dims()); }
inline Effect transpose(const Effect& p) { return Effect(p.mat().transpose(), p.dims()); }

inline QState tensor(const QState& a, const QState& b) {
  DimList d = a.dims();
  d.insert(d.end(), b.dims().begin(), b.dims().end());
  return QState(kron(a.mat(), b.mat()), std::move(d));
}

inline Effect tensor(const Effect& a, const Effect& b) {
  DimList d = a.dims();
  d.insert(d.end(), b.dims().begin(), b.dims().end());
  return Effect(kron(a.mat(), b.mat()), std::move(d));
}

/// Partial trace over the components whose mask bit is 0.
inline QState marginal(const QState& tau, const Mask& mask) {
  check_mask(mask, tau.dims().size());
  DimList kept;
  for (std::size_t c = 0; c < mask.size(); ++c)
    if (mask[c]) kept.push_back(tau.dims()[c]);
  if (kept.empty()) throw DimensionError("marginal: mask keeps no component");
  return QState(partial_trace(tau.mat(), tau.dims(), mask), std::move(kept));
}

// ---------------------------------------------------------------------------
// Channels.

/// Subchannel asrt_p(A) = sqrt(p) A sqrt(p).
inline QChannel asrt(const Effect& p) {
  return QChannel::from_kraus(p.dims(), p.dims(), {psd_sqrt(p.mat())});
}

/// The Heisenberg map applied to an arbitrary m x m matrix:
/// c(B) = sum_{kl} B_{kl} c_{kl}.
inline CMatrix apply(const QChannel& c, const CMatrix& b) {
  const std::size_t m = c.out_dim(), n = c.in_dim();
  if (static_cast<std::size_t>(b.rows()) != m || static_cast<std::size_t>(b.cols()) != m)
    throw DimensionError("apply: operand does not match channel codomain");
  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t l = 0; l < m; ++l)
      out += b(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) * c.block(k, l);
  return out;
}

/// c << q.
inline Effect pred_transform(const QChannel& c, const Effect& q) {
  detail::require_same_dims(c.out_dims(), q.dims(), "pred_transform");
  return Effect(hermitian_part(apply(c, q.mat())), c.in_dims());
}

/// (c >> sigma)_{kl} = tr(c_{lk} sigma), without renormalization.
inline SubState push_forward(const QChannel& c, const QState& sigma) {
  detail::require_same_dims(c.in_dims(), sigma.dims(), "push_forward");
  const std::size_t m = c.out_dim();
  CMatrix out(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t l = 0; l < m; ++l)
      out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) =
          c.block(l, k).cwiseProduct(sigma.mat().transpose()).sum();
  out = hermitian_part(out);
  const double tr = out.trace().real();
  return {std::move(out), c.out_dims(), tr, !c.unital()};
}

/// c >> sigma for a unital channel. Subchannels must go through
/// push_forward, which reports the lost mass instead of hiding it.
inline QState state_transform(const QChannel& c, const QState& sigma) {
  if (!c.unital())
    throw ValidationError("state_transform: channel is not unital; use push_forward");
  auto out = push_forward(c, sigma);
  return QState(std::move(out.mat), std::move(out.dims));
}

/// d . c for c : H -> K and d : K -> L. Predicates pass through d first.
inline QChannel compose(const QChannel& d, const QChannel& c) {
  detail::require_same_dims(c.out_dims(), d.in_dims(), "compose");
  std::vector<CMatrix> blocks;
  blocks.reserve(d.blocks().size());
  for (const auto& b : d.blocks()) blocks.push_back(apply(c, b));
  return QChannel(c.in_dims(), d.out_dims(), std::move(blocks));
}

/// Parallel composition; (c1 (x) c2)_{(k1 k2)(l1 l2)} = c1_{k1 l1} (x) c2_{k2 l2}.
inline QChannel tensor(const QChannel& c1, const QChannel& c2) {
  const std::size_t m1 = c1.out_dim(), m2 = c2.out_dim();
  std::vector<CMatrix> blocks(m1 * m2 * m1 * m2);
  for (std::size_t k1 = 0; k1 < m1; ++k1)
    for (std::size_t k2 = 0; k2 < m2; ++k2)
      for (std::size_t l1 = 0; l1 < m1; ++l1)
        for (std::size_t l2 = 0; l2 < m2; ++l2)
          blocks[(k1 * m2 + k2) * (m1 * m2) + (l1 * m2 + l2)] =
              kron(c1.block(k1, l1), c2.block(k2, l2));
  DimList in = c1.in_dims(), out = c1.out_dims();
  in.insert(in.end(), c2.in_dims().begin(), c2.in_dims().end());
  out.insert(out.end(), c2.out_dims().begin(), c2.out_dims().end());
  return QChannel(std::move(in), std::move(out), std::move(blocks));
}

// ---------------------------------------------------------------------------
// Maximally entangled cup state and cap effect on C^n (x) C^n.

namespace detail {

/// sum_{i,j} |ii><jj|.
inline CMatrix cup_unnormalized(std::size_t n) {
  const auto nn = static_cast<Eigen::Index>(n * n);
  CMatrix m = CMatrix::Zero(nn, nn);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(static_cast<Eigen::Index>(i * n + i), static_cast<Eigen::Index>(j * n + j)) = 1.0;
  return m;
}

}  // namespace detail

inline QState cup(std::size_t n) {
  if (n < 1) throw DimensionError("cup: dimension must be positive");
  return QState(detail::cup_unnormalized(n) / static_cast<double>(n), DimList{n, n});
}

/// Rank-one projection (1/n) sum_{i,j} |ii><jj|.
inline Effect cap(std::size_t n) {
  if (n < 1) throw DimensionError("cap: dimension must be positive");
  return Effect(detail::cup_unnormalized(n) / static_cast<double>(n), DimList{n, n});
}

// ---------------------------------------------------------------------------
// Diagonal embedding of classical probability.

inline QState hat(const classical::Dist& omega) {
  return QState(diagonal(omega.probs()), omega.space().dims());
}

inline Effect hat(const classical::FuzzyPred& p) {
  return Effect(diagonal(p.values()), p.space().dims());
}

/// Blocks hat(c)_{kl} = delta_{kl} diag_i c(x_i)(y_k).
inline QChannel hat(const classical::StochChannel& c) {
  const std::size_t n = c.dom().size(), m = c.cod().size();
  std::vector<CMatrix> blocks(m * m, CMatrix::Zero(static_cast<Eigen::Index>(n),
                                                   static_cast<Eigen::Index>(n)));
  for (std::size_t k = 0; k < m; ++k) blocks[k * m + k] = diagonal(c.rows().col(static_cast<Eigen::Index>(k)));
  return QChannel(c.dom().dims(), c.cod().dims(), std::move(blocks));
}

}  // namespace qbayes::quantum
