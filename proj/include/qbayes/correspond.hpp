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

// Joint quantum states versus (state, channel) pairs: pairing, projection,
// extraction, and crossover inference on a joint state compared with
// inference through the extracted channel.
//
// All transposes are plain transposes in the computational basis, and the
// composite index (i, k) of H (x) K is i * dim(K) + k.

#include <cstddef>
#include <utility>
#include <vector>

#include "qbayes/error.hpp"
#include "qbayes/matrix.hpp"
#include "qbayes/quantum.hpp"

namespace qbayes::quantum {

/// A state on H (x) K with exactly two recorded components.
class JointQState {
 public:
  explicit JointQState(QState s) : state_(std::move(s)) {
    if (state_.dims().size() != 2)
      throw DimensionError("JointQState: expected dims [n, m], got " + to_string(state_.dims()));
  }

  const QState& state() const { return state_; }
  const CMatrix& mat() const { return state_.mat(); }
  std::size_t n() const { return state_.dims()[0]; }
  std::size_t m() const { return state_.dims()[1]; }

  /// <ik| tau |jl>.
  Complex at(std::size_t i, std::size_t k, std::size_t j, std::size_t l) const {
    return state_.mat()(static_cast<Eigen::Index>(i * m() + k), static_cast<Eigen::Index>(j * m() + l));
  }

 private:
  QState state_;
};

namespace detail {

inline void require_unital(const QChannel& c, const char* what) {
  if (!c.unital()) throw ValidationError(std::string(what) + ": channel must be unital");
}

}  // namespace detail

/// <ik| pair(sigma, c) |jl> = conj((sqrt(sigma) c_{kl} sqrt(sigma))_{ij}).
inline JointQState pair(const QState& sigma, const QChannel& c) {
  if (sigma.dim() != c.in_dim()) throw DimensionError("pair: state and channel domain differ");
  detail::require_unital(c, "pair");
  const std::size_t n = c.in_dim(), m = c.out_dim();
  const CMatrix s = psd_sqrt(sigma.mat());
  CMatrix out(static_cast<Eigen::Index>(n * m), static_cast<Eigen::Index>(n * m));
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t l = 0; l < m; ++l) {
      const CMatrix b = (s * c.block(k, l) * s).conjugate();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          out(static_cast<Eigen::Index>(i * m + k), static_cast<Eigen::Index>(j * m + l)) =
              b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  return JointQState(QState(std::move(out), DimList{n, m}));
}

/// The same joint state built abstractly, as (asrt_{sigma^T} (x) c) >> cup.
/// The normalized cup only gives trace 1/n here, so the result is rescaled
/// by n (equivalently, the unnormalized cup sum_{ij} |ii><jj| is used).
inline JointQState pair_via_cup(const QState& sigma, const QChannel& c) {
  if (sigma.dim() != c.in_dim()) throw DimensionError("pair: state and channel domain differ");
  detail::require_unital(c, "pair_via_cup");
  const std::size_t n = c.in_dim(), m = c.out_dim();
  const Effect sigma_t(sigma.mat().transpose(), DimList{n});
  DimList cup_dims{n};
  cup_dims.insert(cup_dims.end(), c.in_dims().begin(), c.in_dims().end());
  const QState entangled(cup(n).mat(), cup_dims);
  auto out = push_forward(tensor(asrt(sigma_t), c), entangled);
  return JointQState(QState(static_cast<double>(n) * out.mat, DimList{n, m}));
}

/// proj(tau) = M1(tau)^T.
inline QState proj(const JointQState& tau) {
  return transpose(QState(partial_trace(tau.mat(), tau.state().dims(), {1, 0}), DimList{tau.n()}));
}

inline QState first_marginal(const JointQState& tau) { return marginal(tau.state(), {1, 0}); }
inline QState second_marginal(const JointQState& tau) { return marginal(tau.state(), {0, 1}); }

/// extr(tau)_{kl} = sum_{ij} conj(<ik|tau|jl>) T |i><j| T with
/// T = proj(tau)^{-1/2}. Requires proj(tau) invertible.
inline QChannel extract(const JointQState& tau) {
  const std::size_t n = tau.n(), m = tau.m();
  CMatrix t;
  try {
    t = psd_inv_sqrt(proj(tau).mat());
  } catch (const SingularError& e) {
    throw SingularError(std::string("extract: marginal proj(tau) is not invertible; ") + e.what());
  }
  std::vector<CMatrix> blocks;
  blocks.reserve(m * m);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t l = 0; l < m; ++l) {
      CMatrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::conj(tau.at(i, k, j, l));
      blocks.push_back(t * x * t);
    }
  return QChannel(DimList{n}, DimList{m}, std::move(blocks));
}

struct Recovery {
  QState state;      // proj(tau)
  QChannel channel;  // extr(tau)
  QState second;     // extr(tau) >> proj(tau), equal to M2(tau)
};

inline Recovery recover(const JointQState& tau) {
  QState p = proj(tau);
  QChannel c = extract(tau);
  QState second = state_transform(c, p);
  return {std::move(p), std::move(c), std::move(second)};
}

// ---------------------------------------------------------------------------
// Crossover inference on the joint state versus inference via the channel.

/// M2(tau|_{p (x) 1}).
inline QState crossover_second(const JointQState& tau, const Effect& p) {
  if (p.dim() != tau.n()) throw DimensionError("crossover_second: predicate not on H");
  const Effect lifted(kron(p.mat(), identity(tau.m())), tau.state().dims());
  return marginal(cond_lower(tau.state(), lifted), {0, 1});
}

/// extr(tau) >> (proj(tau)|^{p^T}).
inline QState inference_forward(const JointQState& tau, const Effect& p) {
  if (p.dim() != tau.n()) throw DimensionError("inference_forward: predicate not on H");
  const Effect pt(p.mat().transpose(), DimList{tau.n()});
  return state_transform(extract(tau), cond_upper(proj(tau), pt));
}

/// M1(tau|_{1 (x) q}).
inline QState crossover_first(const JointQState& tau, const Effect& q) {
  if (q.dim() != tau.m()) throw DimensionError("crossover_first: predicate not on K");
  const Effect lifted(kron(identity(tau.n()), q.mat()), tau.state().dims());
  return marginal(cond_lower(tau.state(), lifted), {1, 0});
}

/// (proj(tau)|^{extr(tau) << q})^T.
inline QState inference_backward(const JointQState& tau, const Effect& q) {
  if (q.dim() != tau.m()) throw DimensionError("inference_backward: predicate not on K");
  const Effect qk(q.mat(), DimList{tau.m()});
  return transpose(cond_upper(proj(tau), pred_transform(extract(tau), qk)));
}

}  // namespace qbayes::quantum
