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

// Discrete classical probability: distributions, fuzzy predicates and
// stochastic channels over finite (product) sample spaces.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <initializer_list>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qbayes/error.hpp"
#include "qbayes/matrix.hpp"

namespace qbayes::classical {

using RMatrix = Eigen::MatrixXd;

namespace tol {
inline constexpr double kClip = 1e-12;
inline constexpr double kNormalization = 1e-9;
inline constexpr double kValidity = 1e-12;
inline constexpr double kSupport = 1e-12;
}  // namespace tol

/// Finite sample space with ordered, distinct labels.
class FinSet {
 public:
  FinSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw ValidationError("FinSet must be non-empty");
    std::set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size()) throw ValidationError("FinSet labels must be distinct");
  }
  FinSet(std::initializer_list<std::string> labels) : FinSet(std::vector<std::string>(labels)) {}

  /// {"t", "f"}.
  static FinSet boolean() { return FinSet{"t", "f"}; }

  /// {"<prefix>0", ..., "<prefix>(n-1)"}.
  static FinSet range(std::size_t n, const std::string& prefix = "x") {
    std::vector<std::string> l;
    for (std::size_t i = 0; i < n; ++i) l.push_back(prefix + std::to_string(i));
    return FinSet(std::move(l));
  }

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

  std::size_t index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return i;
    throw DimensionError("label '" + label + "' not in sample space");
  }

  friend bool operator==(const FinSet&, const FinSet&) = default;

 private:
  std::vector<std::string> labels_;
};

/// Product of finite sets, flattened row-major (last component fastest).
class Space {
 public:
  Space(FinSet single) : components_{std::move(single)} {}
  Space(std::vector<FinSet> components) : components_(std::move(components)) {
    if (components_.empty()) throw ValidationError("Space needs at least one component");
  }

  std::size_t arity() const { return components_.size(); }
  const FinSet& component(std::size_t i) const { return components_.at(i); }
  const std::vector<FinSet>& components() const { return components_; }

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& c : components_) n *= c.size();
    return n;
  }

  DimList dims() const {
    DimList d;
    for (const auto& c : components_) d.push_back(c.size());
    return d;
  }

  std::vector<std::string> label_tuple(std::size_t flat) const {
    std::vector<std::string> out(components_.size());
    for (std::size_t c = components_.size(); c-- > 0;) {
      out[c] = components_[c].label(flat % components_[c].size());
      flat /= components_[c].size();
    }
    return out;
  }

  std::size_t index_of(const std::vector<std::string>& tuple) const {
    if (tuple.size() != components_.size())
      throw DimensionError("label tuple has wrong arity for space");
    std::size_t flat = 0;
    for (std::size_t c = 0; c < components_.size(); ++c)
      flat = flat * components_[c].size() + components_[c].index_of(tuple[c]);
    return flat;
  }

  /// Components of `a` followed by components of `b`.
  static Space product(const Space& a, const Space& b) {
    auto comps = a.components_;
    comps.insert(comps.end(), b.components_.begin(), b.components_.end());
    return Space(std::move(comps));
  }

  Space sub(const Mask& mask) const {
    check_mask(mask, components_.size());
    std::vector<FinSet> kept;
    for (std::size_t c = 0; c < components_.size(); ++c)
      if (mask[c]) kept.push_back(components_[c]);
    if (kept.empty()) throw DimensionError("mask keeps no component");
    return Space(std::move(kept));
  }

  friend bool operator==(const Space&, const Space&) = default;

 private:
  std::vector<FinSet> components_;
};

namespace detail {

inline void clip_small_negatives(RVector& v, const char* what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v(i))) throw ValidationError(std::string(what) + ": non-finite entry");
    if (v(i) < -tol::kClip) throw ValidationError(std::string(what) + ": negative entry");
    if (v(i) < 0.0) v(i) = 0.0;
  }
}

inline void require_same(const Space& a, const Space& b, const char* what) {
  if (!(a == b)) throw DimensionError(std::string(what) + ": sample spaces differ");
}

}  // namespace detail

/// Finite discrete probability distribution (a classical state).
class Dist {
 public:
  Dist(Space space, RVector probs) : space_(std::move(space)), probs_(std::move(probs)) {
    if (static_cast<std::size_t>(probs_.size()) != space_.size())
      throw DimensionError("Dist: probability count does not match space size");
    detail::clip_small_negatives(probs_, "Dist");
    if (std::abs(probs_.sum() - 1.0) > tol::kNormalization)
      throw ValidationError("Dist: probabilities sum to " + std::to_string(probs_.sum()));
  }
  Dist(Space space, std::initializer_list<double> probs)
      : Dist(std::move(space), Eigen::Map<const RVector>(probs.begin(),
                                                         static_cast<Eigen::Index>(probs.size()))) {}

  static Dist uniform(const Space& space) {
    return Dist(space, RVector::Constant(static_cast<Eigen::Index>(space.size()),
                                         1.0 / static_cast<double>(space.size())));
  }

  static Dist point(const Space& space, std::size_t flat) {
    RVector v = RVector::Zero(static_cast<Eigen::Index>(space.size()));
    v(static_cast<Eigen::Index>(flat)) = 1.0;
    return Dist(space, std::move(v));
  }

  const Space& space() const { return space_; }
  const RVector& probs() const { return probs_; }
  std::size_t size() const { return space_.size(); }
  double operator[](std::size_t flat) const { return probs_(static_cast<Eigen::Index>(flat)); }
  double prob(const std::vector<std::string>& tuple) const { return (*this)[space_.index_of(tuple)]; }

 private:
  Space space_;
  RVector probs_;
};

/// [0,1]-valued function on a sample space.
class FuzzyPred {
 public:
  FuzzyPred(Space space, RVector values) : space_(std::move(space)), values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.size()) != space_.size())
      throw DimensionError("FuzzyPred: value count does not match space size");
    for (Eigen::Index i = 0; i < values_.size(); ++i) {
      double& v = values_(i);
      if (!std::isfinite(v) || v < -tol::kClip || v > 1.0 + tol::kClip)
        throw ValidationError("FuzzyPred: value outside [0,1]");
      v = std::clamp(v, 0.0, 1.0);
    }
  }
  FuzzyPred(Space space, std::initializer_list<double> values)
      : FuzzyPred(std::move(space), Eigen::Map<const RVector>(values.begin(),
                                                              static_cast<Eigen::Index>(values.size()))) {}

  static FuzzyPred truth(const Space& space) {
    return FuzzyPred(space, RVector::Ones(static_cast<Eigen::Index>(space.size())));
  }

  /// Sharp predicate that is 1 exactly at `flat`.
  static FuzzyPred point(const Space& space, std::size_t flat) {
    RVector v = RVector::Zero(static_cast<Eigen::Index>(space.size()));
    v(static_cast<Eigen::Index>(flat)) = 1.0;
    return FuzzyPred(space, std::move(v));
  }

  const Space& space() const { return space_; }
  const RVector& values() const { return values_; }
  double operator[](std::size_t flat) const { return values_(static_cast<Eigen::Index>(flat)); }

 private:
  Space space_;
  RVector values_;
};

/// Channel X -> D(Y) stored as a row-stochastic matrix, one row per x.
class StochChannel {
 public:
  StochChannel(Space dom, Space cod, RMatrix rows)
      : dom_(std::move(dom)), cod_(std::move(cod)), rows_(std::move(rows)) {
    if (static_cast<std::size_t>(rows_.rows()) != dom_.size() ||
        static_cast<std::size_t>(rows_.cols()) != cod_.size())
      throw DimensionError("StochChannel: matrix shape does not match spaces");
    for (Eigen::Index x = 0; x < rows_.rows(); ++x) {
      RVector row = rows_.row(x).transpose();
      detail::clip_small_negatives(row, "StochChannel");
      if (std::abs(row.sum() - 1.0) > tol::kNormalization)
        throw ValidationError("StochChannel: row " + std::to_string(x) + " sums to " +
                              std::to_string(row.sum()));
      rows_.row(x) = row.transpose();
    }
  }

  static StochChannel identity(const Space& space) {
    const auto n = static_cast<Eigen::Index>(space.size());
    return StochChannel(space, space, RMatrix::Identity(n, n));
  }

  /// x |-> rho for every x.
  static StochChannel constant(const Space& dom, const Dist& rho) {
    RMatrix m(static_cast<Eigen::Index>(dom.size()), static_cast<Eigen::Index>(rho.size()));
    for (Eigen::Index x = 0; x < m.rows(); ++x) m.row(x) = rho.probs().transpose();
    return StochChannel(dom, rho.space(), std::move(m));
  }

  /// Copier x |-> 1|x,...,x> with `copies` outputs.
  static StochChannel copy(const FinSet& set, std::size_t copies) {
    std::vector<FinSet> comps(copies, set);
    Space cod(comps);
    RMatrix m = RMatrix::Zero(static_cast<Eigen::Index>(set.size()),
                              static_cast<Eigen::Index>(cod.size()));
    for (std::size_t x = 0; x < set.size(); ++x) {
      std::size_t flat = 0;
      for (std::size_t c = 0; c < copies; ++c) flat = flat * set.size() + x;
      m(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(flat)) = 1.0;
    }
    return StochChannel(Space(set), std::move(cod), std::move(m));
  }

  const Space& dom() const { return dom_; }
  const Space& cod() const { return cod_; }
  const RMatrix& rows() const { return rows_; }
  double operator()(std::size_t x, std::size_t y) const {
    return rows_(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
  }
  Dist row(std::size_t x) const {
    return Dist(cod_, RVector(rows_.row(static_cast<Eigen::Index>(x)).transpose()));
  }

 private:
  Space dom_;
  Space cod_;
  RMatrix rows_;
};

// ---------------------------------------------------------------------------
// Validity and conditioning.

/// omega |= p, the expected value of p.
inline double validity(const Dist& omega, const FuzzyPred& p) {
  detail::require_same(omega.space(), p.space(), "validity");
  return omega.probs().dot(p.values());
}

/// omega|_p, the update of omega with evidence p.
inline Dist condition(const Dist& omega, const FuzzyPred& p) {
  const double v = validity(omega, p);
  if (!(v > tol::kValidity)) throw ZeroValidityError("condition: validity " + std::to_string(v));
  return Dist(omega.space(), RVector(omega.probs().cwiseProduct(p.values()) / v));
}

/// Pointwise product p & q.
inline FuzzyPred seq_conj(const FuzzyPred& p, const FuzzyPred& q) {
  detail::require_same(p.space(), q.space(), "seq_conj");
  return FuzzyPred(p.space(), RVector(p.values().cwiseProduct(q.values())));
}

namespace detail {

inline RVector kron(const RVector& a, const RVector& b) {
  RVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline RMatrix kron(const RMatrix& a, const RMatrix& b) {
  RMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace detail

inline Dist tensor(const Dist& a, const Dist& b) {
  return Dist(Space::product(a.space(), b.space()), detail::kron(a.probs(), b.probs()));
}

inline FuzzyPred tensor(const FuzzyPred& a, const FuzzyPred& b) {
  return FuzzyPred(Space::product(a.space(), b.space()), detail::kron(a.values(), b.values()));
}

inline StochChannel tensor(const StochChannel& a, const StochChannel& b) {
  return StochChannel(Space::product(a.dom(), b.dom()), Space::product(a.cod(), b.cod()),
                      detail::kron(a.rows(), b.rows()));
}

// ---------------------------------------------------------------------------
// Transformations along channels.

/// (c >> omega)(y) = sum_x omega(x) c(x)(y).
inline Dist state_transform(const StochChannel& c, const Dist& omega) {
  detail::require_same(c.dom(), omega.space(), "state_transform");
  return Dist(c.cod(), RVector(c.rows().transpose() * omega.probs()));
}

/// (c << q)(x) = sum_y c(x)(y) q(y).
inline FuzzyPred pred_transform(const StochChannel& c, const FuzzyPred& q) {
  detail::require_same(c.cod(), q.space(), "pred_transform");
  return FuzzyPred(c.dom(), RVector(c.rows() * q.values()));
}

/// d . c, first c then d.
inline StochChannel compose(const StochChannel& d, const StochChannel& c) {
  detail::require_same(c.cod(), d.dom(), "compose");
  return StochChannel(c.dom(), d.cod(), c.rows() * d.rows());
}

/// Joint state pair(omega, c)(x, y) = omega(x) c(x)(y).
inline Dist pair(const Dist& omega, const StochChannel& c) {
  detail::require_same(c.dom(), omega.space(), "pair");
  RMatrix joint = omega.probs().asDiagonal() * c.rows();
  // row-major flattening of the (x, y) grid
  RVector flat(joint.size());
  for (Eigen::Index x = 0; x < joint.rows(); ++x)
    flat.segment(x * joint.cols(), joint.cols()) = joint.row(x).transpose();
  return Dist(Space::product(c.dom(), c.cod()), std::move(flat));
}

/// Sums out components whose mask bit is 0.
inline Dist marginal(const Dist& tau, const Mask& mask) {
  const Space& sp = tau.space();
  Space kept = sp.sub(mask);
  const DimList dims = sp.dims();
  RVector out = RVector::Zero(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t flat = 0; flat < sp.size(); ++flat) {
    auto idx = qbayes::detail::unflatten(flat, dims);
    std::size_t k = 0;
    for (std::size_t c = 0; c < dims.size(); ++c)
      if (mask[c]) k = k * dims[c] + idx[c];
    out(static_cast<Eigen::Index>(k)) += tau[flat];
  }
  return Dist(std::move(kept), std::move(out));
}

namespace detail {

/// Splits a joint space into its first component and the remainder.
inline std::pair<Space, Space> split_first(const Space& sp) {
  if (sp.arity() < 2) throw DimensionError("joint state needs at least two components");
  std::vector<FinSet> rest(sp.components().begin() + 1, sp.components().end());
  return {Space(sp.component(0)), Space(std::move(rest))};
}

}  // namespace detail

/// Disintegration: the channel c with pair(M1(tau), c) = tau. The first
/// component is the domain; all remaining components form the codomain.
inline StochChannel extract(const Dist& tau) {
  auto [dom, cod] = detail::split_first(tau.space());
  const auto nx = static_cast<Eigen::Index>(dom.size());
  const auto ny = static_cast<Eigen::Index>(cod.size());
  RMatrix rows(nx, ny);
  for (Eigen::Index x = 0; x < nx; ++x) {
    const RVector r = tau.probs().segment(x * ny, ny);
    const double mass = r.sum();
    if (!(mass > tol::kSupport))
      throw SupportError("extract: first marginal has no mass at label '" +
                         dom.component(0).label(static_cast<std::size_t>(x)) + "'");
    rows.row(x) = (r / mass).transpose();
  }
  return StochChannel(std::move(dom), std::move(cod), std::move(rows));
}

// ---------------------------------------------------------------------------
// Semi-exponentials. A family f : Z x X -> D(Y) is a StochChannel whose domain
// has exactly the two components Z, X.

/// ev(tau, x) = extract(tau)(x).
inline Dist semiexp_ev(const Dist& tau, std::size_t x) {
  auto c = extract(tau);
  if (x >= c.dom().size()) throw DimensionError("semiexp_ev: label index out of range");
  return c.row(x);
}

/// Abstraction Lambda(f): z |-> the joint state pair(uniform_X, f(z, -)).
/// Only point distributions over joint states ever arise, so the map is
/// stored as one joint state per z.
struct SemiExpAbstraction {
  FinSet z;
  std::vector<Dist> joints;

  const Dist& operator()(std::size_t zi) const { return joints.at(zi); }
};

namespace detail {

inline void require_family(const StochChannel& f) {
  if (f.dom().arity() != 2) throw DimensionError("family f must have domain Z x X");
}

/// Curries f at z into a channel X -> D(Y).
inline StochChannel curry_row(const StochChannel& f, std::size_t z) {
  const auto nx = static_cast<Eigen::Index>(f.dom().component(1).size());
  return StochChannel(Space(f.dom().component(1)), f.cod(),
                      f.rows().middleRows(static_cast<Eigen::Index>(z) * nx, nx));
}

}  // namespace detail

inline SemiExpAbstraction semiexp_abstract(const StochChannel& f) {
  detail::require_family(f);
  const FinSet& z = f.dom().component(0);
  const Dist uni = Dist::uniform(Space(f.dom().component(1)));
  std::vector<Dist> joints;
  joints.reserve(z.size());
  for (std::size_t zi = 0; zi < z.size(); ++zi) joints.push_back(pair(uni, detail::curry_row(f, zi)));
  return {z, std::move(joints)};
}

/// (ev . (Lambda(f) x id))(z, x): feeds each abstracted joint back into ev.
inline StochChannel semiexp_eval_abstract(const SemiExpAbstraction& lam, const FinSet& x) {
  Space cod = detail::split_first(lam.joints.front().space()).second;
  RMatrix m(static_cast<Eigen::Index>(lam.z.size() * x.size()), static_cast<Eigen::Index>(cod.size()));
  for (std::size_t zi = 0; zi < lam.z.size(); ++zi)
    for (std::size_t xi = 0; xi < x.size(); ++xi)
      m.row(static_cast<Eigen::Index>(zi * x.size() + xi)) =
          semiexp_ev(lam(zi), xi).probs().transpose();
  return StochChannel(Space(std::vector<FinSet>{lam.z, x}), std::move(cod), std::move(m));
}

/// f . (g x id) for g : W -> D(Z).
inline StochChannel semiexp_precompose(const StochChannel& f, const StochChannel& g) {
  detail::require_family(f);
  return compose(f, tensor(g, StochChannel::identity(Space(f.dom().component(1)))));
}

/// Lambda(f) . g, with the resulting mixture of joint states averaged out:
/// w |-> sum_z g(w)(z) Lambda(f)(z).
inline std::vector<Dist> semiexp_average(const SemiExpAbstraction& lam, const StochChannel& g) {
  if (g.cod().arity() != 1 || !(g.cod().component(0) == lam.z))
    throw DimensionError("semiexp_average: g must land in Z");
  std::vector<Dist> out;
  for (std::size_t w = 0; w < g.dom().size(); ++w) {
    RVector acc = RVector::Zero(static_cast<Eigen::Index>(lam.joints.front().size()));
    for (std::size_t zi = 0; zi < lam.z.size(); ++zi) acc += g(w, zi) * lam(zi).probs();
    out.emplace_back(lam.joints.front().space(), std::move(acc));
  }
  return out;
}

/// ev restricted to a finite family of joint states on X x Y, as a channel
/// S x X -> D(Y) where S indexes the family.
inline StochChannel semiexp_ev_channel(const std::vector<Dist>& family) {
  if (family.empty()) throw DimensionError("semiexp_ev_channel: empty family");
  auto [xs, ys] = detail::split_first(family.front().space());
  const FinSet& x = xs.component(0);
  FinSet s = FinSet::range(family.size(), "tau");
  RMatrix m(static_cast<Eigen::Index>(s.size() * x.size()), static_cast<Eigen::Index>(ys.size()));
  for (std::size_t si = 0; si < family.size(); ++si) {
    detail::require_same(family[si].space(), family.front().space(), "semiexp_ev_channel");
    auto c = extract(family[si]);
    m.middleRows(static_cast<Eigen::Index>(si * x.size()), static_cast<Eigen::Index>(x.size())) =
        c.rows();
  }
  return StochChannel(Space(std::vector<FinSet>{s, x}), std::move(ys), std::move(m));
}

// ---------------------------------------------------------------------------
// Printing.

/// Ket-style "0.3|t> + 0.7|f>" with `digits` significant digits.
inline std::string format(const Dist& d, int digits = 3) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < d.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, d[i]);
    if (i) out += " + ";
    out += buf;
    out += '|';
    auto t = d.space().label_tuple(i);
    for (std::size_t c = 0; c < t.size(); ++c) out += (c ? "," : "") + t[c];
    out += '>';
  }
  return out;
}

}  // namespace qbayes::classical
