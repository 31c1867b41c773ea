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

// Dense complex matrix kernel. Storage and the eigen solver come from Eigen;
// everything here adds explicit shape checks and the tolerance policy used by
// the probability layers.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "qbayes/error.hpp"

namespace qbayes {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

/// Component dimensions of a composite space, e.g. {3, 5} for C^3 (x) C^5.
/// A composite index (i, k) flattens to i * dims[1] + k (row-major, the same
/// order as kron).
using DimList = std::vector<std::size_t>;

/// Keep (1) or trace out / sum out (0) each component.
using Mask = std::vector<int>;

namespace tol {
inline constexpr double kHermitian = 1e-9;
inline constexpr double kEigenClip = 1e-10;
inline constexpr double kInvertible = 1e-8;
}  // namespace tol

inline std::string to_string(const DimList& dims) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < dims.size(); ++i) os << (i ? "," : "") << dims[i];
  os << ']';
  return os.str();
}

inline void check_dims(const DimList& dims) {
  if (dims.empty()) throw DimensionError("dimension list is empty");
  for (auto d : dims)
    if (d < 1) throw DimensionError("dimension list " + to_string(dims) + " has a zero entry");
}

inline std::size_t flat_dim(const DimList& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>{});
}

inline void check_mask(const Mask& mask, std::size_t components) {
  if (mask.size() != components)
    throw DimensionError("mask has " + std::to_string(mask.size()) + " entries for " +
                         std::to_string(components) + " components");
  for (int b : mask)
    if (b != 0 && b != 1) throw DimensionError("mask entries must be 0 or 1");
}

inline void require_finite(const CMatrix& a) {
  if (!a.allFinite()) throw ValidationError("matrix has non-finite entries");
}

inline void require_square(const CMatrix& a, const char* what) {
  if (a.rows() != a.cols())
    throw DimensionError(std::string(what) + ": expected a square matrix, got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
}

// ---------------------------------------------------------------------------
// Basic operations with shape checking.

inline CMatrix multiply(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("multiply: inner dimensions differ");
  return a * b;
}

inline CMatrix add(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("add: shapes differ");
  return a + b;
}

inline CMatrix scale(Complex s, const CMatrix& a) { return s * a; }
inline CMatrix adjoint(const CMatrix& a) { return a.adjoint(); }
inline CMatrix transpose(const CMatrix& a) { return a.transpose(); }
inline CMatrix conjugate(const CMatrix& a) { return a.conjugate(); }

inline Complex trace(const CMatrix& a) {
  require_square(a, "trace");
  return a.trace();
}

/// <A, B> = tr(A^dagger B).
inline Complex hs_inner(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("hs_inner: shapes differ");
  return (a.adjoint() * b).trace();
}

inline double frobenius_norm(const CMatrix& a) { return a.norm(); }

/// Largest singular value.
inline double operator_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

inline CMatrix identity(std::size_t n) {
  return CMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
}

/// |k><l| in dimension n.
inline CMatrix matrix_unit(std::size_t n, std::size_t k, std::size_t l) {
  CMatrix e = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  e(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = 1.0;
  return e;
}

inline CMatrix diagonal(const RVector& d) {
  return d.cast<Complex>().asDiagonal();
}

/// Kronecker product; (a (x) b)(i*rb + k, j*cb + l) = a(i,j) b(k,l).
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  const auto rb = b.rows(), cb = b.cols();
  CMatrix out(a.rows() * rb, a.cols() * cb);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
  return out;
}

// ---------------------------------------------------------------------------
// Hermitian spectral tools.

/// Largest entrywise deviation |a - a^dagger|.
inline double hermitian_defect(const CMatrix& a) {
  if (a.rows() != a.cols()) return INFINITY;
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const CMatrix& a, double eps = tol::kHermitian) {
  return hermitian_defect(a) <= eps * std::max(1.0, a.cwiseAbs().maxCoeff());
}

inline CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

struct HermitianEigen {
  RVector values;   // ascending
  CMatrix vectors;  // columns
};

inline HermitianEigen hermitian_eigen(const CMatrix& a) {
  require_square(a, "hermitian_eigen");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(a));
  if (es.info() != Eigen::Success) throw Error("eigendecomposition did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

inline RVector eigenvalues(const CMatrix& a) { return hermitian_eigen(a).values; }

inline CMatrix spectral_apply(const HermitianEigen& e, const std::function<double(double)>& f) {
  RVector fv = e.values.unaryExpr(f);
  return e.vectors * fv.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

/// Hermitian square root via diagonalisation. Eigenvalues in [-1e-10, 0) are
/// clipped to zero; anything below that is rejected.
inline CMatrix psd_sqrt(const CMatrix& a) {
  require_square(a, "psd_sqrt");
  require_finite(a);
  if (!is_hermitian(a)) throw NotPsdError("psd_sqrt: matrix is not Hermitian");
  auto e = hermitian_eigen(a);
  if (e.values.size() > 0 && e.values(0) < -tol::kEigenClip) {
    std::ostringstream os;
    os << "psd_sqrt: eigenvalue " << e.values(0) << " is negative";
    throw NotPsdError(os.str());
  }
  return hermitian_part(spectral_apply(e, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; }));
}

/// Inverse square root of a positive definite matrix. Rejects matrices whose
/// smallest eigenvalue is at most 1e-8 times the largest.
inline CMatrix psd_inv_sqrt(const CMatrix& a) {
  require_square(a, "psd_inv_sqrt");
  require_finite(a);
  if (!is_hermitian(a)) throw NotPsdError("psd_inv_sqrt: matrix is not Hermitian");
  auto e = hermitian_eigen(a);
  const double lo = e.values.size() ? e.values(0) : 0.0;
  const double hi = e.values.size() ? e.values(e.values.size() - 1) : 0.0;
  if (!(hi > 0.0) || !(lo > tol::kInvertible * hi)) {
    std::ostringstream os;
    os << "psd_inv_sqrt: matrix is singular or ill-conditioned (eigenvalues in [" << lo << ", "
       << hi << "])";
    throw SingularError(os.str());
  }
  return hermitian_part(spectral_apply(e, [](double x) { return 1.0 / std::sqrt(x); }));
}

/// Minimum eigenvalue of the Hermitian part.
inline double min_eigenvalue(const CMatrix& a) {
  auto v = eigenvalues(a);
  return v.size() ? v(0) : 0.0;
}

// ---------------------------------------------------------------------------
// Partial trace.

namespace detail {

inline std::vector<std::size_t> unflatten(std::size_t flat, const DimList& dims) {
  std::vector<std::size_t> idx(dims.size());
  for (std::size_t c = dims.size(); c-- > 0;) {
    idx[c] = flat % dims[c];
    flat /= dims[c];
  }
  return idx;
}

}  // namespace detail

/// Traces out every component whose mask bit is 0.
inline CMatrix partial_trace(const CMatrix& a, const DimList& dims, const Mask& mask) {
  check_dims(dims);
  check_mask(mask, dims.size());
  require_square(a, "partial_trace");
  const std::size_t n = flat_dim(dims);
  if (static_cast<std::size_t>(a.rows()) != n)
    throw DimensionError("partial_trace: matrix of size " + std::to_string(a.rows()) +
                         " does not match dims " + to_string(dims));

  DimList kept;
  for (std::size_t c = 0; c < dims.size(); ++c)
    if (mask[c]) kept.push_back(dims[c]);
  const std::size_t out_n = flat_dim(kept);

  std::vector<std::size_t> kept_flat(n), traced_flat(n);
  for (std::size_t r = 0; r < n; ++r) {
    auto idx = detail::unflatten(r, dims);
    std::size_t kf = 0, tf = 0;
    for (std::size_t c = 0; c < dims.size(); ++c) {
      if (mask[c])
        kf = kf * dims[c] + idx[c];
      else
        tf = tf * dims[c] + idx[c];
    }
    kept_flat[r] = kf;
    traced_flat[r] = tf;
  }

  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(out_n), static_cast<Eigen::Index>(out_n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (traced_flat[r] == traced_flat[c])
        out(static_cast<Eigen::Index>(kept_flat[r]), static_cast<Eigen::Index>(kept_flat[c])) +=
            a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  return out;
}

}  // namespace qbayes
