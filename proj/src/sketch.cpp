/*
 * Copyright 2026 The krrlev Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "krrlev/sketch.hpp"

#include "krrlev/errors.hpp"
#include "krrlev/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace krrlev {

namespace {

std::vector<std::size_t> distinct_sorted(std::span<const std::size_t> sampled,
                                         std::size_t n) {
  if (sampled.empty())
    throw std::invalid_argument("build_sketch: empty index set");
  std::vector<std::size_t> out(sampled.begin(), sampled.end());
  for (std::size_t idx : out)
    if (idx >= n)
      throw std::out_of_range("build_sketch: index " + std::to_string(idx) +
                              " out of range");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

NystromSketch from_columns(Eigen::MatrixXd c, std::vector<std::size_t> indices) {
  const auto pp = static_cast<Eigen::Index>(indices.size());
  Eigen::MatrixXd w(pp, pp);
  for (Eigen::Index a = 0; a < pp; ++a)
    w.row(a) = c.row(static_cast<Eigen::Index>(indices[static_cast<std::size_t>(a)]));
  // Symmetric by construction up to the kernel's own symmetry.
  w = 0.5 * (w + w.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w);
  if (es.info() != Eigen::Success)
    throw NumericalError("build_sketch: eigensolver failed on W");
  const Eigen::VectorXd &evals = es.eigenvalues();
  const double top = evals(pp - 1);
  const double tol = static_cast<double>(pp) *
                     std::numeric_limits<double>::epsilon() *
                     std::max(top, 0.0) * 100.0;

  Eigen::Index first_kept = pp;
  for (Eigen::Index a = 0; a < pp; ++a)
    if (evals(a) >= tol && evals(a) > 0.0) {
      first_kept = a;
      break;
    }
  const Eigen::Index rank = pp - first_kept;
  if (rank == 0)
    throw DegenerateSketchError(
        "build_sketch: every eigenvalue of W is below tolerance");

  // Descending order for the retained block.
  Eigen::MatrixXd v = es.eigenvectors().rightCols(rank).rowwise().reverse();
  Eigen::VectorXd inv_sqrt =
      evals.tail(rank).reverse().cwiseSqrt().cwiseInverse();

  NystromSketch out;
  out.B = c * (v * inv_sqrt.asDiagonal());
  out.C = std::move(c);
  out.W = std::move(w);
  out.rank = rank;
  out.indices = std::move(indices);
  out.tolerance = tol;
  return out;
}

Eigen::MatrixXd regularized(const Eigen::MatrixXd &ks, const SketchingMatrix &s,
                            double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("apply_regularized_sketch: gamma must be positive");
  if (!ks.allFinite())
    throw std::invalid_argument("apply_regularized_sketch: non-finite input");
  const auto p = static_cast<Eigen::Index>(s.cols());
  const double n = static_cast<double>(s.rows);

  Eigen::MatrixXd inner(p, p);
  for (Eigen::Index a = 0; a < p; ++a)
    inner.row(a) = s.weights[static_cast<std::size_t>(a)] *
                   ks.row(static_cast<Eigen::Index>(s.sampled_rows[static_cast<std::size_t>(a)]));
  inner = 0.5 * (inner + inner.transpose()).eval();
  inner.diagonal().array() += n * gamma;

  Eigen::LLT<Eigen::MatrixXd> llt(inner);
  if (llt.info() != Eigen::Success)
    throw NumericalError("apply_regularized_sketch: factorization failed");
  // L_gamma = (KS) M^{-1} (KS)^T = X^T X with X = chol^{-1} (KS)^T.
  Eigen::MatrixXd x = llt.matrixL().solve(ks.transpose());
  Eigen::MatrixXd out = x.transpose() * x;
  return 0.5 * (out + out.transpose());
}

} // namespace

Eigen::MatrixXd SketchingMatrix::to_dense() const {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows),
                                            static_cast<Eigen::Index>(cols()));
  for (std::size_t j = 0; j < cols(); ++j)
    s(static_cast<Eigen::Index>(sampled_rows[j]), static_cast<Eigen::Index>(j)) =
        weights[j];
  return s;
}

SketchingMatrix sketching_matrix(std::span<const std::size_t> sampled,
                                 const Eigen::VectorXd &probabilities) {
  validate_distribution(probabilities);
  if (sampled.empty())
    throw std::invalid_argument("sketching_matrix: no sampled indices");
  const auto n = static_cast<std::size_t>(probabilities.size());
  const double p = static_cast<double>(sampled.size());

  SketchingMatrix s;
  s.rows = n;
  s.sampled_rows.assign(sampled.begin(), sampled.end());
  s.weights.reserve(sampled.size());
  for (std::size_t idx : sampled) {
    if (idx >= n)
      throw std::out_of_range("sketching_matrix: index out of range");
    const double pi = probabilities(static_cast<Eigen::Index>(idx));
    if (!(pi > 0.0))
      throw std::invalid_argument("sketching_matrix: zero-probability index " +
                                  std::to_string(idx) + " sampled");
    s.weights.push_back(1.0 / std::sqrt(p * pi));
  }
  return s;
}

NystromSketch build_sketch(const PointSet &points, const KernelSpec &spec,
                           std::span<const std::size_t> sampled) {
  auto indices = distinct_sorted(sampled, points.size());
  Eigen::MatrixXd c = kernel_columns(points, indices, spec);
  return from_columns(std::move(c), std::move(indices));
}

NystromSketch build_sketch(const Eigen::MatrixXd &k,
                           std::span<const std::size_t> sampled) {
  if (k.rows() != k.cols() || !k.allFinite())
    throw std::invalid_argument("build_sketch: kernel matrix must be square and finite");
  auto indices = distinct_sorted(sampled, static_cast<std::size_t>(k.rows()));
  Eigen::MatrixXd c(k.rows(), static_cast<Eigen::Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j)
    c.col(static_cast<Eigen::Index>(j)) = k.col(static_cast<Eigen::Index>(indices[j]));
  return from_columns(std::move(c), std::move(indices));
}

Eigen::MatrixXd sketch_to_dense(const NystromSketch &sketch, std::size_t cap) {
  if (sketch.n() > cap)
    throw std::length_error("sketch_to_dense: n = " + std::to_string(sketch.n()) +
                            " exceeds cap " + std::to_string(cap));
  Eigen::MatrixXd l = sketch.B * sketch.B.transpose();
  return 0.5 * (l + l.transpose());
}

Eigen::MatrixXd apply_regularized_sketch(const PointSet &points,
                                         const KernelSpec &spec,
                                         const SketchingMatrix &s, double gamma) {
  if (s.rows != points.size())
    throw std::invalid_argument("apply_regularized_sketch: dimension mismatch");
  Eigen::MatrixXd ks = kernel_columns(points, s.sampled_rows, spec);
  for (std::size_t j = 0; j < s.cols(); ++j)
    ks.col(static_cast<Eigen::Index>(j)) *= s.weights[j];
  return regularized(ks, s, gamma);
}

Eigen::MatrixXd apply_regularized_sketch(const Eigen::MatrixXd &k,
                                         const SketchingMatrix &s, double gamma) {
  if (k.rows() != k.cols() || static_cast<std::size_t>(k.rows()) != s.rows)
    throw std::invalid_argument("apply_regularized_sketch: dimension mismatch");
  Eigen::MatrixXd ks(k.rows(), static_cast<Eigen::Index>(s.cols()));
  for (std::size_t j = 0; j < s.cols(); ++j)
    ks.col(static_cast<Eigen::Index>(j)) =
        s.weights[j] * k.col(static_cast<Eigen::Index>(s.sampled_rows[j]));
  return regularized(ks, s, gamma);
}

} // namespace krrlev
