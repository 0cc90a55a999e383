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

#ifndef KRRLEV_SKETCH_HPP
#define KRRLEV_SKETCH_HPP

#include "krrlev/kernels.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace krrlev {

/// Column-sampling sketch S (n x p): column j has the single entry
/// 1 / sqrt(p * p_{i_j}) at row i_j. Duplicated draws are kept.
struct SketchingMatrix {
  std::size_t rows = 0;
  std::vector<std::size_t> sampled_rows;
  std::vector<double> weights;

  std::size_t cols() const { return sampled_rows.size(); }
  Eigen::MatrixXd to_dense() const;
};

SketchingMatrix sketching_matrix(std::span<const std::size_t> sampled,
                                 const Eigen::VectorXd &probabilities);

/// Nystrom approximation L = C W^+ C^T held in factored form L = B B^T.
///
/// `indices` are the distinct sampled indices (sorted), C the matching kernel
/// columns and W = C[indices, :]. W^+ discards eigenvalues below `tolerance`
/// = p' * machine epsilon * lambda_max(W) * 100, and B = C V_r Lambda_r^{-1/2}
/// has one column per retained eigenvalue.
struct NystromSketch {
  Eigen::MatrixXd C;
  Eigen::MatrixXd W;
  Eigen::MatrixXd B;
  Eigen::Index rank = 0;
  std::vector<std::size_t> indices;
  double tolerance = 0.0;

  std::size_t n() const { return static_cast<std::size_t>(C.rows()); }
};

/// Builds the sketch from kernel columns evaluated on demand; the n x n Gram
/// matrix is never formed. Cost O(n p'^2 + p'^3).
NystromSketch build_sketch(const PointSet &points, const KernelSpec &spec,
                           std::span<const std::size_t> sampled);

/// Same construction on an explicit SPSD matrix.
NystromSketch build_sketch(const Eigen::MatrixXd &k,
                           std::span<const std::size_t> sampled);

inline constexpr std::size_t kDefaultDenseCap = 5000;

/// L = B B^T. Throws std::length_error when n exceeds `cap`.
Eigen::MatrixXd sketch_to_dense(const NystromSketch &sketch,
                                std::size_t cap = kDefaultDenseCap);

/// L_gamma = K S (S^T K S + n gamma I)^{-1} S^T K.
Eigen::MatrixXd apply_regularized_sketch(const PointSet &points,
                                         const KernelSpec &spec,
                                         const SketchingMatrix &s, double gamma);
Eigen::MatrixXd apply_regularized_sketch(const Eigen::MatrixXd &k,
                                         const SketchingMatrix &s, double gamma);

} // namespace krrlev

#endif
