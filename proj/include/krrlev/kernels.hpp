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

#ifndef KRRLEV_KERNELS_HPP
#define KRRLEV_KERNELS_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace krrlev {

enum class KernelFamily { Linear, Rbf, Bernoulli };

/// Kernel family plus hyperparameters.
///
///   Linear     k(x, y) = <x, y>
///   Rbf        k(x, y) = exp(-|x - y|^2 / (2 h^2)),  h = bandwidth
///   Bernoulli  k(x, y) = (-1)^(b-1) B_{2b}(frac(x - y)) / (2b)!,  b = order
///
/// The Bernoulli kernel is periodic on [0, 1) and takes scalar inputs. The
/// sign factor makes it positive semi-definite for every order; for b = 1 it
/// is the plain B_2(frac(x - y)) / 2.
struct KernelSpec {
  KernelFamily family = KernelFamily::Linear;
  double bandwidth = 1.0;
  int order = 1;

  static KernelSpec linear() { return {KernelFamily::Linear, 1.0, 1}; }
  static KernelSpec rbf(double bandwidth);
  static KernelSpec bernoulli(int order);

  /// Throws std::invalid_argument if the hyperparameters are out of range.
  void validate() const;

  /// Human-readable form including the formula convention, e.g.
  /// "rbf(h=1; exp(-|x-y|^2/(2h^2)))". Written into every output header.
  std::string describe() const;
};

/// Highest supported Bernoulli polynomial degree (2 * order).
inline constexpr int kMaxBernoulliDegree = 20;

using PointMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// n points in R^d stored row-wise. n >= 1, all entries finite.
class PointSet {
public:
  explicit PointSet(PointMatrix points);
  static PointSet from_scalars(std::span<const double> xs);

  std::size_t size() const { return static_cast<std::size_t>(points_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(points_.cols()); }

  std::span<const double> point(std::size_t i) const {
    return {points_.data() + i * dim(), dim()};
  }

  const PointMatrix &matrix() const { return points_; }

private:
  PointMatrix points_;
};

/// Dense Gram matrix with the kernel that produced it.
struct KernelMatrix {
  Eigen::MatrixXd entries;
  KernelSpec spec;

  Eigen::Index size() const { return entries.rows(); }
};

/// Exact coefficients of the Bernoulli polynomial B_degree, ascending
/// powers, generated from B_n' = n B_{n-1} and int_0^1 B_n = 0.
std::vector<long double> bernoulli_polynomial_coefficients(int degree);

/// B_degree(t).
double bernoulli_polynomial(int degree, double t);

/// u - floor(u); always in [0, 1).
double frac(double u);

double eval_kernel(const KernelSpec &spec, std::span<const double> x,
                   std::span<const double> y);

/// Full Gram matrix. Upper triangle is evaluated and mirrored, so the result
/// is exactly symmetric.
KernelMatrix kernel_matrix(const PointSet &points, const KernelSpec &spec);

/// Columns `indices` of the Gram matrix without forming it. Entry (r, j)
/// is bitwise identical to kernel_matrix(points, spec).entries(r, indices[j]).
Eigen::MatrixXd kernel_columns(const PointSet &points,
                               std::span<const std::size_t> indices,
                               const KernelSpec &spec);

/// k(x_i, x_i) for every point; O(n) evaluations.
Eigen::VectorXd kernel_diagonal(const PointSet &points, const KernelSpec &spec);

} // namespace krrlev

#endif
