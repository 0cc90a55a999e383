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

#include "krrlev/kernels.hpp"

#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace krrlev {

namespace {

// Exact rational used to build the Bernoulli coefficient tables. Degrees up
// to 20 keep numerators and denominators well inside 64 bits; products are
// formed in 128 bits and reduced immediately.
struct Rational {
  __int128 num = 0;
  __int128 den = 1;

  static __int128 gcd(__int128 a, __int128 b) {
    if (a < 0)
      a = -a;
    if (b < 0)
      b = -b;
    while (b != 0) {
      const __int128 r = a % b;
      a = b;
      b = r;
    }
    return a;
  }

  static Rational make(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const __int128 g = gcd(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    return {n, d};
  }

  Rational operator+(const Rational &o) const {
    return make(num * o.den + o.num * den, den * o.den);
  }
  Rational operator*(const Rational &o) const {
    const Rational a = make(num, o.den);
    const Rational b = make(o.num, den);
    return make(a.num * b.num, a.den * b.den);
  }
  Rational operator-() const { return {-num, den}; }

  long double value() const {
    return static_cast<long double>(num) / static_cast<long double>(den);
  }
};

std::vector<Rational> bernoulli_rational(int degree) {
  std::vector<Rational> coeffs{Rational{1, 1}};
  for (int n = 1; n <= degree; ++n) {
    // B_n(x) = n * int_0^x B_{n-1} + c, with c fixing int_0^1 B_n = 0.
    std::vector<Rational> next(static_cast<std::size_t>(n) + 1);
    Rational mean{0, 1};
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      const auto kk = static_cast<__int128>(k);
      next[k + 1] = coeffs[k] * Rational::make(n, kk + 1);
      mean = mean + next[k + 1] * Rational::make(1, kk + 2);
    }
    next[0] = -mean;
    coeffs = std::move(next);
  }
  return coeffs;
}

// Coefficients of (-1)^(b-1) B_{2b} / (2b)! for b = 1..10, built once.
struct BernoulliKernelTable {
  std::array<std::vector<long double>, kMaxBernoulliDegree / 2 + 1> scaled;

  BernoulliKernelTable() {
    for (int order = 1; 2 * order <= kMaxBernoulliDegree; ++order) {
      const int degree = 2 * order;
      long double factorial = 1.0L;
      for (int k = 2; k <= degree; ++k)
        factorial *= static_cast<long double>(k);
      const long double sign = (order % 2 == 1) ? 1.0L : -1.0L;
      auto &dst = scaled[static_cast<std::size_t>(order)];
      for (const auto &c : bernoulli_rational(degree))
        dst.push_back(sign * c.value() / factorial);
    }
  }
};

const BernoulliKernelTable &bernoulli_table() {
  static const BernoulliKernelTable table;
  return table;
}

long double horner(const std::vector<long double> &coeffs, long double t) {
  long double acc = 0.0L;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
    acc = acc * t + *it;
  return acc;
}

void require_finite(std::span<const double> x) {
  for (double v : x)
    if (!std::isfinite(v))
      throw std::invalid_argument("eval_kernel: non-finite input");
}

} // namespace

KernelSpec KernelSpec::rbf(double bandwidth) {
  KernelSpec spec{KernelFamily::Rbf, bandwidth, 1};
  spec.validate();
  return spec;
}

KernelSpec KernelSpec::bernoulli(int order) {
  KernelSpec spec{KernelFamily::Bernoulli, 1.0, order};
  spec.validate();
  return spec;
}

void KernelSpec::validate() const {
  switch (family) {
  case KernelFamily::Linear:
    return;
  case KernelFamily::Rbf:
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
      throw std::invalid_argument("RBF bandwidth must be positive and finite");
    return;
  case KernelFamily::Bernoulli:
    if (order < 1 || 2 * order > kMaxBernoulliDegree)
      throw std::invalid_argument("Bernoulli order must be in [1, " +
                                  std::to_string(kMaxBernoulliDegree / 2) +
                                  "]");
    return;
  }
  throw std::invalid_argument("unknown kernel family");
}

std::string KernelSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (family) {
  case KernelFamily::Linear:
    os << "linear(<x,y>)";
    break;
  case KernelFamily::Rbf:
    os << "rbf(h=" << bandwidth << "; exp(-|x-y|^2/(2h^2)))";
    break;
  case KernelFamily::Bernoulli:
    os << "bernoulli(order=" << order << "; (-1)^(order-1) B_" << 2 * order
       << "(frac(x-y))/(" << 2 * order << ")!)";
    break;
  }
  return os.str();
}

PointSet::PointSet(PointMatrix points) : points_(std::move(points)) {
  if (points_.rows() < 1 || points_.cols() < 1)
    throw std::invalid_argument("PointSet: need at least one point");
  if (!points_.allFinite())
    throw std::invalid_argument("PointSet: non-finite coordinate");
}

PointSet PointSet::from_scalars(std::span<const double> xs) {
  PointMatrix m(static_cast<Eigen::Index>(xs.size()), 1);
  for (std::size_t i = 0; i < xs.size(); ++i)
    m(static_cast<Eigen::Index>(i), 0) = xs[i];
  return PointSet(std::move(m));
}

std::vector<long double> bernoulli_polynomial_coefficients(int degree) {
  if (degree < 0 || degree > kMaxBernoulliDegree)
    throw std::invalid_argument("Bernoulli degree out of range");
  std::vector<long double> out;
  for (const auto &c : bernoulli_rational(degree))
    out.push_back(c.value());
  return out;
}

double bernoulli_polynomial(int degree, double t) {
  return static_cast<double>(
      horner(bernoulli_polynomial_coefficients(degree), t));
}

double frac(double u) {
  const double f = u - std::floor(u);
  // u slightly below an integer can round to exactly 1.
  return f < 1.0 ? f : 0.0;
}

double eval_kernel(const KernelSpec &spec, std::span<const double> x,
                   std::span<const double> y) {
  if (x.size() != y.size() || x.empty())
    throw std::invalid_argument("eval_kernel: dimension mismatch");
  require_finite(x);
  require_finite(y);

  switch (spec.family) {
  case KernelFamily::Linear: {
    double acc = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
      acc += x[k] * y[k];
    return acc;
  }
  case KernelFamily::Rbf: {
    double sq = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double d = x[k] - y[k];
      sq += d * d;
    }
    return std::exp(-sq / (2.0 * spec.bandwidth * spec.bandwidth));
  }
  case KernelFamily::Bernoulli: {
    if (x.size() != 1)
      throw std::invalid_argument("Bernoulli kernel needs scalar inputs");
    const auto &coeffs =
        bernoulli_table().scaled.at(static_cast<std::size_t>(spec.order));
    if (coeffs.empty())
      throw std::invalid_argument("Bernoulli order out of range");
    return static_cast<double>(horner(coeffs, frac(x[0] - y[0])));
  }
  }
  throw std::invalid_argument("unknown kernel family");
}

KernelMatrix kernel_matrix(const PointSet &points, const KernelSpec &spec) {
  spec.validate();
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double v =
          eval_kernel(spec, points.point(static_cast<std::size_t>(i)),
                      points.point(static_cast<std::size_t>(j)));
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return {std::move(k), spec};
}

Eigen::MatrixXd kernel_columns(const PointSet &points,
                               std::span<const std::size_t> indices,
                               const KernelSpec &spec) {
  spec.validate();
  const std::size_t n = points.size();
  for (std::size_t idx : indices)
    if (idx >= n)
      throw std::out_of_range("kernel_columns: index " + std::to_string(idx) +
                              " out of range for n = " + std::to_string(n));

  Eigen::MatrixXd c(static_cast<Eigen::Index>(n),
                    static_cast<Eigen::Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j) {
    const std::size_t col = indices[j];
    for (std::size_t r = 0; r < n; ++r) {
      // Same argument order as the upper triangle of kernel_matrix.
      const std::size_t lo = std::min(r, col);
      const std::size_t hi = std::max(r, col);
      c(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) =
          eval_kernel(spec, points.point(lo), points.point(hi));
    }
  }
  return c;
}

Eigen::VectorXd kernel_diagonal(const PointSet &points,
                                const KernelSpec &spec) {
  spec.validate();
  Eigen::VectorXd d(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i)
    d(static_cast<Eigen::Index>(i)) =
        eval_kernel(spec, points.point(i), points.point(i));
  return d;
}

} // namespace krrlev
