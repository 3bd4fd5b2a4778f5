#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace netmark {

namespace detail {

template <typename Scalar>
double one_norm(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& m) {
  if (m.size() == 0) return 0.0;
  return static_cast<double>(m.cwiseAbs().colwise().sum().maxCoeff());
}

}  // namespace detail

/// Dense matrix exponential by scaling-and-squaring around a truncated
/// Taylor core. The argument is halved until its 1-norm is at most 1/4,
/// the series is summed until the tail drops below `tolerance` (shared
/// across the squaring amplification, floored at machine epsilon), and
/// the result is squared back up. exp(0) is the identity exactly.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
matrix_exponential(const Eigen::MatrixBase<Derived>& arg,
                   double tolerance = 1e-13) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  if (arg.rows() != arg.cols())
    throw std::invalid_argument("matrix_exponential: matrix must be square");
  if (!(tolerance > 0.0))
    throw std::invalid_argument("matrix_exponential: tolerance must be positive");

  Mat a = arg;
  if (!a.allFinite())
    throw std::invalid_argument("matrix_exponential: non-finite entries");

  const Eigen::Index n = a.rows();
  if (n == 0) return Mat(0, 0);

  const double norm = detail::one_norm<Scalar>(a);
  if (norm == 0.0) return Mat::Identity(n, n);

  int squarings = 0;
  for (double s = norm; s > 0.25; s *= 0.5) ++squarings;

  Mat b = a * Scalar(std::ldexp(1.0, -squarings));
  const double eps = std::numeric_limits<double>::epsilon();
  const double stop =
      std::max(eps / 2.0, tolerance * std::ldexp(1.0, -squarings) / 4.0);

  Mat term = Mat::Identity(n, n);
  Mat sum = Mat::Identity(n, n);
  for (int k = 1; k <= 64; ++k) {
    term = (term * b / Scalar(k)).eval();
    sum += term;
    if (detail::one_norm<Scalar>(term) <= stop * detail::one_norm<Scalar>(sum))
      break;
  }
  for (int i = 0; i < squarings; ++i) sum = (sum * sum).eval();
  return sum;
}

}  // namespace netmark
