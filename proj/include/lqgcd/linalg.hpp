#pragma once

#include <Eigen/Dense>

namespace lqgcd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Tolerances shared by validation and the numerical routines.
inline constexpr double kSymmetryTol = 1e-9;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kPdTol = 1e-12;
inline constexpr double kMaxCondition = 1e12;

[[nodiscard]] inline Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

[[nodiscard]] bool is_symmetric(const Matrix& m, double tol = kSymmetryTol);

// Extreme eigenvalues of the symmetric part of m. Empty matrices return 0.
[[nodiscard]] double min_eigenvalue(const Matrix& m);
[[nodiscard]] double max_eigenvalue(const Matrix& m);

[[nodiscard]] bool is_psd(const Matrix& m, double tol = kPsdTol);
[[nodiscard]] bool is_pd(const Matrix& m, double tol = kPdTol);

// 2-norm condition number (ratio of extreme singular values); +inf when singular.
[[nodiscard]] double condition_number(const Matrix& m);

// V^{-1/2} for symmetric V, eigenvalues clamped below at `floor`.
[[nodiscard]] Matrix inverse_sqrt_psd(const Matrix& v, double floor = 1e-12);

// L with L L^T = m for symmetric PSD m; negative eigenvalues are clamped to zero.
[[nodiscard]] Matrix sqrt_factor_psd(const Matrix& m);

// Inverse of a symmetric positive-definite matrix, symmetrized.
[[nodiscard]] Matrix inverse_spd(const Matrix& m);

[[nodiscard]] double log_det_spd(const Matrix& m);

}  // namespace lqgcd
