#include "lqgcd/linalg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lqgcd {

bool is_symmetric(const Matrix& m, double tol) {
    if (m.rows() != m.cols())
        return false;
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, m.cwiseAbs().maxCoeff());
}

namespace {

Vector sym_eigenvalues(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

}  // namespace

double min_eigenvalue(const Matrix& m) {
    if (m.size() == 0)
        return 0.0;
    return sym_eigenvalues(m).minCoeff();
}

double max_eigenvalue(const Matrix& m) {
    if (m.size() == 0)
        return 0.0;
    return sym_eigenvalues(m).maxCoeff();
}

bool is_psd(const Matrix& m, double tol) { return is_symmetric(m) && min_eigenvalue(m) >= -tol; }

bool is_pd(const Matrix& m, double tol) { return is_symmetric(m) && min_eigenvalue(m) > tol; }

double condition_number(const Matrix& m) {
    if (m.size() == 0)
        return 1.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const Vector& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    if (smin <= 0.0)
        return std::numeric_limits<double>::infinity();
    return s(0) / smin;
}

Matrix inverse_sqrt_psd(const Matrix& v, double floor) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(v));
    Vector d = es.eigenvalues().cwiseMax(floor).cwiseSqrt().cwiseInverse();
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

Matrix sqrt_factor_psd(const Matrix& m) {
    if (m.size() == 0)
        return m;
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m));
    Vector d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * d.asDiagonal();
}

Matrix inverse_spd(const Matrix& m) {
    Eigen::LLT<Matrix> llt(symmetrize(m));
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("matrix is not positive definite");
    return symmetrize(llt.solve(Matrix::Identity(m.rows(), m.cols())));
}

double log_det_spd(const Matrix& m) {
    Eigen::LLT<Matrix> llt(symmetrize(m));
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("matrix is not positive definite");
    const Matrix& l = llt.matrixLLT();
    return 2.0 * l.diagonal().array().log().sum();
}

}  // namespace lqgcd
