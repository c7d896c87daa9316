#include "lqgcd/riccati.hpp"

#include <string>

#include "lqgcd/scenario_io.hpp"

namespace lqgcd {

Matrix RiccatiSolution::theta_sum() const {
    Matrix sum = Matrix::Zero(Theta.front().rows(), Theta.front().cols());
    for (const auto& th : Theta)
        sum += th;
    return sum;
}

RiccatiSolution solve_riccati(const LtvSystem& system, const LqgWeights& weights) {
    const auto T = static_cast<std::size_t>(system.horizon);
    const Eigen::Index n = system.state_dim;

    RiccatiSolution sol;
    sol.S.resize(T);
    sol.N.resize(T + 1);
    sol.M.resize(T);
    sol.K.resize(T);
    sol.Theta.resize(T);
    sol.N[T] = Matrix::Zero(n, n);

    for (std::size_t k = T; k-- > 0;) {
        const Matrix& A = system.A[k];
        const Matrix& B = system.B[k];
        const Matrix& R = weights.R[k];

        const Matrix S = symmetrize(weights.Q[k] + sol.N[k + 1]);
        const Matrix M = symmetrize(B.transpose() * S * B + R);
        if (condition_number(M) > kMaxCondition)
            throw NumericalError("M_t numerically singular at t=" + std::to_string(k + 1));
        Eigen::LLT<Matrix> m_llt(M);
        if (m_llt.info() != Eigen::Success)
            throw NumericalError("M_t not positive definite at t=" + std::to_string(k + 1));

        const Matrix K = -m_llt.solve(B.transpose() * S * A);
        const Matrix Theta = symmetrize(K.transpose() * M * K);

        // (S^{-1} + B R^{-1} B^T)^{-1} needs S invertible; otherwise fall back to
        // the equivalent A^T S A - Theta (Woodbury).
        Matrix N;
        const double s_min = min_eigenvalue(S);
        if (s_min > kPdTol && s_min * kMaxCondition >= max_eigenvalue(S)) {
            const Matrix inner = inverse_spd(S) + B * inverse_spd(R) * B.transpose();
            N = A.transpose() * inverse_spd(inner) * A;
        } else {
            N = A.transpose() * S * A - Theta;
        }

        sol.S[k] = S;
        sol.M[k] = M;
        sol.K[k] = K;
        sol.Theta[k] = Theta;
        sol.N[k] = symmetrize(N);
    }
    return sol;
}

DefinitenessResult theta_sum_positive_definite(const RiccatiSolution& sol) {
    const double lmin = min_eigenvalue(sol.theta_sum());
    return {lmin > kPsdTol, lmin};
}

Matrix zero_control_excess(const LtvSystem& system, const LqgWeights& weights, const RiccatiSolution& sol) {
    const Eigen::Index n = system.state_dim;
    Matrix sum = Matrix::Zero(n, n);
    Matrix transition = Matrix::Identity(n, n);  // A_t ... A_1
    for (std::size_t k = 0; k < static_cast<std::size_t>(system.horizon); ++k) {
        transition = system.A[k] * transition;
        sum += transition.transpose() * weights.Q[k] * transition;
    }
    return symmetrize(sum - sol.N[0]);
}

bool zero_control_suboptimal(const LtvSystem& system, const LqgWeights& weights, const RiccatiSolution& sol) {
    for (std::size_t k = 0; k < static_cast<std::size_t>(system.horizon); ++k) {
        if (condition_number(system.A[k]) >= kMaxCondition)
            throw NumericalError("A_t singular at t=" + std::to_string(k + 1));
    }
    return min_eigenvalue(zero_control_excess(system, weights, sol)) > kPsdTol;
}

double cascade_identity_residual(const LtvSystem& system, const LqgWeights& weights, const RiccatiSolution& sol) {
    const Eigen::Index n = system.state_dim;
    Matrix lhs = Matrix::Zero(n, n);
    Matrix u = Matrix::Identity(n, n);  // U_t = A_{t-1} ... A_1
    for (std::size_t k = 0; k < static_cast<std::size_t>(system.horizon); ++k) {
        lhs += u.transpose() * sol.Theta[k] * u;
        u = system.A[k] * u;
    }
    return (lhs - zero_control_excess(system, weights, sol)).norm();
}

nlohmann::json riccati_to_json(const RiccatiSolution& sol) {
    auto seq = [](const std::vector<Matrix>& v, std::size_t count) {
        nlohmann::json out = nlohmann::json::array();
        for (std::size_t k = 0; k < count; ++k)
            out.push_back(matrix_to_json(v[k]));
        return out;
    };
    const auto T = static_cast<std::size_t>(sol.horizon());
    nlohmann::json doc;
    doc["horizon"] = T;
    doc["S"] = seq(sol.S, T);
    doc["N"] = seq(sol.N, T);
    doc["M"] = seq(sol.M, T);
    doc["K"] = seq(sol.K, T);
    doc["Theta"] = seq(sol.Theta, T);
    const auto pd = theta_sum_positive_definite(sol);
    doc["theta_sum_min_eigenvalue"] = pd.min_eigenvalue;
    doc["theta_sum_positive_definite"] = pd.positive_definite;
    return doc;
}

}  // namespace lqgcd
