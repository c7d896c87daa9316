#pragma once

// Shared test instances and independent reference computations. Every
// oracle here is written from first principles rather than by calling the
// library routine it is used to check.

#include <cmath>
#include <cstdint>
#include <vector>

#include "lqgcd/linalg.hpp"
#include "lqgcd/model.hpp"
#include "lqgcd/riccati.hpp"
#include "lqgcd/scenarios.hpp"

namespace fixtures {

using lqgcd::Matrix;
using lqgcd::Scenario;
using lqgcd::SensorSet;
using lqgcd::Vector;

inline Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

// T = 1, every matrix 1, W = 0, Sigma_init = 1; sensor 0 ("a") has V = 1 and
// cost 1, sensor 1 ("b") has V = 0.5 and cost 2. Budget 2.
inline Scenario scalar_two_sensor() {
    Scenario s;
    s.system.horizon = 1;
    s.system.state_dim = 1;
    s.system.A = {scalar(1)};
    s.system.B = {scalar(1)};
    s.system.W = {scalar(0)};
    s.system.sigma_init = scalar(1);
    s.system.x1_mean = Vector::Zero(1);
    s.weights.Q = {scalar(1)};
    s.weights.R = {scalar(1)};
    lqgcd::Sensor a{0, {scalar(1)}, {scalar(1)}, 1.0, "a"};
    lqgcd::Sensor b{1, {scalar(1)}, {scalar(0.5)}, 2.0, "b"};
    s.suite.sensors = {a, b};
    s.budget = 2.0;
    lqgcd::validate(s);
    return s;
}

// Same system with only sensor "a".
inline Scenario scalar_one_sensor() {
    Scenario s = scalar_two_sensor();
    s.suite.sensors.pop_back();
    return s;
}

// Posterior covariance of x_t given y_1..y_t by conditioning the joint
// Gaussian of (x_1, w_1.., v_1..) directly; t is 0-based.
inline Matrix batch_posterior(const Scenario& s, const SensorSet& set, int t) {
    const auto n = static_cast<Eigen::Index>(s.state_dim());
    const int steps = t + 1;
    // z = [x_1; w_1; ...; w_t]; x_k = Phi_k z.
    const Eigen::Index zdim = n * steps;
    Matrix cov_z = Matrix::Zero(zdim, zdim);
    cov_z.topLeftCorner(n, n) = s.system.sigma_init;
    for (int k = 0; k < t; ++k)
        cov_z.block(n * (k + 1), n * (k + 1), n, n) = s.system.W[static_cast<std::size_t>(k)];

    std::vector<Matrix> phi;
    Matrix cur = Matrix::Zero(n, zdim);
    cur.leftCols(n) = Matrix::Identity(n, n);
    phi.push_back(cur);
    for (int k = 0; k < t; ++k) {
        Matrix next = s.system.A[static_cast<std::size_t>(k)] * cur;
        next.block(0, n * (k + 1), n, n) += Matrix::Identity(n, n);
        phi.push_back(next);
        cur = next;
    }

    // Measurement rows and their noise.
    std::vector<Matrix> rows;
    std::vector<Matrix> noises;
    for (int k = 0; k <= t; ++k) {
        for (lqgcd::SensorId id : set) {
            const auto& sensor = s.suite.at(id);
            rows.push_back(sensor.C[static_cast<std::size_t>(k)] * phi[static_cast<std::size_t>(k)]);
            noises.push_back(sensor.V[static_cast<std::size_t>(k)]);
        }
    }
    const Matrix& xt = phi.back();
    Matrix prior = xt * cov_z * xt.transpose();
    if (rows.empty())
        return prior;
    Eigen::Index p = 0;
    for (const auto& r : rows)
        p += r.rows();
    Matrix H(p, zdim);
    Matrix R = Matrix::Zero(p, p);
    Eigen::Index off = 0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        H.middleRows(off, rows[k].rows()) = rows[k];
        R.block(off, off, noises[k].rows(), noises[k].rows()) = noises[k];
        off += rows[k].rows();
    }
    const Matrix syy = H * cov_z * H.transpose() + R;
    const Matrix sxy = xt * cov_z * H.transpose();
    return prior - sxy * syy.ldlt().solve(sxy.transpose());
}

// Textbook LQR backward pass: P_t = A^T S A - A^T S B (B^T S B + R)^{-1} B^T S A.
struct NaiveLqr {
    std::vector<Matrix> P;  // P_1..P_{T+1}
    std::vector<Matrix> K;
    std::vector<Matrix> Theta;
};

inline NaiveLqr naive_lqr(const Scenario& s) {
    const auto T = static_cast<std::size_t>(s.horizon());
    const auto n = static_cast<Eigen::Index>(s.state_dim());
    NaiveLqr out;
    out.P.assign(T + 1, Matrix::Zero(n, n));
    out.K.resize(T);
    out.Theta.resize(T);
    for (std::size_t k = T; k-- > 0;) {
        const Matrix& A = s.system.A[k];
        const Matrix& B = s.system.B[k];
        const Matrix S = s.weights.Q[k] + out.P[k + 1];
        const Matrix M = B.transpose() * S * B + s.weights.R[k];
        const Matrix gain = M.inverse() * B.transpose() * S * A;
        out.K[k] = -gain;
        out.Theta[k] = gain.transpose() * M * gain;
        out.P[k] = A.transpose() * S * A - A.transpose() * S * B * gain;
    }
    return out;
}

// Exact expected cost of the closed loop (gain-form Kalman filter plus
// u_t = K_t x_hat_{t|t}) by propagating second moments of (x_t, x_hat_{t|t-1}).
inline double closed_loop_expected_cost(const Scenario& s, const std::vector<Matrix>& K, const SensorSet& set) {
    const auto n = static_cast<Eigen::Index>(s.state_dim());
    const auto T = static_cast<std::size_t>(s.horizon());
    // Second moment of xi = [x; x_pred].
    const Vector& mu = s.system.x1_mean;
    Matrix E = Matrix::Zero(2 * n, 2 * n);
    E.topLeftCorner(n, n) = s.system.sigma_init + mu * mu.transpose();
    E.topRightCorner(n, n) = mu * mu.transpose();
    E.bottomLeftCorner(n, n) = mu * mu.transpose();
    E.bottomRightCorner(n, n) = mu * mu.transpose();
    Matrix P = s.system.sigma_init;  // prior covariance, gain form
    double cost = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        const auto stacked = lqgcd::stack_sensors(s.suite, set, static_cast<int>(t), s.state_dim());
        const Matrix& C = stacked.C;
        const Eigen::Index p = C.rows();
        Matrix L = Matrix::Zero(n, p);
        if (p > 0) {
            L = P * C.transpose() * (C * P * C.transpose() + stacked.V).inverse();
            const Matrix I_LC = Matrix::Identity(n, n) - L * C;
            P = I_LC * P * I_LC.transpose() + L * stacked.V * L.transpose();
        }
        // x_hat_{t|t} = (I - L C) x_pred + L C x + L v
        const Matrix& A = s.system.A[t];
        const Matrix& B = s.system.B[t];
        Matrix Fx = Matrix::Zero(n, 2 * n);  // x_hat_{t|t} as a map of xi
        Fx.leftCols(n) = L * C;
        Fx.rightCols(n) = Matrix::Identity(n, n) - L * C;
        const Matrix U = K[t] * Fx;  // u as a map of xi (plus K L v)
        const Matrix Ev = p > 0 ? Matrix(L * stacked.V * L.transpose()) : Matrix::Zero(n, n);

        Matrix Xn = Matrix::Zero(n, 2 * n);
        Xn.leftCols(n) = A;
        Xn += B * U;
        const Matrix Pn = A * Fx + B * U;

        Matrix G(2 * n, 2 * n);
        G.topRows(n) = Xn;
        G.bottomRows(n) = Pn;
        // Noise through u enters both next state and prediction via B K L v.
        Matrix noise = Matrix::Zero(2 * n, 2 * n);
        const Matrix BK = B * K[t];
        const Matrix AK = A + BK;
        noise.topLeftCorner(n, n) = BK * Ev * BK.transpose() + s.system.W[t];
        noise.topRightCorner(n, n) = BK * Ev * AK.transpose();
        noise.bottomLeftCorner(n, n) = AK * Ev * BK.transpose();
        noise.bottomRightCorner(n, n) = AK * Ev * AK.transpose();

        const Matrix Eu = U * E * U.transpose() + K[t] * Ev * K[t].transpose();
        E = G * E * G.transpose() + noise;
        cost += (s.weights.Q[t] * E.topLeftCorner(n, n)).trace() + (s.weights.R[t] * Eu).trace();
        P = A * P * A.transpose() + s.system.W[t];
    }
    return cost;
}

inline lqgcd::RandomScenarioOptions small_options(int n, int T, int sensors, bool unit_costs = false) {
    lqgcd::RandomScenarioOptions o;
    o.state_dim = n;
    o.horizon = T;
    o.sensors = sensors;
    o.unit_costs = unit_costs;
    return o;
}

// Random instance rescaled so every hypothesis of the spectral ratio bound
// can hold: each whitened sensor matrix gets unit trace and the covariances
// are inflated so tr(Sigma) <= lambda_max(Sigma)^2.
inline Scenario bound_ready_instance(int n, int T, int sensors, std::uint64_t seed, double inflate = 20.0) {
    Scenario s = lqgcd::build_random_scenario(small_options(n, T, sensors), seed);
    s.system.sigma_init *= inflate;
    for (auto& w : s.system.W)
        w *= inflate;
    for (auto& sensor : s.suite.sensors) {
        for (std::size_t t = 0; t < sensor.C.size(); ++t) {
            const Matrix cbar = lqgcd::inverse_sqrt_psd(sensor.V[t]) * sensor.C[t];
            sensor.C[t] /= std::sqrt((cbar * cbar.transpose()).trace());
        }
    }
    lqgcd::validate(s);
    return s;
}

}  // namespace fixtures
