#include "lqgcd/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "lqgcd/rng.hpp"

namespace lqgcd {

namespace {

Matrix gaussian_matrix(SplitMix64& rng, Eigen::Index rows, Eigen::Index cols) {
    boost::random::normal_distribution<double> normal;
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = normal(rng);
    }
    return m;
}

double uniform(SplitMix64& rng, double lo, double hi) {
    return boost::random::uniform_real_distribution<double>(lo, hi)(rng);
}

// G G^T / cols + floor * I, a well-conditioned random PD matrix.
Matrix random_pd(SplitMix64& rng, Eigen::Index dim, double floor) {
    const Matrix g = gaussian_matrix(rng, dim, dim);
    return symmetrize(g * g.transpose() / static_cast<double>(dim) + floor * Matrix::Identity(dim, dim));
}

template <class T>
std::vector<T> repeat(const T& value, int horizon) {
    return std::vector<T>(static_cast<std::size_t>(horizon), value);
}

Sensor make_sensor(SensorId id, const Matrix& C, const Matrix& V, double cost, std::string kind, int horizon) {
    Sensor s;
    s.id = id;
    s.C = repeat(C, horizon);
    s.V = repeat(V, horizon);
    s.cost = cost;
    s.kind = std::move(kind);
    return s;
}

// [[I, dt I], [0, I]] and [0; dt I] for a d-dimensional double integrator.
Matrix double_integrator_a(Eigen::Index d) {
    Matrix a = Matrix::Identity(2 * d, 2 * d);
    a.topRightCorner(d, d) = Matrix::Identity(d, d);
    return a;
}

Matrix double_integrator_b(Eigen::Index d) {
    Matrix b = Matrix::Zero(2 * d, d);
    b.bottomRows(d) = Matrix::Identity(d, d);
    return b;
}

}  // namespace

Scenario build_formation_scenario(int agents, int horizon, FormationMode mode, std::uint64_t seed,
                                  double formation_radius) {
    if (agents < 2)
        throw ValidationError("agents: need at least 2");
    if (horizon < 1)
        throw ValidationError("horizon: must be positive");
    const Eigen::Index na = agents;
    const Eigen::Index n = 4 * na;
    SplitMix64 rng(seed);

    Matrix A = Matrix::Zero(n, n);
    Matrix B = Matrix::Zero(n, 2 * na);
    Matrix W = Matrix::Zero(n, n);
    Matrix Q = Matrix::Zero(n, n);
    const Vector w_agent = (Vector(4) << 1e-2, 1e-2, 1e-4, 1e-4).finished();
    for (Eigen::Index i = 0; i < na; ++i) {
        A.block(4 * i, 4 * i, 4, 4) = double_integrator_a(2);
        B.block(4 * i, 2 * i, 4, 2) = double_integrator_b(2);
        W.block(4 * i, 4 * i, 4, 4) = w_agent.asDiagonal();
        const double q = (mode == FormationMode::heterogeneous && i == 0) ? 10.0 : 0.1;
        Q.block(4 * i, 4 * i, 4, 4) = q * Matrix::Identity(4, 4);
    }

    Scenario s;
    s.system.horizon = horizon;
    s.system.state_dim = static_cast<int>(n);
    s.system.A = repeat(A, horizon);
    s.system.B = repeat(B, horizon);
    s.system.W = repeat(W, horizon);
    s.weights.Q = repeat(Q, horizon);
    s.weights.R = repeat(Matrix(Matrix::Identity(2 * na, 2 * na)), horizon);

    const Matrix D = gaussian_matrix(rng, n, n);
    s.system.sigma_init = symmetrize(D.transpose() * D + 0.1 * Matrix::Identity(n, n));

    s.system.x1_mean = Vector::Zero(n);
    for (Eigen::Index i = 0; i < na; ++i) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(na);
        const double px = uniform(rng, 0.0, 10.0);
        const double py = uniform(rng, 0.0, 10.0);
        s.system.x1_mean(4 * i) = px - (5.0 + formation_radius * std::cos(angle));
        s.system.x1_mean(4 * i + 1) = py - (5.0 + formation_radius * std::sin(angle));
    }

    SensorId id = 0;
    const Matrix v_gps = 2.0 * Matrix::Identity(2, 2);
    const Matrix v_lidar = 0.1 * Matrix::Identity(2, 2);
    for (Eigen::Index i = 0; i < na; ++i) {
        Matrix C = Matrix::Zero(2, n);
        C.block(0, 4 * i, 2, 2) = Matrix::Identity(2, 2);
        s.suite.sensors.push_back(make_sensor(id++, C, v_gps, 1.0, "gps", horizon));
    }
    for (Eigen::Index i = 0; i < na; ++i) {
        for (Eigen::Index j = 0; j < na; ++j) {
            if (i == j)
                continue;
            Matrix C = Matrix::Zero(2, n);
            C.block(0, 4 * j, 2, 2) = Matrix::Identity(2, 2);
            C.block(0, 4 * i, 2, 2) = -Matrix::Identity(2, 2);
            s.suite.sensors.push_back(make_sensor(id++, C, v_lidar, 1.0, "lidar", horizon));
        }
    }
    validate(s);
    return s;
}

Scenario build_uav_scenario(int landmarks, int horizon, CostMode cost_mode, std::uint64_t seed,
                            double landmark_scale) {
    if (landmarks < 1)
        throw ValidationError("landmarks: need at least 1");
    if (horizon < 1)
        throw ValidationError("horizon: must be positive");
    SplitMix64 rng(seed);
    const bool hetero = cost_mode == CostMode::heterogeneous;

    Scenario s;
    s.system.horizon = horizon;
    s.system.state_dim = 6;
    s.system.A = repeat(double_integrator_a(3), horizon);
    s.system.B = repeat(double_integrator_b(3), horizon);
    s.system.W = repeat(Matrix(Matrix::Identity(6, 6)), horizon);
    const Vector q = (Vector(6) << 1e-3, 1e-3, 10.0, 1e-3, 1e-3, 10.0).finished();
    s.weights.Q = repeat(Matrix(q.asDiagonal()), horizon);
    s.weights.R = repeat(Matrix(Matrix::Identity(3, 3)), horizon);
    s.system.sigma_init = Matrix::Identity(6, 6);
    s.system.x1_mean = Vector::Zero(6);
    s.system.x1_mean(0) = uniform(rng, -10.0, 10.0);
    s.system.x1_mean(1) = uniform(rng, -10.0, 10.0);
    s.system.x1_mean(2) = uniform(rng, 0.0, 20.0);

    Matrix position = Matrix::Zero(3, 6);
    position.leftCols(3) = Matrix::Identity(3, 3);
    Matrix altitude = Matrix::Zero(1, 6);
    altitude(0, 2) = 1.0;

    s.suite.sensors.push_back(make_sensor(0, position, 2.0 * Matrix::Identity(3, 3), hetero ? 3.0 : 1.0, "gps", horizon));
    s.suite.sensors.push_back(make_sensor(1, altitude, Matrix::Constant(1, 1, 0.25), hetero ? 2.0 : 1.0, "altimeter", horizon));
    for (int l = 0; l < landmarks; ++l) {
        const Matrix G = landmark_scale * gaussian_matrix(rng, 3, 3);
        const Matrix V = symmetrize(0.1 * Matrix::Identity(3, 3) + G.transpose() * G);
        s.suite.sensors.push_back(
            make_sensor(static_cast<SensorId>(2 + l), position, V, 1.0, "landmark", horizon));
    }
    validate(s);
    return s;
}

Scenario build_random_scenario(const RandomScenarioOptions& opts, std::uint64_t seed) {
    if (opts.state_dim < 1 || opts.horizon < 1 || opts.sensors < 0 || opts.max_measurement_dim < 1)
        throw ValidationError("random scenario: invalid options");
    SplitMix64 rng(seed);
    const Eigen::Index n = opts.state_dim;
    const Eigen::Index m = opts.input_dim > 0 ? opts.input_dim : std::max<Eigen::Index>(1, n / 2);
    const int T = opts.horizon;
    const int distinct = opts.time_varying ? T : 1;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));

    Scenario s;
    s.system.horizon = T;
    s.system.state_dim = static_cast<int>(n);
    for (int t = 0; t < distinct; ++t) {
        s.system.A.push_back(scale * gaussian_matrix(rng, n, n));
        s.system.B.push_back(gaussian_matrix(rng, n, m));
        s.system.W.push_back(random_pd(rng, n, 0.1));
        s.weights.Q.push_back(random_pd(rng, n, 0.0));
        s.weights.R.push_back(random_pd(rng, m, 0.5));
    }
    if (!opts.time_varying) {
        s.system.A = repeat(s.system.A.front(), T);
        s.system.B = repeat(s.system.B.front(), T);
        s.system.W = repeat(s.system.W.front(), T);
        s.weights.Q = repeat(s.weights.Q.front(), T);
        s.weights.R = repeat(s.weights.R.front(), T);
    }
    s.system.sigma_init = random_pd(rng, n, 0.1);
    s.system.x1_mean = opts.random_mean ? Vector(gaussian_matrix(rng, n, 1)) : Vector(Vector::Zero(n));

    for (int i = 0; i < opts.sensors; ++i) {
        const auto p = static_cast<Eigen::Index>(
            boost::random::uniform_int_distribution<int>(1, opts.max_measurement_dim)(rng));
        Sensor sensor;
        sensor.id = static_cast<SensorId>(i);
        for (int t = 0; t < distinct; ++t) {
            sensor.C.push_back(gaussian_matrix(rng, p, n));
            sensor.V.push_back(random_pd(rng, p, 0.1));
        }
        if (!opts.time_varying) {
            sensor.C = repeat(sensor.C.front(), T);
            sensor.V = repeat(sensor.V.front(), T);
        }
        sensor.cost = opts.unit_costs ? 1.0 : uniform(rng, 0.5, 2.0);
        s.suite.sensors.push_back(std::move(sensor));
    }
    validate(s);
    return s;
}

}  // namespace lqgcd
