#include "lqgcd/kalman.hpp"

#include <algorithm>
#include <string>
#include <thread>

namespace lqgcd {

Matrix whiten(const Matrix& C, const Matrix& V) { return inverse_sqrt_psd(V) * C; }

CovariancePropagator::CovariancePropagator(const Scenario& scenario)
    : horizon_(scenario.system.horizon),
      A_(scenario.system.A),
      W_(scenario.system.W),
      sigma_init_(scenario.system.sigma_init) {
    const auto T = static_cast<std::size_t>(horizon_);
    for (const Sensor& s : scenario.suite.sensors) {
        std::vector<Matrix> cbar(T), info(T);
        for (std::size_t t = 0; t < T; ++t) {
            cbar[t] = whiten(s.C[t], s.V[t]);
            info[t] = symmetrize(cbar[t].transpose() * cbar[t]);
        }
        whitened_.push_back(std::move(cbar));
        information_.push_back(std::move(info));
    }
}

const Matrix& CovariancePropagator::whitened(SensorId id, int t) const {
    return whitened_.at(id).at(static_cast<std::size_t>(t));
}

const Matrix& CovariancePropagator::information(SensorId id, int t) const {
    return information_.at(id).at(static_cast<std::size_t>(t));
}

CovarianceTrajectory CovariancePropagator::propagate(const SensorSet& set) const {
    for (SensorId id : set) {
        if (id >= information_.size())
            throw ValidationError("sensor id " + std::to_string(id) + " not in suite");
    }
    const auto T = static_cast<std::size_t>(horizon_);
    const Eigen::Index n = sigma_init_.rows();
    CovarianceTrajectory traj;
    traj.prior.reserve(T);
    traj.posterior.reserve(T);

    Matrix prior = symmetrize(sigma_init_);
    for (std::size_t t = 0; t < T; ++t) {
        traj.prior.push_back(prior);
        Matrix posterior;
        if (set.empty()) {
            posterior = prior;
        } else {
            Eigen::SelfAdjointEigenSolver<Matrix> es(prior);
            if (es.eigenvalues().minCoeff() < kPdTol)
                throw NumericalError("prior covariance singular at t=" + std::to_string(t + 1) +
                                     "; regularize W_t or sigma_init");
            Matrix info = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
                          es.eigenvectors().transpose();
            for (SensorId id : set)
                info += information_[id][t];
            posterior = symmetrize(info.llt().solve(Matrix::Identity(n, n)));
        }
        traj.posterior.push_back(posterior);
        prior = symmetrize(A_[t] * posterior * A_[t].transpose() + W_[t]);
    }
    return traj;
}

CovarianceTrajectory propagate_covariance(const Scenario& scenario, const SensorSet& set) {
    return CovariancePropagator(scenario).propagate(set);
}

double sensing_objective(const RiccatiSolution& sol, const CovarianceTrajectory& traj) {
    double total = 0.0;
    for (std::size_t t = 0; t < traj.posterior.size(); ++t)
        total += (sol.Theta[t].cwiseProduct(traj.posterior[t])).sum();  // tr(Theta Sigma), both symmetric
    return total;
}

double lqg_constant(const Scenario& scenario, const RiccatiSolution& sol) {
    const LtvSystem& sys = scenario.system;
    const Matrix& n1 = sol.N[0];
    double c = sys.x1_mean.dot(n1 * sys.x1_mean) + (sys.sigma_init.cwiseProduct(n1)).sum();
    for (std::size_t t = 0; t < static_cast<std::size_t>(sys.horizon); ++t)
        c += (sys.W[t].cwiseProduct(sol.S[t])).sum();
    return c;
}

double optimal_lqg_cost(const Scenario& scenario, const RiccatiSolution& sol, const SensorSet& set) {
    return lqg_constant(scenario, sol) + sensing_objective(sol, propagate_covariance(scenario, set));
}

double kappa_bar(double kappa, const Scenario& scenario, const RiccatiSolution& sol) {
    return kappa - lqg_constant(scenario, sol);
}

double kappa_bar(const Scenario& scenario, const RiccatiSolution& sol) {
    if (!scenario.kappa)
        throw ValidationError("kappa: required for the minimum-sensing problem");
    return kappa_bar(*scenario.kappa, scenario, sol);
}

double logdet_objective(const CovarianceTrajectory& traj) {
    double total = 0.0;
    for (std::size_t t = 0; t < traj.posterior.size(); ++t) {
        try {
            total += log_det_spd(traj.posterior[t]);
        } catch (const std::runtime_error&) {
            throw NumericalError("posterior covariance not positive definite at t=" + std::to_string(t + 1));
        }
    }
    return total / static_cast<double>(traj.posterior.size());
}

SensingObjective::SensingObjective(Scenario scenario, RiccatiSolution sol)
    : scenario_(std::move(scenario)),
      sol_(std::move(sol)),
      propagator_(scenario_),
      constant_(lqg_constant(scenario_, sol_)) {}

SensingObjective::Entry SensingObjective::compute(const SensorSet& set, bool want_logdet) const {
    const CovarianceTrajectory traj = propagator_.propagate(set);
    Entry e{sensing_objective(sol_, traj), 0.0, want_logdet};
    if (want_logdet)
        e.logdet = logdet_objective(traj);
    return e;
}

double SensingObjective::f(const SensorSet& set) const {
    {
        std::lock_guard lock(mutex_);
        if (auto it = memo_.find(set); it != memo_.end())
            return it->second.f;
    }
    const Entry e = compute(set, false);
    std::lock_guard lock(mutex_);
    ++evaluations_;
    return memo_.try_emplace(set, e).first->second.f;
}

double SensingObjective::logdet(const SensorSet& set) const {
    {
        std::lock_guard lock(mutex_);
        if (auto it = memo_.find(set); it != memo_.end() && it->second.has_logdet)
            return it->second.logdet;
    }
    const Entry e = compute(set, true);
    std::lock_guard lock(mutex_);
    ++evaluations_;
    auto [it, inserted] = memo_.try_emplace(set, e);
    if (!inserted) {
        it->second.logdet = e.logdet;
        it->second.has_logdet = true;
    }
    return it->second.logdet;
}

std::vector<double> SensingObjective::many(const std::vector<SensorSet>& sets, int threads, bool logdet) const {
    std::vector<double> out(sets.size());
    auto eval = [&](std::size_t k) { out[k] = logdet ? this->logdet(sets[k]) : f(sets[k]); };
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1 || sets.size() < 2) {
        for (std::size_t k = 0; k < sets.size(); ++k)
            eval(k);
        return out;
    }
    std::vector<std::jthread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (std::size_t w = 0; w < std::min(workers, sets.size()); ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t k = w; k < sets.size(); k += workers)
                    eval(k);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        });
    }
    pool.clear();
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

std::vector<double> SensingObjective::f_many(const std::vector<SensorSet>& sets, int threads) const {
    return many(sets, threads, false);
}

std::vector<double> SensingObjective::logdet_many(const std::vector<SensorSet>& sets, int threads) const {
    return many(sets, threads, true);
}

std::size_t SensingObjective::evaluations() const {
    std::lock_guard lock(mutex_);
    return evaluations_;
}

}  // namespace lqgcd
