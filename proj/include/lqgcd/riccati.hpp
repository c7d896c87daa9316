#pragma once

#include <vector>

#include <json.hpp>

#include "lqgcd/model.hpp"

namespace lqgcd {

// Output of the finite-horizon backward Riccati recursion
//
//   S_t = Q_t + N_{t+1}
//   N_t = A_t^T (S_t^{-1} + B_t R_t^{-1} B_t^T)^{-1} A_t
//   M_t = B_t^T S_t B_t + R_t
//   K_t = -M_t^{-1} B_t^T S_t A_t
//   Theta_t = K_t^T M_t K_t
//
// with N_{T+1} = 0. Vectors are indexed 0..T-1 for t = 1..T; N has an extra
// trailing zero entry for N_{T+1}. None of it depends on the sensor set.
struct RiccatiSolution {
    std::vector<Matrix> S;
    std::vector<Matrix> N;
    std::vector<Matrix> M;
    std::vector<Matrix> K;
    std::vector<Matrix> Theta;

    [[nodiscard]] int horizon() const { return static_cast<int>(S.size()); }
    [[nodiscard]] Matrix theta_sum() const;
};

class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

[[nodiscard]] RiccatiSolution solve_riccati(const LtvSystem& system, const LqgWeights& weights);

struct DefinitenessResult {
    bool positive_definite = false;
    double min_eigenvalue = 0.0;
};

// lambda_min(sum_t Theta_t) and whether it exceeds 1e-9.
[[nodiscard]] DefinitenessResult theta_sum_positive_definite(const RiccatiSolution& sol);

// Whether sum_t A_1^T..A_t^T Q_t A_t..A_1 - N_1 is positive definite, i.e.
// whether the all-zero input is suboptimal from every nonzero x_1 in the
// noiseless full-information problem. Requires every A_t invertible.
[[nodiscard]] bool zero_control_suboptimal(const LtvSystem& system, const LqgWeights& weights,
                                           const RiccatiSolution& sol);

// sum_t A_1^T..A_t^T Q_t A_t..A_1 - N_1
[[nodiscard]] Matrix zero_control_excess(const LtvSystem& system, const LqgWeights& weights,
                                         const RiccatiSolution& sol);

// || sum_t U_t^T Theta_t U_t - zero_control_excess ||_F with U_t = A_{t-1}..A_1.
[[nodiscard]] double cascade_identity_residual(const LtvSystem& system, const LqgWeights& weights,
                                               const RiccatiSolution& sol);

[[nodiscard]] nlohmann::json riccati_to_json(const RiccatiSolution& sol);

}  // namespace lqgcd
