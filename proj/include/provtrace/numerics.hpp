#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace provtrace {

struct ResidualState {
    Eigen::VectorXd residual;
    Eigen::VectorXd coefficients;   // least-squares weights over the support
    Eigen::Index rank = 0;
};

/// Relative threshold for orthogonality and rank decisions.
inline constexpr double kRankTolerance = 1e-9;

/// r = (I - P_S) y via a complete orthogonal decomposition of A_S. A
/// rank-deficient A_S gets the minimum-norm solution and its rank reported.
ResidualState project_residual(const Eigen::MatrixXd& support_columns, const Eigen::VectorXd& y);

enum class CorrelationMode { signed_value, absolute_value };

struct Correlation {
    std::size_t index;
    double value;
};

/// a_c^T r for every column not in `excluded` (sorted or not).
std::vector<Correlation> correlations(const Eigen::MatrixXd& dictionary, const Eigen::VectorXd& residual,
                                      std::span<const std::size_t> excluded,
                                      CorrelationMode mode = CorrelationMode::signed_value);

/// Descending value, ties by ascending index.
inline bool ranks_before(const Correlation& a, const Correlation& b)
{
    if (a.value != b.value) return a.value > b.value;
    return a.index < b.index;
}

/// The k best entries in rank order (fewer if the list is shorter).
std::vector<Correlation> top_k(std::vector<Correlation> values, std::size_t k);

/// Index of the beta-th best entry, or nullopt when fewer than beta exist.
std::optional<std::size_t> beta_argmax(std::span<const Correlation> values, std::size_t beta);

}  // namespace provtrace
