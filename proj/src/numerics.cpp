#include "provtrace/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace provtrace {

ResidualState project_residual(const Eigen::MatrixXd& support_columns, const Eigen::VectorXd& y)
{
    ResidualState state;
    if (support_columns.cols() == 0) {
        state.residual = y;
        return state;
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
    cod.setThreshold(kRankTolerance);
    cod.compute(support_columns);
    state.coefficients = cod.solve(y);
    state.residual = y - support_columns * state.coefficients;
    state.rank = cod.rank();
    return state;
}

std::vector<Correlation> correlations(const Eigen::MatrixXd& dictionary, const Eigen::VectorXd& residual,
                                      std::span<const std::size_t> excluded, CorrelationMode mode)
{
    const Eigen::VectorXd products = dictionary.transpose() * residual;
    std::vector<bool> skip(static_cast<std::size_t>(dictionary.cols()), false);
    for (std::size_t c : excluded) {
        if (c < skip.size()) skip[c] = true;
    }

    std::vector<Correlation> out;
    out.reserve(skip.size());
    for (std::size_t c = 0; c < skip.size(); ++c) {
        if (skip[c]) continue;
        const double v = products[static_cast<Eigen::Index>(c)];
        out.push_back({c, mode == CorrelationMode::absolute_value ? std::abs(v) : v});
    }
    return out;
}

std::vector<Correlation> top_k(std::vector<Correlation> values, std::size_t k)
{
    k = std::min(k, values.size());
    std::partial_sort(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k), values.end(), ranks_before);
    values.resize(k);
    return values;
}

std::optional<std::size_t> beta_argmax(std::span<const Correlation> values, std::size_t beta)
{
    if (beta < 1) throw std::invalid_argument("beta must be at least 1");
    if (values.size() < beta) return std::nullopt;
    std::vector<Correlation> work(values.begin(), values.end());
    auto nth = work.begin() + static_cast<std::ptrdiff_t>(beta - 1);
    std::nth_element(work.begin(), nth, work.end(), ranks_before);
    return nth->index;
}

}  // namespace provtrace
