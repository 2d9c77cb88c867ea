#include "provtrace/sparse_solvers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

#include "provtrace/path_constraints.hpp"
#include "provtrace/enumerate.hpp"

namespace provtrace {

namespace {

constexpr double kStopTolerance = 1e-9;
constexpr double kNoResidue = std::numeric_limits<double>::infinity();

constexpr std::array<std::pair<Algorithm, std::string_view>, 6> kAlgorithmNames{{
    {Algorithm::omp, "omp"},
    {Algorithm::l_omp, "l_omp"},
    {Algorithm::pl_omp, "pl_omp"},
    {Algorithm::gomp, "gomp"},
    {Algorithm::l_gomp, "l_gomp"},
    {Algorithm::oracle, "oracle"},
}};

Eigen::MatrixXd gather(const SignatureMatrix& signatures, const std::vector<std::size_t>& columns)
{
    Eigen::MatrixXd out(signatures.rows(), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t k = 0; k < columns.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = signatures.column(columns[k]);
    return out;
}

SupportSet empty_support(const Provenance& provenance)
{
    SupportSet s;
    s.state.residual = provenance.y;
    s.residual_norms.push_back(provenance.y.norm());
    return s;
}

/// Correlations of the current residual against every admissible column.
std::vector<Correlation> admissible(const SupportSet& support, const SignatureMatrix& signatures, bool path_aware,
                                    CorrelationMode mode)
{
    std::vector<Correlation> values = correlations(signatures.matrix(), support.state.residual, support.columns, mode);
    if (!path_aware || support.edges.empty()) return values;

    std::vector<bool> used_source(static_cast<std::size_t>(signatures.nodes() + 1), false);
    std::vector<bool> used_dest(static_cast<std::size_t>(signatures.nodes() + 1), false);
    for (const Edge& e : support.edges) {
        used_source[static_cast<std::size_t>(e.from)] = true;
        used_dest[static_cast<std::size_t>(e.to)] = true;
    }
    const EdgeIndexMap map(signatures.nodes());
    std::erase_if(values, [&](const Correlation& c) {
        const Edge e = map.edge(c.index);
        return used_source[static_cast<std::size_t>(e.from)] || used_dest[static_cast<std::size_t>(e.to)];
    });
    return values;
}

SupportSet extend(const SupportSet& parent, std::span<const std::size_t> columns, const Provenance& provenance,
                  const SignatureMatrix& signatures)
{
    SupportSet child = parent;
    const EdgeIndexMap map(signatures.nodes());
    for (std::size_t c : columns) {
        child.columns.push_back(c);
        child.edges.push_back(map.edge(c));
    }
    child.state = project_residual(gather(signatures, child.columns), provenance.y);
    child.residual_norms.push_back(child.state.residual.norm());
    return child;
}

std::vector<std::size_t> sorted_columns(std::vector<std::size_t> columns)
{
    std::sort(columns.begin(), columns.end());
    return columns;
}

struct Best {
    std::optional<EdgeVector> x;
    double residue = kNoResidue;

    void offer(const EdgeVector& candidate, double r)
    {
        if (r < residue) {
            x = candidate;
            residue = r;
        }
    }
};

RecoveryResult finish(Algorithm algorithm, const Best& best, int source_hint, std::size_t total, std::size_t feasible)
{
    RecoveryResult result;
    result.algorithm = algorithm;
    result.candidates_total = total;
    result.candidates_path_feasible = feasible;
    result.residue = best.residue;
    if (best.x) {
        const auto hops = static_cast<int>(best.x->count());
        const PathCheck check = is_path(*best.x, hops);
        result.recovered = order_path(*best.x, check.source.value_or(source_hint));
    }
    return result;
}

}  // namespace

GammaTuple::GammaTuple(std::vector<int> alphas, int list_size) : alphas_(std::move(alphas))
{
    for (int a : alphas_) {
        if (a < 1 || (list_size > 0 && a > list_size)) {
            throw std::invalid_argument("rank choice " + std::to_string(a) + " outside 1..L");
        }
    }
}

std::string_view to_string(Algorithm a)
{
    for (const auto& [alg, name] : kAlgorithmNames) {
        if (alg == a) return name;
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view name)
{
    for (const auto& [alg, n] : kAlgorithmNames) {
        if (n == name) return alg;
    }
    throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

GompParams::GompParams(int v, int w) : v_(v), w_(w)
{
    if (v < 2) throw std::invalid_argument("gOMP needs v >= 2");
    if (w <= v) throw std::invalid_argument("L-gOMP needs w > v");
}

std::size_t GompParams::list_width() const
{
    std::size_t out = 1;
    for (int k = 1; k <= v_; ++k) out = out * static_cast<std::size_t>(w_ - v_ + k) / static_cast<std::size_t>(k);
    return out;
}

int GompParams::iterations(int hops, Eigen::Index signature_length) const
{
    const int kappa = std::min(hops, static_cast<int>(signature_length / v_));
    if (kappa < 1) {
        throw std::invalid_argument("gOMP iteration bound min(h, m/v) is zero for m=" +
                                    std::to_string(signature_length) + ", v=" + std::to_string(v_));
    }
    return kappa;
}

SupportSet gamma_omp(const Provenance& provenance, const SignatureMatrix& signatures, const GammaTuple& gamma,
                     bool path_aware, CorrelationMode mode)
{
    SupportSet support = empty_support(provenance);
    for (int alpha : gamma.alphas()) {
        const auto values = admissible(support, signatures, path_aware, mode);
        const auto pick = beta_argmax(values, static_cast<std::size_t>(alpha));
        if (!pick) {
            support.feasible = false;
            return support;
        }
        const std::array<std::size_t, 1> column{*pick};
        support = extend(support, column, provenance, signatures);
    }
    return support;
}

std::vector<SupportSet> list_supports(const Provenance& provenance, const SignatureMatrix& signatures, int depth,
                                      int list_size, bool path_aware, CorrelationMode mode)
{
    if (list_size < 1) throw std::invalid_argument("list size must be at least 1");
    std::vector<SupportSet> leaves;

    auto grow = [&](auto&& self, const SupportSet& node) -> void {
        if (static_cast<int>(node.columns.size()) == depth) {
            leaves.push_back(node);
            return;
        }
        const auto ranked = top_k(admissible(node, signatures, path_aware, mode), static_cast<std::size_t>(list_size));
        // ranks beyond ranked.size() have no admissible column: those
        // branches are infeasible and dropped
        for (const Correlation& choice : ranked) {
            const std::array<std::size_t, 1> column{choice.index};
            self(self, extend(node, column, provenance, signatures));
        }
    };
    grow(grow, empty_support(provenance));
    return leaves;
}

double candidate_residue(const EdgeVector& x, const Provenance& provenance, const SignatureMatrix& signatures)
{
    Eigen::VectorXd r = provenance.y;
    for (std::size_t c : x.indices()) r -= signatures.column(c);
    return r.norm();
}

RecoveryResult omp(const Provenance& provenance, const SignatureMatrix& signatures, CorrelationMode mode)
{
    const SupportSet support = gamma_omp(provenance, signatures, GammaTuple::ones(provenance.hops), false, mode);
    Best best;
    std::size_t feasible = 0;
    if (support.feasible) {
        const EdgeVector x = support.to_edge_vector(signatures.nodes());
        if (is_path(x, provenance.hops)) {
            ++feasible;
            best.offer(x, candidate_residue(x, provenance, signatures));
        }
    }
    return finish(Algorithm::omp, best, provenance.source, support.feasible ? 1 : 0, feasible);
}

RecoveryResult l_omp(const Provenance& provenance, const SignatureMatrix& signatures, int list_size,
                     CorrelationMode mode)
{
    const auto leaves = list_supports(provenance, signatures, provenance.hops, list_size, false, mode);
    std::set<std::vector<std::size_t>> seen;
    Best best;
    std::size_t feasible = 0;
    for (const SupportSet& leaf : leaves) {
        if (!seen.insert(sorted_columns(leaf.columns)).second) continue;
        const EdgeVector x = leaf.to_edge_vector(signatures.nodes());
        if (!is_path(x, provenance.hops)) continue;
        ++feasible;
        best.offer(x, candidate_residue(x, provenance, signatures));
    }
    return finish(Algorithm::l_omp, best, provenance.source, seen.size(), feasible);
}

RecoveryResult pl_omp(const Provenance& provenance, const SignatureMatrix& signatures, int list_size,
                      CorrelationMode mode)
{
    const int n = signatures.nodes();
    const int s = provenance.source;
    Best best;
    if (provenance.hops == 1) {
        const EdgeVector x = EdgeVector::from_edges(n, {{s, n}});
        best.offer(x, candidate_residue(x, provenance, signatures));
        return finish(Algorithm::pl_omp, best, s, 1, 1);
    }

    const auto leaves = list_supports(provenance, signatures, provenance.hops - 1, list_size, true, mode);
    std::set<std::vector<std::size_t>> seen;
    std::size_t feasible = 0;
    for (const SupportSet& leaf : leaves) {
        if (!seen.insert(sorted_columns(leaf.columns)).second) continue;
        const EdgeVector x = leaf.to_edge_vector(n);
        const MissingLinkResult check = missing_link_check(x, s, provenance.hops);
        if (check.status != MissingLinkStatus::missing_link) continue;
        ++feasible;
        const EdgeVector completed = complete_path(x, *check.link);
        best.offer(completed, candidate_residue(completed, provenance, signatures));
    }
    return finish(Algorithm::pl_omp, best, s, seen.size(), feasible);
}

std::optional<EdgeVector> gomp_output_step(const std::vector<std::size_t>& columns, const Provenance& provenance,
                                           const SignatureMatrix& signatures)
{
    const auto h = static_cast<std::size_t>(provenance.hops);
    if (columns.size() < h) return std::nullopt;
    const ResidualState fit = project_residual(gather(signatures, columns), provenance.y);

    std::vector<std::size_t> order(columns.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double wa = std::abs(fit.coefficients[static_cast<Eigen::Index>(a)]);
        const double wb = std::abs(fit.coefficients[static_cast<Eigen::Index>(b)]);
        if (wa != wb) return wa > wb;
        return columns[a] < columns[b];
    });

    EdgeVector x(signatures.nodes());
    for (std::size_t k = 0; k < h; ++k) x.set(columns[order[k]]);
    return x;
}

RecoveryResult g_omp(const Provenance& provenance, const SignatureMatrix& signatures, const GompParams& params,
                     CorrelationMode mode)
{
    const int kappa = params.iterations(provenance.hops, signatures.rows());
    const double stop = kStopTolerance * provenance.y.norm();

    SupportSet support = empty_support(provenance);
    for (int iter = 0; iter < kappa; ++iter) {
        if (support.state.residual.norm() <= stop) break;
        const auto ranked = top_k(correlations(signatures.matrix(), support.state.residual, support.columns, mode),
                                  static_cast<std::size_t>(params.v()));
        std::vector<std::size_t> picked;
        for (const Correlation& c : ranked) picked.push_back(c.index);
        if (picked.empty()) break;
        support = extend(support, picked, provenance, signatures);
    }

    Best best;
    std::size_t feasible = 0;
    if (const auto x = gomp_output_step(support.columns, provenance, signatures); x && is_path(*x, provenance.hops)) {
        ++feasible;
        best.offer(*x, candidate_residue(*x, provenance, signatures));
    }
    return finish(Algorithm::gomp, best, provenance.source, 1, feasible);
}

RecoveryResult l_gomp(const Provenance& provenance, const SignatureMatrix& signatures, const GompParams& params,
                      CorrelationMode mode)
{
    const int kappa = params.iterations(provenance.hops, signatures.rows());
    const double stop = kStopTolerance * provenance.y.norm();
    std::vector<std::vector<std::size_t>> supports;

    auto grow = [&](auto&& self, const SupportSet& node, int iter) -> void {
        if (iter == kappa || node.state.residual.norm() <= stop) {
            supports.push_back(node.columns);
            return;
        }
        const auto ranked = top_k(correlations(signatures.matrix(), node.state.residual, node.columns, mode),
                                  static_cast<std::size_t>(params.w()));
        if (ranked.size() < static_cast<std::size_t>(params.v())) {
            supports.push_back(node.columns);
            return;
        }
        for_each_combination(ranked.size(), static_cast<std::size_t>(params.v()), [&](const std::vector<std::size_t>& pick) {
            std::vector<std::size_t> columns;
            for (std::size_t k : pick) columns.push_back(ranked[k].index);
            self(self, extend(node, columns, provenance, signatures), iter + 1);
        });
    };
    grow(grow, empty_support(provenance), 0);

    std::set<std::vector<std::size_t>> seen;
    Best best;
    std::size_t feasible = 0;
    for (const auto& columns : supports) {
        if (!seen.insert(sorted_columns(columns)).second) continue;
        const auto x = gomp_output_step(columns, provenance, signatures);
        if (!x || !is_path(*x, provenance.hops)) continue;
        ++feasible;
        best.offer(*x, candidate_residue(*x, provenance, signatures));
    }
    return finish(Algorithm::l_gomp, best, provenance.source, seen.size(), feasible);
}

std::size_t path_count(int nodes, int hops)
{
    std::size_t count = 1;
    for (int k = 0; k < hops; ++k) {
        const auto factor = static_cast<std::size_t>(std::max(nodes - 1 - k, 0));
        if (factor != 0 && count > std::numeric_limits<std::size_t>::max() / factor) {
            return std::numeric_limits<std::size_t>::max();
        }
        count *= factor;
    }
    return count;
}

RecoveryResult exhaustive_oracle(const Provenance& provenance, const SignatureMatrix& signatures)
{
    const int n = signatures.nodes();
    const std::size_t total = path_count(n, provenance.hops);
    if (total > kOracleEnumerationLimit) {
        throw std::domain_error("exhaustive search over " + std::to_string(total) + " paths exceeds the limit");
    }

    Best best;
    int best_source = 0;
    for_each_relay_sequence(n, provenance.hops, [&](const std::vector<int>& relays) {
        const EdgeVector x = path_from_nodes(n, relays).to_edge_vector();
        const double r = candidate_residue(x, provenance, signatures);
        if (r < best.residue) best_source = relays.front();
        best.offer(x, r);
    });
    return finish(Algorithm::oracle, best, best_source, total, total);
}

RecoveryResult recover(Algorithm algorithm, const Provenance& provenance, const SignatureMatrix& signatures,
                       const SolverOptions& options)
{
    switch (algorithm) {
    case Algorithm::omp: return omp(provenance, signatures, options.mode);
    case Algorithm::l_omp: return l_omp(provenance, signatures, options.list_size, options.mode);
    case Algorithm::pl_omp: return pl_omp(provenance, signatures, options.list_size, options.mode);
    case Algorithm::gomp: return g_omp(provenance, signatures, options.gomp, options.mode);
    case Algorithm::l_gomp: return l_gomp(provenance, signatures, options.gomp, options.mode);
    case Algorithm::oracle: return exhaustive_oracle(provenance, signatures);
    }
    throw std::invalid_argument("unknown algorithm");
}

}  // namespace provtrace
