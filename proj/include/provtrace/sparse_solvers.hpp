#pragma once

// Greedy path recovery: rank-tuple OMP, its list and path-aware list
// variants, generalized OMP with its list variant, and the exhaustive
// minimum-residue search over all h-hop paths.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "provtrace/network_model.hpp"
#include "provtrace/numerics.hpp"

namespace provtrace {

/// Per-iteration rank choices (alpha_1, ..., alpha_k), each in 1..L.
class GammaTuple {
public:
    GammaTuple() = default;
    explicit GammaTuple(std::vector<int> alphas, int list_size = 0);
    static GammaTuple ones(int length) { return GammaTuple(std::vector<int>(static_cast<std::size_t>(length), 1)); }

    const std::vector<int>& alphas() const { return alphas_; }
    std::size_t size() const { return alphas_.size(); }

private:
    std::vector<int> alphas_;
};

struct SupportSet {
    std::vector<std::size_t> columns;   // zero-based, selection order
    std::vector<Edge> edges;
    ResidualState state;
    std::vector<double> residual_norms;  // ||r_0||, ||r_1||, ...
    bool feasible = true;

    EdgeVector to_edge_vector(int nodes) const { return EdgeVector::from_indices(nodes, columns); }
};

enum class Algorithm { omp, l_omp, pl_omp, gomp, l_gomp, oracle };

std::string_view to_string(Algorithm a);
/// Throws std::invalid_argument for unknown names.
Algorithm parse_algorithm(std::string_view name);

struct RecoveryResult {
    std::optional<PathVector> recovered;
    double residue = 0.0;   // +inf when nothing was recovered
    std::size_t candidates_total = 0;
    std::size_t candidates_path_feasible = 0;
    Algorithm algorithm = Algorithm::omp;
};

/// gOMP selects v columns per iteration; the list variant branches over the
/// v-subsets of the top-w columns.
class GompParams {
public:
    /// Throws std::invalid_argument unless v >= 2 and w > v.
    GompParams(int v, int w);

    int v() const { return v_; }
    int w() const { return w_; }
    /// C(w, v).
    std::size_t list_width() const;
    /// min(h, floor(m / v)); throws std::invalid_argument when that is 0.
    int iterations(int hops, Eigen::Index signature_length) const;

private:
    int v_;
    int w_;
};

struct SolverOptions {
    int list_size = 3;
    GompParams gomp{2, 3};
    CorrelationMode mode = CorrelationMode::signed_value;
};

/// Runs |gamma| iterations; iteration k takes the alpha_k-th best column
/// among those not yet selected (and, when path_aware, whose source and
/// destination are both unused so far). Gamma = (1, ..., 1) without path
/// awareness is plain OMP.
SupportSet gamma_omp(const Provenance& provenance, const SignatureMatrix& signatures, const GammaTuple& gamma,
                     bool path_aware, CorrelationMode mode = CorrelationMode::signed_value);

/// All supports produced by the L^depth rank tuples, in lexicographic tuple
/// order, computed as a branching tree that shares common prefixes.
/// Infeasible branches are omitted.
std::vector<SupportSet> list_supports(const Provenance& provenance, const SignatureMatrix& signatures, int depth,
                                      int list_size, bool path_aware,
                                      CorrelationMode mode = CorrelationMode::signed_value);

/// ||y - A x|| with unit coefficients on the set bits of x.
double candidate_residue(const EdgeVector& x, const Provenance& provenance, const SignatureMatrix& signatures);

RecoveryResult omp(const Provenance& provenance, const SignatureMatrix& signatures,
                   CorrelationMode mode = CorrelationMode::signed_value);

RecoveryResult l_omp(const Provenance& provenance, const SignatureMatrix& signatures, int list_size,
                     CorrelationMode mode = CorrelationMode::signed_value);

RecoveryResult pl_omp(const Provenance& provenance, const SignatureMatrix& signatures, int list_size,
                      CorrelationMode mode = CorrelationMode::signed_value);

/// Least squares over `columns`, keep the h largest-magnitude weights and
/// binarize. Empty when fewer than h columns are available.
std::optional<EdgeVector> gomp_output_step(const std::vector<std::size_t>& columns, const Provenance& provenance,
                                           const SignatureMatrix& signatures);

RecoveryResult g_omp(const Provenance& provenance, const SignatureMatrix& signatures, const GompParams& params,
                     CorrelationMode mode = CorrelationMode::signed_value);

RecoveryResult l_gomp(const Provenance& provenance, const SignatureMatrix& signatures, const GompParams& params,
                      CorrelationMode mode = CorrelationMode::signed_value);

/// Number of ordered h-tuples of distinct relays, (n-1)!/(n-1-h)!.
std::size_t path_count(int nodes, int hops);

inline constexpr std::size_t kOracleEnumerationLimit = 10'000'000;

/// Minimum residue over every h-hop path; ties go to the lexicographically
/// first relay sequence. Throws std::domain_error above the enumeration
/// limit.
RecoveryResult exhaustive_oracle(const Provenance& provenance, const SignatureMatrix& signatures);

RecoveryResult recover(Algorithm algorithm, const Provenance& provenance, const SignatureMatrix& signatures,
                       const SolverOptions& options);

}  // namespace provtrace
