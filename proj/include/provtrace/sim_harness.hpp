#pragma once

// Monte Carlo driver, operation-count estimates and CSV persistence.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "provtrace/network_model.hpp"
#include "provtrace/sparse_solvers.hpp"

namespace provtrace {

struct ExperimentSpec {
    std::vector<Algorithm> algorithms;
    int nodes = 6;
    int hops = 3;
    int list_size = 3;
    int gomp_v = 2;
    int gomp_w = 3;
    std::vector<int> signature_lengths;
    std::int64_t trials = 10'000;
    std::uint64_t seed = 0;
    SignatureDistribution distribution = SignatureDistribution::gaussian;
    CorrelationMode mode = CorrelationMode::signed_value;
    bool record_timing = false;   // elapsed_ms stays 0 unless set

    /// Throws std::domain_error when h > n-1 and std::invalid_argument on an
    /// empty or unsorted m list, trials < 1 or bad gOMP parameters.
    void validate() const;
    bool uses_gomp() const;
};

struct ErrorRateRow {
    Algorithm algorithm = Algorithm::omp;
    int nodes = 0;
    int hops = 0;
    int signature_length = 0;
    int list_size = 0;
    int gomp_v = 0;
    int gomp_w = 0;
    std::int64_t trials = 0;
    std::int64_t errors = 0;
    double error_rate = 0.0;
    std::uint64_t seed = 0;
    std::int64_t elapsed_ms = 0;

    friend bool operator==(const ErrorRateRow&, const ErrorRateRow&) = default;
};

struct ErrorRateReport {
    std::vector<ErrorRateRow> rows;

    const ErrorRateRow& at(Algorithm algorithm, int signature_length) const;
    friend bool operator==(const ErrorRateReport&, const ErrorRateReport&) = default;
};

/// One trial instance. Every algorithm at the same (seed, trial) sees the
/// same path; signatures depend on (seed, trial, m).
struct TrialInstance {
    PathVector path;
    SignatureMatrix signatures;
    Provenance provenance;
};

TrialInstance make_instance(const NetworkConfig& config, std::int64_t trial);

/// Worker count from PROVTRACE_THREADS, else hardware concurrency.
unsigned worker_count();

/// Rows come out ordered by (algorithm as listed, m ascending). Results do
/// not depend on the worker count.
ErrorRateReport run_trials(const ExperimentSpec& spec, unsigned workers = 0);

struct ComplexityEstimate {
    int nodes = 0;
    int hops = 0;
    int list_size = 0;
    int signature_length = 0;
    std::int64_t lomp_ops = 0;
    std::int64_t plomp_ops = 0;
    std::int64_t savings = 0;

    friend bool operator==(const ComplexityEstimate&, const ComplexityEstimate&) = default;
};

/// Worst-case operation counts with unit constants. Throws
/// std::invalid_argument for inputs < 1 and std::overflow_error when a count
/// does not fit in 64 bits.
ComplexityEstimate complexity_estimate(int nodes, int hops, int list_size, int signature_length);

/// h = 2..hops_max outer, L = 1..list_max inner.
std::vector<ComplexityEstimate> complexity_grid(int nodes, int signature_length, int list_max, int hops_max);

inline constexpr const char* kErrorRateHeader = "algorithm,n,h,m,L,v,w,trials,errors,error_rate,seed,elapsed_ms";
inline constexpr const char* kComplexityHeader = "n,h,L,m,lomp_ops,plomp_ops,savings";

void write_csv(std::ostream& out, const ErrorRateReport& report);
void write_csv(std::ostream& out, const std::vector<ComplexityEstimate>& grid);
/// Throws std::runtime_error naming the path on I/O failure.
void write_csv(const std::filesystem::path& path, const ErrorRateReport& report);
void write_csv(const std::filesystem::path& path, const std::vector<ComplexityEstimate>& grid);

/// Parse-back of write_csv output; throws std::runtime_error on malformed
/// input.
ErrorRateReport read_error_rate_csv(std::istream& in);
std::vector<ComplexityEstimate> read_complexity_csv(std::istream& in);

/// Exhaustive comparison of the walk-count path test against direct
/// traversal over every h-sparse edge vector.
struct PathSweepSummary {
    int nodes = 0;
    int hops = 0;
    std::int64_t vectors = 0;
    std::int64_t algebraic_accepts = 0;
    std::int64_t oracle_accepts = 0;
    std::int64_t algebraic_only = 0;   // accepted by is_path, rejected by traversal
    std::int64_t oracle_only = 0;      // the reverse
    std::int64_t true_paths = 0;
    std::int64_t true_paths_rejected = 0;
    std::int64_t wrong_source = 0;
};

PathSweepSummary path_check_sweep(int nodes, int hops);

/// Deletes each hop of every h-hop path in turn and counts how often the
/// missing-link check plus completion restores the original path.
struct MissingLinkSweepSummary {
    int nodes = 0;
    int hops = 0;
    std::int64_t cases = 0;
    std::int64_t restored = 0;
};

MissingLinkSweepSummary missing_link_sweep(int nodes, int hops);

}  // namespace provtrace
