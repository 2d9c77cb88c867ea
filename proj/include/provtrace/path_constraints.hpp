#pragma once

// Path-structure checks on binary edge vectors. All arithmetic here is
// exact 64-bit integer arithmetic.

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "provtrace/network_model.hpp"

namespace provtrace {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// n^2-length vector: edge (i, j) sits at 1-based position (i-1)n + j,
/// self-loop positions and the destination block are zero.
struct LiftedVector {
    int nodes = 0;
    std::vector<std::uint8_t> entries;
};

LiftedVector lift(const EdgeVector& x);

/// n x n adjacency of the subgraph spanned by x. Row/column k-1 is node k.
IntMatrix adjacency(const EdgeVector& x);

/// Integer matrix power, power >= 0.
IntMatrix matrix_power(const IntMatrix& w, int power);

struct PathCheck {
    std::optional<int> source;
    bool sparsity_mismatch = false;

    explicit operator bool() const { return source.has_value(); }
};

/// Walk-count test: accepts x when exactly one node i in 1..n-1 has a single
/// h-walk to n and no shorter walk to n. More than one such i is rejected.
PathCheck is_path(const EdgeVector& x, int hops);

/// Direct traversal reference for P_h membership; no linear algebra.
bool brute_force_path_oracle(const EdgeVector& x, int hops);

/// Orders the edges of an accepted path from its source to n.
PathVector order_path(const EdgeVector& x, int source);

struct ReachMatrices {
    IntMatrix from_source;       // column t-1 = row s of W^t
    IntMatrix to_destination;    // column t-1 = column n of W^t
};

/// Requires hops >= 2.
ReachMatrices reach_matrices(const IntMatrix& w, int source, int hops);

struct ChainLength {
    int length = 0;
    std::optional<int> node;   // empty when no row ever matched
    bool ambiguous = false;    // two rows matched the same probe
};

/// Follows a single chain through the shifted unit probes [1,0..], [0,1,..]
/// over rows 1..n-1 of `reach`.
ChainLength find_length(const IntMatrix& reach);

enum class MissingLinkStatus { missing_link, not_missing_link, degenerate_reject };

struct MissingLinkResult {
    MissingLinkStatus status = MissingLinkStatus::not_missing_link;
    int prefix_length = 0;   // a
    int suffix_length = 0;   // b
    int node_a = 0;
    int node_b = 0;
    std::optional<Edge> link;
};

/// Decides whether the (h-1)-edge candidate x is a source-anchored chain
/// plus a destination-anchored chain that one edge joins into an h-path.
/// Throws std::domain_error when |x| != h-1.
MissingLinkResult missing_link_check(const EdgeVector& x, int source, int hops);

/// x with `link` added. Throws std::domain_error if the link is already
/// present or leaves the destination.
EdgeVector complete_path(const EdgeVector& x, Edge link);

}  // namespace provtrace
