#pragma once

// Network-coded edge embedding: edge indexing, signature dictionaries,
// path sampling and provenance accumulation.
//
// Nodes are numbered 1..n and node n is the destination. The dictionary
// holds one column per directed edge (i, j) with i != n, so it has
// (n-1)^2 columns laid out block by block: block i holds the edges leaving
// node i, ordered by increasing j.

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace provtrace {

using Rng = std::mt19937_64;

struct Edge {
    int from = 0;
    int to = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

enum class SignatureDistribution { gaussian, binary01 };

struct NetworkConfig {
    int nodes = 0;         // n, destination is node n
    int hops = 0;          // h
    int signature_length = 0;  // m
    SignatureDistribution distribution = SignatureDistribution::gaussian;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument unless n >= 3, 1 <= h <= n-1, m >= 1.
    void validate() const;
};

/// Number of dictionary columns, (n-1)^2.
std::size_t edge_count(int nodes);

/// 1-based column of edge (i, j). Throws std::domain_error for i == n,
/// i == j or any node outside 1..n.
std::size_t edge_to_column(int from, int to, int nodes);

/// Inverse of edge_to_column. Throws std::domain_error for c outside
/// 1..(n-1)^2.
Edge column_to_edge(std::size_t column, int nodes);

/// Zero-based view of the same layout, used internally for Eigen indexing.
class EdgeIndexMap {
public:
    explicit EdgeIndexMap(int nodes);

    int nodes() const { return nodes_; }
    std::size_t size() const { return edge_count(nodes_); }
    bool valid(Edge e) const;
    std::size_t index(Edge e) const { return edge_to_column(e.from, e.to, nodes_) - 1; }
    Edge edge(std::size_t index) const { return column_to_edge(index + 1, nodes_); }

private:
    int nodes_;
};

/// Binary vector over the (n-1)^2 edge columns.
class EdgeVector {
public:
    EdgeVector() = default;
    explicit EdgeVector(int nodes);
    static EdgeVector from_edges(int nodes, const std::vector<Edge>& edges);
    static EdgeVector from_indices(int nodes, const std::vector<std::size_t>& indices);

    int nodes() const { return nodes_; }
    std::size_t size() const { return bits_.size(); }
    std::size_t count() const;

    bool test(std::size_t index) const { return bits_[index] != 0; }
    bool contains(Edge e) const;
    void set(std::size_t index, bool value = true) { bits_[index] = value ? 1 : 0; }
    void set(Edge e, bool value = true);

    /// Set edges in column order.
    std::vector<Edge> edges() const;
    std::vector<std::size_t> indices() const;

    /// As a 0/1 real vector, for products against the dictionary.
    Eigen::VectorXd to_dense() const;

    friend bool operator==(const EdgeVector&, const EdgeVector&) = default;

private:
    int nodes_ = 0;
    std::vector<std::uint8_t> bits_;
};

/// Ordered hop list i_1 -> i_2 -> ... -> i_h -> n.
struct PathVector {
    int nodes = 0;
    std::vector<Edge> edges;

    int hops() const { return static_cast<int>(edges.size()); }
    int source() const { return edges.empty() ? 0 : edges.front().from; }
    EdgeVector to_edge_vector() const { return EdgeVector::from_edges(nodes, edges); }

    /// Consecutive, node-distinct and ending at the destination.
    bool is_simple_path_to_destination() const;

    friend bool operator==(const PathVector&, const PathVector&) = default;
};

/// Builds the path i_1 -> ... -> i_h -> n from its relay sequence.
PathVector path_from_nodes(int nodes, const std::vector<int>& relays);

class SignatureMatrix {
public:
    SignatureMatrix(int nodes, Eigen::MatrixXd entries);

    int nodes() const { return nodes_; }
    Eigen::Index rows() const { return entries_.rows(); }
    Eigen::Index cols() const { return entries_.cols(); }
    const Eigen::MatrixXd& matrix() const { return entries_; }
    auto column(std::size_t index) const { return entries_.col(static_cast<Eigen::Index>(index)); }
    auto signature(Edge e) const { return column(EdgeIndexMap(nodes_).index(e)); }

private:
    int nodes_;
    Eigen::MatrixXd entries_;
};

struct Provenance {
    Eigen::VectorXd y;
    int hops = 0;
    int source = 0;
};

/// Fills an m x (n-1)^2 dictionary column by column from `rng`.
SignatureMatrix generate_signatures(const NetworkConfig& config, Rng& rng);

/// Uniform ordered h-tuple of distinct relays from 1..n-1, terminated at n.
PathVector sample_path(const NetworkConfig& config, Rng& rng);

/// y = sum of the traversed edges' signatures.
Provenance embed_provenance(const PathVector& path, const SignatureMatrix& signatures);

/// Independent generator for (master seed, trial, stream tag); uses
/// splitmix64 mixing so that neighbouring indices decorrelate.
Rng substream(std::uint64_t master_seed, std::uint64_t trial, std::uint64_t tag);

}  // namespace provtrace
