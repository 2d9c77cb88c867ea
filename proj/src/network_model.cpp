#include "provtrace/network_model.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

namespace provtrace {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

[[noreturn]] void bad_edge(int from, int to, int nodes)
{
    std::ostringstream msg;
    msg << "invalid edge (" << from << "," << to << ") for n=" << nodes;
    throw std::domain_error(msg.str());
}

}  // namespace

void NetworkConfig::validate() const
{
    if (nodes < 3) throw std::invalid_argument("node count must be at least 3");
    if (hops < 1 || hops > nodes - 1) {
        throw std::invalid_argument("hop length must lie in 1..n-1 (n=" + std::to_string(nodes) +
                                    ", h=" + std::to_string(hops) + ")");
    }
    if (signature_length < 1) throw std::invalid_argument("signature length must be positive");
}

std::size_t edge_count(int nodes)
{
    const auto k = static_cast<std::size_t>(nodes - 1);
    return k * k;
}

std::size_t edge_to_column(int from, int to, int nodes)
{
    if (from < 1 || from > nodes - 1 || to < 1 || to > nodes || from == to) bad_edge(from, to, nodes);
    const int shifted = to < from ? to : to - 1;
    return static_cast<std::size_t>(from - 1) * static_cast<std::size_t>(nodes - 1) + static_cast<std::size_t>(shifted);
}

Edge column_to_edge(std::size_t column, int nodes)
{
    if (column < 1 || column > edge_count(nodes)) {
        throw std::domain_error("column " + std::to_string(column) + " out of range for n=" + std::to_string(nodes));
    }
    const auto block = static_cast<std::size_t>(nodes - 1);
    const int from = static_cast<int>((column - 1) / block) + 1;
    const int shifted = static_cast<int>((column - 1) % block) + 1;
    return {from, shifted < from ? shifted : shifted + 1};
}

EdgeIndexMap::EdgeIndexMap(int nodes) : nodes_(nodes)
{
    if (nodes < 2) throw std::invalid_argument("node count must be at least 2");
}

bool EdgeIndexMap::valid(Edge e) const
{
    return e.from >= 1 && e.from <= nodes_ - 1 && e.to >= 1 && e.to <= nodes_ && e.from != e.to;
}

EdgeVector::EdgeVector(int nodes) : nodes_(nodes), bits_(edge_count(nodes), 0) {}

EdgeVector EdgeVector::from_edges(int nodes, const std::vector<Edge>& edges)
{
    EdgeVector x(nodes);
    for (const Edge& e : edges) x.set(e);
    return x;
}

EdgeVector EdgeVector::from_indices(int nodes, const std::vector<std::size_t>& indices)
{
    EdgeVector x(nodes);
    for (std::size_t i : indices) x.set(i);
    return x;
}

std::size_t EdgeVector::count() const
{
    return static_cast<std::size_t>(std::accumulate(bits_.begin(), bits_.end(), 0));
}

bool EdgeVector::contains(Edge e) const
{
    return test(edge_to_column(e.from, e.to, nodes_) - 1);
}

void EdgeVector::set(Edge e, bool value)
{
    set(edge_to_column(e.from, e.to, nodes_) - 1, value);
}

std::vector<Edge> EdgeVector::edges() const
{
    std::vector<Edge> out;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i]) out.push_back(column_to_edge(i + 1, nodes_));
    }
    return out;
}

std::vector<std::size_t> EdgeVector::indices() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i]) out.push_back(i);
    }
    return out;
}

Eigen::VectorXd EdgeVector::to_dense() const
{
    Eigen::VectorXd v(static_cast<Eigen::Index>(bits_.size()));
    for (std::size_t i = 0; i < bits_.size(); ++i) v[static_cast<Eigen::Index>(i)] = bits_[i];
    return v;
}

bool PathVector::is_simple_path_to_destination() const
{
    if (edges.empty()) return false;
    std::vector<bool> seen(static_cast<std::size_t>(nodes + 1), false);
    for (std::size_t r = 0; r < edges.size(); ++r) {
        const Edge& e = edges[r];
        if (e.from < 1 || e.from >= nodes || e.to < 1 || e.to > nodes || e.from == e.to) return false;
        if (r > 0 && edges[r - 1].to != e.from) return false;
        if (seen[static_cast<std::size_t>(e.from)]) return false;
        seen[static_cast<std::size_t>(e.from)] = true;
    }
    return edges.back().to == nodes;
}

PathVector path_from_nodes(int nodes, const std::vector<int>& relays)
{
    PathVector p{nodes, {}};
    for (std::size_t r = 0; r < relays.size(); ++r) {
        const int next = r + 1 < relays.size() ? relays[r + 1] : nodes;
        p.edges.push_back({relays[r], next});
    }
    return p;
}

SignatureMatrix::SignatureMatrix(int nodes, Eigen::MatrixXd entries) : nodes_(nodes), entries_(std::move(entries))
{
    if (static_cast<std::size_t>(entries_.cols()) != edge_count(nodes_)) {
        throw std::invalid_argument("signature matrix must have (n-1)^2 columns");
    }
}

SignatureMatrix generate_signatures(const NetworkConfig& config, Rng& rng)
{
    config.validate();
    const Eigen::Index rows = config.signature_length;
    const auto cols = static_cast<Eigen::Index>(edge_count(config.nodes));
    Eigen::MatrixXd entries(rows, cols);

    if (config.distribution == SignatureDistribution::gaussian) {
        std::normal_distribution<double> normal(0.0, 1.0);
        for (Eigen::Index c = 0; c < cols; ++c)
            for (Eigen::Index r = 0; r < rows; ++r) entries(r, c) = normal(rng);
    } else {
        std::bernoulli_distribution coin(0.5);
        for (Eigen::Index c = 0; c < cols; ++c)
            for (Eigen::Index r = 0; r < rows; ++r) entries(r, c) = coin(rng) ? 1.0 : 0.0;
    }
    return SignatureMatrix(config.nodes, std::move(entries));
}

PathVector sample_path(const NetworkConfig& config, Rng& rng)
{
    if (config.hops > config.nodes - 1) {
        throw std::domain_error("cannot sample a " + std::to_string(config.hops) + "-hop path with n=" +
                                std::to_string(config.nodes));
    }
    config.validate();

    std::vector<int> pool(static_cast<std::size_t>(config.nodes - 1));
    std::iota(pool.begin(), pool.end(), 1);
    // partial Fisher-Yates: the first h slots become a uniform ordered draw
    for (std::size_t r = 0; r < static_cast<std::size_t>(config.hops); ++r) {
        std::uniform_int_distribution<std::size_t> pick(r, pool.size() - 1);
        std::swap(pool[r], pool[pick(rng)]);
    }
    pool.resize(static_cast<std::size_t>(config.hops));
    return path_from_nodes(config.nodes, pool);
}

Provenance embed_provenance(const PathVector& path, const SignatureMatrix& signatures)
{
    Provenance p;
    p.y = Eigen::VectorXd::Zero(signatures.rows());
    // column order, so the sum is bit-identical to A * x
    for (std::size_t c : path.to_edge_vector().indices()) p.y += signatures.column(c);
    p.hops = path.hops();
    p.source = path.source();
    return p;
}

Rng substream(std::uint64_t master_seed, std::uint64_t trial, std::uint64_t tag)
{
    std::uint64_t s = splitmix64(master_seed);
    s = splitmix64(s ^ trial);
    s = splitmix64(s ^ (tag * 0xd1b54a32d192ed03ULL));
    return Rng(s);
}

}  // namespace provtrace
