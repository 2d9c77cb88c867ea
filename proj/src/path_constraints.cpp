#include "provtrace/path_constraints.hpp"

#include <stdexcept>
#include <string>

namespace provtrace {

namespace {

std::vector<IntMatrix> powers_up_to(const IntMatrix& w, int max_power)
{
    std::vector<IntMatrix> out;
    out.reserve(static_cast<std::size_t>(max_power));
    if (max_power < 1) return out;
    out.push_back(w);
    for (int t = 2; t <= max_power; ++t) out.push_back(out.back() * w);
    return out;
}

}  // namespace

LiftedVector lift(const EdgeVector& x)
{
    const int n = x.nodes();
    LiftedVector out{n, std::vector<std::uint8_t>(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0)};
    for (std::size_t c : x.indices()) {
        const Edge e = column_to_edge(c + 1, n);
        out.entries[static_cast<std::size_t>(e.from - 1) * static_cast<std::size_t>(n) + static_cast<std::size_t>(e.to - 1)] = 1;
    }
    return out;
}

IntMatrix adjacency(const EdgeVector& x)
{
    const LiftedVector lifted = lift(x);
    const int n = lifted.nodes;
    IntMatrix w = IntMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) w(i, j) = lifted.entries[static_cast<std::size_t>(i * n + j)];
    return w;
}

IntMatrix matrix_power(const IntMatrix& w, int power)
{
    if (power < 0) throw std::invalid_argument("negative matrix power");
    IntMatrix out = IntMatrix::Identity(w.rows(), w.cols());
    for (int t = 0; t < power; ++t) out = out * w;
    return out;
}

PathCheck is_path(const EdgeVector& x, int hops)
{
    PathCheck check;
    if (hops < 1 || x.count() != static_cast<std::size_t>(hops)) {
        check.sparsity_mismatch = true;
        return check;
    }

    const int n = x.nodes();
    const auto powers = powers_up_to(adjacency(x), hops);
    int matches = 0;
    for (int i = 0; i < n - 1; ++i) {
        if (powers[static_cast<std::size_t>(hops - 1)](i, n - 1) != 1) continue;
        bool shorter = false;
        for (int t = 0; t < hops - 1 && !shorter; ++t) shorter = powers[static_cast<std::size_t>(t)](i, n - 1) != 0;
        if (shorter) continue;
        ++matches;
        check.source = i + 1;
    }
    // a genuine h-path has exactly one source
    if (matches != 1) check.source.reset();
    return check;
}

bool brute_force_path_oracle(const EdgeVector& x, int hops)
{
    const int n = x.nodes();
    const std::vector<Edge> edges = x.edges();
    if (hops < 1 || edges.size() != static_cast<std::size_t>(hops)) return false;

    std::vector<int> next(static_cast<std::size_t>(n + 1), 0);
    std::vector<int> in_degree(static_cast<std::size_t>(n + 1), 0);
    for (const Edge& e : edges) {
        if (next[static_cast<std::size_t>(e.from)] != 0) return false;
        next[static_cast<std::size_t>(e.from)] = e.to;
        ++in_degree[static_cast<std::size_t>(e.to)];
    }

    int start = 0;
    for (int v = 1; v < n; ++v) {
        if (next[static_cast<std::size_t>(v)] != 0 && in_degree[static_cast<std::size_t>(v)] == 0) {
            if (start != 0) return false;
            start = v;
        }
    }
    if (start == 0) return false;

    std::vector<bool> visited(static_cast<std::size_t>(n + 1), false);
    int at = start;
    for (int step = 0; step < hops; ++step) {
        if (at == n || visited[static_cast<std::size_t>(at)]) return false;
        visited[static_cast<std::size_t>(at)] = true;
        at = next[static_cast<std::size_t>(at)];
        if (at == 0) return false;
    }
    return at == n;
}

PathVector order_path(const EdgeVector& x, int source)
{
    const int n = x.nodes();
    PathVector path{n, {}};
    int at = source;
    const std::size_t hops = x.count();
    while (path.edges.size() < hops && at != n) {
        bool advanced = false;
        for (int to = 1; to <= n && !advanced; ++to) {
            if (to != at && x.contains({at, to})) {
                path.edges.push_back({at, to});
                at = to;
                advanced = true;
            }
        }
        if (!advanced) break;
    }
    if (path.edges.size() != hops || at != n) {
        throw std::logic_error("edge vector is not a path from node " + std::to_string(source));
    }
    return path;
}

ReachMatrices reach_matrices(const IntMatrix& w, int source, int hops)
{
    if (hops < 2) throw std::domain_error("reach matrices need h >= 2");
    const Eigen::Index n = w.rows();
    const auto powers = powers_up_to(w, hops - 1);
    ReachMatrices out{IntMatrix::Zero(n, hops - 1), IntMatrix::Zero(n, hops - 1)};
    for (int t = 0; t < hops - 1; ++t) {
        out.from_source.col(t) = powers[static_cast<std::size_t>(t)].row(source - 1).transpose();
        out.to_destination.col(t) = powers[static_cast<std::size_t>(t)].col(n - 1);
    }
    return out;
}

ChainLength find_length(const IntMatrix& reach)
{
    ChainLength out;
    const Eigen::Index relays = reach.rows() - 1;   // rows 1..n-1
    const Eigen::Index steps = reach.cols();
    for (Eigen::Index iter = 0; iter < steps; ++iter) {
        // probe is the unit vector e_iter
        int matched = 0;
        int node = 0;
        for (Eigen::Index i = 0; i < relays; ++i) {
            bool equal = true;
            for (Eigen::Index t = 0; t < steps && equal; ++t) equal = reach(i, t) == (t == iter ? 1 : 0);
            if (equal) {
                ++matched;
                node = static_cast<int>(i) + 1;
            }
        }
        if (matched == 0) break;
        if (matched > 1) {
            out.ambiguous = true;
            return out;
        }
        ++out.length;
        out.node = node;
    }
    return out;
}

MissingLinkResult missing_link_check(const EdgeVector& x, int source, int hops)
{
    const int n = x.nodes();
    if (hops < 1 || x.count() != static_cast<std::size_t>(hops - 1)) {
        throw std::domain_error("missing-link candidate must have h-1 edges");
    }

    MissingLinkResult result;
    result.node_a = source;
    result.node_b = n;
    if (hops == 1) {
        result.status = MissingLinkStatus::missing_link;
        result.link = Edge{source, n};
        return result;
    }

    const IntMatrix w = adjacency(x);
    if ((w.rowwise().sum().array() > 1).any() || (w.colwise().sum().array() > 1).any()) {
        return result;
    }

    const ReachMatrices reach = reach_matrices(w, source, hops);
    const ChainLength prefix = find_length(reach.from_source);
    const ChainLength suffix = find_length(reach.to_destination);
    if (prefix.ambiguous || suffix.ambiguous) {
        result.status = MissingLinkStatus::degenerate_reject;
        return result;
    }

    result.prefix_length = prefix.length;
    result.suffix_length = suffix.length;
    result.node_a = prefix.node.value_or(source);
    result.node_b = suffix.node.value_or(n);
    if (result.prefix_length + result.suffix_length != hops - 1) return result;

    // Chains that close a cycle through the source can still satisfy the
    // length count; only accept links that really complete an h-path.
    const Edge link{result.node_a, result.node_b};
    if (link.from == n || link.from == link.to || x.contains(link)) {
        result.status = MissingLinkStatus::degenerate_reject;
        return result;
    }
    const PathCheck completed = is_path(complete_path(x, link), hops);
    if (completed.source != source) {
        result.status = MissingLinkStatus::degenerate_reject;
        return result;
    }
    result.status = MissingLinkStatus::missing_link;
    result.link = link;
    return result;
}

EdgeVector complete_path(const EdgeVector& x, Edge link)
{
    const int n = x.nodes();
    if (!EdgeIndexMap(n).valid(link)) {
        throw std::domain_error("link (" + std::to_string(link.from) + "," + std::to_string(link.to) +
                                ") is not a dictionary edge");
    }
    if (x.contains(link)) throw std::domain_error("link already present in candidate");
    EdgeVector out = x;
    out.set(link);
    return out;
}

}  // namespace provtrace
