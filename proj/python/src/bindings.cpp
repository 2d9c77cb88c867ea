#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "provtrace/network_model.hpp"
#include "provtrace/path_constraints.hpp"
#include "provtrace/sim_harness.hpp"
#include "provtrace/sparse_solvers.hpp"

namespace py = pybind11;
using namespace provtrace;

namespace {

using EdgeList = std::vector<std::pair<int, int>>;

EdgeVector to_edge_vector(const EdgeList& edges, int nodes)
{
    EdgeVector x(nodes);
    for (const auto& [from, to] : edges) x.set(Edge{from, to});
    return x;
}

EdgeList to_list(const std::vector<Edge>& edges)
{
    EdgeList out;
    for (const Edge& e : edges) out.emplace_back(e.from, e.to);
    return out;
}

SignatureDistribution distribution_from(const std::string& name)
{
    if (name == "gaussian") return SignatureDistribution::gaussian;
    if (name == "binary01") return SignatureDistribution::binary01;
    throw py::value_error("distribution must be 'gaussian' or 'binary01'");
}

CorrelationMode mode_from(const std::string& name)
{
    if (name == "signed") return CorrelationMode::signed_value;
    if (name == "absolute") return CorrelationMode::absolute_value;
    throw py::value_error("correlation must be 'signed' or 'absolute'");
}

py::dict result_dict(const RecoveryResult& r)
{
    py::dict d;
    d["algorithm"] = std::string(to_string(r.algorithm));
    d["recovered"] = r.recovered ? py::cast(to_list(r.recovered->edges)) : py::none();
    d["residue"] = r.residue;
    d["candidates_total"] = r.candidates_total;
    d["candidates_path_feasible"] = r.candidates_path_feasible;
    return d;
}

py::dict complexity_dict(const ComplexityEstimate& c)
{
    py::dict d;
    d["n"] = c.nodes;
    d["h"] = c.hops;
    d["L"] = c.list_size;
    d["m"] = c.signature_length;
    d["lomp_ops"] = c.lomp_ops;
    d["plomp_ops"] = c.plomp_ops;
    d["savings"] = c.savings;
    return d;
}

}  // namespace

PYBIND11_MODULE(_provtrace, m)
{
    m.doc() = "Edge-embedded provenance recovery with path-aware OMP";

    py::register_exception<std::domain_error>(m, "DomainError", PyExc_ValueError);

    py::list names;
    for (Algorithm a : {Algorithm::omp, Algorithm::l_omp, Algorithm::pl_omp, Algorithm::gomp, Algorithm::l_gomp,
                        Algorithm::oracle}) {
        names.append(std::string(to_string(a)));
    }
    m.attr("ALGORITHMS") = py::tuple(names);

    m.def("edge_to_column", &edge_to_column, py::arg("i"), py::arg("j"), py::arg("n"),
          "1-based dictionary column of edge (i, j).");
    m.def(
        "column_to_edge",
        [](std::size_t c, int n) {
            const Edge e = column_to_edge(c, n);
            return std::make_pair(e.from, e.to);
        },
        py::arg("c"), py::arg("n"));

    m.def(
        "generate_signatures",
        [](int nodes, int signature_length, const std::string& distribution, std::uint64_t seed) {
            const NetworkConfig config{nodes, 1, signature_length, distribution_from(distribution), seed};
            Rng rng(seed);
            return Eigen::MatrixXd(generate_signatures(config, rng).matrix());
        },
        py::arg("n"), py::arg("m"), py::arg("distribution") = "gaussian", py::arg("seed") = 0,
        "m x (n-1)^2 signature dictionary.");

    m.def(
        "sample_path",
        [](int nodes, int hops, std::uint64_t seed) {
            const NetworkConfig config{nodes, hops, 1, SignatureDistribution::gaussian, seed};
            Rng rng(seed);
            return to_list(sample_path(config, rng).edges);
        },
        py::arg("n"), py::arg("h"), py::arg("seed") = 0);

    m.def(
        "embed_provenance",
        [](const EdgeList& path, const Eigen::MatrixXd& signatures, int nodes) {
            PathVector p{nodes, {}};
            for (const auto& [from, to] : path) p.edges.push_back({from, to});
            return Eigen::VectorXd(embed_provenance(p, SignatureMatrix(nodes, signatures)).y);
        },
        py::arg("path"), py::arg("signatures"), py::arg("n"));

    m.def(
        "is_path",
        [](const EdgeList& edges, int hops, int nodes) -> std::optional<int> {
            return is_path(to_edge_vector(edges, nodes), hops).source;
        },
        py::arg("edges"), py::arg("h"), py::arg("n"), "Source node if the edges form an h-hop path to n, else None.");

    m.def(
        "brute_force_path_oracle",
        [](const EdgeList& edges, int hops, int nodes) {
            return brute_force_path_oracle(to_edge_vector(edges, nodes), hops);
        },
        py::arg("edges"), py::arg("h"), py::arg("n"));

    m.def(
        "missing_link_check",
        [](const EdgeList& edges, int source, int hops, int nodes) {
            const MissingLinkResult r = missing_link_check(to_edge_vector(edges, nodes), source, hops);
            py::dict d;
            switch (r.status) {
            case MissingLinkStatus::missing_link: d["status"] = "missing_link"; break;
            case MissingLinkStatus::not_missing_link: d["status"] = "not_missing_link"; break;
            case MissingLinkStatus::degenerate_reject: d["status"] = "degenerate_reject"; break;
            }
            d["a"] = r.prefix_length;
            d["b"] = r.suffix_length;
            d["node_a"] = r.node_a;
            d["node_b"] = r.node_b;
            d["link"] = r.link ? py::cast(std::make_pair(r.link->from, r.link->to)) : py::none();
            return d;
        },
        py::arg("edges"), py::arg("source"), py::arg("h"), py::arg("n"));

    m.def(
        "recover",
        [](const std::string& algorithm, const Eigen::VectorXd& y, int hops, int source,
           const Eigen::MatrixXd& signatures, int nodes, int list_size, int gomp_v, int gomp_w,
           const std::string& correlation) {
            Algorithm alg;
            try {
                alg = parse_algorithm(algorithm);
            } catch (const std::invalid_argument& e) {
                throw py::value_error(e.what());
            }
            SolverOptions options;
            options.list_size = list_size;
            options.gomp = GompParams(gomp_v, gomp_w);
            options.mode = mode_from(correlation);
            const Provenance provenance{y, hops, source};
            return result_dict(recover(alg, provenance, SignatureMatrix(nodes, signatures), options));
        },
        py::arg("algorithm"), py::arg("y"), py::arg("h"), py::arg("source"), py::arg("signatures"), py::arg("n"),
        py::arg("list_size") = 3, py::arg("gomp_v") = 2, py::arg("gomp_w") = 3, py::arg("correlation") = "signed");

    m.def(
        "complexity_estimate",
        [](int n, int h, int list_size, int signature_length) {
            return complexity_dict(complexity_estimate(n, h, list_size, signature_length));
        },
        py::arg("n"), py::arg("h"), py::arg("L"), py::arg("m"));

    m.def(
        "complexity_grid",
        [](int n, int signature_length, int list_max, int hops_max) {
            std::ostringstream out;
            write_csv(out, complexity_grid(n, signature_length, list_max, hops_max));
            return out.str();
        },
        py::arg("n") = 15, py::arg("m") = 8, py::arg("list_max") = 4, py::arg("hops_max") = 5,
        "Complexity grid as CSV text.");

    m.def(
        "run_trials",
        [](const std::vector<std::string>& algorithms, int nodes, int hops, const std::vector<int>& signature_lengths,
           std::int64_t trials, std::uint64_t seed, int list_size, int gomp_v, int gomp_w,
           const std::string& distribution) {
            ExperimentSpec spec;
            for (const auto& a : algorithms) spec.algorithms.push_back(parse_algorithm(a));
            spec.nodes = nodes;
            spec.hops = hops;
            spec.signature_lengths = signature_lengths;
            spec.trials = trials;
            spec.seed = seed;
            spec.list_size = list_size;
            spec.gomp_v = gomp_v;
            spec.gomp_w = gomp_w;
            spec.distribution = distribution_from(distribution);
            ErrorRateReport report;
            {
                py::gil_scoped_release release;
                report = run_trials(spec);
            }
            std::ostringstream out;
            write_csv(out, report);
            return out.str();
        },
        py::arg("algorithms"), py::arg("n"), py::arg("h"), py::arg("m_values"), py::arg("trials"),
        py::arg("seed") = 0, py::arg("list_size") = 3, py::arg("gomp_v") = 2, py::arg("gomp_w") = 3,
        py::arg("distribution") = "gaussian", "Error-rate report as CSV text.");
}
