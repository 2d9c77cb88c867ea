// provtrace: Monte Carlo error rates, operation-count grids, path-check
// sweeps and single-trial traces for edge-embedded provenance recovery.

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "provtrace/network_model.hpp"
#include "provtrace/path_constraints.hpp"
#include "provtrace/sim_harness.hpp"
#include "provtrace/sparse_solvers.hpp"

namespace {

using namespace provtrace;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

/// Argument problems detected after parsing (bad combinations, unknown
/// algorithm names); reported with exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

SignatureDistribution parse_distribution(const std::string& name)
{
    if (name == "gaussian") return SignatureDistribution::gaussian;
    if (name == "binary01") return SignatureDistribution::binary01;
    throw UsageError("unknown signature distribution '" + name + "'");
}

CorrelationMode parse_mode(const std::string& name)
{
    if (name == "signed") return CorrelationMode::signed_value;
    if (name == "absolute") return CorrelationMode::absolute_value;
    throw UsageError("unknown correlation mode '" + name + "'");
}

std::string describe(const PathVector& path)
{
    std::ostringstream out;
    out << path.source();
    for (const Edge& e : path.edges) out << " -> " << e.to;
    return out.str();
}

template <class Report>
void emit(const std::string& out, const Report& report)
{
    if (out.empty() || out == "-") {
        write_csv(std::cout, report);
    } else {
        write_csv(std::filesystem::path(out), report);
    }
}

struct SimulateArgs {
    int nodes = 6;
    int hops = 3;
    std::vector<int> signature_lengths{8, 12, 16, 20, 24};
    int list_size = 3;
    int gomp_v = 2;
    int gomp_w = 3;
    std::vector<std::string> algorithms{"omp", "l_omp", "pl_omp", "gomp", "l_gomp"};
    std::int64_t trials = 10'000;
    std::uint64_t seed = 0;
    std::string distribution = "gaussian";
    std::string correlation = "signed";
    bool timing = false;
    std::string out = "-";
};

int run_simulate(const SimulateArgs& a)
{
    ExperimentSpec spec;
    for (const auto& name : a.algorithms) {
        try {
            spec.algorithms.push_back(parse_algorithm(name));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    spec.nodes = a.nodes;
    spec.hops = a.hops;
    spec.list_size = a.list_size;
    spec.gomp_v = a.gomp_v;
    spec.gomp_w = a.gomp_w;
    spec.signature_lengths = a.signature_lengths;
    spec.trials = a.trials;
    spec.seed = a.seed;
    spec.distribution = parse_distribution(a.distribution);
    spec.mode = parse_mode(a.correlation);
    spec.record_timing = a.timing;
    try {
        spec.validate();
    } catch (const std::logic_error& e) {
        throw UsageError(e.what());
    }
    emit(a.out, run_trials(spec));
    return 0;
}

struct ComplexityArgs {
    int nodes = 15;
    int signature_length = 8;
    int list_max = 4;
    int hops_max = 5;
    std::string out = "-";
};

int run_complexity(const ComplexityArgs& a)
{
    if (a.nodes < 1 || a.signature_length < 1 || a.list_max < 1 || a.hops_max < 2) {
        throw UsageError("complexity needs n, m, L_max >= 1 and h_max >= 2");
    }
    emit(a.out, complexity_grid(a.nodes, a.signature_length, a.list_max, a.hops_max));
    return 0;
}

struct OracleCheckArgs {
    int nodes = 5;
    int hops_max = 4;
};

int run_oracle_check(const OracleCheckArgs& a)
{
    if (a.nodes < 3 || a.hops_max < 2 || a.hops_max > a.nodes - 1) {
        throw UsageError("oracle-check needs n >= 3 and 2 <= h_max <= n-1");
    }
    bool clean = true;
    std::cout << "path check vs traversal (n=" << a.nodes << ")\n";
    std::cout << "  h  vectors  is_path  traversal  is_path_only  traversal_only  true_paths  rejected  wrong_source\n";
    for (int h = 2; h <= a.hops_max; ++h) {
        const PathSweepSummary s = path_check_sweep(a.nodes, h);
        std::cout << std::setw(3) << h << std::setw(9) << s.vectors << std::setw(9) << s.algebraic_accepts
                  << std::setw(11) << s.oracle_accepts << std::setw(14) << s.algebraic_only << std::setw(16)
                  << s.oracle_only << std::setw(12) << s.true_paths << std::setw(10) << s.true_paths_rejected
                  << std::setw(14) << s.wrong_source << '\n';
        clean = clean && s.algebraic_only == 0 && s.oracle_only == 0 && s.true_paths_rejected == 0 &&
                s.wrong_source == 0;
    }
    std::cout << "missing-link restoration (n=" << a.nodes << ")\n";
    std::cout << "  h   cases  restored\n";
    for (int h = 2; h <= a.hops_max; ++h) {
        const MissingLinkSweepSummary s = missing_link_sweep(a.nodes, h);
        std::cout << std::setw(3) << h << std::setw(8) << s.cases << std::setw(10) << s.restored << '\n';
        clean = clean && s.cases == s.restored;
    }
    std::cout << (clean ? "agreement: all sweeps consistent\n" : "agreement: DISCREPANCIES FOUND\n");
    return clean ? 0 : kExitRuntime;
}

struct DemoArgs {
    int nodes = 6;
    int hops = 3;
    int signature_length = 12;
    int list_size = 3;
    int gomp_v = 2;
    int gomp_w = 3;
    std::uint64_t seed = 1;
    std::int64_t trial = 0;
    std::string distribution = "gaussian";
};

int run_demo(const DemoArgs& a)
{
    const NetworkConfig config{a.nodes, a.hops, a.signature_length, parse_distribution(a.distribution), a.seed};
    SolverOptions options;
    try {
        config.validate();
        options.list_size = a.list_size;
        options.gomp = GompParams(a.gomp_v, a.gomp_w);
        options.gomp.iterations(a.hops, a.signature_length);
        if (a.list_size < 1) throw std::invalid_argument("list size must be at least 1");
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    const TrialInstance inst = make_instance(config, a.trial);
    const EdgeVector truth = inst.path.to_edge_vector();
    std::cout << "network: n=" << a.nodes << " h=" << a.hops << " m=" << a.signature_length << " seed=" << a.seed
              << " trial=" << a.trial << '\n';
    std::cout << "traveled path: " << describe(inst.path) << "  columns:";
    for (const Edge& e : inst.path.edges) std::cout << ' ' << edge_to_column(e.from, e.to, a.nodes);
    std::cout << '\n';
    std::cout << "provenance y:" << std::fixed << std::setprecision(4);
    for (Eigen::Index k = 0; k < inst.provenance.y.size(); ++k) std::cout << ' ' << inst.provenance.y[k];
    std::cout << "\nhop counter: " << inst.provenance.hops << "  source: " << inst.provenance.source << "\n\n";

    const SupportSet trace = gamma_omp(inst.provenance, inst.signatures, GammaTuple::ones(a.hops), false);
    std::cout << "OMP iterations:\n";
    for (std::size_t k = 0; k < trace.edges.size(); ++k) {
        std::cout << "  " << k + 1 << ": picked (" << trace.edges[k].from << "," << trace.edges[k].to
                  << ")  residual norm " << trace.residual_norms[k + 1] << '\n';
    }
    std::cout << '\n';

    for (Algorithm alg : {Algorithm::omp, Algorithm::l_omp, Algorithm::pl_omp, Algorithm::gomp, Algorithm::l_gomp,
                          Algorithm::oracle}) {
        const RecoveryResult r = recover(alg, inst.provenance, inst.signatures, options);
        std::cout << std::left << std::setw(8) << to_string(alg) << std::right;
        if (r.recovered) {
            const bool correct = r.recovered->to_edge_vector() == truth;
            std::cout << describe(*r.recovered) << "  residue " << r.residue << (correct ? "  [correct]" : "  [wrong]");
        } else {
            std::cout << "no path recovered  [wrong]";
        }
        std::cout << "  candidates " << r.candidates_total << ", path-feasible " << r.candidates_path_feasible << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Edge-embedded provenance recovery with path-aware OMP"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo error rates as CSV");
    simulate->add_option("--nodes", sim.nodes, "Node count n (destination is n)")->capture_default_str();
    simulate->add_option("--hops", sim.hops, "Hop length h")->capture_default_str();
    simulate->add_option("--sig-len-list", sim.signature_lengths, "Ascending signature lengths m")
        ->delimiter(',')
        ->capture_default_str();
    simulate->add_option("--list-size", sim.list_size, "List width L for l_omp and pl_omp")->capture_default_str();
    simulate->add_option("--gomp-v", sim.gomp_v, "gOMP columns per iteration")->capture_default_str();
    simulate->add_option("--gomp-w", sim.gomp_w, "L-gOMP candidate width")->capture_default_str();
    simulate->add_option("--algorithms", sim.algorithms, "omp,l_omp,pl_omp,gomp,l_gomp,oracle")
        ->delimiter(',')
        ->capture_default_str();
    simulate->add_option("--trials", sim.trials, "Packets per (algorithm, m)")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
    simulate->add_option("--sig-dist", sim.distribution, "gaussian or binary01")->capture_default_str();
    simulate->add_option("--correlation", sim.correlation, "signed or absolute")->capture_default_str();
    simulate->add_flag("--timing", sim.timing, "Record elapsed_ms (makes output run-dependent)");
    simulate->add_option("--out", sim.out, "Output CSV path, '-' for stdout")->capture_default_str();

    ComplexityArgs cx;
    auto* complexity = app.add_subcommand("complexity", "Operation-count grid for L-OMP vs PL-OMP as CSV");
    complexity->add_option("--nodes", cx.nodes)->capture_default_str();
    complexity->add_option("--sig-len", cx.signature_length)->capture_default_str();
    complexity->add_option("--list-max", cx.list_max)->capture_default_str();
    complexity->add_option("--hops-max", cx.hops_max)->capture_default_str();
    complexity->add_option("--out", cx.out)->capture_default_str();

    OracleCheckArgs oc;
    auto* oracle_check = app.add_subcommand("oracle-check", "Exhaustive path-check and missing-link sweeps");
    oracle_check->add_option("--nodes", oc.nodes)->capture_default_str();
    oracle_check->add_option("--hops-max", oc.hops_max)->capture_default_str();

    DemoArgs demo;
    auto* demo_cmd = app.add_subcommand("demo", "Trace a single trial through every algorithm");
    demo_cmd->add_option("--nodes", demo.nodes)->capture_default_str();
    demo_cmd->add_option("--hops", demo.hops)->capture_default_str();
    demo_cmd->add_option("--sig-len", demo.signature_length)->capture_default_str();
    demo_cmd->add_option("--list-size", demo.list_size)->capture_default_str();
    demo_cmd->add_option("--gomp-v", demo.gomp_v)->capture_default_str();
    demo_cmd->add_option("--gomp-w", demo.gomp_w)->capture_default_str();
    demo_cmd->add_option("--seed", demo.seed)->capture_default_str();
    demo_cmd->add_option("--trial", demo.trial)->capture_default_str();
    demo_cmd->add_option("--sig-dist", demo.distribution)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) return app.exit(e);
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*simulate) return run_simulate(sim);
        if (*complexity) return run_complexity(cx);
        if (*oracle_check) return run_oracle_check(oc);
        if (*demo_cmd) return run_demo(demo);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
