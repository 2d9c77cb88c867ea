// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Usage: acceptance --cli <path-to-provtrace>

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "provtrace/numerics.hpp"
#include "provtrace/sim_harness.hpp"
#include "provtrace/sparse_solvers.hpp"
#include "support/test_support.hpp"

namespace {

using namespace provtrace;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    std::string name;
    double limit_seconds;   // 0 = no runtime bound
    std::function<Outcome()> run;
};

double slack(std::int64_t errors, std::int64_t trials)
{
    const double e = static_cast<double>(errors);
    return 2.0 * std::sqrt(e * (1.0 - e / static_cast<double>(trials)));
}

/// Paired runs shared by the ordering criteria.
const ErrorRateReport& ordering_runs()
{
    static const ErrorRateReport report = [] {
        ExperimentSpec spec;
        spec.algorithms = {Algorithm::omp, Algorithm::l_omp, Algorithm::pl_omp, Algorithm::gomp, Algorithm::l_gomp};
        spec.nodes = 6;
        spec.hops = 3;
        spec.list_size = 3;
        spec.signature_lengths = {8, 12, 16, 20, 24};
        spec.trials = 2000;
        spec.seed = 42;
        return run_trials(spec);
    }();
    return report;
}

Outcome oracle_soundness()
{
    ExperimentSpec spec;
    spec.algorithms = {Algorithm::oracle};
    spec.nodes = 6;
    spec.hops = 3;
    spec.signature_lengths = {8};
    spec.trials = 500;
    spec.seed = 42;
    const ErrorRateRow row = run_trials(spec).rows.at(0);
    return {row.errors == 0, std::to_string(row.errors) + "/500 errors"};
}

Outcome path_check_equivalence()
{
    std::int64_t violations = 0;
    std::int64_t vectors = 0;
    std::ostringstream detail;
    for (int n : {4, 5}) {
        for (int h : {2, 3, 4}) {
            const PathSweepSummary s = path_check_sweep(n, h);
            vectors += s.vectors;
            const std::int64_t v = s.algebraic_only + s.oracle_only + s.true_paths_rejected + s.wrong_source;
            if (v != 0) detail << " n=" << n << ",h=" << h << ":" << v;
            violations += v;
        }
    }
    return {violations == 0, std::to_string(vectors) + " vectors, " + std::to_string(violations) + " violations" +
                                 detail.str()};
}

Outcome missing_link_round_trip()
{
    std::int64_t cases = 0;
    std::int64_t restored = 0;
    for (int h = 2; h <= 5; ++h) {
        const MissingLinkSweepSummary s = missing_link_sweep(6, h);
        cases += s.cases;
        restored += s.restored;
    }
    return {cases > 0 && restored == cases, std::to_string(restored) + "/" + std::to_string(cases) + " restored"};
}

Outcome list_upper_bound()
{
    const ErrorRateReport& report = ordering_runs();
    bool pass = true;
    std::ostringstream detail;
    for (int m : {8, 12, 16}) {
        const ErrorRateRow& pl = report.at(Algorithm::pl_omp, m);
        const ErrorRateRow& l = report.at(Algorithm::l_omp, m);
        const bool ok = static_cast<double>(pl.errors) <= static_cast<double>(l.errors) + slack(l.errors, l.trials);
        pass = pass && ok;
        detail << " m=" << m << ":" << pl.errors << "<=" << l.errors;
    }
    return {pass, "pl_omp vs l_omp errors" + detail.str()};
}

Outcome error_rate_orderings()
{
    const ErrorRateReport& report = ordering_runs();
    bool pass = true;
    int window = 0;
    std::ostringstream detail;
    for (int m : {8, 12, 16, 20, 24}) {
        const ErrorRateRow& o = report.at(Algorithm::omp, m);
        if (!(o.error_rate > 0.05 && o.error_rate < 0.95)) continue;
        ++window;
        const ErrorRateRow& l = report.at(Algorithm::l_omp, m);
        const ErrorRateRow& g = report.at(Algorithm::gomp, m);
        const ErrorRateRow& lg = report.at(Algorithm::l_gomp, m);
        const bool ok = static_cast<double>(l.errors) <= static_cast<double>(o.errors) + slack(o.errors, o.trials) &&
                        static_cast<double>(lg.errors) <= static_cast<double>(g.errors) + slack(g.errors, g.trials);
        pass = pass && ok;
        detail << " m=" << m << ":omp=" << o.errors << ",l_omp=" << l.errors << ",gomp=" << g.errors
               << ",l_gomp=" << lg.errors;
    }
    for (Algorithm a : {Algorithm::omp, Algorithm::l_omp, Algorithm::pl_omp, Algorithm::gomp, Algorithm::l_gomp}) {
        const bool ok = report.at(a, 24).error_rate <= report.at(a, 8).error_rate;
        if (!ok) detail << " " << to_string(a) << " rate rises from m=8 to m=24";
        pass = pass && ok;
    }
    return {pass && window > 0, std::to_string(window) + " m values in window;" + detail.str()};
}

Outcome collapse_to_omp()
{
    int mismatches = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const int n = 5 + static_cast<int>(seed % 4);
        const int h = 2 + static_cast<int>(seed % 3);
        const auto inst = reference::gaussian_instance(n, h, 12, 7000 + seed);
        const SupportSet s = gamma_omp(inst.provenance, inst.signatures, GammaTuple::ones(h), false);
        if (s.columns != reference::reference_omp(inst.signatures.matrix(), inst.provenance.y, h)) ++mismatches;
    }
    return {mismatches == 0, std::to_string(mismatches) + "/100 support mismatches"};
}

Outcome complexity_savings()
{
    const auto grid = complexity_grid(15, 8, 4, 5);
    std::int64_t smallest = grid.empty() ? 0 : grid.front().savings;
    bool pass = grid.size() == 16;
    for (const auto& c : grid) {
        pass = pass && c.savings > 0 && c.savings == c.lomp_ops - c.plomp_ops;
        smallest = std::min(smallest, c.savings);
    }
    return {pass, std::to_string(grid.size()) + " grid points, min savings " + std::to_string(smallest)};
}

Outcome numerics_identities()
{
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> normal;
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const Eigen::Index m = 4 + k % 29;
        const Eigen::Index cols = 1 + k % std::min<Eigen::Index>(m, 8);
        Eigen::MatrixXd a(m, cols);
        Eigen::VectorXd y(m);
        for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = normal(rng);
        for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = normal(rng);
        const ResidualState s = project_residual(a, y);
        const double lhs = s.residual.squaredNorm() + (y - s.residual).squaredNorm();
        worst = std::max(worst, std::abs(lhs - y.squaredNorm()) / y.squaredNorm());
    }

    int rises = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto inst = reference::gaussian_instance(8, 5, 16, 9000 + seed);
        const SupportSet s = gamma_omp(inst.provenance, inst.signatures, GammaTuple::ones(5), false);
        for (std::size_t k = 1; k < s.residual_norms.size(); ++k) {
            // nested projections; allow only rounding-level growth
            if (s.residual_norms[k] > s.residual_norms[k - 1] * (1.0 + 1e-12)) ++rises;
        }
    }
    std::ostringstream detail;
    detail << "worst relative Pythagoras error " << worst << ", " << rises << " residual increases";
    return {worst <= 1e-9 && rises == 0, detail.str()};
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome cli_determinism(const std::string& cli)
{
    const auto dir = std::filesystem::temp_directory_path() / ("provtrace_accept_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const std::string args =
        " simulate --nodes 6 --hops 3 --sig-len-list 8,12,16 --list-size 3"
        " --algorithms omp,l_omp,pl_omp,gomp,l_gomp --trials 300 --seed 42 --out ";
    std::vector<std::string> outputs;
    int failures = 0;
    for (const char* threads : {"1", "1", "4"}) {
        const auto file = dir / ("run" + std::to_string(outputs.size()) + ".csv");
        const std::string cmd = std::string("PROVTRACE_THREADS=") + threads + " \"" + cli + "\"" + args + "\"" +
                                file.string() + "\"";
        if (std::system(cmd.c_str()) != 0) ++failures;
        outputs.push_back(slurp(file));
    }
    std::filesystem::remove_all(dir);
    const bool same = outputs[0] == outputs[1] && outputs[0] == outputs[2];
    const bool nonempty = outputs[0].find('\n') != std::string::npos;
    return {failures == 0 && same && nonempty,
            std::to_string(outputs[0].size()) + " bytes, " + (same ? "identical" : "differ") + " across 3 runs"};
}

}  // namespace

int main(int argc, char** argv)
{
    std::string cli;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--cli") cli = argv[i + 1];
    }
    if (cli.empty()) {
        std::cerr << "usage: acceptance --cli <path-to-provtrace>\n";
        return 2;
    }

    const std::vector<Criterion> criteria{
        {"oracle_soundness", 30, oracle_soundness},
        {"path_check_equivalence", 60, path_check_equivalence},
        {"missing_link_round_trip", 10, missing_link_round_trip},
        {"pl_omp_bounded_by_l_omp", 300, list_upper_bound},
        {"error_rate_orderings", 0, error_rate_orderings},
        {"gamma_omp_collapse", 0, collapse_to_omp},
        {"complexity_savings", 0, complexity_savings},
        {"numerics_identities", 0, numerics_identities},
        {"cli_determinism", 0, [&] { return cli_determinism(cli); }},
    };

    int failed = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = c.limit_seconds == 0 || seconds < c.limit_seconds;
        const bool pass = o.pass && in_time;
        failed += !pass;
        std::ostringstream line;
        line << (pass ? "PASS " : "FAIL ") << c.name << ": " << o.detail << " [" << std::fixed
             << std::setprecision(2) << seconds << " s";
        if (c.limit_seconds > 0) line << " / limit " << c.limit_seconds << " s";
        line << "]";
        std::cout << line.str() << std::endl;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
