#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "provtrace/sim_harness.hpp"

using namespace provtrace;

namespace {

ExperimentSpec small_spec()
{
    ExperimentSpec spec;
    spec.algorithms = {Algorithm::omp, Algorithm::l_omp, Algorithm::pl_omp, Algorithm::gomp};
    spec.nodes = 6;
    spec.hops = 3;
    spec.signature_lengths = {6, 10};
    spec.trials = 60;
    spec.seed = 42;
    return spec;
}

std::string csv_text(const ErrorRateReport& report)
{
    std::ostringstream out;
    write_csv(out, report);
    return out.str();
}

class ScopedEnv {
public:
    ScopedEnv(const char* name, const char* value) : name_(name)
    {
        if (const char* old = std::getenv(name)) old_ = old;
        ::setenv(name, value, 1);
    }
    ~ScopedEnv()
    {
        if (old_.empty()) {
            ::unsetenv(name_);
        } else {
            ::setenv(name_, old_.c_str(), 1);
        }
    }

private:
    const char* name_;
    std::string old_;
};

}  // namespace

TEST(Complexity, Examples)
{
    const ComplexityEstimate single = complexity_estimate(15, 1, 1, 8);
    EXPECT_EQ(single.plomp_ops, 15);

    const ComplexityEstimate two = complexity_estimate(15, 2, 1, 8);
    EXPECT_EQ(two.plomp_ops, 3405);
    EXPECT_EQ(two.lomp_ops, 8376);
    EXPECT_EQ(two.savings, 8376 - 3405);
}

TEST(Complexity, GridShapeAndSavings)
{
    const auto grid = complexity_grid(15, 8, 4, 5);
    ASSERT_EQ(grid.size(), 16u);
    EXPECT_EQ(grid.front().hops, 2);
    EXPECT_EQ(grid.front().list_size, 1);
    EXPECT_EQ(grid[1].hops, 2);
    EXPECT_EQ(grid[1].list_size, 2);
    EXPECT_EQ(grid.back().hops, 5);
    EXPECT_EQ(grid.back().list_size, 4);
    for (const auto& c : grid) {
        EXPECT_GT(c.savings, 0) << "h=" << c.hops << " L=" << c.list_size;
        EXPECT_EQ(c.savings, c.lomp_ops - c.plomp_ops);
    }
}

TEST(Complexity, ListOmpCostGrowsWithListSize)
{
    for (int h = 2; h <= 5; ++h) {
        for (int l = 1; l < 6; ++l) {
            EXPECT_LT(complexity_estimate(15, h, l, 8).lomp_ops, complexity_estimate(15, h, l + 1, 8).lomp_ops);
        }
    }
}

TEST(Complexity, RejectsBadInputAndOverflow)
{
    EXPECT_THROW(complexity_estimate(15, 0, 1, 8), std::invalid_argument);
    EXPECT_THROW(complexity_estimate(15, 2, 0, 8), std::invalid_argument);
    EXPECT_THROW(complexity_estimate(1000, 30, 50, 8), std::overflow_error);
}

TEST(Csv, EmptyReportIsHeaderOnly)
{
    EXPECT_EQ(csv_text({}), std::string(kErrorRateHeader) + "\n");
    std::ostringstream out;
    write_csv(out, std::vector<ComplexityEstimate>{});
    EXPECT_EQ(out.str(), std::string(kComplexityHeader) + "\n");
}

TEST(Csv, RowFormatting)
{
    ErrorRateReport report;
    report.rows.push_back({Algorithm::pl_omp, 6, 3, 8, 3, 2, 3, 7, 0, 0.0, 42, 0});
    report.rows.push_back({Algorithm::omp, 6, 3, 8, 3, 2, 3, 3, 1, 1.0 / 3.0, 42, 0});
    EXPECT_EQ(csv_text(report), std::string(kErrorRateHeader) +
                                    "\npl_omp,6,3,8,3,2,3,7,0,0.000000,42,0\nomp,6,3,8,3,2,3,3,1,0.333333,42,0\n");
}

TEST(Csv, ErrorRateRoundTrip)
{
    const ErrorRateReport report = run_trials(small_spec(), 1);
    std::istringstream in(csv_text(report));
    const ErrorRateReport back = read_error_rate_csv(in);
    EXPECT_EQ(back, report);
}

TEST(Csv, ComplexityRoundTrip)
{
    const auto grid = complexity_grid(15, 8, 4, 5);
    std::stringstream io;
    write_csv(io, grid);
    EXPECT_EQ(read_complexity_csv(io), grid);
}

TEST(Csv, RejectsMalformedInput)
{
    std::istringstream wrong_header("algorithm,n\n");
    EXPECT_THROW(read_error_rate_csv(wrong_header), std::runtime_error);
    std::istringstream bad_rate(std::string(kErrorRateHeader) + "\nomp,6,3,8,3,2,3,4,1,0.500000,0,0\n");
    EXPECT_THROW(read_error_rate_csv(bad_rate), std::runtime_error);
    std::istringstream bad_name(std::string(kErrorRateHeader) + "\nfoo,6,3,8,3,2,3,4,1,0.250000,0,0\n");
    EXPECT_THROW(read_error_rate_csv(bad_name), std::runtime_error);
}

TEST(Csv, WriteErrorNamesThePath)
{
    const std::filesystem::path bad = "/nonexistent-dir/out.csv";
    try {
        write_csv(bad, ErrorRateReport{});
        FAIL() << "expected an exception";
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find(bad.string()), std::string::npos);
    }
}

TEST(RunTrials, RowOrderAndCounts)
{
    const ExperimentSpec spec = small_spec();
    const ErrorRateReport report = run_trials(spec, 2);
    ASSERT_EQ(report.rows.size(), 8u);
    EXPECT_EQ(report.rows[0].algorithm, Algorithm::omp);
    EXPECT_EQ(report.rows[0].signature_length, 6);
    EXPECT_EQ(report.rows[1].signature_length, 10);
    EXPECT_EQ(report.rows[2].algorithm, Algorithm::l_omp);
    for (const auto& row : report.rows) {
        EXPECT_EQ(row.trials, 60);
        EXPECT_GE(row.errors, 0);
        EXPECT_LE(row.errors, 60);
        EXPECT_EQ(row.elapsed_ms, 0);
    }
    EXPECT_EQ(&report.at(Algorithm::gomp, 10), &report.rows[7]);
    EXPECT_THROW(report.at(Algorithm::oracle, 10), std::out_of_range);
}

TEST(RunTrials, DeterministicAcrossRunsAndWorkers)
{
    const ExperimentSpec spec = small_spec();
    const std::string one = csv_text(run_trials(spec, 1));
    EXPECT_EQ(one, csv_text(run_trials(spec, 1)));
    EXPECT_EQ(one, csv_text(run_trials(spec, 3)));
}

TEST(RunTrials, OracleNeverFailsWithoutNoise)
{
    ExperimentSpec spec = small_spec();
    spec.algorithms = {Algorithm::oracle};
    spec.signature_lengths = {8};
    spec.trials = 100;
    EXPECT_EQ(run_trials(spec).rows.at(0).errors, 0);
}

TEST(RunTrials, PathsArePairedAcrossSignatureLengths)
{
    NetworkConfig a{6, 3, 8, SignatureDistribution::gaussian, 9};
    NetworkConfig b = a;
    b.signature_length = 12;
    for (std::int64_t t = 0; t < 20; ++t) {
        const TrialInstance x = make_instance(a, t);
        const TrialInstance y = make_instance(b, t);
        EXPECT_EQ(x.path.edges, y.path.edges);
        EXPECT_EQ(y.signatures.rows(), 12);
    }
}

TEST(RunTrials, Validation)
{
    ExperimentSpec spec = small_spec();
    spec.hops = 6;
    EXPECT_THROW(run_trials(spec), std::domain_error);

    spec = small_spec();
    spec.signature_lengths = {10, 6};
    EXPECT_THROW(run_trials(spec), std::invalid_argument);

    spec = small_spec();
    spec.signature_lengths = {};
    EXPECT_THROW(run_trials(spec), std::invalid_argument);

    spec = small_spec();
    spec.trials = 0;
    EXPECT_THROW(run_trials(spec), std::invalid_argument);

    spec = small_spec();
    spec.gomp_w = 2;
    EXPECT_THROW(run_trials(spec), std::invalid_argument);

    spec = small_spec();
    spec.signature_lengths = {1, 6};
    EXPECT_THROW(run_trials(spec), std::invalid_argument);

    spec = small_spec();
    spec.algorithms = {Algorithm::oracle};
    spec.nodes = 20;
    spec.hops = 8;
    EXPECT_THROW(run_trials(spec), std::invalid_argument);
}

TEST(RunTrials, WorkerCountFromEnvironment)
{
    {
        ScopedEnv env("PROVTRACE_THREADS", "3");
        EXPECT_EQ(worker_count(), 3u);
    }
    {
        ScopedEnv env("PROVTRACE_THREADS", "zero");
        EXPECT_GE(worker_count(), 1u);
    }
}

TEST(Sweeps, PathCheckHasNoViolations)
{
    for (int n : {4, 5}) {
        for (int h : {2, 3, 4}) {
            const PathSweepSummary s = path_check_sweep(n, h);
            EXPECT_EQ(s.algebraic_only, 0) << n << "," << h;
            EXPECT_EQ(s.oracle_only, 0) << n << "," << h;
            EXPECT_EQ(s.true_paths_rejected, 0);
            EXPECT_EQ(s.wrong_source, 0);
            EXPECT_EQ(s.algebraic_accepts, s.true_paths);
        }
    }
}

TEST(Sweeps, MissingLinkRestoresEveryDeletion)
{
    for (int h = 1; h <= 5; ++h) {
        const MissingLinkSweepSummary s = missing_link_sweep(6, h);
        EXPECT_EQ(s.cases, static_cast<std::int64_t>(path_count(6, h)) * h);
        EXPECT_EQ(s.restored, s.cases) << "h=" << h;
    }
}
