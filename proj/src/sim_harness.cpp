#include "provtrace/sim_harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <locale>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

#include "provtrace/enumerate.hpp"
#include "provtrace/path_constraints.hpp"

namespace provtrace {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("operation count overflows 64 bits");
    return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t out = 0;
    if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("operation count overflows 64 bits");
    return out;
}

std::int64_t checked_pow(std::int64_t base, int exponent)
{
    std::int64_t out = 1;
    for (int k = 0; k < exponent; ++k) out = checked_mul(out, base);
    return out;
}

std::vector<std::string> split_fields(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

template <class T>
T parse_number(const std::string& text, const char* what)
{
    T value{};
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        throw std::runtime_error(std::string("malformed ") + what + " field '" + text + "'");
    }
    return value;
}

std::string format_rate(double rate)
{
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out << std::fixed << std::setprecision(6) << rate;
    return out.str();
}

void expect_header(std::istream& in, const char* header)
{
    std::string line;
    if (!std::getline(in, line) || line != header) {
        throw std::runtime_error(std::string("expected CSV header '") + header + "'");
    }
}

template <class Report>
void write_file(const std::filesystem::path& path, const Report& report)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    write_csv(out, report);
    out.flush();
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace

void ExperimentSpec::validate() const
{
    if (algorithms.empty()) throw std::invalid_argument("no algorithms selected");
    if (signature_lengths.empty()) throw std::invalid_argument("signature length list is empty");
    if (!std::is_sorted(signature_lengths.begin(), signature_lengths.end()) ||
        std::adjacent_find(signature_lengths.begin(), signature_lengths.end()) != signature_lengths.end()) {
        throw std::invalid_argument("signature lengths must be strictly ascending");
    }
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (list_size < 1) throw std::invalid_argument("list size must be at least 1");
    if (hops > nodes - 1) {
        throw std::domain_error("no " + std::to_string(hops) + "-hop path exists with n=" + std::to_string(nodes));
    }
    NetworkConfig{nodes, hops, signature_lengths.front(), distribution, seed}.validate();

    if (uses_gomp()) {
        const GompParams params(gomp_v, gomp_w);
        params.iterations(hops, signature_lengths.front());
    }
    if (std::find(algorithms.begin(), algorithms.end(), Algorithm::oracle) != algorithms.end() &&
        path_count(nodes, hops) > kOracleEnumerationLimit) {
        throw std::invalid_argument("exhaustive oracle is not enumerable for this (n, h)");
    }
}

bool ExperimentSpec::uses_gomp() const
{
    return std::any_of(algorithms.begin(), algorithms.end(),
                       [](Algorithm a) { return a == Algorithm::gomp || a == Algorithm::l_gomp; });
}

const ErrorRateRow& ErrorRateReport::at(Algorithm algorithm, int signature_length) const
{
    for (const auto& row : rows) {
        if (row.algorithm == algorithm && row.signature_length == signature_length) return row;
    }
    throw std::out_of_range("no row for " + std::string(to_string(algorithm)) + " at m=" +
                            std::to_string(signature_length));
}

TrialInstance make_instance(const NetworkConfig& config, std::int64_t trial)
{
    const auto t = static_cast<std::uint64_t>(trial);
    Rng path_rng = substream(config.seed, t, 0);
    Rng signature_rng = substream(config.seed, t, 1 + 2 * static_cast<std::uint64_t>(config.signature_length));
    PathVector path = sample_path(config, path_rng);
    SignatureMatrix signatures = generate_signatures(config, signature_rng);
    Provenance provenance = embed_provenance(path, signatures);
    return {std::move(path), std::move(signatures), std::move(provenance)};
}

unsigned worker_count()
{
    if (const char* env = std::getenv("PROVTRACE_THREADS")) {
        unsigned value = 0;
        const std::string text(env);
        const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec == std::errc{} && end == text.data() + text.size() && value > 0) return value;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

ErrorRateReport run_trials(const ExperimentSpec& spec, unsigned workers)
{
    spec.validate();
    if (workers == 0) workers = worker_count();
    workers = static_cast<unsigned>(std::min<std::int64_t>(workers, spec.trials));

    SolverOptions options;
    options.list_size = spec.list_size;
    options.mode = spec.mode;
    if (spec.uses_gomp()) options.gomp = GompParams(spec.gomp_v, spec.gomp_w);

    const std::size_t algorithm_count = spec.algorithms.size();
    // cells[a][k] for algorithm a and the k-th signature length
    std::vector<std::vector<ErrorRateRow>> cells(algorithm_count);

    for (int m : spec.signature_lengths) {
        const NetworkConfig config{spec.nodes, spec.hops, m, spec.distribution, spec.seed};
        std::vector<std::uint8_t> errors(static_cast<std::size_t>(spec.trials) * algorithm_count, 0);
        std::vector<std::int64_t> nanos(algorithm_count, 0);
        std::mutex nanos_mutex;
        std::atomic<std::int64_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;

        auto work = [&] {
            std::vector<std::int64_t> local(algorithm_count, 0);
            try {
                for (std::int64_t trial = next++; trial < spec.trials; trial = next++) {
                    const TrialInstance inst = make_instance(config, trial);
                    const EdgeVector truth = inst.path.to_edge_vector();
                    if (is_path(truth, spec.hops).source != inst.path.source()) {
                        throw std::logic_error("sampled path rejected by the path check at trial " +
                                               std::to_string(trial));
                    }
                    for (std::size_t a = 0; a < algorithm_count; ++a) {
                        const auto start = std::chrono::steady_clock::now();
                        const RecoveryResult result = recover(spec.algorithms[a], inst.provenance, inst.signatures, options);
                        local[a] += std::chrono::duration_cast<std::chrono::nanoseconds>(
                                        std::chrono::steady_clock::now() - start)
                                        .count();
                        const bool wrong = !result.recovered || result.recovered->to_edge_vector() != truth;
                        errors[static_cast<std::size_t>(trial) * algorithm_count + a] = wrong ? 1 : 0;
                    }
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = spec.trials;
            }
            std::lock_guard lock(nanos_mutex);
            for (std::size_t a = 0; a < algorithm_count; ++a) nanos[a] += local[a];
        };

        if (workers <= 1) {
            work();
        } else {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        }
        if (failure) std::rethrow_exception(failure);

        for (std::size_t a = 0; a < algorithm_count; ++a) {
            ErrorRateRow row;
            row.algorithm = spec.algorithms[a];
            row.nodes = spec.nodes;
            row.hops = spec.hops;
            row.signature_length = m;
            row.list_size = spec.list_size;
            row.gomp_v = spec.gomp_v;
            row.gomp_w = spec.gomp_w;
            row.trials = spec.trials;
            for (std::int64_t t = 0; t < spec.trials; ++t) row.errors += errors[static_cast<std::size_t>(t) * algorithm_count + a];
            row.error_rate = static_cast<double>(row.errors) / static_cast<double>(row.trials);
            row.seed = spec.seed;
            row.elapsed_ms = spec.record_timing ? nanos[a] / 1'000'000 : 0;
            cells[a].push_back(row);
        }
    }

    ErrorRateReport report;
    for (auto& per_algorithm : cells) {
        for (auto& row : per_algorithm) report.rows.push_back(row);
    }
    return report;
}

ComplexityEstimate complexity_estimate(int nodes, int hops, int list_size, int signature_length)
{
    if (nodes < 1 || hops < 1 || list_size < 1 || signature_length < 1) {
        throw std::invalid_argument("complexity inputs must all be at least 1");
    }
    const std::int64_t n = nodes;
    const std::int64_t h = hops;
    const std::int64_t m = signature_length;
    const std::int64_t n3 = checked_pow(n, 3);
    const std::int64_t l_h = checked_pow(list_size, hops);
    const std::int64_t l_h1 = checked_pow(list_size, hops - 1);

    // pseudo-inverse work skipped by stopping one iteration early
    std::int64_t projection = checked_mul(checked_mul(n - 1, n - 1), m);
    projection = checked_add(projection, checked_mul(m, h));
    projection = checked_add(projection, checked_mul(m, checked_mul(h, h)));
    projection = checked_add(projection, checked_pow(h, 3));

    ComplexityEstimate out{nodes, hops, list_size, signature_length, 0, 0, 0};
    out.plomp_ops = checked_add(checked_mul(checked_mul(n, h), l_h1), checked_mul(checked_mul(h - 1, n3), l_h1));
    out.lomp_ops = checked_add(checked_add(checked_mul(h, l_h), checked_mul(checked_mul(h, n3), l_h)),
                               checked_mul(l_h1, projection));
    out.savings = out.lomp_ops - out.plomp_ops;
    return out;
}

std::vector<ComplexityEstimate> complexity_grid(int nodes, int signature_length, int list_max, int hops_max)
{
    if (list_max < 1 || hops_max < 2) throw std::invalid_argument("complexity grid needs L_max >= 1 and h_max >= 2");
    std::vector<ComplexityEstimate> grid;
    for (int h = 2; h <= hops_max; ++h)
        for (int l = 1; l <= list_max; ++l) grid.push_back(complexity_estimate(nodes, h, l, signature_length));
    return grid;
}

void write_csv(std::ostream& out, const ErrorRateReport& report)
{
    out << kErrorRateHeader << '\n';
    for (const auto& r : report.rows) {
        out << to_string(r.algorithm) << ',' << r.nodes << ',' << r.hops << ',' << r.signature_length << ','
            << r.list_size << ',' << r.gomp_v << ',' << r.gomp_w << ',' << r.trials << ',' << r.errors << ','
            << format_rate(r.error_rate) << ',' << r.seed << ',' << r.elapsed_ms << '\n';
    }
}

void write_csv(std::ostream& out, const std::vector<ComplexityEstimate>& grid)
{
    out << kComplexityHeader << '\n';
    for (const auto& c : grid) {
        out << c.nodes << ',' << c.hops << ',' << c.list_size << ',' << c.signature_length << ',' << c.lomp_ops << ','
            << c.plomp_ops << ',' << c.savings << '\n';
    }
}

void write_csv(const std::filesystem::path& path, const ErrorRateReport& report) { write_file(path, report); }

void write_csv(const std::filesystem::path& path, const std::vector<ComplexityEstimate>& grid)
{
    write_file(path, grid);
}

ErrorRateReport read_error_rate_csv(std::istream& in)
{
    expect_header(in, kErrorRateHeader);
    ErrorRateReport report;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_fields(line);
        if (f.size() != 12) throw std::runtime_error("expected 12 fields in '" + line + "'");
        ErrorRateRow r;
        try {
            r.algorithm = parse_algorithm(f[0]);
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(e.what());
        }
        r.nodes = parse_number<int>(f[1], "n");
        r.hops = parse_number<int>(f[2], "h");
        r.signature_length = parse_number<int>(f[3], "m");
        r.list_size = parse_number<int>(f[4], "L");
        r.gomp_v = parse_number<int>(f[5], "v");
        r.gomp_w = parse_number<int>(f[6], "w");
        r.trials = parse_number<std::int64_t>(f[7], "trials");
        r.errors = parse_number<std::int64_t>(f[8], "errors");
        if (r.trials < 1 || r.errors < 0 || r.errors > r.trials) {
            throw std::runtime_error("inconsistent trial counts in '" + line + "'");
        }
        r.error_rate = static_cast<double>(r.errors) / static_cast<double>(r.trials);
        if (f[9] != format_rate(r.error_rate)) {
            throw std::runtime_error("error_rate " + f[9] + " does not match errors/trials");
        }
        r.seed = parse_number<std::uint64_t>(f[10], "seed");
        r.elapsed_ms = parse_number<std::int64_t>(f[11], "elapsed_ms");
        report.rows.push_back(r);
    }
    return report;
}

std::vector<ComplexityEstimate> read_complexity_csv(std::istream& in)
{
    expect_header(in, kComplexityHeader);
    std::vector<ComplexityEstimate> grid;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_fields(line);
        if (f.size() != 7) throw std::runtime_error("expected 7 fields in '" + line + "'");
        ComplexityEstimate c;
        c.nodes = parse_number<int>(f[0], "n");
        c.hops = parse_number<int>(f[1], "h");
        c.list_size = parse_number<int>(f[2], "L");
        c.signature_length = parse_number<int>(f[3], "m");
        c.lomp_ops = parse_number<std::int64_t>(f[4], "lomp_ops");
        c.plomp_ops = parse_number<std::int64_t>(f[5], "plomp_ops");
        c.savings = parse_number<std::int64_t>(f[6], "savings");
        grid.push_back(c);
    }
    return grid;
}

PathSweepSummary path_check_sweep(int nodes, int hops)
{
    PathSweepSummary s{nodes, hops};
    for_each_combination(edge_count(nodes), static_cast<std::size_t>(hops), [&](const std::vector<std::size_t>& pick) {
        const EdgeVector x = EdgeVector::from_indices(nodes, pick);
        const bool algebraic = is_path(x, hops).source.has_value();
        const bool traversal = brute_force_path_oracle(x, hops);
        ++s.vectors;
        s.algebraic_accepts += algebraic;
        s.oracle_accepts += traversal;
        s.algebraic_only += algebraic && !traversal;
        s.oracle_only += traversal && !algebraic;
    });
    for_each_relay_sequence(nodes, hops, [&](const std::vector<int>& relays) {
        const PathCheck check = is_path(path_from_nodes(nodes, relays).to_edge_vector(), hops);
        ++s.true_paths;
        if (!check) {
            ++s.true_paths_rejected;
        } else if (*check.source != relays.front()) {
            ++s.wrong_source;
        }
    });
    return s;
}

MissingLinkSweepSummary missing_link_sweep(int nodes, int hops)
{
    MissingLinkSweepSummary s{nodes, hops};
    for_each_relay_sequence(nodes, hops, [&](const std::vector<int>& relays) {
        const PathVector path = path_from_nodes(nodes, relays);
        const EdgeVector truth = path.to_edge_vector();
        for (const Edge& removed : path.edges) {
            EdgeVector candidate = truth;
            candidate.set(removed, false);
            ++s.cases;
            const MissingLinkResult check = missing_link_check(candidate, path.source(), hops);
            if (check.status == MissingLinkStatus::missing_link && complete_path(candidate, *check.link) == truth) {
                ++s.restored;
            }
        }
    });
    return s;
}

}  // namespace provtrace
