#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace newman::cli {

std::uint64_t oracle_cap_from_env() {
    const char* raw = std::getenv(oracle_cap_env);
    if (raw == nullptr || *raw == '\0') {
        return default_oracle_cap;
    }
    return Natural::parse(raw).to_u64();
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

int run_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err) {
    if (opts.residue > 2) {
        err << "eval: --residue must be 0, 1 or 2\n";
        return exit_usage;
    }
    if (opts.trace && (opts.algorithm == EvalAlgorithm::oracle || opts.residue != 0)) {
        err << "eval: --trace is available for residue 0 with the decomposition or recursive algorithm\n";
        return exit_usage;
    }

    if (opts.algorithm == EvalAlgorithm::oracle) {
        out << oracle_sum(ResidueClass(3, opts.residue), opts.n, opts.oracle_cap).get_str() << '\n';
        return exit_ok;
    }

    const Algorithm alg =
        opts.algorithm == EvalAlgorithm::decomposition ? Algorithm::decomposition : Algorithm::recursive;
    if (!opts.trace) {
        out << residue_sum(opts.residue, opts.n, alg).get_str() << '\n';
        return exit_ok;
    }

    Trace trace;
    SumValue total;
    if (alg == Algorithm::decomposition) {
        total = newman_sum_decomposition(opts.n, trace);
        for (const auto& t : trace) {
            out << t.closed_form << "\t" << t.description << '\n';
        }
        out << render_decomposition_summary(trace, total) << '\n';
    } else {
        total = newman_sum_recursive(opts.n, trace);
        for (const auto& t : trace) {
            out << t.value.get_str() << "\t" << t.description << '\n';
        }
        out << render_recursive_summary(trace, total) << '\n';
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

namespace {

class CheckTally {
public:
    void check(bool ok, std::uint64_t n, const char* what) {
        ++checks_;
        if (!ok) {
            if (failures_ == 0) {
                first_n_ = n;
                first_what_ = what;
            }
            ++failures_;
        }
    }

    std::uint64_t checks() const { return checks_; }
    std::uint64_t failures() const { return failures_; }
    std::uint64_t first_n() const { return first_n_; }
    const std::string& first_what() const { return first_what_; }

private:
    std::uint64_t checks_ = 0;
    std::uint64_t failures_ = 0;
    std::uint64_t first_n_ = 0;
    std::string first_what_;
};

int sign_of(std::uint64_t n) { return (std::popcount(n) & 1) ? -1 : 1; }

}  // namespace

int run_verify(std::uint64_t max, std::uint64_t oracle_cap, std::ostream& out, std::ostream& err,
               const VerifyHooks& hooks) {
    if (max > oracle_cap) {
        err << "verify: --max " << max << " exceeds the oracle cap " << oracle_cap << '\n';
        return exit_io_or_cap;
    }

    CheckTally tally;
    // running oracle values over [0, N) for S_{3,0}, S_{3,1}, S_{3,2}, S_{1,0}
    std::int64_t s30 = 0, s31 = 0, s32 = 0, s10 = 0;
    // S_{3,0}(2^k), recorded as the sweep passes each power of two
    std::vector<std::int64_t> at_power(65, 0);

    for (std::uint64_t n = 0;; ++n) {
        const Natural x(n);
        const SumValue oracle(static_cast<long>(s30));

        const SumValue dec = hooks.decomposition(x);
        const SumValue rec = hooks.recursive(x);
        tally.check(dec == oracle, n, "decomposition vs oracle");
        tally.check(rec == oracle, n, "recursive vs oracle");
        tally.check(abs(rec) <= x.value(), n, "|S(N)| <= N");
        if (n >= 1) {
            tally.check(rec >= 1, n, "positivity");
            tally.check(((alt_exponent_sum(x) % 3) + 3) % 3 == static_cast<long>(n % 3), n, "t(y) = y mod 3");
        }
        tally.check(residue_sum(1, x) == s31, n, "residue 1 vs oracle");
        tally.check(residue_sum(2, x) == s32, n, "residue 2 vs oracle");
        if (n % 2 == 0) {
            tally.check(s10 == 0, n, "balance of (-1)^sigma over even prefix");
            tally.check(residue_sum(0, x) + residue_sum(1, x) + residue_sum(2, x) == 0, n, "residues sum to 0");
            tally.check(hooks.decomposition(x * 4) == 3 * dec, n, "S(4y) = 3 S(y)");
        } else {
            tally.check(boundary_term(x) == ((n - 1) % 3 == 0 ? sign_of(n - 1) : 0), n, "boundary term");
        }
        if (n >= 1 && std::has_single_bit(n)) {
            const auto k = static_cast<unsigned long>(std::countr_zero(n));
            at_power[k] = s30;
            tally.check(power_sum(k) == s30, n, "power_sum vs oracle");
        } else if (n >= 3 && std::popcount(n) == 2 && (n & 1) == 0) {
            const auto low = static_cast<unsigned long>(std::countr_zero(n));
            const auto high = static_cast<unsigned long>(63 - std::countl_zero(n));
            tally.check(dyadic_sum(parity_of(high), low) == s30 - at_power[high], n, "dyadic_sum vs oracle");
        }

        if (n == max) {
            break;
        }
        const int sg = sign_of(n);
        s10 += sg;
        switch (n % 3) {
            case 0: s30 += sg; break;
            case 1: s31 += sg; break;
            default: s32 += sg; break;
        }
    }

    out << "verify: max=" << max << ", " << tally.checks() << " checks, " << tally.failures() << " failures\n";
    if (tally.failures() != 0) {
        out << "first failure: N=" << tally.first_n() << " (" << tally.first_what() << ")\n";
        return exit_check_failed;
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------
// scan
// ---------------------------------------------------------------------------

std::string format_delta(const Real& d) {
    char buf[64];
    mpfr_snprintf(buf, sizeof buf, "%#.12RNg", d.backend().data());
    return buf;
}

std::string csv_row(const DeltaRecord& rec) {
    std::string row = rec.n.to_string();
    row += ',';
    row += rec.s.get_str();
    row += ',';
    row += format_delta(rec.delta);
    row += ',';
    row += rec.lower.get_str();
    row += ',';
    if (rec.upper) {
        row += rec.upper->get_str();
    }
    row += ',';
    row += rec.in_bounds ? "true" : "false";
    return row;
}

int run_scan(const ScanOptions& opts, std::ostream& out, std::ostream& err) {
    const auto write_rows = [&](std::ostream& os) {
        os << csv_header << '\n';
        scan(opts.from, opts.to, opts.step, [&os](const DeltaRecord& r) { os << csv_row(r) << '\n'; },
             opts.workers);
    };

    if (!opts.out_path) {
        write_rows(out);
        return exit_ok;
    }

    namespace fs = std::filesystem;
    const fs::path target(*opts.out_path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
        if (!file) {
            err << "scan: cannot write " << tmp.string() << '\n';
            return exit_io_or_cap;
        }
        try {
            write_rows(file);
        } catch (...) {
            file.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw;
        }
        file.flush();
        if (!file) {
            err << "scan: write failed for " << tmp.string() << '\n';
            std::error_code ec;
            fs::remove(tmp, ec);
            return exit_io_or_cap;
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        err << "scan: cannot rename to " << target.string() << ": " << ec.message() << '\n';
        fs::remove(tmp, ec);
        return exit_io_or_cap;
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------
// bounds
// ---------------------------------------------------------------------------

int run_bounds(std::uint64_t max, unsigned workers, std::ostream& out, std::ostream& err) {
    if (max < 2) {
        err << "bounds: --max must be >= 2\n";
        return exit_usage;
    }

    const Real three_pow_lambda = boost::multiprecision::pow(Real(3), lambda());
    const Real newman_lo = Real(1) / 20;

    std::vector<std::uint64_t> lower_hits, upper_hits;
    std::uint64_t violations = 0, newman_failures = 0;
    std::optional<std::uint64_t> first_violation;
    Real coquet_min = 0, coquet_max = 0;
    std::uint64_t coquet_min_x = 0, coquet_max_x = 0;

    scan(Natural(1), Natural(max + 1), 1,
         [&](const DeltaRecord& r) {
             const std::uint64_t n = r.n.to_u64();
             if (r.s == r.lower) {
                 lower_hits.push_back(n);
             }
             if (r.upper && r.s == *r.upper) {
                 upper_hits.push_back(n);
             }
             if (!r.in_bounds) {
                 ++violations;
                 if (!first_violation) {
                     first_violation = n;
                 }
             }
             if (!(newman_lo < r.delta && r.delta < 5)) {
                 ++newman_failures;
             }
             if (n % 3 == 0 && n >= 6) {
                 // S(3x) / x^lambda = delta(3x) * 3^lambda
                 const Real ratio = r.delta * three_pow_lambda;
                 if (coquet_min_x == 0 || ratio < coquet_min) {
                     coquet_min = ratio;
                     coquet_min_x = n / 3;
                 }
                 if (coquet_max_x == 0 || ratio > coquet_max) {
                     coquet_max = ratio;
                     coquet_max_x = n / 3;
                 }
             }
         },
         workers);

    out << "bounds: 1 <= N <= " << max << '\n';
    for (const auto n : lower_hits) {
        out << "lower bound attained at N=" << n << '\n';
    }
    for (const auto n : upper_hits) {
        out << "upper bound attained at N=" << n << '\n';
    }
    if (!lower_hits.empty()) {
        out << "least lower attainment: N=" << lower_hits.front() << '\n';
    }
    if (!upper_hits.empty()) {
        out << "least upper attainment: N=" << upper_hits.front() << '\n';
    }
    if (coquet_min_x != 0) {
        out << "S(3x)/x^lambda over 2 <= x <= " << max / 3 << ": min " << format_delta(coquet_min)
            << " at x=" << coquet_min_x << ", max " << format_delta(coquet_max) << " at x=" << coquet_max_x
            << '\n';
    }
    out << "bound violations: " << violations << '\n';
    out << "newman inequality failures: " << newman_failures << '\n';
    if (first_violation) {
        out << "first violation: N=" << *first_violation << '\n';
    }
    return (violations == 0 && newman_failures == 0) ? exit_ok : exit_check_failed;
}

// ---------------------------------------------------------------------------
// eta
// ---------------------------------------------------------------------------

int run_eta(std::uint64_t xmax, std::ostream& out, std::ostream& /*err*/) {
    out << std::setw(8) << "x" << std::setw(10) << "defined" << std::setw(10) << "derived" << std::setw(14)
        << "half(x+1/2)" << '\n';
    for (std::uint64_t x = 1; x <= xmax; ++x) {
        const EtaRow row = eta_row(Natural(x));
        out << std::setw(8) << x << std::setw(10) << row.eta_defined.get_str() << std::setw(10)
            << row.eta_derived.get_str() << std::setw(14) << eta_half(Natural(x)).get_str();
        if (!row.agree) {
            out << "  MISMATCH";
        }
        out << '\n';
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

namespace {

template <class F>
double mean_micros(unsigned repeat, F&& f) {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    for (unsigned i = 0; i < repeat; ++i) {
        f();
    }
    const std::chrono::duration<double, std::micro> elapsed = clock::now() - start;
    return elapsed.count() / repeat;
}

std::string fixed3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

int run_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err) {
    if (opts.exponents.empty() || opts.repeat == 0) {
        err << "bench: need at least one exponent and --repeat >= 1\n";
        return exit_usage;
    }
    out << std::setw(10) << "N" << std::setw(20) << "decomposition_us" << std::setw(16) << "recursive_us"
        << std::setw(14) << "oracle_ms" << '\n';
    for (const unsigned long e : opts.exponents) {
        const Natural pow2 = Natural::power_of_two(e);
        for (const bool all_ones : {false, true}) {
            const Natural n = all_ones ? pow2 - Natural(1) : pow2;
            SumValue sink;
            const double dec = mean_micros(opts.repeat, [&] { sink = newman_sum_decomposition(n); });
            const double rec = mean_micros(opts.repeat, [&] { sink = newman_sum_recursive(n); });
            std::string oracle_col = "-";
            if (n <= Natural(opts.oracle_cap)) {
                oracle_col = fixed3(mean_micros(1, [&] { sink = oracle_sum(ResidueClass(3, 0), n, opts.oracle_cap); }) /
                                    1000.0);
            }
            const std::string label = "2^" + std::to_string(e) + (all_ones ? "-1" : "");
            out << std::setw(10) << label << std::setw(20) << fixed3(dec) << std::setw(16) << fixed3(rec)
                << std::setw(14) << oracle_col << '\n';
        }
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------
// command line
// ---------------------------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact evaluation of the Newman digit sum S(N) = sum_{0<=n<N, 3|n} (-1)^{sigma(n)}"};
    app.require_subcommand(1, 1);

    std::string eval_n;
    std::string eval_alg = "decomposition";
    unsigned eval_residue = 0;
    bool eval_trace = false;
    auto* eval = app.add_subcommand("eval", "Evaluate S_{3,l}(N)");
    eval->add_option("N", eval_n, "Argument (decimal, 0x.. or 0b..)")->required();
    eval->add_option("--algorithm", eval_alg, "decomposition | recursive | oracle")
        ->check(CLI::IsMember({"decomposition", "recursive", "oracle"}));
    eval->add_option("--residue", eval_residue, "Residue class l mod 3")->check(CLI::Range(0u, 2u));
    eval->add_flag("--trace", eval_trace, "Print the term-by-term expansion");

    std::string verify_max;
    auto* verify = app.add_subcommand("verify", "Check both algorithms and identities against the oracle");
    verify->add_option("--max", verify_max, "Largest N checked")->required();

    std::string scan_from, scan_to, scan_out;
    std::uint64_t scan_step = 1;
    unsigned scan_workers = 1;
    auto* scan_cmd = app.add_subcommand("scan", "Write N,S,delta,lower,upper,in_bounds rows as CSV");
    scan_cmd->add_option("--from", scan_from, "First N (>= 1)")->required();
    scan_cmd->add_option("--to", scan_to, "End of range (exclusive)")->required();
    scan_cmd->add_option("--step", scan_step, "Stride")->check(CLI::PositiveNumber);
    scan_cmd->add_option("--out", scan_out, "Output CSV path (stdout when omitted)");
    scan_cmd->add_option("--workers", scan_workers, "Worker threads")->check(CLI::PositiveNumber);

    std::uint64_t bounds_max = 0;
    unsigned bounds_workers = 1;
    auto* bounds = app.add_subcommand("bounds", "Sweep the lower/upper bounds and report attainment");
    bounds->add_option("--max", bounds_max, "Largest N")->required();
    bounds->add_option("--workers", bounds_workers, "Worker threads")->check(CLI::PositiveNumber);

    std::uint64_t eta_max = 0;
    auto* eta = app.add_subcommand("eta", "Tabulate the defined and derived correction term");
    eta->add_option("--max", eta_max, "Largest x")->required();

    std::vector<unsigned long> bench_exponents;
    unsigned bench_repeat = 200;
    auto* bench = app.add_subcommand("bench", "Time both fast algorithms (and the oracle under its cap)");
    bench->add_option("--exponents", bench_exponents, "Comma-separated exponents e, N = 2^e")
        ->required()
        ->delimiter(',');
    bench->add_option("--repeat", bench_repeat, "Evaluations per timing")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        const std::uint64_t cap = oracle_cap_from_env();
        if (*eval) {
            EvalOptions opts;
            opts.n = Natural::parse(eval_n);
            opts.algorithm = eval_alg == "recursive" ? EvalAlgorithm::recursive
                           : eval_alg == "oracle"    ? EvalAlgorithm::oracle
                                                     : EvalAlgorithm::decomposition;
            opts.residue = eval_residue;
            opts.trace = eval_trace;
            opts.oracle_cap = cap;
            return run_eval(opts, out, err);
        }
        if (*verify) {
            const Natural max = Natural::parse(verify_max);
            if (max > Natural(cap)) {
                err << "verify: --max " << max.to_string() << " exceeds the oracle cap " << cap << '\n';
                return exit_io_or_cap;
            }
            return run_verify(max.to_u64(), cap, out, err);
        }
        if (*scan_cmd) {
            ScanOptions opts;
            opts.from = Natural::parse(scan_from);
            opts.to = Natural::parse(scan_to);
            opts.step = scan_step;
            if (!scan_out.empty()) {
                opts.out_path = scan_out;
            }
            opts.workers = scan_workers;
            return run_scan(opts, out, err);
        }
        if (*bounds) {
            return run_bounds(bounds_max, bounds_workers, out, err);
        }
        if (*eta) {
            return run_eta(eta_max, out, err);
        }
        if (*bench) {
            BenchOptions opts;
            opts.exponents = bench_exponents;
            opts.repeat = bench_repeat;
            opts.oracle_cap = cap;
            return run_bench(opts, out, err);
        }
    } catch (const OracleCapError& e) {
        err << "error: " << e.what() << '\n';
        return exit_io_or_cap;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}

}  // namespace newman::cli
