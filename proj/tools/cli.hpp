// cli.hpp
//
// Subcommands of the `newman` command-line tool. Each run_* function writes
// to the given streams and returns the process exit status:
//
//   0   success
//   1   a verification or bound check failed
//   2   I/O failure or oracle cap exceeded
//   64  usage error
//
// The oracle cap defaults to 2^32 and can be overridden with the
// NEWMAN_ORACLE_CAP environment variable.

#pragma once

#include "newman/analysis.hpp"
#include "newman/core.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace newman::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_check_failed = 1,
    exit_io_or_cap = 2,
    exit_usage = 64,
};

inline constexpr const char* oracle_cap_env = "NEWMAN_ORACLE_CAP";

// Reads NEWMAN_ORACLE_CAP, falling back to default_oracle_cap.
// Throws DomainError on a malformed value.
std::uint64_t oracle_cap_from_env();

enum class EvalAlgorithm { decomposition, recursive, oracle };

struct EvalOptions {
    Natural n;
    EvalAlgorithm algorithm = EvalAlgorithm::decomposition;
    unsigned residue = 0;
    bool trace = false;
    std::uint64_t oracle_cap = default_oracle_cap;
};

int run_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err);

// Evaluators under test in `verify`; replaceable so a faulty implementation
// can be injected as a negative control.
struct VerifyHooks {
    std::function<SumValue(const Natural&)> decomposition = [](const Natural& x) { return newman_sum_decomposition(x); };
    std::function<SumValue(const Natural&)> recursive = [](const Natural& x) { return newman_sum_recursive(x); };
};

int run_verify(std::uint64_t max, std::uint64_t oracle_cap, std::ostream& out, std::ostream& err,
               const VerifyHooks& hooks = {});

struct ScanOptions {
    Natural from;
    Natural to;
    std::uint64_t step = 1;
    std::optional<std::string> out_path;  // stdout when empty
    unsigned workers = 1;
};

inline constexpr const char* csv_header = "N,S,delta,lower,upper,in_bounds";

// delta with 12 significant digits, '.' separator, no exponent for the
// range delta actually takes.
std::string format_delta(const Real& d);

std::string csv_row(const DeltaRecord& rec);

int run_scan(const ScanOptions& opts, std::ostream& out, std::ostream& err);

int run_bounds(std::uint64_t max, unsigned workers, std::ostream& out, std::ostream& err);

int run_eta(std::uint64_t xmax, std::ostream& out, std::ostream& err);

struct BenchOptions {
    std::vector<unsigned long> exponents;
    unsigned repeat = 200;
    std::uint64_t oracle_cap = default_oracle_cap;
};

int run_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err);

// Full command line: parses argv (argv[0] is the program name) and dispatches.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace newman::cli
