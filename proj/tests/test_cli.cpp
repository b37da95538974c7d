#include "cli.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

using namespace newman;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "newman");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) {
        lines.push_back(line);
    }
    return lines;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("newman_cli_test_" + std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

struct CapEnv {
    explicit CapEnv(const char* value) { ::setenv(cli::oracle_cap_env, value, 1); }
    ~CapEnv() { ::unsetenv(cli::oracle_cap_env); }
};

}  // namespace

TEST_SUITE("eval") {
    TEST_CASE("plain values") {
        CHECK(run_cli({"eval", "500000"}).out == "18261\n");
        CHECK(run_cli({"eval", "500000", "--algorithm", "recursive"}).out == "18261\n");
        CHECK(run_cli({"eval", "500000", "--algorithm", "oracle"}).out == "18261\n");
        CHECK(run_cli({"eval", "0"}).out == "0\n");
        CHECK(run_cli({"eval", "0x7A120"}).out == "18261\n");
        CHECK(run_cli({"eval", "8", "--residue", "1"}).out == "-3\n");
        CHECK(run_cli({"eval", "8", "--residue", "2", "--algorithm", "oracle"}).out == "0\n");
    }

    TEST_CASE("recursive trace ends with the concluding phase") {
        const auto r = run_cli({"eval", "500000", "--algorithm", "recursive", "--trace"});
        CHECK(r.code == 0);
        const auto lines = lines_of(r.out);
        REQUIRE_FALSE(lines.empty());
        CHECK(lines.back() == "19683-2187+729+27+9=18261");
    }

    TEST_CASE("decomposition trace ends with the closed-form expansion") {
        const auto r = run_cli({"eval", "500000", "--trace"});
        CHECK(r.code == 0);
        const auto lines = lines_of(r.out);
        REQUIRE(lines.size() == 8);
        CHECK(lines.front().rfind("2*3^8\t", 0) == 0);
        CHECK(lines.back() == "2*3^8+0+2*3^7+0+3^6+3^3+3^2=18261");
    }

    TEST_CASE("usage errors exit 64") {
        CHECK(run_cli({"eval", "12x"}).code == cli::exit_usage);
        CHECK(run_cli({"eval", "-5"}).code == cli::exit_usage);
        CHECK(run_cli({"eval", "5", "--bogus"}).code == cli::exit_usage);
        CHECK(run_cli({"eval", "5", "--residue", "3"}).code == cli::exit_usage);
        CHECK(run_cli({"eval", "5", "--algorithm", "fast"}).code == cli::exit_usage);
        CHECK(run_cli({"eval", "5", "--algorithm", "oracle", "--trace"}).code == cli::exit_usage);
        CHECK(run_cli({}).code == cli::exit_usage);
        CHECK(run_cli({"frobnicate"}).code == cli::exit_usage);
    }

    TEST_CASE("help exits 0") {
        const auto r = run_cli({"--help"});
        CHECK(r.code == 0);
        CHECK(r.out.find("eval") != std::string::npos);
    }

    TEST_CASE("oracle cap from the environment") {
        const CapEnv env("1000");
        const auto r = run_cli({"eval", "5000", "--algorithm", "oracle"});
        CHECK(r.code == cli::exit_io_or_cap);
        CHECK(r.err.find("cap") != std::string::npos);
        CHECK(run_cli({"eval", "999", "--algorithm", "oracle"}).code == 0);
        CHECK(run_cli({"eval", "5000"}).out == run_cli({"eval", "5000", "--algorithm", "recursive"}).out);
    }

    TEST_CASE("malformed cap is a usage error") {
        const CapEnv env("lots");
        CHECK(run_cli({"eval", "10"}).code == cli::exit_usage);
    }

    TEST_CASE("arguments beyond 64 bits") {
        const std::string big = (Natural::power_of_two(256) + Natural(12345)).to_string();
        const auto a = run_cli({"eval", big});
        const auto b = run_cli({"eval", big, "--algorithm", "recursive"});
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
        CHECK(run_cli({"eval", big, "--algorithm", "oracle"}).code == cli::exit_io_or_cap);
    }
}

TEST_SUITE("verify") {
    TEST_CASE("clean run") {
        const auto r = run_cli({"verify", "--max", "4096"});
        CHECK(r.code == 0);
        CHECK(r.out.find(" 0 failures") != std::string::npos);
    }

    TEST_CASE("max 0 is trivially clean") {
        const auto r = run_cli({"verify", "--max", "0"});
        CHECK(r.code == 0);
        CHECK(r.out.find(" 0 failures") != std::string::npos);
    }

    TEST_CASE("an injected fault is reported with its N") {
        cli::VerifyHooks hooks;
        hooks.decomposition = [](const Natural& x) {
            SumValue s = newman_sum_decomposition(x);
            if (x == Natural(1001)) {
                s += 1;
            }
            return s;
        };
        std::ostringstream out, err;
        const int code = cli::run_verify(2000, default_oracle_cap, out, err, hooks);
        CHECK(code == cli::exit_check_failed);
        CHECK(out.str().find("first failure: N=1001") != std::string::npos);
    }

    TEST_CASE("max above the cap") {
        const CapEnv env("100");
        CHECK(run_cli({"verify", "--max", "101"}).code == cli::exit_io_or_cap);
    }
}

TEST_SUITE("scan") {
    TEST_CASE("CSV rows") {
        const TempDir dir;
        const fs::path out = dir.path / "d.csv";
        const auto r = run_cli({"scan", "--from", "2", "--to", "100", "--step", "1", "--out", out.string()});
        REQUIRE(r.code == 0);
        const auto lines = lines_of(slurp(out));
        REQUIRE(lines.size() == 99);
        CHECK(lines[0] == "N,S,delta,lower,upper,in_bounds");
        for (std::size_t i = 1; i < lines.size(); ++i) {
            CHECK(lines[i].ends_with(",true"));
        }
        // N = 6: 2/6^lambda = 0.483459078354...
        CHECK(lines[5] == "6,2,0.483459078354,2,3,true");
        CHECK_FALSE(fs::exists(dir.path / "d.csv.tmp"));
    }

    TEST_CASE("N = 1 leaves the upper column empty") {
        const auto r = run_cli({"scan", "--from", "1", "--to", "3"});
        CHECK(r.code == 0);
        CHECK(r.out == "N,S,delta,lower,upper,in_bounds\n"
                       "1,1,1.00000000000,0,,true\n"
                       "2,1,0.577350269190,0,2,true\n");
    }

    TEST_CASE("deterministic output, independent of worker count") {
        const auto a = run_cli({"scan", "--from", "1", "--to", "5000", "--step", "3"});
        const auto b = run_cli({"scan", "--from", "1", "--to", "5000", "--step", "3"});
        const auto c = run_cli({"scan", "--from", "1", "--to", "5000", "--step", "3", "--workers", "3"});
        CHECK(a.out == b.out);
        CHECK(a.out == c.out);
    }

    TEST_CASE("unwritable path exits 2 without a partial file") {
        const TempDir dir;
        const fs::path out = dir.path / "missing" / "d.csv";
        const auto r = run_cli({"scan", "--from", "2", "--to", "10", "--out", out.string()});
        CHECK(r.code == cli::exit_io_or_cap);
        CHECK_FALSE(fs::exists(out));
    }

    TEST_CASE("invalid range") {
        CHECK(run_cli({"scan", "--from", "10", "--to", "10"}).code == cli::exit_usage);
        CHECK(run_cli({"scan", "--from", "0", "--to", "10"}).code == cli::exit_usage);
        CHECK(run_cli({"scan", "--from", "1", "--to", "10", "--step", "0"}).code == cli::exit_usage);
    }
}

TEST_SUITE("bounds, eta, bench") {
    TEST_CASE("bounds reports attainment") {
        const auto r = run_cli({"bounds", "--max", "1000"});
        CHECK(r.code == 0);
        CHECK(r.out.find("lower bound attained at N=3\n") != std::string::npos);
        CHECK(r.out.find("upper bound attained at N=19\n") != std::string::npos);
        CHECK(r.out.find("upper bound attained at N=67\n") != std::string::npos);
        CHECK(r.out.find("least lower attainment: N=3\n") != std::string::npos);
        CHECK(r.out.find("least upper attainment: N=19\n") != std::string::npos);
        CHECK(r.out.find("bound violations: 0\n") != std::string::npos);
        CHECK(r.out.find("newman inequality failures: 0\n") != std::string::npos);
    }

    TEST_CASE("eta marks the disagreements") {
        const auto r = run_cli({"eta", "--max", "9"});
        CHECK(r.code == 0);
        const auto lines = lines_of(r.out);
        REQUIRE(lines.size() == 10);
        for (int x = 1; x <= 9; ++x) {
            const bool mismatch = lines[x].find("MISMATCH") != std::string::npos;
            CAPTURE(x);
            CHECK(mismatch == (x == 1 || x == 3 || x == 5 || x == 9));
        }
    }

    TEST_CASE("bench rows and sub-millisecond recursion") {
        const auto r = run_cli({"bench", "--exponents", "20,64,256", "--repeat", "20"});
        CHECK(r.code == 0);
        const auto lines = lines_of(r.out);
        REQUIRE(lines.size() == 7);
        for (std::size_t i = 1; i < lines.size(); ++i) {
            std::istringstream row(lines[i]);
            std::string label, oracle;
            double dec = 0, rec = 0;
            row >> label >> dec >> rec >> oracle;
            CAPTURE(lines[i]);
            CHECK(rec < 1000.0);
            CHECK(dec < 1000.0);
        }
        CHECK(lines[1].find("2^20") != std::string::npos);
        CHECK(lines[3].ends_with("-"));  // 2^64 is above the oracle cap
    }
}
