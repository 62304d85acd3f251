#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace dagreserve::cli {

// Shared exit-code contract: 0 pass, 1 analysis-level failure, 2 I/O or
// parse failure.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitIoError = 2;

int cmd_validate(const std::string& input, std::ostream& out, std::ostream& err);

struct EnumerateArgs {
    std::string input;
    std::string task;
    bool json_output = false;
    std::optional<std::string> expect_file;
};
int cmd_enumerate(const EnumerateArgs& args, std::ostream& out, std::ostream& err);

struct AnalyzeArgs {
    std::string input;
    std::string task;
    int m = 1;
    double e = 0.0;
    std::optional<double> p;
};
int cmd_analyze(const AnalyzeArgs& args, std::ostream& out, std::ostream& err);

struct OptimizeArgs {
    std::string input;
    std::string output;
    bool tight_bound = false;
    std::optional<double> eps;  // absolute bracket width, default 1e-6 * P
};
int cmd_optimize(const OptimizeArgs& args, std::ostream& out, std::ostream& err);

struct SimulateArgs {
    std::string input;
    std::string task;
    int m = 1;
    double e = 0.0;
    std::optional<double> p;
    std::int64_t jobs = 1;
    std::optional<std::uint64_t> seed;  // falls back to DAGRESERVE_SEED, then 0
    std::string supply = "worst_case";
    bool check_lemma = false;
    std::string output;
};
int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);

}  // namespace dagreserve::cli
