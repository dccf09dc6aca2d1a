#pragma once

// Command-line front end. Every command writes its primary artifact (a CSV
// table or a JSON object) and, for table commands, a JSON summary.
//
// Exit codes: 0 success, 2 usage error, 3 domain error, 4 integration failure.
// Errors are reported on the error stream as one JSON object.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dante::cli {

enum class Command { Curvature, Classify, Simulate, Snake, Turtle, Flowlines, Regions };

enum class OutputFormat { Csv, Json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitIntegration = 4;

inline constexpr std::size_t kDefaultTimeGrid = 200;
inline constexpr std::size_t kDefaultStartLattice = 5;
inline constexpr std::size_t kDefaultRegionResolution = 64;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A NaN or infinity reached the output stage.
class NonFiniteOutput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    Command command = Command::Curvature;

    std::optional<double> a, b, c;
    std::optional<double> x, y;
    std::optional<double> W, alpha;
    std::optional<double> U, beta;
    double r_squared = 4.0;

    /// Unset means the command's default: JSON for curvature/classify, CSV otherwise.
    std::optional<OutputFormat> format;
    /// Primary artifact destination; standard output when unset.
    std::optional<std::string> output_path;
    /// Summary destination. When unset, the summary goes to standard output
    /// if the table was sent to a file, and is dropped otherwise (CSV only).
    std::optional<std::string> summary_path;

    /// Time samples (simulate), parameter samples (snake/turtle), or the start
    /// lattice size N giving N*N starts (flowlines).
    std::optional<std::size_t> grid;
    std::optional<std::string> starts_path;
    std::size_t resolution = kDefaultRegionResolution;

    std::optional<double> rel_tol, abs_tol, collapse_eps, eq_tol;
    bool check = false;
    bool backward = false;
    double lift_scale = 1.0;
};

using EnvLookup = std::function<const char*(const char*)>;

/// Reads DANTE_FLOW_R2 through `env` when --r2 is absent. Throws UsageError.
/// Returns nullopt when help was requested (help text written to `out`).
std::optional<RunConfig> parse_command_line(const std::vector<std::string>& args,
                                            std::ostream& out, const EnvLookup& env);

/// Executes a parsed configuration. Library exceptions propagate.
void run(const RunConfig& config, std::ostream& out);

/// parse + run with the exit-code mapping; `args` excludes the program name.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               const EnvLookup& env);

/// Shortest round-trip decimal; throws NonFiniteOutput for NaN/inf.
std::string format_number(double value);

}  // namespace dante::cli
