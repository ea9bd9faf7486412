#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "jacobi_rare/ensemble.hpp"
#include "jacobi_rare/estimator.hpp"
#include "jacobi_rare/importance.hpp"

namespace jrare {

enum class OutputFormat { Auto, Csv, Json };
OutputFormat parse_format(std::string_view text);

enum ExitCode : int {
    kExitOk = 0,
    kExitParameter = 2,
    kExitNumerical = 3,
    kExitInconclusive = 4,
};

struct RunConfig {
    double beta = 2.0;
    std::size_t n = 10;
    double p1 = 20.0;
    double p2 = 40.0;

    double x = 0.0;
    Coordinate coord = Coordinate::X;
    TiltTarget target = TiltTarget::MaxAbove;

    std::size_t reps = 1000;
    std::size_t naive_reps = 0;  ///< compare: naive replications (0 → same as reps)
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    OutputFormat format = OutputFormat::Auto;
    double rate_multiplier = 1.0;
    double regime_threshold = 0.01;
    bool naive = false;
    bool sample_std = false;

    // Grids for sweep, rate-table and cov-curve.
    std::optional<double> x_min;
    std::optional<double> x_max;
    std::size_t points = 0;  ///< 0 → command default
    std::size_t first_checkpoint = 10;

    EnsembleParams params() const { return EnsembleParams(beta, n, p1, p2); }
    RunOptions options() const;
};

/// Renders a double for CSV: 17 significant digits, `inf`/`-inf`/`nan`.
std::string format_csv_double(double v);

/// Each command writes its full output to `out` and returns an exit code.
/// Errors propagate as the library's exception types.
int cmd_sample(const RunConfig& cfg, std::ostream& out);
int cmd_estimate(const RunConfig& cfg, std::ostream& out);
int cmd_sweep(const RunConfig& cfg, std::ostream& out);
int cmd_cov_curve(const RunConfig& cfg, std::ostream& out);
int cmd_rate_table(const RunConfig& cfg, std::ostream& out);
int cmd_compare(const RunConfig& cfg, std::ostream& out);

}  // namespace jrare
