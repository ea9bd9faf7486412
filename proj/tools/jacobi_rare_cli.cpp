#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "jacobi_rare/commands.hpp"
#include "jacobi_rare/error.hpp"
#include "jacobi_rare/scaling.hpp"

namespace {

struct Flags {
    std::string coord = "x";
    std::string target = "max-above";
    std::string format = "auto";
    double x_min = 0.0;
    double x_max = 0.0;
};

void add_common(CLI::App* sub, jrare::RunConfig& cfg, Flags& flags, std::optional<std::uint64_t>& seed) {
    sub->add_option("--beta", cfg.beta, "Dyson index beta > 0")->capture_default_str();
    sub->add_option("--n", cfg.n, "Number of eigenvalues")->capture_default_str();
    sub->add_option("--p1", cfg.p1, "First degree-of-freedom parameter (>= n)")->capture_default_str();
    sub->add_option("--p2", cfg.p2, "Second degree-of-freedom parameter (>= n)")->capture_default_str();
    sub->add_option("--x", cfg.x, "Threshold");
    sub->add_option("--coord", flags.coord, "Coordinate of thresholds: lambda, x or z")->capture_default_str();
    sub->add_option("--target", flags.target, "max-above or min-below")->capture_default_str();
    sub->add_option("--reps", cfg.reps, "Number of replications N")->capture_default_str();
    sub->add_option("--naive-reps", cfg.naive_reps, "Naive replications for compare (default: --reps)");
    sub->add_option("--seed", seed, "Master seed (falls back to JACOBI_RARE_SEED)");
    sub->add_option("--workers", cfg.workers, "Worker threads")->capture_default_str();
    sub->add_option("--format", flags.format, "csv or json")->capture_default_str();
    sub->add_option("--rate-multiplier", cfg.rate_multiplier, "Tilt rate multiplier in (0, 2)")->capture_default_str();
    sub->add_option("--regime-threshold", cfg.regime_threshold, "gamma, sigma at or below this are set to 0")
        ->capture_default_str();
    sub->add_flag("--naive", cfg.naive, "Use naive Monte Carlo instead of importance sampling");
    sub->add_flag("--sample-std", cfg.sample_std, "Use the N-1 standard deviation");
    sub->add_option("--x-min", flags.x_min, "Grid start");
    sub->add_option("--x-max", flags.x_max, "Grid end");
    sub->add_option("--points", cfg.points, "Grid points or checkpoints");
    sub->add_option("--first-checkpoint", cfg.first_checkpoint, "Smallest N in cov-curve")->capture_default_str();
}

std::uint64_t seed_from_env() {
    const char* env = std::getenv("JACOBI_RARE_SEED");
    if (env == nullptr || *env == '\0') return 1;
    std::istringstream in(env);
    std::uint64_t v = 0;
    if (!(in >> v) || !in.eof()) {
        throw jrare::ParameterError(std::string("JACOBI_RARE_SEED is not an unsigned integer: ") + env);
    }
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rare-event Monte Carlo for extremal eigenvalues of the beta-Jacobi ensemble"};
    app.require_subcommand(1);

    jrare::RunConfig cfg;
    Flags flags;
    std::optional<std::uint64_t> seed;

    using Command = std::function<int(const jrare::RunConfig&, std::ostream&)>;
    const std::map<std::string, std::pair<std::string, Command>> commands = {
        {"sample", {"Draw ordered spectra", jrare::cmd_sample}},
        {"estimate", {"Estimate a tail probability", jrare::cmd_estimate}},
        {"sweep", {"Estimates over a threshold grid", jrare::cmd_sweep}},
        {"cov-curve", {"Running C.O.V. against N", jrare::cmd_cov_curve}},
        {"rate-table", {"Tabulate rate functions and the limit density", jrare::cmd_rate_table}},
        {"compare", {"Importance sampling against naive Monte Carlo", jrare::cmd_compare}},
    };
    std::map<CLI::App*, Command> handlers;
    for (const auto& [name, entry] : commands) {
        CLI::App* sub = app.add_subcommand(name, entry.first);
        add_common(sub, cfg, flags, seed);
        handlers[sub] = entry.second;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : jrare::kExitParameter;
    }

    try {
        cfg.coord = jrare::parse_coordinate(flags.coord);
        cfg.target = jrare::parse_target(flags.target);
        cfg.format = jrare::parse_format(flags.format);
        cfg.seed = seed ? *seed : seed_from_env();
        for (const auto& [sub, handler] : handlers) {
            if (!sub->parsed()) continue;
            if (sub->count("--x-min") > 0) cfg.x_min = flags.x_min;
            if (sub->count("--x-max") > 0) cfg.x_max = flags.x_max;
            std::ostringstream out;
            const int code = handler(cfg, out);
            std::cout << out.str() << std::flush;
            return code;
        }
    } catch (const jrare::ParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return jrare::kExitParameter;
    } catch (const jrare::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return jrare::kExitParameter;
    } catch (const jrare::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return jrare::kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return jrare::kExitNumerical;
    }
    return jrare::kExitOk;
}
