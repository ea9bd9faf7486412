#include "jacobi_rare/commands.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "jacobi_rare/error.hpp"
#include "jacobi_rare/scaling.hpp"
#include "jacobi_rare/spectral.hpp"

namespace jrare {

namespace {

using nlohmann::ordered_json;

bool use_json(OutputFormat f, bool json_default) {
    if (f == OutputFormat::Auto) return json_default;
    return f == OutputFormat::Json;
}

// JSON has no infinities: write null and flag it in "<key>_infinite".
void put_number(ordered_json& j, const std::string& key, double v) {
    const bool infinite = std::isinf(v);
    if (infinite || std::isnan(v)) {
        j[key] = nullptr;
    } else {
        j[key] = v;
    }
    j[key + "_infinite"] = infinite;
}

ordered_json report_json(const EstimateReport& r, std::uint64_t seed) {
    ordered_json j;
    j["method"] = std::string(to_string(r.method));
    put_number(j, "estimate", r.estimate);
    put_number(j, "std", r.std_dev);
    put_number(j, "cov_sample", r.cov_sample);
    put_number(j, "cov_mean", r.cov_mean);
    j["ci95"] = ordered_json::array({r.ci_low, r.ci_high});
    j["n_reps"] = r.n_reps;
    j["hits"] = r.hits;
    j["zero_hits"] = r.zero_hits;
    j["variance"] = r.variance_form == VarianceForm::Population ? "population" : "sample";
    j["seed"] = seed;
    return j;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
    if (points == 0) throw ParameterError("grid needs at least one point");
    if (points == 1) return {lo};
    if (!(lo < hi)) throw ParameterError("grid needs x-min < x-max");
    std::vector<double> g(points);
    for (std::size_t k = 0; k < points; ++k) {
        g[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
    }
    g.back() = hi;
    return g;
}

TiltConfig tilt_config(const RunConfig& cfg, const EnsembleParams& params, double x_X) {
    TiltConfig t;
    t.target = cfg.target;
    t.threshold_x = x_X;
    t.rate_multiplier = cfg.rate_multiplier;
    t.regime = limit_regime(params, cfg.regime_threshold);
    return t;
}

EstimateReport run_estimate(const RunConfig& cfg, const EnsembleParams& params, double value) {
    const Threshold th{value, cfg.coord};
    if (cfg.naive) return naive_mc(params, th, cfg.target, cfg.reps, cfg.options());
    return estimate_is(params, tilt_config(cfg, params, threshold_in_x(th, params)), cfg.reps, cfg.options());
}

double target_rate(const RateFunctions& rates, TiltTarget target, double x) {
    return target == TiltTarget::MaxAbove ? rates.rate_max(x) : rates.rate_min(x);
}

template <class F>
double or_inf(F&& f) {
    try {
        return f();
    } catch (const DomainError&) {
        return kInfiniteRate;
    }
}

}  // namespace

OutputFormat parse_format(std::string_view text) {
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    if (text == "auto") return OutputFormat::Auto;
    throw ParameterError("unknown format '" + std::string(text) + "' (expected csv or json)");
}

RunOptions RunConfig::options() const {
    RunOptions o;
    o.seed = seed;
    o.workers = workers == 0 ? 1 : workers;
    o.variance_form = sample_std ? VarianceForm::Sample : VarianceForm::Population;
    return o;
}

std::string format_csv_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int cmd_sample(const RunConfig& cfg, std::ostream& out) {
    const EnsembleParams params = cfg.params();
    const RunOptions opts = cfg.options();
    std::vector<OrderedSpectrum> draws(cfg.reps);
    parallel_map(cfg.reps, opts.workers, [&](std::size_t i) {
        RandomStream rng = RandomStream::for_replication(opts.seed, i);
        draws[i] = to_coordinate(sample_jacobi(params, rng), cfg.coord, params);
        return 0.0;
    });

    if (use_json(cfg.format, false)) {
        ordered_json j;
        j["coordinate"] = std::string(to_string(cfg.coord));
        j["seed"] = cfg.seed;
        ordered_json rows = ordered_json::array();
        for (const auto& d : draws) rows.push_back(d.values);
        j["draws"] = std::move(rows);
        out << j.dump(2) << '\n';
        return kExitOk;
    }
    out << "draw,index,value\n";
    for (std::size_t i = 0; i < draws.size(); ++i) {
        for (std::size_t k = 0; k < draws[i].values.size(); ++k) {
            out << i << ',' << k << ',' << format_csv_double(draws[i].values[k]) << '\n';
        }
    }
    return kExitOk;
}

int cmd_estimate(const RunConfig& cfg, std::ostream& out) {
    const EnsembleParams params = cfg.params();
    const EstimateReport r = run_estimate(cfg, params, cfg.x);
    if (use_json(cfg.format, true)) {
        out << report_json(r, cfg.seed).dump(2) << '\n';
        return kExitOk;
    }
    out << "method,estimate,std,cov_sample,cov_mean,ci95_low,ci95_high,n_reps,hits,seed\n";
    out << to_string(r.method) << ',' << format_csv_double(r.estimate) << ',' << format_csv_double(r.std_dev) << ','
        << format_csv_double(r.cov_sample) << ',' << format_csv_double(r.cov_mean) << ','
        << format_csv_double(r.ci_low) << ',' << format_csv_double(r.ci_high) << ',' << r.n_reps << ',' << r.hits
        << ',' << cfg.seed << '\n';
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
    if (!cfg.x_min || !cfg.x_max) throw ParameterError("sweep needs --x-min and --x-max");
    const EnsembleParams params = cfg.params();
    const RateFunctions rates(limit_regime(params, cfg.regime_threshold));
    const auto grid = linear_grid(*cfg.x_min, *cfg.x_max, cfg.points == 0 ? 10 : cfg.points);
    const double speed = params.beta() * static_cast<double>(params.n());

    struct Row {
        double x, estimate, cov, rate, ld;
    };
    std::vector<Row> rows;
    rows.reserve(grid.size());
    for (double x : grid) {
        const EstimateReport r = run_estimate(cfg, params, x);
        const double x_X = convert(x, cfg.coord, Coordinate::X, params);
        const double rate = target_rate(rates, cfg.target, x_X);
        rows.push_back({x, r.estimate, r.cov_sample, rate, std::exp(-speed * rate)});
    }

    if (use_json(cfg.format, false)) {
        ordered_json arr = ordered_json::array();
        for (const auto& row : rows) {
            ordered_json j;
            j["x"] = row.x;
            put_number(j, "estimate", row.estimate);
            put_number(j, "cov", row.cov);
            put_number(j, "rate_J", row.rate);
            put_number(j, "ld_prediction", row.ld);
            arr.push_back(std::move(j));
        }
        out << arr.dump(2) << '\n';
        return kExitOk;
    }
    out << "x,estimate,cov,rate_J,ld_prediction\n";
    for (const auto& row : rows) {
        out << format_csv_double(row.x) << ',' << format_csv_double(row.estimate) << ','
            << format_csv_double(row.cov) << ',' << format_csv_double(row.rate) << ','
            << format_csv_double(row.ld) << '\n';
    }
    return kExitOk;
}

int cmd_cov_curve(const RunConfig& cfg, std::ostream& out) {
    const EnsembleParams params = cfg.params();
    const RunOptions opts = cfg.options();
    const double x_X = threshold_in_x(Threshold{cfg.x, cfg.coord}, params);
    const TiltedSampler sampler(params, tilt_config(cfg, params, x_X));
    const auto lw = is_log_weights(sampler, cfg.reps, opts);
    const auto checkpoints = log_spaced_checkpoints(std::min(cfg.first_checkpoint, cfg.reps), cfg.reps,
                                                    cfg.points == 0 ? 20 : cfg.points);
    const auto curve = cov_curve(lw, checkpoints, opts.variance_form);

    if (use_json(cfg.format, false)) {
        ordered_json arr = ordered_json::array();
        for (const auto& p : curve) {
            ordered_json j;
            j["N"] = p.n;
            put_number(j, "cov", p.cov);
            arr.push_back(std::move(j));
        }
        out << arr.dump(2) << '\n';
        return kExitOk;
    }
    out << "N,cov\n";
    for (const auto& p : curve) out << p.n << ',' << format_csv_double(p.cov) << '\n';
    return kExitOk;
}

int cmd_rate_table(const RunConfig& cfg, std::ostream& out) {
    const EnsembleParams params = cfg.params();
    const LimitRegime regime = limit_regime(params, cfg.regime_threshold);
    const RateFunctions rates(regime);
    const double lo = cfg.x_min ? convert(*cfg.x_min, cfg.coord, Coordinate::X, params) : params.x_lower();
    const double hi = cfg.x_max ? convert(*cfg.x_max, cfg.coord, Coordinate::X, params) : params.x_upper();
    const auto grid = linear_grid(lo, hi, cfg.points == 0 ? 101 : cfg.points);

    struct Row {
        double x, J, dJ, I, dI, phi, density;
    };
    std::vector<Row> rows;
    rows.reserve(grid.size());
    for (double x : grid) {
        Row r{};
        r.x = x;
        r.J = rates.rate_max(x);
        r.dJ = std::isfinite(r.J) ? or_inf([&] { return rates.derivative_max(x); }) : kInfiniteRate;
        r.I = rates.rate_min(x);
        r.dI = std::isfinite(r.I) ? or_inf([&] { return rates.derivative_min(x); }) : kInfiniteRate;
        r.phi = or_inf([&] { return phi(x, regime); });
        r.density = nu_tilde_density(x, regime);
        rows.push_back(r);
    }

    if (use_json(cfg.format, false)) {
        ordered_json arr = ordered_json::array();
        for (const auto& r : rows) {
            ordered_json j;
            j["x"] = r.x;
            put_number(j, "J", r.J);
            put_number(j, "J'", r.dJ);
            put_number(j, "I", r.I);
            put_number(j, "|I'|", r.dI);
            put_number(j, "phi", r.phi);
            put_number(j, "density", r.density);
            arr.push_back(std::move(j));
        }
        out << arr.dump(2) << '\n';
        return kExitOk;
    }
    out << "x,J,J',I,|I'|,phi,density\n";
    for (const auto& r : rows) {
        out << format_csv_double(r.x) << ',' << format_csv_double(r.J) << ',' << format_csv_double(r.dJ) << ','
            << format_csv_double(r.I) << ',' << format_csv_double(r.dI) << ',' << format_csv_double(r.phi) << ','
            << format_csv_double(r.density) << '\n';
    }
    return kExitOk;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out) {
    const EnsembleParams params = cfg.params();
    const Threshold th{cfg.x, cfg.coord};
    const RunOptions is_opts = cfg.options();
    RunOptions naive_opts = is_opts;
    naive_opts.seed = splitmix64(cfg.seed ^ 0x6e61697665ULL);

    const EstimateReport is_report =
        estimate_is(params, tilt_config(cfg, params, threshold_in_x(th, params)), cfg.reps, is_opts);
    const EstimateReport naive_report =
        naive_mc(params, th, cfg.target, cfg.naive_reps == 0 ? cfg.reps : cfg.naive_reps, naive_opts);
    const Comparison c = compare(is_report, naive_report);

    ordered_json j;
    j["is_report"] = report_json(is_report, is_opts.seed);
    j["naive_report"] = report_json(naive_report, naive_opts.seed);
    if (c.inconclusive) {
        j["z_score"] = nullptr;
    } else {
        j["z_score"] = c.z_score;
    }
    j["inconclusive"] = c.inconclusive;

    if (use_json(cfg.format, true)) {
        out << j.dump(2) << '\n';
    } else {
        out << "is_estimate,is_std,naive_estimate,naive_std,z_score,inconclusive\n";
        out << format_csv_double(is_report.estimate) << ',' << format_csv_double(is_report.std_dev) << ','
            << format_csv_double(naive_report.estimate) << ',' << format_csv_double(naive_report.std_dev) << ','
            << format_csv_double(c.z_score) << ',' << (c.inconclusive ? "true" : "false") << '\n';
    }
    return c.inconclusive ? kExitInconclusive : kExitOk;
}

}  // namespace jrare
