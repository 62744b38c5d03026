#include "rotenberg/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "CLI11.hpp"
#include "json.hpp"
#include "rotenberg/csv.hpp"
#include "rotenberg/densities.hpp"
#include "rotenberg/dual.hpp"
#include "rotenberg/extension.hpp"
#include "rotenberg/semigroup.hpp"
#include "rotenberg/stationary.hpp"

namespace rotenberg {

namespace {

using json = nlohmann::json;

const std::vector<std::string> commands{"validate", "extend", "evolve", "norms",
                                        "stationary", "stability", "decay", "report"};

double flag(bool b) { return b ? 1.0 : 0.0; }

struct Context {
    const ExperimentConfig& config;
    const Model& model;
    std::ostream& log;
    std::vector<std::string> written;

    CsvWriter writer(const std::string& name, std::vector<std::string> columns) {
        written.push_back(name);
        return CsvWriter(config.output_dir / name, config.stamp(), std::move(columns));
    }
};

void run_validate(Context& ctx) {
    const auto& cfg = ctx.config;
    const auto& model = ctx.model;
    const auto& vs = model.velocities();
    auto out = ctx.writer("validation.csv", {"check", "value", "threshold", "pass", "gating"});
    bool ok = true;
    auto record = [&](const std::string& name, double value, double threshold, bool pass, bool gating) {
        out.raw_row(std::vector<std::string>{name, format_double(value), format_double(threshold),
                                             pass ? "1" : "0", gating ? "1" : "0"});
        if (gating && !pass) {
            ok = false;
        }
        ctx.log << "  " << name << " = " << format_double(value) << (pass ? "  ok" : "  FAIL")
                << (gating ? "" : " (informational)") << '\n';
    };

    const double raw = model.discrete_kernel().raw_deviation();
    record("kernel_discrete_row_deviation", raw, cfg.tolerances.kernel, raw <= cfg.tolerances.kernel, true);
    const auto point = validate_kernel(model.kernel(), vs, cfg.tolerances.kernel);
    // Builtin kernels on continuous spaces are integrated exactly per cell, so
    // point quadrature is only reported for them.
    const bool point_gating = !(model.kernel().is_builtin() && vs.is_continuous());
    record("kernel_point_quadrature_deviation", point.max_row_deviation, cfg.tolerances.kernel, point.pass,
           point_gating);

    std::vector<double> ones(vs.size(), 1.0);
    const auto ident = int_mes_identity(model, ones);
    record("int_mes_deviation", ident.deviation, 1e-9, ident.deviation <= 1e-9, true);

    if (vs.is_continuous()) {
        const auto pi = partial_integrality_check(model, cfg.tolerances.partial_integrality);
        record("partial_integrality", pi.value, pi.threshold, pi.pass, false);
    }
    record("velocity_min_node", vs.node(0), cfg.params.a, vs.node(0) > 0.0, true);
    record("reproduction", cfg.params.reproduction(), 1.0, true, false);
    out.commit();
    if (!ok) {
        throw ValidationError("validate: at least one gating check failed (see validation.csv)");
    }
}

void write_extension(Context& ctx, const ExtendedField& ext) {
    auto out = ctx.writer("extension.csv", {"x", "v", "strip_index", "value"});
    const auto& vs = ext.velocities();
    const auto& f = ext.omega();
    for (std::size_t j = 0; j < vs.size(); ++j) {
        const double v = vs.node(j);
        for (std::size_t k = ext.ext_size(j); k-- > 0;) {
            out.row({ext.ext_x(k), v, static_cast<double>(ext.level(k, j)), ext.ext_value(k, j)});
        }
        for (std::size_t i = 0; i < f.nx(); ++i) {
            out.row({f.x(i), v, 0.0, f(i, j)});
        }
    }
    out.commit();
}

void run_extend(Context& ctx) {
    const auto& cfg = ctx.config;
    const auto f = cfg.build_initial(cfg.initials.front(), ctx.model);
    const double t_max = cfg.options.t_max.value_or(cfg.times.back());
    const auto ext = build_extension(ctx.model, f, t_max);
    write_extension(ctx, ext);
    ctx.log << "  extension: up to " << ext.ext_size() << " nodes per column, x_min=" << format_double(ext.x_min())
            << '\n';
    if (cfg.options.omega) {
        const double omega = *cfg.options.omega;
        const std::size_t j_max = std::min(cfg.options.j_max, ext.deepest_level());
        const double m_omega = extension_constant(cfg.params, omega);
        const double lhs = weighted_norm(ext, omega, j_max);
        const double rhs = m_omega * l1_norm(f);
        auto out = ctx.writer("extension_bound.csv", {"omega", "j_max", "weighted_norm", "m_omega", "bound", "pass"});
        out.row({omega, static_cast<double>(j_max), lhs, m_omega, rhs, flag(lhs <= rhs + cfg.tolerances.extension)});
        out.commit();
        ctx.log << "  weighted norm " << format_double(lhs) << " <= " << format_double(rhs) << '\n';
    }
}

void run_evolve(Context& ctx) {
    const auto& cfg = ctx.config;
    const auto f = cfg.build_initial(cfg.initials.front(), ctx.model);
    const auto results = trajectory(ctx.model, f, cfg.times);
    auto evo = ctx.writer("evolution.csv", {"t", "x", "v", "value"});
    auto masses = ctx.writer("mass.csv", {"t", "mass"});
    for (const auto& r : results) {
        const auto& d = r.density;
        for (std::size_t j = 0; j < d.nv(); ++j) {
            for (std::size_t i = 0; i < d.nx(); ++i) {
                evo.row({r.t, d.x(i), d.v(j), d(i, j)});
            }
        }
        masses.row({r.t, r.mass});
        ctx.log << "  t=" << format_double(r.t) << " mass=" << format_double(r.mass) << '\n';
    }
    evo.commit();
    masses.commit();
}

void run_norms(Context& ctx) {
    const auto& cfg = ctx.config;
    auto out = ctx.writer("norms.csv", {"t", "norm", "bound", "pass"});
    for (double t : cfg.times) {
        const auto c = operator_norm(ctx.model, cfg.nx, t, cfg.tolerances.norm);
        out.row({c.t, c.norm, c.bound, flag(c.pass)});
        ctx.log << "  t=" << format_double(t) << " norm=" << format_double(c.norm) << " bound("
                << c.bound_kind << ")=" << format_double(c.bound) << (c.pass ? "" : "  EXCEEDED") << '\n';
    }
    out.commit();
}

StationaryReport compute_stationary(Context& ctx) {
    const auto& cfg = ctx.config;
    return stationary_report(ctx.model, cfg.seed, std::max<std::size_t>(cfg.options.starts, 1),
                             cfg.tolerances.power, cfg.tolerances.max_iter, cfg.tolerances.agreement);
}

void run_stationary(Context& ctx) {
    const auto& cfg = ctx.config;
    const auto& vs = ctx.model.velocities();
    const auto report = compute_stationary(ctx);
    {
        auto out = ctx.writer("stationary.csv", {"v", "weight", "f_diamond"});
        for (std::size_t j = 0; j < vs.size(); ++j) {
            out.row({vs.node(j), vs.weight(j), report.f_diamond[j]});
        }
        out.commit();
    }
    auto summary = ctx.writer("stationary_report.csv", {"quantity", "value"});
    auto put = [&](const std::string& name, double value) {
        summary.raw_row(std::vector<std::string>{name, format_double(value)});
    };
    put("residual", report.residual);
    put("positivity_min", report.positivity_min);
    put("multi_start_agreement", report.agreement);
    put("starts", static_cast<double>(report.starts));
    put("iterations", static_cast<double>(report.iterations));
    put("converged", flag(report.converged));
    summary.raw_row(std::vector<std::string>{"status", report.status});
    put("h4_integral", report.h4.integral);
    put("h4_divergence_flag", flag(report.h4.divergence_flag));
    put("pass", flag(report.pass));
    put("v_min", vs.node(0));
    if (vs.is_continuous()) {
        const auto pi = partial_integrality_check(ctx.model, cfg.tolerances.partial_integrality);
        put("partial_integrality", pi.value);
        put("partial_integrality_pass", flag(pi.pass));
        const auto ve = v_epsilon_diagnostic(ctx.model, std::max(cfg.options.vepsilon_n, 2));
        put("vepsilon_n", ve.n);
        put("vepsilon_d_n", ve.d_n);
        put("vepsilon_sup_m", ve.sup_m);
        put("vepsilon_equality_predicted", flag(ve.equality_predicted));
    }
    summary.commit();
    ctx.log << "  stationary: " << report.status << " residual=" << format_double(report.residual)
            << " I=" << format_double(report.h4.integral)
            << (report.h4.divergence_flag ? " (divergent)" : "") << '\n';

    if (report.converged && !report.h4.divergence_flag) {
        const auto f_star = invariant_density(ctx.model, report.f_diamond, cfg.nx);
        auto out = ctx.writer("invariant_density.csv", {"x", "v", "value"});
        for (std::size_t j = 0; j < f_star.nv(); ++j) {
            for (std::size_t i = 0; i < f_star.nx(); ++i) {
                out.row({f_star.x(i), f_star.v(j), f_star(i, j)});
            }
        }
        out.commit();
    }
}

void run_stability(Context& ctx) {
    const auto& cfg = ctx.config;
    if (!cfg.params.is_markov(1e-9)) {
        throw ValidationError("stability: needs p + q = 1");
    }
    const auto report = compute_stationary(ctx);
    if (!report.converged) {
        throw ValidationError("stability: no stationary density for the kernel (" + report.status + ")");
    }
    const auto f_star = invariant_density(ctx.model, report.f_diamond, cfg.nx);
    std::vector<DensityField> initials;
    for (const auto& spec : cfg.initials) {
        initials.push_back(cfg.build_initial(spec, ctx.model));
    }
    const auto table = stability_experiment(ctx.model, initials, f_star, cfg.times);
    auto out = ctx.writer("stability.csv", {"initial", "t", "distance"});
    for (std::size_t n = 0; n < table.distances.size(); ++n) {
        for (std::size_t k = 0; k < table.times.size(); ++k) {
            out.row({static_cast<double>(n), table.times[k], table.distances[n][k]});
        }
    }
    out.commit();
    auto summary = ctx.writer("stability_summary.csv",
                              {"initial", "decreasing_from_t", "eventually_decreasing", "final_distance", "v_min"});
    for (std::size_t n = 0; n < table.distances.size(); ++n) {
        summary.row({static_cast<double>(n), table.times[table.decreasing_from[n]],
                     flag(table.eventually_decreasing[n]), table.distances[n].back(), table.v_min});
        ctx.log << "  initial " << n << ": final distance " << format_double(table.distances[n].back()) << '\n';
    }
    summary.commit();
}

void run_decay(Context& ctx) {
    const auto& cfg = ctx.config;
    const auto f = cfg.build_initial(cfg.initials.front(), ctx.model);
    const auto series = decay_experiment(ctx.model, f, cfg.times);
    auto out = ctx.writer("decay.csv", {"t", "l1", "norm", "bound", "pass"});
    for (std::size_t k = 0; k < series.times.size(); ++k) {
        const auto& c = series.norms[k];
        out.row({series.times[k], series.l1[k], c.norm, c.bound, flag(c.pass)});
        ctx.log << "  t=" << format_double(series.times[k]) << " |T(t)f|=" << format_double(series.l1[k])
                << " |T(t)|=" << format_double(c.norm) << '\n';
    }
    out.commit();
}

void write_manifest(Context& ctx, const std::vector<std::string>& files) {
    const auto& cfg = ctx.config;
    json manifest;
    manifest["config"] = json::parse(cfg.canonical);
    manifest["stamp"] = cfg.stamp();
    manifest["seed"] = cfg.seed;
    manifest["v_min"] = ctx.model.velocities().node(0);
    manifest["kernel"] = ctx.model.kernel().name();
    json entries = json::array();
    for (const auto& name : files) {
        const auto rows = read_csv_cells(cfg.output_dir / name);
        json entry;
        entry["file"] = name;
        entry["columns"] = rows.empty() ? json::array() : json(rows.front());
        entry["rows"] = rows.empty() ? 0 : rows.size() - 1;
        entries.push_back(entry);
    }
    manifest["files"] = entries;
    write_file_atomic(cfg.output_dir / "manifest.json", manifest.dump(2) + "\n");
    ctx.written.push_back("manifest.json");
}

void run_report(Context& ctx) {
    const auto& cfg = ctx.config;
    std::vector<std::function<void(Context&)>> steps{run_validate, run_evolve, run_norms};
    if (ctx.model.velocities().is_continuous()) {
        steps.push_back(run_stationary);
    }
    if (cfg.params.is_markov(1e-9)) {
        steps.push_back(run_stability);
    } else if (cfg.params.reproduction() < 1.0) {
        steps.push_back(run_decay);
    }
    for (const auto& step : steps) {
        step(ctx);
    }
    const auto files = ctx.written;
    write_manifest(ctx, files);
}

}  // namespace

std::string usage() {
    return "usage: rotenberg <command> --config <path> [--out <dir>] [--seed <u64>]\n"
           "commands: validate extend evolve norms stationary stability decay report\n";
}

bool is_command(const std::string& name) {
    return std::find(commands.begin(), commands.end(), name) != commands.end();
}

std::vector<std::string> run_command(const std::string& command, const ExperimentConfig& config,
                                     std::ostream& log) {
    static const std::map<std::string, std::function<void(Context&)>> table{
        {"validate", run_validate}, {"extend", run_extend},       {"evolve", run_evolve},
        {"norms", run_norms},       {"stationary", run_stationary}, {"stability", run_stability},
        {"decay", run_decay},       {"report", run_report}};
    const auto it = table.find(command);
    if (it == table.end()) {
        throw std::invalid_argument("unknown command '" + command + "'");
    }
    const Model model = config.build_model();
    Context ctx{config, model, log, {}};
    log << command << ": " << config.stamp() << '\n';
    it->second(ctx);
    return ctx.written;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rotenberg cell-population semigroup simulator"};
    std::string command;
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    app.add_option("command", command, "one of: validate extend evolve norms stationary stability decay report")
        ->required();
    app.add_option("--config", config_path, "JSON experiment config")->required();
    app.add_option("--out", out_dir, "output directory (overrides output_dir)");
    auto* seed_opt = app.add_option("--seed", seed, "64-bit seed for random initials and starts");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help() << usage();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        if (!command.empty() && !is_command(command)) {
            err << "unknown command '" << command << "'\n";
        } else {
            err << e.what() << '\n';
        }
        err << usage();
        return exit_usage;
    }
    if (!is_command(command)) {
        err << "unknown command '" << command << "'\n" << usage();
        return exit_usage;
    }
    try {
        auto config = load_config(config_path);
        if (!out_dir.empty()) {
            config.output_dir = out_dir;
        }
        if (seed_opt->count() > 0) {
            config.seed = seed;
        }
        run_command(command, config, out);
        return exit_ok;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return exit_validation;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_numerical;
    }
}

}  // namespace rotenberg
