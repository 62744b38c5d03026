#include "rotenberg/stationary.hpp"

#include <algorithm>
#include <cmath>

#include "rotenberg/csv.hpp"
#include "rotenberg/densities.hpp"

namespace rotenberg {

std::vector<double> apply_K(const Model& model, std::span<const double> g, Exec exec) {
    const auto& vs = model.velocities();
    const auto& k = model.discrete_kernel();
    const std::size_t n = vs.size();
    if (g.size() != n) {
        throw ValidationError("apply_K: g length does not match the velocity space");
    }
    std::vector<double> out(n, 0.0);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
    for (long long jj = 0; jj < static_cast<long long>(n); ++jj) {
        const auto v = static_cast<std::size_t>(jj);
        double sum = 0.0;
        for (std::size_t w = 0; w < n; ++w) {
            sum += k(w, v) * g[w] * vs.weight(w);
        }
        out[v] = sum;
    }
    return out;
}

double velocity_l1(const VelocitySpace& vs, std::span<const double> g) {
    double sum = 0.0;
    for (std::size_t j = 0; j < vs.size(); ++j) {
        sum += std::abs(g[j]) * vs.weight(j);
    }
    return sum;
}

namespace {

double velocity_distance(const VelocitySpace& vs, std::span<const double> f, std::span<const double> g) {
    double sum = 0.0;
    for (std::size_t j = 0; j < vs.size(); ++j) {
        sum += std::abs(f[j] - g[j]) * vs.weight(j);
    }
    return sum;
}

}  // namespace

PowerIteration power_iteration(const Model& model, std::span<const double> init, double tol,
                               std::size_t max_iter, Exec exec) {
    if (!(tol > 0.0)) {
        throw ValidationError("power_iteration: tol must be positive");
    }
    const auto& vs = model.velocities();
    if (init.size() != vs.size()) {
        throw ValidationError("power_iteration: init length does not match the velocity space");
    }
    for (double x : init) {
        if (x < 0.0 || !std::isfinite(x)) {
            throw ValidationError("power_iteration: init must be a nonnegative density");
        }
    }
    PowerIteration out;
    out.g.assign(init.begin(), init.end());
    const double m0 = velocity_l1(vs, out.g);
    if (!(m0 > 0.0)) {
        throw ValidationError("power_iteration: init has zero mass");
    }
    for (double& x : out.g) {
        x /= m0;
    }
    bool settled = false;
    while (out.iterations < max_iter) {
        auto next = apply_K(model, out.g, exec);
        const double m = velocity_l1(vs, next);
        if (!(m > 0.0) || !std::isfinite(m)) {
            throw NumericalError("power_iteration: iterate lost its mass");
        }
        for (double& x : next) {
            x /= m;
        }
        const double step = velocity_distance(vs, next, out.g);
        out.g = std::move(next);
        ++out.iterations;
        if (step <= tol) {
            settled = true;
            break;
        }
    }
    const auto kg = apply_K(model, out.g, exec);
    out.residual = velocity_distance(vs, kg, out.g);
    out.top_cell_mass = out.g.back() * vs.weight(vs.size() - 1);
    if (vs.size() > 2 && out.top_cell_mass > 0.5) {
        out.status = "boundary-concentration";
        out.converged = false;
    } else if (settled && out.residual <= tol) {
        out.status = "converged";
        out.converged = true;
    } else {
        out.status = "max-iterations";
        out.converged = false;
    }
    return out;
}

H4Check h4_check(const Model& model, std::span<const double> f_diamond) {
    const auto& vs = model.velocities();
    if (f_diamond.size() != vs.size()) {
        throw ValidationError("h4_check: f length does not match the velocity space");
    }
    H4Check out;
    for (std::size_t j = 0; j < vs.size(); ++j) {
        out.integral += f_diamond[j] / vs.node(j) * vs.weight(j);
    }
    if (model.params().a != 0.0 || !vs.is_continuous()) {
        return out;
    }

    // Value of f on a sub-cell [lo, hi] of the innermost cell, one application
    // of K to the discrete fixed point.
    const auto& kernel = model.kernel();
    auto sub_cell_value = [&](double lo, double hi) {
        if (!kernel.is_builtin()) {
            return f_diamond[0];
        }
        double sum = 0.0;
        for (std::size_t w = 0; w < vs.size(); ++w) {
            sum += vs.weight(w) * f_diamond[w] * *kernel.daughter_integral(vs.node(w), lo, hi);
        }
        return sum / (hi - lo);
    };

    const double inner = f_diamond[0] / vs.node(0) * vs.weight(0);
    const double rest = out.integral - inner;
    const double h = vs.cell_upper(0);
    out.refinements.push_back(out.integral);
    for (int r = 1; r <= 3; ++r) {
        // Edges 0, h/2^r, h/2^(r-1), ..., h.
        double sum = 0.0;
        double lo = 0.0;
        double hi = h / std::ldexp(1.0, r);
        while (true) {
            const double mid = 0.5 * (lo + hi);
            sum += sub_cell_value(lo, hi) / mid * (hi - lo);
            if (hi >= h) {
                break;
            }
            lo = hi;
            hi = 2.0 * hi;
        }
        out.refinements.push_back(rest + sum);
    }
    const double d1 = out.refinements[1] - out.refinements[0];
    const double d3 = out.refinements[3] - out.refinements[2];
    out.divergence_flag = d1 > 1e-9 * out.integral && d3 >= 0.5 * d1;
    return out;
}

StationaryReport stationary_report(const Model& model, std::uint64_t seed, std::size_t starts, double tol,
                                   std::size_t max_iter, double agreement_tol, Exec exec) {
    if (starts == 0) {
        throw ValidationError("stationary_report: need at least one start");
    }
    const auto& vs = model.velocities();
    StationaryReport report;
    report.starts = starts;
    std::vector<PowerIteration> runs;
    for (std::size_t s = 0; s < starts; ++s) {
        const auto init = random_velocity_density(vs, seed + 0x9e3779b97f4a7c15ULL * s);
        runs.push_back(power_iteration(model, init, tol, max_iter, exec));
    }
    for (std::size_t i = 0; i < runs.size(); ++i) {
        for (std::size_t j = i + 1; j < runs.size(); ++j) {
            report.agreement = std::max(report.agreement, velocity_distance(vs, runs[i].g, runs[j].g));
        }
    }
    const auto& best = runs.front();
    report.f_diamond = best.g;
    report.residual = best.residual;
    report.iterations = best.iterations;
    report.status = best.status;
    report.converged = std::all_of(runs.begin(), runs.end(), [](const auto& r) { return r.converged; });
    report.positivity_min = *std::min_element(best.g.begin(), best.g.end());
    report.h4 = h4_check(model, best.g);
    report.pass = report.converged && report.residual <= tol && report.positivity_min > 0.0 &&
                  report.agreement <= agreement_tol;
    return report;
}

DensityField invariant_density(const Model& model, std::span<const double> f_diamond, std::size_t nx) {
    const auto h4 = h4_check(model, f_diamond);
    if (h4.divergence_flag || !(h4.integral > 0.0) || !std::isfinite(h4.integral)) {
        throw ValidationError("invariant_density: the integral of f/v diverges; no invariant density");
    }
    const auto& vs = model.velocities();
    DensityField f(nx, model.velocities_ptr());
    for (std::size_t j = 0; j < vs.size(); ++j) {
        const double value = f_diamond[j] / vs.node(j) / h4.integral;
        for (std::size_t i = 0; i < nx; ++i) {
            f(i, j) = value;
        }
    }
    return f;
}

double invariance_check(const Model& model, const DensityField& f_star, const std::vector<double>& times,
                        Exec exec) {
    if (!model.params().is_markov(1e-9)) {
        throw ValidationError("invariance_check: needs p + q = 1");
    }
    double worst = 0.0;
    for (const auto& r : trajectory(model, f_star, times, exec)) {
        worst = std::max(worst, l1_distance(r.density, f_star));
    }
    return worst;
}

PartialIntegrality partial_integrality_check(const Model& model, double threshold) {
    const auto& vs = model.velocities();
    if (!vs.is_continuous()) {
        throw ValidationError("partial_integrality_check: needs a continuous velocity space");
    }
    const auto& params = model.params();
    const double d = std::max(params.a, params.b / 2.0);
    const auto& kernel = model.kernel();
    const auto& dk = model.discrete_kernel();
    PartialIntegrality out;
    out.threshold = threshold;
    for (std::size_t w = 0; w < vs.size(); ++w) {
        double inner = 0.0;
        if (auto exact = kernel.daughter_integral(vs.node(w), d, params.b)) {
            inner = *exact;
        } else {
            for (std::size_t v = 0; v < vs.size(); ++v) {
                if (vs.node(v) > d) {
                    inner += dk(w, v) * vs.weight(v);
                }
            }
        }
        out.value += inner * vs.weight(w);
    }
    out.pass = out.value > threshold;
    return out;
}

std::size_t decreasing_from(const std::vector<double>& series, double slack) {
    if (series.empty()) {
        return 0;
    }
    std::size_t start = series.size() - 1;
    while (start > 0 && series[start] <= series[start - 1] * (1.0 + slack) + 1e-300) {
        --start;
    }
    return start;
}

StabilityTable stability_experiment(const Model& model, const std::vector<DensityField>& initials,
                                    const DensityField& f_star, const std::vector<double>& times, Exec exec) {
    if (!model.params().is_markov(1e-9)) {
        throw ValidationError("stability_experiment: needs p + q = 1");
    }
    StabilityTable table;
    table.times = times;
    table.v_min = model.velocities().node(0);
    for (const auto& f : initials) {
        std::vector<double> row;
        for (const auto& r : trajectory(model, f, times, exec)) {
            row.push_back(l1_distance(r.density, f_star));
        }
        const std::size_t from = decreasing_from(row);
        table.decreasing_from.push_back(from);
        // At least two consecutive decreases at the end of the series.
        table.eventually_decreasing.push_back(row.size() >= 3 && from + 2 < row.size());
        table.distances.push_back(std::move(row));
    }
    return table;
}

DecaySeries decay_experiment(const Model& model, const DensityField& f, const std::vector<double>& times,
                             Exec exec) {
    if (!(model.params().reproduction() < 1.0)) {
        throw ValidationError("decay_experiment: needs p + q < 1");
    }
    DecaySeries out;
    out.times = times;
    for (const auto& r : trajectory(model, f, times, exec)) {
        out.l1.push_back(r.l1);
    }
    for (double t : times) {
        out.norms.push_back(operator_norm(model, f.nx(), t, 1e-9, exec));
    }
    return out;
}

}  // namespace rotenberg
