#include "rotenberg/semigroup.hpp"

#include <algorithm>
#include <cmath>

#include "rotenberg/csv.hpp"

namespace rotenberg {

EvolutionResult apply(const ExtendedField& ext, double t, Exec exec) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw ValidationError("apply: t must be finite and >= 0");
    }
    const auto& f = ext.omega();
    const auto& vs = ext.velocities();
    for (std::size_t j = 0; j < vs.size(); ++j) {
        if (f.x(0) - t * vs.node(j) < ext.x_min(j)) {
            throw NumericalError("apply: t=" + format_double(t) +
                                 " exceeds the extension coverage (built for t_max=" +
                                 format_double(ext.t_max()) + "); rebuild the extension");
        }
    }

    EvolutionResult out;
    out.t = t;
    out.x_min = ext.x_min();
    if (t == 0.0) {
        out.density = f;
    } else {
        out.density = DensityField(f.nx(), f.velocities_ptr());
        const auto columns = static_cast<long long>(f.nv());
        const std::size_t nx = f.nx();
        auto& dst = out.density;
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
        for (long long jj = 0; jj < columns; ++jj) {
            const auto j = static_cast<std::size_t>(jj);
            const double shift = t * vs.node(j);
            for (std::size_t i = 0; i < nx; ++i) {
                dst(i, j) = ext.evaluate(j, f.x(i) - shift);
            }
        }
    }
    out.density.check_finite("apply");
    out.mass = mass(out.density);
    out.l1 = l1_norm(out.density);
    return out;
}

EvolutionResult apply(const Model& model, double t, const DensityField& f, Exec exec) {
    return apply(build_extension(model, f, t, exec), t, exec);
}

DensityField apply_small_t(const Model& model, double t, const DensityField& f, Exec exec) {
    const double b = model.params().b;
    if (!(t >= 0.0) || t > 1.0 / b) {
        throw ValidationError("apply_small_t: need 0 <= t <= 1/b = " + format_double(1.0 / b));
    }
    if (f.velocities_ptr() != model.velocities_ptr()) {
        throw ValidationError("apply_small_t: density and model use different velocity spaces");
    }
    if (t == 0.0) {
        return f;
    }
    const auto& vs = model.velocities();
    const BoundaryMeasure measure(model);
    DensityField out(f.nx(), f.velocities_ptr());
    const auto columns = static_cast<long long>(f.nv());
    const std::size_t nx = f.nx();
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
    for (long long jj = 0; jj < columns; ++jj) {
        const auto j = static_cast<std::size_t>(jj);
        const double v = vs.node(j);
        for (std::size_t i = 0; i < nx; ++i) {
            const double x = f.x(i);
            if (x > t * v) {
                out(i, j) = f.interpolate(j, x - t * v);
            } else {
                out(i, j) = measure.apply(j, [&](std::size_t w) {
                    return f.interpolate(w, x_mother(x, v, vs.node(w), t));
                });
            }
        }
    }
    out.check_finite("apply_small_t");
    return out;
}

std::vector<EvolutionResult> trajectory(const Model& model, const DensityField& f,
                                        const std::vector<double>& times, Exec exec) {
    if (times.empty()) {
        return {};
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0.0) || (i > 0 && times[i] < times[i - 1])) {
            throw ValidationError("times: must be nonnegative and ascending");
        }
    }
    const auto ext = build_extension(model, f, times.back(), exec);
    std::vector<EvolutionResult> out;
    out.reserve(times.size());
    for (double t : times) {
        out.push_back(apply(ext, t, exec));
    }
    return out;
}

double semigroup_law_check(const Model& model, const DensityField& f, double s, double t, Exec exec) {
    if (!(s >= 0.0) || !(t >= 0.0)) {
        throw ValidationError("semigroup_law_check: s and t must be >= 0");
    }
    if (s == 0.0) {
        return 0.0;
    }
    const auto direct = apply(model, s + t, f, exec);
    const auto inner = apply(model, t, f, exec);
    const auto composed = apply(model, s, inner.density, exec);
    return l1_distance(direct.density, composed.density);
}

}  // namespace rotenberg
