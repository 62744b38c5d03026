#include "rotenberg/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rotenberg/csv.hpp"

namespace rotenberg {

std::size_t strip_index(double x, double v, double b) {
    if (!(x < 1.0)) {
        throw ValidationError("strip_index: x=" + format_double(x) + " is outside J = (-inf, 1)");
    }
    if (!(v > 0.0) || !(b > 0.0)) {
        throw ValidationError("strip_index: need v > 0 and b > 0");
    }
    if (x > 0.0) {
        return 0;
    }
    return static_cast<std::size_t>(std::floor(-x * b / v)) + 1;
}

std::size_t ExtendedField::deepest_level() const {
    const auto& vs = velocities();
    std::size_t deepest = std::numeric_limits<std::size_t>::max();
    for (std::size_t j = 0; j < vs.size(); ++j) {
        const double depth = static_cast<double>(size_[j] - 1) * dx();
        deepest = std::min(deepest, static_cast<std::size_t>(std::floor(depth * b_ / vs.node(j))));
    }
    return deepest;
}

double ExtendedField::evaluate(std::size_t j, double y) const {
    if (y > 0.0) {
        return omega_.interpolate(j, y);
    }
    const double s = -y / dx() - 0.5;
    const double* col = ext_.data() + j * m_;
    if (s <= 0.0) {
        return col[0];
    }
    const auto k = static_cast<std::size_t>(s);
    const std::size_t n = size_[j];
    if (k + 1 >= n) {
        if (k + 1 == n && s == static_cast<double>(k)) {
            return col[k];
        }
        throw NumericalError("extension: x=" + format_double(y) + " lies left of x_min=" +
                             format_double(x_min(j)) + " in column v=" + format_double(velocities().node(j)) +
                             "; rebuild the extension with a larger t_max");
    }
    const double frac = s - static_cast<double>(k);
    return col[k] + frac * (col[k + 1] - col[k]);
}

namespace {

// Value of f~ at y <= 0 in column w while level `current` is being filled.
// If the far (left) bracket node belongs to a level that is not finished yet,
// the near node alone is used.
inline double sweep_lookup(const double* col, const std::uint32_t* lev, std::size_t n,
                           double dx, double y, std::uint32_t current, bool& ok) {
    const double s = -y / dx - 0.5;
    if (s <= 0.0) {
        ok = ok && lev[0] < current;
        return col[0];
    }
    const auto k = static_cast<std::size_t>(s);
    if (k + 1 >= n) {
        ok = false;
        return 0.0;
    }
    ok = ok && lev[k] < current;
    if (lev[k + 1] >= current) {
        return col[k];
    }
    const double frac = s - static_cast<double>(k);
    return col[k] + frac * (col[k + 1] - col[k]);
}

}  // namespace

ExtendedField build_extension(const Model& model, const DensityField& f, double t_max, Exec exec) {
    if (!(t_max >= 0.0) || !std::isfinite(t_max)) {
        throw ValidationError("build_extension: t_max must be finite and >= 0");
    }
    if (f.velocities_ptr() != model.velocities_ptr()) {
        throw ValidationError("build_extension: density and model use different velocity spaces");
    }
    f.check_finite("build_extension input");

    const auto& vs = model.velocities();
    const double b = model.params().b;
    const std::size_t nv = vs.size();
    const double dx = f.dx();

    const BoundaryMeasure measure(model);

    // Depth each column must reach: -t_max v_j for T(t), then closed under
    // "a node at depth D in column j reads column w at depth D w/v_j - 1".
    // Two extra cells keep the interpolation brackets inside the block.
    std::vector<double> depth(nv);
    for (std::size_t j = 0; j < nv; ++j) {
        depth[j] = t_max * vs.node(j) + 2.0 * dx;
    }
    const double depth_cap = 1e7 * dx;
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t j = 0; j < nv; ++j) {
            const double v = vs.node(j);
            const auto row = measure.row(j);
            for (std::size_t w = 0; w < nv; ++w) {
                const bool reads = (measure.p() != 0.0 && row[w] != 0.0) || (measure.q() != 0.0 && w == j);
                if (!reads) {
                    continue;
                }
                const double need = depth[j] * vs.node(w) / v - 1.0 + 2.0 * dx;
                if (need > depth[w]) {
                    depth[w] = need;
                    changed = true;
                    if (need > depth_cap) {
                        throw ValidationError("build_extension: t_max too large for the grid");
                    }
                }
            }
        }
    }

    ExtendedField ext;
    ext.omega_ = f;
    ext.b_ = b;
    ext.t_max_ = t_max;
    ext.size_.resize(nv);
    std::size_t m = 0;
    for (std::size_t j = 0; j < nv; ++j) {
        ext.size_[j] = static_cast<std::size_t>(std::ceil(depth[j] / dx)) + 1;
        m = std::max(m, ext.size_[j]);
    }
    ext.m_ = m;
    if (m > std::numeric_limits<std::uint32_t>::max()) {
        throw ValidationError("build_extension: t_max too large for the grid");
    }
    ext.ext_.assign(nv * m, std::numeric_limits<double>::quiet_NaN());
    ext.level_.assign(nv * m, std::numeric_limits<std::uint32_t>::max());

    std::uint32_t max_level = 0;
    for (std::size_t j = 0; j < nv; ++j) {
        for (std::size_t k = 0; k < ext.size_[j]; ++k) {
            const auto lev = static_cast<std::uint32_t>(strip_index(ext.ext_x(k), vs.node(j), b));
            ext.level_[j * m + k] = lev;
            max_level = std::max(max_level, lev);
        }
    }

    std::vector<std::size_t> cursor(nv, 0);
    std::vector<char> column_ok(nv, 1);
    std::vector<double> bad_x(nv, 0.0);
    std::vector<char> column_finite(nv, 1);
    const auto columns = static_cast<long long>(nv);
    const bool parallel = exec == Exec::parallel;

    for (std::uint32_t level = 1; level <= max_level; ++level) {
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
        for (long long jj = 0; jj < columns; ++jj) {
            const auto j = static_cast<std::size_t>(jj);
            const double v = vs.node(j);
            std::size_t k = cursor[j];
            bool ok = true;
            const std::size_t n = ext.size_[j];
            while (k < n && ext.level_[j * m + k] == level) {
                const double x = ext.ext_x(k);
                const double value = measure.apply(j, [&](std::size_t w) {
                    const double y = 1.0 + x * vs.node(w) / v;
                    if (y > 0.0) {
                        return f.interpolate(w, y);
                    }
                    return sweep_lookup(ext.ext_.data() + w * m, ext.level_.data() + w * m, ext.size_[w],
                                        dx, y, level, ok);
                });
                ext.ext_[j * m + k] = value;
                if (!std::isfinite(value) && column_finite[j]) {
                    column_finite[j] = 0;
                    bad_x[j] = x;
                }
                ++k;
            }
            cursor[j] = k;
            if (!ok) {
                column_ok[j] = 0;
            }
        }
        for (std::size_t j = 0; j < nv; ++j) {
            if (!column_finite[j]) {
                throw NumericalError("build_extension: non-finite value at (x=" + format_double(bad_x[j]) +
                                     ", v=" + format_double(vs.node(j)) + ")");
            }
            if (!column_ok[j]) {
                throw std::logic_error("build_extension: strip level " + std::to_string(level) +
                                       " read an unfinished level in column v=" +
                                       format_double(vs.node(j)));
            }
        }
    }
    return ext;
}

double weighted_norm(const ExtendedField& ext, double omega, std::size_t j_max) {
    if (!(omega >= 0.0)) {
        throw ValidationError("weighted_norm: omega must be >= 0");
    }
    const std::size_t deepest = ext.deepest_level();
    if (j_max > deepest) {
        throw ValidationError("weighted_norm: j_max=" + std::to_string(j_max) +
                              " exceeds the deepest represented level " + std::to_string(deepest));
    }
    const auto& vs = ext.velocities();
    // strip_mass[i] = integral of |f~| over strip i.
    std::vector<double> strip_mass(j_max + 1, 0.0);
    strip_mass[0] = l1_norm(ext.omega());
    for (std::size_t j = 0; j < vs.size(); ++j) {
        std::vector<double> col(j_max + 1, 0.0);
        for (std::size_t k = 0; k < ext.ext_size(j); ++k) {
            const std::size_t lev = ext.level(k, j);
            if (lev > j_max) {
                break;
            }
            col[lev] += std::abs(ext.ext_value(k, j));
        }
        for (std::size_t i = 1; i <= j_max; ++i) {
            strip_mass[i] += col[i] * vs.weight(j) * ext.dx();
        }
    }
    double best = 0.0;
    double gamma = 0.0;
    for (std::size_t i = 0; i <= j_max; ++i) {
        gamma += strip_mass[i];
        best = std::max(best, std::exp(-omega * static_cast<double>(i)) * gamma);
    }
    return best;
}

double extension_constant(const ModelParams& params, double omega) {
    const double r = params.reproduction();
    if (params.is_markov()) {
        if (!(omega > 0.0)) {
            throw ValidationError("extension bound: p + q = 1 needs omega > 0");
        }
        return std::exp(omega - 1.0) / omega;
    }
    if (r < 1.0) {
        if (!(omega >= 0.0)) {
            throw ValidationError("extension bound: omega must be >= 0");
        }
        return 1.0 / (1.0 - r);
    }
    if (!(omega >= std::log(r))) {
        throw ValidationError("extension bound: p + q = " + format_double(r) + " needs omega >= log(p + q) = " +
                              format_double(std::log(r)));
    }
    return r / (r - 1.0);
}

ExtensionBound extension_bound_check(const Model& model, const DensityField& f, double omega,
                                     std::size_t j_max, double tol, Exec exec) {
    ExtensionBound out;
    out.m_omega = extension_constant(model.params(), omega);
    out.j_max = j_max;
    const double t_max = static_cast<double>(j_max) / model.params().b;
    const auto ext = build_extension(model, f, t_max, exec);
    out.lhs = weighted_norm(ext, omega, j_max);
    out.rhs = out.m_omega * l1_norm(f);
    out.pass = out.lhs <= out.rhs + tol;
    return out;
}

}  // namespace rotenberg
