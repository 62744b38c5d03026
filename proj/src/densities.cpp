#include "rotenberg/densities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rotenberg/csv.hpp"

namespace rotenberg {

double l1_norm(const DensityField& f) {
    const auto& vs = f.velocities();
    double total = 0.0;
    for (std::size_t j = 0; j < f.nv(); ++j) {
        double col = 0.0;
        for (double value : f.column(j)) {
            col += std::abs(value);
        }
        total += col * vs.weight(j);
    }
    return total * f.dx();
}

double l1_distance(const DensityField& f, const DensityField& g) {
    if (!f.same_grid(g)) {
        throw ValidationError("l1_distance: fields live on different grids");
    }
    const auto& vs = f.velocities();
    double total = 0.0;
    for (std::size_t j = 0; j < f.nv(); ++j) {
        const auto a = f.column(j);
        const auto b = g.column(j);
        double col = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            col += std::abs(a[i] - b[i]);
        }
        total += col * vs.weight(j);
    }
    return total * f.dx();
}

double sup_norm(const DualField& phi) {
    double m = 0.0;
    for (double value : phi.data()) {
        m = std::max(m, std::abs(value));
    }
    return m;
}

double mass(const DensityField& f) {
    const auto& vs = f.velocities();
    double total = 0.0;
    for (std::size_t j = 0; j < f.nv(); ++j) {
        double col = 0.0;
        for (double value : f.column(j)) {
            col += value;
        }
        total += col * vs.weight(j);
    }
    return total * f.dx();
}

double pairing(const DensityField& f, const DualField& phi) {
    if (f.nx() != phi.nx() || f.velocities_ptr() != phi.velocities_ptr()) {
        throw ValidationError("pairing: fields live on different grids");
    }
    const auto& vs = f.velocities();
    double total = 0.0;
    for (std::size_t j = 0; j < f.nv(); ++j) {
        const auto a = f.column(j);
        const auto b = phi.column(j);
        double col = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            col += a[i] * b[i];
        }
        total += col * vs.weight(j);
    }
    return total * f.dx();
}

void normalise(DensityField& f) {
    const double m = mass(f);
    if (!(m > 0.0) || !std::isfinite(m)) {
        throw ValidationError("density has no positive mass on the grid");
    }
    for (double& value : f.data()) {
        value /= m;
    }
}

DensityField uniform_density(std::size_t nx, VelocityPtr vs) {
    DensityField f(nx, std::move(vs), 1.0);
    normalise(f);
    return f;
}

DensityField linear_x_density(std::size_t nx, VelocityPtr vs) {
    DensityField f(nx, std::move(vs));
    for (std::size_t j = 0; j < f.nv(); ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            f(i, j) = f.x(i);
        }
    }
    normalise(f);
    return f;
}

DensityField bump_density(std::size_t nx, VelocityPtr vs, double x0, double v0, double width) {
    if (!(width > 0.0)) {
        throw ValidationError("initial.width: must be positive");
    }
    DensityField f(nx, std::move(vs));
    for (std::size_t j = 0; j < f.nv(); ++j) {
        const double dv = f.v(j) - v0;
        for (std::size_t i = 0; i < nx; ++i) {
            const double dx = f.x(i) - x0;
            f(i, j) = std::exp(-(dx * dx + dv * dv) / (2.0 * width * width));
        }
    }
    normalise(f);
    return f;
}

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

struct TrigTerm {
    double amp;
    double fx;
    double fv;
    double phase;
};

std::vector<TrigTerm> random_terms(Rng& rng, int count) {
    std::vector<TrigTerm> terms;
    for (int m = 0; m < count; ++m) {
        terms.push_back({rng.uniform(-0.6, 0.6), std::floor(rng.uniform(0.0, 4.0)),
                         rng.uniform(0.0, 3.0), rng.uniform(0.0, two_pi)});
    }
    return terms;
}

double trig_sum(const std::vector<TrigTerm>& terms, double x, double s) {
    double sum = 0.0;
    for (const auto& t : terms) {
        sum += t.amp * std::sin(two_pi * (t.fx * x + t.fv * s) + t.phase);
    }
    return sum;
}

// Velocity coordinate rescaled to [0, 1] so random shapes do not depend on (a, b).
double unit_v(const VelocitySpace& vs, double v) {
    return (v - vs.lower()) / (vs.upper() - vs.lower());
}

}  // namespace

DensityField random_smooth_density(std::size_t nx, VelocityPtr vs, std::uint64_t seed) {
    Rng rng(seed);
    const auto terms = random_terms(rng, 4);
    DensityField f(nx, std::move(vs));
    for (std::size_t j = 0; j < f.nv(); ++j) {
        const double s = unit_v(f.velocities(), f.v(j));
        for (std::size_t i = 0; i < nx; ++i) {
            f(i, j) = std::exp(trig_sum(terms, f.x(i), s));
        }
    }
    normalise(f);
    return f;
}

DensityField random_step_density(std::size_t nx, VelocityPtr vs, std::uint64_t seed) {
    Rng rng(seed);
    constexpr int pieces = 10;
    std::vector<double> breaks;
    for (int k = 0; k + 1 < pieces; ++k) {
        breaks.push_back(rng.uniform());
    }
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> levels;
    for (int k = 0; k < pieces; ++k) {
        levels.push_back(rng.uniform(0.2, 2.0));
    }
    const auto terms = random_terms(rng, 2);
    DensityField f(nx, std::move(vs));
    for (std::size_t j = 0; j < f.nv(); ++j) {
        const double s = unit_v(f.velocities(), f.v(j));
        const double shape = std::exp(trig_sum(terms, 0.0, s));
        for (std::size_t i = 0; i < nx; ++i) {
            const auto piece = std::upper_bound(breaks.begin(), breaks.end(), f.x(i)) - breaks.begin();
            f(i, j) = levels[static_cast<std::size_t>(piece)] * shape;
        }
    }
    normalise(f);
    return f;
}

DualField random_dual(std::size_t nx, VelocityPtr vs, std::uint64_t seed) {
    Rng rng(seed);
    const auto terms = random_terms(rng, 4);
    DualField phi(nx, std::move(vs));
    for (std::size_t j = 0; j < phi.nv(); ++j) {
        const double s = unit_v(phi.velocities(), phi.v(j));
        for (std::size_t i = 0; i < nx; ++i) {
            phi(i, j) = 0.5 + 0.5 * std::tanh(trig_sum(terms, phi.x(i), s));
        }
    }
    return phi;
}

std::vector<double> random_velocity_density(const VelocitySpace& vs, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> g(vs.size());
    for (double& value : g) {
        value = rng.uniform(0.05, 1.0);
    }
    const double total = vs.integrate(g);
    for (double& value : g) {
        value /= total;
    }
    return g;
}

DensityField load_density_csv(const std::filesystem::path& path, std::size_t nx, VelocityPtr vs) {
    const auto rows = read_csv_cells(path);
    if (rows.empty() || rows.front().size() != 3 || rows.front()[0] != "x" || rows.front()[1] != "v" ||
        rows.front()[2] != "value") {
        throw ValidationError("initial csv " + path.string() + ": expected header x,v,value");
    }
    DensityField f(nx, vs);
    std::vector<char> seen(f.data().size(), 0);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const std::string where = "initial csv row " + std::to_string(r);
        if (rows[r].size() != 3) {
            throw ValidationError(where + ": expected 3 cells");
        }
        const double x = parse_double(rows[r][0], where);
        const double v = parse_double(rows[r][1], where);
        const double value = parse_double(rows[r][2], where);
        const double s = x * static_cast<double>(nx) - 0.5;
        const auto i = static_cast<long long>(std::llround(s));
        if (i < 0 || i >= static_cast<long long>(nx) || std::abs(s - static_cast<double>(i)) > 1e-6) {
            throw ValidationError(where + ": x=" + format_double(x) + " is not an x-grid node");
        }
        const auto j = vs->find_node(v);
        if (!j) {
            throw ValidationError(where + ": v=" + format_double(v) + " is not a velocity node");
        }
        const std::size_t idx = *j * nx + static_cast<std::size_t>(i);
        if (seen[idx]) {
            throw ValidationError(where + ": duplicate grid point");
        }
        seen[idx] = 1;
        f(static_cast<std::size_t>(i), *j) = value;
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
        throw ValidationError("initial csv " + path.string() + ": missing grid points");
    }
    f.check_finite("initial csv");
    return f;
}

}  // namespace rotenberg
