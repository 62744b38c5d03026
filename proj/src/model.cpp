#include "rotenberg/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rotenberg/csv.hpp"

namespace rotenberg {

namespace {

std::string describe(double value) { return format_double(value); }

bool same_node(double x, double y) {
    return std::abs(x - y) <= 1e-9 * std::max({1.0, std::abs(x), std::abs(y)});
}

// Antiderivative of 3/4 v / sqrt(1 - v) on [0, 1].
double three_quarters_primitive(double v) {
    const double s = std::sqrt(std::max(0.0, 1.0 - v));
    return 0.75 * (-2.0 * s + (2.0 / 3.0) * s * s * s);
}

}  // namespace

void ModelParams::validate() const {
    if (!std::isfinite(a) || !std::isfinite(b) || a < 0.0 || !(a < b)) {
        throw ValidationError("params: need 0 <= a < b < inf (a=" + describe(a) + ", b=" + describe(b) + ")");
    }
    if (!std::isfinite(p) || p < 0.0) {
        throw ValidationError("params.p: must be finite and >= 0");
    }
    if (!std::isfinite(q) || q < 0.0) {
        throw ValidationError("params.q: must be finite and >= 0");
    }
    if (!(p + q > 0.0)) {
        throw ValidationError("params: p + q must be positive");
    }
}

bool ModelParams::is_markov(double tol) const { return std::abs(p + q - 1.0) <= tol; }

VelocitySpace VelocitySpace::uniform(double a, double b, std::size_t n) {
    if (n == 0) {
        throw ValidationError("velocity.n: need at least one node");
    }
    if (!(a < b)) {
        throw ValidationError("velocity: need a < b");
    }
    std::vector<double> edges(n + 1);
    const double h = (b - a) / static_cast<double>(n);
    for (std::size_t j = 0; j <= n; ++j) {
        edges[j] = a + h * static_cast<double>(j);
    }
    edges[n] = b;
    return from_edges(std::move(edges));
}

VelocitySpace VelocitySpace::from_edges(std::vector<double> edges) {
    if (edges.size() < 2) {
        throw ValidationError("velocity: need at least two cell edges");
    }
    for (std::size_t j = 1; j < edges.size(); ++j) {
        if (!(edges[j] > edges[j - 1])) {
            throw ValidationError("velocity: cell edges must be strictly increasing");
        }
    }
    if (edges.front() < 0.0) {
        throw ValidationError("velocity: velocities must be nonnegative");
    }
    VelocitySpace s;
    s.kind_ = Kind::continuous;
    s.a_ = edges.front();
    s.b_ = edges.back();
    const std::size_t n = edges.size() - 1;
    s.nodes_.resize(n);
    s.weights_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        s.nodes_[j] = 0.5 * (edges[j] + edges[j + 1]);
        s.weights_[j] = edges[j + 1] - edges[j];
    }
    s.edges_ = std::move(edges);
    return s;
}

VelocitySpace VelocitySpace::discrete(double a, double b, std::vector<double> nodes,
                                      std::vector<double> masses) {
    if (nodes.empty() || nodes.size() != masses.size()) {
        throw ValidationError("velocity: discrete nodes and masses must be non-empty and of equal length");
    }
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        if (!(nodes[j] > a) || nodes[j] > b || !(nodes[j] > 0.0)) {
            throw ValidationError("velocity.nodes[" + std::to_string(j) + "]: must lie in (a, b]");
        }
        if (j > 0 && !(nodes[j] > nodes[j - 1])) {
            throw ValidationError("velocity.nodes: must be strictly increasing");
        }
        if (!(masses[j] > 0.0) || !std::isfinite(masses[j])) {
            throw ValidationError("velocity.masses[" + std::to_string(j) + "]: must be positive");
        }
    }
    VelocitySpace s;
    s.kind_ = Kind::discrete;
    s.a_ = a;
    s.b_ = b;
    s.nodes_ = std::move(nodes);
    s.weights_ = std::move(masses);
    return s;
}

double VelocitySpace::integrate(std::span<const double> g) const {
    double sum = 0.0;
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
        sum += g[j] * weights_[j];
    }
    return sum;
}

std::optional<std::size_t> VelocitySpace::find_node(double v) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), v);
    for (auto cand : {it, it == nodes_.begin() ? it : std::prev(it)}) {
        if (cand != nodes_.end() && same_node(*cand, v)) {
            return static_cast<std::size_t>(cand - nodes_.begin());
        }
    }
    return std::nullopt;
}

std::string to_string(BuiltinKernel kind) {
    switch (kind) {
        case BuiltinKernel::constant: return "constant";
        case BuiltinKernel::three_quarters: return "three-quarters";
        case BuiltinKernel::linear: return "linear";
        case BuiltinKernel::daughters_faster: return "daughters-faster";
        case BuiltinKernel::halfline: return "halfline";
    }
    return "unknown";
}

std::optional<BuiltinKernel> builtin_kernel_from_string(const std::string& name) {
    for (auto k : {BuiltinKernel::constant, BuiltinKernel::three_quarters, BuiltinKernel::linear,
                   BuiltinKernel::daughters_faster, BuiltinKernel::halfline}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

Kernel Kernel::builtin(BuiltinKernel kind, double a, double b) {
    const bool unit = kind == BuiltinKernel::three_quarters || kind == BuiltinKernel::linear ||
                      kind == BuiltinKernel::halfline;
    if (unit && (a != 0.0 || b != 1.0)) {
        throw ValidationError("kernel: builtin '" + to_string(kind) + "' is defined on V = (0, 1)");
    }
    if (!(a < b)) {
        throw ValidationError("kernel: need a < b");
    }
    Kernel k;
    k.kind_ = kind;
    k.a_ = a;
    k.b_ = b;
    return k;
}

Kernel Kernel::tabulated(Table table) {
    const std::size_t nm = table.mothers.size();
    const std::size_t nd = table.daughters.size();
    if (nm == 0 || nd == 0 || table.values.size() != nm * nd) {
        throw ValidationError("kernel: table shape does not match its node lists");
    }
    for (std::size_t i = 0; i < nm; ++i) {
        for (std::size_t j = 0; j < nd; ++j) {
            const double value = table.at(i, j);
            if (!std::isfinite(value)) {
                throw ValidationError("kernel: non-finite value at (w=" + describe(table.mothers[i]) +
                                      ", v=" + describe(table.daughters[j]) + ")");
            }
        }
    }
    Kernel k;
    k.table_ = std::move(table);
    return k;
}

Kernel Kernel::load_csv(const std::filesystem::path& path) {
    const auto rows = read_csv_cells(path);
    if (rows.size() < 2 || rows.front().size() < 2) {
        throw ValidationError("kernel csv " + path.string() + ": need a header row and at least one data row");
    }
    Table t;
    const auto& head = rows.front();
    for (std::size_t j = 1; j < head.size(); ++j) {
        t.daughters.push_back(parse_double(head[j], "kernel csv header column " + std::to_string(j)));
    }
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != head.size()) {
            throw ValidationError("kernel csv " + path.string() + ": row " + std::to_string(r) +
                                  " has " + std::to_string(row.size()) + " cells, expected " +
                                  std::to_string(head.size()));
        }
        const std::string where = "kernel csv row " + std::to_string(r);
        t.mothers.push_back(parse_double(row[0], where));
        for (std::size_t j = 1; j < row.size(); ++j) {
            t.values.push_back(parse_double(row[j], where));
        }
    }
    return tabulated(std::move(t));
}

void Kernel::save_csv(const std::filesystem::path& path) const {
    if (!table_) {
        throw ValidationError("kernel: only tabulated kernels can be saved");
    }
    std::vector<std::string> columns{"w\\v"};
    for (double v : table_->daughters) {
        columns.push_back(format_double(v));
    }
    CsvWriter out(path, "", columns);
    const std::size_t nd = table_->daughters.size();
    for (std::size_t i = 0; i < table_->mothers.size(); ++i) {
        out.row(format_double(table_->mothers[i]),
                std::span<const double>(table_->values.data() + i * nd, nd));
    }
    out.commit();
}

double Kernel::operator()(double w, double v) const {
    if (table_) {
        const auto& ms = table_->mothers;
        const auto& ds = table_->daughters;
        auto find = [](const std::vector<double>& nodes, double x) -> std::optional<std::size_t> {
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                if (same_node(nodes[i], x)) {
                    return i;
                }
            }
            return std::nullopt;
        };
        const auto i = find(ms, w);
        const auto j = find(ds, v);
        if (!i || !j) {
            throw ValidationError("kernel: tabulated kernel has no entry at (w=" + describe(w) +
                                  ", v=" + describe(v) + ")");
        }
        return table_->at(*i, *j);
    }
    switch (kind_) {
        case BuiltinKernel::constant:
            return (v >= a_ && v <= b_) ? 1.0 / (b_ - a_) : 0.0;
        case BuiltinKernel::three_quarters:
            return (v >= 0.0 && v < 1.0) ? 0.75 * v / std::sqrt(1.0 - v) : 0.0;
        case BuiltinKernel::linear:
            return (v >= 0.0 && v <= 1.0) ? 2.0 * v : 0.0;
        case BuiltinKernel::daughters_faster:
            return (w < v && v < b_) ? 1.0 / (b_ - w) : 0.0;
        case BuiltinKernel::halfline:
            return (v >= 0.0 && v < 0.5) ? 2.0 : 0.0;
    }
    return 0.0;
}

std::optional<double> Kernel::daughter_integral(double w, double lo, double hi) const {
    if (table_) {
        return std::nullopt;
    }
    auto clipped = [&](double left, double right) {
        const double l = std::max(lo, left);
        const double r = std::min(hi, right);
        return std::pair{l, r};
    };
    switch (kind_) {
        case BuiltinKernel::constant: {
            auto [l, r] = clipped(a_, b_);
            return r > l ? (r - l) / (b_ - a_) : 0.0;
        }
        case BuiltinKernel::three_quarters: {
            auto [l, r] = clipped(0.0, 1.0);
            return r > l ? three_quarters_primitive(r) - three_quarters_primitive(l) : 0.0;
        }
        case BuiltinKernel::linear: {
            auto [l, r] = clipped(0.0, 1.0);
            return r > l ? r * r - l * l : 0.0;
        }
        case BuiltinKernel::daughters_faster: {
            if (!(w < b_)) {
                return 0.0;
            }
            auto [l, r] = clipped(w, b_);
            return r > l ? (r - l) / (b_ - w) : 0.0;
        }
        case BuiltinKernel::halfline: {
            auto [l, r] = clipped(0.0, 0.5);
            return r > l ? 2.0 * (r - l) : 0.0;
        }
    }
    return std::nullopt;
}

std::string Kernel::name() const { return table_ ? "tabulated" : to_string(kind_); }

KernelValidation validate_kernel(const Kernel& kernel, const VelocitySpace& space, double tol) {
    if (!(tol > 0.0)) {
        throw ValidationError("validate_kernel: tol must be positive");
    }
    KernelValidation report;
    for (std::size_t i = 0; i < space.size(); ++i) {
        const double w = space.node(i);
        double row = 0.0;
        for (std::size_t j = 0; j < space.size(); ++j) {
            const double v = space.node(j);
            const double value = kernel(w, v);
            if (value < 0.0) {
                throw ValidationError("kernel: negative value " + describe(value) + " at (w=" +
                                      describe(w) + ", v=" + describe(v) + ")");
            }
            row += value * space.weight(j);
        }
        const double dev = std::abs(row - 1.0);
        if (dev > report.max_row_deviation || i == 0) {
            report.max_row_deviation = dev;
            report.worst_row = i;
        }
    }
    report.pass = report.max_row_deviation <= tol;
    return report;
}

DiscreteKernel DiscreteKernel::build(const Kernel& kernel, const VelocitySpace& space,
                                     double renormalise_tol) {
    const std::size_t n = space.size();
    DiscreteKernel dk;
    dk.n_ = n;
    dk.values_.assign(n * n, 0.0);
    const bool cell_average = kernel.is_builtin() && space.is_continuous();

    if (const auto* table = kernel.table()) {
        if (table->mothers.size() != n || table->daughters.size() != n) {
            throw ValidationError("kernel: table is " + std::to_string(table->mothers.size()) + "x" +
                                  std::to_string(table->daughters.size()) +
                                  " but the velocity space has " + std::to_string(n) + " nodes");
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!same_node(table->mothers[i], space.node(i)) ||
                !same_node(table->daughters[i], space.node(i))) {
                throw ValidationError("kernel: table node " + std::to_string(i) +
                                      " does not match velocity node " + describe(space.node(i)));
            }
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        const double w = space.node(i);
        double* row = dk.values_.data() + i * n;
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double value = 0.0;
            if (cell_average) {
                value = *kernel.daughter_integral(w, space.cell_lower(j), space.cell_upper(j)) /
                        space.weight(j);
            } else if (const auto* table = kernel.table()) {
                value = table->at(i, j);
            } else {
                value = kernel(w, space.node(j));
            }
            if (value < 0.0) {
                throw ValidationError("kernel: negative value " + describe(value) + " at (w=" +
                                      describe(w) + ", v=" + describe(space.node(j)) + ")");
            }
            row[j] = value;
            sum += value * space.weight(j);
        }
        const double dev = std::abs(sum - 1.0);
        dk.raw_deviation_ = std::max(dk.raw_deviation_, dev);
        if (!cell_average && dev > renormalise_tol) {
            throw ValidationError("kernel: row w=" + describe(w) + " integrates to " + describe(sum) +
                                  " (deviation " + describe(dev) + " exceeds " +
                                  describe(renormalise_tol) + ")");
        }
        if (!(sum > 0.0)) {
            throw ValidationError("kernel: row w=" + describe(w) + " has no mass on the velocity grid");
        }
        for (std::size_t j = 0; j < n; ++j) {
            row[j] /= sum;
        }
    }
    return dk;
}

Model::Model(ModelParams params, VelocitySpace space, Kernel kernel)
    : params_(params), kernel_(std::move(kernel)) {
    params_.validate();
    if (space.lower() != params_.a || space.upper() != params_.b) {
        throw ValidationError("velocity: space (" + describe(space.lower()) + ", " +
                              describe(space.upper()) + ") does not match params (a, b)");
    }
    discrete_ = DiscreteKernel::build(kernel_, space);
    space_ = std::make_shared<const VelocitySpace>(std::move(space));
}

BoundaryMeasure::BoundaryMeasure(const Model& model)
    : n_(model.velocities().size()), p_(model.params().p), q_(model.params().q) {
    const auto& vs = model.velocities();
    const auto& k = model.discrete_kernel();
    weights_.assign(n_ * n_, 0.0);
    for (std::size_t v = 0; v < n_; ++v) {
        const double vv = vs.node(v);
        for (std::size_t w = 0; w < n_; ++w) {
            weights_[v * n_ + w] = p_ * (vs.node(w) / vv) * k(w, v) * vs.weight(w);
        }
    }
}

double apply_boundary_measure(const BoundaryMeasure& measure, std::size_t j,
                              std::span<const double> g) {
    if (j >= measure.size() || g.size() != measure.size()) {
        throw ValidationError("apply_boundary_measure: node index or g length out of range");
    }
    return measure.apply(j, [&](std::size_t w) { return g[w]; });
}

IntMesResult int_mes_identity(const Model& model, std::span<const double> g) {
    const auto& vs = model.velocities();
    if (g.size() != vs.size()) {
        throw ValidationError("int_mes_identity: g length does not match the velocity space");
    }
    const BoundaryMeasure measure(model);
    IntMesResult r;
    for (std::size_t v = 0; v < vs.size(); ++v) {
        const double vv = vs.node(v);
        const double inner = measure.apply(v, [&](std::size_t w) { return vv / vs.node(w) * g[w]; });
        r.lhs += inner * vs.weight(v);
    }
    r.rhs = model.params().reproduction() * vs.integrate(g);
    r.deviation = std::abs(r.lhs - r.rhs);
    return r;
}

}  // namespace rotenberg
