#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rotenberg/exec.hpp"

namespace rotenberg {

/// Scalars of the model: velocity range (a, b) and the reproduction rule.
/// `p` is the mean number of viable daughters whose velocity is redrawn from
/// the kernel, `q` the mean number that inherit the mother's velocity.
struct ModelParams {
    double a = 0.0;
    double b = 1.0;
    double p = 1.0;
    double q = 0.0;

    /// Throws ValidationError unless 0 <= a < b < inf, p, q >= 0, p + q > 0.
    void validate() const;

    double reproduction() const { return p + q; }

    /// p + q == 1 up to `tol`.
    bool is_markov(double tol = 1e-12) const;
};

/// Quadrature representation of the velocity set V with its measure.
///
/// Continuous spaces are partitioned into cells and use the midpoint rule, so
/// nodes never touch a or b. Discrete spaces carry explicit node masses.
class VelocitySpace {
public:
    enum class Kind { continuous, discrete };

    /// Midpoint rule on n uniform cells of (a, b).
    static VelocitySpace uniform(double a, double b, std::size_t n);

    /// Midpoint rule on the cells delimited by `edges` (strictly increasing).
    static VelocitySpace from_edges(std::vector<double> edges);

    /// Finite set of velocities in (a, b] with positive masses.
    static VelocitySpace discrete(double a, double b, std::vector<double> nodes,
                                  std::vector<double> masses);

    Kind kind() const { return kind_; }
    bool is_continuous() const { return kind_ == Kind::continuous; }
    std::size_t size() const { return nodes_.size(); }
    double lower() const { return a_; }
    double upper() const { return b_; }

    double node(std::size_t j) const { return nodes_[j]; }
    double weight(std::size_t j) const { return weights_[j]; }
    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }

    /// Cell boundaries; only meaningful for continuous spaces.
    double cell_lower(std::size_t j) const { return edges_[j]; }
    double cell_upper(std::size_t j) const { return edges_[j + 1]; }
    std::span<const double> edges() const { return edges_; }

    /// Sum of g(v_j) * weight_j.
    double integrate(std::span<const double> g) const;

    /// Index of the node equal to v (relative tolerance 1e-9), if any.
    std::optional<std::size_t> find_node(double v) const;

private:
    VelocitySpace() = default;

    Kind kind_ = Kind::continuous;
    double a_ = 0.0;
    double b_ = 0.0;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::vector<double> edges_;
};

enum class BuiltinKernel { constant, three_quarters, linear, daughters_faster, halfline };

std::string to_string(BuiltinKernel kind);
std::optional<BuiltinKernel> builtin_kernel_from_string(const std::string& name);

/// Redistribution kernel k(w, v): density of the daughter velocity v given the
/// mother velocity w. Either one of the builtin closed forms or a table over
/// velocity nodes.
class Kernel {
public:
    struct Table {
        std::vector<double> mothers;
        std::vector<double> daughters;
        std::vector<double> values;  // row-major, mothers x daughters

        double at(std::size_t i, std::size_t j) const { return values[i * daughters.size() + j]; }
    };

    static Kernel builtin(BuiltinKernel kind, double a, double b);
    static Kernel tabulated(Table table);

    /// Reads the tabulated CSV format: first row holds daughter nodes (first
    /// cell is a label), first column holds mother nodes.
    static Kernel load_csv(const std::filesystem::path& path);
    void save_csv(const std::filesystem::path& path) const;

    /// Point value. Tabulated kernels only answer at their own nodes.
    double operator()(double w, double v) const;

    /// Closed-form integral of k(w, .) over [lo, hi] for builtin kernels.
    std::optional<double> daughter_integral(double w, double lo, double hi) const;

    bool is_builtin() const { return !table_.has_value(); }
    const Table* table() const { return table_ ? &*table_ : nullptr; }
    std::string name() const;

private:
    Kernel() = default;

    BuiltinKernel kind_ = BuiltinKernel::constant;
    double a_ = 0.0;
    double b_ = 1.0;
    std::optional<Table> table_;
};

struct KernelValidation {
    double max_row_deviation = 0.0;
    std::size_t worst_row = 0;
    bool pass = false;
};

/// Row normalisation check with the space's own quadrature on point values:
/// max_w |sum_j k(w, v_j) weight_j - 1|. Throws ValidationError naming the
/// location of the first negative kernel value.
KernelValidation validate_kernel(const Kernel& kernel, const VelocitySpace& space, double tol);

/// The kernel as a matrix over velocity nodes, exactly row-stochastic with
/// respect to the quadrature weights: sum_j K(i, j) weight_j = 1.
///
/// Builtin kernels on continuous spaces are averaged over daughter cells;
/// everything else uses point values and is renormalised row-wise when the
/// raw deviation is at most `renormalise_tol`.
class DiscreteKernel {
public:
    static DiscreteKernel build(const Kernel& kernel, const VelocitySpace& space,
                                double renormalise_tol = 1e-3);

    std::size_t size() const { return n_; }
    double operator()(std::size_t mother, std::size_t daughter) const {
        return values_[mother * n_ + daughter];
    }
    std::span<const double> row(std::size_t mother) const {
        return {values_.data() + mother * n_, n_};
    }
    /// Largest |row integral - 1| before renormalisation.
    double raw_deviation() const { return raw_deviation_; }

private:
    std::size_t n_ = 0;
    std::vector<double> values_;
    double raw_deviation_ = 0.0;
};

/// Everything an evolution needs: parameters, velocity quadrature, the source
/// kernel and its discretisation. Immutable once built.
class Model {
public:
    Model(ModelParams params, VelocitySpace space, Kernel kernel);

    const ModelParams& params() const { return params_; }
    const VelocitySpace& velocities() const { return *space_; }
    std::shared_ptr<const VelocitySpace> velocities_ptr() const { return space_; }
    const Kernel& kernel() const { return kernel_; }
    const DiscreteKernel& discrete_kernel() const { return discrete_; }

private:
    ModelParams params_;
    std::shared_ptr<const VelocitySpace> space_;
    Kernel kernel_;
    DiscreteKernel discrete_;
};

/// The boundary measure l(dw, v) = p (w/v) k(w, v) nu(dw) + q delta_v(dw),
/// discretised on the velocity nodes. Row v holds the weights of the
/// kernel branch; the Dirac branch is applied separately.
class BoundaryMeasure {
public:
    explicit BoundaryMeasure(const Model& model);

    std::size_t size() const { return n_; }
    double p() const { return p_; }
    double q() const { return q_; }

    /// Weight of node w in l(., v) from the kernel branch.
    double weight(std::size_t v, std::size_t w) const { return weights_[v * n_ + w]; }
    std::span<const double> row(std::size_t v) const { return {weights_.data() + v * n_, n_}; }

    /// Integral of g against l(., v_v); g is called with node indices.
    template <class G>
    double apply(std::size_t v, G&& g) const {
        double sum = 0.0;
        if (p_ != 0.0) {
            const double* row = weights_.data() + v * n_;
            for (std::size_t w = 0; w < n_; ++w) {
                if (row[w] != 0.0) {
                    sum += row[w] * g(w);
                }
            }
        }
        if (q_ != 0.0) {
            sum += q_ * g(v);
        }
        return sum;
    }

private:
    std::size_t n_ = 0;
    double p_ = 0.0;
    double q_ = 0.0;
    std::vector<double> weights_;
};

/// l(., v_j) applied to node values g.
double apply_boundary_measure(const BoundaryMeasure& measure, std::size_t j,
                              std::span<const double> g);

struct IntMesResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double deviation = 0.0;
};

/// Both sides of  int int (v/w) g(w) l(dw, v) nu(dv) = (p + q) int g dnu.
IntMesResult int_mes_identity(const Model& model, std::span<const double> g);

}  // namespace rotenberg
