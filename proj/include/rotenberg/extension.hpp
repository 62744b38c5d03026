#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rotenberg/field.hpp"
#include "rotenberg/model.hpp"

namespace rotenberg {

/// Strip of the extended domain containing (x, v): 0 on (0, 1), otherwise the
/// i >= 1 with -i v/b < x <= -(i-1) v/b. Throws ValidationError for x >= 1.
std::size_t strip_index(double x, double v, double b);

/// f~ on (x_min, 1) x V, kept as two blocks that share the x step:
/// the Omega block (a copy of f) and the extension block with nodes
/// x_k = -(k + 1/2) dx. Column j holds nodes k < ext_size(j); slow columns
/// stop earlier because T(t) never looks further left than -t v_j there.
class ExtendedField {
public:
    const DensityField& omega() const { return omega_; }
    const VelocitySpace& velocities() const { return omega_.velocities(); }
    double dx() const { return omega_.dx(); }
    double b() const { return b_; }

    /// Row stride of the extension block (the longest column).
    std::size_t ext_size() const { return m_; }
    std::size_t ext_size(std::size_t j) const { return size_[j]; }
    double ext_x(std::size_t k) const { return -(static_cast<double>(k) + 0.5) * dx(); }
    double ext_value(std::size_t k, std::size_t j) const { return ext_[j * m_ + k]; }
    std::size_t level(std::size_t k, std::size_t j) const { return level_[j * m_ + k]; }

    double t_max() const { return t_max_; }
    /// Leftmost node of column j.
    double x_min(std::size_t j) const { return ext_x(size_[j] - 1); }
    /// Leftmost node over all columns.
    double x_min() const { return ext_x(m_ - 1); }
    /// Deepest strip level fully represented in every velocity column.
    std::size_t deepest_level() const;

    /// f~(y, v_j) with block-aware linear interpolation: y > 0 reads the
    /// Omega block, y <= 0 the extension block. Throws NumericalError when y
    /// lies left of x_min(j).
    double evaluate(std::size_t j, double y) const;

private:
    friend ExtendedField build_extension(const Model& model, const DensityField& f, double t_max,
                                         Exec exec);

    DensityField omega_;
    double b_ = 0.0;
    double t_max_ = 0.0;
    std::size_t m_ = 0;
    std::vector<std::size_t> size_;
    std::vector<double> ext_;
    std::vector<std::uint32_t> level_;
};

/// Builds f~ strip level by strip level so that every column j reaches
/// -t_max v_j, plus whatever deeper nodes those values depend on.
ExtendedField build_extension(const Model& model, const DensityField& f, double t_max,
                              Exec exec = Exec::parallel);

/// max_{0<=j<=j_max} e^{-omega j} * integral of |f~| over Gamma_j (cell-centre masking).
double weighted_norm(const ExtendedField& ext, double omega, std::size_t j_max);

struct ExtensionBound {
    double lhs = 0.0;
    double m_omega = 0.0;
    double rhs = 0.0;  // m_omega * ||f||_1
    std::size_t j_max = 0;
    bool pass = false;
};

/// The constant bounding ||f~||_omega by ||f||_1 for the regime of p + q.
/// Throws ValidationError outside the admissible range of omega.
double extension_constant(const ModelParams& params, double omega);

/// Builds the extension deep enough to cover Gamma_{j_max} and compares its
/// weighted norm against extension_constant * ||f||_1.
ExtensionBound extension_bound_check(const Model& model, const DensityField& f, double omega,
                                     std::size_t j_max = 12, double tol = 1e-6,
                                     Exec exec = Exec::parallel);

}  // namespace rotenberg
