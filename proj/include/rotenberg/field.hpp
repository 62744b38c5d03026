#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rotenberg/exec.hpp"
#include "rotenberg/model.hpp"

namespace rotenberg {

/// Values on the product grid of (0, 1) x V. The x-grid has `nx` uniform cells
/// with centres x_i = (i + 1/2) dx; values of one velocity column are
/// contiguous.
template <class Tag>
class GridField {
public:
    GridField() = default;
    GridField(std::size_t nx, std::shared_ptr<const VelocitySpace> velocities, double fill = 0.0)
        : nx_(nx), velocities_(std::move(velocities)) {
        if (nx_ == 0 || !velocities_) {
            throw ValidationError("grid: need nx > 0 and a velocity space");
        }
        dx_ = 1.0 / static_cast<double>(nx_);
        values_.assign(nx_ * velocities_->size(), fill);
    }

    std::size_t nx() const { return nx_; }
    std::size_t nv() const { return velocities_->size(); }
    double dx() const { return dx_; }
    double x(std::size_t i) const { return (static_cast<double>(i) + 0.5) * dx_; }
    double v(std::size_t j) const { return velocities_->node(j); }
    const VelocitySpace& velocities() const { return *velocities_; }
    const std::shared_ptr<const VelocitySpace>& velocities_ptr() const { return velocities_; }

    double& operator()(std::size_t i, std::size_t j) { return values_[j * nx_ + i]; }
    double operator()(std::size_t i, std::size_t j) const { return values_[j * nx_ + i]; }

    std::span<double> column(std::size_t j) { return {values_.data() + j * nx_, nx_}; }
    std::span<const double> column(std::size_t j) const { return {values_.data() + j * nx_, nx_}; }

    std::vector<double>& data() { return values_; }
    const std::vector<double>& data() const { return values_; }

    bool same_grid(const GridField& other) const {
        return nx_ == other.nx_ && velocities_ == other.velocities_;
    }

    bool nonnegative() const {
        for (double x : values_) {
            if (x < 0.0) {
                return false;
            }
        }
        return true;
    }

    /// Throws NumericalError naming the first non-finite grid point.
    void check_finite(const std::string& what) const {
        for (std::size_t j = 0; j < nv(); ++j) {
            for (std::size_t i = 0; i < nx_; ++i) {
                if (!std::isfinite((*this)(i, j))) {
                    throw NumericalError(what + ": non-finite value at (x=" + std::to_string(x(i)) +
                                         ", v=" + std::to_string(v(j)) + ")");
                }
            }
        }
    }

    /// Linear interpolation in x inside column j at y in (0, 1); values
    /// outside the outermost cell centres take the nearest centre value.
    double interpolate(std::size_t j, double y) const {
        const double s = y / dx_ - 0.5;
        if (s <= 0.0) {
            return (*this)(0, j);
        }
        const auto k = static_cast<std::size_t>(s);
        if (k + 1 >= nx_) {
            return (*this)(nx_ - 1, j);
        }
        const double frac = s - static_cast<double>(k);
        const double* col = values_.data() + j * nx_;
        return col[k] + frac * (col[k + 1] - col[k]);
    }

private:
    std::size_t nx_ = 0;
    double dx_ = 0.0;
    std::shared_ptr<const VelocitySpace> velocities_;
    std::vector<double> values_;
};

struct DensityTag;
struct DualTag;

/// Element of L^1(Omega).
using DensityField = GridField<DensityTag>;
/// Element of L^inf(Omega), the argument of the dual semigroup.
using DualField = GridField<DualTag>;

/// Sum over the grid of |f| dx weight_j.
double l1_norm(const DensityField& f);

/// l1_norm(f - g) on a shared grid.
double l1_distance(const DensityField& f, const DensityField& g);

/// Grid maximum of |phi|.
double sup_norm(const DualField& phi);

/// Total mass: integral of f (signed).
double mass(const DensityField& f);

/// <f, phi> = sum f phi dx weight_j.
double pairing(const DensityField& f, const DualField& phi);

}  // namespace rotenberg
