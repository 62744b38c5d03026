#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <random>
#include <vector>

#include "rotenberg/field.hpp"

namespace rotenberg {

/// Seeded generator with a platform-independent mapping to [0, 1).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 engine_;
};

using VelocityPtr = std::shared_ptr<const VelocitySpace>;

/// Scales f in place to unit mass. Throws if the mass is not positive.
void normalise(DensityField& f);

/// Constant density with unit mass.
DensityField uniform_density(std::size_t nx, VelocityPtr vs);

/// f(x, v) proportional to x, unit mass.
DensityField linear_x_density(std::size_t nx, VelocityPtr vs);

/// Gaussian bump centred at (x0, v0), unit mass.
DensityField bump_density(std::size_t nx, VelocityPtr vs, double x0, double v0, double width);

/// Positive density exp(trigonometric polynomial) with random coefficients,
/// unit mass.
DensityField random_smooth_density(std::size_t nx, VelocityPtr vs, std::uint64_t seed);

/// Positive density that is piecewise constant in x (random breakpoints) and
/// smooth in v, unit mass.
DensityField random_step_density(std::size_t nx, VelocityPtr vs, std::uint64_t seed);

/// Random bounded test function with values in [0, 1].
DualField random_dual(std::size_t nx, VelocityPtr vs, std::uint64_t seed);

/// Nonnegative velocity vector with unit integral.
std::vector<double> random_velocity_density(const VelocitySpace& vs, std::uint64_t seed);

/// Reads a density written as `x,v,value` rows; every grid point must be
/// present exactly once.
DensityField load_density_csv(const std::filesystem::path& path, std::size_t nx, VelocityPtr vs);

}  // namespace rotenberg
