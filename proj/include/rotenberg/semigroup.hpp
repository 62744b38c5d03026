#pragma once

#include <vector>

#include "rotenberg/extension.hpp"

namespace rotenberg {

/// Maturity of the potential mother (velocity w) of a cell at (x, v) observed
/// at time t.
inline double x_mother(double x, double v, double w, double t) { return 1.0 + x * w / v - t * w; }

struct EvolutionResult {
    double t = 0.0;
    DensityField density;
    double mass = 0.0;     // integral of the output
    double l1 = 0.0;       // ||output||_1
    double x_min = 0.0;    // left truncation of the extension used
};

/// T(t)f(x, v) = f~(x - t v, v), read from a prebuilt extension.
EvolutionResult apply(const ExtendedField& ext, double t, Exec exec = Exec::parallel);

/// Builds the extension for t and applies it.
EvolutionResult apply(const Model& model, double t, const DensityField& f, Exec exec = Exec::parallel);

/// Extension-free evaluation for 0 <= t <= 1/b:
/// f(x - tv, v) on x > tv and the boundary integral over mothers on x <= tv.
DensityField apply_small_t(const Model& model, double t, const DensityField& f,
                           Exec exec = Exec::parallel);

/// One extension up to the last time, evaluated at every requested time.
std::vector<EvolutionResult> trajectory(const Model& model, const DensityField& f,
                                        const std::vector<double>& times, Exec exec = Exec::parallel);

/// ||T(s + t)f - T(s)(T(t)f)||_1 with T(t)f re-extended before the second step.
double semigroup_law_check(const Model& model, const DensityField& f, double s, double t,
                           Exec exec = Exec::parallel);

}  // namespace rotenberg
