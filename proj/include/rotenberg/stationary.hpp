#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rotenberg/dual.hpp"
#include "rotenberg/semigroup.hpp"

namespace rotenberg {

/// (K g)(v) = integral of k(w, v) g(w) over w.
std::vector<double> apply_K(const Model& model, std::span<const double> g, Exec exec = Exec::parallel);

/// L^1(V) norm by the space's quadrature.
double velocity_l1(const VelocitySpace& vs, std::span<const double> g);

struct PowerIteration {
    std::vector<double> g;
    double residual = 0.0;  // ||K g - g||_1 of the returned g
    std::size_t iterations = 0;
    bool converged = false;
    // Share of the mass sitting in the top velocity cell; a chain that pushes
    // all mass towards b has no density fixed point.
    double top_cell_mass = 0.0;
    std::string status;  // converged | max-iterations | boundary-concentration
};

/// Normalised iteration g <- K g / ||K g||_1.
PowerIteration power_iteration(const Model& model, std::span<const double> init, double tol = 1e-10,
                               std::size_t max_iter = 100000, Exec exec = Exec::parallel);

struct H4Check {
    double integral = 0.0;                 // I = integral of f/v
    std::vector<double> refinements;       // I after splitting the innermost cell 0..3 times
    bool divergence_flag = false;
};

/// I = integral of v^{-1} f(v). When a = 0 the innermost cell is halved three
/// times (f re-evaluated on the new cells through K); divergence is flagged
/// when the increments stop shrinking.
H4Check h4_check(const Model& model, std::span<const double> f_diamond);

struct StationaryReport {
    std::vector<double> f_diamond;
    double residual = 0.0;
    double positivity_min = 0.0;
    double agreement = 0.0;  // max pairwise L^1 distance across starts (evidence only)
    std::size_t starts = 0;
    std::size_t iterations = 0;
    bool converged = false;
    std::string status;
    H4Check h4;
    bool pass = false;
};

/// Power iteration from `starts` random initial densities.
StationaryReport stationary_report(const Model& model, std::uint64_t seed, std::size_t starts = 3,
                                   double tol = 1e-10, std::size_t max_iter = 100000,
                                   double agreement_tol = 1e-6, Exec exec = Exec::parallel);

/// f*(x, v) = v^{-1} f(v) / I, constant in x. Throws ValidationError when the
/// H4 check reports divergence.
DensityField invariant_density(const Model& model, std::span<const double> f_diamond, std::size_t nx);

/// max over times of ||T(t) f* - f*||_1. Needs p + q = 1.
double invariance_check(const Model& model, const DensityField& f_star, const std::vector<double>& times,
                        Exec exec = Exec::parallel);

struct PartialIntegrality {
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

/// value = integral over w in V and v in (max(a, b/2), b) of k(w, v).
PartialIntegrality partial_integrality_check(const Model& model, double threshold = 1e-12);

struct StabilityTable {
    std::vector<double> times;
    std::vector<std::vector<double>> distances;  // [initial][time]
    std::vector<std::size_t> decreasing_from;    // first index after which the series never increases
    std::vector<bool> eventually_decreasing;
    double v_min = 0.0;                          // slowest represented velocity
};

/// ||T(t) f - f*||_1 for every initial and time. Needs p + q = 1.
StabilityTable stability_experiment(const Model& model, const std::vector<DensityField>& initials,
                                    const DensityField& f_star, const std::vector<double>& times,
                                    Exec exec = Exec::parallel);

/// Index from which `series` is non-increasing up to a relative slack.
std::size_t decreasing_from(const std::vector<double>& series, double slack = 1e-9);

struct DecaySeries {
    std::vector<double> times;
    std::vector<double> l1;                 // ||T(t) f||_1
    std::vector<NormCertificate> norms;     // ||T(t)|| with bounds
};

/// Needs p + q < 1.
DecaySeries decay_experiment(const Model& model, const DensityField& f, const std::vector<double>& times,
                             Exec exec = Exec::parallel);

}  // namespace rotenberg
