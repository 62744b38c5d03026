#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rotenberg/field.hpp"
#include "rotenberg/model.hpp"

namespace rotenberg {

/// Maturity at time t of a daughter with velocity w whose mother is at
/// (x, v) now. Negative means the mother has not divided by time t.
inline double x_daughter(double x, double v, double w, double t) { return (x + t * v - 1.0) * w / v; }

/// T*(t) phi for 0 <= t <= 1/b, linear interpolation in x.
DualField apply_dual_small(const Model& model, double t, const DualField& phi,
                           Exec exec = Exec::parallel);

/// T*(t) phi as ceil(t b) steps of apply_dual_small.
DualField apply_dual(const Model& model, double t, const DualField& phi, Exec exec = Exec::parallel);

/// The indicator of Omega on the model's grid.
DualField indicator(std::size_t nx, const Model& model);

struct NormCertificate {
    double t = 0.0;
    double norm = 0.0;
    double bound = 0.0;
    std::string bound_kind;  // which estimate produced `bound`
    bool pass = false;
};

/// Tightest of the available a-priori estimates of ||T(t)||.
NormCertificate norm_bound(const ModelParams& params, double t);

/// ||T(t)|| = grid max of T*(t)1, certified against norm_bound.
NormCertificate operator_norm(const Model& model, std::size_t nx, double t, double tol = 1e-9,
                              Exec exec = Exec::parallel);

/// Least i >= 0 with x_daughter(x, v, v, t - i/a) < 0. Needs a > 0.
std::size_t j_index(double x, double v, double t, double a);

struct VEpsilonDiagnostic {
    int n = 0;
    double d_n = 0.0;
    std::vector<double> profile;  // m(v_j) = integral over (d_n, b) of k*(w, v_j) dw
    double sup_m = 0.0;
    double evidence_measure = 0.0;  // nu-measure of nodes with m >= 1 - tol
    bool equality_predicted = false;
};

/// Grid evidence for the condition deciding ||T(n/b)|| = (p + q)^n.
VEpsilonDiagnostic v_epsilon_diagnostic(const Model& model, int n, double tol = 1e-3);

}  // namespace rotenberg
