#include "rotenberg/dual.hpp"

#include <algorithm>
#include <cmath>

#include "rotenberg/csv.hpp"

namespace rotenberg {

DualField apply_dual_small(const Model& model, double t, const DualField& phi, Exec exec) {
    const double b = model.params().b;
    if (!(t >= 0.0) || t > 1.0 / b) {
        throw ValidationError("apply_dual_small: need 0 <= t <= 1/b = " + format_double(1.0 / b));
    }
    if (phi.velocities_ptr() != model.velocities_ptr()) {
        throw ValidationError("apply_dual_small: field and model use different velocity spaces");
    }
    if (t == 0.0) {
        return phi;
    }
    const auto& vs = model.velocities();
    const auto& k = model.discrete_kernel();
    const double p = model.params().p;
    const double q = model.params().q;
    const std::size_t nx = phi.nx();
    const std::size_t nv = phi.nv();
    DualField out(nx, phi.velocities_ptr());
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
    for (long long jj = 0; jj < static_cast<long long>(nv); ++jj) {
        const auto j = static_cast<std::size_t>(jj);
        const double v = vs.node(j);
        const auto row = k.row(j);  // k*(w, v) = k(v, w)
        for (std::size_t i = 0; i < nx; ++i) {
            const double x = phi.x(i);
            const double lag = x_daughter(x, v, v, t);
            if (lag < 0.0) {
                out(i, j) = phi.interpolate(j, x + t * v);
                continue;
            }
            double sum = 0.0;
            if (p != 0.0) {
                for (std::size_t w = 0; w < nv; ++w) {
                    if (row[w] != 0.0) {
                        sum += row[w] * vs.weight(w) * phi.interpolate(w, lag * vs.node(w) / v);
                    }
                }
                sum *= p;
            }
            if (q != 0.0) {
                sum += q * phi.interpolate(j, lag);
            }
            out(i, j) = sum;
        }
    }
    return out;
}

DualField apply_dual(const Model& model, double t, const DualField& phi, Exec exec) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw ValidationError("apply_dual: t must be finite and >= 0");
    }
    const double b = model.params().b;
    const auto n = static_cast<std::size_t>(std::ceil(t * b));
    if (n == 0) {
        return phi;
    }
    double s = t / static_cast<double>(n);
    // Guard against s * b exceeding 1 by one ulp.
    s = std::min(s, 1.0 / b);
    DualField current = phi;
    for (std::size_t step = 0; step < n; ++step) {
        current = apply_dual_small(model, s, current, exec);
    }
    return current;
}

DualField indicator(std::size_t nx, const Model& model) {
    return DualField(nx, model.velocities_ptr(), 1.0);
}

NormCertificate norm_bound(const ModelParams& params, double t) {
    NormCertificate c;
    c.t = t;
    const double r = params.reproduction();
    if (t == 0.0) {
        c.bound = 1.0;
        c.bound_kind = "identity";
        return c;
    }
    if (t <= 1.0 / params.b) {
        c.bound = std::max(1.0, r);
        c.bound_kind = "small-t";
        return c;
    }
    if (params.is_markov()) {
        c.bound = 1.0;
        c.bound_kind = "markov";
        return c;
    }
    if (r > 1.0) {
        c.bound = std::pow(r, std::ceil(t * params.b));
        c.bound_kind = "growth";
        return c;
    }
    c.bound = 1.0;
    c.bound_kind = "contraction";
    if (params.a > 0.0 && t >= 1.0 / params.a) {
        c.bound = std::pow(r, std::floor(t * params.a));
        c.bound_kind = "decay";
    }
    return c;
}

NormCertificate operator_norm(const Model& model, std::size_t nx, double t, double tol, Exec exec) {
    auto cert = norm_bound(model.params(), t);
    const auto result = apply_dual(model, t, indicator(nx, model), exec);
    cert.norm = sup_norm(result);
    cert.pass = cert.norm <= cert.bound + tol;
    return cert;
}

std::size_t j_index(double x, double v, double t, double a) {
    if (!(a > 0.0)) {
        throw ValidationError("j_index: needs a > 0");
    }
    std::size_t i = 0;
    while (x_daughter(x, v, v, t - static_cast<double>(i) / a) >= 0.0) {
        ++i;
    }
    return i;
}

VEpsilonDiagnostic v_epsilon_diagnostic(const Model& model, int n, double tol) {
    if (n < 2) {
        throw ValidationError("v_epsilon_diagnostic: n must be >= 2");
    }
    const auto& vs = model.velocities();
    if (!vs.is_continuous()) {
        throw ValidationError("v_epsilon_diagnostic: needs a continuous velocity space");
    }
    const auto& params = model.params();
    VEpsilonDiagnostic d;
    d.n = n;
    d.d_n = std::max(params.a, n * params.b / (n + 1.0));
    d.profile.resize(vs.size());
    const auto& kernel = model.kernel();
    const auto& dk = model.discrete_kernel();
    for (std::size_t j = 0; j < vs.size(); ++j) {
        const double v = vs.node(j);
        if (auto exact = kernel.daughter_integral(v, d.d_n, params.b)) {
            d.profile[j] = *exact;
        } else {
            double sum = 0.0;
            for (std::size_t w = 0; w < vs.size(); ++w) {
                if (vs.node(w) > d.d_n) {
                    sum += dk(j, w) * vs.weight(w);
                }
            }
            d.profile[j] = sum;
        }
    }
    const bool restrict = params.p > 0.0 && params.q > 0.0;
    for (std::size_t j = 0; j < vs.size(); ++j) {
        if (restrict && !(vs.node(j) > d.d_n)) {
            continue;
        }
        d.sup_m = std::max(d.sup_m, d.profile[j]);
        if (d.profile[j] >= 1.0 - tol) {
            d.evidence_measure += vs.weight(j);
        }
    }
    d.equality_predicted = params.p == 0.0 || d.evidence_measure > 0.0;
    return d;
}

}  // namespace rotenberg
