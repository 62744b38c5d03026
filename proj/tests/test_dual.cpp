#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rotenberg/densities.hpp"
#include "rotenberg/dual.hpp"
#include "rotenberg/semigroup.hpp"

using namespace rotenberg;

TEST_CASE("small-t dual of the indicator is two-valued") {
    const auto model = oracle::make_model(1.0, 2.0, 1.5, 0.3, BuiltinKernel::constant, 50);
    const auto out = apply_dual_small(model, 0.3, indicator(100, model));
    std::set<double> values(out.data().begin(), out.data().end());
    CHECK(values.size() == 2);
    CHECK(*values.begin() == 1.0);
    CHECK(*values.rbegin() == doctest::Approx(1.8).epsilon(1e-14));
}

TEST_CASE("T*(2/b) of the indicator matches the case-by-case formula") {
    const double a = 1.0, b = 2.0, p = 1.2, q = 0.4;
    const auto model = oracle::make_model(a, b, p, q, BuiltinKernel::constant, 100);
    const std::size_t nx = 400;
    const auto out = apply_dual(model, 2.0 / b, indicator(nx, model));
    double total = 0.0;
    std::size_t close = 0;
    for (std::size_t j = 0; j < out.nv(); ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            const double e = oracle::dual_two_steps_constant(a, b, p, q, out.x(i), out.v(j));
            const double d = std::abs(out(i, j) - e);
            total += d;
            close += d <= 1e-2;
        }
    }
    const double n = static_cast<double>(nx * out.nv());
    CHECK(total / n <= 5e-3);
    CHECK(static_cast<double>(close) / n >= 0.97);
}

TEST_CASE("duality pairing for small t") {
    const auto model = oracle::make_model(1.0, 2.0, 0.8, 0.5, BuiltinKernel::constant, 60);
    const auto f = random_smooth_density(300, model.velocities_ptr(), 1);
    const auto phi = random_dual(300, model.velocities_ptr(), 2);
    const double t = 0.4;
    const double lhs = pairing(apply(model, t, f).density, phi);
    const double rhs = pairing(f, apply_dual_small(model, t, phi));
    CHECK(std::abs(lhs - rhs) <= 1e-2 * l1_norm(f) * sup_norm(phi));
}

TEST_CASE("a-priori norm bounds") {
    CHECK(norm_bound({1.0, 2.0, 0.5, 0.2}, 0.0).bound == 1.0);
    CHECK(norm_bound({1.0, 2.0, 1.5, 0.3}, 0.4).bound == doctest::Approx(1.8));
    CHECK(norm_bound({1.0, 2.0, 0.2, 0.1}, 0.4).bound == 1.0);
    CHECK(norm_bound({1.0, 2.0, 0.5, 0.5}, 3.0).bound_kind == "markov");
    const auto g = norm_bound({1.0, 2.0, 1.5, 0.5}, 1.2);
    CHECK(g.bound_kind == "growth");
    CHECK(g.bound == doctest::Approx(8.0));
    const auto d = norm_bound({1.0, 2.0, 0.25, 0.25}, 2.5);
    CHECK(d.bound_kind == "decay");
    CHECK(d.bound == doctest::Approx(0.25));
    CHECK(norm_bound({0.0, 2.0, 0.25, 0.25}, 2.5).bound == 1.0);
}

TEST_CASE("operator norm respects its certificate") {
    const auto model = oracle::make_model(1.0, 2.0, 0.6, 0.6, BuiltinKernel::constant, 40);
    for (double t : {0.0, 0.3, 0.8, 1.7}) {
        const auto c = operator_norm(model, 100, t);
        CHECK(c.pass);
        CHECK(c.norm >= 1.0);
    }
}

TEST_CASE("j_index counts completed divisions") {
    // a = 1, v = 1: x + t - i - 1 < 0.
    CHECK(j_index(0.5, 1.0, 0.2, 1.0) == 0);
    CHECK(j_index(0.5, 1.0, 0.7, 1.0) == 1);
    CHECK(j_index(0.5, 1.0, 2.6, 1.0) == 3);
    CHECK_THROWS_AS(j_index(0.5, 1.0, 1.0, 0.0), ValidationError);
}

TEST_CASE("v_epsilon diagnostic distinguishes the kernels") {
    const auto flat = oracle::make_model(1.0, 2.0, 1.0, 0.0, BuiltinKernel::constant, 100);
    const auto dc = v_epsilon_diagnostic(flat, 2);
    CHECK(dc.d_n == doctest::Approx(4.0 / 3.0));
    CHECK(dc.sup_m == doctest::Approx(2.0 / 3.0));
    CHECK_FALSE(dc.equality_predicted);

    const auto fast = oracle::make_model(1.0, 2.0, 1.0, 0.0, BuiltinKernel::daughters_faster, 100);
    const auto df = v_epsilon_diagnostic(fast, 2);
    CHECK(df.sup_m == doctest::Approx(1.0));
    CHECK(df.evidence_measure > 0.0);
    CHECK(df.equality_predicted);

    CHECK_THROWS_AS(v_epsilon_diagnostic(flat, 1), ValidationError);
}
