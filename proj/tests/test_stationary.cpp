#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rotenberg/densities.hpp"
#include "rotenberg/stationary.hpp"

using namespace rotenberg;

TEST_CASE("K preserves mass") {
    const auto model = oracle::make_model(0.0, 1.0, 1.0, 0.0, BuiltinKernel::linear, 80);
    const auto g = random_velocity_density(model.velocities(), 3);
    const auto kg = apply_K(model, g);
    CHECK(velocity_l1(model.velocities(), kg) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("power iteration: constant and linear kernels") {
    const auto flat = oracle::make_model(1.0, 2.0, 1.0, 0.0, BuiltinKernel::constant, 50);
    const auto r = power_iteration(flat, random_velocity_density(flat.velocities(), 1));
    CHECK(r.converged);
    for (double x : r.g) {
        CHECK(x == doctest::Approx(1.0).epsilon(1e-12));
    }
    // k(w, v) = 2v does not depend on w: one step lands on the fixed point.
    const auto lin = oracle::make_model(0.0, 1.0, 1.0, 0.0, BuiltinKernel::linear, 50);
    const auto s = power_iteration(lin, std::vector<double>(50, 1.0));
    CHECK(s.iterations <= 2);
    const auto& vs = lin.velocities();
    for (std::size_t j = 0; j < 50; ++j) {
        CHECK(s.g[j] == doctest::Approx(vs.cell_lower(j) + vs.cell_upper(j)).epsilon(1e-12));
    }
}

TEST_CASE("power iteration rejects bad starts") {
    const auto flat = oracle::make_model(1.0, 2.0, 1.0, 0.0, BuiltinKernel::constant, 5);
    CHECK_THROWS_AS(power_iteration(flat, std::vector<double>(5, 0.0)), ValidationError);
    CHECK_THROWS_AS(power_iteration(flat, std::vector<double>{1, 1, -1, 1, 1}), ValidationError);
    CHECK_THROWS_AS(power_iteration(flat, std::vector<double>(4, 1.0)), ValidationError);
}

TEST_CASE("daughters-faster kernel concentrates at the top cell") {
    const auto model = oracle::make_model(0.0, 1.0, 1.0, 0.0, BuiltinKernel::daughters_faster, 40);
    const auto r = power_iteration(model, std::vector<double>(40, 1.0), 1e-10, 20000);
    CHECK_FALSE(r.converged);
    CHECK(r.status == "boundary-concentration");
}

TEST_CASE("H4 check: finite for three-quarters, divergent for constant") {
    const auto tq = oracle::make_model(0.0, 1.0, 1.0, 0.0, BuiltinKernel::three_quarters, 200);
    const auto fq = power_iteration(tq, std::vector<double>(200, 1.0));
    const auto h = h4_check(tq, fq.g);
    CHECK(h.integral == doctest::Approx(1.5).epsilon(1e-2));
    CHECK_FALSE(h.divergence_flag);

    const auto flat = oracle::make_model(0.0, 1.0, 1.0, 0.0, BuiltinKernel::constant, 200);
    const auto ff = power_iteration(flat, std::vector<double>(200, 1.0));
    const auto hc = h4_check(flat, ff.g);
    CHECK(hc.divergence_flag);
    CHECK_THROWS_AS(invariant_density(flat, ff.g, 10), ValidationError);
}

TEST_CASE("invariant density on (1, 2) is 1/(v ln 2)") {
    const auto model = oracle::make_model(1.0, 2.0, 1.0, 0.0, BuiltinKernel::constant, 100);
    const auto fd = power_iteration(model, std::vector<double>(100, 1.0));
    const auto f = invariant_density(model, fd.g, 20);
    CHECK(mass(f) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t j = 0; j < 100; j += 9) {
        CHECK(f(3, j) == doctest::Approx(1.0 / (f.v(j) * std::log(2.0))).epsilon(1e-4));
    }
}

TEST_CASE("partial integrality") {
    CHECK(partial_integrality_check(oracle::make_model(1.0, 2.0, 1.0, 0.0, BuiltinKernel::constant, 50)).pass);
    CHECK(partial_integrality_check(oracle::make_model(0.0, 1.0, 1.0, 0.0, BuiltinKernel::three_quarters, 50)).pass);
    const auto h = partial_integrality_check(oracle::make_model(0.0, 1.0, 1.0, 0.0, BuiltinKernel::halfline, 50));
    CHECK_FALSE(h.pass);
    CHECK(h.value <= 1e-12);
}

TEST_CASE("decreasing_from") {
    CHECK(decreasing_from({5, 4, 3, 2}) == 0);
    CHECK(decreasing_from({1, 3, 2, 1}) == 1);
    CHECK(decreasing_from({3, 2, 4}) == 2);
}
