#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rotenberg/densities.hpp"
#include "rotenberg/extension.hpp"
#include "rotenberg/semigroup.hpp"

using namespace rotenberg;

TEST_CASE("T(0) is the identity") {
    const auto model = oracle::make_model(1.0, 2.0, 0.6, 0.3, BuiltinKernel::constant, 30);
    const auto f = random_step_density(120, model.velocities_ptr(), 4);
    const auto r = apply(model, 0.0, f);
    CHECK(r.density.data() == f.data());
    CHECK(apply_small_t(model, 0.0, f).data() == f.data());
}

TEST_CASE("pure inheritance transports f periodically") {
    // p = 0, q = 1: T(t)f(x, v) = f(frac(x - t v), v) away from the jumps.
    const auto model = oracle::make_model(1.0, 2.0, 0.0, 1.0, BuiltinKernel::constant, 16);
    const auto f = linear_x_density(200, model.velocities_ptr());
    const double t = 1.3;
    const auto r = apply(model, t, f);
    for (std::size_t j = 0; j < 16; j += 5) {
        for (std::size_t i = 0; i < 200; i += 17) {
            const double y = f.x(i) - t * f.v(j);
            const double back = y - std::floor(y);
            if (back < f.dx() || back > 1.0 - f.dx()) {
                continue;  // one cell from the jump of f~ at a whole shift
            }
            CHECK(r.density(i, j) == doctest::Approx(f.interpolate(j, back)).epsilon(1e-9));
        }
    }
    CHECK(r.mass == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("Markov semigroup conserves mass and positivity") {
    const auto model = oracle::make_model(1.0, 2.0, 1.0, 0.0, BuiltinKernel::constant, 50);
    const auto f = random_smooth_density(200, model.velocities_ptr(), 2);
    for (const auto& r : trajectory(model, f, {0.2, 0.9, 1.7})) {
        CHECK(r.density.nonnegative());
        CHECK(r.mass == doctest::Approx(1.0).epsilon(2e-3));
    }
}

TEST_CASE("subcritical semigroup loses mass") {
    const auto model = oracle::make_model(1.0, 2.0, 0.25, 0.25, BuiltinKernel::constant, 40);
    const auto f = uniform_density(100, model.velocities_ptr());
    const auto rs = trajectory(model, f, {0.5, 1.0, 2.0, 3.0});
    for (std::size_t i = 1; i < rs.size(); ++i) {
        CHECK(rs[i].l1 < rs[i - 1].l1);
    }
}

TEST_CASE("trajectory matches one-off applications") {
    const auto model = oracle::make_model(1.0, 2.0, 0.8, 0.4, BuiltinKernel::constant, 20);
    const auto f = random_smooth_density(80, model.velocities_ptr(), 9);
    const auto traj = trajectory(model, f, {0.3, 1.1});
    const auto one = apply(model, 1.1, f);
    CHECK(l1_distance(traj[1].density, one.density) <= 1e-14);
    CHECK_THROWS_AS(trajectory(model, f, {0.5, 0.2}), ValidationError);
}

TEST_CASE("extension coverage is enforced") {
    const auto model = oracle::make_model(1.0, 2.0, 1.0, 0.0, BuiltinKernel::constant, 10);
    const auto f = uniform_density(50, model.velocities_ptr());
    const auto ext = build_extension(model, f, 0.5);
    CHECK_NOTHROW(apply(ext, 0.5));
    CHECK_THROWS_AS(apply(ext, 0.8), NumericalError);
    CHECK_THROWS_AS(apply(ext, -0.1), ValidationError);
    CHECK_THROWS_AS(apply_small_t(model, 0.6, f), ValidationError);
}

TEST_CASE("extension route and boundary-integral route agree for small t") {
    const auto model = oracle::make_model(1.0, 2.0, 0.6, 0.3, BuiltinKernel::constant, 40);
    std::vector<double> devs;
    for (std::size_t nx : {100, 200, 400}) {
        const auto f = random_smooth_density(nx, model.velocities_ptr(), 5);
        const auto a = apply(model, 0.3, f).density;
        const auto b = apply_small_t(model, 0.3, f);
        devs.push_back(l1_distance(a, b));
    }
    CHECK(devs[0] < 1e-2);
    CHECK(devs[1] < devs[0]);
    CHECK(devs[2] < devs[1]);
}

TEST_CASE("semigroup law") {
    const auto model = oracle::make_model(1.0, 2.0, 0.9, 0.3, BuiltinKernel::constant, 40);
    const auto f = random_smooth_density(200, model.velocities_ptr(), 6);
    CHECK(semigroup_law_check(model, f, 0.4, 0.7) <= 1e-2 * l1_norm(f) * std::pow(1.2, 3));
}
