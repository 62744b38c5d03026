#include <cmath>
#include <filesystem>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rotenberg/csv.hpp"
#include "rotenberg/densities.hpp"
#include "rotenberg/field.hpp"
#include "rotenberg/model.hpp"

using namespace rotenberg;

TEST_CASE("params validation") {
    CHECK_NOTHROW(ModelParams{0.0, 1.0, 1.0, 0.0}.validate());
    CHECK_THROWS_AS(ModelParams({1.0, 1.0, 1.0, 0.0}).validate(), ValidationError);
    CHECK_THROWS_AS(ModelParams({-0.1, 1.0, 1.0, 0.0}).validate(), ValidationError);
    CHECK_THROWS_AS(ModelParams({0.0, INFINITY, 1.0, 0.0}).validate(), ValidationError);
    CHECK_THROWS_AS(ModelParams({0.0, 1.0, -1.0, 0.0}).validate(), ValidationError);
    CHECK_THROWS_AS(ModelParams({0.0, 1.0, 0.0, 0.0}).validate(), ValidationError);
    CHECK(ModelParams{0.0, 1.0, 0.25, 0.75}.is_markov());
    CHECK_FALSE(ModelParams{0.0, 1.0, 0.25, 0.5}.is_markov());
}

TEST_CASE("uniform velocity space is a midpoint rule") {
    const auto vs = VelocitySpace::uniform(1.0, 2.0, 4);
    REQUIRE(vs.size() == 4);
    CHECK(vs.node(0) == doctest::Approx(1.125));
    CHECK(vs.node(3) == doctest::Approx(1.875));
    CHECK(vs.cell_lower(0) == 1.0);
    CHECK(vs.cell_upper(3) == 2.0);
    std::vector<double> one(4, 1.0);
    CHECK(vs.integrate(one) == doctest::Approx(1.0));
    CHECK(vs.find_node(1.375).value() == 1);
    CHECK_FALSE(vs.find_node(1.3).has_value());
}

TEST_CASE("discrete velocity space rejects bad input") {
    CHECK_THROWS_AS(VelocitySpace::discrete(0.0, 1.0, {0.5, 0.4}, {1.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(VelocitySpace::discrete(0.0, 1.0, {0.5}, {0.0}), ValidationError);
    CHECK_THROWS_AS(VelocitySpace::discrete(0.0, 1.0, {1.5}, {1.0}), ValidationError);
    CHECK_THROWS_AS(VelocitySpace::discrete(0.0, 1.0, {0.5, 0.7}, {1.0}), ValidationError);
    const auto vs = VelocitySpace::discrete(0.0, 1.0, {0.5, 1.0}, {0.25, 0.75});
    CHECK_FALSE(vs.is_continuous());
    CHECK(vs.weight(1) == 0.75);
}

TEST_CASE("builtin kernel names round-trip") {
    for (auto kind : {BuiltinKernel::constant, BuiltinKernel::three_quarters, BuiltinKernel::linear,
                      BuiltinKernel::daughters_faster, BuiltinKernel::halfline}) {
        CHECK(builtin_kernel_from_string(to_string(kind)) == kind);
    }
    CHECK_FALSE(builtin_kernel_from_string("gaussian").has_value());
    CHECK_THROWS_AS(Kernel::builtin(BuiltinKernel::three_quarters, 1.0, 2.0), ValidationError);
}

TEST_CASE("discretised builtin kernels are row stochastic") {
    for (auto kind : {BuiltinKernel::constant, BuiltinKernel::three_quarters, BuiltinKernel::linear,
                      BuiltinKernel::daughters_faster, BuiltinKernel::halfline}) {
        CAPTURE(to_string(kind));
        const auto model = oracle::make_model(0.0, 1.0, 1.0, 0.0, kind, 50);
        const auto& K = model.discrete_kernel();
        const auto& vs = model.velocities();
        for (std::size_t i = 0; i < K.size(); ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < K.size(); ++j) {
                CHECK(K(i, j) >= 0.0);
                row += K(i, j) * vs.weight(j);
            }
            if (kind == BuiltinKernel::daughters_faster && i + 1 == K.size()) {
                continue;
            }
            CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("three-quarters kernel: point-value quadrature error shrinks with N") {
    const auto k = Kernel::builtin(BuiltinKernel::three_quarters, 0.0, 1.0);
    const double d100 = validate_kernel(k, VelocitySpace::uniform(0.0, 1.0, 100), 1e-3).max_row_deviation;
    const double d400 = validate_kernel(k, VelocitySpace::uniform(0.0, 1.0, 400), 1e-3).max_row_deviation;
    CHECK(d400 < d100);
    CHECK(validate_kernel(Kernel::builtin(BuiltinKernel::constant, 1.0, 2.0),
                          VelocitySpace::uniform(1.0, 2.0, 200), 1e-9)
              .pass);
}

TEST_CASE("tabulated kernels: renormalisation and rejection") {
    const auto vs = VelocitySpace::uniform(0.0, 1.0, 4);
    Kernel::Table t;
    t.mothers.assign(vs.nodes().begin(), vs.nodes().end());
    t.daughters = t.mothers;
    t.values.assign(16, 1.0005);
    const auto near = DiscreteKernel::build(Kernel::tabulated(t), vs);
    CHECK(near.raw_deviation() == doctest::Approx(5e-4));
    CHECK(near(0, 0) * 4 * vs.weight(0) == doctest::Approx(1.0));

    t.values.assign(16, 1.1);
    CHECK_THROWS_AS(DiscreteKernel::build(Kernel::tabulated(t), vs), ValidationError);

    t.values.assign(16, 1.0);
    t.values[5] = -0.1;
    CHECK_THROWS_AS(validate_kernel(Kernel::tabulated(t), vs, 1e-3), ValidationError);
}

TEST_CASE("tabulated kernel csv round-trip") {
    const auto vs = VelocitySpace::uniform(0.0, 1.0, 3);
    Kernel::Table t;
    t.mothers.assign(vs.nodes().begin(), vs.nodes().end());
    t.daughters = t.mothers;
    t.values = {0.5, 1.0, 1.5, 1.0, 1.0, 1.0, 1.5, 1.0, 0.5};
    const auto path = std::filesystem::temp_directory_path() / "rotenberg_kernel_roundtrip.csv";
    Kernel::tabulated(t).save_csv(path);
    const auto back = Kernel::load_csv(path);
    REQUIRE(back.table() != nullptr);
    CHECK(back.table()->values == t.values);
    CHECK(back(t.mothers[0], t.daughters[2]) == 1.5);
    CHECK_THROWS_AS(back(0.3, t.daughters[0]), ValidationError);
    std::filesystem::remove(path);
}

TEST_CASE("model requires matching velocity bounds") {
    CHECK_THROWS_AS(Model({0.0, 1.0, 1.0, 0.0}, VelocitySpace::uniform(0.0, 2.0, 4),
                          Kernel::builtin(BuiltinKernel::constant, 0.0, 1.0)),
                    ValidationError);
}

TEST_CASE("boundary measure rows integrate to p E[w/v] + q") {
    // Constant kernel on (1, 2): p * mean(w) / v + q.
    const auto model = oracle::make_model(1.0, 2.0, 0.7, 0.4, BuiltinKernel::constant, 100);
    const BoundaryMeasure l(model);
    const auto& vs = model.velocities();
    std::vector<double> one(vs.size(), 1.0);
    for (std::size_t j : {std::size_t{0}, std::size_t{37}, std::size_t{99}}) {
        const double expected = 0.7 * 1.5 / vs.node(j) + 0.4;
        CHECK(apply_boundary_measure(l, j, one) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("int_mes identity holds on the grid") {
    for (auto [p, q] : {std::pair{1.0, 0.0}, {0.0, 1.0}, {0.5, 0.5}, {1.5, 0.3}}) {
        const auto model = oracle::make_model(1.0, 2.0, p, q, BuiltinKernel::constant, 64);
        std::vector<double> g;
        for (double w : model.velocities().nodes()) {
            g.push_back(w * w);
        }
        const auto r = int_mes_identity(model, g);
        CHECK(r.deviation <= 1e-12);
    }
}

TEST_CASE("random densities are reproducible and normalised") {
    const auto vs = std::make_shared<const VelocitySpace>(VelocitySpace::uniform(1.0, 2.0, 20));
    const auto f1 = random_step_density(50, vs, 7);
    const auto f2 = random_step_density(50, vs, 7);
    const auto f3 = random_step_density(50, vs, 8);
    CHECK(f1.data() == f2.data());
    CHECK(f1.data() != f3.data());
    CHECK(mass(f1) == doctest::Approx(1.0));
    CHECK(f1.nonnegative());
    const auto s = random_smooth_density(50, vs, 3);
    CHECK(l1_norm(s) == doctest::Approx(1.0));
    const auto phi = random_dual(50, vs, 3);
    CHECK(sup_norm(phi) <= 1.0);
}

TEST_CASE("csv number formatting round-trips") {
    for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) {
        CHECK(parse_double(format_double(x), "t") == x);
    }
    CHECK_THROWS_AS(parse_double("1.0abc", "t"), ValidationError);
    CHECK_THROWS_AS(parse_double("", "t"), ValidationError);
}
