#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kzdk/category.hpp"

using namespace kzdk;

namespace {
const CategoryOptions kOpt{};  // kappa 1, order 40, tol 1e-8
}

TEST_CASE("pentagon: trivial cases with atypicals") {
    auto r = pentagon_residual({ModuleSpec::atypical(0.3), ModuleSpec::atypical(-0.7),
                                ModuleSpec::atypical(1.1), ModuleSpec::atypical(0.0)},
                               kOpt);
    CHECK(r.residual < 1e-13);
    auto r2 = pentagon_residual({ModuleSpec::atypical(0.5), ModuleSpec::typical(0.23, 0.4),
                                 ModuleSpec::typical(0.31, -0.2), ModuleSpec::atypical(-0.5)},
                                kOpt);
    CHECK(r2.residual < 1e-13);
}

TEST_CASE("pentagon: four typicals and mixed quadruples") {
    auto r = pentagon_residual({ModuleSpec::typical(0.37, 0.0), ModuleSpec::typical(0.21, 0.5),
                                ModuleSpec::typical(-0.13, 1.0), ModuleSpec::typical(0.17, -0.3)},
                               kOpt);
    CHECK(r.passed);
    CHECK(r.residual < 1e-8);

    auto r2 = pentagon_residual({ModuleSpec::typical(0.37, 0.1), ModuleSpec::typical(0.21, 0.5),
                                 ModuleSpec::projective(0.4), ModuleSpec::atypical(0.8)},
                                kOpt);
    CHECK(r2.passed);
}

TEST_CASE("pentagon: excluded parameters refuse") {
    CHECK_THROWS_AS(pentagon_residual({ModuleSpec::typical(0.6, 0.0), ModuleSpec::typical(0.4, 0.5),
                                       ModuleSpec::typical(0.19, 1.0), ModuleSpec::atypical(0.0)},
                                      kOpt),
                    ExcludedParameterError);
}

TEST_CASE("hexagon: both signs on mixed triples") {
    auto r0 = hexagon_residual(
        {ModuleSpec::atypical(0.4), ModuleSpec::atypical(-0.1), ModuleSpec::atypical(0.9)}, 1, kOpt);
    CHECK(r0.residual < 1e-13);

    for (int sign : {1, -1}) {
        auto r = hexagon_residual(
            {ModuleSpec::typical(0.29, 0.2), ModuleSpec::atypical(0.5), ModuleSpec::typical(0.37, -0.4)},
            sign, kOpt);
        CHECK(r.passed);
        CHECK(r.residual < 1e-10);

        auto r2 = hexagon_residual(
            {ModuleSpec::typical(0.29, 0.2), ModuleSpec::typical(0.41, -0.6), ModuleSpec::projective(0.7)},
            sign, kOpt);
        CHECK(r2.passed);

        auto r3 = hexagon_residual({ModuleSpec::typical(0.23, 0.0), ModuleSpec::typical(0.37, 0.25),
                                    ModuleSpec::typical(0.11, 1.2)},
                                   sign, kOpt);
        CHECK(r3.passed);
    }
}

TEST_CASE("equivariance of associators and braidings") {
    std::array<ModuleSpec, 3> mods{ModuleSpec::typical(0.31, 0.12), ModuleSpec::typical(0.22, -0.4),
                                   ModuleSpec::typical(0.17, 0.9)};
    Matrix a = associator_on(mods, 1.0);
    auto r = equivariance_residual(a, mods, kOpt);
    CHECK(r.residual < 1e-9);

    auto A = build_module(mods[0]);
    auto B = build_module(ModuleSpec::projective(0.8));
    Matrix s = braiding(A, B, 1.0);
    double worst = 0;
    for (int k = 0; k < 4; ++k) {
        Matrix d12 = diagonal_action({A, B}, k);
        Matrix d21 = diagonal_action({B, A}, k);
        worst = std::max(worst, op_norm(s * d12 - d21 * s));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("beta braid identities") {
    auto triv = beta_braid_residual({ModuleSpec::atypical(0.2), ModuleSpec::atypical(0.5),
                                     ModuleSpec::atypical(-0.4), ModuleSpec::atypical(0.0)},
                                    1, kOpt);
    CHECK(triv.residual < 1e-13);

    for (int sign : {1, -1}) {
        auto r = beta_braid_residual({ModuleSpec::typical(0.31, 0.2), ModuleSpec::typical(0.23, -0.1),
                                      ModuleSpec::typical(0.41, 0.7), ModuleSpec::atypical(0.3)},
                                     sign, kOpt);
        CHECK(r.passed);
    }
}

TEST_CASE("unitality: associator with the unit object is the identity") {
    auto r = unitality_residual(ModuleSpec::typical(0.31, 0.4), ModuleSpec::projective(-0.2), kOpt);
    CHECK(r.residual < 1e-12);
}
