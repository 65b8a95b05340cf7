#include <doctest.h>

#include "oracles.hpp"
#include "phasewave/forcelaw.hpp"

using namespace phasewave;

namespace {
WeightSpec wspec(int nu) {
    WeightSpec w;
    w.nu = nu;
    return w;
}
FourierSequence kernel_pair(int nu, int j, double a) {
    FourierSequence u(nu);
    u.set(ModeIndex::unit(nu, j), a);
    return u;
}
}  // namespace

TEST_CASE("builtin law coefficients") {
    SUBCASE("toda about 0 is the exponential series") {
        ForceLaw F = builtin_force_law(LawType::toda, 0.0, 5);
        std::vector<double> expected{1.0, 1.0, 0.5, 1.0 / 6, 1.0 / 24, 1.0 / 120};
        REQUIRE(F.alpha.size() == 6);
        for (std::size_t k = 0; k < 6; ++k)
            CHECK(F.alpha[k] == doctest::Approx(expected[k]).epsilon(1e-15));
    }
    SUBCASE("quadratic about 0") {
        ForceLaw F = builtin_force_law(LawType::quadratic, 0.0, 3);
        CHECK(F.alpha == std::vector<double>{0.0, 1.0, 1.0, 0.0});
    }
    SUBCASE("cubic about 0") {
        ForceLaw F = builtin_force_law(LawType::cubic, 0.0, 4);
        CHECK(F.alpha == std::vector<double>{0.0, 1.0, 0.0, 1.0, 0.0});
    }
    SUBCASE("toda shifted base point: alpha_1 = e^{-b}") {
        ForceLaw F = builtin_force_law(LawType::toda, std::log(2.0), 3);
        CHECK(F.alpha1() == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("A1 violation is rejected") {
        // quadratic about b >= 1/2 has F'(-b) = 1 - 2b <= 0
        CHECK_THROWS_AS(builtin_force_law(LawType::quadratic, 0.75, 3), PwError);
        CHECK_THROWS_AS(builtin_force_law(LawType::custom, 0.0, 3, {0.0, -1.0}), PwError);
    }
    SUBCASE("K < 3 rejected") { CHECK_THROWS_AS(builtin_force_law(LawType::toda, 0.0, 2), PwError); }
}

TEST_CASE("apply_W basics") {
    SUBCASE("W(0) = 0") {
        ForceLaw F = builtin_force_law(LawType::toda, 0.0, 8);
        NonlinearResidual r = apply_W(F, FourierSequence(2), wspec(2));
        CHECK(r.value.empty());
        CHECK(r.input_norm == 0.0);
        CHECK(r.d_w_bound > 0.0);
    }

    SUBCASE("quadratic law: W(u) = u*u") {
        ForceLaw F = builtin_force_law(LawType::quadratic, 0.0, 3);
        double a = 0.01;
        FourierSequence u = kernel_pair(2, 0, a);
        NonlinearResidual r = apply_W(F, u, wspec(2));
        CHECK(r.value.at(ModeIndex{2, 0}) == doctest::Approx(a * a).epsilon(1e-15));
        CHECK(r.value.at(ModeIndex{0, 0}) == doctest::Approx(2 * a * a).epsilon(1e-15));
        CHECK(r.value.at(ModeIndex{-2, 0}) == doctest::Approx(a * a).epsilon(1e-15));
    }

    SUBCASE("toda K=4 at the kernel pair, value at mode zero") {
        // alpha_2 (u*u)(0) + alpha_4 (u*4)(0) = 1/2 * 2a^2 + 1/24 * 6a^4
        ForceLaw F = builtin_force_law(LawType::toda, 0.0, 4);
        double a = 0.01;
        FourierSequence u = kernel_pair(1, 0, a);
        NonlinearResidual r = apply_W(F, u, wspec(1));
        double expected = a * a + 6.0 * a * a * a * a / 24.0;
        CHECK(r.value.at(ModeIndex{0}) == doctest::Approx(expected).epsilon(1e-14));
        // cross-check the whole sequence against the reference oracle
        CHECK(oracle::max_diff(oracle::ref_W(F, u), r.value) < 1e-18);
    }

    SUBCASE("domain precondition") {
        ForceLaw F = builtin_force_law(LawType::toda, 0.0, 8);
        FourierSequence u = kernel_pair(1, 0, 0.5);  // norm 2 e * 0.5 > radius/2
        CHECK_THROWS_AS(apply_W(F, u, wspec(1)), PwError);
    }
}

TEST_CASE("apply_DW symbol") {
    SUBCASE("DW(0) = 0") {
        ForceLaw F = builtin_force_law(LawType::toda, 0.0, 8);
        CHECK(apply_DW(F, FourierSequence(2)).empty());
    }
    SUBCASE("quadratic law: r = 2 alpha_2 u") {
        ForceLaw F = builtin_force_law(LawType::quadratic, 0.0, 3);
        double a = 0.01;
        FourierSequence u = kernel_pair(2, 0, a);
        FourierSequence r = apply_DW(F, u);
        CHECK(r.at(ModeIndex{1, 0}) == doctest::Approx(2 * a).epsilon(1e-15));
        CHECK(r.at(ModeIndex{-1, 0}) == doctest::Approx(2 * a).epsilon(1e-15));
        CHECK(r.support_size() == 1);
    }
    SUBCASE("toda K=4: r(e1) = 2 alpha_2 a + 4 alpha_4 (u*3)(e1)") {
        // (u*3)(e1) = 3 a^3; the alpha_3 term vanishes by parity.
        ForceLaw F = builtin_force_law(LawType::toda, 0.0, 4);
        double a = 0.01;
        FourierSequence u = kernel_pair(1, 0, a);
        FourierSequence r = apply_DW(F, u);
        double expected = a + 4.0 / 24.0 * 3.0 * a * a * a;
        CHECK(r.at(ModeIndex{1}) == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("apply_DjW multilinear derivative") {
    FourierSequence y(2);
    y.set(ModeIndex{1, 0}, 1.0);
    y.set(ModeIndex{1, 1}, 0.5);

    SUBCASE("D2W(0)[y,y] = 2 y*y for the quadratic law") {
        ForceLaw F = builtin_force_law(LawType::quadratic, 0.0, 3);
        FourierSequence d2 = apply_DjW(F, FourierSequence(2), {y, y});
        FourierSequence yy = convolve(y, y);
        yy.scale(2.0);
        CHECK(d2 == yy);
    }
    SUBCASE("D3W(0)[y,y,y] vanishes for the quadratic law") {
        ForceLaw F = builtin_force_law(LawType::quadratic, 0.0, 3);
        CHECK(apply_DjW(F, FourierSequence(2), {y, y, y}).empty());
    }
    SUBCASE("D3W(0) = 6 e~_l * e~_k * e~_j for the cubic law") {
        ForceLaw F = builtin_force_law(LawType::cubic, 0.0, 4);
        FourierSequence e1 = kernel_pair(2, 0, 1.0), e2 = kernel_pair(2, 1, 1.0);
        FourierSequence d3 = apply_DjW(F, FourierSequence(2), {e1, e1, e2});
        FourierSequence expected = convolve(convolve(e1, e1), e2);
        expected.scale(6.0);
        CHECK(d3 == expected);
    }
    SUBCASE("j beyond the truncation order gives zero") {
        ForceLaw F = builtin_force_law(LawType::quadratic, 0.0, 3);
        std::vector<FourierSequence> args(5, y);
        CHECK(apply_DjW(F, FourierSequence(2), args).empty());
    }
}

TEST_CASE("directional derivative consistency of DW") {
    ForceLaw F = builtin_force_law(LawType::toda, 0.0, 8);
    std::mt19937_64 rng(31);
    WeightSpec w = wspec(2);
    for (int t = 0; t < 10; ++t) {
        FourierSequence u = oracle::random_sequence(rng, 2, 5, 2, 2e-3);
        FourierSequence y = oracle::random_sequence(rng, 2, 4, 2, 1.0);
        const double eps = 1e-6;

        FourierSequence up = u;
        up.add_scaled(y, eps);
        FourierSequence diff = apply_W(F, up, w).value;
        diff.add_scaled(apply_W(F, u, w).value, -1.0);
        diff.scale(1.0 / eps);

        // DW(u) y via the symbol: (r * y)(m)
        FourierSequence dw_y = convolve(apply_DW(F, u), y);
        diff.add_scaled(dw_y, -1.0);
        double y_norm = seq_norm(w, y);
        CHECK(seq_norm(w, diff) <= 10.0 * eps * y_norm * y_norm);
    }
}

TEST_CASE("quadratic bound of the nonlinearity") {
    ForceLaw F = builtin_force_law(LawType::toda, 0.0, 8);
    std::mt19937_64 rng(37);
    WeightSpec w = wspec(2);
    for (int t = 0; t < 30; ++t) {
        FourierSequence u = oracle::random_sequence(rng, 2, 6, 3, 5e-3);
        NonlinearResidual r = apply_W(F, u, w);
        CHECK(seq_norm(w, r.value) <= r.d_w_bound * r.input_norm * r.input_norm * (1 + 1e-12));
    }
}

TEST_CASE("W preserves symmetry and the support bound") {
    ForceLaw F = builtin_force_law(LawType::toda, 0.0, 6);
    std::mt19937_64 rng(41);
    FourierSequence u = oracle::random_sequence(rng, 2, 5, 3, 1e-3);
    NonlinearResidual r = apply_W(F, u, wspec(2));
    // symmetry is structural; check reads at both signs agree
    for (const auto& [m, v] : r.value.reps()) CHECK(r.value.at(m.negated()) == v);
    // support bound: K-fold sumset radius
    CHECK(r.value.support_radius() <= F.order() * u.support_radius());
    // DW symbol symmetric
    FourierSequence sym = apply_DW(F, u);
    for (const auto& [m, v] : sym.reps()) CHECK(sym.at(m.negated()) == v);
}
