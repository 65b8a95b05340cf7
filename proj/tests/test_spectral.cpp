#include <doctest.h>

#include <cmath>
#include <random>

#include "phasewave/spectral.hpp"

using namespace phasewave;

// Long-double closed-form oracles for the dispersion quantities.
namespace {
long double omega0_ld(long double alpha1, long double gamma, int j) {
    return 2.0L * std::asin(j * gamma / (2.0L * std::sqrt(alpha1)));
}
long double lambda_ld(long double alpha1, long double gamma, int j) {
    long double w = omega0_ld(alpha1, gamma, j);
    long double s = std::sin(w / 2.0L), c = std::cos(w / 2.0L);
    return (j * gamma) * (j * gamma) * c / (4.0L * s * s * s);
}
}  // namespace

TEST_CASE("phase count") {
    CHECK(phase_count(1.0, 0.9) == 2);
    CHECK(phase_count(1.0, 1.9) == 1);
    CHECK(phase_count(1.0, 0.3) == 6);
    CHECK_THROWS_AS(phase_count(1.0, 1.0), PwError);   // 2 = 2 gamma: A2 boundary
    CHECK_THROWS_AS(phase_count(1.0, 2.5), PwError);   // nu = 0
    CHECK_THROWS_AS(phase_count(1.0, -1.0), PwError);
}

TEST_CASE("omega0 values") {
    auto w = omega0_vector(1.0, 0.9, 2);
    CHECK(w[0] == doctest::Approx(0.9335306780945927).epsilon(1e-14));
    CHECK(w[1] == doctest::Approx(2.2395390299972684).epsilon(1e-14));
    CHECK(w[0] == doctest::Approx(static_cast<double>(omega0_ld(1.0L, 0.9L, 1))).epsilon(1e-14));
    CHECK(w[1] == doctest::Approx(static_cast<double>(omega0_ld(1.0L, 0.9L, 2))).epsilon(1e-14));

    // j gamma / (2 sqrt(alpha1)) = 1/2 gives exactly 2 asin(1/2) = pi/3
    CHECK(omega0_vector(1.0, 1.0, 1)[0] == doctest::Approx(M_PI / 3.0).epsilon(1e-15));

    // nu = 1 at gamma = 1.9: omega0 = 2 asin(0.95)
    auto w19 = omega0_vector(1.0, 1.9, 1);
    CHECK(w19[0] == doctest::Approx(2.5064717950067505).epsilon(1e-14));
    CHECK(w19[0] == doctest::Approx(static_cast<double>(omega0_ld(1.0L, 1.9L, 1))).epsilon(1e-14));
}

TEST_CASE("divisor function V") {
    DispersionData d = make_dispersion(1.0, 0.9);
    REQUIRE(d.nu == 2);

    SUBCASE("<g,m> = 0 branch returns alpha_1 exactly") {
        CHECK(V_of_omega(d, d.omega0, ModeIndex{2, -1}) == 1.0);
        CHECK(V_of_omega(d, d.omega0, ModeIndex{-4, 2}) == 1.0);
    }
    SUBCASE("kernel modes are zeros of V") {
        CHECK(std::abs(V_of_omega(d, d.omega0, ModeIndex{1, 0})) < 1e-12);
        CHECK(std::abs(V_of_omega(d, d.omega0, ModeIndex{0, 1})) < 1e-12);
        CHECK(std::abs(V_of_omega(d, d.omega0, ModeIndex{-1, 0})) < 1e-12);
    }
    SUBCASE("e1 + e2 value") {
        // oracle: 1 - 9 gamma^2 / (4 sin^2((w1+w2)/2))
        long double w1 = omega0_ld(1.0L, 0.9L, 1), w2 = omega0_ld(1.0L, 0.9L, 2);
        long double s = std::sin((w1 + w2) / 2.0L);
        long double expected = 1.0L - 9.0L * 0.81L / (4.0L * s * s);
        CHECK(V_of_omega(d, d.omega0, ModeIndex{1, 1}) ==
              doctest::Approx(static_cast<double>(expected)).epsilon(1e-12));
        CHECK(V_of_omega(d, d.omega0, ModeIndex{1, 1}) == doctest::Approx(-0.8229515).epsilon(1e-6));
    }
    SUBCASE("parity") {
        for (int i = -3; i <= 3; ++i)
            for (int j = -3; j <= 3; ++j) {
                ModeIndex m{i, j};
                CHECK(V_of_omega(d, d.omega0, m) == V_of_omega(d, d.omega0, m.negated()));
            }
    }
    SUBCASE("singular sentinel") {
        std::vector<double> rational_omega{0.0, 0.7};
        CHECK(std::isinf(V_of_omega(d, rational_omega, ModeIndex{2, 0})));
    }
}

TEST_CASE("theta-shifted divisor") {
    DispersionData d = make_dispersion(1.0, 0.9);
    std::mt19937_64 rng(53);
    std::uniform_int_distribution<int> coord(-5, 5);
    std::uniform_real_distribution<double> pert(-0.3, 0.3);

    SUBCASE("theta = 0 reduces to V(omega)") {
        for (int t = 0; t < 20; ++t) {
            ModeIndex m{coord(rng), coord(rng)};
            std::vector<double> omega{d.omega0[0] + pert(rng), d.omega0[1] + pert(rng)};
            double a = V_of_theta(d, 0.0, omega, m);
            double b = V_of_omega(d, omega, m);
            if (std::isinf(a)) {
                CHECK(std::isinf(b));
            } else {
                CHECK(a == doctest::Approx(b).epsilon(1e-12));
            }
        }
    }
    SUBCASE("translation identity for <k,g> = 0") {
        ModeIndex k{2, -1};  // <g,k> = 0
        for (int t = 0; t < 20; ++t) {
            ModeIndex m{coord(rng), coord(rng)};
            std::vector<double> omega{d.omega0[0] + pert(rng), d.omega0[1] + pert(rng)};
            double theta = pert(rng);
            double lhs = V_of_theta(d, theta, omega, m + k);
            double shift = omega[0] * k[0] + omega[1] * k[1];
            double rhs = V_of_theta(d, theta + shift, omega, m);
            if (std::isinf(lhs)) {
                CHECK(std::isinf(rhs));
            } else {
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
            }
        }
    }
    SUBCASE("shifting theta moves the zero of V_1") {
        std::vector<double> omega{d.omega0[0] + 0.1, d.omega0[1] - 0.05};
        double theta = -omega[0] + d.omega0[0];
        CHECK(std::abs(V_of_theta(d, theta, omega, ModeIndex{1, 0})) < 1e-10);
    }
}

TEST_CASE("Lambda vector") {
    DispersionData d = make_dispersion(1.0, 0.9);
    auto L = lambda_vector(d);
    CHECK(L[0] == doctest::Approx(static_cast<double>(lambda_ld(1.0L, 0.9L, 1))).epsilon(1e-13));
    CHECK(L[0] == doctest::Approx(1.9845079).epsilon(1e-6));
    CHECK(L[0] > 0.0);
    CHECK(L[1] > 0.0);

    // Lambda_j is the derivative of V_j at omega0_j: central difference oracle.
    for (int j = 0; j < 2; ++j) {
        double h = 1e-6;
        double fd = (V_scalar(1.0, 0.9, j + 1, d.omega0[static_cast<std::size_t>(j)] + h) -
                     V_scalar(1.0, 0.9, j + 1, d.omega0[static_cast<std::size_t>(j)] - h)) /
                    (2.0 * h);
        CHECK(L[static_cast<std::size_t>(j)] == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("sign structure of V at omega0 for random valid parameters") {
    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> alpha_d(0.5, 2.0);
    int done = 0;
    while (done < 50) {
        double alpha1 = alpha_d(rng);
        double gamma = std::uniform_real_distribution<double>(0.2, 0.95)(rng) * std::sqrt(alpha1);
        DispersionData d;
        try {
            d = make_dispersion(alpha1, gamma);
        } catch (const PwError&) {
            continue;
        }
        if (d.nu > kMaxNu) continue;
        ++done;
        for (int j = 0; j < d.nu; ++j) {
            for (int l = 0; l < d.nu; ++l) {
                ModeIndex sum = ModeIndex::unit(d.nu, j) + ModeIndex::unit(d.nu, l);
                CHECK(V_of_omega(d, d.omega0, sum) < 0.0);
                if (j != l) {
                    ModeIndex diff = ModeIndex::unit(d.nu, j) - ModeIndex::unit(d.nu, l);
                    CHECK(V_of_omega(d, d.omega0, diff) > 0.0);
                }
            }
        }
    }
}

TEST_CASE("Omega matrix") {
    SUBCASE("toda at gamma = 0.9: Omega_11 from the closed form") {
        ForceLaw F = builtin_force_law(LawType::toda, 0.0, 8);
        DispersionData d = make_dispersion(1.0, 0.9);
        OmegaMatrix om = omega_matrix(F, d);
        // oracle: 3 Lambda_1^{-1} (F''^2 / V(2 e_1) - F''') with F'' = F''' = 1
        long double w1 = omega0_ld(1.0L, 0.9L, 1);
        long double s = std::sin(w1);
        long double V2 = 1.0L - 4.0L * 0.81L / (4.0L * s * s);
        long double expected = 3.0L / lambda_ld(1.0L, 0.9L, 1) * (1.0L / V2 - 1.0L);
        CHECK(om.entries(0, 0) ==
              doctest::Approx(static_cast<double>(expected)).epsilon(1e-12));
        CHECK(om.entries(0, 0) == doctest::Approx(-7.4652335).epsilon(1e-6));
        CHECK(std::abs(om.determinant) > 0.0);
    }
    SUBCASE("F'' = F''' = 0 gives the zero matrix") {
        ForceLaw F = builtin_force_law(LawType::custom, 0.0, 4, {0.0, 1.0, 0.0, 0.0, 1.0});
        DispersionData d = make_dispersion(1.0, 0.9);
        OmegaMatrix om = omega_matrix(F, d);
        CHECK(om.entries.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("toda off-diagonal entries vanish identically (integrable degeneracy)") {
        ForceLaw F = builtin_force_law(LawType::toda, 0.0, 8);
        DispersionData d = make_dispersion(1.0, 0.9);
        OmegaMatrix om = omega_matrix(F, d);
        CHECK(std::abs(om.entries(0, 1)) < 1e-12);
        CHECK(std::abs(om.entries(1, 0)) < 1e-12);
        CHECK(std::abs(om.entries(1, 1)) > 1.0);
    }
    SUBCASE("scaled symmetry Lambda_l Omega_jl = Lambda_j Omega_lj") {
        // generic custom law with nonzero F'' and F'''
        ForceLaw F = builtin_force_law(LawType::custom, 0.0, 4, {0.0, 1.0, 0.3, -0.2});
        DispersionData d = make_dispersion(F.alpha1(), 0.41 * std::sqrt(F.alpha1()));
        REQUIRE(d.nu == kMaxNu);
        OmegaMatrix om = omega_matrix(F, d);
        CHECK(om.min_abs_entry > 1e-8);
        for (int j = 0; j < d.nu; ++j)
            for (int l = 0; l < d.nu; ++l)
                CHECK(d.Lambda[static_cast<std::size_t>(l)] * om.entries(j, l) ==
                      doctest::Approx(d.Lambda[static_cast<std::size_t>(j)] * om.entries(l, j))
                          .epsilon(1e-10));
    }
}

TEST_CASE("assumption checker") {
    SUBCASE("toda at gamma = 0.9 passes A1, A2 with a positive A3 margin") {
        ForceLaw F = builtin_force_law(LawType::toda, 0.0, 8);
        AssumptionReport rep = check_assumptions(F, 0.9, 2.0, 50);
        CHECK(rep.a1_ok);
        CHECK(rep.a2_ok);
        // A4 fails for toda: the off-diagonal Omega entries vanish identically.
        CHECK_FALSE(rep.a4_ok);
        CHECK(rep.a3_min_scaled_margin > 0.0);
        // exhaustive scan: (2*50+1)^2 - 1 sites, deduplicated over +-
        CHECK(rep.a3_margin.size() == (101 * 101 - 1) / 2);
    }
    SUBCASE("generic cubic-type law passes A4") {
        ForceLaw F = builtin_force_law(LawType::cubic, 0.0, 8);
        AssumptionReport rep = check_assumptions(F, 0.9, 2.0, 10);
        CHECK(rep.a1_ok);
        CHECK(rep.a2_ok);
        CHECK(rep.a4_ok);
    }
    SUBCASE("linear law fails A4") {
        ForceLaw F = builtin_force_law(LawType::custom, 0.0, 3, {0.0, 1.0});
        AssumptionReport rep = check_assumptions(F, 0.9, 2.0, 10);
        CHECK(rep.a1_ok);
        CHECK(rep.a2_ok);
        CHECK_FALSE(rep.a4_ok);
    }
    SUBCASE("exact boundary fails A2") {
        ForceLaw F = builtin_force_law(LawType::toda, 0.0, 8);
        AssumptionReport rep = check_assumptions(F, 2.0 / 3.0, 2.0, 10);
        CHECK_FALSE(rep.a2_ok);
    }
}

TEST_CASE("compensated distance to 2 pi Z") {
    // large multiples of 2 pi reduce to ~0
    double x = 2.0 * M_PI * 1e6;
    CHECK(dist_to_2pi(x) < 1e-9);
    CHECK(dist_to_2pi(0.3) == doctest::Approx(0.3).epsilon(1e-13));
    CHECK(dist_to_2pi(-0.3) == doctest::Approx(0.3).epsilon(1e-13));
    CHECK(dist_to_2pi(2.0 * M_PI - 0.25) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("subproblem keeps the original integer labels") {
    DispersionData d = make_dispersion(1.0, 0.45);
    REQUIRE(d.nu == 4);
    DispersionData s = subproblem(d, {1, 3});
    CHECK(s.nu == 2);
    CHECK(s.g == std::vector<int>{2, 4});
    CHECK(s.omega0[0] == doctest::Approx(d.omega0[1]).epsilon(1e-15));
    CHECK(s.omega0[1] == doctest::Approx(d.omega0[3]).epsilon(1e-15));
}
