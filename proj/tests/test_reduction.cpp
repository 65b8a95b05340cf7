#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "phasewave/reduction.hpp"

using namespace phasewave;

namespace {
WeightSpec wspec(int nu) {
    WeightSpec w;
    w.nu = nu;
    return w;
}
}  // namespace

TEST_CASE("phi parameterization") {
    CHECK(phi(std::vector<double>{0.0, 0.0}).empty());

    auto u = phi(std::vector<double>{1.0, 0.0});
    CHECK(u.at(ModeIndex{1, 0}) == 1.0);
    CHECK(u.at(ModeIndex{-1, 0}) == 1.0);
    CHECK(u.at(ModeIndex{0, 1}) == 0.0);

    auto v = phi(std::vector<double>{0.25, -0.5});
    CHECK(seq_norm(wspec(2), v) == doctest::Approx(2.0 * M_E * 0.75).epsilon(1e-14));
}

TEST_CASE("projection algebra") {
    std::mt19937_64 rng(101);
    for (int t = 0; t < 20; ++t) {
        FourierSequence u = oracle::random_sequence(rng, 2, 8, 4, 1.0);
        u.set(ModeIndex{0, 0}, 0.0);  // reduced class

        FourierSequence q = project_Q(u);
        FourierSequence p = project_P(u).seq();

        // P + Q = id, Q(phi) = phi, P(phi) = 0, idempotence, PQ = 0
        FourierSequence sum = p;
        sum.add_scaled(q, 1.0);
        CHECK(sum == u);
        CHECK(project_P(p).seq() == p);
        CHECK(project_Q(q) == q);
        CHECK(project_Q(p).empty());
        CHECK(project_P(q).seq().empty());
    }
    auto kernel = phi(std::vector<double>{0.3, 0.7});
    CHECK(project_Q(kernel) == kernel);
    CHECK(project_P(kernel).seq().empty());
}

TEST_CASE("P functional") {
    DispersionData d = make_dispersion(1.0, 0.9);
    WeightSpec w = wspec(2);

    SUBCASE("linear law: P(v) = D(omega) v, zero at v = 0") {
        ForceLaw lin = builtin_force_law(LawType::custom, 0.0, 3, {0.0, 1.0});
        WaveParameters lambda{{0.01, 0.01}, d.omega0};
        CHECK(P_functional(lin, d, ReducedSequence(2), lambda, w).seq().empty());

        ReducedSequence v(2);
        v.seq().set(ModeIndex{2, 1}, 0.5);
        FourierSequence out = P_functional(lin, d, v, lambda, w).seq();
        CHECK(out.at(ModeIndex{2, 1}) ==
              doctest::Approx(V_of_omega(d, d.omega0, ModeIndex{2, 1}) * 0.5).epsilon(1e-14));
        CHECK(out.support_size() == 1);
    }

    SUBCASE("quadratic law at v = 0: P(phi * phi)") {
        ForceLaw quad = builtin_force_law(LawType::quadratic, 0.0, 3);
        double t = 0.01;
        WaveParameters lambda{{t, 0.0}, d.omega0};
        FourierSequence out = P_functional(quad, d, ReducedSequence(2), lambda, w).seq();
        CHECK(out.at(ModeIndex{2, 0}) == doctest::Approx(t * t).epsilon(1e-15));
        CHECK(out.at(ModeIndex{-2, 0}) == doctest::Approx(t * t).epsilon(1e-15));
        CHECK(out.at(ModeIndex{0, 0}) == 0.0);  // removed by the projection
        CHECK(out.support_size() == 1);
    }

    SUBCASE("resonant mode in supp(v) is rejected by name") {
        ForceLaw quad = builtin_force_law(LawType::quadratic, 0.0, 3);
        // omega with <omega, m> = 2 pi exactly for m = (2,1)
        std::vector<double> omega{M_PI / 2.0, M_PI};
        WaveParameters lambda{{0.01, 0.01}, omega};
        ReducedSequence v(2);
        v.seq().set(ModeIndex{2, 1}, 1e-6);
        CHECK_THROWS_WITH_AS(P_functional(quad, d, v, lambda, w),
                             doctest::Contains("(2,1)"), PwError);
    }
}

TEST_CASE("Q functional") {
    DispersionData d = make_dispersion(1.0, 0.9);
    WeightSpec w = wspec(2);

    SUBCASE("a = 0 gives h = 0") {
        ForceLaw F = builtin_force_law(LawType::toda, 0.0, 8);
        WaveParameters lambda{{0.0, 0.0}, d.omega0};
        auto h = Q_functional(F, d, ReducedSequence(2), lambda, w);
        CHECK(h[0] == 0.0);
        CHECK(h[1] == 0.0);
    }
    SUBCASE("linear law: h_j = a_j V_j(omega_j), zero exactly at omega0") {
        ForceLaw lin = builtin_force_law(LawType::custom, 0.0, 3, {0.0, 1.0});
        WaveParameters lambda{{0.2, -0.1}, d.omega0};
        auto h = Q_functional(lin, d, ReducedSequence(2), lambda, w);
        CHECK(std::abs(h[0]) < 1e-13);
        CHECK(std::abs(h[1]) < 1e-13);

        std::vector<double> omega{d.omega0[0] + 0.05, d.omega0[1] - 0.02};
        WaveParameters shifted{{0.2, -0.1}, omega};
        auto h2 = Q_functional(lin, d, ReducedSequence(2), shifted, w);
        CHECK(h2[0] == doctest::Approx(0.2 * V_scalar(1.0, 0.9, 1, omega[0])).epsilon(1e-13));
        CHECK(h2[1] == doctest::Approx(-0.1 * V_scalar(1.0, 0.9, 2, omega[1])).epsilon(1e-13));
    }
    SUBCASE("evaluation symmetry at +-e_j through the reference oracle") {
        ForceLaw F = builtin_force_law(LawType::toda, 0.0, 6);
        std::mt19937_64 rng(107);
        FourierSequence vv = oracle::random_sequence(rng, 2, 5, 3, 1e-3);
        vv.set(ModeIndex{0, 0}, 0.0);
        vv.set(ModeIndex{1, 0}, 0.0);
        vv.set(ModeIndex{0, 1}, 0.0);
        ReducedSequence v(vv);
        FourierSequence u = phi(std::vector<double>{0.01, 0.02});
        u.add_scaled(v.seq(), 1.0);
        auto ref = oracle::ref_W(F, u);
        for (int j = 0; j < 2; ++j) {
            ModeIndex ej = ModeIndex::unit(2, j);
            double plus = oracle::ref_at(ref, ej);
            double minus = oracle::ref_at(ref, ej.negated());
            CHECK(plus == doctest::Approx(minus).epsilon(1e-13));
        }
    }
}

TEST_CASE("full residual: linear exactness of the kernel family") {
    // F(x) = alpha x with kernel superpositions at omega0 solves the full
    // equation; residual below 1e-12 per mode.
    for (double alpha : {0.5, 1.0, 2.0}) {
        ForceLaw lin = builtin_force_law(LawType::custom, 0.0, 3, {0.0, alpha});
        DispersionData d = make_dispersion(alpha, 0.9 * std::sqrt(alpha));
        REQUIRE(d.nu == 2);
        FourierSequence u = phi(std::vector<double>{0.3, 0.2});
        FourierSequence res = full_residual(lin, d, u, d.omega0, wspec(2));
        CHECK(res.max_abs() < 1e-12);
    }
}

TEST_CASE("profile reconstruction") {
    DispersionData d = make_dispersion(1.0, 0.9);

    SUBCASE("zero sequence gives the zero profile") {
        std::vector<std::vector<double>> grid{{0.1, 0.2}, {1.0, -1.0}};
        auto chi = reconstruct_profile(FourierSequence(2), d.omega0, grid);
        CHECK(chi[0] == 0.0);
        CHECK(chi[1] == 0.0);
    }

    SUBCASE("single pair collapses to -sin(xi_1)/sin(omega_1/2)") {
        FourierSequence u(2);
        u.set(ModeIndex{1, 0}, 1.0);
        std::vector<std::vector<double>> grid;
        for (int i = 0; i < 9; ++i) grid.push_back({0.7 * i - 3.0, 0.4 * i});
        auto chi = reconstruct_profile(u, d.omega0, grid);
        double s = std::sin(d.omega0[0] / 2.0);
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(chi[i] == doctest::Approx(-std::sin(grid[i][0]) / s).epsilon(1e-12));
    }

    SUBCASE("odd symmetry chi(-xi) = -chi(xi)") {
        std::mt19937_64 rng(113);
        FourierSequence u = oracle::random_sequence(rng, 2, 6, 3, 0.1);
        u.set(ModeIndex{0, 0}, 0.0);
        std::vector<std::vector<double>> grid, neg;
        for (int i = 0; i < 12; ++i) {
            double x = 0.5 * i - 3.0, y = 0.3 * i - 1.7;
            grid.push_back({x, y});
            neg.push_back({-x, -y});
        }
        auto chi = reconstruct_profile(u, d.omega0, grid);
        auto chi_neg = reconstruct_profile(u, d.omega0, neg);
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(chi_neg[i] == doctest::Approx(-chi[i]).epsilon(1e-12));
    }

    SUBCASE("phase shift moves the argument") {
        FourierSequence u(2);
        u.set(ModeIndex{1, 0}, 0.5);
        std::vector<double> zeta{0.3, -0.4};
        std::vector<std::vector<double>> grid{{0.2, 0.1}};
        std::vector<std::vector<double>> shifted{{0.5, -0.3}};
        auto a = reconstruct_profile(u, d.omega0, grid, 1e-8, &zeta);
        auto b = reconstruct_profile(u, d.omega0, shifted);
        CHECK(a[0] == doctest::Approx(b[0]).epsilon(1e-13));
    }
}

TEST_CASE("trajectory sampling") {
    DispersionData d = make_dispersion(1.0, 0.9);
    FourierSequence u = phi(std::vector<double>{0.2, 0.1});
    double b = 1.5;

    SUBCASE("u = 0 is the quiescent lattice") {
        std::vector<double> ts{0.0, 0.5, 1.0};
        auto x = sample_wave(FourierSequence(2), d.omega0, b, d.gamma, d.g, -2, 2, ts);
        std::size_t idx = 0;
        for (int n = -2; n <= 2; ++n)
            for (std::size_t k = 0; k < ts.size(); ++k) CHECK(x[idx++] == doctest::Approx(b * n));
    }

    SUBCASE("time periodicity with period 2 pi / gamma") {
        std::vector<double> ts{0.3, 0.3 + 2.0 * M_PI / d.gamma};
        auto x = sample_wave(u, d.omega0, b, d.gamma, d.g, 0, 5, ts);
        for (int n = 0; n <= 5; ++n)
            CHECK(x[static_cast<std::size_t>(2 * n)] ==
                  doctest::Approx(x[static_cast<std::size_t>(2 * n + 1)]).epsilon(1e-12));
    }

    SUBCASE("travelling identity: site shift equals phase shift") {
        std::vector<double> ts{0.7};
        auto x = sample_wave(u, d.omega0, b, d.gamma, d.g, 0, 4, ts);
        for (int n = 0; n + 1 <= 4; ++n) {
            // x_{n+1}(t) - b (n+1) = chi(omega (n+1) - g gamma t)
            std::vector<std::vector<double>> xi{{d.omega0[0] * (n + 1) - 1 * d.gamma * 0.7,
                                                 d.omega0[1] * (n + 1) - 2 * d.gamma * 0.7}};
            auto chi = reconstruct_profile(u, d.omega0, xi);
            CHECK(x[static_cast<std::size_t>(n + 1)] - b * (n + 1) ==
                  doctest::Approx(chi[0]).epsilon(1e-12));
        }
    }

    SUBCASE("sampler agrees with sample_wave and its velocity") {
        WaveSampler sampler(u, d.omega0, b, d.gamma, d.g);
        std::vector<double> ts{0.0, 0.4};
        auto x = sample_wave(u, d.omega0, b, d.gamma, d.g, -3, 3, ts);
        auto v = sample_wave_velocity(u, d.omega0, d.gamma, d.g, -3, 3, ts);
        std::size_t idx = 0;
        for (int n = -3; n <= 3; ++n)
            for (double t : ts) {
                CHECK(sampler.position(n, t) == doctest::Approx(x[idx]).epsilon(1e-13));
                CHECK(sampler.velocity(n, t) == doctest::Approx(v[idx]).epsilon(1e-13));
                ++idx;
            }
        // velocity against a central difference of the position
        double h = 1e-6;
        double fd = (sampler.position(1, 0.4 + h) - sampler.position(1, 0.4 - h)) / (2 * h);
        CHECK(sampler.velocity(1, 0.4) == doctest::Approx(fd).epsilon(1e-8));
    }
}

TEST_CASE("mode-wise residual/ODE consistency") {
    // The Fourier coefficients of x''_n and of the force difference satisfy
    // RHS(m) - LHS(m) = -2i sin(<omega,m>/2) * residual(m); spot-check that
    // the difference of both sides is the residual, mode by mode.
    ForceLaw F = builtin_force_law(LawType::toda, 0.0, 6);
    DispersionData d = make_dispersion(1.0, 0.9);
    std::mt19937_64 rng(131);
    WeightSpec w = wspec(2);

    FourierSequence u = phi(std::vector<double>{0.01, 0.008});
    FourierSequence pert = oracle::random_sequence(rng, 2, 4, 3, 1e-4);
    pert.set(ModeIndex{0, 0}, 0.0);
    u.add_scaled(pert, 1.0);
    std::vector<double> omega{d.omega0[0] + 0.01, d.omega0[1] - 0.02};

    FourierSequence res = full_residual(F, d, u, omega, w);
    FourierSequence wu = apply_W(F, u, w).value;

    int checked = 0;
    for (const auto& [m, um] : u.reps()) {
        if (m.is_zero() || checked >= 10) continue;
        ++checked;
        double dot = omega[0] * m[0] + omega[1] * m[1];
        double s = std::sin(dot / 2.0);
        double mg = d.g[0] * m[0] + d.g[1] * m[1];
        // LHS: coefficient of x''_n: u~(m) * (-<m,g>^2 gamma^2), with
        // u~(m) = u(m)/(-2 i s); compare moduli of both sides of (RHS-LHS).
        double lhs_mag = std::abs(um / (2.0 * s) * mg * mg * d.gamma * d.gamma);
        double rhs_mag = std::abs((F.alpha1() * um + wu.at(m)) * 2.0 * s);
        double residual_mag = std::abs(2.0 * s * res.at(m));
        CHECK(std::abs(lhs_mag - rhs_mag) <= residual_mag * (1 + 1e-8) + 1e-12);
    }
    CHECK(checked > 0);
}
