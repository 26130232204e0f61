#include <doctest.h>

#include <random>

#include "dimwit/behavior.hpp"
#include "dimwit/witness.hpp"

using namespace dimwit;

namespace {

double max_diff(const Behavior& P, const Behavior& Q) {
    REQUIRE(P.scen == Q.scen);
    double d = 0;
    for (size_t i = 0; i < P.p.size(); ++i) d = std::max(d, std::abs(P.p[i] - Q.p[i]));
    return d;
}

SequentialStrategy random_strategy(int rounds, int inputs, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0, 2 * M_PI);
    SequentialStrategy s;
    s.rounds = rounds;
    s.n_inputs = inputs;
    s.n_outcomes = 1 << rounds;
    s.bases.resize(inputs);
    for (int x = 0; x < inputs; ++x) {
        s.bases[x].resize(rounds);
        for (int r = 0; r < rounds; ++r) {
            s.bases[x][r].resize(1 << r);
            for (int h = 0; h < (1 << r); ++h) s.bases[x][r][h] = plus_minus_basis(u(rng));
        }
    }
    s.outcome = [](int, int h) { return h; };
    return s;
}

} // namespace

TEST_CASE("chsh reference points") {
    Behavior P = p_chsh_ref(0);
    CHECK(P.at(0, 0, 0, 0) == doctest::Approx((1 + 1 / std::sqrt(2.0)) / 4).epsilon(1e-12));
    CHECK(P.at(1, 1, 0, 0) == doctest::Approx((1 - 1 / std::sqrt(2.0)) / 4).epsilon(1e-12));
    // variant 3 is variant 0 with outcomes flipped on one side
    Behavior P3 = p_chsh_ref(3);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    CHECK(P3.at(x, y, a, b) == doctest::Approx(P.at(x, y, a, b ^ 1)).epsilon(1e-12));
    // each variant maximizes its own Bell expression
    for (int b = 0; b < 4; ++b)
        CHECK(chsh_value(p_chsh_ref(b), b) == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("behavior from model basics") {
    // product of sigma_z measurements on |00>
    QuantumModel m;
    m.rho = proj(tensor(basis_state(2, 0), basis_state(2, 0)));
    m.alice = {xz_observable_projectors(0.0)};
    m.bob = {xz_observable_projectors(0.0)};
    Behavior P = behavior_from_model(m);
    CHECK(P.at(0, 0, 0, 0) == doctest::Approx(1.0));

    // phi+ with both sides sigma_z
    m.rho = proj(bell_state(0));
    P = behavior_from_model(m);
    CHECK(P.at(0, 0, 0, 0) == doctest::Approx(0.5));
    CHECK(P.at(0, 0, 1, 1) == doctest::Approx(0.5));
    CHECK(P.at(0, 0, 0, 1) == doctest::Approx(0.0));

    // maximally mixed state: uniform table for rank-1 four-outcome settings
    Behavior Pw = p_bsm(0.0);
    for (int x = 0; x < 4; ++x)
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) CHECK(Pw.at(x, 0, a, b) == doctest::Approx(1.0 / 16).epsilon(1e-10));
}

TEST_CASE("p_bsm structure") {
    Behavior P = p_bsm(1.0);
    CHECK(P.scen == Scenario{4, 5, 4, 4});

    SUBCASE("x,y <= 3 block is the product of two chsh reference points") {
        Behavior ref = product_behavior(p_chsh_ref(0), p_chsh_ref(0));
        double d = 0;
        for (int x = 0; x < 4; ++x)
            for (int y = 0; y < 4; ++y)
                for (int a = 0; a < 4; ++a)
                    for (int b = 0; b < 4; ++b)
                        d = std::max(d, std::abs(P.at(x, y, a, b) - ref.at(x, y, a, b)));
        CHECK(d < 1e-12);
    }
    SUBCASE("uniform Bell-outcome marginal") {
        for (int b = 0; b < 4; ++b) CHECK(P.marginal_b(4, b, 0) == doctest::Approx(0.25).epsilon(1e-10));
    }
    SUBCASE("conditional CHSH on the fifth setting") {
        for (int b = 0; b < 4; ++b) {
            Behavior Q = conditional_on_bsm_outcome(P, b);
            CHECK(chsh_value(Q, b) == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-10));
        }
    }
    SUBCASE("affine in the visibility") {
        Behavior P0 = p_bsm(0.0), Ph = p_bsm(0.5);
        CHECK(max_diff(mix(P, P0, 0.5), Ph) < 1e-12);
    }
    SUBCASE("no-signaling") { CHECK(no_signaling_residual(P) < 1e-10); }
    SUBCASE("aligned variant shares the first-four block and the marginals") {
        Behavior A = p_bsm_aligned(1.0);
        double d = 0;
        for (int x = 0; x < 4; ++x)
            for (int y = 0; y < 4; ++y)
                for (int a = 0; a < 4; ++a)
                    for (int b = 0; b < 4; ++b) d = std::max(d, std::abs(P.at(x, y, a, b) - A.at(x, y, a, b)));
        CHECK(d < 1e-12);
        for (int b = 0; b < 4; ++b) CHECK(A.marginal_b(4, b, 0) == doctest::Approx(0.25).epsilon(1e-10));
        CHECK(no_signaling_residual(A) < 1e-10);
    }
}

TEST_CASE("product behavior marginals factor exactly") {
    Behavior P = product_behavior(p_chsh_ref(0), p_chsh_ref(1));
    for (int x = 0; x < 4; ++x)
        for (int a = 0; a < 4; ++a) {
            double want = p_chsh_ref(0).marginal_a(x >> 1, a >> 1) * p_chsh_ref(1).marginal_a(x & 1, a & 1);
            for (int y = 0; y < 4; ++y) {
                double got = 0;
                for (int b = 0; b < 4; ++b) got += P.at(x, y, a, b);
                CHECK(std::abs(got - want) < 1e-12);
            }
        }
}

TEST_CASE("sequential strategy reproduces the four-outcome Fourier behavior") {
    SequentialStrategy sA = fourier_sequential_strategy(2, {0.0, M_PI / 4}, +1);
    SequentialStrategy sB = fourier_sequential_strategy(2, {-M_PI / 8, M_PI / 8}, -1);
    std::vector<Mat> sources(2, proj(bell_state(0)));
    Behavior sim = simulate_sequential(sA, sB, sources);
    Behavior direct = p_mes4();
    CHECK(max_diff(sim, direct) < 1e-10);
    CHECK(no_signaling_residual(sim) < 1e-10);
}

TEST_CASE("per-outcome factorization of the Fourier basis") {
    // tensor of the round-1/round-2 kets equals the d=4 basis ket after the
    // two-qubit encoding, up to global phase
    SequentialStrategy sA = fourier_sequential_strategy(2, {0.0, M_PI / 4}, +1);
    for (int x = 0; x < 2; ++x) {
        double alpha = x == 0 ? 0.0 : M_PI / 4;
        auto kets = cglmp_basis(4, +1, alpha);
        for (int a = 0; a < 4; ++a) {
            int s1 = a & 1, s2 = a >> 1;
            Vec k1 = sA.bases[x][0][0][s1];
            Vec k2 = sA.bases[x][1][s1][s2];
            Vec prod = tensor(k1, k2); // (A1, A2) ordering = encoded ququart
            double overlap = std::abs((prod.adjoint() * kets[a]).value());
            CHECK(overlap == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("three-round strategy matches the direct eight-outcome behavior") {
    SequentialStrategy sA = fourier_sequential_strategy(3, {0.0, M_PI / 8}, +1);
    SequentialStrategy sB = fourier_sequential_strategy(3, {-M_PI / 16, M_PI / 16}, -1);
    std::vector<Mat> sources(3, proj(bell_state(0)));
    Behavior sim = simulate_sequential(sA, sB, sources);
    Behavior direct = p_mes8();
    CHECK(max_diff(sim, direct) < 1e-10);
}

TEST_CASE("single-round strategy reduces to a direct model") {
    SequentialStrategy sA = fourier_sequential_strategy(1, {0.0, M_PI / 3}, +1);
    SequentialStrategy sB = fourier_sequential_strategy(1, {0.1, -0.4}, -1);
    Behavior sim = simulate_sequential(sA, sB, {proj(bell_state(0))});
    QuantumModel m;
    m.rho = proj(bell_state(0));
    for (int x = 0; x < 2; ++x) {
        auto ba = sA.bases[x][0][0];
        auto bb = sB.bases[x][0][0];
        m.alice.push_back({proj(ba[0]), proj(ba[1])});
        m.bob.push_back({proj(bb[0]), proj(bb[1])});
    }
    CHECK(max_diff(sim, behavior_from_model(m)) < 1e-12);
}

TEST_CASE("random sequential strategies stay no-signaling") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 10; ++trial) {
        SequentialStrategy sA = random_strategy(2, 2, rng);
        SequentialStrategy sB = random_strategy(2, 3, rng);
        std::vector<Mat> sources;
        for (int r = 0; r < 2; ++r) {
            double v = u(rng);
            sources.push_back(v * proj(bell_state(trial % 4)) + (1 - v) * Mat::Identity(4, 4) / 4);
        }
        Behavior P = simulate_sequential(sA, sB, sources);
        CHECK(no_signaling_residual(P) < 1e-9);
        CHECK(P.normalization_residual() < 1e-10);
    }
}

TEST_CASE("mes4 behavior properties") {
    Behavior P = p_mes4();
    CHECK(no_signaling_residual(P) < 1e-10);
    // simultaneous outcome shifts a -> a+1, b -> b+1 leave the table invariant
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    CHECK(P.at(x, y, a, b) ==
                          doctest::Approx(P.at(x, y, (a + 1) % 4, (b + 1) % 4)).epsilon(1e-10));
}

TEST_CASE("coarse graining") {
    Behavior P = p_mes8();
    std::vector<int> ident(8);
    for (int i = 0; i < 8; ++i) ident[i] = i;
    CHECK(max_diff(coarse_grain(P, ident, ident), P) == 0.0);

    std::vector<int> all0(8, 0);
    Behavior flat = coarse_grain(P, all0, all0);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) CHECK(flat.at(x, y, 0, 0) == doctest::Approx(1.0).epsilon(1e-12));

    // commutes with mixing
    std::vector<int> cmap = {2, 0, 1, 2, 0, 1, 2, 0};
    Behavior Q(P.scen);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) Q.at(x, y, 1, 2) = 1.0; // deterministic table
    Behavior lhs = coarse_grain(mix(P, Q, 0.3), cmap, cmap);
    Behavior rhs = mix(coarse_grain(P, cmap, cmap), coarse_grain(Q, cmap, cmap), 0.3);
    CHECK(max_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("signaling table is detected") {
    Behavior P(Scenario{2, 2, 2, 2});
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int b = 0; b < 2; ++b) P.at(x, y, y, b) = 0.5; // Alice's marginal leaks y
    CHECK(!is_no_signaling(P, 1e-6));
}

TEST_CASE("behavior json round trip is bit stable") {
    Behavior P = p_bsm(0.987);
    Behavior Q = Behavior::from_json(P.to_json());
    CHECK(P.scen == Q.scen);
    for (size_t i = 0; i < P.p.size(); ++i) CHECK(P.p[i] == Q.p[i]);
}

TEST_CASE("model validation catches broken families") {
    QuantumModel m = bsm_model(1.0);
    CHECK_NOTHROW(m.validate());
    m.alice[0][0] *= 0.5;
    CHECK_THROWS(m.validate());
}
