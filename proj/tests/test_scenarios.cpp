#include <catch2/catch_amalgamated.hpp>

#include "qrf/scenarios.hpp"
#include "test_util.hpp"

using namespace qrf;

TEST_CASE("phase reference closed form", "[scenarios]") {
    const ClosedFormReference r1 = phase_reference(1);
    CHECK(std::abs(r1.mixing_p - 0.5) < 1e-15);
    CHECK(std::abs(r1.p_perfect - 0.5) < 1e-15);

    CHECK(std::abs(phase_reference(1000).mixing_p - 1.0 / 1001) < 1e-18);

    // Off-diagonal factor N_R/(N_R+1) on |+><+|.
    for (int nr : {1, 3, 7}) {
        const ClosedFormReference ref = phase_reference(nr);
        const Matrix out = apply(ref.channel, pure_state({M_SQRT1_2, M_SQRT1_2}));
        CHECK(std::abs(out(0, 1).real() - 0.5 * nr / (nr + 1)) < 1e-14);
        CHECK(std::abs(out(0, 1).imag()) < 1e-15);
    }
    CHECK_THROWS_AS(phase_reference(0), std::invalid_argument);
}

TEST_CASE("cartesian frame closed form", "[scenarios]") {
    const ClosedFormReference r1 = cartesian_frame(1);
    CHECK(std::abs(r1.mixing_p - 0.5) < 1e-15);
    CHECK(std::abs(r1.p_perfect - 0.4) < 1e-15);
    REQUIRE(r1.sector_probs.size() == 2);
    const Matrix any = pure_state({0.6, 0.8});
    CHECK(std::abs(r1.sector_probs[0].second.eval(any) - 0.4) < 1e-14);
    CHECK(std::abs(r1.sector_probs[1].second.eval(any) - 0.6) < 1e-14);

    // j_R = 3: every Bloch component scales by 3/4.
    const BlochMap bm = bloch_map(cartesian_frame(3).channel);
    for (int a = 0; a < 3; ++a) {
        CHECK(std::abs(bm.shift[size_t(a)]) < 1e-14);
        for (int b = 0; b < 3; ++b)
            CHECK(std::abs(bm.scale[size_t(a)][size_t(b)] - (a == b ? 0.75 : 0.0)) < 1e-12);
    }

    // Sector probabilities sum to one.
    for (int jr = 1; jr <= 6; ++jr) {
        double s = 0;
        for (const auto& [q, form] : cartesian_frame(jr).sector_probs) s += form.eval(any);
        CHECK(std::abs(s - 1.0) < 1e-12);
    }
    CHECK_THROWS_AS(cartesian_frame(0), std::invalid_argument);
}

TEST_CASE("direction indicator closed form", "[scenarios]") {
    // j_R = 1/2: Bloch map diag(0, 0, 1/3).
    const BlochMap bm = bloch_map(direction_indicator(1).channel);
    for (int a = 0; a < 3; ++a) {
        CHECK(std::abs(bm.shift[size_t(a)]) < 1e-14);
        for (int b = 0; b < 3; ++b) {
            const double want = (a == 2 && b == 2) ? 1.0 / 3.0 : 0.0;
            CHECK(std::abs(bm.scale[size_t(a)][size_t(b)] - want) < 1e-12);
        }
    }

    // Sector scalars at j_R = 1/2, rho = |0><0|: upper 1, lower 0.
    const ClosedFormReference ref = direction_indicator(1);
    const Matrix p0 = pure_state({1, 0});
    REQUIRE(ref.sector_probs.size() == 2);
    CHECK(std::abs(ref.sector_probs[0].second.eval(p0) - 0.0) < 1e-15);  // J = j_R - 1/2
    CHECK(std::abs(ref.sector_probs[1].second.eval(p0) - 1.0) < 1e-15);  // J = j_R + 1/2

    // Repreparation at J = j_R + 1/2, j_R = 1: (3/4)|0><0| + (1/4)|1><1|.
    const ClosedFormReference r2 = direction_indicator(2);
    REQUIRE(r2.repreparation.size() == 2);
    CHECK(r2.repreparation[1].first.value == 3);
    CHECK(std::abs(r2.repreparation[1].second(0, 0) - cplx(0.75)) < 1e-15);
    CHECK(std::abs(r2.repreparation[1].second(1, 1) - cplx(0.25)) < 1e-15);
    CHECK(std::abs(r2.repreparation[0].second(1, 1) - cplx(1)) < 1e-15);

    CHECK(direction_indicator(5).p_perfect == 0.0);
}

TEST_CASE("codec reproduces the direction repreparation states", "[scenarios]") {
    auto gen = test::rng(81);
    for (int two_jr : {1, 2, 3}) {
        const SectorMap map =
            sector_map(TokenSpec::su2_coherent(two_jr), SystemSpec::su2_qubit());
        const ClosedFormReference ref = direction_indicator(two_jr);
        const Matrix rho = test::random_density(gen, 2);
        const auto outcomes = postselect_enumerate(map, encode_block(map, rho).assembled);
        REQUIRE(outcomes.size() == 2);
        for (size_t i = 0; i < 2; ++i) {
            CHECK(outcomes[i].outcome == ref.repreparation[i].first);
            CHECK(std::abs(outcomes[i].probability - ref.sector_probs[i].second.eval(rho)) <
                  1e-10);
            if (outcomes[i].probability > 1e-12)
                CHECK((outcomes[i].state - ref.repreparation[i].second).max_abs() < 1e-12);
        }
    }
}

TEST_CASE("optimal direction decoder", "[scenarios]") {
    // Posteriors at j_R = 1: p(0|+) = 3/4, p(1|+) = 1/4, p(1|-) = 1.
    {
        const int two_jr = 2;
        const SectorMap map =
            sector_map(TokenSpec::su2_coherent(two_jr), SystemSpec::su2_qubit());
        // Uniform prior over |0>, |1>: joint outcome probabilities.
        const auto out0 = postselect_enumerate(map, encode_block(map, pure_state({1, 0})).assembled);
        const auto out1 = postselect_enumerate(map, encode_block(map, pure_state({0, 1})).assembled);
        const double p_plus_0 = out0[1].probability, p_plus_1 = out1[1].probability;
        const double post00 = 0.5 * p_plus_0 / (0.5 * p_plus_0 + 0.5 * p_plus_1);
        CHECK(std::abs(post00 - 0.75) < 1e-12);
        CHECK(std::abs(1.0 - post00 - 0.25) < 1e-12);
        CHECK(std::abs(out0[0].probability) < 1e-12);  // p(-|0) = 0, so p(1|-) = 1
    }

    // On input |1><1| the optimal decoder returns the exact branch mixture:
    // '+' occurs with probability 1/(2 j_R + 1) and reprepares |0><0|.
    for (int two_jr : {1, 2, 4}) {
        const SectorMap map =
            sector_map(TokenSpec::su2_coherent(two_jr), SystemSpec::su2_qubit());
        const KrausChannel opt = direction_optimal_decoder(two_jr);
        CHECK((opt.kraus_sum() - Matrix::identity(opt.in_dim)).frobenius_norm() < 1e-10);
        const Matrix enc1 = encode_block(map, pure_state({0, 1})).assembled;
        const Matrix out = apply(opt, enc1);
        const double p_plus = 1.0 / (two_jr + 1);
        CHECK(std::abs(out(0, 0).real() - p_plus) < 1e-10);
        CHECK(std::abs(out(1, 1).real() - (1.0 - p_plus)) < 1e-10);
    }

    // Average fidelity on the uniform {|0>,|1>} ensemble beats the adjoint
    // decoder for every tested size.
    for (int two_jr = 1; two_jr <= 8; ++two_jr) {
        const SectorMap map =
            sector_map(TokenSpec::su2_coherent(two_jr), SystemSpec::su2_qubit());
        const KrausChannel opt = direction_optimal_decoder(two_jr);
        double f_opt = 0, f_adj = 0;
        for (int bit = 0; bit < 2; ++bit) {
            const Matrix psi = bit ? pure_state({0, 1}) : pure_state({1, 0});
            const Matrix enc = encode_block(map, psi).assembled;
            f_opt += 0.5 * (psi * apply(opt, enc)).trace().real();
            f_adj += 0.5 * (psi * decode_relational(map, enc)).trace().real();
        }
        // Closed forms from branch enumeration: (4j+1)/(4j+2) vs (2j+1)/(2j+2).
        CHECK(std::abs(f_opt - (2.0 * two_jr + 1) / (2.0 * two_jr + 2)) < 1e-10);
        CHECK(std::abs(f_adj - (two_jr + 1.0) / (two_jr + 2.0)) < 1e-10);
        CHECK(f_opt > f_adj);
    }
}

TEST_CASE("mixing weight is 1/(size+1) and fidelity approaches 1", "[scenarios]") {
    for (int n = 1; n <= 8; ++n)
        CHECK(std::abs(phase_reference(n).mixing_p - 1.0 / (n + 1)) < 1e-15);
    for (int j = 1; j <= 4; ++j)
        CHECK(std::abs(cartesian_frame(j).mixing_p - 1.0 / (j + 1)) < 1e-15);
    for (int tj = 1; tj <= 8; ++tj)
        CHECK(std::abs(direction_indicator(tj).mixing_p - 1.0 / (tj / 2.0 + 1)) < 1e-15);

    double prev = 0;
    for (int n = 1; n <= 20; ++n) {
        const double f = entanglement_fidelity(phase_reference(n).channel);
        CHECK(f > prev);
        prev = f;
    }
    prev = 0;
    for (int j = 1; j <= 20; ++j) {
        const double f = entanglement_fidelity(cartesian_frame(j).channel);
        CHECK(f > prev);
        prev = f;
    }
}

TEST_CASE("p_perfect formulas match the codec exactly", "[scenarios]") {
    for (int n = 1; n <= 6; ++n)
        CHECK(std::abs(phase_reference(n).p_perfect -
                       p_perfect(sector_map(TokenSpec::u1_regular(n), SystemSpec::u1_qubit()))) <
              1e-12);
    for (int j = 1; j <= 3; ++j)
        CHECK(std::abs(cartesian_frame(j).p_perfect -
                       p_perfect(sector_map(TokenSpec::su2_regular(j), SystemSpec::su2_qubit()))) <
              1e-12);
}

TEST_CASE("verify passes on the paper grid", "[scenarios]") {
    CHECK(verify(ScenarioId::phase(4), 1e-9).pass);
    CHECK(verify(ScenarioId::cartesian(2), 1e-8).pass);
    CHECK(verify(ScenarioId::direction(1), 1e-8).pass);
    CHECK_FALSE(verify(ScenarioId::phase(2), 1e-16).pass);
    CHECK_THROWS_AS(verify(ScenarioId::phase(2), 0.0), std::invalid_argument);
}
