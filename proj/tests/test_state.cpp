#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qreservoir/state.hpp"

using namespace qrc;
using qrc::testing::apply_full_matrix;
using qrc::testing::embed_unitary;
using qrc::testing::within_sigma;

namespace {

constexpr double kSqrtHalf = 0.70710678118654752440;

// Deterministic arbitrary-state construction: prepare from |0...0> takes the
// zero branch of every reset with certainty.
StateVector make_state(int n_qubits, std::vector<cplx> amps) {
    StateVector st(n_qubits);
    RngStream rng(0, 0);
    std::vector<int> all(n_qubits);
    for (int i = 0; i < n_qubits; ++i) all[i] = i;
    st.prepare(all, amps, rng);
    return st;
}

StateVector bell_state() {
    StateVector st(2);
    st.apply_unitary(gates::h(), {0});
    st.apply_unitary(gates::cx(), {0, 1});
    return st;
}

}  // namespace

TEST_CASE("zero state definition and capacity bounds") {
    StateVector one(1);
    CHECK(one.amp(0) == cplx{1, 0});
    CHECK(one.amp(1) == cplx{0, 0});

    StateVector two(2);
    CHECK(two.dim() == 4);
    CHECK(two.amp(0) == cplx{1, 0});
    for (std::size_t i = 1; i < 4; ++i) CHECK(two.amp(i) == cplx{0, 0});

    CHECK_THROWS_AS(StateVector(25), CapacityError);
    CHECK_THROWS_AS(StateVector(0), CapacityError);
}

TEST_CASE("hadamard on |0>") {
    StateVector st(1);
    st.apply_unitary(gates::h(), {0});
    CHECK(st.amp(0).real() == doctest::Approx(kSqrtHalf).epsilon(1e-12));
    CHECK(st.amp(1).real() == doctest::Approx(kSqrtHalf).epsilon(1e-12));
}

TEST_CASE("X on qubit 1 flips the second-least-significant index bit") {
    StateVector st(2);
    st.apply_unitary(gates::x(), {1});
    CHECK(st.amp(2) == cplx{1, 0});
    CHECK(st.amp(0) == cplx{0, 0});
}

TEST_CASE("bell construction H then CX(control=0, target=1)") {
    StateVector st = bell_state();
    CHECK(std::abs(st.amp(0) - cplx{kSqrtHalf, 0}) < 1e-12);
    CHECK(std::abs(st.amp(3) - cplx{kSqrtHalf, 0}) < 1e-12);
    CHECK(std::abs(st.amp(1)) < 1e-12);
    CHECK(std::abs(st.amp(2)) < 1e-12);
}

TEST_CASE("apply_unitary rejects bad targets and non-unitary payloads") {
    StateVector st(2);
    CHECK_THROWS_AS(st.apply_unitary(gates::cx(), {0, 0}), IndexError);
    CHECK_THROWS_AS(st.apply_unitary(gates::h(), {5}), IndexError);
    CHECK_THROWS_AS(st.apply_unitary(gates::cx(), {0}), IndexError);
    CHECK_THROWS_AS(UnitaryMatrix(1, {1.0, 1.0, 0.0, 1.0}), ValidationError);
}

TEST_CASE("born probabilities marginals") {
    StateVector zero(1);
    auto p = zero.probabilities({0});
    CHECK(p[0] == doctest::Approx(1.0));
    CHECK(p[1] == doctest::Approx(0.0));

    StateVector bell = bell_state();
    p = bell.probabilities({0});
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-12));

    p = bell.probabilities({0, 1});
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.0));
    CHECK(p[2] == doctest::Approx(0.0));
    CHECK(p[3] == doctest::Approx(0.5).epsilon(1e-12));

    // Outcome bit j follows the listed order: qubit 1 first puts its bit at
    // position 0.
    StateVector flipped(2);
    flipped.apply_unitary(gates::x(), {1});
    p = flipped.probabilities({1, 0});
    CHECK(p[1] == doctest::Approx(1.0));
}

TEST_CASE("measurement of a definite state is deterministic") {
    StateVector st(1);
    st.apply_unitary(gates::x(), {0});
    RngStream rng(7, 0);
    auto bits = st.measure({0}, rng);
    CHECK(bits == std::vector<int>{1});
    CHECK(std::abs(st.amp(1) - cplx{1, 0}) < 1e-12);
}

TEST_CASE("bell measurement statistics match the born oracle") {
    const StateVector bell = bell_state();
    const std::int64_t trials = 100000;
    std::int64_t ones = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
        StateVector st = bell;
        RngStream rng(42, static_cast<std::uint64_t>(t));
        auto bits = st.measure({0, 1}, rng);
        CHECK(bits[0] == bits[1]);  // only 00 and 11 occur
        ones += bits[0];
    }
    const double freq = static_cast<double>(ones) / static_cast<double>(trials);
    CHECK(within_sigma(freq, 0.5, trials, 3.0));
}

TEST_CASE("measurement is idempotent after collapse") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        StateVector st(3);
        RngStream gen(seed, 99);
        st.apply_unitary(haar_random_unitary(3, gen), {0, 1, 2});
        RngStream rng(seed, 1);
        auto first = st.measure({0, 2}, rng);
        auto second = st.measure({0, 2}, rng);
        CHECK(first == second);
    }
}

TEST_CASE("reset maps |1> and superpositions to |0>") {
    StateVector st(1);
    st.apply_unitary(gates::x(), {0});
    RngStream rng(1, 0);
    st.reset(0, rng);
    CHECK(std::abs(st.amp(0) - cplx{1, 0}) < 1e-12);

    for (std::uint64_t t = 0; t < 50; ++t) {
        StateVector plus(1);
        plus.apply_unitary(gates::h(), {0});
        RngStream r(3, t);
        plus.reset(0, r);
        CHECK(plus.probabilities({0})[1] == doctest::Approx(0.0));
    }
}

TEST_CASE("reset branch statistics on a bell pair") {
    // Enumerating the two collapse branches: q0 measures 0 -> |00>, or 1 ->
    // |11> then X gives |10>. P(q1 = 1 afterwards) is 0 or 1, each branch at
    // frequency 1/2.
    const StateVector bell = bell_state();
    const std::int64_t trials = 100000;
    std::int64_t partner_one = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
        StateVector st = bell;
        RngStream rng(5, static_cast<std::uint64_t>(t));
        st.reset(0, rng);
        const auto p = st.probabilities({1});
        CHECK((p[1] == doctest::Approx(0.0) || p[1] == doctest::Approx(1.0)));
        if (p[1] > 0.5) ++partner_one;
    }
    const double freq = static_cast<double>(partner_one) / static_cast<double>(trials);
    CHECK(within_sigma(freq, 0.5, trials, 3.0));
}

TEST_CASE("prepare on a subset") {
    {
        StateVector st(2);
        RngStream rng(0, 0);
        st.prepare({0}, {cplx{0, 0}, cplx{1, 0}}, rng);
        CHECK(std::abs(st.amp(1) - cplx{1, 0}) < 1e-12);
    }
    {
        StateVector st(1);
        st.apply_unitary(gates::h(), {0});
        RngStream rng(0, 1);
        st.prepare({0}, {cplx{1, 0}, cplx{0, 0}}, rng);
        CHECK(std::abs(st.amp(0) - cplx{1, 0}) < 1e-12);
    }
    {
        StateVector st(2);
        RngStream rng(0, 2);
        st.prepare({0, 1}, {0.5, 0.5, 0.5, 0.5}, rng);
        const auto p = st.probabilities({0, 1});
        for (int o = 0; o < 4; ++o) CHECK(p[o] == doctest::Approx(0.25).epsilon(1e-12));
    }
    {
        StateVector st(1);
        RngStream rng(0, 3);
        CHECK_THROWS_AS(st.prepare({0}, {cplx{1, 0}, cplx{1, 0}}, rng), ValidationError);
    }
}

TEST_CASE("haar unitaries are reproducible, unitary, and column-normalized") {
    RngStream a(11, 3), b(11, 3);
    const UnitaryMatrix ua = haar_random_unitary(3, a);
    const UnitaryMatrix ub = haar_random_unitary(3, b);
    CHECK(ua.entries() == ub.entries());

    CHECK(ua.unitarity_error() < 1e-10);

    for (int c = 0; c < ua.dim(); ++c) {
        double n2 = 0.0;
        for (int r = 0; r < ua.dim(); ++r) n2 += std::norm(ua.at(r, c));
        CHECK(std::sqrt(n2) == doctest::Approx(1.0).epsilon(1e-10));
    }

    RngStream other(12, 3);
    CHECK(haar_random_unitary(3, other).entries() != ua.entries());
    CHECK_THROWS_AS(haar_random_unitary(11, a), CapacityError);
}

TEST_CASE("haar single-qubit |U00|^2 is uniform on average") {
    double acc = 0.0;
    const int samples = 10000;
    for (int s = 0; s < samples; ++s) {
        RngStream rng(2024, static_cast<std::uint64_t>(s));
        acc += std::norm(haar_random_unitary(1, rng).at(0, 0));
    }
    CHECK(acc / samples == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("depolarizing channel edge probabilities") {
    {
        StateVector st = bell_state();
        const StateVector before = st;
        RngStream rng(9, 0);
        st.apply_depolarizing(0, 0.0, rng);
        CHECK(st.amplitudes() == before.amplitudes());
    }
    {
        // p = 1 on |0>: X and Y flip, Z does not -> P(1) = 2/3.
        const std::int64_t trials = 100000;
        std::int64_t ones = 0;
        for (std::int64_t t = 0; t < trials; ++t) {
            StateVector st(1);
            RngStream rng(13, static_cast<std::uint64_t>(t));
            st.apply_depolarizing(0, 1.0, rng);
            ones += st.probabilities({0})[1] > 0.5 ? 1 : 0;
        }
        const double freq = static_cast<double>(ones) / static_cast<double>(trials);
        CHECK(within_sigma(freq, 2.0 / 3.0, trials, 3.0));
    }
    {
        StateVector st(1);
        RngStream rng(1, 1);
        for (int i = 0; i < 200; ++i) {
            st.apply_depolarizing(0, 0.1, rng);
            CHECK(st.norm_sq() == 1.0);  // paulis permute/phase amplitudes exactly
        }
        CHECK_THROWS_AS(st.apply_depolarizing(0, 1.5, rng), ValidationError);
    }
}

TEST_CASE("norm is preserved across random operation sequences") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        StateVector st(3);
        RngStream rng(seed, 0);
        RngStream gen(seed, 1);
        for (int step = 0; step < 30; ++step) {
            const double pick = rng.uniform();
            if (pick < 0.4) {
                const int k = 1 + static_cast<int>(rng.uniform() * 2.0);
                std::vector<int> targets;
                while (static_cast<int>(targets.size()) < k) {
                    const int q = static_cast<int>(rng.uniform() * 3.0);
                    bool dup = false;
                    for (int t : targets) dup = dup || t == q;
                    if (!dup) targets.push_back(q);
                }
                st.apply_unitary(haar_random_unitary(k, gen), targets);
            } else if (pick < 0.6) {
                st.measure({static_cast<int>(rng.uniform() * 3.0)}, rng);
            } else if (pick < 0.75) {
                st.reset(static_cast<int>(rng.uniform() * 3.0), rng);
            } else if (pick < 0.9) {
                st.prepare({static_cast<int>(rng.uniform() * 3.0)},
                           {cplx{0.6, 0.0}, cplx{0.0, 0.8}}, rng);
            } else {
                st.apply_depolarizing(static_cast<int>(rng.uniform() * 3.0), 0.5, rng);
            }
            CHECK(std::abs(st.norm_sq() - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("embedded application equals the dense full-register expansion") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        RngStream gen(seed, 7);
        const int n = 2 + static_cast<int>(gen.uniform() * 2.0);  // 2 or 3
        const int k = 1 + static_cast<int>(gen.uniform() * 2.0);  // 1 or 2
        std::vector<int> targets;
        while (static_cast<int>(targets.size()) < k) {
            const int q = static_cast<int>(gen.uniform() * n);
            bool dup = false;
            for (int t : targets) dup = dup || t == q;
            if (!dup) targets.push_back(q);
        }
        const UnitaryMatrix u = haar_random_unitary(k, gen);

        std::vector<cplx> amps(std::size_t{1} << n);
        double n2 = 0.0;
        for (cplx& a : amps) {
            a = cplx{gen.gaussian(), gen.gaussian()};
            n2 += std::norm(a);
        }
        for (cplx& a : amps) a /= std::sqrt(n2);

        StateVector st = make_state(n, amps);
        st.apply_unitary(u, targets);
        const std::vector<cplx> expected =
            apply_full_matrix(embed_unitary(u, targets, n), amps);
        for (std::size_t i = 0; i < expected.size(); ++i) {
            CHECK(std::abs(st.amp(i) - expected[i]) < 1e-10);
        }
    }
}

TEST_CASE("basis states take the same path as the dense expansion") {
    // exercises the single-support shortcut inside apply_unitary
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        RngStream gen(seed, 17);
        const UnitaryMatrix u = haar_random_unitary(2, gen);
        for (std::size_t basis = 0; basis < 8; ++basis) {
            StateVector st(3);
            for (int q = 0; q < 3; ++q) {
                if ((basis >> q) & 1u) st.apply_unitary(gates::x(), {q});
            }
            std::vector<cplx> amps(8, cplx{0, 0});
            amps[basis] = 1.0;
            st.apply_unitary(u, {2, 0});
            const auto expected = apply_full_matrix(embed_unitary(u, {2, 0}, 3), amps);
            for (std::size_t i = 0; i < 8; ++i) {
                CHECK(std::abs(st.amp(i) - expected[i]) < 1e-12);
            }
        }
    }
}

TEST_CASE("rng streams are reproducible and distinct") {
    RngStream a(123, 4), b(123, 4), c(123, 5);
    bool all_equal = true;
    for (int i = 0; i < 100; ++i) {
        const auto va = a.next_u64();
        all_equal = all_equal && va == b.next_u64();
        if (va != c.next_u64()) break;
    }
    CHECK(all_equal);
    CHECK(derive_seed(1, 2) == derive_seed(1, 2));
    CHECK(derive_seed(1, 2) != derive_seed(1, 3));
    CHECK(derive_seed(1, 2) != derive_seed(2, 2));
}

TEST_CASE("debug text renderings are stable") {
    CHECK(gates::x().to_text() == "+0.000000+0.000000i +1.000000+0.000000i\n"
                                  "+1.000000+0.000000i +0.000000+0.000000i\n");
    StateVector st(1);
    st.apply_unitary(gates::h(), {0});
    CHECK(st.to_text() == "0: +0.707107+0.000000i\n1: +0.707107+0.000000i\n");
}
