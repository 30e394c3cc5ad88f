#include <catch2/catch_amalgamated.hpp>

#include "qfa/oracle.hpp"

using namespace qfa;

TEST_CASE("SimulatedMoOracle answers the hidden initial state on epsilon") {
    MoQfa target = gen_random_mo(4, Alphabet("ab"), 20);
    SimulatedMoOracle oracle(target);
    CHECK(oracle.query("") == target.initial);
    CHECK(oracle.dim() == 4);
}

TEST_CASE("query counters: distinct versus raw") {
    SimulatedMoOracle oracle(gen_random_mo(3, Alphabet("ab"), 21));
    CHECK(oracle.distinct_queries() == 0);
    CHECK(oracle.raw_queries() == 0);
    oracle.query("");
    oracle.query("");
    CHECK(oracle.distinct_queries() == 1);
    CHECK(oracle.raw_queries() == 2);
    oracle.query("a");
    CHECK(oracle.distinct_queries() == 2);
    CHECK(oracle.raw_queries() == 3);
}

TEST_CASE("repeated queries return identical vectors") {
    SimulatedMmOracle oracle(gen_random_mm(4, Alphabet("ab"), 22));
    CVector a = oracle.query("ab");
    CVector b = oracle.query("ab");
    CHECK(a == b);
}

TEST_CASE("MO oracle satisfies the one-step recurrence") {
    MoQfa target = gen_random_mo(5, Alphabet("ab"), 23);
    SimulatedMoOracle oracle(target);
    Rng rng(1);
    for (int t = 0; t < 20; ++t) {
        std::string x;
        for (std::size_t i = rng.index(8); i > 0; --i)
            x += target.alphabet.symbols[rng.index(2)];
        char c = target.alphabet.symbols[rng.index(2)];
        CVector want = target.unitaries.at(c).apply(oracle.query(x));
        CVector got = oracle.query(x + c);
        axpy(want, Complex{-1.0, 0.0}, got);
        CHECK(norm(want) <= 1e-12);
    }
}

TEST_CASE("MM oracle applies the going projector before each step") {
    MmQfa target = gen_random_mm(5, Alphabet("ab"), 24);
    SimulatedMmOracle oracle(target);
    auto going_mask = detail::index_mask(target.n, target.going);
    Rng rng(2);
    std::string working = target.alphabet.symbols + target.alphabet.end_marker;
    for (int t = 0; t < 20; ++t) {
        std::string x;
        for (std::size_t i = rng.index(8); i > 0; --i)
            x += target.alphabet.symbols[rng.index(2)];
        char c = working[rng.index(working.size())];
        CVector want = oracle.query(x);
        detail::project_in_place(want, going_mask);
        want = target.unitaries.at(c).apply(want);
        CVector got = oracle.query(x + c);
        axpy(want, Complex{-1.0, 0.0}, got);
        CHECK(norm(want) <= 1e-12);
    }
}

TEST_CASE("MM oracle answers the end-marker query") {
    MmQfa target = gen_random_mm(3, Alphabet("ab"), 25);
    SimulatedMmOracle oracle(target);
    auto going_mask = detail::index_mask(target.n, target.going);
    CVector want = target.initial;
    detail::project_in_place(want, going_mask);
    want = target.unitaries.at('$').apply(want);
    CVector got = oracle.query("$");
    axpy(want, Complex{-1.0, 0.0}, got);
    CHECK(norm(want) <= 1e-14);
}

TEST_CASE("MM oracle rejects malformed query strings") {
    SimulatedMmOracle oracle(gen_random_mm(3, Alphabet("ab"), 26));
    CHECK_THROWS_AS(oracle.query("a$b"), IllegalQueryString);
    CHECK_THROWS_AS(oracle.query("$$"), IllegalQueryString);
    CHECK_THROWS_AS(oracle.query("az"), IllegalQueryString);
    CHECK_NOTHROW(oracle.query("ab$"));
}

TEST_CASE("MO oracle rejects unknown symbols") {
    SimulatedMoOracle oracle(gen_random_mo(3, Alphabet("ab"), 27));
    CHECK_THROWS_AS(oracle.query("c"), UnknownSymbol);
}

TEST_CASE("RFA oracle replies with basis vectors") {
    Rfa target = gen_random_rfa(5, Alphabet("ab"), 28);
    SimulatedRfaOracle oracle(target);
    for (const char* x : {"", "a", "ab", "bba"}) {
        CVector v = oracle.query(x);
        CHECK(v == basis_vector(5, rfa_run(target, x)));
    }
}

TEST_CASE("accepting-amplitudes wrapper zeroes the rest of the reply") {
    MoQfa target = gen_random_mo(4, Alphabet("ab"), 29);
    target.accepting = {1, 3};
    target.rejecting = {0, 2};
    SimulatedMoOracle ad(target);
    AaOracle aa(ad, target.accepting);
    CVector v = aa.query("ab");
    CVector full = ad.query("ab");
    CHECK(v[0] == Complex{0.0, 0.0});
    CHECK(v[2] == Complex{0.0, 0.0});
    CHECK(v[1] == full[1]);
    CHECK(v[3] == full[3]);
}
