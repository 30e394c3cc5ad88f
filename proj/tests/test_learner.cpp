#include <catch2/catch_amalgamated.hpp>

#include "qfa/learner.hpp"
#include "qfa/serialize.hpp"
#include "qfa/verify.hpp"

using namespace qfa;

TEST_CASE("learn_rfa on a one-state one-symbol target") {
    Rfa target;
    target.n = 1;
    target.initial_state = 0;
    target.alphabet = Alphabet("a");
    target.delta['a'] = {0};
    target.accepting = {0};
    SimulatedRfaOracle oracle(target);
    RfaLearnResult r = learn_rfa(oracle, target.alphabet, target.accepting);
    CHECK(r.report.distinct_queries == 2);  // epsilon and "a"
    CHECK(r.hypothesis.n == 1);
    CHECK(r.hypothesis.delta.at('a') == std::vector<std::size_t>{0});
    CHECK(r.hypothesis.accepting == std::vector<std::size_t>{0});
}

TEST_CASE("learn_rfa stays within the query bound and agrees with the target") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        std::size_t n = 2 + seed;
        Alphabet ab(seed % 2 ? "ab" : "abc");
        Rfa target = gen_random_rfa(n, ab, 200 + seed);
        SimulatedRfaOracle oracle(target);
        RfaLearnResult r = learn_rfa(oracle, ab, target.accepting);
        CHECK(r.report.distinct_queries <= n * ab.size() + 1);
        VerifyConfig cfg;
        cfg.max_exhaustive_len = 6;
        cfg.random_trials = 200;
        cfg.seed = seed;
        VerifyReport vr = verify_rfa(target, r.hypothesis, cfg);
        CHECK(vr.passed);
        CHECK(vr.max_probability_deviation == 0.0);
    }
}

TEST_CASE("learn_rfa reconstructs only the reachable orbit") {
    // States 2 and 3 are unreachable from 0: delta maps {0,1} onto {0,1}.
    Rfa target;
    target.n = 4;
    target.initial_state = 0;
    target.alphabet = Alphabet("a");
    target.delta['a'] = {1, 0, 3, 2};
    target.accepting = {1, 2};
    SimulatedRfaOracle oracle(target);
    RfaLearnResult r = learn_rfa(oracle, target.alphabet, target.accepting);
    CHECK(r.hypothesis.n == 2);
    VerifyConfig cfg;
    cfg.max_exhaustive_len = 6;
    cfg.random_trials = 100;
    CHECK(verify_rfa(target, r.hypothesis, cfg).passed);
}

TEST_CASE("learn_rfa rejects a non-basis oracle") {
    MoQfa qtarget = gen_random_mo(3, Alphabet("ab"), 30);
    SimulatedMoOracle oracle(qtarget);
    CHECK_THROWS_AS(learn_rfa(oracle, qtarget.alphabet, {0}), NonBasisReply);
}

TEST_CASE("learn_mo on a one-state target") {
    Alphabet ab("ab");
    MoQfa target = gen_random_mo(1, ab, 31);
    SimulatedMoOracle oracle(target);
    MoLearnResult r = learn_mo(oracle, 1, ab, target.accepting, target.rejecting);
    REQUIRE(r.hypothesis.has_value());
    CHECK(r.report.basis_size == 1);
    CHECK(r.report.distinct_queries == 1 + ab.size());
    // The 1x1 unitary is exactly the phase the oracle exposes on one symbol.
    Complex psi0 = target.initial[0];
    for (char c : ab.symbols) {
        Complex want = target.unitaries.at(c)(0, 0);
        Complex got = r.hypothesis->unitaries.at(c)(0, 0);
        CHECK(std::abs(got * psi0 - want * psi0) <= 1e-12);
    }
}

TEST_CASE("learn_mo recovers the rotation machine's language") {
    MoQfa target = make_rotation_mo(std::numbers::pi / 4.0);
    SimulatedMoOracle oracle(target);
    MoLearnResult r = learn_mo(oracle, 2, target.alphabet, target.accepting, target.rejecting);
    REQUIRE(r.hypothesis.has_value());
    for (int k = 0; k <= 8; ++k) {
        double want = std::pow(std::cos(k * std::numbers::pi / 4.0), 2);
        CHECK(mo_accept_prob(*r.hypothesis, std::string(k, 'a')) ==
              Catch::Approx(want).margin(1e-9));
    }
}

TEST_CASE("learn_mo reproduces every trajectory of random targets") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        std::size_t n = 1 + seed % 6;
        Alphabet ab(seed % 2 ? "ab" : "abc");
        MoQfa target = gen_random_mo(n, ab, 300 + seed);
        SimulatedMoOracle oracle(target);
        MoLearnResult r = learn_mo(oracle, n, ab, target.accepting, target.rejecting);
        REQUIRE(r.hypothesis.has_value());
        CHECK(r.report.outcome == Outcome::Learned);
        CHECK(r.report.basis_size <= n);
        CHECK(r.report.distinct_queries <= 1 + n * ab.size());
        CHECK(r.report.max_unitarity_defect <= 1e-8);
        CHECK(r.report.max_constraint_residual <= 1e-10);

        VerifyConfig cfg;
        cfg.random_trials = 300;
        cfg.random_max_len = 50;
        cfg.seed = seed;
        VerifyReport vr = verify_mo(target, *r.hypothesis, cfg);
        CHECK(vr.passed);
        CHECK(vr.max_trajectory_deviation <= 1e-8);
        CHECK(vr.max_probability_deviation <= 1e-8);
    }
}

TEST_CASE("learn_mo is deterministic") {
    Alphabet ab("ab");
    MoQfa target = gen_random_mo(4, ab, 32);
    SimulatedMoOracle o1(target), o2(target);
    MoLearnResult a = learn_mo(o1, 4, ab, target.accepting, target.rejecting);
    MoLearnResult b = learn_mo(o2, 4, ab, target.accepting, target.rejecting);
    REQUIRE(a.hypothesis.has_value());
    REQUIRE(b.hypothesis.has_value());
    CHECK(a.hypothesis->initial == b.hypothesis->initial);
    for (char c : ab.symbols)
        CHECK(a.hypothesis->unitaries.at(c) == b.hypothesis->unitaries.at(c));
}

TEST_CASE("learn_mm with every state going reduces to the measure-once search") {
    Alphabet ab("ab");
    MmQfa target = gen_random_mm(4, ab, 33);
    target.accepting = {};
    target.rejecting = {};
    target.going = {0, 1, 2, 3};

    MoQfa mo_view;
    mo_view.n = target.n;
    mo_view.alphabet = ab;
    mo_view.initial = target.initial;
    for (char c : ab.symbols) mo_view.unitaries.emplace(c, target.unitaries.at(c));
    mo_view.accepting = {0, 1, 2, 3};
    mo_view.rejecting = {};

    SimulatedMmOracle mm_oracle(target);
    SimulatedMoOracle mo_oracle(mo_view);
    MmLearnResult mm = learn_mm(mm_oracle, 4, ab, target.accepting, target.rejecting,
                                target.going);
    MoLearnResult mo = learn_mo(mo_oracle, 4, ab, mo_view.accepting, mo_view.rejecting);
    REQUIRE(mm.hypothesis.has_value());
    REQUIRE(mo.hypothesis.has_value());
    CHECK(mm.report.basis_size == mo.report.basis_size);
    // Identical plain-symbol constraint systems: the learned U(sigma) agree.
    for (char c : ab.symbols)
        CHECK(mm.hypothesis->unitaries.at(c) == mo.hypothesis->unitaries.at(c));
}

TEST_CASE("learn_mm handles targets that halt immediately") {
    // psi0 sits entirely outside the going class, so every projected
    // constraint vector is zero and any unitary completion is equivalent.
    MmQfa target;
    target.n = 2;
    target.alphabet = Alphabet("a");
    target.initial = basis_vector(2, 1);
    Rng rng(8);
    target.unitaries.emplace('a', haar_unitary(2, rng));
    target.unitaries.emplace('$', haar_unitary(2, rng));
    target.accepting = {1};
    target.rejecting = {};
    target.going = {0};

    SimulatedMmOracle oracle(target);
    MmLearnResult r = learn_mm(oracle, 2, target.alphabet, target.accepting,
                               target.rejecting, target.going);
    REQUIRE(r.hypothesis.has_value());
    VerifyConfig cfg;
    cfg.random_trials = 200;
    CHECK(verify_mm(target, *r.hypothesis, cfg).passed);
}

TEST_CASE("learn_mm reproduces trajectories, probabilities and query bounds") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        std::size_t n = 1 + seed % 6;
        Alphabet ab(seed % 2 ? "ab" : "abc");
        MmQfa target = gen_random_mm(n, ab, 400 + seed);
        SimulatedMmOracle oracle(target);
        MmLearnResult r = learn_mm(oracle, n, ab, target.accepting, target.rejecting,
                                   target.going);
        REQUIRE(r.hypothesis.has_value());
        CHECK(r.report.outcome == Outcome::Learned);
        CHECK(r.report.basis_size <= n);
        CHECK(r.report.distinct_queries <= 2 + n * (ab.size() + 1));
        CHECK(r.report.max_unitarity_defect <= 1e-8);
        CHECK(r.report.max_constraint_residual <= 1e-10);

        VerifyConfig cfg;
        cfg.random_trials = 300;
        cfg.seed = seed;
        VerifyReport vr = verify_mm(target, *r.hypothesis, cfg);
        CHECK(vr.passed);
    }
}

TEST_CASE("learn_mm is deterministic") {
    Alphabet ab("ab");
    MmQfa target = gen_random_mm(3, ab, 34);
    SimulatedMmOracle o1(target), o2(target);
    MmLearnResult a = learn_mm(o1, 3, ab, target.accepting, target.rejecting, target.going);
    MmLearnResult b = learn_mm(o2, 3, ab, target.accepting, target.rejecting, target.going);
    REQUIRE(a.hypothesis.has_value());
    REQUIRE(b.hypothesis.has_value());
    CHECK(to_json(*a.hypothesis) == to_json(*b.hypothesis));
}

namespace {

// Scripted oracle for exercising the not-exist paths: replies come from a
// fixed table, defaulting to the zero vector.
class ScriptedOracle final : public AdOracle {
public:
    ScriptedOracle(std::size_t dim, Alphabet alphabet,
                   std::map<std::string, CVector> replies)
        : dim_(dim), alphabet_(std::move(alphabet)), replies_(std::move(replies)) {}

    std::size_t dim() const override { return dim_; }
    const Alphabet& alphabet() const override { return alphabet_; }

protected:
    CVector evaluate(const std::string& x) const override {
        auto it = replies_.find(x);
        return it == replies_.end() ? CVector(dim_, Complex{0.0, 0.0}) : it->second;
    }

private:
    std::size_t dim_;
    Alphabet alphabet_;
    std::map<std::string, CVector> replies_;
};

}  // namespace

TEST_CASE("learn_mo returns not-exist on inconsistent replies") {
    // Replies force V(a) e0 = e1 but V(a) e1 = e0 / 2: no unitary shrinks norm.
    Alphabet ab("a");
    ScriptedOracle oracle(2, ab,
                          {{"", basis_vector(2, 0)},
                           {"a", basis_vector(2, 1)},
                           {"aa", {Complex{0.5, 0.0}, Complex{0.0, 0.0}}}});
    MoLearnResult r = learn_mo(oracle, 2, ab, {0}, {1});
    CHECK(r.report.outcome == Outcome::NotExist);
    CHECK_FALSE(r.hypothesis.has_value());
    CHECK(r.report.basis_size == 2);
}

TEST_CASE("learn_mm returns not-exist on an inconsistent dependent projection") {
    // Entry "a" projects to zero under P(g), so its image must be zero too;
    // a non-zero reply for "aa" contradicts every unitary.
    Alphabet ab("a");
    ScriptedOracle oracle(2, ab,
                          {{"", basis_vector(2, 0)},
                           {"a", basis_vector(2, 1)},
                           {"aa", basis_vector(2, 0)},
                           {"$", basis_vector(2, 1)}});
    MmLearnResult r = learn_mm(oracle, 2, ab, {1}, {}, {0});
    CHECK(r.report.outcome == Outcome::NotExist);
    CHECK_FALSE(r.hypothesis.has_value());
}

TEST_CASE("learned hypotheses pass the machine audit") {
    Alphabet ab("ab");
    MoQfa mo_target = gen_random_mo(5, ab, 35);
    SimulatedMoOracle mo_oracle(mo_target);
    MoLearnResult mo = learn_mo(mo_oracle, 5, ab, mo_target.accepting, mo_target.rejecting);
    REQUIRE(mo.hypothesis.has_value());
    CHECK(audit(*mo.hypothesis).empty());

    MmQfa mm_target = gen_random_mm(5, ab, 36);
    SimulatedMmOracle mm_oracle(mm_target);
    MmLearnResult mm = learn_mm(mm_oracle, 5, ab, mm_target.accepting, mm_target.rejecting,
                                mm_target.going);
    REQUIRE(mm.hypothesis.has_value());
    CHECK(audit(*mm.hypothesis).empty());
}
