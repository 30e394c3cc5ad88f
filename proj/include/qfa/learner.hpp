#pragma once

#include <chrono>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "qfa/automata.hpp"
#include "qfa/linalg.hpp"
#include "qfa/oracle.hpp"

// Oracle-based learners. Each explores the reachable trajectory space
// breadth-first until the oracle replies stop being linearly independent,
// then solves for one unitary per symbol that reproduces every reply. The
// returned machine agrees with the hidden target on the trajectory of every
// string even when the matrices themselves differ (the completion on the
// unconstrained complement is arbitrary but deterministic).

namespace qfa {

struct NonBasisReply : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Outcome { Learned, NotExist };

struct LearnReport {
    std::size_t distinct_queries = 0;
    std::size_t raw_queries = 0;
    std::size_t basis_size = 0;
    double max_constraint_residual = 0.0;
    double max_unitarity_defect = 0.0;
    Outcome outcome = Outcome::Learned;
    double wall_time = 0.0;  // seconds
};

struct BasisEntry {
    std::string word;  // witness string x
    CVector reply;     // v*(x)
};

// Expansion of an inserted vector over the frame at insertion time:
// v = sum_k coeffs[k] * frame[k] + rnorm * frame[new].
struct GsRecipe {
    std::vector<Complex> coeffs;
    double rnorm = 0.0;
};

// Linearly independent oracle replies whose span contains every reachable
// trajectory vector. Entry j contributed frame vector j; entry 0 is always
// (epsilon, initial state).
struct BasisSet {
    std::vector<BasisEntry> entries;
    OrthoFrame frame;
    std::vector<GsRecipe> recipes;
};

namespace detail {

// Breadth-first basis search shared by the MO and MM learners: pop a witness
// string, fetch its reply, and when the reply leaves the current span, keep
// it and enqueue all one-symbol extensions (in alphabet order).
inline BasisSet collect_basis(AdOracle& oracle, double tol_rank) {
    BasisSet basis;
    basis.frame = OrthoFrame(oracle.dim());
    std::deque<std::string> frontier{std::string()};
    while (!frontier.empty()) {
        std::string x = std::move(frontier.front());
        frontier.pop_front();
        const CVector& v = oracle.query(x);
        ResidualResult r = residual(v, basis.frame);
        if (r.norm <= tol_rank) continue;
        CVector unit = r.vec;
        scale(unit, Complex{1.0 / r.norm, 0.0});
        basis.frame.basis.push_back(std::move(unit));
        basis.recipes.push_back({std::move(r.coefficients), r.norm});
        for (char c : oracle.alphabet().symbols) frontier.push_back(x + c);
        basis.entries.push_back({std::move(x), v});
    }
    return basis;
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

struct MoLearnResult {
    std::optional<MoQfa> hypothesis;
    LearnReport report;
};

// Learns an MO-1QFA equivalent to the oracle's hidden target. The state
// count and accept/reject partition are part of the problem instance; the
// initial state and one unitary per symbol are learned.
inline MoLearnResult learn_mo(AdOracle& oracle, std::size_t n, const Alphabet& alphabet,
                              std::vector<std::size_t> accepting,
                              std::vector<std::size_t> rejecting,
                              double tol_rank = kTolRank, double tol_iso = kTolIso) {
    auto t0 = std::chrono::steady_clock::now();
    MoLearnResult out;

    CVector psi0 = oracle.query("");
    BasisSet basis = detail::collect_basis(oracle, tol_rank);
    const std::size_t b = basis.entries.size();
    out.report.basis_size = b;

    MoQfa hyp;
    hyp.n = n;
    hyp.alphabet = alphabet;
    hyp.initial = psi0;
    hyp.accepting = std::move(accepting);
    hyp.rejecting = std::move(rejecting);

    try {
        for (char c : alphabet.symbols) {
            // Required images of the frame vectors, replaying each entry's
            // Gram-Schmidt recipe on the replies for the extended words:
            // frame[j] = (v_j - sum coeffs*frame)/rnorm forces
            // V*frame[j] = (v*(x_j c) - sum coeffs*images)/rnorm.
            std::vector<CVector> images;
            images.reserve(b);
            for (std::size_t j = 0; j < b; ++j) {
                CVector g = oracle.query(basis.entries[j].word + c);
                for (std::size_t k = 0; k < basis.recipes[j].coeffs.size(); ++k)
                    axpy(g, -basis.recipes[j].coeffs[k], images[k]);
                scale(g, Complex{1.0 / basis.recipes[j].rnorm, 0.0});
                images.push_back(std::move(g));
            }
            CMatrix v = complete_isometry(basis.frame, images, tol_iso, tol_rank);
            out.report.max_unitarity_defect =
                std::max(out.report.max_unitarity_defect, unitarity_defect(v));
            for (std::size_t j = 0; j < b; ++j) {
                CVector got = v.apply(basis.entries[j].reply);
                axpy(got, Complex{-1.0, 0.0}, oracle.query(basis.entries[j].word + c));
                out.report.max_constraint_residual =
                    std::max(out.report.max_constraint_residual, norm(got));
            }
            hyp.unitaries.emplace(c, std::move(v));
        }
        out.hypothesis = std::move(hyp);
    } catch (const IsometryViolation&) {
        out.report.outcome = Outcome::NotExist;
    }

    out.report.distinct_queries = oracle.distinct_queries();
    out.report.raw_queries = oracle.raw_queries();
    out.report.wall_time = detail::seconds_since(t0);
    return out;
}

struct MmLearnResult {
    std::optional<MmQfa> hypothesis;
    LearnReport report;
};

// Learns an MM-1QFA (including the end-marker unitary). The basis search
// runs over plain-alphabet strings exactly as in the MO case; the unitaries
// are constrained on the going-projected basis vectors, which can be
// linearly dependent or zero, so the constraint system is deduplicated
// through a second frame and dependent rows become consistency checks.
inline MmLearnResult learn_mm(AdOracle& oracle, std::size_t n, const Alphabet& alphabet,
                              std::vector<std::size_t> accepting,
                              std::vector<std::size_t> rejecting,
                              std::vector<std::size_t> going,
                              double tol_rank = kTolRank, double tol_iso = kTolIso) {
    auto t0 = std::chrono::steady_clock::now();
    MmLearnResult out;

    CVector psi0 = oracle.query("");
    oracle.query(std::string(1, alphabet.end_marker));  // v*($), constrains V($) at epsilon
    BasisSet basis = detail::collect_basis(oracle, tol_rank);
    const std::size_t b = basis.entries.size();
    out.report.basis_size = b;

    auto going_mask = detail::index_mask(n, going);

    // Orthonormal frame over the projected basis vectors. Pivot rows carry
    // the recipe that creates a frame vector; dependent rows carry only the
    // expansion used later for consistency checking.
    struct Row {
        std::size_t entry = 0;
        std::vector<Complex> coeffs;
        double rnorm = 0.0;
        bool pivot = false;
    };
    OrthoFrame projected(n);
    std::vector<Row> rows;
    rows.reserve(b);
    for (std::size_t j = 0; j < b; ++j) {
        CVector p = basis.entries[j].reply;
        detail::project_in_place(p, going_mask);
        ResidualResult r = residual(p, projected);
        Row row{j, std::move(r.coefficients), r.norm, r.norm > tol_rank};
        if (row.pivot) {
            scale(r.vec, Complex{1.0 / r.norm, 0.0});
            projected.basis.push_back(std::move(r.vec));
        }
        rows.push_back(std::move(row));
    }

    MmQfa hyp;
    hyp.n = n;
    hyp.alphabet = alphabet;
    hyp.initial = psi0;
    hyp.accepting = std::move(accepting);
    hyp.rejecting = std::move(rejecting);
    hyp.going = std::move(going);

    std::string working = alphabet.symbols + alphabet.end_marker;
    try {
        for (char c : working) {
            std::vector<CVector> images;
            images.reserve(projected.size());
            for (const Row& row : rows) {
                CVector u = oracle.query(basis.entries[row.entry].word + c);
                for (std::size_t k = 0; k < row.coeffs.size(); ++k)
                    axpy(u, -row.coeffs[k], images[k]);
                if (row.pivot) {
                    scale(u, Complex{1.0 / row.rnorm, 0.0});
                    images.push_back(std::move(u));
                } else {
                    // Dependent projection: the reply must already be the
                    // matching combination of the pivot images, otherwise no
                    // unitary satisfies the whole system.
                    double resid = norm(u);
                    out.report.max_constraint_residual =
                        std::max(out.report.max_constraint_residual, resid);
                    if (resid > tol_iso)
                        throw IsometryViolation("dependent projected constraint inconsistent");
                }
            }
            CMatrix v = complete_isometry(projected, images, tol_iso, tol_rank);
            out.report.max_unitarity_defect =
                std::max(out.report.max_unitarity_defect, unitarity_defect(v));
            for (std::size_t j = 0; j < b; ++j) {
                CVector p = basis.entries[j].reply;
                detail::project_in_place(p, going_mask);
                CVector got = v.apply(p);
                axpy(got, Complex{-1.0, 0.0}, oracle.query(basis.entries[j].word + c));
                out.report.max_constraint_residual =
                    std::max(out.report.max_constraint_residual, norm(got));
            }
            hyp.unitaries.emplace(c, std::move(v));
        }
        out.hypothesis = std::move(hyp);
    } catch (const IsometryViolation&) {
        out.report.outcome = Outcome::NotExist;
    }

    out.report.distinct_queries = oracle.distinct_queries();
    out.report.raw_queries = oracle.raw_queries();
    out.report.wall_time = detail::seconds_since(t0);
    return out;
}

struct RfaLearnResult {
    Rfa hypothesis;
    LearnReport report;
};

namespace detail {

inline std::size_t basis_index(const CVector& v) {
    std::size_t hit = v.size();
    for (std::size_t i = 0; i < v.size(); ++i) {
        double re = v[i].real(), im = v[i].imag();
        if (std::abs(im) > 1e-9)
            throw NonBasisReply("oracle reply has a complex amplitude");
        if (std::abs(re - 1.0) <= 1e-9) {
            if (hit != v.size()) throw NonBasisReply("oracle reply has two unit amplitudes");
            hit = i;
        } else if (std::abs(re) > 1e-9) {
            throw NonBasisReply("oracle reply amplitude is neither 0 nor 1");
        }
    }
    if (hit == v.size()) throw NonBasisReply("oracle reply has no unit amplitude");
    return hit;
}

}  // namespace detail

// Learns the reachable part of a reversible finite automaton by BFS over
// witness strings. States are re-indexed in discovery order (initial state
// becomes 0); the provided accepting set refers to the oracle's indexing and
// is remapped onto the discovered states.
inline RfaLearnResult learn_rfa(AdOracle& oracle, const Alphabet& alphabet,
                                const std::vector<std::size_t>& accepting) {
    auto t0 = std::chrono::steady_clock::now();
    RfaLearnResult out;

    std::vector<std::size_t> remap(oracle.dim(), oracle.dim());  // oracle index -> new index
    std::vector<std::size_t> witness_state;                      // discovery order
    std::vector<std::string> witness;

    std::size_t s0 = detail::basis_index(oracle.query(""));
    remap[s0] = 0;
    witness_state.push_back(s0);
    witness.push_back("");

    std::map<char, std::vector<std::size_t>> delta;
    for (char c : alphabet.symbols) delta.emplace(c, std::vector<std::size_t>());

    for (std::size_t s = 0; s < witness.size(); ++s) {
        for (char c : alphabet.symbols) {
            std::size_t t = detail::basis_index(oracle.query(witness[s] + c));
            if (remap[t] == oracle.dim()) {
                remap[t] = witness.size();
                witness_state.push_back(t);
                witness.push_back(witness[s] + c);
            }
            delta[c].push_back(remap[t]);  // row s, in visit order
        }
    }

    out.hypothesis.n = witness.size();
    out.hypothesis.initial_state = 0;
    out.hypothesis.alphabet = alphabet;
    out.hypothesis.delta = std::move(delta);
    for (std::size_t i = 0; i < witness_state.size(); ++i)
        if (std::binary_search(accepting.begin(), accepting.end(), witness_state[i]))
            out.hypothesis.accepting.push_back(i);
    std::sort(out.hypothesis.accepting.begin(), out.hypothesis.accepting.end());

    out.report.basis_size = witness.size();
    out.report.distinct_queries = oracle.distinct_queries();
    out.report.raw_queries = oracle.raw_queries();
    out.report.wall_time = detail::seconds_since(t0);
    return out;
}

}  // namespace qfa
