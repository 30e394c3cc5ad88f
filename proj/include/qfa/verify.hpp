#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qfa/automata.hpp"
#include "qfa/linalg.hpp"

// Equivalence evidence between a target machine and a hypothesis: bounded
// exhaustive plus seeded random comparison of trajectories and acceptance
// probabilities (the strongest checkable statements, since the hypothesis
// matrices are free on the unreachable complement), and an invariant audit
// for parsed machines.

namespace qfa {

inline constexpr double kMachineTol = 1e-10;  // norm/unitarity audit tolerance

struct VerifyConfig {
    std::size_t max_exhaustive_len = 5;
    std::size_t random_trials = 1000;
    std::size_t random_max_len = 50;
    std::uint64_t seed = 0;
    double tol = 1e-8;
};

struct VerifyReport {
    std::size_t strings_checked = 0;
    double max_trajectory_deviation = 0.0;
    double max_probability_deviation = 0.0;
    std::string worst_string;
    bool passed = false;
};

namespace detail {

inline double diff_norm(const CVector& a, const CVector& b) {
    CVector d = a;
    axpy(d, Complex{-1.0, 0.0}, b);
    return norm(d);
}

struct DeviationTracker {
    VerifyReport report;

    void record(const std::string& word, double traj_dev, double prob_dev) {
        ++report.strings_checked;
        double prev = std::max(report.max_trajectory_deviation, report.max_probability_deviation);
        if (std::max(traj_dev, prob_dev) > prev || report.strings_checked == 1)
            report.worst_string = word;
        report.max_trajectory_deviation = std::max(report.max_trajectory_deviation, traj_dev);
        report.max_probability_deviation = std::max(report.max_probability_deviation, prob_dev);
    }

    VerifyReport finish(double tol) {
        report.passed = report.max_trajectory_deviation <= tol &&
                        report.max_probability_deviation <= tol;
        return report;
    }
};

inline std::string random_word(const Alphabet& alphabet, std::size_t max_len, Rng& rng) {
    std::size_t len = rng.index(max_len + 1);
    std::string w(len, '\0');
    for (char& c : w) c = alphabet.symbols[rng.index(alphabet.size())];
    return w;
}

}  // namespace detail

inline VerifyReport verify_mo(const MoQfa& target, const MoQfa& hyp, const VerifyConfig& cfg) {
    if (target.n != hyp.n || !(target.alphabet == hyp.alphabet) ||
        target.accepting != hyp.accepting || target.rejecting != hyp.rejecting)
        throw std::invalid_argument("verify_mo: machines have different shapes");

    auto accept_mask = detail::index_mask(target.n, target.accepting);
    detail::DeviationTracker tracker;

    auto compare = [&](const std::string& w, const CVector& vt, const CVector& vh) {
        double pd = std::abs(detail::masked_norm_sq(vt, accept_mask) -
                             detail::masked_norm_sq(vh, accept_mask));
        tracker.record(w, detail::diff_norm(vt, vh), pd);
    };

    // Exhaustive up to max_exhaustive_len, reusing prefix trajectories.
    auto descend = [&](auto&& self, const std::string& w, const CVector& vt,
                       const CVector& vh) -> void {
        compare(w, vt, vh);
        if (w.size() >= cfg.max_exhaustive_len) return;
        for (char c : target.alphabet.symbols)
            self(self, w + c, target.unitaries.at(c).apply(vt), hyp.unitaries.at(c).apply(vh));
    };
    descend(descend, "", target.initial, hyp.initial);

    Rng rng(cfg.seed);
    for (std::size_t t = 0; t < cfg.random_trials; ++t) {
        std::string w = detail::random_word(target.alphabet, cfg.random_max_len, rng);
        compare(w, mo_trajectory(target, w), mo_trajectory(hyp, w));
    }
    return tracker.finish(cfg.tol);
}

inline VerifyReport verify_mm(const MmQfa& target, const MmQfa& hyp, const VerifyConfig& cfg) {
    if (target.n != hyp.n || !(target.alphabet == hyp.alphabet) ||
        target.accepting != hyp.accepting || target.rejecting != hyp.rejecting ||
        target.going != hyp.going)
        throw std::invalid_argument("verify_mm: machines have different shapes");

    const char end = target.alphabet.end_marker;
    auto accept_mask = detail::index_mask(target.n, target.accepting);
    auto reject_mask = detail::index_mask(target.n, target.rejecting);
    auto going_mask = detail::index_mask(target.n, target.going);
    detail::DeviationTracker tracker;

    // Running state for one machine while reading a word: the raw trajectory
    // vector plus the halting mass accumulated so far.
    struct Running {
        CVector v;
        double acc = 0.0;
        double rej = 0.0;
    };
    auto step = [&](const MmQfa& m, const Running& r, char c) {
        Running nxt;
        CVector p = r.v;
        detail::project_in_place(p, going_mask);
        nxt.v = m.unitaries.at(c).apply(p);
        nxt.acc = r.acc + detail::masked_norm_sq(nxt.v, accept_mask);
        nxt.rej = r.rej + detail::masked_norm_sq(nxt.v, reject_mask);
        return nxt;
    };
    // Compares the word's trajectory, its end-marker extension, and the
    // final accept/reject probabilities.
    auto compare = [&](const std::string& w, const Running& rt, const Running& rh) {
        double traj = detail::diff_norm(rt.v, rh.v);
        Running ft = step(target, rt, end);
        Running fh = step(hyp, rh, end);
        traj = std::max(traj, detail::diff_norm(ft.v, fh.v));
        double pd = std::max(std::abs(ft.acc - fh.acc), std::abs(ft.rej - fh.rej));
        tracker.record(w, traj, pd);
    };

    Running t0{target.initial, 0.0, 0.0};
    Running h0{hyp.initial, 0.0, 0.0};
    auto descend = [&](auto&& self, const std::string& w, const Running& rt,
                       const Running& rh) -> void {
        compare(w, rt, rh);
        if (w.size() >= cfg.max_exhaustive_len) return;
        for (char c : target.alphabet.symbols)
            self(self, w + c, step(target, rt, c), step(hyp, rh, c));
    };
    descend(descend, "", t0, h0);

    Rng rng(cfg.seed);
    for (std::size_t t = 0; t < cfg.random_trials; ++t) {
        std::string w = detail::random_word(target.alphabet, cfg.random_max_len, rng);
        Running rt = t0, rh = h0;
        for (char c : w) {
            rt = step(target, rt, c);
            rh = step(hyp, rh, c);
        }
        compare(w, rt, rh);
    }
    return tracker.finish(cfg.tol);
}

// Behavioral comparison only: the hypothesis may have fewer states (the
// unreachable part of the target is unobservable). Deviation per string is
// 0/1 disagreement.
inline VerifyReport verify_rfa(const Rfa& target, const Rfa& hyp, const VerifyConfig& cfg) {
    if (!(target.alphabet == hyp.alphabet))
        throw std::invalid_argument("verify_rfa: alphabet mismatch");

    detail::DeviationTracker tracker;
    auto compare = [&](const std::string& w, std::size_t st, std::size_t sh) {
        bool at = std::binary_search(target.accepting.begin(), target.accepting.end(), st);
        bool ah = std::binary_search(hyp.accepting.begin(), hyp.accepting.end(), sh);
        double dev = (at == ah) ? 0.0 : 1.0;
        tracker.record(w, dev, dev);
    };
    auto descend = [&](auto&& self, const std::string& w, std::size_t st, std::size_t sh) -> void {
        compare(w, st, sh);
        if (w.size() >= cfg.max_exhaustive_len) return;
        for (char c : target.alphabet.symbols)
            self(self, w + c, target.delta.at(c)[st], hyp.delta.at(c)[sh]);
    };
    descend(descend, "", target.initial_state, hyp.initial_state);

    Rng rng(cfg.seed);
    for (std::size_t t = 0; t < cfg.random_trials; ++t) {
        std::string w = detail::random_word(target.alphabet, cfg.random_max_len, rng);
        compare(w, rfa_run(target, w), rfa_run(hyp, w));
    }
    return tracker.finish(cfg.tol);
}

namespace detail {

inline bool all_finite(const CVector& v) {
    for (const Complex& c : v)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

inline void audit_alphabet(const Alphabet& a, bool uses_end_marker,
                           std::vector<std::string>& out) {
    if (a.symbols.empty()) {
        out.push_back("alphabet: empty");
        return;
    }
    std::set<char> seen(a.symbols.begin(), a.symbols.end());
    if (seen.size() != a.symbols.size()) out.push_back("alphabet: duplicate symbols");
    if (uses_end_marker && seen.count(a.end_marker))
        out.push_back("alphabet: end marker collides with a symbol");
}

inline void audit_initial(const CVector& v, std::size_t n, std::vector<std::string>& out) {
    if (v.size() != n) {
        out.push_back("initial: dimension " + std::to_string(v.size()) + " != n");
        return;
    }
    if (!all_finite(v)) {
        out.push_back("initial: non-finite amplitude");
        return;
    }
    double nm = norm(v);
    if (std::abs(nm - 1.0) > kMachineTol)
        out.push_back("initial: norm " + std::to_string(nm) + " deviates from 1");
}

inline void audit_unitaries(const std::map<char, CMatrix>& us, const std::string& expected_keys,
                            std::size_t n, std::vector<std::string>& out) {
    for (char c : expected_keys) {
        auto it = us.find(c);
        if (it == us.end()) {
            out.push_back(std::string("unitaries: missing symbol '") + c + "'");
            continue;
        }
        const CMatrix& u = it->second;
        if (u.rows() != n || u.cols() != n) {
            out.push_back(std::string("unitaries: '") + c + "' is not n x n");
            continue;
        }
        bool finite = true;
        for (const Complex& e : u.data())
            if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) finite = false;
        if (!finite) {
            out.push_back(std::string("unitaries: '") + c + "' has a non-finite entry");
            continue;
        }
        double d = unitarity_defect(u);
        if (d > kMachineTol)
            out.push_back(std::string("unitaries: '") + c + "' unitarity defect " +
                          std::to_string(d));
    }
    if (us.size() != expected_keys.size())
        out.push_back("unitaries: unexpected extra symbols");
}

// The classes must partition {0..n-1}: sorted, in range, pairwise disjoint,
// jointly complete.
inline void audit_partition(std::size_t n,
                            const std::vector<const std::vector<std::size_t>*>& classes,
                            const std::vector<std::string>& names,
                            std::vector<std::string>& out) {
    std::vector<int> owner(n, -1);
    for (std::size_t k = 0; k < classes.size(); ++k) {
        const auto& cls = *classes[k];
        if (!std::is_sorted(cls.begin(), cls.end()) ||
            std::adjacent_find(cls.begin(), cls.end()) != cls.end())
            out.push_back(names[k] + ": not a sorted duplicate-free list");
        for (std::size_t q : cls) {
            if (q >= n) {
                out.push_back(names[k] + ": state " + std::to_string(q) + " out of range");
                continue;
            }
            if (owner[q] >= 0)
                out.push_back("state " + std::to_string(q) + " in both " +
                              names[static_cast<std::size_t>(owner[q])] + " and " + names[k]);
            owner[q] = static_cast<int>(k);
        }
    }
    for (std::size_t q = 0; q < n; ++q)
        if (owner[q] < 0)
            out.push_back("state " + std::to_string(q) + " belongs to no class");
}

}  // namespace detail

inline std::vector<std::string> audit(const MoQfa& m) {
    std::vector<std::string> out;
    if (m.n < 1) {
        out.push_back("n: must be >= 1");
        return out;
    }
    detail::audit_alphabet(m.alphabet, false, out);
    detail::audit_initial(m.initial, m.n, out);
    detail::audit_unitaries(m.unitaries, m.alphabet.symbols, m.n, out);
    detail::audit_partition(m.n, {&m.accepting, &m.rejecting}, {"accepting", "rejecting"}, out);
    return out;
}

inline std::vector<std::string> audit(const MmQfa& m) {
    std::vector<std::string> out;
    if (m.n < 1) {
        out.push_back("n: must be >= 1");
        return out;
    }
    detail::audit_alphabet(m.alphabet, true, out);
    detail::audit_initial(m.initial, m.n, out);
    detail::audit_unitaries(m.unitaries, m.alphabet.symbols + m.alphabet.end_marker, m.n, out);
    detail::audit_partition(m.n, {&m.accepting, &m.rejecting, &m.going},
                            {"accepting", "rejecting", "going"}, out);
    return out;
}

inline std::vector<std::string> audit(const Rfa& g) {
    std::vector<std::string> out;
    if (g.n < 1) {
        out.push_back("n: must be >= 1");
        return out;
    }
    detail::audit_alphabet(g.alphabet, false, out);
    if (g.initial_state >= g.n) out.push_back("initial_state: out of range");
    for (char c : g.alphabet.symbols) {
        auto it = g.delta.find(c);
        if (it == g.delta.end()) {
            out.push_back(std::string("delta: missing symbol '") + c + "'");
            continue;
        }
        const auto& perm = it->second;
        if (perm.size() != g.n) {
            out.push_back(std::string("delta: '") + c + "' wrong length");
            continue;
        }
        std::vector<std::uint8_t> hit(g.n, 0);
        bool ok = true;
        for (std::size_t q : perm) {
            if (q >= g.n || hit[q]) ok = false;
            else hit[q] = 1;
        }
        if (!ok) out.push_back(std::string("delta: '") + c + "' is not a permutation");
    }
    if (g.delta.size() != g.alphabet.size()) out.push_back("delta: unexpected extra symbols");
    if (!std::is_sorted(g.accepting.begin(), g.accepting.end()) ||
        std::adjacent_find(g.accepting.begin(), g.accepting.end()) != g.accepting.end())
        out.push_back("accepting: not a sorted duplicate-free list");
    for (std::size_t q : g.accepting)
        if (q >= g.n) out.push_back("accepting: state " + std::to_string(q) + " out of range");
    return out;
}

}  // namespace qfa
