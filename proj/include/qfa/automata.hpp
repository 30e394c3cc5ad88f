#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qfa/linalg.hpp"

// Machine definitions and exact semantics for measure-once and measure-many
// one-way quantum finite automata and reversible finite automata, plus seeded
// random target generation.
//
// Conventions: state indices run 0..n-1, basis vector e_i has a 1 at index i,
// states evolve as columns under left multiplication (|phi'> = U |phi>), and
// a word w = s_1..s_k applies U(s_1) first.

namespace qfa {

struct UnknownSymbol : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Alphabet {
    std::string symbols;    // ordered, distinct; fixes iteration order everywhere
    char end_marker = '$';  // used by MM machines only; never a member of symbols

    Alphabet() = default;
    explicit Alphabet(std::string syms, char end = '$')
        : symbols(std::move(syms)), end_marker(end) {
        if (symbols.empty())
            throw std::invalid_argument("Alphabet: must be non-empty");
        std::set<char> seen(symbols.begin(), symbols.end());
        if (seen.size() != symbols.size())
            throw std::invalid_argument("Alphabet: duplicate symbols");
        if (seen.count(end_marker))
            throw std::invalid_argument("Alphabet: end marker collides with a symbol");
    }

    std::size_t size() const { return symbols.size(); }
    bool contains(char c) const { return symbols.find(c) != std::string::npos; }

    bool operator==(const Alphabet& rhs) const {
        return symbols == rhs.symbols && end_marker == rhs.end_marker;
    }
};

// Measure-once 1QFA: one unitary per symbol, a single accept/reject
// measurement after the last symbol.
struct MoQfa {
    std::size_t n = 0;
    Alphabet alphabet;
    CVector initial;                    // |psi_0>, unit norm
    std::map<char, CMatrix> unitaries;  // symbol -> U(symbol)
    std::vector<std::size_t> accepting; // sorted; union with rejecting = all states
    std::vector<std::size_t> rejecting;
};

// Measure-many 1QFA: {accept, reject, go} measurement after every symbol,
// input implicitly terminated by the end marker, whose unitary is also part
// of the machine.
struct MmQfa {
    std::size_t n = 0;
    Alphabet alphabet;
    CVector initial;
    std::map<char, CMatrix> unitaries;  // keyed over symbols plus end_marker
    std::vector<std::size_t> accepting;
    std::vector<std::size_t> rejecting;
    std::vector<std::size_t> going;
};

// Reversible finite automaton (group automaton): a DFA whose per-symbol
// transition maps are bijections on the state set.
struct Rfa {
    std::size_t n = 0;
    std::size_t initial_state = 0;
    Alphabet alphabet;
    std::map<char, std::vector<std::size_t>> delta;  // symbol -> permutation, delta[s][q] = next
    std::vector<std::size_t> accepting;
};

namespace detail {

inline std::vector<std::uint8_t> index_mask(std::size_t n, const std::vector<std::size_t>& idx) {
    std::vector<std::uint8_t> mask(n, 0);
    for (std::size_t i : idx) mask.at(i) = 1;
    return mask;
}

inline double masked_norm_sq(const CVector& v, const std::vector<std::uint8_t>& mask) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (mask[i]) s += std::norm(v[i]);
    return s;
}

inline void project_in_place(CVector& v, const std::vector<std::uint8_t>& mask) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!mask[i]) v[i] = Complex{0.0, 0.0};
}

inline const CMatrix& unitary_for(const std::map<char, CMatrix>& unitaries, char c) {
    auto it = unitaries.find(c);
    if (it == unitaries.end())
        throw UnknownSymbol(std::string("no transition for symbol '") + c + "'");
    return it->second;
}

inline double clamp_prob(double p) { return std::min(1.0, std::max(0.0, p)); }

}  // namespace detail

// U(s_k) ... U(s_1) |psi_0>
inline CVector mo_trajectory(const MoQfa& m, std::string_view w) {
    CVector v = m.initial;
    for (char c : w) {
        if (!m.alphabet.contains(c))
            throw UnknownSymbol(std::string("symbol '") + c + "' not in alphabet");
        v = detail::unitary_for(m.unitaries, c).apply(v);
    }
    return v;
}

// ||P(a) U(s_k)...U(s_1) |psi_0>||^2, clamped to [0,1]
inline double mo_accept_prob(const MoQfa& m, std::string_view w) {
    CVector v = mo_trajectory(m, w);
    auto mask = detail::index_mask(m.n, m.accepting);
    return detail::clamp_prob(detail::masked_norm_sq(v, mask));
}

// U(s_k) P(g) U(s_{k-1}) P(g) ... U(s_1) P(g) |psi_0>, un-normalized.
// Accepts any string over the working alphabet (symbols plus end marker).
inline CVector mm_trajectory(const MmQfa& m, std::string_view x) {
    auto going_mask = detail::index_mask(m.n, m.going);
    CVector v = m.initial;
    for (char c : x) {
        if (!m.alphabet.contains(c) && c != m.alphabet.end_marker)
            throw UnknownSymbol(std::string("symbol '") + c + "' not in working alphabet");
        detail::project_in_place(v, going_mask);
        v = detail::unitary_for(m.unitaries, c).apply(v);
    }
    return v;
}

struct MmOutcome {
    double accept = 0.0;
    double reject = 0.0;
};

// Cumulative halting probabilities for the word w over the plain alphabet;
// the end marker is appended internally. Leftover "going" amplitude after the
// end marker is neither accepted nor rejected, so accept + reject <= 1.
inline MmOutcome mm_outcome(const MmQfa& m, std::string_view w) {
    auto accept_mask = detail::index_mask(m.n, m.accepting);
    auto reject_mask = detail::index_mask(m.n, m.rejecting);
    auto going_mask = detail::index_mask(m.n, m.going);
    MmOutcome out;
    CVector v = m.initial;
    for (std::size_t k = 0; k <= w.size(); ++k) {
        char c = (k < w.size()) ? w[k] : m.alphabet.end_marker;
        if (k < w.size() && !m.alphabet.contains(c))
            throw UnknownSymbol(std::string("symbol '") + c + "' not in alphabet");
        v = detail::unitary_for(m.unitaries, c).apply(v);
        out.accept += detail::masked_norm_sq(v, accept_mask);
        out.reject += detail::masked_norm_sq(v, reject_mask);
        detail::project_in_place(v, going_mask);
    }
    out.accept = detail::clamp_prob(out.accept);
    out.reject = detail::clamp_prob(out.reject);
    return out;
}

inline double mm_accept_prob(const MmQfa& m, std::string_view w) { return mm_outcome(m, w).accept; }
inline double mm_reject_prob(const MmQfa& m, std::string_view w) { return mm_outcome(m, w).reject; }

inline std::size_t rfa_run(const Rfa& g, std::string_view w) {
    std::size_t s = g.initial_state;
    for (char c : w) {
        auto it = g.delta.find(c);
        if (it == g.delta.end())
            throw UnknownSymbol(std::string("symbol '") + c + "' not in alphabet");
        s = it->second.at(s);
    }
    return s;
}

inline bool rfa_accepts(const Rfa& g, std::string_view w) {
    std::size_t s = rfa_run(g, w);
    return std::binary_search(g.accepting.begin(), g.accepting.end(), s);
}

// Embeds an RFA as a permutation-matrix MO-1QFA: initial state e_{s0},
// U(symbol) with entry (delta(q,symbol), q) = 1, accepting set carried over.
inline MoQfa rfa_to_mo(const Rfa& g) {
    MoQfa m;
    m.n = g.n;
    m.alphabet = g.alphabet;
    m.initial = basis_vector(g.n, g.initial_state);
    for (const auto& [c, perm] : g.delta) {
        CMatrix u(g.n, g.n);
        for (std::size_t q = 0; q < g.n; ++q) u(perm[q], q) = Complex{1.0, 0.0};
        m.unitaries.emplace(c, std::move(u));
    }
    m.accepting = g.accepting;
    std::set<std::size_t> acc(g.accepting.begin(), g.accepting.end());
    for (std::size_t q = 0; q < g.n; ++q)
        if (!acc.count(q)) m.rejecting.push_back(q);
    return m;
}

// Rotation machine: n = 2, single symbol 'a' rotating by theta in the real
// plane, accepting on state 0. Closed form: accept(a^k) = cos^2(k theta).
inline MoQfa make_rotation_mo(double theta) {
    MoQfa m;
    m.n = 2;
    m.alphabet = Alphabet("a");
    m.initial = basis_vector(2, 0);
    CMatrix u(2, 2);
    u(0, 0) = Complex{std::cos(theta), 0.0};
    u(0, 1) = Complex{-std::sin(theta), 0.0};
    u(1, 0) = Complex{std::sin(theta), 0.0};
    u(1, 1) = Complex{std::cos(theta), 0.0};
    m.unitaries.emplace('a', std::move(u));
    m.accepting = {0};
    m.rejecting = {1};
    return m;
}

// Seeded RNG with hand-rolled distributions so that generated machines are
// bit-identical for a given seed regardless of standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // uniform in [0,1) with 53-bit resolution
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // standard normal via Box-Muller, one value per call
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    Complex complex_gaussian() {
        double re = gaussian();
        double im = gaussian();
        return Complex{re, im};
    }

    // uniform index in [0, k)
    std::size_t index(std::size_t k) {
        if (k == 0) throw std::invalid_argument("Rng::index: empty range");
        return static_cast<std::size_t>(gen_() % k);
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

inline CVector random_unit_vector(std::size_t n, Rng& rng) {
    CVector v(n);
    for (Complex& c : v) c = rng.complex_gaussian();
    double nm = norm(v);
    while (nm == 0.0) {  // measure-zero, but keep it total
        for (Complex& c : v) c = rng.complex_gaussian();
        nm = norm(v);
    }
    scale(v, Complex{1.0 / nm, 0.0});
    return v;
}

// Haar-distributed unitary: orthonormalize the columns of a complex Gaussian
// matrix. Modified Gram-Schmidt yields the QR factor with positive real
// diagonal of R, which is exactly the Haar convention.
inline CMatrix haar_unitary(std::size_t n, Rng& rng) {
    OrthoFrame frame(n);
    while (frame.size() < n) {
        CVector col(n);
        for (Complex& c : col) c = rng.complex_gaussian();
        extend_frame(frame, col, 1e-6);
    }
    CMatrix u(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            u(i, j) = frame[j][i];
    return u;
}

inline MoQfa gen_random_mo(std::size_t n, const Alphabet& alphabet, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_random_mo: need n >= 1");
    Rng rng(seed);
    MoQfa m;
    m.n = n;
    m.alphabet = alphabet;
    m.initial = random_unit_vector(n, rng);
    for (char c : alphabet.symbols) m.unitaries.emplace(c, haar_unitary(n, rng));
    for (std::size_t q = 0; q < n; ++q) {
        if (rng.index(2) == 0)
            m.accepting.push_back(q);
        else
            m.rejecting.push_back(q);
    }
    return m;
}

inline MmQfa gen_random_mm(std::size_t n, const Alphabet& alphabet, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_random_mm: need n >= 1");
    Rng rng(seed);
    MmQfa m;
    m.n = n;
    m.alphabet = alphabet;
    m.initial = random_unit_vector(n, rng);
    for (char c : alphabet.symbols) m.unitaries.emplace(c, haar_unitary(n, rng));
    m.unitaries.emplace(alphabet.end_marker, haar_unitary(n, rng));
    // Empty accept/reject classes are fine; an empty going class when n >= 2
    // would make every target halt on the first symbol, so re-draw.
    while (true) {
        m.accepting.clear();
        m.rejecting.clear();
        m.going.clear();
        for (std::size_t q = 0; q < n; ++q) {
            switch (rng.index(3)) {
                case 0: m.accepting.push_back(q); break;
                case 1: m.rejecting.push_back(q); break;
                default: m.going.push_back(q); break;
            }
        }
        if (n < 2 || !m.going.empty()) break;
    }
    return m;
}

inline Rfa gen_random_rfa(std::size_t n, const Alphabet& alphabet, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_random_rfa: need n >= 1");
    Rng rng(seed);
    Rfa g;
    g.n = n;
    g.alphabet = alphabet;
    g.initial_state = rng.index(n);
    for (char c : alphabet.symbols) {
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        for (std::size_t i = n; i > 1; --i)  // Fisher-Yates
            std::swap(perm[i - 1], perm[rng.index(i)]);
        g.delta.emplace(c, std::move(perm));
    }
    for (std::size_t q = 0; q < n; ++q)
        if (rng.index(2) == 0) g.accepting.push_back(q);
    return g;
}

}  // namespace qfa
