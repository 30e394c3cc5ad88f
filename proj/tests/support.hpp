#pragma once

#include <string>

#include "qfa/automata.hpp"
#include "qfa/linalg.hpp"

// Test-only helpers: machine mutation for sensitivity checks.

namespace qfa::test {

// Left-multiplies U(symbol) by a plane rotation chosen so that the
// Frobenius-norm change of the unitary is exactly `size`:
// ||G U - U||_F = ||G - I||_F = 2 sqrt(2) |sin(theta/2)|.
inline CMatrix perturbed_unitary(const CMatrix& u, double size, Rng& rng) {
    const std::size_t n = u.rows();
    std::size_t p = rng.index(n);
    std::size_t q = rng.index(n - 1);
    if (q >= p) ++q;
    if (p > q) std::swap(p, q);
    double theta = 2.0 * std::asin(size / (2.0 * std::sqrt(2.0)));
    double phase = 2.0 * std::numbers::pi * rng.uniform();
    CMatrix g = CMatrix::identity(n);
    g(p, p) = Complex{std::cos(theta), 0.0};
    g(q, q) = Complex{std::cos(theta), 0.0};
    g(p, q) = -std::sin(theta) * std::polar(1.0, -phase);
    g(q, p) = std::sin(theta) * std::polar(1.0, phase);
    return g * u;
}

inline MoQfa perturb_mo(const MoQfa& m, double size, std::uint64_t seed) {
    Rng rng(seed);
    MoQfa out = m;
    char c = m.alphabet.symbols[rng.index(m.alphabet.size())];
    out.unitaries.at(c) = perturbed_unitary(m.unitaries.at(c), size, rng);
    return out;
}

inline MmQfa perturb_mm(const MmQfa& m, double size, std::uint64_t seed) {
    Rng rng(seed);
    MmQfa out = m;
    std::string working = m.alphabet.symbols + m.alphabet.end_marker;
    char c = working[rng.index(working.size())];
    out.unitaries.at(c) = perturbed_unitary(m.unitaries.at(c), size, rng);
    return out;
}

}  // namespace qfa::test
