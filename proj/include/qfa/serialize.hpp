#pragma once

#include <fstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "qfa/automata.hpp"
#include "qfa/learner.hpp"
#include "qfa/verify.hpp"

// JSON formats for automata and reports. Complex numbers serialize to
// [re, im] pairs and matrices to row-major nested arrays, so files round-trip
// byte-identically through parse + dump. Parsing rejects any file whose
// machine fails the invariant audit.

namespace qfa {

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Automaton = std::variant<MoQfa, MmQfa, Rfa>;

namespace detail {

using json = nlohmann::json;

inline json complex_to_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw FormatError("expected [re, im] pair");
    return Complex{j[0].get<double>(), j[1].get<double>()};
}

inline json vector_to_json(const CVector& v) {
    json out = json::array();
    for (const Complex& c : v) out.push_back(complex_to_json(c));
    return out;
}

inline CVector vector_from_json(const json& j) {
    if (!j.is_array()) throw FormatError("expected amplitude array");
    CVector v;
    v.reserve(j.size());
    for (const json& e : j) v.push_back(complex_from_json(e));
    return v;
}

inline json matrix_to_json(const CMatrix& m) {
    json out = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        out.push_back(std::move(row));
    }
    return out;
}

inline CMatrix matrix_from_json(const json& j, std::size_t n) {
    if (!j.is_array() || j.size() != n) throw FormatError("matrix: expected n rows");
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!j[i].is_array() || j[i].size() != n) throw FormatError("matrix: expected n columns");
        for (std::size_t k = 0; k < n; ++k) m(i, k) = complex_from_json(j[i][k]);
    }
    return m;
}

inline json alphabet_to_json(const Alphabet& a) {
    json out = json::array();
    for (char c : a.symbols) out.push_back(std::string(1, c));
    return out;
}

inline std::string symbols_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw FormatError("alphabet: expected non-empty array");
    std::string symbols;
    for (const json& e : j) {
        if (!e.is_string() || e.get<std::string>().size() != 1)
            throw FormatError("alphabet: symbols must be single characters");
        symbols += e.get<std::string>();
    }
    return symbols;
}

inline json indices_to_json(const std::vector<std::size_t>& idx) {
    json out = json::array();
    for (std::size_t q : idx) out.push_back(q);
    return out;
}

inline std::vector<std::size_t> indices_from_json(const json& j, const char* what) {
    if (!j.is_array()) throw FormatError(std::string(what) + ": expected array");
    std::vector<std::size_t> out;
    for (const json& e : j) {
        if (!e.is_number_unsigned()) throw FormatError(std::string(what) + ": expected index");
        out.push_back(e.get<std::size_t>());
    }
    return out;
}

inline char end_marker_from_json(const json& j) {
    if (!j.contains("end_marker")) return '$';
    const json& e = j.at("end_marker");
    if (!e.is_string() || e.get<std::string>().size() != 1)
        throw FormatError("end_marker: expected single character");
    return e.get<std::string>()[0];
}

template <typename Machine>
void require_clean_audit(const Machine& m) {
    std::vector<std::string> violations = audit(m);
    if (!violations.empty()) {
        std::string msg = "invalid machine:";
        for (const std::string& v : violations) msg += " [" + v + "]";
        throw FormatError(msg);
    }
}

}  // namespace detail

inline nlohmann::json to_json(const MoQfa& m) {
    nlohmann::json j;
    j["kind"] = "mo";
    j["n"] = m.n;
    j["alphabet"] = detail::alphabet_to_json(m.alphabet);
    j["initial"] = detail::vector_to_json(m.initial);
    nlohmann::json us;
    for (const auto& [c, u] : m.unitaries) us[std::string(1, c)] = detail::matrix_to_json(u);
    j["unitaries"] = std::move(us);
    j["accepting"] = detail::indices_to_json(m.accepting);
    j["rejecting"] = detail::indices_to_json(m.rejecting);
    return j;
}

inline nlohmann::json to_json(const MmQfa& m) {
    nlohmann::json j;
    j["kind"] = "mm";
    j["n"] = m.n;
    j["alphabet"] = detail::alphabet_to_json(m.alphabet);
    j["end_marker"] = std::string(1, m.alphabet.end_marker);
    j["initial"] = detail::vector_to_json(m.initial);
    nlohmann::json us;
    for (const auto& [c, u] : m.unitaries) us[std::string(1, c)] = detail::matrix_to_json(u);
    j["unitaries"] = std::move(us);
    j["accepting"] = detail::indices_to_json(m.accepting);
    j["rejecting"] = detail::indices_to_json(m.rejecting);
    j["going"] = detail::indices_to_json(m.going);
    return j;
}

inline nlohmann::json to_json(const Rfa& g) {
    nlohmann::json j;
    j["kind"] = "rfa";
    j["n"] = g.n;
    j["alphabet"] = detail::alphabet_to_json(g.alphabet);
    j["initial"] = g.initial_state;
    nlohmann::json ds;
    for (const auto& [c, perm] : g.delta) ds[std::string(1, c)] = detail::indices_to_json(perm);
    j["delta"] = std::move(ds);
    j["accepting"] = detail::indices_to_json(g.accepting);
    return j;
}

inline nlohmann::json to_json(const Automaton& a) {
    return std::visit([](const auto& m) { return to_json(m); }, a);
}

inline Automaton automaton_from_json(const nlohmann::json& j) {
    try {
        if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
            throw FormatError("missing machine kind");
        std::string kind = j.at("kind").get<std::string>();
        if (!j.contains("n") || !j.at("n").is_number_unsigned())
            throw FormatError("missing state count");
        std::size_t n = j.at("n").get<std::size_t>();
        std::string symbols = detail::symbols_from_json(j.at("alphabet"));

        if (kind == "rfa") {
            Rfa g;
            g.n = n;
            g.alphabet = Alphabet(symbols);
            if (!j.at("initial").is_number_unsigned())
                throw FormatError("rfa initial: expected state index");
            g.initial_state = j.at("initial").get<std::size_t>();
            for (char c : symbols)
                g.delta[c] = detail::indices_from_json(j.at("delta").at(std::string(1, c)),
                                                       "delta");
            g.accepting = detail::indices_from_json(j.at("accepting"), "accepting");
            detail::require_clean_audit(g);
            return g;
        }
        if (kind == "mo") {
            MoQfa m;
            m.n = n;
            m.alphabet = Alphabet(symbols);
            m.initial = detail::vector_from_json(j.at("initial"));
            for (char c : symbols)
                m.unitaries.emplace(c, detail::matrix_from_json(
                                           j.at("unitaries").at(std::string(1, c)), n));
            m.accepting = detail::indices_from_json(j.at("accepting"), "accepting");
            m.rejecting = detail::indices_from_json(j.at("rejecting"), "rejecting");
            detail::require_clean_audit(m);
            return m;
        }
        if (kind == "mm") {
            MmQfa m;
            m.n = n;
            m.alphabet = Alphabet(symbols, detail::end_marker_from_json(j));
            m.initial = detail::vector_from_json(j.at("initial"));
            std::string working = symbols + m.alphabet.end_marker;
            for (char c : working)
                m.unitaries.emplace(c, detail::matrix_from_json(
                                           j.at("unitaries").at(std::string(1, c)), n));
            m.accepting = detail::indices_from_json(j.at("accepting"), "accepting");
            m.rejecting = detail::indices_from_json(j.at("rejecting"), "rejecting");
            m.going = detail::indices_from_json(j.at("going"), "going");
            detail::require_clean_audit(m);
            return m;
        }
        throw FormatError("unknown machine kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed machine document: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("invalid machine: ") + e.what());
    }
}

inline std::string dump_automaton(const Automaton& a) { return to_json(a).dump(2) + "\n"; }

inline Automaton parse_automaton(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw FormatError("not valid JSON");
    return automaton_from_json(j);
}

inline Automaton load_automaton(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failure on '" + path + "'");
    return parse_automaton(text);
}

inline void save_automaton(const std::string& path, const Automaton& a) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << dump_automaton(a);
    if (!out) throw IoError("write failure on '" + path + "'");
}

inline nlohmann::json to_json(const LearnReport& r) {
    nlohmann::json j;
    j["distinct_queries"] = r.distinct_queries;
    j["raw_queries"] = r.raw_queries;
    j["basis_size"] = r.basis_size;
    j["max_constraint_residual"] = r.max_constraint_residual;
    j["max_unitarity_defect"] = r.max_unitarity_defect;
    j["outcome"] = (r.outcome == Outcome::Learned) ? "Learned" : "NotExist";
    j["wall_time"] = r.wall_time;
    return j;
}

inline nlohmann::json to_json(const VerifyReport& r) {
    nlohmann::json j;
    j["strings_checked"] = r.strings_checked;
    j["max_trajectory_deviation"] = r.max_trajectory_deviation;
    j["max_probability_deviation"] = r.max_probability_deviation;
    j["worst_string"] = r.worst_string;
    j["passed"] = r.passed;
    return j;
}

inline void save_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
    if (!out) throw IoError("write failure on '" + path + "'");
}

}  // namespace qfa
