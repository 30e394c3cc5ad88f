#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "qfa/automata.hpp"
#include "qfa/linalg.hpp"

// The amplitude-distribution oracle: for an input string it answers the exact
// state vector the hidden target reaches (un-normalized for measure-many
// machines). Replies are memoized on the raw query string, so repeated
// queries are deterministic and tallied separately from distinct ones.

namespace qfa {

struct IllegalQueryString : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class AdOracle {
public:
    virtual ~AdOracle() = default;

    // Exact trajectory vector for x. Every call bumps the raw counter; the
    // distinct counter moves only on a cache miss.
    const CVector& query(const std::string& x) {
        ++raw_;
        auto it = cache_.find(x);
        if (it != cache_.end()) return it->second;
        CVector v = evaluate(x);
        ++distinct_;
        return cache_.emplace(x, std::move(v)).first->second;
    }

    virtual std::size_t dim() const = 0;
    virtual const Alphabet& alphabet() const = 0;

    std::size_t raw_queries() const { return raw_; }
    std::size_t distinct_queries() const { return distinct_; }

protected:
    virtual CVector evaluate(const std::string& x) const = 0;

private:
    std::unordered_map<std::string, CVector> cache_;
    std::size_t raw_ = 0;
    std::size_t distinct_ = 0;
};

class SimulatedMoOracle final : public AdOracle {
public:
    explicit SimulatedMoOracle(MoQfa target) : target_(std::move(target)) {}

    std::size_t dim() const override { return target_.n; }
    const Alphabet& alphabet() const override { return target_.alphabet; }

protected:
    CVector evaluate(const std::string& x) const override {
        return mo_trajectory(target_, x);
    }

private:
    MoQfa target_;
};

// Legal queries are strings over the plain alphabet with at most one end
// marker, which must be final: interior markers have no oracle semantics.
class SimulatedMmOracle final : public AdOracle {
public:
    explicit SimulatedMmOracle(MmQfa target) : target_(std::move(target)) {}

    std::size_t dim() const override { return target_.n; }
    const Alphabet& alphabet() const override { return target_.alphabet; }

protected:
    CVector evaluate(const std::string& x) const override {
        const char end = target_.alphabet.end_marker;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] == end && i + 1 != x.size())
                throw IllegalQueryString("end marker only allowed in final position");
            if (x[i] != end && !target_.alphabet.contains(x[i]))
                throw IllegalQueryString(std::string("symbol '") + x[i] + "' not in alphabet");
        }
        return mm_trajectory(target_, x);
    }

private:
    MmQfa target_;
};

// Answers with the basis vector of the state the deterministic target
// reaches.
class SimulatedRfaOracle final : public AdOracle {
public:
    explicit SimulatedRfaOracle(Rfa target) : target_(std::move(target)) {}

    std::size_t dim() const override { return target_.n; }
    const Alphabet& alphabet() const override { return target_.alphabet; }

protected:
    CVector evaluate(const std::string& x) const override {
        return basis_vector(target_.n, rfa_run(target_, x));
    }

private:
    Rfa target_;
};

// Weaker teacher that reveals only the accepting-state amplitudes (all other
// coordinates zeroed). Kept for demonstration and tests; no learner in this
// library consumes it, since the replies do not determine the machine with
// polynomially many queries.
class AaOracle {
public:
    AaOracle(AdOracle& base, std::vector<std::size_t> accepting)
        : base_(base), accepting_(std::move(accepting)) {}

    CVector query(const std::string& x) {
        CVector v = base_.query(x);
        auto mask = detail::index_mask(v.size(), accepting_);
        detail::project_in_place(v, mask);
        return v;
    }

private:
    AdOracle& base_;
    std::vector<std::size_t> accepting_;
};

}  // namespace qfa
