// Command-line driver: generate random target machines, learn them through
// the simulated amplitude-distribution oracle, verify hypotheses against
// targets, evaluate acceptance probabilities, and benchmark learning runs.
//
// Exit codes: 0 success/pass, 1 I/O failure, 2 usage or format error,
// 3 learner returned "not exist", 4 verification failed.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qfa/qfa.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kIoFailure = 1;
constexpr int kUsage = 2;
constexpr int kNotExist = 3;
constexpr int kVerifyFail = 4;

std::string format_prob(double p) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", p);
    return buf;
}

qfa::Automaton generate(const std::string& kind, std::size_t states,
                        const std::string& alphabet, std::uint64_t seed) {
    qfa::Alphabet ab(alphabet);
    if (kind == "mo") return qfa::gen_random_mo(states, ab, seed);
    if (kind == "mm") return qfa::gen_random_mm(states, ab, seed);
    return qfa::gen_random_rfa(states, ab, seed);
}

int run_gen(const std::string& kind, std::size_t states, const std::string& alphabet,
            std::uint64_t seed, const std::string& out) {
    qfa::save_automaton(out, generate(kind, states, alphabet, seed));
    return kOk;
}

struct LearnOutcome {
    qfa::LearnReport report;
    std::optional<qfa::Automaton> hypothesis;
};

LearnOutcome learn_dispatch(const qfa::Automaton& target, double tol_rank, double tol_iso) {
    LearnOutcome out;
    if (const auto* mo = std::get_if<qfa::MoQfa>(&target)) {
        qfa::SimulatedMoOracle oracle(*mo);
        qfa::MoLearnResult r = qfa::learn_mo(oracle, mo->n, mo->alphabet, mo->accepting,
                                             mo->rejecting, tol_rank, tol_iso);
        out.report = r.report;
        if (r.hypothesis) out.hypothesis = std::move(*r.hypothesis);
    } else if (const auto* mm = std::get_if<qfa::MmQfa>(&target)) {
        qfa::SimulatedMmOracle oracle(*mm);
        qfa::MmLearnResult r = qfa::learn_mm(oracle, mm->n, mm->alphabet, mm->accepting,
                                             mm->rejecting, mm->going, tol_rank, tol_iso);
        out.report = r.report;
        if (r.hypothesis) out.hypothesis = std::move(*r.hypothesis);
    } else {
        const auto& rfa = std::get<qfa::Rfa>(target);
        qfa::SimulatedRfaOracle oracle(rfa);
        qfa::RfaLearnResult r = qfa::learn_rfa(oracle, rfa.alphabet, rfa.accepting);
        out.report = r.report;
        out.hypothesis = std::move(r.hypothesis);
    }
    return out;
}

int run_learn(const std::string& target_path, const std::string& out_path,
              const std::string& report_path, double tol_rank, double tol_iso) {
    qfa::Automaton target = qfa::load_automaton(target_path);
    LearnOutcome r = learn_dispatch(target, tol_rank, tol_iso);
    if (!report_path.empty()) qfa::save_json(report_path, qfa::to_json(r.report));
    if (r.report.outcome == qfa::Outcome::NotExist) {
        std::cerr << "learner: no consistent machine exists\n";
        return kNotExist;
    }
    qfa::save_automaton(out_path, *r.hypothesis);
    return kOk;
}

qfa::VerifyReport verify_dispatch(const qfa::Automaton& target, const qfa::Automaton& learned,
                                  const qfa::VerifyConfig& cfg) {
    if (target.index() != learned.index())
        throw qfa::FormatError("target and learned machines have different kinds");
    if (const auto* mo = std::get_if<qfa::MoQfa>(&target))
        return qfa::verify_mo(*mo, std::get<qfa::MoQfa>(learned), cfg);
    if (const auto* mm = std::get_if<qfa::MmQfa>(&target))
        return qfa::verify_mm(*mm, std::get<qfa::MmQfa>(learned), cfg);
    return qfa::verify_rfa(std::get<qfa::Rfa>(target), std::get<qfa::Rfa>(learned), cfg);
}

int run_verify(const std::string& target_path, const std::string& learned_path,
               const qfa::VerifyConfig& cfg, const std::string& report_path) {
    qfa::Automaton target = qfa::load_automaton(target_path);
    qfa::Automaton learned = qfa::load_automaton(learned_path);
    qfa::VerifyReport report = verify_dispatch(target, learned, cfg);
    if (!report_path.empty()) qfa::save_json(report_path, qfa::to_json(report));
    std::cout << (report.passed ? "pass" : "fail")
              << " trajectory_dev=" << report.max_trajectory_deviation
              << " probability_dev=" << report.max_probability_deviation
              << " strings=" << report.strings_checked << "\n";
    return report.passed ? kOk : kVerifyFail;
}

int run_accept(const std::string& machine_path, const std::string& word) {
    qfa::Automaton machine = qfa::load_automaton(machine_path);
    if (const auto* mo = std::get_if<qfa::MoQfa>(&machine)) {
        std::cout << format_prob(qfa::mo_accept_prob(*mo, word)) << "\n";
    } else if (const auto* mm = std::get_if<qfa::MmQfa>(&machine)) {
        qfa::MmOutcome out = qfa::mm_outcome(*mm, word);
        std::cout << format_prob(out.accept) << "\n" << format_prob(out.reject) << "\n";
    } else {
        const auto& rfa = std::get<qfa::Rfa>(machine);
        std::cout << format_prob(qfa::rfa_accepts(rfa, word) ? 1.0 : 0.0) << "\n";
    }
    return kOk;
}

// --states accepts "A..B" ranges, comma-separated lists, and single values.
std::vector<std::size_t> parse_states_spec(const std::string& spec) {
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        std::size_t comma = spec.find(',', pos);
        std::string token = spec.substr(pos, comma == std::string::npos ? comma : comma - pos);
        pos = (comma == std::string::npos) ? spec.size() + 1 : comma + 1;
        if (token.empty()) throw std::invalid_argument("empty --states token");
        std::size_t dots = token.find("..");
        if (dots == std::string::npos) {
            out.push_back(std::stoul(token));
        } else {
            std::size_t a = std::stoul(token.substr(0, dots));
            std::size_t b = std::stoul(token.substr(dots + 2));
            if (a > b) throw std::invalid_argument("--states range is empty");
            for (std::size_t n = a; n <= b; ++n) out.push_back(n);
        }
    }
    if (out.empty()) throw std::invalid_argument("--states selects nothing");
    for (std::size_t n : out)
        if (n < 1) throw std::invalid_argument("--states values must be >= 1");
    return out;
}

int run_bench(const std::string& kind, const std::string& states_spec,
              std::size_t alphabet_size, std::size_t seeds, const std::string& out_path) {
    std::vector<std::size_t> sizes = parse_states_spec(states_spec);
    if (alphabet_size < 1 || alphabet_size > 26)
        throw std::invalid_argument("--alphabet-size must be in 1..26");
    if (seeds < 1) throw std::invalid_argument("--seeds must be >= 1");
    std::string alphabet = std::string("abcdefghijklmnopqrstuvwxyz").substr(0, alphabet_size);

    std::ofstream csv(out_path, std::ios::binary);
    if (!csv) throw qfa::IoError("cannot open '" + out_path + "' for writing");
    csv << "kind,n,alphabet_size,seed,distinct_queries,raw_queries,basis_size,"
           "learn_wall_time_s,verify_max_deviation\n";

    for (std::size_t n : sizes) {
        for (std::uint64_t seed = 0; seed < seeds; ++seed) {
            qfa::Automaton target = generate(kind, n, alphabet, seed);
            LearnOutcome learned = learn_dispatch(target, qfa::kTolRank, qfa::kTolIso);
            if (learned.report.outcome == qfa::Outcome::NotExist) {
                std::cerr << "bench: learner failed on n=" << n << " seed=" << seed << "\n";
                return kNotExist;
            }
            qfa::VerifyConfig cfg;
            cfg.seed = seed;
            qfa::VerifyReport vr = verify_dispatch(target, *learned.hypothesis, cfg);
            double dev = std::max(vr.max_trajectory_deviation, vr.max_probability_deviation);
            char line[256];
            std::snprintf(line, sizeof(line), "%s,%zu,%zu,%llu,%zu,%zu,%zu,%.9g,%.9g\n",
                          kind.c_str(), n, alphabet_size,
                          static_cast<unsigned long long>(seed),
                          learned.report.distinct_queries, learned.report.raw_queries,
                          learned.report.basis_size, learned.report.wall_time, dev);
            csv << line;
        }
    }
    if (!csv) throw qfa::IoError("write failure on '" + out_path + "'");
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum finite automata: simulation, oracle learning, verification"};
    app.require_subcommand(1);

    std::string kind = "mo", alphabet = "ab", out, target, learned, report, machine, word;
    std::string states_spec = "2..6";
    std::size_t states = 2, alphabet_size = 2, seeds = 1;
    std::uint64_t seed = 0;
    double tol_rank = qfa::kTolRank, tol_iso = qfa::kTolIso;
    qfa::VerifyConfig vcfg;

    auto* gen = app.add_subcommand("gen", "Generate a random target machine");
    gen->add_option("--kind", kind)->check(CLI::IsMember({"mo", "mm", "rfa"}))->required();
    gen->add_option("--states", states)->check(CLI::PositiveNumber)->required();
    gen->add_option("--alphabet", alphabet);
    gen->add_option("--seed", seed);
    gen->add_option("--out", out)->required();

    auto* learn = app.add_subcommand("learn", "Learn a hidden machine through the oracle");
    learn->add_option("--target", target)->required();
    learn->add_option("--out", out)->required();
    learn->add_option("--report", report);
    learn->add_option("--tol-rank", tol_rank)->check(CLI::PositiveNumber);
    learn->add_option("--tol-iso", tol_iso)->check(CLI::PositiveNumber);

    auto* verify = app.add_subcommand("verify", "Compare a learned machine against its target");
    verify->add_option("--target", target)->required();
    verify->add_option("--learned", learned)->required();
    verify->add_option("--max-len", vcfg.max_exhaustive_len);
    verify->add_option("--random", vcfg.random_trials);
    verify->add_option("--random-max-len", vcfg.random_max_len);
    verify->add_option("--seed", vcfg.seed);
    verify->add_option("--tol", vcfg.tol)->check(CLI::PositiveNumber);
    verify->add_option("--report", report);

    auto* accept = app.add_subcommand("accept", "Print acceptance probability for a word");
    accept->add_option("--machine", machine)->required();
    accept->add_option("--word", word);

    auto* bench = app.add_subcommand("bench", "Benchmark gen-learn-verify across sizes");
    bench->add_option("--kind", kind)->check(CLI::IsMember({"mo", "mm", "rfa"}))->required();
    bench->add_option("--states", states_spec)->required();
    bench->add_option("--alphabet-size", alphabet_size);
    bench->add_option("--seeds", seeds);
    bench->add_option("--out", out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (gen->parsed()) return run_gen(kind, states, alphabet, seed, out);
        if (learn->parsed()) return run_learn(target, out, report, tol_rank, tol_iso);
        if (verify->parsed()) return run_verify(target, learned, vcfg, report);
        if (accept->parsed()) return run_accept(machine, word);
        if (bench->parsed()) return run_bench(kind, states_spec, alphabet_size, seeds, out);
    } catch (const qfa::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoFailure;
    } catch (const qfa::FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const qfa::UnknownSymbol& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoFailure;
    }
    return kUsage;
}
