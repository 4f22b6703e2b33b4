#pragma once

// Reference points for the search: published length-59 sequences, uniform
// random search and exhaustive enumeration for small N.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "gaseq/errors.hpp"
#include "gaseq/ga_engine.hpp"
#include "gaseq/phase_code.hpp"
#include "gaseq/scr_fitness.hpp"

namespace gaseq {

struct KnownCode {
    std::string name;
    PhaseCode code;
    double published_gamma = 0.0;
    std::string source;
};

/// FNV-1a over the code text format.
inline std::uint64_t code_checksum(const PhaseCode& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : format_code(s)) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace detail {

struct KnownCodeData {
    std::string_view name;
    std::string_view text;
    double published_gamma;
    std::uint64_t checksum;
    std::string_view source;
};

// Row-major transcriptions of the published 10-column listings.
inline constexpr KnownCodeData kKnownCodes[] = {
    {"legendre",
     "+1,+1,-1,+1,+1,+1,-1,+1,-1,+1,"
     "-1,-1,+1,-1,-1,+1,+1,+1,-1,+1,"
     "+1,+1,+1,-1,-1,+1,+1,+1,+1,+1,"
     "-1,-1,-1,-1,-1,+1,+1,-1,-1,-1,"
     "-1,+1,-1,-1,-1,+1,+1,-1,+1,+1,"
     "-1,+1,-1,+1,-1,-1,-1,+1,-1",
     2.69, 0x4a3b60b64a7b9807ULL, "Legendre sequence, N=59"},
    {"alphaseq",
     "+1,+1,+1,+1,+1,+1,+1,+1,+1,+1,"
     "+1,+1,+1,+1,+1,+1,-1,-1,-1,-1,"
     "-1,-1,-1,-1,+1,+1,+1,-1,-1,+1,"
     "+1,-1,+1,+1,-1,+1,-1,-1,+1,-1,"
     "+1,-1,+1,-1,-1,+1,-1,+1,-1,+1,"
     "-1,+1,-1,+1,-1,+1,-1,+1,-1",
     33.45, 0x6b5123d7cce697dfULL, "AlphaSeq (deep reinforcement learning), N=59"},
    {"hpgan",
     "-1,+1,-1,+1,-1,+1,-1,+1,-1,+1,"
     "-1,+1,-1,+1,-1,+1,+1,-1,+1,-1,"
     "+1,-1,+1,-1,-1,+1,-1,+1,+1,+1,"
     "-1,+1,+1,-1,-1,-1,-1,+1,+1,+1,"
     "+1,+1,+1,-1,-1,-1,-1,-1,-1,-1,"
     "-1,-1,-1,-1,-1,-1,-1,-1,-1",
     45.16, 0x665b575035b1c167ULL, "HpGAN (generative adversarial network), N=59"},
    {"gaseq",
     "+1,+1,+1,+1,+1,+1,+1,+1,+1,+1,"
     "+1,+1,+1,+1,+1,+1,+1,-1,-1,-1,"
     "-1,-1,+1,+1,+1,-1,-1,+1,+1,+1,"
     "-1,+1,+1,-1,-1,+1,-1,-1,+1,-1,"
     "+1,-1,-1,+1,-1,+1,-1,+1,-1,+1,"
     "-1,+1,-1,+1,-1,+1,-1,+1,-1",
     50.84, 0x919f6400f6434bafULL, "genetic algorithm search, N=59"},
};

}  // namespace detail

/// The four published N=59 sequences. Throws std::logic_error if a stored
/// transcription no longer matches its checksum.
inline const std::vector<KnownCode>& known_codes() {
    static const std::vector<KnownCode> codes = [] {
        std::vector<KnownCode> out;
        for (const auto& d : detail::kKnownCodes) {
            PhaseCode code = parse_code(d.text);
            if (code.size() != 59 || code_checksum(code) != d.checksum)
                throw std::logic_error("known code '" + std::string(d.name) +
                                       "' failed its checksum");
            out.push_back({std::string(d.name), std::move(code), d.published_gamma,
                           std::string(d.source)});
        }
        return out;
    }();
    return codes;
}

inline const KnownCode& known_code(std::string_view name) {
    for (const auto& k : known_codes())
        if (k.name == name) return k;
    throw ArgumentError("unknown known code '" + std::string(name) + "'");
}

struct KnownCodeCheck {
    const KnownCode* code = nullptr;
    double computed_gamma = 0.0;
    bool matches = false;
};

/// Recomputes every registry entry and compares to its published SCR at the
/// two-decimal reporting tolerance.
inline std::vector<KnownCodeCheck> verify_known_codes(double tolerance = 0.01) {
    std::vector<KnownCodeCheck> out;
    for (const auto& k : known_codes()) {
        const auto f = fitness(k.code);
        out.push_back({&k, f.gamma, f.defined && std::abs(f.gamma - k.published_gamma) <= tolerance});
    }
    return out;
}

/// One line per code: `name<TAB>published_gamma<TAB>code`.
inline void write_known_codes(std::ostream& os) {
    os << "# name\tpublished_gamma\tcode\n";
    for (const auto& k : known_codes())
        os << k.name << '\t' << k.published_gamma << '\t' << format_code(k.code) << '\n';
}

// ---------------------------------------------------------------------------

/// Evaluates `budget` uniform random codes through `cache`. The history holds
/// best-so-far snapshots after 1, 10, 100, ... evaluations and after the last
/// one; in these rows `k` is the number of evaluations performed.
inline RunResult random_search(std::size_t n, std::size_t budget, Rng& rng, FitnessCache& cache) {
    if (budget < 1) throw ArgumentError("random_search: budget must be >= 1");
    RunResult result;
    result.config.N = n;
    FitnessScore best{};
    std::size_t next_checkpoint = 1;
    for (std::size_t e = 1; e <= budget; ++e) {
        PhaseCode s = random_code(n, rng);
        const auto score = cache.get(s).score;
        if (result.best_code.empty() || better(score, best)) {
            best = score;
            result.best_code = std::move(s);
        }
        if (e == next_checkpoint || e == budget) {
            GenerationStats st;
            st.k = e;
            st.best_gamma = best.gamma;
            st.visited_states = cache.miss_count();
            st.evaluations = cache.evaluations();
            result.history.push_back(st);
            if (e == next_checkpoint) next_checkpoint *= 10;
        }
    }
    result.best_gamma = best.gamma;
    result.total_visited_states = cache.miss_count();
    result.total_evaluations = cache.evaluations();
    return result;
}

inline RunResult random_search(std::size_t n, std::size_t budget, Rng& rng) {
    FitnessCache cache;
    return random_search(n, budget, rng, cache);
}

// ---------------------------------------------------------------------------

struct BruteForceOptions {
    bool fold_negation = true;
    bool fold_reversal = false;
    unsigned threads = 1;
};

struct BruteForceResult {
    PhaseCode code;
    double gamma = 0.0;
    std::size_t evaluated = 0;
};

inline constexpr std::size_t kBruteForceMaxN = 20;

namespace detail {

// Relative tolerance under which two optima count as tied. Reversal-related
// codes agree only to rounding, so exact equality would make the winner
// depend on enumeration order.
inline constexpr double kTieTolerance = 1e-9;

inline PhaseCode code_from_bits(std::size_t n, std::uint64_t bits) {
    // Bit (n-1-k) set means symbol k is +1, so increasing `bits` walks codes
    // in lexicographic order with -1 < +1.
    std::vector<PhaseCode::Symbol> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = ((bits >> (n - 1 - k)) & 1U) ? 1 : -1;
    return PhaseCode(std::move(out));
}

inline PhaseCode normalize_sign(const PhaseCode& s) { return s[0] < 0 ? s : s.negated(); }

inline bool reversal_canonical(const PhaseCode& s) {
    return s <= normalize_sign(s.reversed());
}

struct Best {
    PhaseCode code;
    double gamma = -1.0;
    std::size_t evaluated = 0;

    void offer(const PhaseCode& s, double g) {
        const double tol = kTieTolerance * std::max(1.0, std::max(g, gamma));
        if (code.empty() || g > gamma + tol) {
            code = s;
            gamma = g;
        } else if (g >= gamma - tol && s < code) {
            code = s;
            gamma = g;
        }
    }

    void merge(const Best& other) {
        evaluated += other.evaluated;
        if (!other.code.empty()) offer(other.code, other.gamma);
    }
};

}  // namespace detail

/// Exact argmax of fitness over {+1,-1}^N, N <= 20. Among (tolerance-) tied
/// optima the lexicographically smallest code is returned, -1 before +1.
/// With negation folding only codes starting with -1 are evaluated; the
/// optional reversal fold additionally skips codes whose sign-normalized
/// reverse is smaller. Neither fold can discard the returned code.
inline BruteForceResult brute_force_best(std::size_t n, const BruteForceOptions& opt = {}) {
    if (n < 2 || n > kBruteForceMaxN)
        throw ArgumentError("brute_force_best: N must be in [2, " +
                            std::to_string(kBruteForceMaxN) + "]");
    const std::uint64_t count = opt.fold_negation ? (1ULL << (n - 1)) : (1ULL << n);
    auto work = [&](std::uint64_t lo, std::uint64_t hi, detail::Best& best) {
        for (std::uint64_t b = lo; b < hi; ++b) {
            const PhaseCode s = detail::code_from_bits(n, b);
            if (opt.fold_reversal && !detail::reversal_canonical(s)) continue;
            const auto f = fitness(s);
            ++best.evaluated;
            if (f.defined) best.offer(s, f.gamma);
        }
    };
    const std::size_t t = std::max<unsigned>(1, opt.threads);
    std::vector<detail::Best> partial(t);
    if (t == 1) {
        work(0, count, partial[0]);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < t; ++w)
            pool.emplace_back(work, count * w / t, count * (w + 1) / t, std::ref(partial[w]));
    }
    detail::Best best;
    for (const auto& p : partial) best.merge(p);
    return {best.code, best.gamma, best.evaluated};
}

}  // namespace gaseq
