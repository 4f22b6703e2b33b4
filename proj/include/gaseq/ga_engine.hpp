#pragma once

// Genetic search over binary phase codes.
//
// One generation: elite selection -> tournament selection -> crossover ->
// mutation -> duplicate thinning -> random padding -> evaluation.
//
// Random-number contract: a single Rng seeded from GaConfig::seed. Evaluation
// draws nothing, and every stochastic operator draws on the calling thread in
// the order documented on step_generation(), so the trajectory does not depend
// on GaConfig::threads.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gaseq/errors.hpp"
#include "gaseq/phase_code.hpp"
#include "gaseq/scr_fitness.hpp"

namespace gaseq {

enum class MutationMode {
    single_flip,  ///< with probability p_muta flip exactly one uniform position
    per_symbol,   ///< flip every symbol independently with probability p_muta
};

struct GaConfig {
    std::size_t N = 59;
    std::size_t generations = 200;  ///< N_G
    std::size_t P = 10000;
    std::size_t E = 2000;
    std::size_t M = 5;
    double p_muta = 0.3;
    double p_conv = 0.7;
    std::uint64_t seed = 1;
    std::vector<PhaseCode> seed_codes;

    bool distinct_parents = false;
    MutationMode mutation = MutationMode::single_flip;
    bool fold_symmetries = false;  ///< symmetry-folded visited-states counting
    unsigned threads = 1;          ///< evaluation parallelism; never changes results

    void validate() const {
        if (N < 2) throw ConfigError("N must be >= 2");
        if (generations < 1) throw ConfigError("N_G must be >= 1");
        if (E == 0 || E >= P) throw ConfigError("E must satisfy 0 < E < P");
        if (M < 2 || M > P) throw ConfigError("M must satisfy 2 <= M <= P");
        if (!(p_muta >= 0.0 && p_muta <= 1.0)) throw ConfigError("p_muta must be in [0,1]");
        if (!(p_conv >= 0.0 && p_conv <= 1.0)) throw ConfigError("p_conv must be in [0,1]");
        if (seed_codes.size() > P) throw ConfigError("more seed codes than population slots");
        for (const auto& c : seed_codes)
            if (c.size() != N) throw ConfigError("seed code length differs from N");
        if (threads == 0) throw ConfigError("threads must be >= 1");
    }
};

/// Table 1 defaults: N=59, N_G=200, P=10000, E=2000, M=5, p_muta=0.3, p_conv=0.7.
inline GaConfig table1_config() { return GaConfig{}; }

struct Population {
    std::size_t generation = 0;
    std::vector<PhaseCode> members;
    std::vector<FitnessScore> scores;  ///< parallel to members once evaluated

    std::size_t size() const noexcept { return members.size(); }
    bool evaluated() const noexcept { return scores.size() == members.size(); }
};

struct GenerationStats {
    std::size_t k = 0;
    double best_gamma = 0.0;
    double mean_gamma = 0.0;
    std::size_t distinct_members = 0;
    std::size_t visited_states = 0;  ///< cumulative distinct codes evaluated
    std::size_t evaluations = 0;     ///< cumulative fitness requests, repeats included
    double elapsed_seconds = 0.0;
};

struct RunResult {
    PhaseCode best_code;
    double best_gamma = 0.0;
    std::vector<GenerationStats> history;
    GaConfig config;
    std::size_t total_visited_states = 0;
    std::size_t total_evaluations = 0;
};

/// Cumulative visited states at the first logged point whose best gamma
/// reaches `threshold`, if any.
inline std::optional<std::size_t> visited_states_to_reach(const RunResult& r, double threshold) {
    for (const auto& h : r.history)
        if (h.best_gamma >= threshold) return h.visited_states;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Initialization and evaluation

/// Draws P uniform random codes, then overwrites the leading slots with the
/// configured seed codes. Seeded and unseeded runs therefore share every
/// random member after the seeds.
inline Population init_population(const GaConfig& config, Rng& rng) {
    for (const auto& c : config.seed_codes)
        if (c.size() != config.N) throw ConfigError("seed code length differs from N");
    if (config.seed_codes.size() > config.P) throw ConfigError("more seed codes than P");
    Population pop;
    pop.members.reserve(config.P);
    for (std::size_t p = 0; p < config.P; ++p) pop.members.push_back(random_code(config.N, rng));
    std::copy(config.seed_codes.begin(), config.seed_codes.end(), pop.members.begin());
    return pop;
}

/// Fills every score through the cache, optionally on several threads.
inline void evaluate(Population& pop, FitnessCache& cache, unsigned threads = 1) {
    pop.scores.assign(pop.members.size(), FitnessScore{});
    const std::size_t n = pop.members.size();
    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) pop.scores[p] = cache.get(pop.members[p]).score;
    };
    const std::size_t t = std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
    if (t == 1) {
        work(0, n);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(t);
    for (std::size_t w = 0; w < t; ++w) pool.emplace_back(work, n * w / t, n * (w + 1) / t);
}

// ---------------------------------------------------------------------------
// Selection

namespace detail {

inline void require_scores(const Population& pop) {
    if (!pop.evaluated()) throw ArgumentError("population has not been evaluated");
}

// Strict total order: better score first, lower index on ties.
inline bool ranks_before(const Population& pop, std::size_t a, std::size_t b) {
    if (better(pop.scores[a], pop.scores[b])) return true;
    if (better(pop.scores[b], pop.scores[a])) return false;
    return a < b;
}

}  // namespace detail

/// Indices of the E best members, best first.
inline std::vector<std::size_t> elite_indices(const Population& pop, std::size_t E) {
    detail::require_scores(pop);
    if (E > pop.size()) throw ArgumentError("elite count exceeds population");
    std::vector<std::size_t> idx(pop.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::partial_sort(idx.begin(), idx.begin() + static_cast<long>(E), idx.end(),
                      [&](std::size_t a, std::size_t b) { return detail::ranks_before(pop, a, b); });
    idx.resize(E);
    return idx;
}

inline std::vector<PhaseCode> elite_select(const Population& pop, std::size_t E) {
    std::vector<PhaseCode> out;
    out.reserve(E);
    for (auto i : elite_indices(pop, E)) out.push_back(pop.members[i]);
    return out;
}

/// M distinct indices from [0, P), Floyd's algorithm.
inline std::vector<std::size_t> sample_distinct(std::size_t P, std::size_t M, Rng& rng) {
    std::vector<std::size_t> chosen;
    chosen.reserve(M);
    for (std::size_t j = P - M; j < P; ++j) {
        const std::size_t t = std::uniform_int_distribution<std::size_t>(0, j)(rng);
        if (std::find(chosen.begin(), chosen.end(), t) == chosen.end())
            chosen.push_back(t);
        else
            chosen.push_back(j);
    }
    return chosen;
}

/// Winner indices of `count` independent size-M tournaments over the whole
/// population (elites included). Members within one tournament are distinct.
inline std::vector<std::size_t> tournament_indices(const Population& pop, std::size_t M,
                                                   std::size_t count, Rng& rng) {
    detail::require_scores(pop);
    if (M < 1 || M > pop.size()) throw ArgumentError("tournament size must be in [1, P]");
    std::vector<std::size_t> winners;
    winners.reserve(count);
    for (std::size_t t = 0; t < count; ++t) {
        const auto drawn = sample_distinct(pop.size(), M, rng);
        std::size_t best = drawn.front();
        for (auto i : drawn)
            if (detail::ranks_before(pop, i, best)) best = i;
        winners.push_back(best);
    }
    return winners;
}

inline std::vector<PhaseCode> tournament_select(const Population& pop, std::size_t M,
                                                std::size_t count, Rng& rng) {
    std::vector<PhaseCode> out;
    out.reserve(count);
    for (auto i : tournament_indices(pop, M, count, rng)) out.push_back(pop.members[i]);
    return out;
}

/// Probability that the rank-i member (1 = best) wins one tournament of size
/// M over P members: C(P-i, M-1) / C(P, M).
///
/// The printed closed form carries an extra factor M and sums to M over all
/// ranks; this is the normalized version, accumulated as a product of ratios
/// so large P does not overflow.
inline double tournament_win_probability(std::size_t P, std::size_t M, std::size_t i) {
    if (M < 1 || M > P) throw ArgumentError("tournament size must be in [1, P]");
    if (i < 1 || i > P) throw ArgumentError("rank must be in [1, P]");
    if (i > P - M + 1) return 0.0;
    double p = static_cast<double>(M) / static_cast<double>(P);
    for (std::size_t t = 0; t + 1 < M; ++t)
        p *= static_cast<double>(P - i - t) / static_cast<double>(P - 1 - t);
    return p;
}

/// Probability that the rank-i member wins at least one of the P-E tournaments.
inline double survival_probability(std::size_t P, std::size_t M, std::size_t i, std::size_t E) {
    if (E >= P) throw ArgumentError("elite count must be < P");
    const double p = tournament_win_probability(P, M, i);
    if (p >= 1.0) return 1.0;
    return -std::expm1(static_cast<double>(P - E) * std::log1p(-p));
}

// ---------------------------------------------------------------------------
// Variation

/// Child = a[0..split) ++ b[split..N).
inline PhaseCode crossover(const PhaseCode& a, const PhaseCode& b, std::size_t split) {
    if (a.size() != b.size()) throw DimensionError("crossover: parent lengths differ");
    if (split < 1 || split > a.size() - 1) throw ArgumentError("crossover: split out of [1, N-1]");
    std::vector<PhaseCode::Symbol> child(a.symbols().begin(), a.symbols().end());
    std::copy(b.symbols().begin() + static_cast<long>(split), b.symbols().end(),
              child.begin() + static_cast<long>(split));
    return PhaseCode(std::move(child));
}

inline std::size_t draw_split(std::size_t n, Rng& rng) {
    return std::uniform_int_distribution<std::size_t>(1, n - 1)(rng);
}

inline PhaseCode crossover(const PhaseCode& a, const PhaseCode& b, Rng& rng) {
    if (a.size() != b.size()) throw DimensionError("crossover: parent lengths differ");
    return crossover(a, b, draw_split(a.size(), rng));
}

/// With probability p_muta, flips exactly one uniformly chosen symbol.
inline PhaseCode mutate(const PhaseCode& s, double p_muta, Rng& rng) {
    if (!(p_muta >= 0.0 && p_muta <= 1.0)) throw ArgumentError("p_muta must be in [0,1]");
    if (!std::bernoulli_distribution(p_muta)(rng)) return s;
    return s.flipped(std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng));
}

inline PhaseCode mutate_per_symbol(const PhaseCode& s, double p_muta, Rng& rng) {
    if (!(p_muta >= 0.0 && p_muta <= 1.0)) throw ArgumentError("p_muta must be in [0,1]");
    std::bernoulli_distribution flip(p_muta);
    std::vector<PhaseCode::Symbol> out(s.symbols().begin(), s.symbols().end());
    for (auto& v : out)
        if (flip(rng)) v = static_cast<PhaseCode::Symbol>(-v);
    return PhaseCode(std::move(out));
}

/// Keeps the first occurrence of every distinct code; each later occurrence
/// survives independently with probability p_conv. Order is preserved.
inline std::vector<PhaseCode> prevent_early_convergence(const std::vector<PhaseCode>& codes,
                                                        double p_conv, Rng& rng) {
    if (!(p_conv >= 0.0 && p_conv <= 1.0)) throw ArgumentError("p_conv must be in [0,1]");
    std::bernoulli_distribution keep(p_conv);
    std::unordered_set<PhaseCode> seen;
    seen.reserve(codes.size());
    std::vector<PhaseCode> out;
    out.reserve(codes.size());
    for (const auto& c : codes) {
        if (seen.insert(c).second || keep(rng)) out.push_back(c);
    }
    return out;
}

/// Appends fresh random codes of length N until there are P.
inline std::vector<PhaseCode> pad_population(std::vector<PhaseCode> codes, std::size_t P,
                                             std::size_t N, Rng& rng) {
    if (codes.size() > P) throw std::logic_error("pad_population: more codes than P");
    codes.reserve(P);
    while (codes.size() < P) codes.push_back(random_code(N, rng));
    return codes;
}

// ---------------------------------------------------------------------------
// Generation step and full run

/// One generation. Random draws, in order: P-E tournaments (M draws each);
/// then per child: parent a, parent b, split point, mutation draws; then one
/// keep/drop draw per repeated code; then the padding codes.
inline Population step_generation(const Population& pop, const GaConfig& config,
                                  FitnessCache& cache, Rng& rng) {
    detail::require_scores(pop);
    const std::size_t P = config.P;
    const std::size_t E = config.E;

    const auto elite = elite_indices(pop, E);
    const auto winners = tournament_indices(pop, config.M, P - E, rng);

    // Mating pool [tournament winners, elites], as population indices.
    std::vector<std::size_t> pool(winners);
    pool.insert(pool.end(), elite.begin(), elite.end());

    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::vector<PhaseCode> next;
    next.reserve(P);
    for (std::size_t c = 0; c < P - E; ++c) {
        const std::size_t a = pick(rng);
        std::size_t b = pick(rng);
        while (config.distinct_parents && b == a) b = pick(rng);
        PhaseCode child = crossover(pop.members[pool[a]], pop.members[pool[b]], rng);
        child = config.mutation == MutationMode::single_flip
                    ? mutate(child, config.p_muta, rng)
                    : mutate_per_symbol(child, config.p_muta, rng);
        next.push_back(std::move(child));
    }
    for (auto i : elite) next.push_back(pop.members[i]);

    Population out;
    out.generation = pop.generation + 1;
    out.members =
        pad_population(prevent_early_convergence(next, config.p_conv, rng), P, config.N, rng);
    evaluate(out, cache, config.threads);
    return out;
}

namespace detail {

inline GenerationStats summarize(const Population& pop, const FitnessCache& cache,
                                 double best_so_far, double elapsed) {
    GenerationStats st;
    st.k = pop.generation;
    double sum = 0.0;
    std::size_t defined = 0;
    for (const auto& s : pop.scores) {
        if (!s.defined) continue;
        sum += s.gamma;
        ++defined;
    }
    st.best_gamma = best_so_far;
    st.mean_gamma = defined ? sum / static_cast<double>(defined) : 0.0;
    st.distinct_members = std::unordered_set<PhaseCode>(pop.members.begin(), pop.members.end()).size();
    st.visited_states = cache.miss_count();
    st.evaluations = cache.evaluations();
    st.elapsed_seconds = elapsed;
    return st;
}

}  // namespace detail

using GenerationCallback = std::function<void(const GenerationStats&)>;

/// Initial population plus N_G generation steps. The best code is tracked over
/// every evaluated member, first occurrence winning ties.
inline RunResult run(const GaConfig& config, const GenerationCallback& on_generation = {}) {
    config.validate();
    using Clock = std::chrono::steady_clock;
    const auto t0 = Clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - t0).count(); };

    Rng rng(config.seed);
    FitnessCache cache(config.fold_symmetries);
    RunResult result;
    result.config = config;

    FitnessScore best{};
    auto track = [&](const Population& pop) {
        for (std::size_t p = 0; p < pop.size(); ++p) {
            if (result.best_code.empty() || better(pop.scores[p], best)) {
                best = pop.scores[p];
                result.best_code = pop.members[p];
            }
        }
        result.history.push_back(detail::summarize(pop, cache, best.gamma, elapsed()));
        if (on_generation) on_generation(result.history.back());
    };

    Population pop = init_population(config, rng);
    evaluate(pop, cache, config.threads);
    track(pop);
    for (std::size_t g = 0; g < config.generations; ++g) {
        pop = step_generation(pop, config, cache, rng);
        track(pop);
    }
    result.best_gamma = best.gamma;
    result.total_visited_states = cache.miss_count();
    result.total_evaluations = cache.evaluations();
    return result;
}

}  // namespace gaseq
