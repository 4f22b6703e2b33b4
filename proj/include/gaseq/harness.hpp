#pragma once

// Experiment harness behind the gaseq command-line tool: configuration files,
// run logs, result records and the per-subcommand drivers.
//
// Output layout of one search run in DIR:
//   DIR/run_log.csv         one row per generation (header kRunLogHeader)
//   DIR/plot_generation.csv generation,best_gamma
//   DIR/plot_visited.csv    visited_states,best_gamma
//   DIR/timings.csv         generation,elapsed_seconds (wall clock)
//   DIR/result.json         best code, gamma, config echo, environment
//
// Everything except timings.csv and the "environment" block of result.json
// is a deterministic function of the configuration.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "gaseq/baselines.hpp"
#include "gaseq/echo_sim.hpp"
#include "gaseq/errors.hpp"
#include "gaseq/ga_engine.hpp"
#include "gaseq/phase_code.hpp"
#include "gaseq/scr_fitness.hpp"

namespace gaseq::harness {

namespace fs = std::filesystem;

inline constexpr std::string_view kRunLogHeader =
    "run_id,seed,k,best_gamma,mean_gamma,distinct_members,visited_states,elapsed_seconds";

enum ExitCode : int {
    kOk = 0,
    kConfigError = 1,
    kIoError = 2,
    kInternalError = 3,
};

/// Reference figures reported next to the corresponding experiments.
inline constexpr double kReferenceGammaN59 = 50.84;
inline constexpr double kReferenceVisitedN59 = 2.4e5;
inline constexpr double kReferenceGammaN100 = 63.23;
inline constexpr double kReferenceVisitedN100 = 7.5e5;
inline constexpr double kHpganGamma = 45.16;

inline std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Configuration files: flat `key = value` lines, '#' comments.

inline std::map<std::string, std::string> parse_key_values(std::string_view text) {
    std::map<std::string, std::string> out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string{};
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        out[key] = value;
    }
    return out;
}

namespace detail {

inline std::uint64_t to_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
        const auto x = std::stoull(v, &used, 0);
        if (used != v.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "' expects a nonnegative integer, got '" + v + "'");
    }
}

inline double to_real(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const auto x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
    }
}

inline bool to_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw ConfigError("'" + key + "' expects a boolean, got '" + v + "'");
}

}  // namespace detail

/// Names of the published codes used when seeding the initial population.
inline std::vector<std::string> default_seed_names() { return {"alphaseq", "hpgan"}; }

/// Applies one configuration key. Keys mirror the hyperparameter table:
/// N, N_G, P, E, M, p_muta, p_conv, seed; plus threads, distinct_parents,
/// mutation (single_flip | per_symbol), fold_symmetries and seed_codes
/// (comma-separated registry names, or "none").
inline void apply_setting(GaConfig& c, const std::string& key, const std::string& value) {
    using namespace detail;
    if (key == "N") c.N = to_u64(key, value);
    else if (key == "N_G") c.generations = to_u64(key, value);
    else if (key == "P") c.P = to_u64(key, value);
    else if (key == "E") c.E = to_u64(key, value);
    else if (key == "M") c.M = to_u64(key, value);
    else if (key == "p_muta") c.p_muta = to_real(key, value);
    else if (key == "p_conv") c.p_conv = to_real(key, value);
    else if (key == "seed") c.seed = to_u64(key, value);
    else if (key == "threads") c.threads = static_cast<unsigned>(to_u64(key, value));
    else if (key == "distinct_parents") c.distinct_parents = to_bool(key, value);
    else if (key == "fold_symmetries") c.fold_symmetries = to_bool(key, value);
    else if (key == "mutation") {
        if (value == "single_flip") c.mutation = MutationMode::single_flip;
        else if (value == "per_symbol") c.mutation = MutationMode::per_symbol;
        else throw ConfigError("mutation must be single_flip or per_symbol");
    } else if (key == "seed_codes") {
        c.seed_codes.clear();
        if (value == "none" || value.empty()) return;
        std::istringstream in(value);
        std::string name;
        while (std::getline(in, name, ',')) {
            try {
                c.seed_codes.push_back(known_code(name).code);
            } catch (const ArgumentError& e) {
                throw ConfigError(e.what());
            }
        }
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

inline GaConfig load_config(const fs::path& path, GaConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    for (const auto& [k, v] : parse_key_values(ss.str())) apply_setting(base, k, v);
    return base;
}

inline nlohmann::json config_to_json(const GaConfig& c) {
    nlohmann::json seeds = nlohmann::json::array();
    for (const auto& s : c.seed_codes) seeds.push_back(format_code(s));
    return {{"N", c.N},
            {"N_G", c.generations},
            {"P", c.P},
            {"E", c.E},
            {"M", c.M},
            {"p_muta", c.p_muta},
            {"p_conv", c.p_conv},
            {"seed", c.seed},
            {"seed_codes", seeds},
            {"distinct_parents", c.distinct_parents},
            {"mutation", c.mutation == MutationMode::single_flip ? "single_flip" : "per_symbol"},
            {"fold_symmetries", c.fold_symmetries}};
}

// ---------------------------------------------------------------------------
// Files

inline void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

inline std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

/// Run-log rows. elapsed_seconds stays empty unless `record_timings`, so that
/// identical configurations give byte-identical logs.
inline void write_run_log_rows(std::ostream& os, std::string_view run_id, const RunResult& r,
                               bool record_timings) {
    for (const auto& h : r.history) {
        os << run_id << ',' << r.config.seed << ',' << h.k << ',' << format_real(h.best_gamma) << ','
           << format_real(h.mean_gamma) << ',' << h.distinct_members << ',' << h.visited_states << ',';
        if (record_timings) os << format_real(h.elapsed_seconds);
        os << '\n';
    }
}

inline void write_run_log(std::ostream& os, std::string_view run_id, const RunResult& r,
                          bool record_timings) {
    os << kRunLogHeader << '\n';
    write_run_log_rows(os, run_id, r, record_timings);
}

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline nlohmann::json result_record(const RunResult& r, unsigned threads) {
    const double elapsed = r.history.empty() ? 0.0 : r.history.back().elapsed_seconds;
    return {{"code", format_code(r.best_code)},
            {"gamma", r.best_gamma},
            {"N", r.best_code.size()},
            {"seed", r.config.seed},
            {"visited_states", r.total_visited_states},
            {"evaluations", r.total_evaluations},
            {"generations_run", r.history.empty() ? 0 : r.history.back().k},
            {"config", config_to_json(r.config)},
            {"environment",
             {{"written_at", utc_timestamp()}, {"threads", threads}, {"elapsed_seconds", elapsed}}}};
}

struct RecordCheck {
    double stored_gamma = 0.0;
    double recomputed_gamma = 0.0;
    bool ok = false;
};

/// Re-evaluates the code stored in a result file.
inline RecordCheck verify_result_file(const fs::path& path, double rel_tol = 1e-6) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    const auto j = nlohmann::json::parse(in);
    const auto code = parse_code(j.at("code").get<std::string>());
    RecordCheck c;
    c.stored_gamma = j.at("gamma").get<double>();
    const auto f = fitness(code);
    c.recomputed_gamma = f.gamma;
    c.ok = f.defined && std::abs(f.gamma - c.stored_gamma) <= rel_tol * std::abs(f.gamma);
    return c;
}

struct SearchOptions {
    bool record_timings = false;
    std::string run_id = "run0";
    std::ostream* progress = nullptr;
};

/// Writes every artifact of a finished run into `dir`.
inline void write_run_artifacts(const fs::path& dir, const RunResult& r, const SearchOptions& opt) {
    ensure_dir(dir);
    {
        auto out = open_out(dir / "run_log.csv");
        write_run_log(out, opt.run_id, r, opt.record_timings);
    }
    {
        auto out = open_out(dir / "plot_generation.csv");
        out << "generation,best_gamma\n";
        for (const auto& h : r.history) out << h.k << ',' << format_real(h.best_gamma) << '\n';
    }
    {
        auto out = open_out(dir / "plot_visited.csv");
        out << "visited_states,best_gamma\n";
        for (const auto& h : r.history)
            out << h.visited_states << ',' << format_real(h.best_gamma) << '\n';
    }
    {
        auto out = open_out(dir / "timings.csv");
        out << "generation,elapsed_seconds\n";
        for (const auto& h : r.history) out << h.k << ',' << format_real(h.elapsed_seconds) << '\n';
    }
    {
        auto out = open_out(dir / "result.json");
        out << result_record(r, r.config.threads).dump(2) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Subcommands. Each returns the process exit code; library exceptions are
// mapped by run_guarded().

inline RunResult cmd_search(const GaConfig& config, const fs::path& out_dir,
                            const SearchOptions& opt = {}) {
    config.validate();
    ensure_dir(out_dir);
    GenerationCallback cb;
    if (opt.progress) {
        cb = [&](const GenerationStats& h) {
            *opt.progress << "k=" << h.k << " best=" << format_real(h.best_gamma)
                          << " visited=" << h.visited_states << '\n';
        };
    }
    auto r = run(config, cb);
    write_run_artifacts(out_dir, r, opt);
    return r;
}

/// Prints N, the optimal SCR, the matched-filter SCR, the optimal filter and
/// the per-lag sidelobe terms of that filter.
inline int cmd_eval(const PhaseCode& s, std::ostream& os) {
    const auto f = fitness(s);
    const auto mf = matched_filter_scr(s);
    os << "N = " << s.size() << '\n';
    os << "code = " << format_code(s) << '\n';
    os << "gamma_mmf = " << (f.defined ? format_real(f.gamma) : "undefined") << '\n';
    os << "gamma_mf = " << (mf.defined ? format_real(mf.gamma) : "undefined") << '\n';
    const auto x = optimal_filter(s);
    if (!x) {
        os << "optimal_filter = undefined (clutter matrix singular)\n";
        return kOk;
    }
    os << "optimal_filter =";
    for (double v : *x) os << ' ' << format_real(v);
    os << '\n';
    os << "lag,sidelobe_power\n";
    for (const auto& [lag, p] : sidelobe_terms(s, *x)) os << lag << ',' << format_real(p) << '\n';
    return kOk;
}

/// Reads a code from `arg`: an existing file (first non-empty, non-comment
/// line), a registry name, or inline code text.
inline PhaseCode resolve_code(const std::string& arg) {
    std::error_code ec;
    if (fs::is_regular_file(arg, ec)) {
        std::ifstream in(arg);
        if (!in) throw IoError("cannot read " + arg);
        std::string line;
        while (std::getline(in, line)) {
            const auto b = line.find_first_not_of(" \t\r");
            if (b == std::string::npos || line[b] == '#') continue;
            return parse_code(line);
        }
        throw ParseError("no code found in " + arg, 0);
    }
    for (const auto& k : known_codes())
        if (k.name == arg) return k.code;
    return parse_code(arg);
}

/// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t sweep_seed(std::uint64_t seed, std::size_t n) { return seed ^ mix64(n); }

inline constexpr std::size_t kSweepMin = 2;
inline constexpr std::size_t kSweepMax = 256;

struct SweepRow {
    std::size_t N = 0;
    std::uint64_t seed = 0;
    double best_gamma = 0.0;
    std::size_t visited_states = 0;
    std::size_t evaluations = 0;
};

/// One search per N in [lo, hi], each in DIR/N<n>, plus DIR/sweep_summary.csv.
inline std::vector<SweepRow> cmd_sweep(const GaConfig& base, std::size_t lo, std::size_t hi,
                                       const fs::path& out_dir, const SearchOptions& opt = {},
                                       std::ostream* report = nullptr) {
    if (lo > hi || lo < kSweepMin || hi > kSweepMax)
        throw ConfigError("sweep range must satisfy 2 <= lo <= hi <= 256");
    if (!base.seed_codes.empty()) throw ConfigError("seed codes cannot be combined with a sweep");
    ensure_dir(out_dir);
    auto summary = open_out(out_dir / "sweep_summary.csv");
    summary << "N,seed,best_gamma,visited_states,evaluations\n";
    std::vector<SweepRow> rows;
    for (std::size_t n = lo; n <= hi; ++n) {
        GaConfig c = base;
        c.N = n;
        c.seed = sweep_seed(base.seed, n);
        SearchOptions o = opt;
        o.run_id = "N" + std::to_string(n);
        const auto r = cmd_search(c, out_dir / o.run_id, o);
        SweepRow row{n, c.seed, r.best_gamma, r.total_visited_states, r.total_evaluations};
        summary << row.N << ',' << row.seed << ',' << format_real(row.best_gamma) << ','
                << row.visited_states << ',' << row.evaluations << '\n';
        summary.flush();
        if (report) {
            *report << "N=" << n << " best_gamma=" << format_real(r.best_gamma)
                    << " visited_states=" << r.total_visited_states;
            if (n == 100)
                *report << " (reference: gamma " << kReferenceGammaN100 << ", visited "
                        << kReferenceVisitedN100 << ")";
            *report << '\n';
        }
        rows.push_back(row);
    }
    return rows;
}

enum class StudyVariable { init_seeding, tournament_M, elite_E };

inline StudyVariable parse_study_variable(std::string_view s) {
    if (s == "init_seeding") return StudyVariable::init_seeding;
    if (s == "tournament_M" || s == "M") return StudyVariable::tournament_M;
    if (s == "elite_E" || s == "E") return StudyVariable::elite_E;
    throw ConfigError("unknown study variable '" + std::string(s) + "'");
}

/// Runs the base configuration once per study value with the same seed and
/// writes DIR/study_trajectories.csv (value,k,best_gamma,visited_states) plus
/// one run directory per value. For init_seeding the values are "none" and
/// "known" (seeded with the published AlphaSeq and HpGAN codes).
inline std::vector<RunResult> cmd_study(const GaConfig& base, StudyVariable variable,
                                        const std::vector<std::string>& values,
                                        const fs::path& out_dir, const SearchOptions& opt = {}) {
    if (values.empty()) throw ConfigError("study needs at least one value");
    std::vector<GaConfig> configs;
    for (const auto& v : values) {
        GaConfig c = base;
        switch (variable) {
            case StudyVariable::init_seeding:
                if (v == "none") {
                    c.seed_codes.clear();
                } else if (v == "known") {
                    c.seed_codes.clear();
                    for (const auto& name : default_seed_names())
                        c.seed_codes.push_back(known_code(name).code);
                } else {
                    throw ConfigError("init_seeding values are 'none' and 'known'");
                }
                break;
            case StudyVariable::tournament_M:
                c.M = detail::to_u64("M", v);
                break;
            case StudyVariable::elite_E:
                c.E = detail::to_u64("E", v);
                break;
        }
        c.validate();
        configs.push_back(std::move(c));
    }
    ensure_dir(out_dir);
    auto traj = open_out(out_dir / "study_trajectories.csv");
    traj << "value,k,best_gamma,visited_states\n";
    std::vector<RunResult> results;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        SearchOptions o = opt;
        o.run_id = values[i];
        auto r = cmd_search(configs[i], out_dir / ("value_" + values[i]), o);
        for (const auto& h : r.history)
            traj << values[i] << ',' << h.k << ',' << format_real(h.best_gamma) << ','
                 << h.visited_states << '\n';
        traj.flush();
        results.push_back(std::move(r));
    }
    return results;
}

inline BruteForceResult cmd_bruteforce(std::size_t n, unsigned threads, std::ostream& os,
                                       const std::optional<fs::path>& out_dir = std::nullopt) {
    const auto r = brute_force_best(n, {.fold_negation = true, .fold_reversal = false, .threads = threads});
    os << "N = " << n << '\n'
       << "gamma = " << format_real(r.gamma) << '\n'
       << "code = " << format_code(r.code) << '\n'
       << "evaluated = " << r.evaluated << '\n';
    if (out_dir) {
        ensure_dir(*out_dir);
        auto out = open_out(*out_dir / "result.json");
        out << nlohmann::json{{"code", format_code(r.code)},
                              {"gamma", r.gamma},
                              {"N", n},
                              {"evaluated", r.evaluated},
                              {"method", "exhaustive"}}
                   .dump(2)
            << '\n';
    }
    return r;
}

/// Writes DIR/random_search.csv (evaluations,visited_states,best_gamma) and
/// DIR/result.json.
inline RunResult cmd_randomsearch(std::size_t n, std::size_t budget, std::uint64_t seed,
                                  const fs::path& out_dir) {
    Rng rng(seed);
    auto r = random_search(n, budget, rng);
    r.config.seed = seed;
    ensure_dir(out_dir);
    {
        auto out = open_out(out_dir / "random_search.csv");
        out << "evaluations,visited_states,best_gamma\n";
        for (const auto& h : r.history)
            out << h.k << ',' << h.visited_states << ',' << format_real(h.best_gamma) << '\n';
    }
    {
        auto out = open_out(out_dir / "result.json");
        out << nlohmann::json{{"code", format_code(r.best_code)},
                              {"gamma", r.best_gamma},
                              {"N", n},
                              {"seed", seed},
                              {"budget", budget},
                              {"visited_states", r.total_visited_states},
                              {"method", "random_search"}}
                   .dump(2)
            << '\n';
    }
    return r;
}

enum class FilterKind { optimal, matched };

struct SimulateReport {
    double analytic = 0.0;
    FitnessScore empirical;
    double relative_error = 0.0;
};

inline SimulateReport cmd_simulate(const PhaseCode& s, std::size_t trials, std::uint64_t seed,
                                   FilterKind filter, ClutterModel model, std::ostream& os) {
    std::vector<double> x;
    if (filter == FilterKind::optimal) {
        auto opt = optimal_filter(s);
        if (!opt) throw ArgumentError("clutter matrix is singular; optimal filter undefined");
        x = std::move(*opt);
    } else {
        x = s.as_real();
    }
    Rng rng(seed);
    SimulateReport rep;
    rep.analytic = scr(s, x).gamma;
    rep.empirical = empirical_sir(s, x, trials, rng, model);
    rep.relative_error = std::abs(rep.empirical.gamma - rep.analytic) / rep.analytic;
    os << "N = " << s.size() << '\n'
       << "filter = " << (filter == FilterKind::optimal ? "optimal" : "matched") << '\n'
       << "trials = " << trials << '\n'
       << "analytic_gamma = " << format_real(rep.analytic) << '\n'
       << "empirical_gamma = "
       << (rep.empirical.defined ? format_real(rep.empirical.gamma) : "undefined") << '\n'
       << "relative_error = " << format_real(rep.relative_error) << '\n';
    return rep;
}

}  // namespace gaseq::harness
