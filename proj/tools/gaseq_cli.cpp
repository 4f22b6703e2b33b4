// gaseq: command-line front end for the phase-code search library.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gaseq/harness.hpp"

namespace {

namespace fs = std::filesystem;
using namespace gaseq;
using namespace gaseq::harness;

// Hyperparameter flags shared by search / sweep / study. Values are kept as
// text and applied over the config file so flags always win.
struct GaFlags {
    std::optional<std::string> config_path;
    std::map<std::string, std::string> overrides;
    std::string out = "gaseq_out";
    bool timings = false;
    bool quiet = false;

    void attach(CLI::App* app) {
        app->add_option("--config", config_path, "key = value configuration file");
        app->add_option("--out", out, "output directory")->capture_default_str();
        app->add_flag("--timings", timings, "fill elapsed_seconds in the run log");
        app->add_flag("--quiet", quiet, "no per-generation progress");
        for (const char* key : {"N", "N_G", "P", "E", "M", "p_muta", "p_conv", "seed", "threads",
                                "mutation", "seed_codes"}) {
            app->add_option_function<std::string>(
                std::string("--") + key, [this, key](const std::string& v) { overrides[key] = v; },
                std::string("override ") + key);
        }
        app->add_flag_function(
            "--distinct-parents", [this](std::int64_t) { overrides["distinct_parents"] = "true"; },
            "require two different mating-pool slots per crossover");
        app->add_flag_function(
            "--fold-symmetries", [this](std::int64_t) { overrides["fold_symmetries"] = "true"; },
            "count visited states up to negation and reversal");
    }

    GaConfig config() const {
        GaConfig c = config_path ? load_config(*config_path) : table1_config();
        for (const auto& [k, v] : overrides) apply_setting(c, k, v);
        c.validate();
        return c;
    }

    SearchOptions options() const {
        SearchOptions o;
        o.record_timings = timings;
        o.progress = quiet ? nullptr : &std::cerr;
        return o;
    }
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

void print_run_summary(const RunResult& r, const fs::path& dir) {
    std::cout << "best_gamma = " << format_real(r.best_gamma) << '\n'
              << "best_code = " << format_code(r.best_code) << '\n'
              << "visited_states = " << r.total_visited_states << '\n'
              << "evaluations = " << r.total_evaluations << '\n';
    if (auto v = visited_states_to_reach(r, kHpganGamma))
        std::cout << "visited_states_to_" << kHpganGamma << " = " << *v << '\n';
    std::cout << "output = " << dir.string() << '\n';
}

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kConfigError;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const ArgumentError& e) {
        std::cerr << "argument error: " << e.what() << '\n';
        return kConfigError;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIoError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Binary phase-code search for pulse-compression radar with a mismatched filter"};
    app.require_subcommand(1);

    GaFlags search_flags;
    auto* search = app.add_subcommand("search", "run the genetic search once");
    search_flags.attach(search);

    std::string eval_code;
    auto* eval = app.add_subcommand("eval", "SCR report for one code");
    eval->add_option("code", eval_code, "code text, code file, or registry name")->required();

    GaFlags sweep_flags;
    std::size_t sweep_lo = 60, sweep_hi = 100;
    auto* sweep = app.add_subcommand("sweep", "search every code length in a range");
    sweep_flags.attach(sweep);
    sweep->add_option("--from", sweep_lo, "first code length")->capture_default_str();
    sweep->add_option("--to", sweep_hi, "last code length")->capture_default_str();

    GaFlags study_flags;
    std::string study_var, study_values;
    auto* study = app.add_subcommand("study", "vary one hyperparameter at a fixed seed");
    study_flags.attach(study);
    study->add_option("--variable", study_var, "init_seeding | tournament_M | elite_E")->required();
    study->add_option("--values", study_values, "comma-separated values")->required();

    std::size_t bf_n = 12;
    unsigned bf_threads = 1;
    std::optional<std::string> bf_out;
    auto* bf = app.add_subcommand("bruteforce", "exhaustive optimum for small N");
    bf->add_option("--N,N", bf_n, "code length (<= 20)")->required();
    bf->add_option("--threads", bf_threads, "worker threads")->capture_default_str();
    bf->add_option("--out", bf_out, "write result.json here");

    std::size_t rs_n = 59, rs_budget = 1000;
    std::uint64_t rs_seed = 1;
    std::string rs_out = "gaseq_out";
    auto* rs = app.add_subcommand("randomsearch", "uniform random search baseline");
    rs->add_option("--N,N", rs_n, "code length")->capture_default_str();
    rs->add_option("--budget,budget", rs_budget, "number of evaluations")->capture_default_str();
    rs->add_option("--seed", rs_seed, "random seed")->capture_default_str();
    rs->add_option("--out", rs_out, "output directory")->capture_default_str();

    std::string sim_code, sim_filter = "optimal", sim_clutter = "gaussian";
    std::size_t sim_trials = 100000;
    std::uint64_t sim_seed = 1;
    auto* sim = app.add_subcommand("simulate", "Monte-Carlo check of the analytic SCR");
    sim->add_option("code", sim_code, "code text, code file, or registry name")->required();
    sim->add_option("trials", sim_trials, "number of clutter realizations")->capture_default_str();
    sim->add_option("--seed", sim_seed, "random seed")->capture_default_str();
    sim->add_option("--filter", sim_filter, "optimal | matched")->capture_default_str();
    sim->add_option("--clutter", sim_clutter, "gaussian | uniform")->capture_default_str();

    std::optional<std::string> known_out;
    auto* known = app.add_subcommand("known", "export the published-code registry");
    known->add_option("--out", known_out, "file to write (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    if (*search) {
        return run_guarded([&] {
            const auto cfg = search_flags.config();
            const fs::path dir = search_flags.out;
            const auto r = cmd_search(cfg, dir, search_flags.options());
            print_run_summary(r, dir);
            return kOk;
        });
    }
    if (*eval) {
        return run_guarded([&] { return cmd_eval(resolve_code(eval_code), std::cout); });
    }
    if (*sweep) {
        return run_guarded([&] {
            cmd_sweep(sweep_flags.config(), sweep_lo, sweep_hi, sweep_flags.out,
                      sweep_flags.options(), &std::cout);
            return kOk;
        });
    }
    if (*study) {
        return run_guarded([&] {
            const auto results = cmd_study(study_flags.config(), parse_study_variable(study_var),
                                           split_list(study_values), study_flags.out,
                                           study_flags.options());
            const auto values = split_list(study_values);
            for (std::size_t i = 0; i < results.size(); ++i)
                std::cout << values[i] << ": best_gamma=" << format_real(results[i].best_gamma)
                          << " visited_states=" << results[i].total_visited_states << '\n';
            return kOk;
        });
    }
    if (*bf) {
        return run_guarded([&] {
            std::optional<fs::path> dir;
            if (bf_out) dir = *bf_out;
            cmd_bruteforce(bf_n, bf_threads, std::cout, dir);
            return kOk;
        });
    }
    if (*rs) {
        return run_guarded([&] {
            const auto r = cmd_randomsearch(rs_n, rs_budget, rs_seed, rs_out);
            std::cout << "evaluations,visited_states,best_gamma\n";
            for (const auto& h : r.history)
                std::cout << h.k << ',' << h.visited_states << ',' << format_real(h.best_gamma) << '\n';
            return kOk;
        });
    }
    if (*sim) {
        return run_guarded([&] {
            FilterKind filter;
            if (sim_filter == "optimal") filter = FilterKind::optimal;
            else if (sim_filter == "matched") filter = FilterKind::matched;
            else throw ConfigError("--filter must be optimal or matched");
            ClutterModel model;
            if (sim_clutter == "gaussian") model = ClutterModel::gaussian;
            else if (sim_clutter == "uniform") model = ClutterModel::uniform;
            else throw ConfigError("--clutter must be gaussian or uniform");
            cmd_simulate(resolve_code(sim_code), sim_trials, sim_seed, filter, model, std::cout);
            return kOk;
        });
    }
    if (*known) {
        return run_guarded([&] {
            if (known_out) {
                auto out = open_out(*known_out);
                write_known_codes(out);
            } else {
                write_known_codes(std::cout);
            }
            return kOk;
        });
    }
    return kInternalError;
}
