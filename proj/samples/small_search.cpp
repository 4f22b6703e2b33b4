// Genetic search at N=13 compared against the exhaustive optimum.

#include <cstdio>

#include "gaseq/gaseq.hpp"

int main() {
    gaseq::GaConfig config;
    config.N = 13;
    config.P = 200;
    config.E = 40;
    config.generations = 50;
    config.seed = 3;

    const auto result = gaseq::run(config);
    const auto exact = gaseq::brute_force_best(config.N);

    std::printf("GA best      %.6f  %s\n", result.best_gamma,
                gaseq::format_code(result.best_code).c_str());
    std::printf("exhaustive   %.6f  %s\n", exact.gamma, gaseq::format_code(exact.code).c_str());
    std::printf("visited states %zu of %zu\n", result.total_visited_states, std::size_t{1} << config.N);
}
