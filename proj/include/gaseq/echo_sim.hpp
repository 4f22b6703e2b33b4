#pragma once

// Monte-Carlo model of the received signal
//     y = h0 s + sum_{i != 0} h_i J_i s + w
// and of the receiver output x^T y, used to check the analytic SCR against an
// empirical signal-to-clutter power ratio.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "gaseq/errors.hpp"
#include "gaseq/phase_code.hpp"
#include "gaseq/scr_fitness.hpp"

namespace gaseq {

enum class ClutterModel {
    gaussian,  ///< h_i ~ N(0, 1)
    uniform,   ///< h_i ~ U(-sqrt 3, sqrt 3), also unit variance
    none,      ///< h_i = 0
};

struct EchoScenario {
    double h0 = 1.0;
    /// h_i for i = 1-N, ..., -1, 1, ..., N-1 (lag 0 skipped), 2N-2 entries.
    std::vector<double> clutter_rcs;
    double noise_std = 0.0;

    void validate(std::size_t n) const {
        if (clutter_rcs.size() != 2 * n - 2)
            throw ArgumentError("clutter_rcs must hold 2N-2 entries");
        if (!(noise_std >= 0.0)) throw ArgumentError("noise_std must be >= 0");
    }
};

/// Lag carried by clutter_rcs[j].
inline Lag clutter_lag(std::size_t n, std::size_t j) {
    const int first = 1 - static_cast<int>(n);
    const int lag = first + static_cast<int>(j);
    return Lag{lag >= 0 ? lag + 1 : lag};
}

inline std::vector<double> draw_clutter(std::size_t n, ClutterModel model, Rng& rng) {
    std::vector<double> h(2 * n - 2, 0.0);
    switch (model) {
        case ClutterModel::gaussian: {
            std::normal_distribution<double> d(0.0, 1.0);
            for (auto& v : h) v = d(rng);
            break;
        }
        case ClutterModel::uniform: {
            const double a = std::sqrt(3.0);
            std::uniform_real_distribution<double> d(-a, a);
            for (auto& v : h) v = d(rng);
            break;
        }
        case ClutterModel::none:
            break;
    }
    return h;
}

/// Components of x^T y for one realization.
struct TrialResult {
    double signal_component = 0.0;   ///< h0 x^T s
    double clutter_component = 0.0;  ///< sum_i h_i x^T J_i s
    double noise_component = 0.0;    ///< x^T w

    double output() const noexcept { return signal_component + clutter_component + noise_component; }
};

/// Received vector for the given scenario. Noise is drawn from `rng` only when
/// noise_std > 0.
inline std::vector<double> simulate_received(const PhaseCode& s, const EchoScenario& scenario,
                                             Rng& rng, std::vector<double>* noise_out = nullptr) {
    const std::size_t n = s.size();
    scenario.validate(n);
    std::vector<double> y(n);
    for (std::size_t k = 0; k < n; ++k) y[k] = scenario.h0 * s[k];
    for (std::size_t j = 0; j < scenario.clutter_rcs.size(); ++j) {
        const double h = scenario.clutter_rcs[j];
        if (h == 0.0) continue;
        const auto v = shifted(s, clutter_lag(n, j));
        for (std::size_t k = 0; k < n; ++k) y[k] += h * v[k];
    }
    std::vector<double> w(n, 0.0);
    if (scenario.noise_std > 0.0) {
        std::normal_distribution<double> d(0.0, scenario.noise_std);
        for (auto& v : w) v = d(rng);
        for (std::size_t k = 0; k < n; ++k) y[k] += w[k];
    }
    if (noise_out) *noise_out = std::move(w);
    return y;
}

/// x^T y.
inline double mmf_output(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DimensionError("mmf_output: length mismatch");
    return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

/// Simulates one received vector and splits the receiver output into its
/// signal, clutter and noise parts, each computed directly from the model.
inline TrialResult simulate_trial(const PhaseCode& s, std::span<const double> x,
                                  const EchoScenario& scenario, Rng& rng) {
    if (x.size() != s.size()) throw DimensionError("simulate_trial: length mismatch");
    std::vector<double> w;
    (void)simulate_received(s, scenario, rng, &w);
    TrialResult r;
    r.signal_component = scenario.h0 * cross_correlation(x, s, Lag{0});
    for (std::size_t j = 0; j < scenario.clutter_rcs.size(); ++j)
        r.clutter_component +=
            scenario.clutter_rcs[j] * cross_correlation(x, s, clutter_lag(s.size(), j));
    r.noise_component = mmf_output(x, w);
    return r;
}

/// (x^T s)^2 over the trial mean of the squared clutter output, with h0 = 1,
/// noise off and h_i i.i.d. unit variance. Undefined (gamma = +inf) when every
/// trial produced zero clutter.
inline FitnessScore empirical_sir(const PhaseCode& s, std::span<const double> x,
                                  std::size_t trials, Rng& rng,
                                  ClutterModel model = ClutterModel::gaussian) {
    if (x.size() != s.size()) throw DimensionError("empirical_sir: length mismatch");
    if (trials < 1) throw ArgumentError("empirical_sir: trials must be >= 1");
    const std::size_t n = s.size();
    std::vector<double> response(2 * n - 2);
    for (std::size_t j = 0; j < response.size(); ++j)
        response[j] = cross_correlation(x, s, clutter_lag(n, j));
    const double peak = cross_correlation(x, s, Lag{0});

    double power = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto h = draw_clutter(n, model, rng);
        const double c = std::inner_product(h.begin(), h.end(), response.begin(), 0.0);
        power += c * c;
    }
    if (!(power > 0.0)) return {std::numeric_limits<double>::infinity(), false};
    return {peak * peak / (power / static_cast<double>(trials)), true};
}

}  // namespace gaseq
