#pragma once

// Clutter matrix, optimal mismatched filter and the SCR fitness s^T R^{-1} s.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gaseq/errors.hpp"
#include "gaseq/phase_code.hpp"

namespace gaseq {

/// SCR value of a code/filter pair. `defined` is false when R is numerically
/// singular or the clutter power vanishes.
struct FitnessScore {
    double gamma = 0.0;
    bool defined = false;

    /// Total order used by every selection step: defined beats undefined,
    /// then larger gamma wins.
    friend bool better(const FitnessScore& a, const FitnessScore& b) noexcept {
        if (a.defined != b.defined) return a.defined;
        return a.defined && a.gamma > b.gamma;
    }

    friend bool operator==(const FitnessScore&, const FitnessScore&) = default;
};

/// R = sum_{i != 0} (J_i s)(J_i s)^T, stored dense row-major.
class ClutterMatrix {
public:
    ClutterMatrix(PhaseCode source, std::vector<double> entries)
        : source_(std::move(source)), entries_(std::move(entries)) {}

    std::size_t size() const noexcept { return source_.size(); }
    double operator()(std::size_t j, std::size_t k) const noexcept {
        return entries_[j * size() + k];
    }
    std::span<const double> entries() const noexcept { return entries_; }
    const PhaseCode& source_code() const noexcept { return source_; }

    double trace() const noexcept {
        double t = 0.0;
        for (std::size_t j = 0; j < size(); ++j) t += (*this)(j, j);
        return t;
    }

private:
    PhaseCode source_;
    std::vector<double> entries_;
};

namespace detail {

// Summing J_i s s^T J_i^T over every lag including 0 gives the Toeplitz matrix
// of the aperiodic autocorrelation, so R_jk = C(|j-k|) - s_j s_k. All entries
// are small integers and therefore exact in double.
inline void fill_clutter(const PhaseCode& s, std::span<double> out) {
    const std::size_t n = s.size();
    const auto c = autocorrelation(s);
    for (std::size_t j = 0; j < n; ++j) {
        out[j * n + j] = static_cast<double>(c[0] - 1);
        for (std::size_t k = j + 1; k < n; ++k) {
            const double v = static_cast<double>(c[k - j] - s[j] * s[k]);
            out[j * n + k] = v;
            out[k * n + j] = v;
        }
    }
}

// Pivots below this fraction of the diagonal scale mark R as singular.
inline constexpr double kPivotTolerance = 1e-12;

// In-place Cholesky (row-oriented) of the dense SPD matrix `a`; the lower
// triangle is overwritten with L. Returns false on a non-positive pivot.
inline bool cholesky_in_place(std::span<double> a, std::size_t n) {
    double scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a[j * n + j]));
    const double tol = kPivotTolerance * std::max(scale, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        double* row_i = &a[i * n];
        for (std::size_t j = 0; j < i; ++j) {
            const double* row_j = &a[j * n];
            double sum = row_i[j];
            for (std::size_t k = 0; k < j; ++k) sum -= row_i[k] * row_j[k];
            row_i[j] = sum / row_j[j];
        }
        double d = row_i[i];
        for (std::size_t k = 0; k < i; ++k) d -= row_i[k] * row_i[k];
        if (!(d > tol)) return false;
        row_i[i] = std::sqrt(d);
    }
    return true;
}

inline void forward_substitute(std::span<const double> l, std::size_t n, std::span<double> b) {
    for (std::size_t i = 0; i < n; ++i) {
        double sum = b[i];
        for (std::size_t k = 0; k < i; ++k) sum -= l[i * n + k] * b[k];
        b[i] = sum / l[i * n + i];
    }
}

inline void backward_substitute(std::span<const double> l, std::size_t n, std::span<double> b) {
    for (std::size_t i = n; i-- > 0;) {
        double sum = b[i];
        for (std::size_t k = i + 1; k < n; ++k) sum -= l[k * n + i] * b[k];
        b[i] = sum / l[i * n + i];
    }
}

}  // namespace detail

inline ClutterMatrix build_clutter_matrix(const PhaseCode& s) {
    std::vector<double> entries(s.size() * s.size());
    detail::fill_clutter(s, entries);
    return ClutterMatrix(s, std::move(entries));
}

/// x* = R^{-1} s via Cholesky, or nullopt when R is numerically singular.
inline std::optional<std::vector<double>> optimal_filter(const PhaseCode& s) {
    const std::size_t n = s.size();
    std::vector<double> a(n * n);
    detail::fill_clutter(s, a);
    if (!detail::cholesky_in_place(a, n)) return std::nullopt;
    auto x = s.as_real();
    detail::forward_substitute(a, n, x);
    detail::backward_substitute(a, n, x);
    return x;
}

/// Squared sidelobe terms (x^T J_i s)^2 for every nonzero lag, ordered from
/// lag 1-N to N-1.
inline std::vector<std::pair<int, double>> sidelobe_terms(const PhaseCode& s,
                                                          std::span<const double> x) {
    if (x.size() != s.size()) throw DimensionError("sidelobe_terms: length mismatch");
    const int n = static_cast<int>(s.size());
    std::vector<std::pair<int, double>> out;
    out.reserve(2 * s.size() - 2);
    for (int i = 1 - n; i < n; ++i) {
        if (i == 0) continue;
        const double c = cross_correlation(x, s, Lag{i});
        out.emplace_back(i, c * c);
    }
    return out;
}

/// (x^T s)^2 / sum_{i != 0} (x^T J_i s)^2.
inline FitnessScore scr(const PhaseCode& s, std::span<const double> x) {
    if (x.size() != s.size()) throw DimensionError("scr: length mismatch");
    if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; }))
        throw ArgumentError("scr: filter must be nonzero");
    const double peak = cross_correlation(x, s, Lag{0});
    double clutter = 0.0;
    for (const auto& [lag, term] : sidelobe_terms(s, x)) clutter += term;
    if (!(clutter > 0.0)) return {};
    return {peak * peak / clutter, true};
}

/// f(s) = s^T R^{-1} s, computed as |L^{-1} s|^2 from the Cholesky factor.
inline FitnessScore fitness(const PhaseCode& s) {
    const std::size_t n = s.size();
    thread_local std::vector<double> a;
    thread_local std::vector<double> y;
    a.resize(n * n);
    detail::fill_clutter(s, a);
    if (!detail::cholesky_in_place(a, n)) return {};
    y.assign(s.begin(), s.end());
    detail::forward_substitute(a, n, y);
    double g = 0.0;
    for (double v : y) g += v * v;
    return {g, true};
}

/// SCR of the matched filter x = s.
inline FitnessScore matched_filter_scr(const PhaseCode& s) {
    const auto x = s.as_real();
    return scr(s, x);
}

/// Thread-safe memo of fitness values. `miss_count()` is the number of
/// distinct keys ever evaluated (the visited-states metric).
class FitnessCache {
public:
    struct Lookup {
        FitnessScore score;
        bool was_new = false;
    };

    /// With `fold_symmetries` the key is the canonical representative of
    /// {s, -s, reverse(s), -reverse(s)}; off by default.
    explicit FitnessCache(bool fold_symmetries = false) : fold_(fold_symmetries) {}

    FitnessCache(const FitnessCache&) = delete;
    FitnessCache& operator=(const FitnessCache&) = delete;

    Lookup get(const PhaseCode& s) {
        std::string key = make_key(s);
        Shard& shard = shard_for(key);
        {
            std::lock_guard lock(shard.mutex);
            if (auto it = shard.map.find(key); it != shard.map.end()) {
                hits_.fetch_add(1, std::memory_order_relaxed);
                return {it->second, false};
            }
        }
        const FitnessScore score = fitness(s);
        std::lock_guard lock(shard.mutex);
        auto [it, inserted] = shard.map.try_emplace(std::move(key), score);
        if (inserted) {
            misses_.fetch_add(1, std::memory_order_relaxed);
        } else {
            hits_.fetch_add(1, std::memory_order_relaxed);
        }
        return {it->second, inserted};
    }

    std::size_t miss_count() const noexcept { return misses_.load(); }
    std::size_t hit_count() const noexcept { return hits_.load(); }
    std::size_t evaluations() const noexcept { return miss_count() + hit_count(); }
    bool folds_symmetries() const noexcept { return fold_; }

private:
    static constexpr std::size_t kShards = 64;

    struct Shard {
        std::mutex mutex;
        std::unordered_map<std::string, FitnessScore> map;
    };

    std::string make_key(const PhaseCode& s) const {
        if (!fold_) return std::string(s.bytes());
        const PhaseCode r = s.reversed();
        const PhaseCode best = std::min({s, s.negated(), r, r.negated()});
        return std::string(best.bytes());
    }

    Shard& shard_for(const std::string& key) {
        return shards_[std::hash<std::string>{}(key) % kShards];
    }

    bool fold_;
    std::array<Shard, kShards> shards_;
    std::atomic<std::size_t> misses_{0};
    std::atomic<std::size_t> hits_{0};
};

inline FitnessCache::Lookup cached_fitness(FitnessCache& cache, const PhaseCode& s) {
    return cache.get(s);
}

}  // namespace gaseq
