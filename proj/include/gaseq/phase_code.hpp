#pragma once

// Binary phase codes and the aperiodic shift / correlation primitives.
//
// Shift convention: (J_i s)_n = s_{n+i} when 0 <= n+i < N, zero otherwise.
// With this convention x^T J_i s is the aperiodic cross-correlation of x and
// s at lag i, and J_{-i} = J_i^T.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gaseq/errors.hpp"

namespace gaseq {

/// The single random stream type used throughout the library.
using Rng = std::mt19937_64;

/// Fixed-length vector of bipolar symbols, each exactly +1 or -1, length >= 2.
class PhaseCode {
public:
    using Symbol = std::int8_t;

    PhaseCode() = default;

    explicit PhaseCode(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) { validate(); }

    PhaseCode(std::initializer_list<int> symbols) {
        symbols_.reserve(symbols.size());
        for (int v : symbols) symbols_.push_back(static_cast<Symbol>(v));
        validate();
    }

    static PhaseCode from_ints(std::span<const int> values) {
        std::vector<Symbol> out;
        out.reserve(values.size());
        for (int v : values) {
            if (v != 1 && v != -1) throw ArgumentError("phase code symbols must be +1 or -1");
            out.push_back(static_cast<Symbol>(v));
        }
        return PhaseCode(std::move(out));
    }

    std::size_t size() const noexcept { return symbols_.size(); }
    bool empty() const noexcept { return symbols_.empty(); }
    int operator[](std::size_t n) const noexcept { return symbols_[n]; }

    std::span<const Symbol> symbols() const noexcept { return symbols_; }
    auto begin() const noexcept { return symbols_.begin(); }
    auto end() const noexcept { return symbols_.end(); }

    /// Copy with symbol n sign-flipped.
    PhaseCode flipped(std::size_t n) const {
        PhaseCode out = *this;
        out.symbols_.at(n) = static_cast<Symbol>(-out.symbols_[n]);
        return out;
    }

    PhaseCode negated() const {
        PhaseCode out = *this;
        for (auto& v : out.symbols_) v = static_cast<Symbol>(-v);
        return out;
    }

    PhaseCode reversed() const {
        PhaseCode out = *this;
        std::reverse(out.symbols_.begin(), out.symbols_.end());
        return out;
    }

    std::vector<double> as_real() const { return {symbols_.begin(), symbols_.end()}; }

    /// Raw symbol bytes; used as an exact hash / cache key.
    std::string_view bytes() const noexcept {
        return {reinterpret_cast<const char*>(symbols_.data()), symbols_.size()};
    }

    friend bool operator==(const PhaseCode&, const PhaseCode&) = default;
    /// Lexicographic, with -1 ordered before +1.
    friend auto operator<=>(const PhaseCode&, const PhaseCode&) = default;

private:
    void validate() const {
        if (symbols_.size() < 2) throw ArgumentError("phase code length must be >= 2");
        for (auto v : symbols_)
            if (v != 1 && v != -1) throw ArgumentError("phase code symbols must be +1 or -1");
    }

    std::vector<Symbol> symbols_;
};

/// Integer delay between range bins. Admissible values depend on the code
/// length and are checked at the point of use.
struct Lag {
    int value = 0;

    constexpr Lag operator-() const noexcept { return Lag{-value}; }
    friend constexpr bool operator==(Lag, Lag) = default;
};

namespace detail {

inline void check_lag(std::size_t n, Lag lag) {
    const auto limit = static_cast<long>(n) - 1;
    if (lag.value > limit || lag.value < -limit)
        throw RangeError("lag " + std::to_string(lag.value) + " outside [-(N-1), N-1] for N=" +
                         std::to_string(n));
}

}  // namespace detail

/// Aperiodic shift of an arbitrary real vector: out[n] = v[n+lag] or 0.
inline std::vector<double> shift_vector(std::span<const double> v, Lag lag) {
    detail::check_lag(v.size(), lag);
    const long n = static_cast<long>(v.size());
    std::vector<double> out(v.size(), 0.0);
    for (long k = std::max(0L, -static_cast<long>(lag.value)); k < n && k + lag.value < n; ++k)
        out[static_cast<std::size_t>(k)] = v[static_cast<std::size_t>(k + lag.value)];
    return out;
}

/// J_i s without materializing J_i.
inline std::vector<double> shifted(const PhaseCode& s, Lag lag) {
    const auto real = s.as_real();
    return shift_vector(real, lag);
}

/// x^T J_i s.
inline double cross_correlation(std::span<const double> x, const PhaseCode& s, Lag lag) {
    if (x.size() != s.size()) throw DimensionError("cross_correlation: length mismatch");
    detail::check_lag(s.size(), lag);
    const long n = static_cast<long>(s.size());
    const long lo = std::max(0L, -static_cast<long>(lag.value));
    const long hi = std::min(n, n - lag.value);
    double acc = 0.0;
    for (long k = lo; k < hi; ++k)
        acc += x[static_cast<std::size_t>(k)] * s[static_cast<std::size_t>(k + lag.value)];
    return acc;
}

/// Aperiodic autocorrelation sum_n s[n] s[n+d] for d = 0..N-1.
inline std::vector<long> autocorrelation(const PhaseCode& s) {
    const std::size_t n = s.size();
    std::vector<long> c(n, 0);
    for (std::size_t d = 0; d < n; ++d) {
        long acc = 0;
        for (std::size_t k = 0; k + d < n; ++k) acc += s[k] * s[k + d];
        c[d] = acc;
    }
    return c;
}

/// Each symbol independently uniform on {+1,-1}. One 64-bit draw feeds up to
/// 64 symbols, so the result is a deterministic function of the stream state.
inline PhaseCode random_code(std::size_t n, Rng& rng) {
    if (n < 2) throw ArgumentError("random_code: N must be >= 2");
    std::vector<PhaseCode::Symbol> out(n);
    std::uint64_t bits = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (k % 64 == 0) bits = rng();
        out[k] = (bits & 1U) ? 1 : -1;
        bits >>= 1;
    }
    return PhaseCode(std::move(out));
}

inline bool is_prime(std::size_t n) {
    if (n < 2) return false;
    for (std::size_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// Legendre sequence of odd prime length: s_0 = +1, s_n = +1 iff n is a
/// quadratic residue mod N.
inline PhaseCode legendre_code(std::size_t n) {
    if (n < 3 || !is_prime(n)) throw ArgumentError("legendre_code: N must be an odd prime");
    std::vector<bool> residue(n, false);
    for (std::size_t k = 1; k < n; ++k) residue[(k * k) % n] = true;
    std::vector<PhaseCode::Symbol> out(n);
    out[0] = 1;
    for (std::size_t k = 1; k < n; ++k) out[k] = residue[k] ? 1 : -1;
    return PhaseCode(std::move(out));
}

/// Comma-separated "+1"/"-1" tokens.
inline std::string format_code(const PhaseCode& s) {
    std::string out;
    out.reserve(3 * s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (k) out += ',';
        out += s[k] > 0 ? "+1" : "-1";
    }
    return out;
}

/// Accepts tokens "+1", "-1", "1" separated by commas and/or whitespace.
/// Two commas with nothing between them are an empty token and rejected.
inline PhaseCode parse_code(std::string_view text) {
    std::vector<PhaseCode::Symbol> out;
    std::size_t token_index = 0;
    std::size_t pos = 0;
    bool pending_comma = false;
    auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };

    while (pos < text.size()) {
        while (pos < text.size() && is_space(text[pos])) ++pos;
        if (pos >= text.size()) break;
        if (text[pos] == ',') {
            if (pending_comma || out.empty())
                throw ParseError("empty token at position " + std::to_string(token_index + 1),
                                 token_index + 1);
            pending_comma = true;
            ++pos;
            continue;
        }
        std::size_t end = pos;
        while (end < text.size() && text[end] != ',' && !is_space(text[end])) ++end;
        const std::string_view tok = text.substr(pos, end - pos);
        ++token_index;
        if (tok == "+1" || tok == "1") {
            out.push_back(1);
        } else if (tok == "-1") {
            out.push_back(-1);
        } else {
            throw ParseError("invalid symbol '" + std::string(tok) + "' at token " +
                                 std::to_string(token_index),
                             token_index);
        }
        pending_comma = false;
        pos = end;
    }
    if (pending_comma) throw ParseError("trailing comma", token_index + 1);
    if (out.empty()) throw ParseError("empty code", 0);
    if (out.size() < 2) throw ParseError("code must have at least 2 symbols", 0);
    return PhaseCode(std::move(out));
}

}  // namespace gaseq

template <>
struct std::hash<gaseq::PhaseCode> {
    std::size_t operator()(const gaseq::PhaseCode& s) const noexcept {
        return std::hash<std::string_view>{}(s.bytes());
    }
};
