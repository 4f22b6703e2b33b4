#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <vector>

#include "gaseq/phase_code.hpp"
#include "oracles.hpp"

using namespace gaseq;

namespace {

std::vector<double> real_of(std::initializer_list<double> v) { return v; }

}  // namespace

TEST(PhaseCode, RejectsInvalidSymbolsAndLength) {
    EXPECT_THROW((PhaseCode{1}), ArgumentError);
    EXPECT_THROW((PhaseCode{1, 0, -1}), ArgumentError);
    EXPECT_THROW((PhaseCode{1, 2}), ArgumentError);
    EXPECT_NO_THROW((PhaseCode{1, -1}));
}

TEST(Shifted, MatchesEntryFormula) {
    const PhaseCode s{1, -1, 1};
    EXPECT_EQ(shifted(s, Lag{0}), real_of({1, -1, 1}));
    EXPECT_EQ(shifted(s, Lag{1}), real_of({-1, 1, 0}));
    EXPECT_EQ(shifted(s, Lag{-2}), real_of({0, 0, 1}));
}

TEST(Shifted, LagOutOfRangeIsRangeError) {
    const PhaseCode s{1, -1, 1};
    EXPECT_THROW(shifted(s, Lag{3}), RangeError);
    EXPECT_THROW(shifted(s, Lag{-3}), RangeError);
    EXPECT_THROW(cross_correlation(s.as_real(), s, Lag{5}), RangeError);
}

TEST(Shifted, AgreesWithDenseShiftMatrix) {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = random_code(9, rng);
        for (int i = -8; i <= 8; ++i) {
            const auto dense = oracle::mat_vec(oracle::shift_matrix(9, i), s.as_real());
            EXPECT_EQ(shifted(s, Lag{i}), dense);
            const auto nonzero = std::count_if(dense.begin(), dense.end(), [](double v) { return v != 0; });
            EXPECT_EQ(nonzero, 9 - std::abs(i));
        }
    }
}

TEST(CrossCorrelation, Basics) {
    Rng rng(3);
    const auto s = random_code(17, rng);
    EXPECT_EQ(cross_correlation(s.as_real(), s, Lag{0}), 17.0);
    EXPECT_EQ(cross_correlation(real_of({1, 1, 1}), PhaseCode{1, 1, 1}, Lag{1}), 2.0);
    EXPECT_THROW(cross_correlation(real_of({1, 1}), PhaseCode{1, 1, 1}, Lag{0}), DimensionError);
}

TEST(CrossCorrelation, AdjointIdentityOnBipolarPairs) {
    // x^T J_i s == s^T J_{-i} x for random bipolar pairs.
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + trial % 10;
        const auto x = random_code(n, rng);
        const auto s = random_code(n, rng);
        for (int i = 1 - static_cast<int>(n); i < static_cast<int>(n); ++i)
            EXPECT_EQ(cross_correlation(x.as_real(), s, Lag{i}) -
                          cross_correlation(s.as_real(), x, Lag{-i}),
                      0.0);
    }
}

TEST(CrossCorrelation, AdjointIdentityExhaustiveSmallN) {
    // <x, J_i s> = <J_{-i} x, s> for every code up to N=8 and random real x.
    Rng rng(6);
    std::normal_distribution<double> g;
    for (std::size_t n = 2; n <= 8; ++n) {
        for (unsigned long idx = 0; idx < (1UL << n); ++idx) {
            const auto s = oracle::code_from_index(n, idx);
            std::vector<double> x(n);
            for (auto& v : x) v = g(rng);
            for (int i = 1 - static_cast<int>(n); i < static_cast<int>(n); ++i) {
                const auto xs = shift_vector(x, Lag{-i});
                const auto sv = s.as_real();
                const double rhs = std::inner_product(xs.begin(), xs.end(), sv.begin(), 0.0);
                EXPECT_NEAR(cross_correlation(x, s, Lag{i}), rhs, 1e-12);
            }
        }
    }
}

TEST(RandomCode, SymbolMeanNearZero) {
    Rng rng(2024);
    double sum = 0.0;
    const std::size_t draws = 1'000'000;
    for (std::size_t d = 0; d < draws; ++d) {
        const auto s = random_code(59, rng);
        for (int v : s) sum += v;
    }
    EXPECT_NEAR(sum / (59.0 * draws), 0.0, 0.005);
}

TEST(RandomCode, DeterministicGivenSeed) {
    Rng a(99), b(99);
    EXPECT_EQ(random_code(59, a), random_code(59, b));
    Rng c(99);
    const auto first = random_code(59, c);
    const auto second = random_code(59, c);
    EXPECT_NE(first, second);
    EXPECT_THROW(random_code(1, c), ArgumentError);
}

TEST(Legendre, SmallPrimes) {
    EXPECT_EQ(legendre_code(3), (PhaseCode{1, 1, -1}));
    // Squares mod 7 are {1, 2, 4}.
    EXPECT_EQ(legendre_code(7), (PhaseCode{1, 1, 1, -1, 1, -1, -1}));
    EXPECT_THROW(legendre_code(9), ArgumentError);
    EXPECT_THROW(legendre_code(2), ArgumentError);
    EXPECT_THROW(legendre_code(1), ArgumentError);
}

TEST(Legendre, Length59MatchesPublishedListing) {
    const auto s = legendre_code(59);
    EXPECT_EQ(format_code(s),
              "+1,+1,-1,+1,+1,+1,-1,+1,-1,+1,-1,-1,+1,-1,-1,+1,+1,+1,-1,+1,"
              "+1,+1,+1,-1,-1,+1,+1,+1,+1,+1,-1,-1,-1,-1,-1,+1,+1,-1,-1,-1,"
              "-1,+1,-1,-1,-1,+1,+1,-1,+1,+1,-1,+1,-1,+1,-1,-1,-1,+1,-1");
}

TEST(CodeText, ParseAndFormat) {
    EXPECT_EQ(parse_code("+1,-1,+1"), (PhaseCode{1, -1, 1}));
    EXPECT_EQ(parse_code("  1 -1\t+1 \n"), (PhaseCode{1, -1, 1}));
    EXPECT_EQ(parse_code("+1, -1 ,1"), (PhaseCode{1, -1, 1}));
    EXPECT_EQ(format_code(PhaseCode{1, -1}), "+1,-1");
}

TEST(CodeText, Errors) {
    try {
        parse_code("+1, 2");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.token(), 2u);
    }
    EXPECT_THROW(parse_code(""), ParseError);
    EXPECT_THROW(parse_code("   "), ParseError);
    EXPECT_THROW(parse_code("+1,,-1"), ParseError);
    EXPECT_THROW(parse_code("+1,-1,"), ParseError);
    EXPECT_THROW(parse_code("+1"), ParseError);
    EXPECT_THROW(parse_code("+1,+2"), ParseError);
}

TEST(CodeText, RoundTripProperty) {
    Rng rng(17);
    for (int trial = 0; trial < 500; ++trial) {
        const auto s = random_code(2 + trial % 120, rng);
        EXPECT_EQ(parse_code(format_code(s)), s);
    }
}
