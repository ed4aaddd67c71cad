#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "htelog/opcount.hpp"

namespace htelog::bench {

struct CountResult {
    mpz_class mul;
    mpz_class add;
};

// Instrumented dense transform tallies; equal to the closed formulas.
CountResult count_hte(std::span<const double> x, int l);
CountResult count_whe(std::span<const double> x, int l);

// Paper convention: sum(g^(x_i)) - N multiplications and no additions.
// Implementation convention: square-and-multiply terms per element.
CountResult count_phe(std::span<const mpz_class> x, const mpz_class& g,
                      OpCounter::Convention convention = OpCounter::Convention::Paper);

// "7.004064e+124"-style rendering of an exact count.
std::string to_scientific(const mpz_class& v, int significant_digits = 6);

struct BenchRow {
    std::string scheme;
    std::size_t n = 0;
    mpz_class mul;
    mpz_class add;
    double wall_ms = 0.0;  // informational only; never part of acceptance
};

// One HTE and one WHE row per N = 2^l, counts from a live instrumented
// transform of a seeded random vector.
std::vector<BenchRow> sweep_fig2(int l_min, int l_max);

// Paper-convention Paillier counts for seeded random data in [0, 99] with the
// given g; wall time measures actual per-element keygen + encryption.
std::vector<BenchRow> sweep_phe(int l_min, int l_max, const mpz_class& g, std::uint64_t seed);

// CSV with header scheme,N,mul,add,wall_ms; counts as exact decimal integers.
std::string to_csv(const std::vector<BenchRow>& rows);

}  // namespace htelog::bench
