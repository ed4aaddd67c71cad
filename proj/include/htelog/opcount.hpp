#pragma once

#include <gmpxx.h>

#include <string>

namespace htelog {

// Cost-model accounting used across the transform and Paillier paths.
//
// Counts are big integers: the Paillier paper-convention tally for a single
// column already exceeds 10^120. Counters only ever grow.
struct OpCounter {
    // `Paper` reproduces the reference accounting: one multiplication per
    // nonzero matrix entry for HTE/WHE (the zeta/sqrt(N) scaling pass is
    // excluded) and g^x - 1 multiplications per Paillier encryption.
    // `Implementation` counts what the code actually executes: the scaling
    // pass adds N multiplications, and modular exponentiation is tallied as
    // square-and-multiply steps.
    enum class Convention { Paper, Implementation };

    mpz_class mul{0};
    mpz_class add{0};
    Convention convention = Convention::Paper;
    std::string scheme;

    void count_mul(unsigned long k = 1) { mul += k; }
    void count_add(unsigned long k = 1) { add += k; }
    void count_mul_big(const mpz_class& k) { mul += k; }

    void reset() {
        mul = 0;
        add = 0;
    }
};

}  // namespace htelog
