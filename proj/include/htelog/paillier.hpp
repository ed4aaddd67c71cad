#pragma once

#include <gmpxx.h>

#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "htelog/opcount.hpp"

namespace htelog::paillier {

using BigInt = mpz_class;

struct Keypair {
    BigInt j, k;    // the prime factors
    BigInt n;       // j*k — public
    BigInt g;       // in Z*_{n^2} — public
    BigInt lambda;  // lcm(j-1, k-1) — private
    BigInt nu;      // (L(g^lambda mod n^2))^-1 mod n — private

    BigInt n_squared() const { return n * n; }
    bool same_public(const Keypair& other) const { return n == other.n && g == other.g; }
};

struct Ciphertext {
    BigInt value;   // g^x * r^n mod n^2
    BigInt n;       // modulus it was produced under
    BigInt r_used;  // retained for reproducibility in deterministic mode
};

// Deterministic Miller-Rabin below 2^64, 40 pseudo-random rounds above.
bool is_probable_prime(const BigInt& n, std::mt19937_64& rng);

// Uniform in [0, bound) by rejection sampling.
BigInt random_below(const BigInt& bound, std::mt19937_64& rng);

// Validates the explicit parameters and derives (lambda, nu). Throws when nu
// does not exist, i.e. gcd(L(g^lambda mod n^2), n) != 1.
Keypair keygen_explicit(const BigInt& j, const BigInt& k, const BigInt& g);

// Repeats prime and g selection until nu exists. `bits` is the target size of
// n, in [8, 512].
Keypair keygen_random(unsigned bits, std::mt19937_64& rng);

// E(x) = g^x * r^n mod n^2 with 0 <= x < n and r in Z*_n (drawn from rng when
// absent). Paper-convention counting adds g^x - 1 multiplications, which is
// only tractable at desk scale (x <= 2^20); the Implementation convention
// tallies square-and-multiply steps instead.
Ciphertext encrypt(const BigInt& x, const Keypair& kp, std::optional<BigInt> r = {},
                   std::mt19937_64* rng = nullptr, OpCounter* counter = nullptr);

// x = L(c^lambda mod n^2) * nu mod n.
BigInt decrypt(const Ciphertext& c, const Keypair& kp);
BigInt decrypt_value(const BigInt& c, const Keypair& kp);

// Ciphertext product: decrypts to (x1 + x2) mod n.
Ciphertext homomorphic_add(const Ciphertext& c1, const Ciphertext& c2, const Keypair& kp);

struct KeygenSpec {
    static KeygenSpec explicit_params(BigInt j, BigInt k, BigInt g) {
        return {true, std::move(j), std::move(k), std::move(g), 0};
    }
    static KeygenSpec random_bits(unsigned bits) { return {false, 0, 0, 0, bits}; }

    bool is_explicit = false;
    BigInt j, k, g;
    unsigned bits = 32;
};

// Algorithm-faithful outer loop: a fresh keypair per element, then E(x_i).
// Paper-convention counting accumulates sum(g^(x_i)) - N multiplications.
std::vector<std::pair<Keypair, Ciphertext>> encrypt_vector_per_element_keys(
    std::span<const BigInt> x, const KeygenSpec& mode, std::mt19937_64& rng,
    OpCounter* counter = nullptr);

// Multiplications performed by square-and-multiply for one exponentiation:
// floor(log2 e) + popcount(e) - 1, and 0 for e in {0, 1}.
unsigned long square_multiply_cost(const BigInt& exponent);

}  // namespace htelog::paillier
