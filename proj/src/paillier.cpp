#include "htelog/paillier.hpp"

#include <array>

#include "htelog/error.hpp"

namespace htelog::paillier {

namespace {

BigInt powm(const BigInt& base, const BigInt& exp, const BigInt& mod) {
    BigInt out;
    mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
    return out;
}

BigInt gcd(const BigInt& a, const BigInt& b) {
    BigInt out;
    mpz_gcd(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return out;
}

// L(u) = (u - 1) / n, defined only when u = 1 mod n.
BigInt l_function(const BigInt& u, const BigInt& n) {
    BigInt num = u - 1;
    if (num % n != 0)
        throw ValidationError("L(u) is not integral: u != 1 mod n");
    return num / n;
}

bool miller_rabin_round(const BigInt& n, const BigInt& a, const BigInt& d, unsigned long s) {
    BigInt x = powm(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (unsigned long i = 1; i < s; ++i) {
        x = x * x % n;
        if (x == n - 1) return true;
    }
    return false;
}

}  // namespace

bool is_probable_prime(const BigInt& n, std::mt19937_64& rng) {
    if (n < 2) return false;
    static const std::array<unsigned long, 12> small = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (unsigned long p : small) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    BigInt d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    d >>= s;

    // the 12 small bases decide primality for all n < 2^64
    for (unsigned long a : small)
        if (!miller_rabin_round(n, BigInt(a), d, s)) return false;
    if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 64) return true;

    for (int round = 0; round < 40; ++round) {
        BigInt a = 2 + random_below(n - 3, rng);
        if (!miller_rabin_round(n, a, d, s)) return false;
    }
    return true;
}

BigInt random_below(const BigInt& bound, std::mt19937_64& rng) {
    if (bound <= 0) throw ValidationError("random_below needs a positive bound");
    const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    const std::size_t words = (bits + 63) / 64;
    while (true) {
        BigInt v = 0;
        for (std::size_t w = 0; w < words; ++w) {
            v <<= 64;
            BigInt chunk;
            mpz_import(chunk.get_mpz_t(), 1, 1, sizeof(std::uint64_t), 0, 0,
                       std::array<std::uint64_t, 1>{rng()}.data());
            v |= chunk;
        }
        // keep only `bits` bits so the rejection rate stays below 1/2
        BigInt mask = (BigInt(1) << bits) - 1;
        v &= mask;
        if (v < bound) return v;
    }
}

Keypair keygen_explicit(const BigInt& j, const BigInt& k, const BigInt& g) {
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);  // only for >64-bit primality rounds
    if (!is_probable_prime(j, rng)) throw ValidationError("j is not prime");
    if (!is_probable_prime(k, rng)) throw ValidationError("k is not prime");
    if (j == k) throw ValidationError("j and k must be distinct primes");

    Keypair kp;
    kp.j = j;
    kp.k = k;
    kp.n = j * k;
    if (gcd(kp.n, (j - 1) * (k - 1)) != 1)
        throw ValidationError("gcd(jk, (j-1)(k-1)) != 1");
    mpz_lcm(kp.lambda.get_mpz_t(), BigInt(j - 1).get_mpz_t(), BigInt(k - 1).get_mpz_t());

    const BigInt n2 = kp.n_squared();
    if (g <= 0 || g >= n2 || gcd(g, n2) != 1)
        throw ValidationError("g is not in Z*_{n^2}");
    kp.g = g;

    // nu exists iff gcd(L(g^lambda mod n^2), n) = 1
    BigInt l;
    try {
        l = l_function(powm(g, kp.lambda, n2), kp.n);
    } catch (const ValidationError&) {
        throw ValidationError("nu does not exist for these parameters");
    }
    if (mpz_invert(kp.nu.get_mpz_t(), l.get_mpz_t(), kp.n.get_mpz_t()) == 0)
        throw ValidationError("nu does not exist: gcd(L(g^lambda mod n^2), n) != 1");
    return kp;
}

namespace {

BigInt random_prime(unsigned bits, std::mt19937_64& rng) {
    if (bits < 2) throw ValidationError("prime size too small");
    while (true) {
        BigInt candidate = random_below(BigInt(1) << bits, rng);
        mpz_setbit(candidate.get_mpz_t(), bits - 1);  // keep the requested size
        mpz_setbit(candidate.get_mpz_t(), 0);
        if (is_probable_prime(candidate, rng)) return candidate;
    }
}

}  // namespace

Keypair keygen_random(unsigned bits, std::mt19937_64& rng) {
    if (bits < 8 || bits > 512)
        throw ValidationError("keypair size must be in [8, 512] bits");
    const unsigned half = bits / 2;
    while (true) {
        BigInt j = random_prime(half, rng);
        BigInt k = random_prime(bits - half, rng);
        if (j == k) continue;
        if (gcd(j * k, (j - 1) * (k - 1)) != 1) continue;
        BigInt n = j * k;
        BigInt n2 = n * n;
        BigInt g = 1 + random_below(n2 - 1, rng);
        if (gcd(g, n2) != 1) continue;
        try {
            return keygen_explicit(j, k, g);
        } catch (const ValidationError&) {
            continue;  // nu missing; repeat per Algorithm 1
        }
    }
}

Ciphertext encrypt(const BigInt& x, const Keypair& kp, std::optional<BigInt> r,
                   std::mt19937_64* rng, OpCounter* counter) {
    if (x < 0 || x >= kp.n)
        throw ValidationError("plaintext out of range [0, n)");
    BigInt rr;
    if (r) {
        rr = *r;
        if (rr <= 0 || rr >= kp.n || gcd(rr, kp.n) != 1)
            throw ValidationError("r is not in Z*_n");
    } else {
        if (!rng) throw ValidationError("encrypt needs either r or a randomness source");
        do {
            rr = 1 + random_below(kp.n - 1, *rng);
        } while (gcd(rr, kp.n) != 1);
    }

    const BigInt n2 = kp.n_squared();
    Ciphertext c;
    c.value = powm(kp.g, x, n2) * powm(rr, kp.n, n2) % n2;
    c.n = kp.n;
    c.r_used = rr;

    if (counter) {
        if (counter->scheme.empty()) counter->scheme = "PHE";
        if (counter->convention == OpCounter::Convention::Paper) {
            if (!x.fits_ulong_p() || x.get_ui() > (1u << 20))
                throw ValidationError(
                    "paper-convention counting computes g^x - 1 and is limited to x <= 2^20");
            BigInt cost;
            mpz_pow_ui(cost.get_mpz_t(), kp.g.get_mpz_t(), x.get_ui());
            counter->count_mul_big(cost - 1);
        } else {
            counter->count_mul(square_multiply_cost(x) + square_multiply_cost(kp.n) + 1);
        }
    }
    return c;
}

BigInt decrypt_value(const BigInt& c, const Keypair& kp) {
    const BigInt n2 = kp.n_squared();
    if (c <= 0 || c >= n2 || gcd(c, n2) != 1)
        throw ValidationError("ciphertext is not in Z*_{n^2} (corrupted?)");
    return l_function(powm(c, kp.lambda, n2), kp.n) * kp.nu % kp.n;
}

BigInt decrypt(const Ciphertext& c, const Keypair& kp) {
    if (c.n != kp.n) throw ValidationError("ciphertext was produced under a different keypair");
    return decrypt_value(c.value, kp);
}

Ciphertext homomorphic_add(const Ciphertext& c1, const Ciphertext& c2, const Keypair& kp) {
    if (c1.n != kp.n || c2.n != kp.n)
        throw ValidationError("ciphertexts do not share this keypair");
    const BigInt n2 = kp.n_squared();
    Ciphertext out;
    out.value = c1.value * c2.value % n2;
    out.n = kp.n;
    out.r_used = c1.r_used * c2.r_used % kp.n;
    return out;
}

std::vector<std::pair<Keypair, Ciphertext>> encrypt_vector_per_element_keys(
    std::span<const BigInt> x, const KeygenSpec& mode, std::mt19937_64& rng, OpCounter* counter) {
    std::vector<std::pair<Keypair, Ciphertext>> out;
    out.reserve(x.size());
    for (const BigInt& xi : x) {
        if (xi < 0) throw ValidationError("plaintext elements must be nonnegative");
        Keypair kp = mode.is_explicit ? keygen_explicit(mode.j, mode.k, mode.g)
                                      : keygen_random(mode.bits, rng);
        Ciphertext c = encrypt(xi, kp, std::nullopt, &rng, counter);
        out.emplace_back(std::move(kp), std::move(c));
    }
    return out;
}

unsigned long square_multiply_cost(const BigInt& exponent) {
    if (exponent <= 1) return 0;
    const unsigned long bits = mpz_sizeinbase(exponent.get_mpz_t(), 2);
    const unsigned long ones = mpz_popcount(exponent.get_mpz_t());
    return bits - 1 + ones - 1;
}

}  // namespace htelog::paillier
