#include "htelog/bench.hpp"

#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>

#include "htelog/error.hpp"
#include "htelog/paillier.hpp"
#include "htelog/transform.hpp"

namespace htelog::bench {

namespace {

CountResult count_transform(const TransformMatrix& matrix, std::span<const double> x) {
    OpCounter counter;
    matrix.apply(x, &counter);
    return {counter.mul, counter.add};
}

double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

}  // namespace

CountResult count_hte(std::span<const double> x, int l) {
    return count_transform(build_haar_normalized(l), x);
}

CountResult count_whe(std::span<const double> x, int l) {
    return count_transform(build_walsh_hadamard(l), x);
}

CountResult count_phe(std::span<const mpz_class> x, const mpz_class& g,
                      OpCounter::Convention convention) {
    CountResult out;
    out.add = 0;
    for (const mpz_class& xi : x) {
        if (xi < 0) throw ValidationError("PHE counting needs nonnegative data");
        if (convention == OpCounter::Convention::Paper) {
            if (!xi.fits_ulong_p() || xi.get_ui() > (1u << 20))
                throw ValidationError("paper-convention PHE count is limited to x <= 2^20");
            mpz_class term;
            mpz_pow_ui(term.get_mpz_t(), g.get_mpz_t(), xi.get_ui());
            out.mul += term - 1;
        } else {
            out.mul += paillier::square_multiply_cost(xi);
        }
    }
    return out;
}

std::string to_scientific(const mpz_class& v, int significant_digits) {
    if (v == 0) return "0";
    const std::string digits = v.get_str();
    const std::size_t start = digits[0] == '-' ? 1 : 0;
    std::string mantissa = digits.substr(start, 1);
    if (significant_digits > 1) {
        mantissa += ".";
        std::string frac = digits.substr(start + 1, significant_digits - 1);
        frac.resize(significant_digits - 1, '0');
        mantissa += frac;
    }
    char buf[16];
    std::snprintf(buf, sizeof buf, "e+%02zu", digits.size() - start - 1);
    return (start ? "-" : "") + mantissa + buf;
}

std::vector<BenchRow> sweep_fig2(int l_min, int l_max) {
    if (l_min < 1 || l_max > 12 || l_min > l_max)
        throw ValidationError("sweep range must satisfy 1 <= l_min <= l_max <= 12");
    std::vector<BenchRow> rows;
    std::mt19937_64 rng(42);
    for (int l = l_min; l <= l_max; ++l) {
        const std::size_t n = std::size_t{1} << l;
        std::uniform_int_distribution<int> dist(0, 999);
        std::vector<double> x(n);
        for (auto& v : x) v = dist(rng);

        auto haar = build_haar_normalized(l);
        auto start = std::chrono::steady_clock::now();
        auto hte = count_transform(haar, x);
        rows.push_back({"hte", n, hte.mul, hte.add, ms_since(start)});

        auto wh = build_walsh_hadamard(l);
        start = std::chrono::steady_clock::now();
        auto whe = count_transform(wh, x);
        rows.push_back({"whe", n, whe.mul, whe.add, ms_since(start)});
    }
    return rows;
}

std::vector<BenchRow> sweep_phe(int l_min, int l_max, const mpz_class& g, std::uint64_t seed) {
    if (l_min < 1 || l_max > 12 || l_min > l_max)
        throw ValidationError("sweep range must satisfy 1 <= l_min <= l_max <= 12");
    std::vector<BenchRow> rows;
    std::mt19937_64 rng(seed);
    for (int l = l_min; l <= l_max; ++l) {
        const std::size_t n = std::size_t{1} << l;
        std::uniform_int_distribution<int> dist(0, 99);
        std::vector<mpz_class> x(n);
        for (auto& v : x) v = dist(rng);

        auto counts = count_phe(x, g);

        auto start = std::chrono::steady_clock::now();
        paillier::encrypt_vector_per_element_keys(
            x, paillier::KeygenSpec::random_bits(32), rng);
        rows.push_back({"phe", n, counts.mul, counts.add, ms_since(start)});
    }
    return rows;
}

std::string to_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream out;
    out << "scheme,N,mul,add,wall_ms\n";
    for (const auto& row : rows) {
        char wall[32];
        std::snprintf(wall, sizeof wall, "%.3f", row.wall_ms);
        out << row.scheme << ',' << row.n << ',' << row.mul.get_str() << ','
            << row.add.get_str() << ',' << wall << '\n';
    }
    return out.str();
}

}  // namespace htelog::bench
