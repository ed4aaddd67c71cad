#include "htelog/cipher.hpp"

#include <bit>
#include <cmath>

#include "htelog/error.hpp"
#include "htelog/transform.hpp"

namespace htelog {

namespace {

int order_log2(std::size_t n) {
    if (n < 2 || !std::has_single_bit(n))
        throw ValidationError("vector length " + std::to_string(n) +
                              " is not a power of two >= 2");
    return std::countr_zero(n);
}

TransformMatrix scheme_matrix(Scheme scheme, int l) {
    return scheme == Scheme::HTE ? build_haar_normalized(l) : build_walsh_hadamard(l);
}

void check_key(const KeyRecord& key) {
    if (key.value == 0.0) throw ValidationError("key \"" + key.key_id + "\" has zero value");
}

}  // namespace

const char* to_string(Scheme scheme) { return scheme == Scheme::HTE ? "HTE" : "WHE"; }

Scheme scheme_from_string(std::string_view text) {
    if (text == "HTE" || text == "hte") return Scheme::HTE;
    if (text == "WHE" || text == "whe") return Scheme::WHE;
    throw ValidationError("unknown scheme: \"" + std::string(text) + "\"");
}

CipherVector encrypt(const PaddedVector& x, const KeyRecord& key, Scheme scheme,
                     OpCounter* counter) {
    check_key(key);
    const int l = order_log2(x.values.size());
    const auto matrix = scheme_matrix(scheme, l);

    CipherVector y;
    if (counter && counter->scheme.empty()) counter->scheme = to_string(scheme);
    y.values = matrix.apply(x.values, counter);
    const long double scale =
        static_cast<long double>(key.value) / sqrtl(static_cast<long double>(x.values.size()));
    for (auto& v : y.values) v = static_cast<double>(v * scale);
    if (counter && counter->convention == OpCounter::Convention::Implementation)
        counter->count_mul(x.values.size());

    y.scheme = scheme;
    y.key_id = key.key_id;
    y.l = l;
    y.pad_len = x.pad_len();
    return y;
}

PaddedVector decrypt(const CipherVector& y, const KeyRecord& key, OpCounter* counter) {
    check_key(key);
    if (key.key_id != y.key_id)
        throw ValidationError("ciphertext was produced under key \"" + y.key_id +
                              "\", not \"" + key.key_id + "\"");
    const int l = order_log2(y.values.size());
    const auto matrix = scheme_matrix(y.scheme, l);

    PaddedVector x;
    x.values = matrix.apply_transpose(y.values, counter);
    const long double scale = 1.0L / (static_cast<long double>(key.value) *
                                      sqrtl(static_cast<long double>(y.values.size())));
    for (auto& v : x.values) v = static_cast<double>(v * scale);
    if (counter && counter->convention == OpCounter::Convention::Implementation)
        counter->count_mul(y.values.size());

    if (y.pad_len > x.values.size()) throw ValidationError("pad length exceeds vector length");
    x.payload_len = x.values.size() - y.pad_len;
    return x;
}

CipherVector reencrypt(const CipherVector& y, const KeyRecord& old_key,
                       const KeyRecord& new_key) {
    check_key(old_key);
    check_key(new_key);
    if (old_key.key_id != y.key_id)
        throw ValidationError("ciphertext was produced under key \"" + y.key_id +
                              "\", not \"" + old_key.key_id + "\"");
    CipherVector out = y;
    const double ratio = new_key.value / old_key.value;
    for (auto& v : out.values) v *= ratio;
    out.key_id = new_key.key_id;
    return out;
}

}  // namespace htelog
