#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "htelog/codec.hpp"
#include "htelog/keys.hpp"
#include "htelog/opcount.hpp"

namespace htelog {

enum class Scheme { HTE, WHE };

const char* to_string(Scheme scheme);
Scheme scheme_from_string(std::string_view text);

struct CipherVector {
    std::vector<double> values;  // length N = 2^l
    Scheme scheme = Scheme::HTE;
    std::string key_id;
    int l = 1;
    std::size_t pad_len = 0;

    std::size_t n() const { return values.size(); }
    std::size_t payload_len() const { return values.size() - pad_len; }
};

// y = zeta * (1/sqrt(N)) * M * x with M the normalized Haar matrix (HTE) or
// the Walsh-Hadamard matrix (WHE). Under the paper counting convention the
// counter sees only the matrix-vector product; the Implementation convention
// adds N multiplications for the zeta/sqrt(N) scaling pass.
CipherVector encrypt(const PaddedVector& x, const KeyRecord& key, Scheme scheme,
                     OpCounter* counter = nullptr);

// x = (1/zeta) * (1/sqrt(N)) * M^T * y. Requires key.key_id == y.key_id.
PaddedVector decrypt(const CipherVector& y, const KeyRecord& key, OpCounter* counter = nullptr);

// Key rotation: equals encrypt(decrypt(y, old_key), new_key), implemented as
// a scalar rescale by new/old (both schemes keep the same matrix).
CipherVector reencrypt(const CipherVector& y, const KeyRecord& old_key,
                       const KeyRecord& new_key);

}  // namespace htelog
