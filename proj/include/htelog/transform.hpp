#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "htelog/opcount.hpp"

namespace htelog {

enum class MatrixKind { HaarNormalized, HaarUnnormalized, WalshHadamard };

const char* to_string(MatrixKind kind);

// Decomposition of a Haar row index: upsilon = 2^a + b - 1 with b in [1, 2^a].
// Row 0 (the constant function) is represented as a = b = 0.
struct HaarIndex {
    int upsilon = 0;
    int a = 0;
    int b = 0;

    static HaarIndex from_row(std::size_t upsilon);
};

// Dense square matrix of order n = 2^l. Entries are stored exactly as a sign
// in {-1, 0, +1} plus a per-row half-power exponent h, the entry value being
// sign * 2^(h/2). Rendering to double happens on demand, so 2^(a/2) weights
// carry no accumulation error from construction.
class TransformMatrix {
public:
    static TransformMatrix with_rows(MatrixKind kind, int l, std::vector<std::int8_t> signs,
                                     std::vector<std::uint8_t> row_half_exp);

    MatrixKind kind() const { return kind_; }
    int l() const { return l_; }
    std::size_t n() const { return n_; }

    int entry_sign(std::size_t row, std::size_t col) const { return signs_[row * n_ + col]; }
    int row_half_exponent(std::size_t row) const { return row_half_[row]; }
    double row_weight(std::size_t row) const;
    double entry(std::size_t row, std::size_t col) const;

    std::size_t row_nonzeros(std::size_t row) const;
    std::size_t count_zero_entries() const;

    // y = M x by dense row-by-row dot products, skipping zero entries. With a
    // counter attached, tallies one multiplication per nonzero entry visited
    // and nonzeros-1 additions per row.
    std::vector<double> apply(std::span<const double> x, OpCounter* counter = nullptr) const;

    // y = M^T x with the same zero-skipping convention.
    std::vector<double> apply_transpose(std::span<const double> x,
                                        OpCounter* counter = nullptr) const;

    // Gather permutation: result row i is this matrix's row perm[i].
    TransformMatrix permuted_rows(std::span<const std::size_t> perm) const;

    bool same_rows(const TransformMatrix& other) const;

private:
    TransformMatrix(MatrixKind kind, int l);

    friend TransformMatrix build_haar_unnormalized(int l);
    friend TransformMatrix build_haar_normalized(int l);
    friend TransformMatrix build_walsh_hadamard(int l);

    MatrixKind kind_;
    int l_;
    std::size_t n_;
    std::vector<std::int8_t> signs_;      // row-major
    std::vector<std::uint8_t> row_half_;  // per-row half-power exponent
};

// Recursive construction H_{2^l} = [H_{2^(l-1)} (x) [1,1]; I_{2^(l-1)} (x) [1,-1]],
// starting from H_2 = [[1,1],[1,-1]]. Entries in {-1, 0, +1}.
TransformMatrix build_haar_unnormalized(int l);

// Row upsilon holds sqrt(N) times the Haar function evaluated at e/N: row 0 is
// all ones, row (a,b) holds +2^(a/2) on the first half of its support and
// -2^(a/2) on the second. The global 1/sqrt(N) factor is applied by the cipher.
TransformMatrix build_haar_normalized(int l);

// Sylvester recursion: H_{2^(l+1)} = H_{2^l} (x) H_2. Entries in {-1, +1}.
TransformMatrix build_walsh_hadamard(int l);

// Number of zeros of the un-normalized (or normalized; supports coincide)
// Haar matrix: z(H_2) = 0, z(H_{2^l}) = 2(2^(2(l-1)) - 2^(l-1)) + 2 z(H_{2^(l-1)}).
std::int64_t zero_count_recurrence(int l);

struct OpCountFormula {
    std::int64_t mul = 0;
    std::int64_t add = 0;
};

// mul = N^2 - z, add = N^2 - N - z, with z = 0 for Walsh-Hadamard.
OpCountFormula op_count_formulas(MatrixKind kind, int l);

struct ValidationReport {
    MatrixKind kind;
    bool top_row_all_ones = false;
    std::optional<bool> left_column_all_ones;  // Walsh-Hadamard only
    double orthogonality_residual = 0.0;       // max-abs of (1/N) M M^T - I
    bool entries_in_kind_set = false;
    bool canonical_row_order = false;

    bool passed() const;
};

ValidationReport validate_structure(const TransformMatrix& m);

// Recovers the canonical position of each row of a row-permuted matrix:
// result[i] is the canonical index of input row i. Rows are keyed by support
// offset, support width and sign-change count (sequency), which are distinct
// across the rows of every matrix kind built here.
std::vector<std::size_t> restore_row_order(const TransformMatrix& m);

}  // namespace htelog
