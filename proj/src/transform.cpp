#include "htelog/transform.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <tuple>

#include "htelog/error.hpp"

namespace htelog {

namespace {

constexpr int kMaxL = 16;  // dense N^2 entries; l=16 is already 4 GiB of signs

void check_l(int l) {
    if (l < 1 || l > kMaxL)
        throw ValidationError("matrix order log2 out of range [1, 16]: " + std::to_string(l));
}

double pow2_half(int half_exp) {
    double v = std::ldexp(1.0, half_exp / 2);
    return (half_exp & 1) ? v * std::sqrt(2.0) : v;
}

// Pairwise summation in extended precision keeps the accumulated rounding
// error orders of magnitude under the 1e-9 roundtrip tolerance for N=256
// vectors of 1e6-scale entries. The association order and the working
// precision are not part of the operation-count model.
long double pairwise_sum(const double* p, std::size_t n) {
    if (n == 0) return 0.0L;
    if (n == 1) return p[0];
    if (n == 2) return static_cast<long double>(p[0]) + p[1];
    const std::size_t half = n / 2;
    return pairwise_sum(p, half) + pairwise_sum(p + half, n - half);
}

}  // namespace

const char* to_string(MatrixKind kind) {
    switch (kind) {
        case MatrixKind::HaarNormalized: return "haar";
        case MatrixKind::HaarUnnormalized: return "haar-raw";
        case MatrixKind::WalshHadamard: return "wh";
    }
    return "?";
}

HaarIndex HaarIndex::from_row(std::size_t upsilon) {
    HaarIndex idx;
    idx.upsilon = static_cast<int>(upsilon);
    if (upsilon == 0) return idx;
    idx.a = std::bit_width(upsilon) - 1;
    idx.b = static_cast<int>(upsilon - (std::size_t{1} << idx.a) + 1);
    return idx;
}

TransformMatrix::TransformMatrix(MatrixKind kind, int l)
    : kind_(kind), l_(l), n_(std::size_t{1} << l), signs_(n_ * n_, 0), row_half_(n_, 0) {}

TransformMatrix TransformMatrix::with_rows(MatrixKind kind, int l, std::vector<std::int8_t> signs,
                                           std::vector<std::uint8_t> row_half_exp) {
    check_l(l);
    TransformMatrix m(kind, l);
    if (signs.size() != m.n_ * m.n_ || row_half_exp.size() != m.n_)
        throw ValidationError("matrix payload does not match order 2^l");
    m.signs_ = std::move(signs);
    m.row_half_ = std::move(row_half_exp);
    return m;
}

double TransformMatrix::row_weight(std::size_t row) const { return pow2_half(row_half_[row]); }

double TransformMatrix::entry(std::size_t row, std::size_t col) const {
    int s = signs_[row * n_ + col];
    return s == 0 ? 0.0 : s * row_weight(row);
}

std::size_t TransformMatrix::row_nonzeros(std::size_t row) const {
    const std::int8_t* r = &signs_[row * n_];
    std::size_t nnz = 0;
    for (std::size_t c = 0; c < n_; ++c)
        if (r[c] != 0) ++nnz;
    return nnz;
}

std::size_t TransformMatrix::count_zero_entries() const {
    std::size_t z = 0;
    for (std::int8_t s : signs_)
        if (s == 0) ++z;
    return z;
}

std::vector<double> TransformMatrix::apply(std::span<const double> x, OpCounter* counter) const {
    if (x.size() != n_)
        throw ValidationError("vector length " + std::to_string(x.size()) +
                              " does not match matrix order " + std::to_string(n_));
    std::vector<double> y(n_, 0.0);
    std::vector<double> products(n_);
    for (std::size_t r = 0; r < n_; ++r) {
        const std::int8_t* row = &signs_[r * n_];
        const double w = row_weight(r);
        std::size_t nnz = 0;
        for (std::size_t c = 0; c < n_; ++c) {
            int s = row[c];
            if (s == 0) continue;
            products[nnz++] = (s > 0 ? w : -w) * x[c];
        }
        y[r] = static_cast<double>(pairwise_sum(products.data(), nnz));
        if (counter) {
            counter->count_mul(nnz);
            if (nnz > 1) counter->count_add(nnz - 1);
        }
    }
    return y;
}

std::vector<double> TransformMatrix::apply_transpose(std::span<const double> x,
                                                     OpCounter* counter) const {
    if (x.size() != n_)
        throw ValidationError("vector length " + std::to_string(x.size()) +
                              " does not match matrix order " + std::to_string(n_));
    std::vector<double> y(n_, 0.0);
    std::vector<double> products(n_);
    for (std::size_t c = 0; c < n_; ++c) {
        std::size_t nnz = 0;
        for (std::size_t r = 0; r < n_; ++r) {
            int s = signs_[r * n_ + c];
            if (s == 0) continue;
            const double w = row_weight(r);
            products[nnz++] = (s > 0 ? w : -w) * x[r];
        }
        y[c] = static_cast<double>(pairwise_sum(products.data(), nnz));
        if (counter) {
            counter->count_mul(nnz);
            if (nnz > 1) counter->count_add(nnz - 1);
        }
    }
    return y;
}

TransformMatrix TransformMatrix::permuted_rows(std::span<const std::size_t> perm) const {
    if (perm.size() != n_) throw ValidationError("permutation length does not match matrix order");
    TransformMatrix out(kind_, l_);
    for (std::size_t r = 0; r < n_; ++r) {
        if (perm[r] >= n_) throw ValidationError("permutation index out of range");
        std::copy_n(&signs_[perm[r] * n_], n_, &out.signs_[r * n_]);
        out.row_half_[r] = row_half_[perm[r]];
    }
    return out;
}

bool TransformMatrix::same_rows(const TransformMatrix& other) const {
    return n_ == other.n_ && signs_ == other.signs_ && row_half_ == other.row_half_;
}

TransformMatrix build_haar_unnormalized(int l) {
    check_l(l);
    // H_2, then one Eq-5 doubling step per level:
    // top half   H_{m} (x) [1, 1], bottom half  I_{m} (x) [1, -1].
    std::size_t m = 2;
    std::vector<std::int8_t> cur = {1, 1, 1, -1};
    for (int step = 2; step <= l; ++step) {
        std::size_t nm = 2 * m;
        std::vector<std::int8_t> next(nm * nm, 0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                next[i * nm + 2 * j] = cur[i * m + j];
                next[i * nm + 2 * j + 1] = cur[i * m + j];
            }
        for (std::size_t i = 0; i < m; ++i) {
            next[(m + i) * nm + 2 * i] = 1;
            next[(m + i) * nm + 2 * i + 1] = -1;
        }
        cur = std::move(next);
        m = nm;
    }
    TransformMatrix out(MatrixKind::HaarUnnormalized, l);
    out.signs_ = std::move(cur);
    return out;
}

TransformMatrix build_haar_normalized(int l) {
    check_l(l);
    TransformMatrix out(MatrixKind::HaarNormalized, l);
    const std::size_t n = out.n_;
    for (std::size_t c = 0; c < n; ++c) out.signs_[c] = 1;  // constant row
    for (std::size_t v = 1; v < n; ++v) {
        HaarIndex idx = HaarIndex::from_row(v);
        const std::size_t width = n >> idx.a;  // support is 2^(l-a) points
        const std::size_t start = (static_cast<std::size_t>(idx.b) - 1) * width;
        std::int8_t* row = &out.signs_[v * n];
        for (std::size_t c = 0; c < width / 2; ++c) row[start + c] = 1;
        for (std::size_t c = width / 2; c < width; ++c) row[start + c] = -1;
        out.row_half_[v] = static_cast<std::uint8_t>(idx.a);
    }
    return out;
}

TransformMatrix build_walsh_hadamard(int l) {
    check_l(l);
    std::size_t m = 2;
    std::vector<std::int8_t> cur = {1, 1, 1, -1};
    for (int step = 2; step <= l; ++step) {
        std::size_t nm = 2 * m;
        std::vector<std::int8_t> next(nm * nm);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                std::int8_t v = cur[i * m + j];
                next[i * nm + j] = v;
                next[i * nm + m + j] = v;
                next[(m + i) * nm + j] = v;
                next[(m + i) * nm + m + j] = static_cast<std::int8_t>(-v);
            }
        cur = std::move(next);
        m = nm;
    }
    TransformMatrix out(MatrixKind::WalshHadamard, l);
    out.signs_ = std::move(cur);
    return out;
}

std::int64_t zero_count_recurrence(int l) {
    if (l < 1 || l > 30) throw ValidationError("zero count defined for l in [1, 30]");
    std::int64_t z = 0;
    for (int k = 2; k <= l; ++k)
        z = 2 * ((std::int64_t{1} << (2 * (k - 1))) - (std::int64_t{1} << (k - 1))) + 2 * z;
    return z;
}

OpCountFormula op_count_formulas(MatrixKind kind, int l) {
    if (l < 1 || l > 30) throw ValidationError("op count defined for l in [1, 30]");
    const std::int64_t n = std::int64_t{1} << l;
    const std::int64_t z = kind == MatrixKind::WalshHadamard ? 0 : zero_count_recurrence(l);
    return {n * n - z, n * n - n - z};
}

bool ValidationReport::passed() const {
    if (!top_row_all_ones || !entries_in_kind_set || !canonical_row_order) return false;
    if (left_column_all_ones && !*left_column_all_ones) return false;
    if (kind != MatrixKind::HaarUnnormalized && orthogonality_residual > 1e-12) return false;
    return true;
}

ValidationReport validate_structure(const TransformMatrix& m) {
    ValidationReport report;
    report.kind = m.kind();
    const std::size_t n = m.n();

    report.top_row_all_ones = true;
    for (std::size_t c = 0; c < n; ++c)
        if (m.entry_sign(0, c) != 1 || m.row_half_exponent(0) != 0) {
            report.top_row_all_ones = false;
            break;
        }

    if (m.kind() == MatrixKind::WalshHadamard) {
        bool left = true;
        for (std::size_t r = 0; r < n; ++r)
            if (m.entry_sign(r, 0) != 1) {
                left = false;
                break;
            }
        report.left_column_all_ones = left;
    }

    // max |(1/N) M M^T - I|; rows are sparse, so skip zero entries of row i
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double wi = m.row_weight(i);
        for (std::size_t j = i; j < n; ++j) {
            const double wj = m.row_weight(j);
            std::int64_t dot_signs = 0;
            for (std::size_t c = 0; c < n; ++c) {
                int si = m.entry_sign(i, c);
                if (si == 0) continue;
                dot_signs += si * m.entry_sign(j, c);
            }
            double v = wi * wj * static_cast<double>(dot_signs) / static_cast<double>(n);
            if (i == j) v -= 1.0;
            residual = std::max(residual, std::abs(v));
        }
    }
    report.orthogonality_residual = residual;

    bool entries_ok = true;
    for (std::size_t r = 0; r < n && entries_ok; ++r) {
        int half = m.row_half_exponent(r);
        switch (m.kind()) {
            case MatrixKind::WalshHadamard:
                if (half != 0 || m.row_nonzeros(r) != n) entries_ok = false;
                break;
            case MatrixKind::HaarUnnormalized:
                if (half != 0) entries_ok = false;
                break;
            case MatrixKind::HaarNormalized:
                if (half >= m.l() || (r == 0 && half != 0)) entries_ok = false;
                break;
        }
    }
    report.entries_in_kind_set = entries_ok;

    TransformMatrix canonical = m.kind() == MatrixKind::WalshHadamard ? build_walsh_hadamard(m.l())
                                : m.kind() == MatrixKind::HaarNormalized
                                    ? build_haar_normalized(m.l())
                                    : build_haar_unnormalized(m.l());
    report.canonical_row_order = m.same_rows(canonical);
    return report;
}

namespace {

// (support offset, support width, sign changes): distinct for every row of the
// canonical Haar and Walsh-Hadamard matrices.
std::tuple<std::size_t, std::size_t, std::size_t> row_signature(const TransformMatrix& m,
                                                                std::size_t row) {
    const std::size_t n = m.n();
    std::size_t first = n, last = 0, changes = 0;
    int prev = 0;
    for (std::size_t c = 0; c < n; ++c) {
        int s = m.entry_sign(row, c);
        if (s == 0) continue;
        if (first == n) first = c;
        last = c;
        if (prev != 0 && s != prev) ++changes;
        prev = s;
    }
    if (first == n) return {n, 0, 0};  // all-zero row: never canonical
    return {first, last - first + 1, changes};
}

}  // namespace

std::vector<std::size_t> restore_row_order(const TransformMatrix& m) {
    TransformMatrix canonical = m.kind() == MatrixKind::WalshHadamard ? build_walsh_hadamard(m.l())
                                : m.kind() == MatrixKind::HaarNormalized
                                    ? build_haar_normalized(m.l())
                                    : build_haar_unnormalized(m.l());
    const std::size_t n = m.n();
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> canon_pos;
    for (std::size_t r = 0; r < n; ++r) canon_pos[row_signature(canonical, r)] = r;

    std::vector<std::size_t> perm(n);
    std::vector<bool> used(n, false);
    for (std::size_t r = 0; r < n; ++r) {
        auto it = canon_pos.find(row_signature(m, r));
        if (it == canon_pos.end())
            throw ValidationError("row " + std::to_string(r) +
                                  " matches no canonical row of this kind");
        const std::size_t target = it->second;
        if (used[target]) throw ValidationError("duplicate row signature: not a row permutation");
        for (std::size_t c = 0; c < n; ++c)
            if (m.entry_sign(r, c) != canonical.entry_sign(target, c) ||
                m.row_half_exponent(r) != canonical.row_half_exponent(target))
                throw ValidationError("row " + std::to_string(r) +
                                      " differs from its canonical counterpart");
        used[target] = true;
        perm[r] = target;
    }
    return perm;
}

}  // namespace htelog
