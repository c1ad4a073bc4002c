#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "qwgtlab/errors.hpp"

namespace qwgtlab {

/// Fixed-length bit vector over GF(2), packed into 64-bit words.
class Gf2Vector {
public:
    Gf2Vector() = default;
    explicit Gf2Vector(std::size_t len) : len_(len), words_((len + 63) / 64, 0) {}

    static Gf2Vector from_bits(std::initializer_list<int> bits);
    static Gf2Vector from_bits(const std::vector<int>& bits);

    std::size_t size() const { return len_; }

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v) {
        if (v)
            words_[i >> 6] |= std::uint64_t{1} << (i & 63);
        else
            words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    Gf2Vector& operator^=(const Gf2Vector& o);

    std::size_t popcount() const;
    bool is_zero() const;

    /// Mod-2 inner product; lengths must match.
    bool dot(const Gf2Vector& o) const;

    bool operator==(const Gf2Vector& o) const { return len_ == o.len_ && words_ == o.words_; }

    std::span<const std::uint64_t> words() const { return words_; }

    /// "0101..." with bit 0 leftmost.
    std::string to_string() const;

    /// this ++ tail (tail bits appended after position size()-1).
    Gf2Vector concat(const Gf2Vector& tail) const;

private:
    std::size_t len_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Dense row-major bit matrix over GF(2).
class Gf2Matrix {
public:
    Gf2Matrix() = default;
    Gf2Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), words_(rows * wpr_, 0) {}

    static Gf2Matrix from_rows(std::initializer_list<std::initializer_list<int>> rows);
    static Gf2Matrix from_rows(const std::vector<std::vector<int>>& rows);
    static Gf2Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const {
        return (words_[r * wpr_ + (c >> 6)] >> (c & 63)) & 1u;
    }
    void set(std::size_t r, std::size_t c, bool v) {
        auto& w = words_[r * wpr_ + (c >> 6)];
        if (v)
            w |= std::uint64_t{1} << (c & 63);
        else
            w &= ~(std::uint64_t{1} << (c & 63));
    }

    std::span<const std::uint64_t> row(std::size_t r) const { return {&words_[r * wpr_], wpr_}; }

    bool operator==(const Gf2Matrix& o) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0, wpr_ = 0;
    std::vector<std::uint64_t> words_;

    friend Gf2Matrix transpose(const Gf2Matrix&);
    friend Gf2Matrix add(const Gf2Matrix&, const Gf2Matrix&);
    friend std::size_t gauss_eliminate(Gf2Matrix&, std::vector<std::size_t>&);
};

Gf2Matrix transpose(const Gf2Matrix& m);
Gf2Matrix add(const Gf2Matrix& a, const Gf2Matrix& b);

/// result[i] = row_i(M) . v mod 2
Gf2Vector matvec(const Gf2Matrix& m, const Gf2Vector& v);

/// b^T B b mod 2; B must be square with b.size() == B.cols().
bool quadratic_form(const Gf2Matrix& b_mat, const Gf2Vector& b);

std::size_t rank(const Gf2Matrix& m);

/// Basis of {v : Mv = 0}; the span has exactly 2^dim elements.
struct KernelBasis {
    std::vector<Gf2Vector> basis;
    std::size_t vector_len = 0;

    std::size_t dim() const { return basis.size(); }
    std::uint64_t span_size() const { return std::uint64_t{1} << basis.size(); }
};

KernelBasis kernel_basis(const Gf2Matrix& m);

/// Walks span(basis) in reflected-binary Gray order over the basis
/// coefficients, so consecutive elements differ by exactly one basis
/// vector. Per-step metadata is maintained incrementally:
///
///   weight    = |b|                    (popcount, O(words))
///   w_parity  = b . w                  (one precomputed bit per basis vector)
///   quad      = b^T B b                via (b+k)^T B (b+k) = b^T B b + k^T B k + b^T(B+B^T)k,
///               with the cross terms b^T(B+B^T)k_j kept as a dim-bit vector
///               updated from the Gram bits k_i^T(B+B^T)k_j.
///
/// Chunked evaluation seeds a fresh state at any Gray index, so the
/// coefficient space can be split into contiguous segments whose partial
/// results are reduced deterministically.
class KernelEnumerator {
public:
    struct State {
        Gf2Vector current;
        std::size_t weight = 0;
        bool w_parity = false;
        bool quad = false;
        Gf2Vector cross; // bit j = current^T (B + B^T) k_j
    };

    KernelEnumerator(const KernelBasis& basis, const Gf2Vector* w, const Gf2Matrix* b_mat);

    std::size_t dim() const { return basis_->dim(); }
    std::uint64_t span_size() const { return basis_->span_size(); }

    /// Position at Gray(index), computing all metadata from scratch.
    State seed(std::uint64_t index) const;

    /// Advance from Gray(index-1) to Gray(index). O(words).
    void advance(State& st, std::uint64_t index) const;

private:
    const KernelBasis* basis_;
    const Gf2Vector* w_;
    const Gf2Matrix* b_mat_;
    Gf2Vector basis_w_parity_;          // bit j = k_j . w
    Gf2Vector basis_quad_;              // bit j = k_j^T B k_j
    std::vector<Gf2Vector> bilinear_;   // (B+B^T) k_j, for seeding cross terms
    std::vector<Gf2Vector> gram_;       // row j, bit i = k_j^T (B+B^T) k_i
};

struct EnumerationSummary {
    std::uint64_t visited = 0;
    std::size_t dim = 0;
};

using KernelVisitor =
    std::function<void(const Gf2Vector& b, std::size_t weight, bool w_parity, bool quad)>;

/// Visits every element of span(basis) exactly once in Gray-code order.
/// w and b_mat are optional; their metadata bits are 0 when absent.
EnumerationSummary enumerate_kernel(const KernelBasis& basis, const Gf2Vector* w,
                                    const Gf2Matrix* b_mat, const KernelVisitor& visitor,
                                    const EvalLimits& lim = {});

} // namespace qwgtlab
