#pragma once

#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "qwgtlab/gf2.hpp"
#include "qwgtlab/scalar.hpp"

namespace qwgtlab {

/// S(A, B, x, y) = sum over {b : Ab = 0} of (-1)^(b^T B b) x^|b| y^(n-|b|),
/// with n = A.cols() = B.cols() and all bit arithmetic mod 2.
template <class S>
struct QwgtInstance {
    Gf2Matrix a;
    Gf2Matrix b;
    S x;
    S y;

    std::size_t dimension() const { return a.cols(); }

    void validate() const {
        if (b.rows() != b.cols())
            throw std::invalid_argument("QwgtInstance: B is " + std::to_string(b.rows()) + "x" +
                                        std::to_string(b.cols()) + ", not square");
        if (b.cols() != a.cols())
            throw std::invalid_argument("QwgtInstance: A has " + std::to_string(a.cols()) +
                                        " cols but B has " + std::to_string(b.cols()));
    }
};

/// coeff[k] = x^k y^(n-k), the per-weight factors of a QWGT term.
template <class S>
std::vector<S> weight_coefficients(const S& x, const S& y, std::size_t n) {
    std::vector<S> xp(n + 1), yp(n + 1);
    xp[0] = ScalarOps<S>::one();
    yp[0] = ScalarOps<S>::one();
    for (std::size_t k = 1; k <= n; ++k) {
        xp[k] = xp[k - 1] * x;
        yp[k] = yp[k - 1] * y;
    }
    std::vector<S> coeff(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        coeff[k] = xp[k] * yp[n - k];
    return coeff;
}

namespace detail {

// Deterministic pairwise tree reduction; the result depends only on the
// order of the partials, never on how they were produced.
template <class S>
S tree_reduce(std::vector<S> parts) {
    if (parts.empty())
        return ScalarOps<S>::zero();
    while (parts.size() > 1) {
        std::size_t half = (parts.size() + 1) / 2;
        for (std::size_t i = 0; 2 * i + 1 < parts.size(); ++i)
            parts[i] = parts[2 * i] + parts[2 * i + 1];
        if (parts.size() & 1)
            parts[half - 1] = parts[parts.size() - 1];
        parts.resize(half);
    }
    return parts[0];
}

template <class S>
void sum_chunk(const KernelEnumerator& en, std::uint64_t begin, std::uint64_t end,
               std::span<const S> coeff, S& out) {
    auto st = en.seed(begin);
    S acc = ScalarOps<S>::zero();
    bool sign = st.w_parity ^ st.quad;
    if (sign)
        acc -= coeff[st.weight];
    else
        acc += coeff[st.weight];
    for (std::uint64_t t = begin + 1; t < end; ++t) {
        en.advance(st, t);
        sign = st.w_parity ^ st.quad;
        if (sign)
            acc -= coeff[st.weight];
        else
            acc += coeff[st.weight];
    }
    out = std::move(acc);
}

} // namespace detail

/// Sum over span(basis) of sgn(b) * coeff[|b|] with
/// sgn(b) = (-1)^(b^T B b + b.w), B and w each optional.
///
/// The Gray-code index space is cut into fixed-size chunks (EvalLimits::kChunk)
/// summed independently and combined by a pairwise tree, so the result is
/// bit-identical for any thread count.
template <class S>
S signed_weight_sum(const KernelBasis& basis, const Gf2Matrix* b_mat, const Gf2Vector* w,
                    std::span<const S> coeff, const EvalLimits& lim = {},
                    const char* what = "signed_weight_sum") {
    check_cap(static_cast<unsigned>(basis.dim()), lim, what);
    KernelEnumerator en(basis, w, b_mat);
    const std::uint64_t total = en.span_size();
    const std::uint64_t chunk = EvalLimits::kChunk;
    const std::uint64_t nchunks = (total + chunk - 1) / chunk;

    std::vector<S> parts(nchunks, ScalarOps<S>::zero());
    auto run_range = [&](std::uint64_t c0, std::uint64_t c1) {
        for (std::uint64_t c = c0; c < c1; ++c)
            detail::sum_chunk<S>(en, c * chunk, std::min(total, (c + 1) * chunk), coeff,
                                 parts[c]);
    };

    const unsigned threads = std::max(1u, lim.threads);
    if (threads == 1 || nchunks <= 1) {
        run_range(0, nchunks);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t per = (nchunks + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            std::uint64_t c0 = t * per, c1 = std::min<std::uint64_t>(nchunks, c0 + per);
            if (c0 < c1)
                pool.emplace_back(run_range, c0, c1);
        }
        for (auto& th : pool)
            th.join();
    }
    return detail::tree_reduce(std::move(parts));
}

/// Oracle path: scans all 2^n vectors and filters by Ab = 0.
template <class S>
S qwgt_bruteforce(const QwgtInstance<S>& inst, const EvalLimits& lim = {}) {
    inst.validate();
    const std::size_t n = inst.dimension();
    check_oracle(n, lim, "qwgt_bruteforce");
    auto coeff = weight_coefficients(inst.x, inst.y, n);
    S acc = ScalarOps<S>::zero();
    Gf2Vector b(n);
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        // Gray order keeps the refresh to one bit per step.
        if (mask) {
            b.flip(static_cast<std::size_t>(std::countr_zero(mask)));
        }
        if (!matvec(inst.a, b).is_zero())
            continue;
        bool sign = quadratic_form(inst.b, b);
        if (sign)
            acc -= coeff[b.popcount()];
        else
            acc += coeff[b.popcount()];
    }
    return acc;
}

/// Kernel-enumeration path; agrees with qwgt_bruteforce wherever both run.
template <class S>
S qwgt_kernel(const QwgtInstance<S>& inst, const EvalLimits& lim = {}) {
    inst.validate();
    auto basis = kernel_basis(inst.a);
    auto coeff = weight_coefficients(inst.x, inst.y, inst.dimension());
    return signed_weight_sum<S>(basis, &inst.b, nullptr, coeff, lim, "qwgt_kernel");
}

/// |value| <= (|x|+|y|)^n, within the scalar's closeness tolerance.
template <class S>
bool qwgt_bound_check(const QwgtInstance<S>& inst, const S& value) {
    auto bound = pow_int(ScalarOps<S>::magnitude(inst.x) + ScalarOps<S>::magnitude(inst.y),
                         inst.dimension());
    if constexpr (ScalarOps<S>::exact) {
        return ScalarOps<S>::magnitude(value) <= bound;
    } else {
        return ScalarOps<S>::magnitude(value) <= bound * (1.0 + 1e-12);
    }
}

/// Strictly-below-diagonal part of a square matrix.
Gf2Matrix ltr(const Gf2Matrix& m);
/// Diagonal part of a square matrix.
Gf2Matrix diag_of(const Gf2Matrix& m);
/// n x n matrix with w on the diagonal.
Gf2Matrix dg(const Gf2Vector& w);

/// Sign/promise check for S(A, ltr(A), k, l) with A square, diag(A) = I,
/// and k, l positive integers. The value is computed exactly; the promise
/// |S| >= (k^2+l^2)^(n/2) / 2 is decided as 4 S^2 >= (k^2+l^2)^n in integer
/// arithmetic, so half-integer exponents never round.
struct KlResult {
    int sign = 0; // -1, 0, +1
    bool promise_holds = false;
    Rational value;
};

KlResult kl_sign(const Gf2Matrix& a, long k, long l, const EvalLimits& lim = {});

} // namespace qwgtlab
