#include "qwgtlab/gf2.hpp"

#include <bit>
#include <stdexcept>

namespace qwgtlab {

namespace {

std::uint64_t and_parity(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc ^= a[i] & b[i];
    return std::popcount(acc) & 1u;
}

} // namespace

Gf2Vector Gf2Vector::from_bits(std::initializer_list<int> bits) {
    return from_bits(std::vector<int>(bits));
}

Gf2Vector Gf2Vector::from_bits(const std::vector<int>& bits) {
    Gf2Vector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i])
            v.flip(i);
    return v;
}

Gf2Vector& Gf2Vector::operator^=(const Gf2Vector& o) {
    if (len_ != o.len_)
        throw std::invalid_argument("Gf2Vector xor: length " + std::to_string(len_) +
                                    " vs " + std::to_string(o.len_));
    for (std::size_t i = 0; i < words_.size(); ++i)
        words_[i] ^= o.words_[i];
    return *this;
}

std::size_t Gf2Vector::popcount() const {
    std::size_t n = 0;
    for (auto w : words_)
        n += std::popcount(w);
    return n;
}

bool Gf2Vector::is_zero() const {
    for (auto w : words_)
        if (w)
            return false;
    return true;
}

bool Gf2Vector::dot(const Gf2Vector& o) const {
    if (len_ != o.len_)
        throw std::invalid_argument("Gf2Vector dot: length " + std::to_string(len_) +
                                    " vs " + std::to_string(o.len_));
    return and_parity(words_, o.words_);
}

std::string Gf2Vector::to_string() const {
    std::string s(len_, '0');
    for (std::size_t i = 0; i < len_; ++i)
        if (get(i))
            s[i] = '1';
    return s;
}

Gf2Vector Gf2Vector::concat(const Gf2Vector& tail) const {
    Gf2Vector out(len_ + tail.len_);
    for (std::size_t i = 0; i < len_; ++i)
        if (get(i))
            out.flip(i);
    for (std::size_t i = 0; i < tail.len_; ++i)
        if (tail.get(i))
            out.flip(len_ + i);
    return out;
}

Gf2Matrix Gf2Matrix::from_rows(std::initializer_list<std::initializer_list<int>> rows) {
    std::vector<std::vector<int>> v;
    for (auto& r : rows)
        v.emplace_back(r);
    return from_rows(v);
}

Gf2Matrix Gf2Matrix::from_rows(const std::vector<std::vector<int>>& rows) {
    std::size_t nc = rows.empty() ? 0 : rows[0].size();
    Gf2Matrix m(rows.size(), nc);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != nc)
            throw std::invalid_argument("Gf2Matrix: ragged rows");
        for (std::size_t c = 0; c < nc; ++c)
            if (rows[r][c])
                m.set(r, c, true);
    }
    return m;
}

Gf2Matrix Gf2Matrix::identity(std::size_t n) {
    Gf2Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.set(i, i, true);
    return m;
}

Gf2Matrix transpose(const Gf2Matrix& m) {
    Gf2Matrix t(m.cols(), m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (m.get(r, c))
                t.set(c, r, true);
    return t;
}

Gf2Matrix add(const Gf2Matrix& a, const Gf2Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("Gf2Matrix add: shape mismatch");
    Gf2Matrix out = a;
    for (std::size_t i = 0; i < out.words_.size(); ++i)
        out.words_[i] ^= b.words_[i];
    return out;
}

Gf2Vector matvec(const Gf2Matrix& m, const Gf2Vector& v) {
    if (v.size() != m.cols())
        throw std::invalid_argument("matvec: matrix has " + std::to_string(m.cols()) +
                                    " cols, vector has " + std::to_string(v.size()) + " entries");
    Gf2Vector out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        if (and_parity(m.row(r), v.words()))
            out.flip(r);
    return out;
}

bool quadratic_form(const Gf2Matrix& b_mat, const Gf2Vector& b) {
    if (b_mat.rows() != b_mat.cols())
        throw std::invalid_argument("quadratic_form: B is " + std::to_string(b_mat.rows()) +
                                    "x" + std::to_string(b_mat.cols()) + ", not square");
    if (b.size() != b_mat.cols())
        throw std::invalid_argument("quadratic_form: B has " + std::to_string(b_mat.cols()) +
                                    " cols, vector has " + std::to_string(b.size()) + " entries");
    // b^T B b = sum_i b_i (row_i(B) . b)
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < b_mat.rows(); ++i)
        if (b.get(i))
            acc ^= and_parity(b_mat.row(i), b.words());
    return acc & 1u;
}

// In-place row echelon (leftmost pivots), eliminating above and below.
// Returns rank; pivot_cols receives the pivot column of each pivot row.
std::size_t gauss_eliminate(Gf2Matrix& m, std::vector<std::size_t>& pivot_cols) {
    pivot_cols.clear();
    std::size_t pivot_row = 0;
    const std::size_t wpr = m.wpr_;
    for (std::size_t col = 0; col < m.cols() && pivot_row < m.rows(); ++col) {
        std::size_t sel = pivot_row;
        while (sel < m.rows() && !m.get(sel, col))
            ++sel;
        if (sel == m.rows())
            continue;
        if (sel != pivot_row)
            for (std::size_t k = 0; k < wpr; ++k)
                std::swap(m.words_[sel * wpr + k], m.words_[pivot_row * wpr + k]);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r != pivot_row && m.get(r, col))
                for (std::size_t k = 0; k < wpr; ++k)
                    m.words_[r * wpr + k] ^= m.words_[pivot_row * wpr + k];
        }
        pivot_cols.push_back(col);
        ++pivot_row;
    }
    return pivot_row;
}

std::size_t rank(const Gf2Matrix& m) {
    Gf2Matrix copy = m;
    std::vector<std::size_t> pivots;
    return gauss_eliminate(copy, pivots);
}

KernelBasis kernel_basis(const Gf2Matrix& m) {
    Gf2Matrix rref = m;
    std::vector<std::size_t> pivot_cols;
    std::size_t rk = gauss_eliminate(rref, pivot_cols);

    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : pivot_cols)
        is_pivot[c] = true;

    KernelBasis kb;
    kb.vector_len = m.cols();
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f])
            continue;
        Gf2Vector v(m.cols());
        v.flip(f);
        for (std::size_t pr = 0; pr < rk; ++pr)
            if (rref.get(pr, f))
                v.flip(pivot_cols[pr]);
        kb.basis.push_back(std::move(v));
    }
    return kb;
}

KernelEnumerator::KernelEnumerator(const KernelBasis& basis, const Gf2Vector* w,
                                   const Gf2Matrix* b_mat)
    : basis_(&basis), w_(w), b_mat_(b_mat),
      basis_w_parity_(basis.dim()), basis_quad_(basis.dim()) {
    const std::size_t d = basis.dim();
    if (w_) {
        for (std::size_t j = 0; j < d; ++j)
            if (basis.basis[j].dot(*w_))
                basis_w_parity_.flip(j);
    }
    if (b_mat_) {
        Gf2Matrix sym = add(*b_mat_, transpose(*b_mat_));
        bilinear_.reserve(d);
        for (std::size_t j = 0; j < d; ++j) {
            if (quadratic_form(*b_mat_, basis.basis[j]))
                basis_quad_.flip(j);
            bilinear_.push_back(matvec(sym, basis.basis[j]));
        }
        gram_.reserve(d);
        for (std::size_t j = 0; j < d; ++j) {
            Gf2Vector row(d);
            for (std::size_t i = 0; i < d; ++i)
                if (basis.basis[j].dot(bilinear_[i]))
                    row.flip(i);
            gram_.push_back(std::move(row));
        }
    }
}

KernelEnumerator::State KernelEnumerator::seed(std::uint64_t index) const {
    State st;
    st.current = Gf2Vector(basis_->vector_len);
    st.cross = Gf2Vector(basis_->dim());
    std::uint64_t gray = index ^ (index >> 1);
    for (std::size_t j = 0; j < basis_->dim(); ++j)
        if ((gray >> j) & 1u)
            st.current ^= basis_->basis[j];
    st.weight = st.current.popcount();
    if (w_)
        st.w_parity = st.current.dot(*w_);
    if (b_mat_) {
        st.quad = quadratic_form(*b_mat_, st.current);
        for (std::size_t j = 0; j < basis_->dim(); ++j)
            if (st.current.dot(bilinear_[j]))
                st.cross.flip(j);
    }
    return st;
}

void KernelEnumerator::advance(State& st, std::uint64_t index) const {
    // Gray(index-1) and Gray(index) differ in bit countr_zero(index).
    const unsigned j = static_cast<unsigned>(std::countr_zero(index));
    if (b_mat_) {
        st.quad = st.quad ^ basis_quad_.get(j) ^ st.cross.get(j);
        st.cross ^= gram_[j];
    }
    st.current ^= basis_->basis[j];
    st.weight = st.current.popcount();
    if (w_)
        st.w_parity = st.w_parity ^ basis_w_parity_.get(j);
}

EnumerationSummary enumerate_kernel(const KernelBasis& basis, const Gf2Vector* w,
                                    const Gf2Matrix* b_mat, const KernelVisitor& visitor,
                                    const EvalLimits& lim) {
    check_cap(static_cast<unsigned>(basis.dim()), lim, "enumerate_kernel");
    KernelEnumerator en(basis, w, b_mat);
    const std::uint64_t total = en.span_size();
    auto st = en.seed(0);
    visitor(st.current, st.weight, st.w_parity, st.quad);
    for (std::uint64_t t = 1; t < total; ++t) {
        en.advance(st, t);
        visitor(st.current, st.weight, st.w_parity, st.quad);
    }
    return {total, basis.dim()};
}

} // namespace qwgtlab
