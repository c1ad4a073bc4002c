#include "qwgtlab/qwgt.hpp"

namespace qwgtlab {

Gf2Matrix ltr(const Gf2Matrix& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("ltr: matrix is " + std::to_string(m.rows()) + "x" +
                                    std::to_string(m.cols()) + ", not square");
    Gf2Matrix out(m.rows(), m.cols());
    for (std::size_t r = 1; r < m.rows(); ++r)
        for (std::size_t c = 0; c < r; ++c)
            if (m.get(r, c))
                out.set(r, c, true);
    return out;
}

Gf2Matrix diag_of(const Gf2Matrix& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("diag_of: matrix is " + std::to_string(m.rows()) + "x" +
                                    std::to_string(m.cols()) + ", not square");
    Gf2Matrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        if (m.get(i, i))
            out.set(i, i, true);
    return out;
}

Gf2Matrix dg(const Gf2Vector& w) {
    Gf2Matrix out(w.size(), w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w.get(i))
            out.set(i, i, true);
    return out;
}

KlResult kl_sign(const Gf2Matrix& a, long k, long l, const EvalLimits& lim) {
    if (a.rows() != a.cols())
        throw DomainError("kl_sign: A is " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()) + ", must be square");
    if (diag_of(a) != Gf2Matrix::identity(a.rows()))
        throw DomainError("kl_sign: diag(A) must be the identity");
    if (k <= 0 || l <= 0)
        throw DomainError("kl_sign: k and l must be positive (got k=" + std::to_string(k) +
                          ", l=" + std::to_string(l) + ")");

    QwgtInstance<Rational> inst{a, ltr(a), Rational(k), Rational(l)};
    check_oracle(inst.dimension(), lim, "kl_sign");
    Rational value = qwgt_kernel(inst, lim);

    KlResult res;
    res.value = value;
    res.sign = value > 0 ? 1 : (value < 0 ? -1 : 0);
    BigInt kk(k), ll(l);
    BigInt base = kk * kk + ll * ll;
    BigInt rhs = pow_int(base, a.cols());
    Rational lhs = 4 * value * value;
    res.promise_holds = lhs >= Rational(rhs);
    return res;
}

} // namespace qwgtlab
