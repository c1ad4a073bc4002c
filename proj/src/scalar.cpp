#include "qwgtlab/scalar.hpp"

#include <array>
#include <stdexcept>

namespace qwgtlab {

Rational sqrt_exact(const Rational& r) {
    if (r < 0)
        throw DomainError("sqrt_exact: negative argument " + format_scalar(r));
    BigInt num = numerator(r), den = denominator(r);
    BigInt sn = sqrt(num), sd = sqrt(den);
    if (sn * sn != num || sd * sd != den)
        throw DomainError("sqrt_exact: " + format_scalar(r) + " has no rational square root");
    return Rational(sn, sd);
}

Rational pow_half_exact(const Rational& base, std::size_t k) {
    Rational out = pow_int(base, k / 2);
    if (k & 1)
        out *= sqrt_exact(base);
    return out;
}

Rational parse_rational(const std::string& text) {
    if (text.empty())
        throw ParseError("empty scalar literal");
    auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            BigInt p(text.substr(0, slash));
            BigInt q(text.substr(slash + 1));
            if (q == 0)
                throw ParseError("rational literal with zero denominator: " + text);
            return Rational(p, q);
        }
        auto dot = text.find('.');
        if (dot == std::string::npos)
            return Rational(BigInt(text));
        // finite decimal -> exact fraction
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        std::size_t frac_len = text.size() - dot - 1;
        BigInt p(digits);
        BigInt q = 1;
        for (std::size_t i = 0; i < frac_len; ++i)
            q *= 10;
        return Rational(p, q);
    } catch (const std::runtime_error& e) {
        throw ParseError("bad rational literal '" + text + "': " + e.what());
    }
}

double parse_double(const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ParseError("bad numeric literal '" + text + "'");
    return v;
}

std::string format_scalar(const Rational& v) {
    BigInt num = numerator(v), den = denominator(v);
    if (den == 1)
        return num.str();
    return num.str() + "/" + den.str();
}

std::string format_scalar(double v) {
    std::array<char, 64> buf;
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

} // namespace qwgtlab
