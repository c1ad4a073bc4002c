#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qwgtlab {

// Input/file rejections: malformed JSON, bad field types, invalid graphs.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Brute-force guard or enumeration cap exceeded.
struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Mathematically invalid evaluation request (|lambda| >= 1, diag(A) != I, ...).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evaluation limits shared by all enumeration paths.
//
// oracle_bits guards the 2^n brute-force oracles (direct partition sums,
// brute-force QWGT, direct Potts). enumeration_cap bounds the number of
// kernel elements (or scan terms) any accelerated path may visit.
// chunk size is fixed: results must not depend on the thread count.
struct EvalLimits {
    unsigned oracle_bits = 24;
    std::uint64_t enumeration_cap = std::uint64_t{1} << 28;
    unsigned threads = 1;

    static constexpr std::uint64_t kChunk = std::uint64_t{1} << 14;
};

inline void check_oracle(std::uint64_t bits, const EvalLimits& lim, const char* what) {
    if (bits > lim.oracle_bits) {
        throw CapExceeded(std::string(what) + ": oracle too large, needs 2^" +
                          std::to_string(bits) + " terms, guard is 2^" +
                          std::to_string(lim.oracle_bits));
    }
}

inline void check_cap(unsigned dim_bits, const EvalLimits& lim, const char* what) {
    if (dim_bits >= 63 || (std::uint64_t{1} << dim_bits) > lim.enumeration_cap) {
        throw CapExceeded(std::string(what) + ": instance too large, requires 2^" +
                          std::to_string(dim_bits) + " elements, configured cap is " +
                          std::to_string(lim.enumeration_cap));
    }
}

} // namespace qwgtlab
