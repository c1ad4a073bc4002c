#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "qwgtlab/graph.hpp"
#include "qwgtlab/qwgt.hpp"
#include "qwgtlab/scalar.hpp"

namespace qwgtlab {

inline double lambda_of(double beta_j) { return std::tanh(beta_j); }
inline Complex lambda_of(Complex beta_j) { return std::tanh(beta_j); }

template <class S>
S theta_of(const S& beta_j, std::size_t num_edges) {
    return pow_int(std::cosh(beta_j), num_edges);
}

/// Coupling strength, given either as beta*J (real or complex, dimensionless)
/// or as lambda = tanh(beta*J) directly. Exact-rational instances carry
/// lambda only.
template <class S>
struct Coupling {
    std::optional<S> beta_j;
    S lambda{};

    static Coupling from_lambda(S l) { return {std::nullopt, std::move(l)}; }
    static Coupling from_beta_j(S b)
        requires(!ScalarOps<S>::exact)
    {
        S l = lambda_of(b);
        return {std::move(b), std::move(l)};
    }
};

template <class S>
struct SpinGlassInstance {
    Graph graph;
    BondConfig bonds;
    Coupling<S> coupling;

    void validate() const {
        if (bonds.w.size() != graph.num_edges())
            throw std::invalid_argument("SpinGlassInstance: graph has " +
                                        std::to_string(graph.num_edges()) + " edges, w has " +
                                        std::to_string(bonds.w.size()) + " entries");
    }
};

/// H/J for spin configuration s (s_i = 0 is spin up): -sum_e q_e sigma_i sigma_j.
inline long energy(const Graph& g, const BondConfig& bonds, const Gf2Vector& spins) {
    if (bonds.w.size() != g.num_edges())
        throw std::invalid_argument("energy: graph has " + std::to_string(g.num_edges()) +
                                    " edges, w has " + std::to_string(bonds.w.size()) + " entries");
    if (spins.size() != g.num_vertices())
        throw std::invalid_argument("energy: graph has " + std::to_string(g.num_vertices()) +
                                    " vertices, spins has " + std::to_string(spins.size()) +
                                    " entries");
    long h = 0;
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        auto [i, j] = g.edge(e);
        int q = bonds.w.get(e) ? -1 : 1;
        int ss = (spins.get(i) == spins.get(j)) ? 1 : -1;
        h -= q * ss;
    }
    return h;
}

/// Theta = cosh(beta J)^|E| when beta J is known, (1 - lambda^2)^(-|E|/2)
/// otherwise. The cosh form is preferred for complex couplings since it has
/// no half-integer-power branch ambiguity.
template <class S>
S theta_factor(const Coupling<S>& c, std::size_t num_edges) {
    if constexpr (ScalarOps<S>::exact) {
        if (c.beta_j)
            throw DomainError("exact-rational mode supports lambda couplings only");
        if (ScalarOps<S>::magnitude(c.lambda) >= 1)
            throw DomainError("zero-temperature singularity: |lambda| >= 1");
        return 1 / pow_half_exact(1 - c.lambda * c.lambda, num_edges);
    } else {
        if (c.beta_j)
            return theta_of(*c.beta_j, num_edges);
        S om = ScalarOps<S>::one() - c.lambda * c.lambda;
        if constexpr (std::is_same_v<S, double>) {
            if (std::abs(c.lambda) >= 1)
                throw DomainError("zero-temperature singularity: |lambda| >= 1");
            return std::pow(om, -0.5 * static_cast<double>(num_edges));
        } else {
            if (ScalarOps<S>::magnitude(om) == 0)
                throw DomainError("zero-temperature singularity: lambda^2 = 1");
            return std::pow(om, Complex(-0.5 * static_cast<double>(num_edges), 0.0));
        }
    }
}

template <class S>
S kernel_prefactor(const Coupling<S>& c, std::size_t num_vertices, std::size_t num_edges) {
    return pow_int(ScalarOps<S>::from_int(2), num_vertices) * theta_factor(c, num_edges);
}

namespace detail {

/// hist[k + |E|] = number of spin configurations with sum_e q_e s_i s_j = k.
/// Walks the 2^|V| configurations in Gray order, updating the interaction
/// sum through the flipped vertex's incident edges only.
inline std::vector<std::uint64_t> interaction_histogram(const Graph& g, const BondConfig& bonds,
                                                        const EvalLimits& lim, const char* what) {
    check_oracle(g.num_vertices(), lim, what);
    const std::size_t nv = g.num_vertices(), ne = g.num_edges();
    std::vector<std::vector<std::pair<std::uint32_t, int>>> adj(nv);
    long k = 0;
    for (std::size_t e = 0; e < ne; ++e) {
        auto [i, j] = g.edge(e);
        int q = bonds.w.get(e) ? -1 : 1;
        adj[i].emplace_back(j, q);
        adj[j].emplace_back(i, q);
        k += q;
    }
    std::vector<std::uint64_t> hist(2 * ne + 1, 0);
    std::vector<int> sigma(nv, 1);
    hist[static_cast<std::size_t>(k + static_cast<long>(ne))]++;
    const std::uint64_t total = std::uint64_t{1} << nv;
    for (std::uint64_t t = 1; t < total; ++t) {
        auto v = static_cast<std::size_t>(std::countr_zero(t));
        for (auto [u, q] : adj[v])
            k -= 2 * q * sigma[v] * sigma[u];
        sigma[v] = -sigma[v];
        hist[static_cast<std::size_t>(k + static_cast<long>(ne))]++;
    }
    return hist;
}

/// sum_b lambda^|b| (-1)^(alpha^b . s + b . w) over all 2^|E| subgraphs,
/// with per-step O(1) parity updates. The +-1 signs are tallied into exact
/// per-weight counters first, so each lambda power enters the floating sum
/// exactly once.
template <class S>
S all_subgraph_sum(const Graph& g, const BondConfig& bonds, const Gf2Vector& spins,
                   std::span<const S> lambda_pow) {
    const std::size_t ne = g.num_edges();
    // Flipping edge e = (i,j) changes alpha^b . s by s_i + s_j and b . w by w_e.
    std::vector<unsigned char> edge_flip(ne);
    for (std::size_t e = 0; e < ne; ++e) {
        auto [i, j] = g.edge(e);
        edge_flip[e] = static_cast<unsigned char>((spins.get(i) ^ spins.get(j)) ^ bonds.w.get(e));
    }
    std::vector<long long> signed_counts(ne + 1, 0);
    signed_counts[0] = 1;
    unsigned parity = 0;
    std::size_t weight = 0;
    std::uint64_t mask = 0;
    const std::uint64_t total = std::uint64_t{1} << ne;
    for (std::uint64_t t = 1; t < total; ++t) {
        auto e = static_cast<std::size_t>(std::countr_zero(t));
        std::uint64_t bit = std::uint64_t{1} << e;
        mask ^= bit;
        weight += (mask & bit) ? 1 : -1;
        parity ^= edge_flip[e];
        signed_counts[weight] += parity ? -1 : 1;
    }
    S acc = ScalarOps<S>::zero();
    for (std::size_t k = 0; k <= ne; ++k)
        if (signed_counts[k])
            acc += ScalarOps<S>::from_int(static_cast<long>(signed_counts[k])) * lambda_pow[k];
    return acc;
}

} // namespace detail

/// Direct Gibbs sum over all 2^|V| spin configurations. With beta*J given the
/// weights are exp(beta J * sum q ss); with lambda only, the identity
/// exp(x) = cosh(x)(1 + tanh(x)) gives per-edge factors (1 +- lambda) and a
/// global Theta, which also keeps the exact-rational mode exact.
template <class S>
S partition_direct(const SpinGlassInstance<S>& inst, const EvalLimits& lim = {}) {
    inst.validate();
    const std::size_t ne = inst.graph.num_edges();
    auto hist = detail::interaction_histogram(inst.graph, inst.bonds, lim, "partition_direct");
    S z = ScalarOps<S>::zero();
    if (inst.coupling.beta_j) {
        if constexpr (ScalarOps<S>::exact) {
            throw DomainError("exact-rational mode supports lambda couplings only");
        } else {
            for (std::size_t idx = 0; idx < hist.size(); ++idx) {
                if (!hist[idx])
                    continue;
                long k = static_cast<long>(idx) - static_cast<long>(ne);
                z += ScalarOps<S>::from_int(static_cast<long>(hist[idx])) *
                     std::exp(*inst.coupling.beta_j * ScalarOps<S>::from_int(k));
            }
            return z;
        }
    }
    const S& lam = inst.coupling.lambda;
    auto up = weight_coefficients(ScalarOps<S>::one() + lam, ScalarOps<S>::one(), ne);
    auto dn = weight_coefficients(ScalarOps<S>::one() - lam, ScalarOps<S>::one(), ne);
    for (std::size_t idx = 0; idx < hist.size(); ++idx) {
        if (!hist[idx])
            continue;
        long k = static_cast<long>(idx) - static_cast<long>(ne);
        auto sat = static_cast<std::size_t>((static_cast<long>(ne) + k) / 2);
        z += ScalarOps<S>::from_int(static_cast<long>(hist[idx])) * up[sat] * dn[ne - sat];
    }
    return theta_factor(inst.coupling, ne) * z;
}

/// exp(-beta H(s)) / Z.
template <class S>
S gibbs_probability(const SpinGlassInstance<S>& inst, const Gf2Vector& spins,
                    const EvalLimits& lim = {}) {
    inst.validate();
    const long h = energy(inst.graph, inst.bonds, spins);
    S z = partition_direct(inst, lim);
    if (inst.coupling.beta_j) {
        if constexpr (ScalarOps<S>::exact)
            throw DomainError("exact-rational mode supports lambda couplings only");
        else
            return std::exp(*inst.coupling.beta_j * ScalarOps<S>::from_int(-h)) / z;
    }
    const std::size_t ne = inst.graph.num_edges();
    const S& lam = inst.coupling.lambda;
    auto sat = static_cast<std::size_t>((static_cast<long>(ne) - h) / 2);
    S w = theta_factor(inst.coupling, ne) * pow_int(ScalarOps<S>::one() + lam, sat) *
          pow_int(ScalarOps<S>::one() - lam, ne - sat);
    return w / z;
}

/// Boltzmann weight of s as the full 2^|E| subgraph expansion; equals
/// exp(-beta H(s)). Validation path, not a fast one.
template <class S>
S boltzmann_weight_fourier(const SpinGlassInstance<S>& inst, const Gf2Vector& spins,
                           const EvalLimits& lim = {}) {
    inst.validate();
    if (spins.size() != inst.graph.num_vertices())
        throw std::invalid_argument("boltzmann_weight_fourier: graph has " +
                                    std::to_string(inst.graph.num_vertices()) +
                                    " vertices, spins has " + std::to_string(spins.size()) +
                                    " entries");
    check_oracle(inst.graph.num_edges(), lim, "boltzmann_weight_fourier");
    auto lp = weight_coefficients(inst.coupling.lambda, ScalarOps<S>::one(),
                                  inst.graph.num_edges());
    return theta_factor(inst.coupling, inst.graph.num_edges()) *
           detail::all_subgraph_sum<S>(inst.graph, inst.bonds, spins, lp);
}

/// The double Walsh-Hadamard sum over spins and subgraphs,
/// Theta * sum_s sum_b lambda^|b| (-1)^(alpha^b . s + b . w).
/// Scans all 2^(|V|+|E|) terms; equals partition_direct.
template <class S>
S partition_double_transform(const SpinGlassInstance<S>& inst, const EvalLimits& lim = {}) {
    inst.validate();
    const std::size_t nv = inst.graph.num_vertices(), ne = inst.graph.num_edges();
    check_cap(static_cast<unsigned>(nv + ne), lim, "partition_double_transform");
    auto lp = weight_coefficients(inst.coupling.lambda, ScalarOps<S>::one(), ne);
    S acc = ScalarOps<S>::zero();
    Gf2Vector spins(nv);
    const std::uint64_t total = std::uint64_t{1} << nv;
    for (std::uint64_t t = 0; t < total; ++t) {
        if (t)
            spins.flip(static_cast<std::size_t>(std::countr_zero(t)));
        acc += detail::all_subgraph_sum<S>(inst.graph, inst.bonds, spins, lp);
    }
    return theta_factor(inst.coupling, ne) * acc;
}

/// sum over {b : A b = 0} of lambda^|b| (-1)^(b . w) — the parity-constrained
/// subgraph sum that all kernel-based paths share.
template <class S>
S constrained_subgraph_sum(const SpinGlassInstance<S>& inst, const EvalLimits& lim = {}) {
    inst.validate();
    auto basis = kernel_basis(incidence_matrix(inst.graph));
    auto lp = weight_coefficients(inst.coupling.lambda, ScalarOps<S>::one(),
                                  inst.graph.num_edges());
    return signed_weight_sum<S>(basis, nullptr, &inst.bonds.w, lp, lim, "partition_kernel");
}

/// Z via the zero-parity subgraph sum: prefactor * sum_{b: Ab=0} lambda^|b| (-1)^(b.w).
template <class S>
S partition_kernel(const SpinGlassInstance<S>& inst, const EvalLimits& lim = {}) {
    return kernel_prefactor(inst.coupling, inst.graph.num_vertices(), inst.graph.num_edges()) *
           constrained_subgraph_sum(inst, lim);
}

/// Both sides of the partition-function / weight-enumerator identity:
/// lhs = Z * (1-lambda^2)^(|E|/2) / 2^|V| (Z from the direct sum when feasible,
/// else from the kernel path), rhs = S(A_inc, dg(w), lambda, 1) evaluated by
/// the QWGT engine through the quadratic form dg(w). The two sides take fully
/// independent routes.
template <class S>
struct BridgePair {
    S lhs;
    S rhs;
};

template <class S>
BridgePair<S> qwgt_bridge(const SpinGlassInstance<S>& inst, const EvalLimits& lim = {}) {
    inst.validate();
    S z;
    if (inst.graph.num_vertices() <= lim.oracle_bits)
        z = partition_direct(inst, lim);
    else
        z = partition_kernel(inst, lim);
    S lhs = z / kernel_prefactor(inst.coupling, inst.graph.num_vertices(),
                                 inst.graph.num_edges());
    QwgtInstance<S> qi{incidence_matrix(inst.graph), dg(inst.bonds.w), inst.coupling.lambda,
                       ScalarOps<S>::one()};
    S rhs = qwgt_kernel(qi, lim);
    return {lhs, rhs};
}

template <class S>
struct SeriesResult {
    /// partial[k] = prefactor * sum over zero-parity subgraphs with |b| <= k.
    std::vector<S> partial;
    /// Set when the requested order covers every edge; equals partition_kernel.
    std::optional<S> exact;
    std::uint64_t terms_scanned = 0;
};

/// Expansion in powers of lambda, grouped by subgraph edge count. Order k
/// scans all C(|E|,k) k-edge subgraphs and keeps the zero-parity ones with
/// sign (-1)^(b . w).
template <class S>
SeriesResult<S> partition_series(const SpinGlassInstance<S>& inst, std::size_t max_order,
                                 const EvalLimits& lim = {}) {
    inst.validate();
    const std::size_t ne = inst.graph.num_edges();
    const std::size_t order = std::min(max_order, ne);
    if (ne > 62)
        throw CapExceeded("partition_series: more than 62 edges");

    std::uint64_t planned = 0;
    for (std::size_t k = 0; k <= order; ++k) {
        // C(ne, k), clamped
        std::uint64_t c = 1;
        for (std::size_t i = 0; i < k; ++i) {
            c = c * (ne - i) / (i + 1);
            if (c > lim.enumeration_cap)
                break;
        }
        planned += c;
        if (planned > lim.enumeration_cap)
            throw CapExceeded("partition_series: order " + std::to_string(order) + " needs " +
                              std::to_string(planned) + "+ subgraphs, configured cap is " +
                              std::to_string(lim.enumeration_cap));
    }

    std::uint64_t w_mask = 0;
    for (std::size_t e = 0; e < ne; ++e)
        if (inst.bonds.w.get(e))
            w_mask |= std::uint64_t{1} << e;

    std::vector<long> signed_counts(order + 1, 0);
    signed_counts[0] = 1; // the empty subgraph
    std::uint64_t scanned = 1;
    std::vector<unsigned char> vparity(inst.graph.num_vertices(), 0);
    for (std::size_t k = 1; k <= order; ++k) {
        std::uint64_t mask = (std::uint64_t{1} << k) - 1;
        const std::uint64_t limit = std::uint64_t{1} << ne;
        while (mask < limit) {
            ++scanned;
            long odd = 0;
            for (std::uint64_t m = mask; m;) {
                auto e = static_cast<std::size_t>(std::countr_zero(m));
                m &= m - 1;
                auto [i, j] = inst.graph.edge(e);
                odd += (vparity[i] ^= 1) ? 1 : -1;
                odd += (vparity[j] ^= 1) ? 1 : -1;
            }
            if (odd == 0)
                signed_counts[k] += (std::popcount(mask & w_mask) & 1) ? -1 : 1;
            for (std::uint64_t m = mask; m;) {
                auto e = static_cast<std::size_t>(std::countr_zero(m));
                m &= m - 1;
                auto [i, j] = inst.graph.edge(e);
                vparity[i] ^= 1;
                vparity[j] ^= 1;
            }
            // Gosper: next k-subset
            std::uint64_t lo = mask & (~mask + 1);
            std::uint64_t up = mask + lo;
            mask = up | (((mask ^ up) / lo) >> 2);
        }
    }

    S pref = kernel_prefactor(inst.coupling, inst.graph.num_vertices(), ne);
    auto lp = weight_coefficients(inst.coupling.lambda, ScalarOps<S>::one(), ne);
    SeriesResult<S> res;
    res.terms_scanned = scanned;
    S running = ScalarOps<S>::zero();
    for (std::size_t k = 0; k <= order; ++k) {
        running += ScalarOps<S>::from_int(signed_counts[k]) * lp[k];
        res.partial.push_back(pref * running);
    }
    if (max_order >= ne)
        res.exact = res.partial.back();
    return res;
}

/// Z for uniform bonds (fully ferromagnetic or fully antiferromagnetic),
/// with the sign folded into (+-lambda)^|b|.
template <class S>
S partition_uniform(const SpinGlassInstance<S>& inst, const EvalLimits& lim = {}) {
    inst.validate();
    const std::size_t ne = inst.graph.num_edges();
    const std::size_t ones = inst.bonds.w.popcount();
    if (ones != 0 && ones != ne)
        throw DomainError("partition_uniform: w must be all-zero or all-one (got " +
                          std::to_string(ones) + " of " + std::to_string(ne) + " ones)");
    S lam = inst.coupling.lambda;
    if (ones == ne && ne > 0)
        lam = -lam;
    auto basis = kernel_basis(incidence_matrix(inst.graph));
    auto lp = weight_coefficients(lam, ScalarOps<S>::one(), ne);
    return kernel_prefactor(inst.coupling, inst.graph.num_vertices(), ne) *
           signed_weight_sum<S>(basis, nullptr, nullptr, lp, lim, "partition_uniform");
}

/// Z with a per-vertex field of magnitude |J| (signs in field_signs),
/// computed by augmenting the graph with an always-up hub spin and halving:
/// the two hub orientations contribute equally under a global flip.
template <class S>
S partition_with_field(const SpinGlassInstance<S>& inst, const Gf2Vector& field_signs,
                       const EvalLimits& lim = {}) {
    inst.validate();
    auto star = augment_star(inst.graph, field_signs);
    SpinGlassInstance<S> aug{star.graph, {inst.bonds.w.concat(star.w_extension)}, inst.coupling};
    return partition_kernel(aug, lim) / ScalarOps<S>::from_int(2);
}

} // namespace qwgtlab
