#include "qwgtlab/knot.hpp"

#include <cmath>

#include "qwgtlab/qwgt.hpp"

namespace qwgtlab {

namespace {

constexpr double kBranchTol = 1e-9;

Complex nth_power_of_a(Complex a, int b_sign) {
    // A^(-4 b): b = +1 -> 1/A^4, b = -1 -> A^4.
    Complex a2 = a * a;
    Complex a4 = a2 * a2;
    return b_sign > 0 ? Complex(1.0, 0.0) / a4 : a4;
}

// Log with -0.0 imaginary parts lifted to +0.0, so negative reals land on
// the +i pi side of the branch cut.
Complex principal_log(Complex z) {
    if (z.imag() == 0.0)
        z = Complex(z.real(), 0.0);
    return std::log(z);
}

} // namespace

CrossingAssignment CrossingAssignment::from_raw(Graph lattice, const std::vector<int>& raw,
                                                std::vector<Orientation> orientation) {
    if (raw.size() != lattice.num_edges() || orientation.size() != lattice.num_edges())
        throw std::invalid_argument("CrossingAssignment: lattice has " +
                                    std::to_string(lattice.num_edges()) + " edges, got " +
                                    std::to_string(raw.size()) + " crossings and " +
                                    std::to_string(orientation.size()) + " orientations");
    CrossingAssignment cfg;
    cfg.crossing_sign.resize(raw.size());
    for (std::size_t e = 0; e < raw.size(); ++e) {
        if (raw[e] != 1 && raw[e] != -1)
            throw std::invalid_argument("CrossingAssignment: crossing " + std::to_string(e) +
                                        " must be +1 or -1");
        cfg.crossing_sign[e] = orientation[e] == Orientation::Vertical ? -raw[e] : raw[e];
    }
    cfg.lattice = std::move(lattice);
    cfg.orientation = std::move(orientation);
    return cfg;
}

void CrossingAssignment::validate() const {
    if (crossing_sign.size() != lattice.num_edges())
        throw std::invalid_argument("CrossingAssignment: lattice has " +
                                    std::to_string(lattice.num_edges()) + " edges, got " +
                                    std::to_string(crossing_sign.size()) + " crossing signs");
    for (std::size_t e = 0; e < crossing_sign.size(); ++e)
        if (crossing_sign[e] != 1 && crossing_sign[e] != -1)
            throw std::invalid_argument("CrossingAssignment: crossing " + std::to_string(e) +
                                        " must be +1 or -1");
}

Complex q_of_A(Complex a) {
    if (a == Complex(0.0, 0.0))
        throw DomainError("q_of_A: A must be nonzero");
    Complex a2 = a * a;
    Complex s = a2 + Complex(1.0, 0.0) / a2;
    return s * s;
}

std::vector<Complex> A_of_q(Complex q) {
    Complex sq = std::sqrt(q);
    Complex sq4 = std::sqrt(q - Complex(4.0, 0.0));
    std::vector<Complex> roots;
    for (int inner : {+1, -1}) {
        Complex a2 = (sq + (inner > 0 ? sq4 : -sq4)) / 2.0;
        Complex r = std::sqrt(a2);
        for (int outer : {+1, -1}) {
            Complex cand = outer > 0 ? r : -r;
            if (cand == Complex(0.0, 0.0))
                continue;
            if (std::abs(q_of_A(cand) - q) <= 1e-12 * std::max(1.0, std::abs(q)))
                roots.push_back(cand);
        }
    }
    return roots;
}

std::vector<Complex> kauffman_couplings(Complex a, const CrossingAssignment& cfg) {
    if (a == Complex(0.0, 0.0))
        throw DomainError("kauffman_couplings: A must be nonzero");
    cfg.validate();
    std::vector<Complex> out(cfg.lattice.num_edges());
    for (std::size_t e = 0; e < out.size(); ++e)
        out[e] = principal_log(-nth_power_of_a(a, cfg.crossing_sign[e]));
    return out;
}

Complex potts_q2_direct(const Graph& g, std::span<const Complex> beta_j, const EvalLimits& lim) {
    if (beta_j.size() != g.num_edges())
        throw std::invalid_argument("potts_q2_direct: graph has " + std::to_string(g.num_edges()) +
                                    " edges, got " + std::to_string(beta_j.size()) +
                                    " couplings");
    check_oracle(g.num_vertices(), lim, "potts_q2_direct");
    const std::size_t nv = g.num_vertices();
    std::vector<std::vector<std::pair<std::uint32_t, Complex>>> adj(nv);
    Complex aligned(0.0, 0.0);
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        auto [i, j] = g.edge(e);
        adj[i].emplace_back(j, beta_j[e]);
        adj[j].emplace_back(i, beta_j[e]);
        aligned += beta_j[e];
    }
    std::vector<unsigned char> state(nv, 0);
    Complex z = std::exp(aligned);
    const std::uint64_t total = std::uint64_t{1} << nv;
    for (std::uint64_t t = 1; t < total; ++t) {
        auto v = static_cast<std::size_t>(std::countr_zero(t));
        for (auto& [u, c] : adj[v])
            aligned += (state[v] == state[u]) ? -c : c;
        state[v] ^= 1;
        z += std::exp(aligned);
    }
    return z;
}

IsingReduction potts2_to_ising(std::span<const Complex> couplings, Complex reference) {
    Complex half_ref = reference / 2.0;
    if (std::abs(std::cosh(half_ref)) < kBranchTol)
        throw DomainError("potts2_to_ising: branch-singular reference coupling, cosh(beta J / 2) = 0");
    Complex lambda = std::tanh(half_ref);
    Complex cosh_ref = std::cosh(half_ref);

    IsingReduction red;
    red.lambda = lambda;
    red.beta_j_half = half_ref;
    red.bonds.w = Gf2Vector(couplings.size());

    Complex half_sum(0.0, 0.0);
    Complex cosh_ratio(1.0, 0.0);
    const double scale = std::max(1.0, std::abs(lambda));
    for (std::size_t e = 0; e < couplings.size(); ++e) {
        Complex h = couplings[e] / 2.0;
        half_sum += h;
        if (std::abs(std::cosh(h)) < kBranchTol)
            throw DomainError("potts2_to_ising: branch-singular coupling on edge " +
                              std::to_string(e));
        Complex le = std::tanh(h);
        if (std::abs(le - lambda) <= kBranchTol * scale) {
            // ferromagnetic relative to the reference
        } else if (std::abs(le + lambda) <= kBranchTol * scale) {
            red.bonds.w.flip(e);
        } else {
            throw DomainError("potts2_to_ising: edge " + std::to_string(e) +
                              " not reducible to +-J form (tanh mismatch)");
        }
        Complex ratio = std::cosh(h) / cosh_ref;
        if (std::abs(std::abs(ratio) - 1.0) > kBranchTol)
            throw DomainError("potts2_to_ising: edge " + std::to_string(e) +
                              " not reducible to +-J form (cosh magnitude mismatch)");
        cosh_ratio *= ratio;
    }
    red.prefactor = std::exp(half_sum) * cosh_ratio;
    return red;
}

KauffmanEvaluation kauffman_q2_via_qwgt(Complex a, const CrossingAssignment& cfg,
                                        const EvalLimits& lim) {
    auto couplings = kauffman_couplings(a, cfg);
    Complex reference = principal_log(-nth_power_of_a(a, +1));
    auto red = potts2_to_ising(couplings, reference);

    const std::size_t nv = cfg.lattice.num_vertices();
    const std::size_t ne = cfg.lattice.num_edges();
    QwgtInstance<Complex> qi{incidence_matrix(cfg.lattice), dg(red.bonds.w), red.lambda,
                             Complex(1.0, 0.0)};
    Complex s = qwgt_kernel(qi, lim);
    Complex z_ising =
        pow_int(Complex(2.0, 0.0), nv) * pow_int(std::cosh(red.beta_j_half), ne) * s;

    KauffmanEvaluation ev;
    ev.value = red.prefactor * z_ising;
    ev.lambda = red.lambda;
    ev.kernel_dim = cycle_space_dimension(cfg.lattice);
    ev.terms_evaluated = std::uint64_t{1} << ev.kernel_dim;
    return ev;
}

} // namespace qwgtlab
