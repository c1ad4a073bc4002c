#pragma once

#include <span>
#include <vector>

#include "qwgtlab/graph.hpp"
#include "qwgtlab/scalar.hpp"
#include "qwgtlab/spin_glass.hpp"

namespace qwgtlab {

/// Dual-lattice graph with per-edge crossing signs. The stored sign is the
/// edge value b_ij: raw crossing values are negated on vertical edges and
/// kept on horizontal ones.
struct CrossingAssignment {
    enum class Orientation : unsigned char { Horizontal, Vertical };

    Graph lattice;
    std::vector<int> crossing_sign; // converted b_ij, each +1 or -1
    std::vector<Orientation> orientation;

    /// Builds from raw crossing values, applying the vertical-edge negation.
    static CrossingAssignment from_raw(Graph lattice, const std::vector<int>& raw,
                                       std::vector<Orientation> orientation);

    void validate() const;
};

/// q = (A^2 + A^-2)^2.
Complex q_of_A(Complex a);

/// The four solutions A = +-[(q^(1/2) +- (q-4)^(1/2)) / 2]^(1/2), principal
/// square roots throughout, filtered by the q_of_A round trip.
std::vector<Complex> A_of_q(Complex q);

/// Per-edge couplings beta*J_ij = Log(-A^(-4 b_ij)), principal branch,
/// in the edge order of cfg.lattice.
std::vector<Complex> kauffman_couplings(Complex a, const CrossingAssignment& cfg);

/// Direct two-state Potts sum: sum_s prod_e exp(beta J_e delta(s_i, s_j)).
Complex potts_q2_direct(const Graph& g, std::span<const Complex> beta_j,
                        const EvalLimits& lim = {});

/// Two-state Potts -> +-J Ising reduction. delta(s_i,s_j) = (1 + s s')/2
/// halves the couplings and splits off exp(sum beta J_e / 2); tanh has period
/// i*pi, so halved couplings that differ from the reference by sign (mod i*pi)
/// collapse to a single lambda with a bond vector w. cosh picks up a sign
/// under i*pi shifts, which is folded into the prefactor so that
///     prefactor * Z_Ising(w, lambda) == potts_q2_direct
/// holds on every reducible input.
struct IsingReduction {
    BondConfig bonds;
    Complex lambda;
    Complex beta_j_half; // reference Ising coupling (reference / 2)
    Complex prefactor;
};

IsingReduction potts2_to_ising(std::span<const Complex> couplings, Complex reference);

struct KauffmanEvaluation {
    /// Z_Potts(q = 2); the Kauffman bracket up to a spin-independent constant.
    Complex value;
    bool bracket_up_to_constant = true;
    Complex lambda;
    std::size_t kernel_dim = 0;
    std::uint64_t terms_evaluated = 0;
};

/// The q = 2 pipeline: crossings -> complex couplings -> Ising reduction ->
/// S(A_inc, dg(w), lambda, 1) with complex lambda, scaled back to Z_Potts.
KauffmanEvaluation kauffman_q2_via_qwgt(Complex a, const CrossingAssignment& cfg,
                                        const EvalLimits& lim = {});

} // namespace qwgtlab
