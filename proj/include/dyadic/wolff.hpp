#ifndef DYADIC_WOLFF_HPP
#define DYADIC_WOLFF_HPP

#include <string>
#include <utility>
#include <vector>

#include "dyadic/core.hpp"

namespace dyadic {

/// A permutation of the slots {0, …, n-1}; slot perm[k] is absorbed at stage k.
using Permutation = std::vector<std::size_t>;

/// Discrete Wolff potential
///   W^p_{K,μ}[ν](x) = Σ_{Q∋x} K(Q)μ(Q) ((1/μ(Q)) Σ_{Q'⊆Q} K(Q')μ(Q')ν(Q'))^{p-1},
/// with cubes of zero μ-mass contributing nothing.
LeafFunction wolff_potential(const DyadicTree& tree, const Kernel& kernel, const Measure& mu, const Measure& nu,
                             double p);

/// Exponent ladder for a permutation in the regime Σ 1/p_i < 1:
///   1/rungs[k] + Σ_{i≤k} 1/p_{perm(i)} = 1  (k = 0..n-2),  1/r + Σ_i 1/p_i = 1.
struct ExponentLadder {
    Permutation perm;
    std::vector<double> rungs; // n-1 entries, strictly increasing
    double r = 0;

    /// Largest residual of the defining chain and of its two rewritten forms.
    double max_identity_residual(const std::vector<double>& exponents) const;
};

ExponentLadder exponent_ladder(const std::vector<double>& exponents, const Permutation& perm);

/// K^φ_1 … K^φ_{n-1}, each a per-cube array in flat order.
struct IteratedKernels {
    ExponentLadder ladder;
    std::vector<std::vector<double>> stages;
};

IteratedKernels iterated_kernels(const Instance& instance, const Permutation& perm);

/// ‖(Σ_Q K^φ_{n-1}(Q) 1_Q)^{1/r_{n-1}}‖_{L^r(σ_{φ(n)})}. For n = 1 the last
/// stage is K itself with r_0 = 1.
double wolff_condition_constant(const Instance& instance, const Permutation& perm);

struct PermutationValue {
    Permutation perm;
    double value = 0;
    ExponentLadder ladder;
};

struct WolffReport {
    std::vector<PermutationValue> per_phi; // lexicographic order
    double max = 0;
    std::size_t argmax = 0;

    std::string to_json() const;
};

inline constexpr std::size_t max_wolff_arity = 6;

WolffReport wolff_constant(const Instance& instance);

/// (‖W^{p2'}_{K,σ2}[σ1]^{1/p2'}‖_{L^r(σ1)}, ‖W^{p1'}_{K,σ1}[σ2]^{1/p1'}‖_{L^r(σ2)}).
std::pair<double, double> bilinear_wolff_closed_form(const Instance& instance);

std::vector<Permutation> all_permutations(std::size_t n);

} // namespace dyadic

#endif
