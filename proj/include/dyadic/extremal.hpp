#ifndef DYADIC_EXTREMAL_HPP
#define DYADIC_EXTREMAL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "dyadic/core.hpp"

namespace dyadic {

struct AscentOptions {
    double tolerance = 1e-10;  // relative change between full cycles
    int max_iterations = 1000; // full cycles per start
    int restarts = 8;          // random starts on top of the all-ones start
    std::uint64_t seed = 0;

    void validate() const;
};

struct AscentStep {
    LeafFunction function;
    bool degenerate = false; // g_j vanished on the support of σ_j
};

/// Best estimate of the least constant c1. `value` is a lower bound: it is
/// the form evaluated at unit-norm nonnegative functions.
struct ConstantEstimate {
    double value = 0;
    std::vector<double> trace; // form value after each full cycle of the best start
    std::vector<LeafFunction> argmax;
    int best_start = -1;       // 0 is the all-ones start
};

/// Replaces slot j by the normalized extremizer of f ↦ ∫ g_j f dσ_j, i.e.
/// g_j^{p_j'-1} / ‖g_j^{p_j'-1}‖_{L^{p_j}(σ_j)}.
AscentStep ascent_step(const Instance& instance, std::size_t j, std::span<const LeafFunction> functions);

/// Extremizer of the dual pairing for a given g: unit L^p(σ) norm.
/// Returns false (and leaves `out` zero) if g vanishes σ-a.e.
bool dual_extremizer(std::span<const double> g, const Measure& sigma, double p, LeafFunction& out);

/// Scales f to unit L^p(σ) norm; returns false for the zero function.
bool normalize(LeafFunction& f, const Measure& sigma, double p);

/// Cyclic coordinate ascent over the slots, best over restarts.
ConstantEstimate best_constant(const Instance& instance, const AscentOptions& options = {});

/// Positive-mass leaves per measure allowed by the brute-force oracle.
inline constexpr std::size_t oracle_leaf_limit = 4;

/// Grid search over unit-norm nonnegative functions in slots 1..n-1 (the last
/// slot is maximized exactly by duality), refined by one ascent cycle.
double brute_force_constant(const Instance& instance, int resolution = 64);

/// True when brute_force_constant accepts the instance at this resolution.
bool oracle_eligible(const Instance& instance, int resolution = 64);

} // namespace dyadic

#endif
