#ifndef DYADIC_SAWYER_HPP
#define DYADIC_SAWYER_HPP

#include <vector>

#include "dyadic/core.hpp"
#include "dyadic/extremal.hpp"

namespace dyadic {

// Multilinear Sawyer testing constants. Slot indices are 0-based; cube
// containment Q' ⊆ Q is inclusive throughout.

/// The (n-1)-linear instance obtained by testing slot j against 1_Q:
/// kernel K(Q')σ_j(Q') on Q' ⊆ Q and 0 elsewhere, slot j removed.
/// Requires n >= 2.
Instance localized_instance(const Instance& instance, std::size_t j, const CubeId& q);

struct TestingValue {
    double value = 0;
    bool certified = false; // exact (n <= 2) rather than an ascent lower bound
};

/// Least constant of the localized form divided by σ_j(Q)^{1/p_j}; 0 when
/// σ_j(Q) = 0.
TestingValue testing_constant_at(const Instance& instance, std::size_t j, const CubeId& q,
                                 const AscentOptions& options = {});

struct SlotTesting {
    std::size_t j = 0;
    CubeId worst_cube;
    double value = 0;
    bool certified = true;
};

struct TestingReport {
    std::vector<SlotTesting> per_j;
    double overall = 0;
    bool regime_warning = false; // computed outside the Testing regime

    std::string to_json() const;
};

TestingReport sawyer_constant(const Instance& instance, const AscentOptions& options = {});

/// Two-measure closed form
///   (∫_Q (Σ_{Q'⊆Q} K(Q')σ_j(Q')1_{Q'})^{p_i'} dσ_i)^{1/p_i'} / σ_j(Q)^{1/p_j}
/// with i the other slot.
double bilinear_testing_closed_form(const Instance& instance, std::size_t j, const CubeId& q);

} // namespace dyadic

#endif
