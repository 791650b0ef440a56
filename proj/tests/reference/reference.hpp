#ifndef DYADIC_REFERENCE_HPP
#define DYADIC_REFERENCE_HPP

// Naive serial implementations that follow the defining sums literally.
// O(cubes × leaves) or worse; kept for tests and benchmarks only.

#include <vector>

#include "dyadic/core.hpp"
#include "dyadic/corona.hpp"
#include "dyadic/wolff.hpp"

namespace dyadic::reference {

bool contains_leaf(const DyadicTree& tree, const CubeId& q, std::size_t leaf);

double mass(const DyadicTree& tree, const Measure& sigma, const CubeId& q);

double integral(const DyadicTree& tree, const LeafFunction& f, const Measure& sigma, const CubeId& q);

double evaluate_form(const Instance& instance, const std::vector<LeafFunction>& functions);

LeafFunction dual_function(const Instance& instance, std::size_t j, const std::vector<LeafFunction>& functions);

LeafFunction maximal_function(const DyadicTree& tree, const LeafFunction& f, const Measure& sigma);

LeafFunction wolff_potential(const DyadicTree& tree, const Kernel& kernel, const Measure& mu, const Measure& nu,
                             double p);

/// K^φ_j by the literal recursive definition, one inner sum per cube.
std::vector<std::vector<double>> iterated_kernels(const Instance& instance, const Permutation& perm);

double wolff_condition_constant(const Instance& instance, const Permutation& perm);

CarlesonTriple carleson_quantities(const CarlesonData& data);

} // namespace dyadic::reference

#endif
