#ifndef DYADIC_FORM_HPP
#define DYADIC_FORM_HPP

#include <span>
#include <string_view>
#include <vector>

#include "dyadic/core.hpp"

namespace dyadic {

/// Functions are taken nonnegative throughout: since K >= 0, replacing f_i
/// by |f_i| can only increase the form while keeping every L^p norm.

enum class Regime { Testing, Wolff };

std::string_view to_string(Regime r);

/// Slack used when deciding Σ 1/p_i >= 1.
inline constexpr double regime_tolerance = 1e-12;

double reciprocal_sum(std::span<const double> exponents);

/// Testing iff Σ 1/p_i >= 1; the boundary belongs to Testing.
Regime regime(std::span<const double> exponents);

/// Σ_Q K(Q) Π_i ∫_Q f_i dσ_i over every cube of the tree.
double evaluate_form(const Instance& instance, std::span<const LeafFunction> functions);

/// Same sum with the per-cube integrals already computed.
double evaluate_form_from_integrals(const Instance& instance, const std::vector<std::vector<double>>& integrals);

/// g_j = Σ_Q K(Q) Π_{i≠j} (∫_Q f_i dσ_i) 1_Q, restricted to leaves. Slot j of
/// `functions` is ignored (0-based j).
LeafFunction dual_function(const Instance& instance, std::size_t j, std::span<const LeafFunction> functions);

/// Per-cube weights K(Q) Π_{i≠j} integrals_i(Q).
std::vector<double> dual_weights(const Instance& instance, std::size_t j,
                                 const std::vector<std::vector<double>>& integrals);

} // namespace dyadic

#endif
