#ifndef DYADIC_CORONA_HPP
#define DYADIC_CORONA_HPP

#include <span>
#include <string>
#include <vector>

#include "dyadic/core.hpp"

namespace dyadic {

/// Principal cubes of a pair (f, σ): generation 0 is the base cube, and the
/// children of F are the maximal cubes Q ⊊ F with avg_Q f > 2 avg_F f.
class CoronaForest {
public:
    const std::vector<std::vector<CubeId>>& generations() const { return generations_; }
    const std::vector<CubeId>& children_of(const DyadicTree& tree, const CubeId& f) const;
    bool contains(const DyadicTree& tree, const CubeId& q) const;
    std::vector<CubeId> cubes() const;
    const CubeId& base() const { return generations_.front().front(); }

    /// Minimal principal cube containing q; q must lie inside the base cube.
    CubeId stopping_parent(const DyadicTree& tree, const CubeId& q) const;

private:
    friend CoronaForest principal_cubes(const DyadicTree&, const LeafFunction&, const Measure&, const CubeId&);

    std::vector<std::vector<CubeId>> generations_;
    std::vector<std::vector<CubeId>> children_;  // by flat index
    std::vector<std::size_t> parent_;           // stopping parent by flat index
    std::vector<bool> member_;
};

CoronaForest principal_cubes(const DyadicTree& tree, const LeafFunction& f, const Measure& sigma,
                             const CubeId& base);

inline CoronaForest principal_cubes(const DyadicTree& tree, const LeafFunction& f, const Measure& sigma)
{
    return principal_cubes(tree, f, sigma, tree.root());
}

/// σ(F) − Σ_{F' ∈ ch(F)} σ(F').
double exceptional_measure(const DyadicTree& tree, const CoronaForest& forest, const CubeId& f, const Measure& sigma);

CubeId stopping_parent(const DyadicTree& tree, const CoronaForest& forest, const CubeId& q);

struct Diagnostic {
    std::string check;
    std::string detail;
};

struct CoronaCheck {
    bool passed = true;
    double direct_sum = 0;
    double regrouped_sum = 0;
    std::size_t tuple_count = 0;
    std::vector<std::size_t> forest_sizes;
    std::vector<Diagnostic> failures;

    std::string to_json() const;
};

/// Builds the n forests and verifies the stopping-parent partition, the
/// nested-chain ordering, the exceptional-set bound, the stopping trigger
/// with maximality, and the regrouped sum against the direct form.
CoronaCheck corona_partition_check(const Instance& instance, std::span<const LeafFunction> functions);

// Carleson quantities over a coefficient family α_Q.

/// c(s) = s on (1, 2]; (s(s-1)…(s-k))^{(s-1)/(s-k-1)} with k = ⌈s-2⌉ for s > 2.
double carleson_constant(double s);

/// Same formula with k the smallest integer strictly greater than s-2;
/// infinite when s is an integer above 2.
double carleson_constant_strict(double s);

struct CarlesonData {
    DyadicTree tree;
    Measure sigma;
    double s = 2;
    std::vector<double> alpha; // per cube, flat order
};

struct CarlesonTriple {
    double a1 = 0;
    double a2 = 0;
    double a3 = 0;
};

CarlesonTriple carleson_quantities(const CarlesonData& data);

struct CarlesonCheck {
    bool passed = true;
    CarlesonTriple values;
    double s = 0;
    double c = 0;
    double c_strict = 0;
    double bound12 = 0; // c(s)
    double bound23 = 0; // c(s)^{1/(s-1)}
    double bound31 = 0; // (s')^s
    bool ok12 = true;
    bool ok23 = true;
    bool ok31 = true;
    std::vector<Diagnostic> failures;

    std::string to_json() const;
};

inline constexpr double carleson_slack = 1e-9;

/// Checks A1 ≤ c(s)A2, A2 ≤ c(s)^{1/(s-1)}A3 and A3 ≤ (s')^s A1.
CarlesonCheck check_carleson_triple(const CarlesonTriple& values, double s);

CarlesonCheck carleson_check(const CarlesonData& data);

} // namespace dyadic

#endif
