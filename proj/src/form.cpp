#include "dyadic/form.hpp"

#include <cstdint>

namespace dyadic {

std::string_view to_string(Regime r)
{
    return r == Regime::Testing ? "testing" : "wolff";
}

double reciprocal_sum(std::span<const double> exponents)
{
    double s = 0;
    for (double p : exponents)
        s += 1.0 / p;
    return s;
}

Regime regime(std::span<const double> exponents)
{
    return reciprocal_sum(exponents) >= 1.0 - regime_tolerance ? Regime::Testing : Regime::Wolff;
}

namespace {

void check_functions(const Instance& instance, std::span<const LeafFunction> functions)
{
    if (functions.size() != instance.arity())
        throw Error("expected " + std::to_string(instance.arity()) + " functions, got "
                    + std::to_string(functions.size()));
}

std::vector<std::vector<double>> all_integrals(const Instance& instance, std::span<const LeafFunction> functions,
                                               std::size_t skip)
{
    std::vector<std::vector<double>> out(instance.arity());
    for (std::size_t i = 0; i < instance.arity(); ++i)
        if (i != skip)
            out[i] = cube_integrals(instance.tree, functions[i], instance.measures[i]);
    return out;
}

} // namespace

double evaluate_form_from_integrals(const Instance& instance, const std::vector<std::vector<double>>& integrals)
{
    const auto cubes = static_cast<std::int64_t>(instance.tree.cube_count());
    std::vector<double> terms(static_cast<std::size_t>(cubes));
#pragma omp parallel for schedule(static)
    for (std::int64_t q = 0; q < cubes; ++q) {
        const auto u = static_cast<std::size_t>(q);
        double t = instance.kernel[u];
        for (const auto& ints : integrals)
            t *= ints[u];
        terms[u] = t;
    }
    double total = 0;
    for (double t : terms)
        total += t;
    return total;
}

double evaluate_form(const Instance& instance, std::span<const LeafFunction> functions)
{
    check_functions(instance, functions);
    return evaluate_form_from_integrals(instance, all_integrals(instance, functions, instance.arity()));
}

std::vector<double> dual_weights(const Instance& instance, std::size_t j,
                                 const std::vector<std::vector<double>>& integrals)
{
    const auto cubes = static_cast<std::int64_t>(instance.tree.cube_count());
    std::vector<double> weights(static_cast<std::size_t>(cubes));
#pragma omp parallel for schedule(static)
    for (std::int64_t q = 0; q < cubes; ++q) {
        const auto u = static_cast<std::size_t>(q);
        double w = instance.kernel[u];
        for (std::size_t i = 0; i < integrals.size(); ++i)
            if (i != j)
                w *= integrals[i][u];
        weights[u] = w;
    }
    return weights;
}

LeafFunction dual_function(const Instance& instance, std::size_t j, std::span<const LeafFunction> functions)
{
    check_functions(instance, functions);
    if (j >= instance.arity())
        throw Error("slot index out of range");
    const auto integrals = all_integrals(instance, functions, j);
    return {ancestor_sums(instance.tree, dual_weights(instance, j, integrals))};
}

} // namespace dyadic
