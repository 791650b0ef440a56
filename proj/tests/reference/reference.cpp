#include "reference.hpp"

#include <algorithm>
#include <cmath>

namespace dyadic::reference {

namespace {

std::vector<CubeId> all_cubes(const DyadicTree& tree)
{
    std::vector<CubeId> out;
    for (int level = 0; level <= tree.depth(); ++level)
        for (std::size_t m = 0; m < tree.level_size(level); ++m)
            out.push_back({level, static_cast<std::int64_t>(m)});
    return out;
}

double lp(const std::vector<double>& values, const Measure& sigma, double p)
{
    double acc = 0;
    const auto masses = sigma.leaf_masses();
    for (std::size_t x = 0; x < values.size(); ++x)
        if (masses[x] > 0)
            acc += std::pow(values[x], p) * masses[x];
    return std::pow(acc, 1.0 / p);
}

} // namespace

bool contains_leaf(const DyadicTree& tree, const CubeId& q, std::size_t leaf)
{
    const CubeId l{tree.depth(), static_cast<std::int64_t>(leaf)};
    return tree.is_descendant(l, q);
}

double mass(const DyadicTree& tree, const Measure& sigma, const CubeId& q)
{
    double total = 0;
    const auto masses = sigma.leaf_masses();
    for (std::size_t x = 0; x < masses.size(); ++x)
        if (contains_leaf(tree, q, x))
            total += masses[x];
    return total;
}

double integral(const DyadicTree& tree, const LeafFunction& f, const Measure& sigma, const CubeId& q)
{
    double total = 0;
    const auto masses = sigma.leaf_masses();
    for (std::size_t x = 0; x < masses.size(); ++x)
        if (contains_leaf(tree, q, x))
            total += f.values[x] * masses[x];
    return total;
}

double evaluate_form(const Instance& instance, const std::vector<LeafFunction>& functions)
{
    double total = 0;
    for (const auto& q : all_cubes(instance.tree)) {
        double term = instance.kernel.at(instance.tree, q);
        for (std::size_t i = 0; i < functions.size(); ++i)
            term *= integral(instance.tree, functions[i], instance.measures[i], q);
        total += term;
    }
    return total;
}

LeafFunction dual_function(const Instance& instance, std::size_t j, const std::vector<LeafFunction>& functions)
{
    const auto& tree = instance.tree;
    LeafFunction g{std::vector<double>(tree.leaf_count(), 0.0)};
    for (std::size_t x = 0; x < tree.leaf_count(); ++x) {
        for (const auto& q : all_cubes(tree)) {
            if (!contains_leaf(tree, q, x))
                continue;
            double term = instance.kernel.at(tree, q);
            for (std::size_t i = 0; i < functions.size(); ++i)
                if (i != j)
                    term *= integral(tree, functions[i], instance.measures[i], q);
            g.values[x] += term;
        }
    }
    return g;
}

LeafFunction maximal_function(const DyadicTree& tree, const LeafFunction& f, const Measure& sigma)
{
    LeafFunction out{std::vector<double>(tree.leaf_count(), 0.0)};
    const auto masses = sigma.leaf_masses();
    for (std::size_t x = 0; x < tree.leaf_count(); ++x) {
        if (masses[x] == 0)
            continue;
        for (const auto& q : all_cubes(tree)) {
            const double m = mass(tree, sigma, q);
            if (contains_leaf(tree, q, x) && m > 0)
                out.values[x] = std::max(out.values[x], integral(tree, f, sigma, q) / m);
        }
    }
    return out;
}

LeafFunction wolff_potential(const DyadicTree& tree, const Kernel& kernel, const Measure& mu, const Measure& nu,
                             double p)
{
    LeafFunction out{std::vector<double>(tree.leaf_count(), 0.0)};
    const auto cubes = all_cubes(tree);
    for (std::size_t x = 0; x < tree.leaf_count(); ++x) {
        for (const auto& q : cubes) {
            if (!contains_leaf(tree, q, x))
                continue;
            const double mq = mass(tree, mu, q);
            if (mq == 0)
                continue;
            double inner = 0;
            for (const auto& qq : cubes)
                if (tree.is_descendant(qq, q))
                    inner += kernel.at(tree, qq) * mass(tree, mu, qq) * mass(tree, nu, qq);
            out.values[x] += kernel.at(tree, q) * mq * std::pow(inner / mq, p - 1);
        }
    }
    return out;
}

std::vector<std::vector<double>> iterated_kernels(const Instance& instance, const Permutation& perm)
{
    const auto& tree = instance.tree;
    const auto n = instance.arity();
    const auto cubes = all_cubes(tree);
    std::vector<double> rungs{1.0};
    double partial = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        partial += 1.0 / instance.exponents[perm[k]];
        rungs.push_back(1.0 / (1.0 - partial));
    }

    std::vector<std::vector<double>> stages;
    std::vector<double> prev(instance.kernel.values().begin(), instance.kernel.values().end());
    for (std::size_t j = 1; j < n; ++j) {
        std::vector<double> next(tree.cube_count(), 0.0);
        const auto& absorbed = instance.measures[perm[j - 1]];
        for (const auto& q : cubes) {
            const double mq = mass(tree, absorbed, q);
            if (mq == 0)
                continue;
            double inner = 0;
            for (const auto& qq : cubes) {
                if (!tree.is_descendant(qq, q))
                    continue;
                double term = prev[tree.flat(qq)];
                for (std::size_t i = j - 1; i < n; ++i)
                    term *= mass(tree, instance.measures[perm[i]], qq);
                inner += term;
            }
            const double power = rungs[j] / rungs[j - 1] - 1;
            next[tree.flat(q)] = prev[tree.flat(q)] * mq * std::pow(inner / mq, power);
        }
        stages.push_back(next);
        prev = next;
    }
    return stages;
}

double wolff_condition_constant(const Instance& instance, const Permutation& perm)
{
    const auto& tree = instance.tree;
    const auto n = instance.arity();
    double partial = 0;
    for (std::size_t k = 0; k + 1 < n; ++k)
        partial += 1.0 / instance.exponents[perm[k]];
    const double last_rung = n >= 2 ? 1.0 / (1.0 - partial) : 1.0;
    const double r = 1.0 / (1.0 - partial - 1.0 / instance.exponents[perm[n - 1]]);

    const auto stages = reference::iterated_kernels(instance, perm);
    const std::vector<double> last =
        stages.empty() ? std::vector<double>(instance.kernel.values().begin(), instance.kernel.values().end())
                       : stages.back();
    std::vector<double> h(tree.leaf_count(), 0.0);
    for (std::size_t x = 0; x < h.size(); ++x) {
        for (const auto& q : all_cubes(tree))
            if (contains_leaf(tree, q, x))
                h[x] += last[tree.flat(q)];
        h[x] = std::pow(h[x], 1.0 / last_rung);
    }
    return lp(h, instance.measures[perm[n - 1]], r);
}

CarlesonTriple carleson_quantities(const CarlesonData& data)
{
    const auto& tree = data.tree;
    const auto cubes = all_cubes(tree);
    const auto masses = data.sigma.leaf_masses();
    const double s = data.s;
    auto tail = [&](const CubeId& q) {
        double t = 0;
        for (const auto& qq : cubes)
            if (tree.is_descendant(qq, q))
                t += data.alpha[tree.flat(qq)];
        return t;
    };

    CarlesonTriple out;
    for (std::size_t x = 0; x < masses.size(); ++x) {
        if (masses[x] == 0)
            continue;
        double h = 0;
        double sup = 0;
        for (const auto& q : cubes) {
            if (!contains_leaf(tree, q, x))
                continue;
            const double m = mass(tree, data.sigma, q);
            h += data.alpha[tree.flat(q)] / m;
            sup = std::max(sup, tail(q) / m);
        }
        out.a1 += std::pow(h, s) * masses[x];
        out.a3 += std::pow(sup, s) * masses[x];
    }
    for (const auto& q : cubes) {
        const double m = mass(tree, data.sigma, q);
        if (m > 0)
            out.a2 += data.alpha[tree.flat(q)] * std::pow(tail(q) / m, s - 1);
    }
    return out;
}

} // namespace dyadic::reference
