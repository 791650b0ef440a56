#include "dyadic/sawyer.hpp"

#include <cmath>

#include <json.hpp>

#include "dyadic/form.hpp"

namespace dyadic {

Instance localized_instance(const Instance& instance, std::size_t j, const CubeId& q)
{
    const auto& tree = instance.tree;
    tree.require(q);
    if (instance.arity() < 2)
        throw Error("localization needs at least two measures");
    if (j >= instance.arity())
        throw Error("slot index out of range");

    std::vector<double> values(tree.cube_count(), 0.0);
    const auto& sigma = instance.measures[j];
    for (int level = q.level; level <= tree.depth(); ++level) {
        const auto span = tree.level_size(level) / tree.level_size(q.level);
        const auto first = static_cast<std::size_t>(q.index) * span;
        for (std::size_t m = first; m < first + span; ++m) {
            const auto c = tree.level_offset(level) + m;
            values[c] = instance.kernel[c] * sigma[c];
        }
    }

    Instance out{tree, Kernel(tree, std::move(values)), {}, {}};
    for (std::size_t i = 0; i < instance.arity(); ++i) {
        if (i == j)
            continue;
        out.measures.push_back(instance.measures[i]);
        out.exponents.push_back(instance.exponents[i]);
    }
    return out;
}

TestingValue testing_constant_at(const Instance& instance, std::size_t j, const CubeId& q,
                                 const AscentOptions& options)
{
    const auto& tree = instance.tree;
    tree.require(q);
    if (j >= instance.arity())
        throw Error("slot index out of range");
    const double mass = instance.measures[j][tree.flat(q)];
    if (mass == 0)
        return {0, true};
    const double scale = std::pow(mass, 1.0 / instance.exponents[j]);

    if (instance.arity() == 1) {
        const auto& sigma = instance.measures[0];
        std::vector<double> w(tree.cube_count());
        for (std::size_t c = 0; c < w.size(); ++c)
            w[c] = instance.kernel[c] * sigma[c];
        return {cube_subtree_sums(tree, w)[tree.flat(q)] / scale, true};
    }

    const auto local = localized_instance(instance, j, q);
    if (local.arity() == 1) {
        const LeafFunction unused = constant_function(tree, 0.0);
        const auto g = dual_function(local, 0, std::span(&unused, 1));
        return {lp_norm(g, local.measures[0], dual_exponent(local.exponents[0])) / scale, true};
    }
    return {best_constant(local, options).value / scale, false};
}

TestingReport sawyer_constant(const Instance& instance, const AscentOptions& options)
{
    instance.validate();
    const auto& tree = instance.tree;
    TestingReport report;
    report.regime_warning = regime(instance.exponents) != Regime::Testing;
    const auto cubes = static_cast<std::int64_t>(tree.cube_count());
    for (std::size_t j = 0; j < instance.arity(); ++j) {
        std::vector<TestingValue> values(static_cast<std::size_t>(cubes));
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t c = 0; c < cubes; ++c) {
            const auto u = static_cast<std::size_t>(c);
            if (instance.measures[j][u] > 0)
                values[u] = testing_constant_at(instance, j, tree.cube(u), options);
            else
                values[u] = {0, true};
        }
        SlotTesting slot{j, tree.root(), 0, true};
        for (std::size_t u = 0; u < values.size(); ++u) {
            slot.certified = slot.certified && values[u].certified;
            if (values[u].value > slot.value) {
                slot.value = values[u].value;
                slot.worst_cube = tree.cube(u);
            }
        }
        report.overall = std::max(report.overall, slot.value);
        report.per_j.push_back(slot);
    }
    return report;
}

std::string TestingReport::to_json() const
{
    nlohmann::ordered_json doc;
    doc["overall"] = overall;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& s : per_j)
        rows.push_back({{"j", s.j + 1}, {"worst_cube", s.worst_cube.str()}, {"value", s.value}, {"certified", s.certified}});
    doc["per_j"] = std::move(rows);
    doc["regime_warning"] = regime_warning;
    return doc.dump(2);
}

double bilinear_testing_closed_form(const Instance& instance, std::size_t j, const CubeId& q)
{
    if (instance.arity() != 2)
        throw Error("bilinear closed form needs exactly two measures");
    if (j > 1)
        throw Error("slot index out of range");
    const auto& tree = instance.tree;
    tree.require(q);
    const std::size_t i = 1 - j;
    const auto& tested = instance.measures[j];
    const auto& other = instance.measures[i];
    const double mass = tested[tree.flat(q)];
    if (mass == 0)
        return 0;

    const double dual = dual_exponent(instance.exponents[i]);
    const auto [first, last] = tree.leaf_range(q);
    const auto masses = other.leaf_masses();
    double acc = 0;
    for (std::size_t x = first; x < last; ++x) {
        if (masses[x] == 0)
            continue;
        const CubeId leaf{tree.depth(), static_cast<std::int64_t>(x)};
        double h = 0;
        for (int level = tree.depth(); level >= q.level; --level) {
            const auto c = tree.flat(tree.ancestor(leaf, level));
            h += instance.kernel[c] * tested[c];
        }
        acc += std::pow(h, dual) * masses[x];
    }
    return std::pow(acc, 1.0 / dual) / std::pow(mass, 1.0 / instance.exponents[j]);
}

} // namespace dyadic
