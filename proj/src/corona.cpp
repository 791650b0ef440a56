#include "dyadic/corona.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <json.hpp>

#include "dyadic/form.hpp"

namespace dyadic {

namespace {

double average(const std::vector<double>& integrals, const Measure& sigma, std::size_t c)
{
    return integrals[c] / sigma[c];
}

bool close_relative(double a, double b, double tol)
{
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

// Cubes strictly inside f with positive mass whose average exceeds twice
// avg_F and that have no such ancestor strictly between them and F.
std::vector<CubeId> stopping_children(const DyadicTree& tree, const CubeId& f, const std::vector<double>& integrals,
                                      const Measure& sigma)
{
    std::vector<CubeId> out;
    if (tree.is_leaf(f))
        return out;
    const double threshold = 2 * average(integrals, sigma, tree.flat(f));
    std::vector<CubeId> stack = tree.children(f);
    while (!stack.empty()) {
        const CubeId q = stack.back();
        stack.pop_back();
        const auto c = tree.flat(q);
        if (sigma[c] == 0)
            continue;
        if (average(integrals, sigma, c) > threshold) {
            out.push_back(q);
            continue;
        }
        if (!tree.is_leaf(q))
            for (const auto& child : tree.children(q))
                stack.push_back(child);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

CoronaForest principal_cubes(const DyadicTree& tree, const LeafFunction& f, const Measure& sigma, const CubeId& base)
{
    tree.require(base);
    require_same_tree(tree, f);
    for (double v : f.values)
        if (v < 0)
            throw Error("principal cubes need a nonnegative function");
    if (sigma[tree.flat(base)] == 0)
        throw Error("degenerate root: base cube has zero mass");

    const auto integrals = cube_integrals(tree, f, sigma);
    const auto cubes = tree.cube_count();
    CoronaForest forest;
    forest.children_.assign(cubes, {});
    forest.member_.assign(cubes, false);
    forest.parent_.assign(cubes, cubes);

    std::vector<CubeId> current{base};
    forest.member_[tree.flat(base)] = true;
    while (!current.empty()) {
        forest.generations_.push_back(current);
        std::vector<CubeId> next;
        for (const auto& parent : current) {
            auto kids = stopping_children(tree, parent, integrals, sigma);
            for (const auto& k : kids)
                forest.member_[tree.flat(k)] = true;
            next.insert(next.end(), kids.begin(), kids.end());
            forest.children_[tree.flat(parent)] = std::move(kids);
        }
        std::sort(next.begin(), next.end());
        current = std::move(next);
    }

    // Stopping parents, top-down inside the base cube.
    forest.parent_[tree.flat(base)] = tree.flat(base);
    for (int level = base.level + 1; level <= tree.depth(); ++level) {
        const auto width = tree.level_size(level) / tree.level_size(base.level);
        const auto first = static_cast<std::size_t>(base.index) * width;
        for (std::size_t m = first; m < first + width; ++m) {
            const auto c = tree.level_offset(level) + m;
            const CubeId q{level, static_cast<std::int64_t>(m)};
            forest.parent_[c] = forest.member_[c] ? c : forest.parent_[tree.flat(tree.parent(q))];
        }
    }
    return forest;
}

const std::vector<CubeId>& CoronaForest::children_of(const DyadicTree& tree, const CubeId& f) const
{
    if (!contains(tree, f))
        throw Error("cube " + f.str() + " is not a principal cube");
    return children_[tree.flat(f)];
}

bool CoronaForest::contains(const DyadicTree& tree, const CubeId& q) const
{
    return tree.contains(q) && member_[tree.flat(q)];
}

std::vector<CubeId> CoronaForest::cubes() const
{
    std::vector<CubeId> out;
    for (const auto& g : generations_)
        out.insert(out.end(), g.begin(), g.end());
    return out;
}

CubeId CoronaForest::stopping_parent(const DyadicTree& tree, const CubeId& q) const
{
    tree.require(q);
    const auto p = parent_[tree.flat(q)];
    if (p == parent_.size())
        throw Error("cube " + q.str() + " is outside the base cube");
    return tree.cube(p);
}

double exceptional_measure(const DyadicTree& tree, const CoronaForest& forest, const CubeId& f, const Measure& sigma)
{
    double covered = 0;
    for (const auto& child : forest.children_of(tree, f))
        covered += sigma[tree.flat(child)];
    return sigma[tree.flat(f)] - covered;
}

CubeId stopping_parent(const DyadicTree& tree, const CoronaForest& forest, const CubeId& q)
{
    return forest.stopping_parent(tree, q);
}

CoronaCheck corona_partition_check(const Instance& instance, std::span<const LeafFunction> functions)
{
    instance.validate();
    const auto& tree = instance.tree;
    const auto n = instance.arity();
    if (functions.size() != n)
        throw Error("expected one function per measure");
    const auto cubes = tree.cube_count();

    CoronaCheck out;
    auto fail = [&out](std::string check, std::string detail) {
        out.passed = false;
        out.failures.push_back({std::move(check), std::move(detail)});
    };

    std::vector<CoronaForest> forests(n);
    std::vector<std::vector<double>> integrals(n);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(n); ++k) {
        const auto i = static_cast<std::size_t>(k);
        forests[i] = principal_cubes(tree, functions[i], instance.measures[i]);
        integrals[i] = cube_integrals(tree, functions[i], instance.measures[i]);
    }

    for (std::size_t i = 0; i < n; ++i) {
        const auto& forest = forests[i];
        const auto& sigma = instance.measures[i];
        out.forest_sizes.push_back(forest.cubes().size());
        for (const auto& f : forest.cubes()) {
            const auto fc = tree.flat(f);
            const double exceptional = exceptional_measure(tree, forest, f, sigma);
            if (exceptional < sigma[fc] / 2 * (1 - 1e-12))
                fail("exceptional_set", "forest " + std::to_string(i + 1) + " cube " + f.str() + ": "
                                            + std::to_string(exceptional) + " < " + std::to_string(sigma[fc] / 2));
            const double threshold = 2 * average(integrals[i], sigma, fc);
            for (const auto& child : forest.children_of(tree, f)) {
                if (!(average(integrals[i], sigma, tree.flat(child)) > threshold))
                    fail("stopping_trigger", "forest " + std::to_string(i + 1) + " child " + child.str());
                for (int level = f.level + 1; level < child.level; ++level) {
                    const auto mid = tree.flat(tree.ancestor(child, level));
                    if (sigma[mid] > 0 && average(integrals[i], sigma, mid) > threshold)
                        fail("maximality", "forest " + std::to_string(i + 1) + " child " + child.str()
                                               + " has a triggering ancestor below " + f.str());
                }
            }
        }
    }

    // Group cubes by their tuple of stopping parents.
    std::map<std::vector<std::size_t>, std::vector<std::size_t>> groups;
    for (std::size_t c = 0; c < cubes; ++c) {
        const auto q = tree.cube(c);
        std::vector<std::size_t> tuple(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto parent = forests[i].stopping_parent(tree, q);
            tuple[i] = tree.flat(parent);
            if (!tree.is_descendant(q, parent))
                fail("stopping_parent", q.str() + " is not inside its stopping parent " + parent.str());
            for (int level = parent.level + 1; level <= q.level; ++level)
                if (forests[i].contains(tree, tree.ancestor(q, level)))
                    fail("stopping_parent", "stopping parent of " + q.str() + " in forest " + std::to_string(i + 1)
                                                + " is not minimal");
        }
        // Nested chain Q ⊆ F_{φ(1)} ⊆ … ⊆ F_{φ(n)}.
        std::vector<CubeId> chain;
        for (auto t : tuple)
            chain.push_back(tree.cube(t));
        std::sort(chain.begin(), chain.end(), [](const CubeId& a, const CubeId& b) { return a.level > b.level; });
        bool nested = tree.is_descendant(q, chain.front());
        for (std::size_t k = 0; k + 1 < chain.size(); ++k)
            nested = nested && tree.is_descendant(chain[k], chain[k + 1]);
        if (!nested)
            fail("nested_chain", "stopping parents of " + q.str() + " are not totally ordered");
        groups[tuple].push_back(c);
    }

    std::vector<int> seen(cubes, 0);
    for (const auto& [tuple, members] : groups)
        for (auto c : members)
            ++seen[c];
    for (std::size_t c = 0; c < cubes; ++c)
        if (seen[c] != 1)
            fail("partition", "cube " + tree.cube(c).str() + " lands in " + std::to_string(seen[c]) + " tuples");
    out.tuple_count = groups.size();

    out.direct_sum = evaluate_form(instance, functions);
    double regrouped = 0;
    for (const auto& [tuple, members] : groups) {
        double part = 0;
        for (auto c : members) {
            double t = instance.kernel[c];
            for (std::size_t i = 0; i < n; ++i)
                t *= integrals[i][c];
            part += t;
        }
        regrouped += part;
    }
    out.regrouped_sum = regrouped;
    if (!close_relative(out.direct_sum, out.regrouped_sum, 1e-12))
        fail("regrouped_sum", "regrouped " + std::to_string(regrouped) + " vs direct " + std::to_string(out.direct_sum));
    return out;
}

std::string CoronaCheck::to_json() const
{
    nlohmann::ordered_json doc;
    doc["passed"] = passed;
    doc["direct_sum"] = direct_sum;
    doc["regrouped_sum"] = regrouped_sum;
    doc["tuple_count"] = tuple_count;
    doc["forest_sizes"] = forest_sizes;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& d : failures)
        rows.push_back({{"check", d.check}, {"detail", d.detail}});
    doc["failures"] = std::move(rows);
    return doc.dump(2);
}

namespace {

double falling_power_constant(double s, int k)
{
    const double denom = s - k - 1;
    if (denom <= 0)
        return std::numeric_limits<double>::infinity();
    double product = 1;
    for (int m = 0; m <= k; ++m)
        product *= s - m;
    return std::pow(product, (s - 1) / denom);
}

} // namespace

double carleson_constant(double s)
{
    if (!(s > 1))
        throw Error("Carleson constant needs s > 1");
    if (s <= 2)
        return s;
    return falling_power_constant(s, static_cast<int>(std::ceil(s - 2)));
}

double carleson_constant_strict(double s)
{
    if (!(s > 1))
        throw Error("Carleson constant needs s > 1");
    if (s <= 2)
        return s;
    return falling_power_constant(s, static_cast<int>(std::floor(s - 2)) + 1);
}

CarlesonTriple carleson_quantities(const CarlesonData& data)
{
    const auto& tree = data.tree;
    const auto& sigma = data.sigma;
    const double s = data.s;
    if (!(s > 1))
        throw Error("Carleson exponent must exceed 1");
    const auto cubes = tree.cube_count();
    if (data.alpha.size() != cubes)
        throw Error("coefficient count does not match cube count");
    for (std::size_t c = 0; c < cubes; ++c) {
        if (!std::isfinite(data.alpha[c]) || data.alpha[c] < 0)
            throw Error("coefficients must be finite and nonnegative");
        if (sigma[c] == 0 && data.alpha[c] > 0)
            throw Error("mass-free coefficient at " + tree.cube(c).str());
    }

    std::vector<double> beta(cubes, 0.0);
    for (std::size_t c = 0; c < cubes; ++c)
        if (sigma[c] > 0)
            beta[c] = data.alpha[c] / sigma[c];
    const auto h = ancestor_sums(tree, beta);
    const auto tail = cube_subtree_sums(tree, data.alpha);
    const auto masses = sigma.leaf_masses();

    CarlesonTriple out;
    for (std::size_t x = 0; x < masses.size(); ++x)
        if (masses[x] > 0)
            out.a1 += std::pow(h[x], s) * masses[x];

    for (std::size_t c = 0; c < cubes; ++c)
        if (sigma[c] > 0 && data.alpha[c] > 0)
            out.a2 += data.alpha[c] * std::pow(tail[c] / sigma[c], s - 1);

    for (std::size_t x = 0; x < masses.size(); ++x) {
        if (masses[x] == 0)
            continue;
        const CubeId leaf{tree.depth(), static_cast<std::int64_t>(x)};
        double sup = 0;
        for (int level = 0; level <= tree.depth(); ++level) {
            const auto c = tree.flat(tree.ancestor(leaf, level));
            sup = std::max(sup, tail[c] / sigma[c]);
        }
        out.a3 += std::pow(sup, s) * masses[x];
    }
    return out;
}

CarlesonCheck check_carleson_triple(const CarlesonTriple& values, double s)
{
    CarlesonCheck out;
    out.values = values;
    out.s = s;
    out.c = carleson_constant(s);
    out.c_strict = carleson_constant_strict(s);
    out.bound12 = out.c;
    out.bound23 = std::pow(out.c, 1.0 / (s - 1));
    out.bound31 = std::pow(dual_exponent(s), s);

    auto holds = [](double lhs, double rhs) { return lhs <= rhs + carleson_slack * std::max(lhs, rhs); };
    out.ok12 = holds(values.a1, out.bound12 * values.a2);
    out.ok23 = holds(values.a2, out.bound23 * values.a3);
    out.ok31 = holds(values.a3, out.bound31 * values.a1);
    auto describe = [&] {
        return "A1=" + std::to_string(values.a1) + " A2=" + std::to_string(values.a2) + " A3="
             + std::to_string(values.a3) + " s=" + std::to_string(s);
    };
    if (!out.ok12)
        out.failures.push_back({"A1<=c(s)A2", describe()});
    if (!out.ok23)
        out.failures.push_back({"A2<=c(s)^(1/(s-1))A3", describe()});
    if (!out.ok31)
        out.failures.push_back({"A3<=(s')^s A1", describe()});
    out.passed = out.ok12 && out.ok23 && out.ok31;
    return out;
}

CarlesonCheck carleson_check(const CarlesonData& data)
{
    return check_carleson_triple(carleson_quantities(data), data.s);
}

std::string CarlesonCheck::to_json() const
{
    nlohmann::ordered_json doc;
    doc["passed"] = passed;
    doc["s"] = s;
    doc["A"] = {values.a1, values.a2, values.a3};
    doc["c_ceiling"] = c;
    // JSON has no infinity; null marks the undefined strict reading.
    doc["c_strict"] = std::isfinite(c_strict) ? nlohmann::ordered_json(c_strict) : nlohmann::ordered_json(nullptr);
    doc["bounds"] = {bound12, bound23, bound31};
    doc["ok"] = {ok12, ok23, ok31};
    auto rows = nlohmann::ordered_json::array();
    for (const auto& d : failures)
        rows.push_back({{"check", d.check}, {"detail", d.detail}});
    doc["failures"] = std::move(rows);
    return doc.dump(2);
}

} // namespace dyadic
