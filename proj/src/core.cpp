#include "dyadic/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace dyadic {

std::string CubeId::str() const
{
    return std::to_string(level) + ":" + std::to_string(index);
}

CubeId CubeId::parse(const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw Error("malformed cube id '" + text + "' (expected level:index)");
    CubeId q;
    const char* first = text.data();
    const char* mid = first + colon;
    const char* last = first + text.size();
    auto a = std::from_chars(first, mid, q.level);
    auto b = std::from_chars(mid + 1, last, q.index);
    if (a.ec != std::errc{} || a.ptr != mid || b.ec != std::errc{} || b.ptr != last || colon == 0)
        throw Error("malformed cube id '" + text + "' (expected level:index)");
    return q;
}

DyadicTree::DyadicTree(int branching, int depth) : branching_(branching), depth_(depth)
{
    if (branching < 2)
        throw Error("branching must be at least 2");
    if (depth < 0)
        throw Error("depth must be nonnegative");
    level_offset_.reserve(static_cast<std::size_t>(depth) + 2);
    level_offset_.push_back(0);
    std::size_t width = 1;
    constexpr std::size_t cap = std::size_t{1} << 40;
    for (int level = 0; level <= depth; ++level) {
        level_offset_.push_back(level_offset_.back() + width);
        if (level < depth) {
            if (width > cap / static_cast<std::size_t>(branching))
                throw Error("tree too large");
            width *= static_cast<std::size_t>(branching);
        }
    }
    leaf_count_ = width;
}

std::size_t DyadicTree::level_size(int level) const
{
    const auto l = static_cast<std::size_t>(level);
    return level_offset_[l + 1] - level_offset_[l];
}

bool DyadicTree::contains(const CubeId& q) const
{
    return q.level >= 0 && q.level <= depth_ && q.index >= 0
        && static_cast<std::size_t>(q.index) < level_size(q.level);
}

void DyadicTree::require(const CubeId& q) const
{
    if (!contains(q))
        throw Error("cube " + q.str() + " is not in the tree");
}

std::size_t DyadicTree::flat(const CubeId& q) const
{
    return level_offset(q.level) + static_cast<std::size_t>(q.index);
}

CubeId DyadicTree::cube(std::size_t flat) const
{
    const auto it = std::upper_bound(level_offset_.begin(), level_offset_.end(), flat);
    const auto level = static_cast<int>(it - level_offset_.begin()) - 1;
    return {level, static_cast<std::int64_t>(flat - level_offset(level))};
}

CubeId DyadicTree::parent(const CubeId& q) const
{
    if (q.level == 0)
        throw Error("root has no parent");
    return {q.level - 1, q.index / branching_};
}

std::vector<CubeId> DyadicTree::children(const CubeId& q) const
{
    require(q);
    if (is_leaf(q))
        throw Error("no children: " + q.str() + " is a leaf");
    std::vector<CubeId> out;
    out.reserve(static_cast<std::size_t>(branching_));
    for (int t = 0; t < branching_; ++t)
        out.push_back({q.level + 1, q.index * branching_ + t});
    return out;
}

std::pair<std::size_t, std::size_t> DyadicTree::leaf_range(const CubeId& q) const
{
    const std::size_t width = leaf_count_ / level_size(q.level);
    const auto first = static_cast<std::size_t>(q.index) * width;
    return {first, first + width};
}

CubeId DyadicTree::ancestor(const CubeId& q, int level) const
{
    CubeId a = q;
    while (a.level > level) {
        a.index /= branching_;
        --a.level;
    }
    return a;
}

bool DyadicTree::is_descendant(const CubeId& inner, const CubeId& outer) const
{
    return inner.level >= outer.level && ancestor(inner, outer.level) == outer;
}

namespace {

void check_values(std::span<const double> values, const char* what)
{
    for (double v : values) {
        if (!std::isfinite(v))
            throw Error(std::string("non-finite ") + what);
        if (v < 0)
            throw Error(std::string("negative ") + what);
    }
}

} // namespace

Measure::Measure(const DyadicTree& tree, std::vector<double> leaf_masses) : leaf_masses_(std::move(leaf_masses))
{
    if (leaf_masses_.size() != tree.leaf_count())
        throw Error("measure has " + std::to_string(leaf_masses_.size()) + " leaf masses, tree has "
                    + std::to_string(tree.leaf_count()) + " leaves");
    check_values(leaf_masses_, "leaf mass");
    cube_masses_ = subtree_sums(tree, leaf_masses_);
}

std::size_t Measure::positive_leaf_count() const
{
    return static_cast<std::size_t>(std::count_if(leaf_masses_.begin(), leaf_masses_.end(), [](double m) { return m > 0; }));
}

Measure Measure::scaled(const DyadicTree& tree, double t) const
{
    std::vector<double> masses(leaf_masses_);
    for (double& m : masses)
        m *= t;
    return Measure(tree, std::move(masses));
}

Kernel::Kernel(const DyadicTree& tree) : values_(tree.cube_count(), 0.0) {}

Kernel::Kernel(const DyadicTree& tree, std::vector<double> values) : values_(std::move(values))
{
    if (values_.size() != tree.cube_count())
        throw Error("kernel size does not match cube count");
    check_values(values_, "kernel value");
}

void Kernel::set(const DyadicTree& tree, const CubeId& q, double value)
{
    tree.require(q);
    if (!std::isfinite(value) || value < 0)
        throw Error("kernel value at " + q.str() + " must be finite and nonnegative");
    values_[tree.flat(q)] = value;
}

bool Kernel::is_zero() const
{
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

void Instance::validate() const
{
    if (measures.empty())
        throw Error("instance needs at least one measure");
    if (measures.size() != exponents.size())
        throw Error("measure count and exponent count differ");
    if (kernel.values().size() != tree.cube_count())
        throw Error("kernel size does not match cube count");
    for (const auto& m : measures)
        if (m.leaf_masses().size() != tree.leaf_count())
            throw Error("measure defined on a different tree");
    for (double p : exponents)
        if (!(p > 1) || !std::isfinite(p))
            throw Error("exponent must exceed 1 and be finite");
}

std::vector<CubeId> children(const DyadicTree& tree, const CubeId& q)
{
    return tree.children(q);
}

double measure_of(const DyadicTree& tree, const Measure& sigma, const CubeId& q)
{
    tree.require(q);
    return sigma[tree.flat(q)];
}

void require_same_tree(const DyadicTree& tree, const LeafFunction& f)
{
    if (f.values.size() != tree.leaf_count())
        throw Error("function has " + std::to_string(f.values.size()) + " leaf values, tree has "
                    + std::to_string(tree.leaf_count()) + " leaves");
}

double integrate(const DyadicTree& tree, const LeafFunction& f, const Measure& sigma, const CubeId& q)
{
    tree.require(q);
    require_same_tree(tree, f);
    const auto [first, last] = tree.leaf_range(q);
    const auto masses = sigma.leaf_masses();
    double total = 0;
    for (std::size_t x = first; x < last; ++x)
        total += f.values[x] * masses[x];
    return total;
}

double lp_norm(const LeafFunction& f, const Measure& sigma, double p)
{
    if (!(p > 0))
        throw Error("norm exponent must be positive");
    const auto masses = sigma.leaf_masses();
    if (f.values.size() != masses.size())
        throw Error("function and measure live on different trees");
    // Scale by the max to keep large exponents finite.
    double top = 0;
    for (std::size_t x = 0; x < masses.size(); ++x)
        if (masses[x] > 0)
            top = std::max(top, std::abs(f.values[x]));
    if (top == 0)
        return 0;
    double acc = 0;
    for (std::size_t x = 0; x < masses.size(); ++x)
        if (masses[x] > 0)
            acc += std::pow(std::abs(f.values[x]) / top, p) * masses[x];
    return top * std::pow(acc, 1.0 / p);
}

double dual_exponent(double p)
{
    if (!(p > 1))
        throw Error("dual exponent needs p > 1");
    if (std::isinf(p))
        return 1;
    return p / (p - 1);
}

LeafFunction maximal_function(const DyadicTree& tree, const LeafFunction& f, const Measure& sigma)
{
    require_same_tree(tree, f);
    const auto integrals = cube_integrals(tree, f, sigma);
    const std::size_t cubes = tree.cube_count();
    std::vector<double> best(cubes, 0.0);
    // Top-down: best(Q) = max(best(parent), avg(Q)) over positive-mass cubes.
    for (int level = 0; level <= tree.depth(); ++level) {
        const auto offset = static_cast<std::int64_t>(tree.level_offset(level));
        const auto width = static_cast<std::int64_t>(tree.level_size(level));
        const auto b = tree.branching();
#pragma omp parallel for schedule(static)
        for (std::int64_t m = 0; m < width; ++m) {
            const auto q = static_cast<std::size_t>(offset + m);
            double inherited = 0;
            if (level > 0)
                inherited = best[tree.level_offset(level - 1) + static_cast<std::size_t>(m / b)];
            const double mass = sigma[q];
            best[q] = mass > 0 ? std::max(inherited, integrals[q] / mass) : inherited;
        }
    }
    LeafFunction out{std::vector<double>(tree.leaf_count(), 0.0)};
    const auto leaf_offset = tree.level_offset(tree.depth());
    const auto masses = sigma.leaf_masses();
    for (std::size_t x = 0; x < out.values.size(); ++x)
        out.values[x] = masses[x] > 0 ? best[leaf_offset + x] : 0.0;
    return out;
}

std::vector<double> subtree_sums(const DyadicTree& tree, std::span<const double> leaf_values)
{
    if (leaf_values.size() != tree.leaf_count())
        throw Error("leaf array size does not match tree");
    std::vector<double> sums(tree.cube_count(), 0.0);
    std::copy(leaf_values.begin(), leaf_values.end(), sums.begin() + static_cast<std::ptrdiff_t>(tree.level_offset(tree.depth())));
    const auto b = static_cast<std::size_t>(tree.branching());
    for (int level = tree.depth() - 1; level >= 0; --level) {
        const auto offset = static_cast<std::int64_t>(tree.level_offset(level));
        const auto child_offset = tree.level_offset(level + 1);
        const auto width = static_cast<std::int64_t>(tree.level_size(level));
#pragma omp parallel for schedule(static)
        for (std::int64_t m = 0; m < width; ++m) {
            const std::size_t first = child_offset + static_cast<std::size_t>(m) * b;
            double s = 0;
            for (std::size_t t = 0; t < b; ++t)
                s += sums[first + t];
            sums[static_cast<std::size_t>(offset + m)] = s;
        }
    }
    return sums;
}

std::vector<double> cube_subtree_sums(const DyadicTree& tree, std::span<const double> cube_weights)
{
    if (cube_weights.size() != tree.cube_count())
        throw Error("cube array size does not match tree");
    std::vector<double> sums(cube_weights.begin(), cube_weights.end());
    const auto b = static_cast<std::size_t>(tree.branching());
    for (int level = tree.depth() - 1; level >= 0; --level) {
        const auto offset = static_cast<std::int64_t>(tree.level_offset(level));
        const auto child_offset = tree.level_offset(level + 1);
        const auto width = static_cast<std::int64_t>(tree.level_size(level));
#pragma omp parallel for schedule(static)
        for (std::int64_t m = 0; m < width; ++m) {
            const std::size_t first = child_offset + static_cast<std::size_t>(m) * b;
            double s = 0;
            for (std::size_t t = 0; t < b; ++t)
                s += sums[first + t];
            sums[static_cast<std::size_t>(offset + m)] += s;
        }
    }
    return sums;
}

std::vector<double> ancestor_sums(const DyadicTree& tree, std::span<const double> cube_weights)
{
    if (cube_weights.size() != tree.cube_count())
        throw Error("cube array size does not match tree");
    std::vector<double> acc(cube_weights.begin(), cube_weights.end());
    const auto b = static_cast<std::int64_t>(tree.branching());
    for (int level = 1; level <= tree.depth(); ++level) {
        const auto offset = static_cast<std::int64_t>(tree.level_offset(level));
        const auto parent_offset = static_cast<std::int64_t>(tree.level_offset(level - 1));
        const auto width = static_cast<std::int64_t>(tree.level_size(level));
#pragma omp parallel for schedule(static)
        for (std::int64_t m = 0; m < width; ++m)
            acc[static_cast<std::size_t>(offset + m)] += acc[static_cast<std::size_t>(parent_offset + m / b)];
    }
    const auto leaf_offset = static_cast<std::ptrdiff_t>(tree.level_offset(tree.depth()));
    return {acc.begin() + leaf_offset, acc.end()};
}

std::vector<double> cube_integrals(const DyadicTree& tree, const LeafFunction& f, const Measure& sigma)
{
    require_same_tree(tree, f);
    const auto masses = sigma.leaf_masses();
    std::vector<double> weighted(masses.size());
    for (std::size_t x = 0; x < masses.size(); ++x)
        weighted[x] = f.values[x] * masses[x];
    return subtree_sums(tree, weighted);
}

LeafFunction constant_function(const DyadicTree& tree, double value)
{
    return {std::vector<double>(tree.leaf_count(), value)};
}

} // namespace dyadic
