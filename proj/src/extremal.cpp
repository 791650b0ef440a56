#include "dyadic/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "dyadic/form.hpp"

namespace dyadic {

void AscentOptions::validate() const
{
    if (!(tolerance > 0))
        throw Error("ascent tolerance must be positive");
    if (max_iterations < 1)
        throw Error("max_iterations must be positive");
    if (restarts < 1)
        throw Error("restarts must be at least 1");
}

bool normalize(LeafFunction& f, const Measure& sigma, double p)
{
    const double norm = lp_norm(f, sigma, p);
    if (norm == 0)
        return false;
    for (double& v : f.values)
        v /= norm;
    return true;
}

bool dual_extremizer(std::span<const double> g, const Measure& sigma, double p, LeafFunction& out)
{
    const auto masses = sigma.leaf_masses();
    out.values.assign(masses.size(), 0.0);
    double top = 0;
    for (std::size_t x = 0; x < masses.size(); ++x)
        if (masses[x] > 0)
            top = std::max(top, g[x]);
    if (top == 0)
        return false;
    const double power = dual_exponent(p) - 1;
    for (std::size_t x = 0; x < masses.size(); ++x)
        if (masses[x] > 0 && g[x] > 0)
            out.values[x] = std::pow(g[x] / top, power);
    return normalize(out, sigma, p);
}

AscentStep ascent_step(const Instance& instance, std::size_t j, std::span<const LeafFunction> functions)
{
    const auto g = dual_function(instance, j, functions);
    AscentStep step;
    if (!dual_extremizer(g.values, instance.measures[j], instance.exponents[j], step.function)) {
        step.function = functions[j];
        step.degenerate = true;
    }
    return step;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double unit_uniform(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool has_mass_everywhere_zero(const Instance& instance)
{
    if (instance.kernel.is_zero())
        return true;
    for (const auto& m : instance.measures)
        if (m.total() == 0)
            return true;
    return false;
}

struct StartResult {
    double value = 0;
    std::vector<double> trace;
    std::vector<LeafFunction> functions;
};

StartResult run_start(const Instance& instance, const AscentOptions& options, int start)
{
    const auto n = instance.arity();
    StartResult r;
    r.functions.resize(n);
    std::mt19937_64 rng(splitmix64(options.seed ^ splitmix64(static_cast<std::uint64_t>(start))));
    for (std::size_t i = 0; i < n; ++i) {
        auto& f = r.functions[i];
        f.values.resize(instance.tree.leaf_count());
        for (double& v : f.values)
            v = start == 0 ? 1.0 : 0.1 + 0.9 * unit_uniform(rng);
        normalize(f, instance.measures[i], instance.exponents[i]);
    }
    double previous = evaluate_form(instance, r.functions);
    for (int it = 0; it < options.max_iterations; ++it) {
        for (std::size_t j = 0; j < n; ++j) {
            auto step = ascent_step(instance, j, r.functions);
            if (!step.degenerate)
                r.functions[j] = std::move(step.function);
        }
        const double current = evaluate_form(instance, r.functions);
        r.trace.push_back(current);
        if (std::abs(current - previous) <= options.tolerance * std::abs(current))
            break;
        previous = current;
    }
    r.value = r.trace.empty() ? previous : r.trace.back();
    return r;
}

} // namespace

ConstantEstimate best_constant(const Instance& instance, const AscentOptions& options)
{
    instance.validate();
    options.validate();
    ConstantEstimate est;
    if (has_mass_everywhere_zero(instance))
        return est;

    const int starts = options.restarts + 1;
    std::vector<StartResult> results(static_cast<std::size_t>(starts));
#pragma omp parallel for schedule(dynamic)
    for (int s = 0; s < starts; ++s)
        results[static_cast<std::size_t>(s)] = run_start(instance, options, s);

    for (int s = 0; s < starts; ++s) {
        auto& r = results[static_cast<std::size_t>(s)];
        if (est.best_start < 0 || r.value > est.value) {
            est.value = r.value;
            est.trace = std::move(r.trace);
            est.argmax = std::move(r.functions);
            est.best_start = s;
        }
    }
    return est;
}

namespace {

constexpr double grid_budget = 2e7;

double binomial(int top, int k)
{
    double c = 1;
    for (int i = 1; i <= k; ++i)
        c = c * (top - k + i) / i;
    return c;
}

// All ways to write `total` as an ordered sum of `parts` nonnegative integers.
void compositions(int total, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out)
{
    if (parts == 1) {
        cur.push_back(total);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int a = 0; a <= total; ++a) {
        cur.push_back(a);
        compositions(total - a, parts - 1, cur, out);
        cur.pop_back();
    }
}

double grid_size(const Instance& instance, int resolution)
{
    double points = 1;
    for (std::size_t i = 0; i + 1 < instance.arity(); ++i) {
        const auto m = static_cast<int>(instance.measures[i].positive_leaf_count());
        points *= binomial(resolution - 1 + m - 1, m - 1);
    }
    return points;
}

void check_oracle(const Instance& instance, int resolution)
{
    if (resolution < 16)
        throw Error("oracle resolution must be at least 16");
    for (const auto& m : instance.measures)
        if (m.positive_leaf_count() > oracle_leaf_limit)
            throw Error("oracle restricted to desk scale: more than 4 positive-mass leaves");
    if (grid_size(instance, resolution) > grid_budget)
        throw Error("oracle restricted to desk scale: grid too large");
}

// Grid functions of one slot together with their per-cube integrals.
struct SlotGrid {
    std::vector<std::vector<double>> integrals;
    std::vector<LeafFunction> functions;
};

SlotGrid build_slot_grid(const DyadicTree& tree, const Measure& sigma, double p, int resolution)
{
    const auto masses = sigma.leaf_masses();
    std::vector<std::size_t> support;
    for (std::size_t x = 0; x < masses.size(); ++x)
        if (masses[x] > 0)
            support.push_back(x);
    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    compositions(resolution - 1, static_cast<int>(support.size()), cur, comps);

    SlotGrid grid;
    grid.functions.reserve(comps.size());
    grid.integrals.reserve(comps.size());
    for (const auto& c : comps) {
        // w_k = f_k^p mass_k on the simplex Σ w_k = 1.
        LeafFunction f{std::vector<double>(masses.size(), 0.0)};
        for (std::size_t k = 0; k < support.size(); ++k) {
            const double w = static_cast<double>(c[k]) / (resolution - 1);
            f.values[support[k]] = std::pow(w / masses[support[k]], 1.0 / p);
        }
        grid.integrals.push_back(cube_integrals(tree, f, sigma));
        grid.functions.push_back(std::move(f));
    }
    return grid;
}

// ‖Σ_Q w(Q) 1_Q‖_{L^q(σ)} computed serially.
double dual_norm(const DyadicTree& tree, std::vector<double>& w, const Measure& sigma, double q)
{
    const auto b = static_cast<std::size_t>(tree.branching());
    for (int level = 1; level <= tree.depth(); ++level) {
        const auto offset = tree.level_offset(level);
        const auto parent_offset = tree.level_offset(level - 1);
        for (std::size_t m = 0; m < tree.level_size(level); ++m)
            w[offset + m] += w[parent_offset + m / b];
    }
    const auto leaf_offset = tree.level_offset(tree.depth());
    const auto masses = sigma.leaf_masses();
    double acc = 0;
    for (std::size_t x = 0; x < masses.size(); ++x)
        if (masses[x] > 0)
            acc += std::pow(w[leaf_offset + x], q) * masses[x];
    return std::pow(acc, 1.0 / q);
}

} // namespace

bool oracle_eligible(const Instance& instance, int resolution)
{
    try {
        check_oracle(instance, resolution);
    } catch (const Error&) {
        return false;
    }
    return true;
}

double brute_force_constant(const Instance& instance, int resolution)
{
    instance.validate();
    check_oracle(instance, resolution);
    if (has_mass_everywhere_zero(instance))
        return 0;

    const auto& tree = instance.tree;
    const auto n = instance.arity();
    const auto last = n - 1;
    std::vector<SlotGrid> grids;
    std::vector<std::size_t> radix;
    for (std::size_t i = 0; i < last; ++i) {
        grids.push_back(build_slot_grid(tree, instance.measures[i], instance.exponents[i], resolution));
        radix.push_back(grids.back().functions.size());
    }
    std::size_t points = 1;
    for (auto r : radix)
        points *= r;

    const double q = dual_exponent(instance.exponents[last]);
    const auto cubes = tree.cube_count();
    double best_value = -1;
    std::int64_t best_index = -1;
#pragma omp parallel
    {
        double local_value = -1;
        std::int64_t local_index = -1;
        std::vector<double> w(cubes);
#pragma omp for schedule(static)
        for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(points); ++idx) {
            for (std::size_t c = 0; c < cubes; ++c)
                w[c] = instance.kernel[c];
            auto rest = static_cast<std::size_t>(idx);
            for (std::size_t i = 0; i < last; ++i) {
                const auto& ints = grids[i].integrals[rest % radix[i]];
                rest /= radix[i];
                for (std::size_t c = 0; c < cubes; ++c)
                    w[c] *= ints[c];
            }
            const double v = dual_norm(tree, w, instance.measures[last], q);
            if (v > local_value) {
                local_value = v;
                local_index = idx;
            }
        }
#pragma omp critical
        {
            if (local_value > best_value || (local_value == best_value && local_index < best_index)) {
                best_value = local_value;
                best_index = local_index;
            }
        }
    }

    // Refine from the grid argmax by one ascent cycle.
    std::vector<LeafFunction> fs(n);
    auto rest = static_cast<std::size_t>(best_index);
    for (std::size_t i = 0; i < last; ++i) {
        fs[i] = grids[i].functions[rest % radix[i]];
        rest /= radix[i];
    }
    fs[last] = constant_function(tree, 0.0);
    const auto g = dual_function(instance, last, fs);
    if (!dual_extremizer(g.values, instance.measures[last], instance.exponents[last], fs[last]))
        return std::max(best_value, 0.0);
    double refined = evaluate_form(instance, fs);
    for (std::size_t j = 0; j < n; ++j) {
        auto step = ascent_step(instance, j, fs);
        if (!step.degenerate)
            fs[j] = std::move(step.function);
    }
    refined = std::max(refined, evaluate_form(instance, fs));
    return std::max(best_value, refined);
}

} // namespace dyadic
