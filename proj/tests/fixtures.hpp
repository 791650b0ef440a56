#ifndef DYADIC_TEST_FIXTURES_HPP
#define DYADIC_TEST_FIXTURES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "dyadic/core.hpp"

namespace fixtures {

using namespace dyadic;

// Two leaves under a unit root kernel: b=2, D=1; σ1 = σ2 = (1,1); K(root)=1; p=(2,2).
inline Instance fa(double p = 2)
{
    DyadicTree tree(2, 1);
    Kernel k(tree);
    k.set(tree, {0, 0}, 1.0);
    return {tree, k, {Measure(tree, {1, 1}), Measure(tree, {1, 1})}, {p, p}};
}

// Same instance with p=(4,4).
inline Instance fc() { return fa(4); }

inline DyadicTree small_tree() { return DyadicTree(2, 1); }

// Uneven two-leaf measure (1,3) and function (4,0).
inline Measure fb_measure() { return Measure(small_tree(), {1, 3}); }
inline LeafFunction fb_function() { return {{4, 0}}; }

inline bool close(double a, double b, double rel, double abs_tol = 0)
{
    return std::abs(a - b) <= std::max(abs_tol, rel * std::max(std::abs(a), std::abs(b)));
}

/// Small hand-rolled generator for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo = 0, double hi = 1) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin(double q = 0.5) { return uniform() < q; }

    std::vector<double> masses(std::size_t count, double zero_probability = 0)
    {
        std::vector<double> out(count);
        for (double& m : out)
            m = coin(zero_probability) ? 0.0 : uniform(0.05, 3.0);
        if (std::all_of(out.begin(), out.end(), [](double m) { return m == 0; }))
            out[0] = 1.0;
        return out;
    }

    LeafFunction function(const DyadicTree& tree, double zero_probability = 0)
    {
        LeafFunction f{std::vector<double>(tree.leaf_count())};
        for (double& v : f.values)
            v = coin(zero_probability) ? 0.0 : uniform(0, 4);
        return f;
    }

    Kernel kernel(const DyadicTree& tree, double zero_probability = 0)
    {
        std::vector<double> values(tree.cube_count());
        for (double& v : values)
            v = coin(zero_probability) ? 0.0 : uniform(0, 2);
        return Kernel(tree, values);
    }

    /// Random instance; exponents drawn with Σ 1/p_i in [lo, hi).
    Instance instance(int branching, int depth, int n, double lo, double hi, double zero_mass = 0)
    {
        DyadicTree tree(branching, depth);
        std::vector<Measure> measures;
        for (int i = 0; i < n; ++i)
            measures.emplace_back(tree, masses(tree.leaf_count(), zero_mass));
        return {tree, kernel(tree, 0.3), measures, exponents(n, lo, hi)};
    }

    std::vector<double> exponents(int n, double lo, double hi)
    {
        for (;;) {
            const double target = uniform(lo, hi);
            std::vector<double> shares(static_cast<std::size_t>(n));
            double total = 0;
            for (double& s : shares) {
                s = uniform(0.2, 1.0);
                total += s;
            }
            std::vector<double> out;
            bool ok = true;
            for (double s : shares) {
                const double inv = target * s / total;
                ok = ok && inv < 0.9;
                out.push_back(1.0 / inv);
            }
            if (ok)
                return out;
        }
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

} // namespace fixtures

#endif
