#include <doctest.h>

#include <cmath>

#include "dyadic/extremal.hpp"
#include "dyadic/form.hpp"
#include "dyadic/wolff.hpp"
#include "fixtures.hpp"
#include "reference.hpp"

using namespace dyadic;
using fixtures::close;

TEST_CASE("wolff_potential examples")
{
    const auto fa = fixtures::fa();
    const auto w = wolff_potential(fa.tree, fa.kernel, fa.measures[0], fa.measures[1], 2);
    CHECK(w.values == std::vector<double>{4, 4});

    const Measure zero(fa.tree, {0, 0});
    CHECK(wolff_potential(fa.tree, fa.kernel, fa.measures[0], zero, 2).values == std::vector<double>{0, 0});

    Kernel k(fa.tree);
    k.set(fa.tree, {1, 1}, 3);
    const Measure unit(fa.tree, {0, 1});
    const auto single = wolff_potential(fa.tree, k, unit, unit, 2);
    CHECK(single.values[1] == doctest::Approx(9));
    CHECK(single.values[0] == 0);
}

TEST_CASE("exponent_ladder examples")
{
    const auto l = exponent_ladder({4, 4}, {0, 1});
    REQUIRE(l.rungs.size() == 1);
    CHECK(l.rungs[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(l.r == doctest::Approx(2).epsilon(1e-15));

    CHECK_THROWS_WITH_AS(exponent_ladder({2, 2}, {0, 1}), doctest::Contains("ladder undefined"), Error);

    const auto m = exponent_ladder({3, 4, 5}, {0, 1, 2});
    REQUIRE(m.rungs.size() == 2);
    CHECK(m.rungs[0] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(m.rungs[1] == doctest::Approx(12.0 / 5.0).epsilon(1e-15));
    CHECK(m.r == doctest::Approx(60.0 / 13.0).epsilon(1e-15));

    CHECK_THROWS_AS(exponent_ladder({3, 4}, {0, 0}), Error);
    CHECK_THROWS_AS(exponent_ladder({3, 4}, {0}), Error);
}

TEST_CASE("ladder identities hold for random tuples and all permutations (property)")
{
    fixtures::Gen gen(61);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = gen.integer(1, 4);
        const auto p = gen.exponents(n, 0.05, 0.95);
        for (const auto& perm : all_permutations(static_cast<std::size_t>(n))) {
            const auto ladder = exponent_ladder(p, perm);
            CHECK(ladder.max_identity_residual(p) <= 1e-12);
            for (std::size_t k = 1; k < ladder.rungs.size(); ++k)
                CHECK(ladder.rungs[k] > ladder.rungs[k - 1]);
        }
    }
}

TEST_CASE("iterated_kernels examples")
{
    const auto fc = fixtures::fc();
    const auto ks = iterated_kernels(fc, {0, 1});
    REQUIRE(ks.stages.size() == 1);
    CHECK(ks.stages[0][0] == doctest::Approx(2 * std::cbrt(2.0)).epsilon(1e-14));

    Instance zero = fc;
    zero.kernel = Kernel(fc.tree);
    for (const auto& stage : iterated_kernels(zero, {1, 0}).stages)
        for (double v : stage)
            CHECK(v == 0);

    CHECK_THROWS_AS(iterated_kernels(fixtures::fa(), {0, 1}), Error);
}

TEST_CASE("iterated kernels match the literal definition (property)")
{
    fixtures::Gen gen(62);
    for (int trial = 0; trial < 60; ++trial) {
        const auto inst = gen.instance(gen.integer(2, 3), gen.integer(0, 3), gen.integer(2, 4), 0.2, 0.9, 0.2);
        for (const auto& perm : all_permutations(inst.arity())) {
            const auto fast = iterated_kernels(inst, perm).stages;
            const auto slow = reference::iterated_kernels(inst, perm);
            REQUIRE(fast.size() == slow.size());
            for (std::size_t s = 0; s < fast.size(); ++s)
                for (std::size_t c = 0; c < fast[s].size(); ++c)
                    CHECK(close(fast[s][c], slow[s][c], 1e-12, 1e-300));
            CHECK(close(wolff_condition_constant(inst, perm), reference::wolff_condition_constant(inst, perm), 1e-12,
                        1e-300));
        }
    }
}

TEST_CASE("wolff_condition_constant and wolff_constant examples")
{
    const auto fc = fixtures::fc();
    const double expected = std::pow(2.0, 1.5);
    CHECK(wolff_condition_constant(fc, {0, 1}) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(wolff_condition_constant(fc, {1, 0}) == doctest::Approx(expected).epsilon(1e-14));
    const auto report = wolff_constant(fc);
    CHECK(report.max == doctest::Approx(expected).epsilon(1e-14));
    CHECK(report.per_phi.size() == 2);
    CHECK(report.to_json().find("\"phi\": [\n        1,\n        2\n      ]") != std::string::npos);

    Instance zero = fc;
    zero.kernel = Kernel(fc.tree);
    CHECK(wolff_condition_constant(zero, {0, 1}) == 0);
    CHECK(wolff_constant(zero).max == 0);

    DyadicTree tree(2, 0);
    Instance seven{tree, Kernel(tree, {1}), std::vector<Measure>(7, Measure(tree, {1})), std::vector<double>(7, 10.0)};
    CHECK_THROWS_WITH_AS(wolff_constant(seven), doctest::Contains("permutation budget"), Error);
}

TEST_CASE("three measures with a root-only kernel")
{
    DyadicTree tree(2, 1);
    const double k = 1.3;
    const double mass = 2; // each σ_i has unit leaf masses
    Kernel kernel(tree);
    kernel.set(tree, {0, 0}, k);
    const std::vector<double> p{3, 4, 5};
    Instance inst{tree, kernel, std::vector<Measure>(3, Measure(tree, {1, 1})), p};

    double best = 0;
    for (const auto& perm : all_permutations(3)) {
        // Single-term closed form: every stage only sees the root.
        const double r1 = 1 / (1 - 1 / p[perm[0]]);
        const double r2 = 1 / (1 - 1 / p[perm[0]] - 1 / p[perm[1]]);
        const double r = 1 / (1 - 1 / p[0] - 1 / p[1] - 1 / p[2]);
        const double k1 = k * mass * std::pow(k * mass * mass * mass / mass, r1 - 1);
        const double k2 = k1 * mass * std::pow(k1 * mass * mass / mass, r2 / r1 - 1);
        const double closed = std::pow(k2, 1 / r2) * std::pow(mass, 1 / r);
        CHECK(wolff_condition_constant(inst, perm) == doctest::Approx(closed).epsilon(1e-13));
        CHECK(reference::wolff_condition_constant(inst, perm) == doctest::Approx(closed).epsilon(1e-13));
        best = std::max(best, closed);
    }
    CHECK(wolff_constant(inst).max == doctest::Approx(best).epsilon(1e-13));
}

TEST_CASE("bilinear_wolff_closed_form examples")
{
    const auto fc = fixtures::fc();
    const auto [a, b] = bilinear_wolff_closed_form(fc);
    CHECK(a == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-14));
    CHECK(b == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-14));

    Instance zero = fc;
    zero.kernel = Kernel(fc.tree);
    CHECK(bilinear_wolff_closed_form(zero) == std::pair<double, double>{0, 0});

    Instance null = fc;
    null.measures[0] = Measure(fc.tree, {0, 0});
    CHECK(bilinear_wolff_closed_form(null) == std::pair<double, double>{0, 0});

    CHECK_THROWS_AS(bilinear_wolff_closed_form(fixtures::fa()), Error);
}

TEST_CASE("n=2: first iterated kernel is the Wolff potential (property)")
{
    fixtures::Gen gen(63);
    for (int trial = 0; trial < 80; ++trial) {
        const auto inst = gen.instance(gen.integer(2, 3), gen.integer(0, 4), 2, 0.2, 0.95, 0.2);
        const auto closed = bilinear_wolff_closed_form(inst);
        for (const auto& perm : all_permutations(2)) {
            const auto ks = iterated_kernels(inst, perm);
            const auto summed = ancestor_sums(inst.tree, ks.stages[0]);
            const auto w = wolff_potential(inst.tree, inst.kernel, inst.measures[perm[0]], inst.measures[perm[1]],
                                           dual_exponent(inst.exponents[perm[0]]));
            const auto w_ref = reference::wolff_potential(inst.tree, inst.kernel, inst.measures[perm[0]],
                                                          inst.measures[perm[1]], dual_exponent(inst.exponents[perm[0]]));
            for (std::size_t x = 0; x < summed.size(); ++x) {
                CHECK(close(summed[x], w.values[x], 1e-12, 1e-300));
                CHECK(close(w.values[x], w_ref.values[x], 1e-12, 1e-300));
            }
            // φ = (2,1) is the first entry, φ = (1,2) the second.
            const double entry = perm[0] == 1 ? closed.first : closed.second;
            CHECK(close(wolff_condition_constant(inst, perm), entry, 1e-12, 1e-300));
        }
    }
}

TEST_CASE("one measure: the Wolff constant is c1")
{
    fixtures::Gen gen(64);
    for (int trial = 0; trial < 20; ++trial) {
        const auto inst = gen.instance(2, gen.integer(0, 3), 1, 0.2, 0.9);
        CHECK(close(wolff_constant(inst).max, best_constant(inst).value, 1e-12));
    }
}

TEST_CASE("Wolff constants are monotone in the kernel and vanish with c1 (property)")
{
    fixtures::Gen gen(65);
    for (int trial = 0; trial < 40; ++trial) {
        const auto inst = gen.instance(2, gen.integer(0, 3), gen.integer(2, 3), 0.2, 0.9, 0.3);
        std::vector<double> bigger(inst.kernel.values().begin(), inst.kernel.values().end());
        for (double& v : bigger)
            v *= gen.uniform(1, 2);
        Instance heavier = inst;
        heavier.kernel = Kernel(inst.tree, bigger);
        for (const auto& perm : all_permutations(inst.arity())) {
            const auto a = iterated_kernels(inst, perm).stages;
            const auto b = iterated_kernels(heavier, perm).stages;
            for (std::size_t s = 0; s < a.size(); ++s)
                for (std::size_t c = 0; c < a[s].size(); ++c)
                    CHECK(b[s][c] >= a[s][c] * (1 - 1e-12));
        }
        CHECK(wolff_constant(heavier).max >= wolff_constant(inst).max * (1 - 1e-12));
        CHECK((wolff_constant(inst).max == 0) == (best_constant(inst).value == 0));
    }
}
