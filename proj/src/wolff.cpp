#include "dyadic/wolff.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "dyadic/form.hpp"

namespace dyadic {

LeafFunction wolff_potential(const DyadicTree& tree, const Kernel& kernel, const Measure& mu, const Measure& nu,
                             double p)
{
    if (!(p > 1))
        throw Error("Wolff potential needs p > 1");
    const auto cubes = tree.cube_count();
    std::vector<double> w(cubes);
    for (std::size_t c = 0; c < cubes; ++c)
        w[c] = kernel[c] * mu[c] * nu[c];
    const auto inner = cube_subtree_sums(tree, w);
    std::vector<double> terms(cubes, 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(cubes); ++c) {
        const auto u = static_cast<std::size_t>(c);
        if (mu[u] > 0)
            terms[u] = kernel[u] * mu[u] * std::pow(inner[u] / mu[u], p - 1);
    }
    return {ancestor_sums(tree, terms)};
}

namespace {

void check_permutation(const Permutation& perm, std::size_t n)
{
    if (perm.size() != n)
        throw Error("permutation has the wrong length");
    std::vector<bool> seen(n, false);
    for (auto s : perm) {
        if (s >= n || seen[s])
            throw Error("not a permutation of the slots");
        seen[s] = true;
    }
}

} // namespace

ExponentLadder exponent_ladder(const std::vector<double>& exponents, const Permutation& perm)
{
    const auto n = exponents.size();
    check_permutation(perm, n);
    for (double p : exponents)
        if (!(p > 1))
            throw Error("exponent must exceed 1");
    if (regime(exponents) != Regime::Wolff)
        throw Error("ladder undefined: sum of 1/p_i >= 1");

    ExponentLadder ladder;
    ladder.perm = perm;
    double partial = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        partial += 1.0 / exponents[perm[k]];
        ladder.rungs.push_back(1.0 / (1.0 - partial));
    }
    partial += 1.0 / exponents[perm[n - 1]];
    ladder.r = 1.0 / (1.0 - partial);

    double prev = 1;
    for (double rung : ladder.rungs) {
        if (!(rung > prev))
            throw Error("exponent ladder is not strictly increasing");
        prev = rung;
    }
    if (!(ladder.r > prev))
        throw Error("exponent ladder is not strictly increasing");
    return ladder;
}

double ExponentLadder::max_identity_residual(const std::vector<double>& exponents) const
{
    const auto n = perm.size();
    auto inv_p = [&](std::size_t k) { return 1.0 / exponents[perm[k]]; };
    double worst = 0;
    auto note = [&worst](double residual) { worst = std::max(worst, std::abs(residual)); };

    // Defining chain.
    double partial = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        partial += inv_p(k);
        note(1.0 / rungs[k] + partial - 1.0);
    }
    note(1.0 / r + partial + inv_p(n - 1) - 1.0);

    // Consecutive rungs: r_{i-1}/r_i + r_{i-1}/p_{φ(i)} = 1 and 1/r_i + 1/p_{φ(i)} = 1/r_{i-1}.
    for (std::size_t k = 1; k + 1 < n; ++k) {
        note(rungs[k - 1] / rungs[k] + rungs[k - 1] * inv_p(k) - 1.0);
        note(1.0 / rungs[k] + inv_p(k) - 1.0 / rungs[k - 1]);
    }
    if (n >= 2) {
        const double last = rungs.back();
        note(last / r + last * inv_p(n - 1) - 1.0);
        note(1.0 / r + inv_p(n - 1) - 1.0 / last);
    }
    return worst;
}

IteratedKernels iterated_kernels(const Instance& instance, const Permutation& perm)
{
    instance.validate();
    const auto n = instance.arity();
    IteratedKernels out;
    out.ladder = exponent_ladder(instance.exponents, perm);
    const auto& tree = instance.tree;
    const auto cubes = tree.cube_count();

    std::vector<double> prev(instance.kernel.values().begin(), instance.kernel.values().end());
    double prev_rung = 1;
    for (std::size_t stage = 0; stage + 1 < n; ++stage) {
        // Stage k absorbs σ_{φ(k)}; the inner sum carries σ_{φ(i)} for i >= k.
        std::vector<double> w(prev);
        for (std::size_t i = stage; i < n; ++i) {
            const auto& sigma = instance.measures[perm[i]];
            for (std::size_t c = 0; c < cubes; ++c)
                w[c] *= sigma[c];
        }
        const auto inner = cube_subtree_sums(tree, w);
        const double rung = out.ladder.rungs[stage];
        const double power = rung / prev_rung - 1;
        const auto& absorbed = instance.measures[perm[stage]];
        std::vector<double> next(cubes, 0.0);
#pragma omp parallel for schedule(static)
        for (std::int64_t c = 0; c < static_cast<std::int64_t>(cubes); ++c) {
            const auto u = static_cast<std::size_t>(c);
            const double mass = absorbed[u];
            if (mass > 0)
                next[u] = prev[u] * mass * std::pow(inner[u] / mass, power);
        }
        out.stages.push_back(next);
        prev = std::move(next);
        prev_rung = rung;
    }
    return out;
}

double wolff_condition_constant(const Instance& instance, const Permutation& perm)
{
    const auto kernels = iterated_kernels(instance, perm);
    const auto& ladder = kernels.ladder;
    const auto& last = kernels.stages.empty() ? std::vector<double>(instance.kernel.values().begin(),
                                                                    instance.kernel.values().end())
                                              : kernels.stages.back();
    const double last_rung = ladder.rungs.empty() ? 1.0 : ladder.rungs.back();
    LeafFunction h{ancestor_sums(instance.tree, last)};
    for (double& v : h.values)
        v = std::pow(v, 1.0 / last_rung);
    return lp_norm(h, instance.measures[perm.back()], ladder.r);
}

std::vector<Permutation> all_permutations(std::size_t n)
{
    std::vector<Permutation> out;
    Permutation perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    do {
        out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

WolffReport wolff_constant(const Instance& instance)
{
    instance.validate();
    const auto n = instance.arity();
    if (n > max_wolff_arity)
        throw Error("permutation budget exceeded: n > 6");
    if (regime(instance.exponents) != Regime::Wolff)
        throw Error("ladder undefined: sum of 1/p_i >= 1");
    const auto perms = all_permutations(n);
    WolffReport report;
    report.per_phi.resize(perms.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(perms.size()); ++k) {
        const auto u = static_cast<std::size_t>(k);
        report.per_phi[u] = {perms[u], wolff_condition_constant(instance, perms[u]),
                             exponent_ladder(instance.exponents, perms[u])};
    }
    for (std::size_t k = 0; k < report.per_phi.size(); ++k) {
        if (report.per_phi[k].value > report.max) {
            report.max = report.per_phi[k].value;
            report.argmax = k;
        }
    }
    return report;
}

std::string WolffReport::to_json() const
{
    using json = nlohmann::ordered_json;
    auto one_based = [](const Permutation& perm) {
        std::vector<std::size_t> out;
        for (auto s : perm)
            out.push_back(s + 1);
        return out;
    };
    json doc;
    auto rows = json::array();
    auto ladders = json::array();
    for (const auto& pv : per_phi) {
        rows.push_back({{"phi", one_based(pv.perm)}, {"value", pv.value}});
        ladders.push_back({{"phi", one_based(pv.perm)}, {"rungs", pv.ladder.rungs}, {"r", pv.ladder.r}});
    }
    doc["per_phi"] = std::move(rows);
    doc["ladders"] = std::move(ladders);
    doc["max"] = max;
    doc["argmax_phi"] = per_phi.empty() ? std::vector<std::size_t>{} : one_based(per_phi[argmax].perm);
    return doc.dump(2);
}

std::pair<double, double> bilinear_wolff_closed_form(const Instance& instance)
{
    instance.validate();
    if (instance.arity() != 2)
        throw Error("bilinear closed form needs exactly two measures");
    if (regime(instance.exponents) != Regime::Wolff)
        throw Error("ladder undefined: sum of 1/p_i >= 1");
    const double p1 = instance.exponents[0];
    const double p2 = instance.exponents[1];
    const double r = 1.0 / (1.0 - 1.0 / p1 - 1.0 / p2);
    const auto& tree = instance.tree;
    const auto& s1 = instance.measures[0];
    const auto& s2 = instance.measures[1];

    auto entry = [&](const Measure& mu, const Measure& nu, double q) {
        auto w = wolff_potential(tree, instance.kernel, mu, nu, q);
        for (double& v : w.values)
            v = std::pow(v, 1.0 / q);
        return lp_norm(w, nu, r);
    };
    return {entry(s2, s1, dual_exponent(p2)), entry(s1, s2, dual_exponent(p1))};
}

} // namespace dyadic
