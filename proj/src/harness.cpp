#include "dyadic/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "dyadic/io.hpp"
#include "dyadic/sawyer.hpp"
#include "dyadic/wolff.hpp"

namespace dyadic {

using json = nlohmann::ordered_json;

namespace {

std::uint64_t mix(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double exponential() { return -std::log1p(-uniform()); }
    bool bernoulli(double q) { return uniform() < q; }

private:
    std::mt19937_64 engine_;
};

std::string format_number(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (std::isnan(v))
        return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json number_or_null(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

std::vector<double> sample_exponents(const GeneratorSpec& spec, Rng& rng)
{
    const auto n = static_cast<std::size_t>(spec.n);
    if (spec.exponent_mode == ExponentMode::Fixed) {
        if (spec.exponents.size() != n)
            throw Error("fixed exponents must list one value per measure");
        for (double p : spec.exponents)
            if (!(p > 1) || !std::isfinite(p))
                throw Error("exponent must exceed 1");
        return spec.exponents;
    }
    const bool testing = spec.exponent_mode == ExponentMode::Testing;
    if (testing && n < 2)
        throw Error("impossible regime request: one exponent can never reach sum 1/p >= 1");
    const double lo = testing ? 1.0 : 0.3;
    const double hi = testing ? 1.5 : 0.9;
    for (int attempt = 0; attempt < 10000; ++attempt) {
        const double target = rng.uniform(lo, hi);
        std::vector<double> shares(n);
        double total = 0;
        for (auto& u : shares) {
            u = rng.uniform(0.1, 1.0);
            total += u;
        }
        std::vector<double> out(n);
        bool ok = true;
        for (std::size_t i = 0; i < n; ++i) {
            const double inv = target * shares[i] / total;
            ok = ok && inv <= 0.95;
            out[i] = 1.0 / inv;
        }
        if (ok && regime(out) == (testing ? Regime::Testing : Regime::Wolff))
            return out;
    }
    throw Error("impossible regime request: could not sample exponents");
}

} // namespace

std::uint64_t derived_seed(std::uint64_t base, std::uint64_t k)
{
    return mix(base ^ mix(k + 0x51ed2701ULL));
}

Instance generate(const GeneratorSpec& spec)
{
    if (spec.n < 1)
        throw Error("n must be at least 1");
    if (spec.depth > 20)
        throw Error("depth too large for the generator");
    DyadicTree tree(spec.branching, spec.depth);
    Rng rng(spec.seed);
    auto exponents = sample_exponents(spec, rng);

    std::vector<Measure> measures;
    for (int i = 0; i < spec.n; ++i) {
        std::vector<double> masses(tree.leaf_count());
        for (double& m : masses) {
            const double e = rng.exponential();
            if (spec.measure_family == MeasureFamily::Sparse)
                m = rng.bernoulli(spec.sparse_q) ? e : 0.0;
            else
                m = e;
        }
        Measure measure(tree, std::move(masses));
        if (measure.total() == 0)
            throw Error("degenerate instance: measure " + std::to_string(i + 1) + " is identically zero");
        measures.push_back(std::move(measure));
    }

    std::vector<double> kernel(tree.cube_count());
    for (std::size_t c = 0; c < kernel.size(); ++c) {
        double k = rng.uniform();
        if (spec.kernel_family == KernelFamily::LevelWeighted)
            k *= std::pow(static_cast<double>(tree.branching()), spec.gamma * tree.cube(c).level);
        kernel[c] = k;
    }
    return {tree, Kernel(tree, std::move(kernel)), std::move(measures), std::move(exponents)};
}

std::string ConstantsReport::to_json() const
{
    json doc;
    doc["regime"] = std::string(to_string(regime));
    doc["c1"] = c1;
    doc["c1_cycles"] = c1_cycles;
    doc["c1_oracle"] = c1_oracle ? json(*c1_oracle) : json(nullptr);
    doc["c2_kind"] = c2_kind;
    doc["c2"] = c2;
    doc["ratio"] = number_or_null(ratio);
    doc["witness"] = witness;
    doc["detail"] = json::parse(detail);
    if (seconds)
        doc["seconds"] = *seconds;
    return doc.dump(2);
}

ConstantsReport run_constants(const Instance& instance, const RunOptions& options)
{
    instance.validate();
    const auto start = std::chrono::steady_clock::now();
    ConstantsReport report;
    report.regime = regime(instance.exponents);

    const auto estimate = best_constant(instance, options.ascent);
    report.c1 = estimate.value;
    report.c1_cycles = estimate.trace.size();
    if (options.oracle && oracle_eligible(instance, options.resolution))
        report.c1_oracle = brute_force_constant(instance, options.resolution);

    if (report.regime == Regime::Testing) {
        const auto testing = sawyer_constant(instance, options.ascent);
        report.c2_kind = "sawyer";
        report.c2 = testing.overall;
        const SlotTesting* worst = &testing.per_j.front();
        for (const auto& s : testing.per_j)
            if (s.value > worst->value)
                worst = &s;
        report.witness = "j=" + std::to_string(worst->j + 1) + "@" + worst->worst_cube.str();
        report.detail = testing.to_json();
    } else {
        const auto wolff = wolff_constant(instance);
        report.c2_kind = "wolff";
        report.c2 = wolff.max;
        std::string phi;
        for (auto s : wolff.per_phi[wolff.argmax].perm)
            phi += (phi.empty() ? "" : "-") + std::to_string(s + 1);
        report.witness = "phi=" + phi;
        report.detail = wolff.to_json();
    }

    const double c1 = report.c1_oracle ? std::max(report.c1, *report.c1_oracle) : report.c1;
    if (c1 == 0 && report.c2 == 0)
        report.ratio = 1;
    else if (c1 == 0)
        report.ratio = std::numeric_limits<double>::infinity();
    else
        report.ratio = report.c2 / c1;
    if (options.timing)
        report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

EquivalenceReport sweep(const GeneratorSpec& spec, int count, const RunOptions& options)
{
    if (count < 1)
        throw Error("count must be positive");
    EquivalenceReport out;
    out.rows.resize(static_cast<std::size_t>(count));
    // Instances are generated up front so generator errors surface in order.
    std::vector<Instance> instances;
    for (int k = 0; k < count; ++k) {
        const auto seed = derived_seed(spec.seed, static_cast<std::uint64_t>(k));
        instances.push_back(generate(spec.with_seed(seed)));
        out.rows[static_cast<std::size_t>(k)].instance_id = static_cast<std::size_t>(k);
        out.rows[static_cast<std::size_t>(k)].seed = seed;
    }
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < count; ++k) {
        const auto u = static_cast<std::size_t>(k);
        out.rows[u].report = run_constants(instances[u], options);
    }

    for (const auto& row : out.rows) {
        const auto& r = row.report;
        const double c1 = r.c1_oracle ? std::max(r.c1, *r.c1_oracle) : r.c1;
        if ((c1 == 0) != (r.c2 == 0))
            ++out.zero_coupling_violations;
        if (c1 > 0 && r.c2 > 0) {
            out.max_c1_over_c2 = std::max(out.max_c1_over_c2, c1 / r.c2);
            out.max_c2_over_c1 = std::max(out.max_c2_over_c1, r.c2 / c1);
        }
        if (r.regime == Regime::Testing && r.c1_oracle && r.c2 > *r.c1_oracle * (1 + oracle_gap))
            ++out.necessity_violations;
    }
    return out;
}

std::string EquivalenceReport::to_csv() const
{
    std::ostringstream os;
    os << "instance_id,regime,c1,c2_kind,c2,ratio,worst_j_or_phi,seconds\n";
    for (const auto& row : rows) {
        const auto& r = row.report;
        os << row.instance_id << ',' << to_string(r.regime) << ',' << format_number(r.c1) << ',' << r.c2_kind << ','
           << format_number(r.c2) << ',' << format_number(r.ratio) << ',' << r.witness << ','
           << (r.seconds ? format_number(*r.seconds) : "") << '\n';
    }
    return os.str();
}

std::string EquivalenceReport::to_json() const
{
    json doc;
    auto list = json::array();
    for (const auto& row : rows) {
        const auto& r = row.report;
        json item;
        item["instance_id"] = row.instance_id;
        item["seed"] = row.seed;
        item["regime"] = std::string(to_string(r.regime));
        item["c1"] = r.c1;
        item["c1_oracle"] = r.c1_oracle ? json(*r.c1_oracle) : json(nullptr);
        item["c2_kind"] = r.c2_kind;
        item["c2"] = r.c2;
        item["ratio"] = number_or_null(r.ratio);
        item["worst_j_or_phi"] = r.witness;
        item["seconds"] = r.seconds ? json(*r.seconds) : json(nullptr);
        list.push_back(std::move(item));
    }
    doc["rows"] = std::move(list);
    json summary;
    summary["count"] = rows.size();
    summary["max_c1_over_c2"] = max_c1_over_c2;
    summary["max_c2_over_c1"] = max_c2_over_c1;
    summary["zero_coupling_violations"] = zero_coupling_violations;
    summary["necessity_violations"] = necessity_violations;
    summary["passed"] = passed();
    doc["summary"] = std::move(summary);
    return doc.dump(2) + "\n";
}

std::string VerificationSummary::to_json() const
{
    json doc;
    doc["suite"] = name;
    doc["cases"] = cases;
    doc["failures"] = failures;
    doc["passed"] = passed();
    auto list = json::array();
    for (const auto& w : witnesses)
        list.push_back(json::parse(w));
    doc["witnesses"] = std::move(list);
    return doc.dump(2) + "\n";
}

CarlesonData lemma_case(const GeneratorSpec& spec, std::size_t k)
{
    DyadicTree tree(spec.branching, spec.depth);
    Rng rng(derived_seed(spec.seed, k));
    std::vector<double> masses(tree.leaf_count());
    for (auto attempt = 0; attempt < 1000; ++attempt) {
        for (double& m : masses) {
            const double e = rng.exponential();
            m = spec.measure_family == MeasureFamily::Sparse && !rng.bernoulli(spec.sparse_q) ? 0.0 : e;
        }
        if (std::any_of(masses.begin(), masses.end(), [](double m) { return m > 0; }))
            break;
    }
    Measure sigma(tree, masses);
    std::vector<double> alpha(tree.cube_count(), 0.0);
    for (std::size_t c = 0; c < alpha.size(); ++c) {
        const double e = rng.exponential();
        const bool keep = rng.bernoulli(0.6);
        if (sigma[c] > 0 && keep)
            alpha[c] = e * sigma[c];
    }
    const double s = lemma_exponents[k % std::size(lemma_exponents)];
    return {tree, std::move(sigma), s, std::move(alpha)};
}

VerificationSummary check_lemma(const GeneratorSpec& spec, int count, const TripleTamper& tamper)
{
    if (count < 1)
        throw Error("count must be positive");
    VerificationSummary out;
    out.name = "lemma";
    out.cases = static_cast<std::size_t>(count);
    std::vector<CarlesonCheck> checks(out.cases);
#pragma omp parallel for schedule(static)
    for (int k = 0; k < count; ++k) {
        const auto data = lemma_case(spec, static_cast<std::size_t>(k));
        auto triple = carleson_quantities(data);
        if (tamper)
            tamper(triple);
        checks[static_cast<std::size_t>(k)] = check_carleson_triple(triple, data.s);
    }
    for (std::size_t k = 0; k < checks.size(); ++k) {
        if (checks[k].passed)
            continue;
        ++out.failures;
        const auto data = lemma_case(spec, k);
        json w;
        w["case"] = k;
        w["branching"] = data.tree.branching();
        w["depth"] = data.tree.depth();
        w["s"] = data.s;
        w["sigma"] = std::vector<double>(data.sigma.leaf_masses().begin(), data.sigma.leaf_masses().end());
        w["alpha"] = data.alpha;
        w["check"] = json::parse(checks[k].to_json());
        out.witnesses.push_back(w.dump());
    }
    return out;
}

std::vector<LeafFunction> corona_functions(const Instance& instance, std::uint64_t seed)
{
    Rng rng(seed ^ 0xc0c0a5eedULL);
    std::vector<LeafFunction> fs;
    for (std::size_t i = 0; i < instance.arity(); ++i) {
        LeafFunction f{std::vector<double>(instance.tree.leaf_count())};
        // Heavy-tailed values so averages double often enough to build deep forests.
        for (double& v : f.values) {
            const double e = rng.exponential();
            v = rng.bernoulli(0.7) ? e * e * e : 0.0;
        }
        fs.push_back(std::move(f));
    }
    return fs;
}

VerificationSummary check_corona(const GeneratorSpec& spec, int count)
{
    if (count < 1)
        throw Error("count must be positive");
    VerificationSummary out;
    out.name = "corona";
    out.cases = static_cast<std::size_t>(count);
    std::vector<std::string> witnesses(out.cases);
    std::vector<int> failed(out.cases, 0);
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < count; ++k) {
        const auto u = static_cast<std::size_t>(k);
        const auto seed = derived_seed(spec.seed, u);
        const auto instance = generate(spec.with_seed(seed));
        const auto fs = corona_functions(instance, seed);
        const auto check = corona_partition_check(instance, fs);
        if (check.passed)
            continue;
        failed[u] = 1;
        json w;
        w["case"] = u;
        w["seed"] = seed;
        w["instance"] = json::parse(save_instance(instance));
        auto fj = json::array();
        for (const auto& f : fs)
            fj.push_back(f.values);
        w["functions"] = std::move(fj);
        w["check"] = json::parse(check.to_json());
        witnesses[u] = w.dump();
    }
    for (std::size_t k = 0; k < out.cases; ++k) {
        if (!failed[k])
            continue;
        ++out.failures;
        out.witnesses.push_back(witnesses[k]);
    }
    return out;
}

} // namespace dyadic
