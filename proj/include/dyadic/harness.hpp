#ifndef DYADIC_HARNESS_HPP
#define DYADIC_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dyadic/core.hpp"
#include "dyadic/corona.hpp"
#include "dyadic/extremal.hpp"
#include "dyadic/form.hpp"

namespace dyadic {

enum class ExponentMode { Fixed, Testing, Wolff };
enum class MeasureFamily { IidExponential, Sparse };
enum class KernelFamily { IidUniform, LevelWeighted };

struct GeneratorSpec {
    int branching = 2;
    int depth = 3;
    int n = 2;
    ExponentMode exponent_mode = ExponentMode::Testing;
    std::vector<double> exponents; // used when exponent_mode == Fixed
    MeasureFamily measure_family = MeasureFamily::IidExponential;
    double sparse_q = 0.5;         // Bernoulli keep-probability for Sparse
    KernelFamily kernel_family = KernelFamily::IidUniform;
    double gamma = 0;              // level weight b^{γ·level}
    std::uint64_t seed = 1;

    GeneratorSpec with_seed(std::uint64_t s) const
    {
        auto copy = *this;
        copy.seed = s;
        return copy;
    }
};

/// Seed of the k-th instance of an ensemble.
std::uint64_t derived_seed(std::uint64_t base, std::uint64_t k);

/// Deterministic random instance; throws on impossible regime requests and
/// on degenerate (all-zero) measures.
Instance generate(const GeneratorSpec& spec);

struct RunOptions {
    AscentOptions ascent;
    bool oracle = false;  // also brute-force c1 when eligible
    int resolution = 64;
    bool timing = false;  // fill the seconds column
};

struct ConstantsReport {
    Regime regime = Regime::Testing;
    double c1 = 0;
    std::size_t c1_cycles = 0;
    std::optional<double> c1_oracle;
    std::string c2_kind;  // "sawyer" or "wolff"
    double c2 = 0;
    double ratio = 1;     // c2 / c1; 1 when both vanish
    std::string witness;  // worst slot@cube or worst permutation
    std::string detail;   // module report as JSON
    std::optional<double> seconds;

    std::string to_json() const;
};

ConstantsReport run_constants(const Instance& instance, const RunOptions& options = {});

struct SweepRow {
    std::size_t instance_id = 0;
    std::uint64_t seed = 0;
    ConstantsReport report;
};

struct EquivalenceReport {
    std::vector<SweepRow> rows;
    double max_c1_over_c2 = 0;
    double max_c2_over_c1 = 0;
    std::size_t zero_coupling_violations = 0; // exactly one of c1, c2 vanishes
    std::size_t necessity_violations = 0;     // Testing: c2 > 1.02 · oracle c1
    bool passed() const { return zero_coupling_violations == 0 && necessity_violations == 0; }

    std::string to_csv() const;
    std::string to_json() const;
};

inline constexpr double oracle_gap = 0.02;

EquivalenceReport sweep(const GeneratorSpec& spec, int count, const RunOptions& options = {});

struct VerificationSummary {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::vector<std::string> witnesses; // JSON, replayable
    bool passed() const { return failures == 0; }
    int exit_code() const { return passed() ? 0 : 1; }

    std::string to_json() const;
};

/// Test hook applied to each computed triple before it is checked.
using TripleTamper = std::function<void(CarlesonTriple&)>;

inline constexpr double lemma_exponents[] = {1.5, 2.0, 2.5, 3.0, 4.0};

CarlesonData lemma_case(const GeneratorSpec& spec, std::size_t k);

VerificationSummary check_lemma(const GeneratorSpec& spec, int count, const TripleTamper& tamper = {});

/// Random nonnegative leaf functions used by the corona suite.
std::vector<LeafFunction> corona_functions(const Instance& instance, std::uint64_t seed);

VerificationSummary check_corona(const GeneratorSpec& spec, int count);

} // namespace dyadic

#endif
