// Command-line front end: instance generation, form evaluation, constant
// estimation, ensemble sweeps and the lemma/corona verification suites.
//
// Exit codes: 0 success, 1 property violation, 2 usage or input error.

#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dyadic/form.hpp"
#include "dyadic/harness.hpp"
#include "dyadic/io.hpp"

namespace {

using namespace dyadic;

struct SpecFlags {
    int branching = 2;
    int depth = 3;
    int n = 2;
    std::string exponents = "testing";
    std::string family = "iid-exponential";
    double q = 0.5;
    std::string kernel = "iid-uniform";
    double gamma = 0;
    std::uint64_t seed = 1;

    void attach(CLI::App& cmd)
    {
        cmd.add_option("--branching", branching, "Branching factor b >= 2")->capture_default_str();
        cmd.add_option("--depth", depth, "Tree depth D")->capture_default_str();
        cmd.add_option("--n", n, "Number of measures")->capture_default_str();
        cmd.add_option("--exponents", exponents, "'testing', 'wolff', or a comma list such as 2,3,6")
            ->capture_default_str();
        cmd.add_option("--family", family, "Measure family")
            ->check(CLI::IsMember({"iid-exponential", "sparse"}))
            ->capture_default_str();
        cmd.add_option("--q", q, "Keep-probability of the sparse family")->capture_default_str();
        cmd.add_option("--kernel", kernel, "Kernel family")
            ->check(CLI::IsMember({"iid-uniform", "level-weighted"}))
            ->capture_default_str();
        cmd.add_option("--gamma", gamma, "Level weight exponent of level-weighted kernels")->capture_default_str();
        cmd.add_option("--seed", seed, "Random seed")->capture_default_str();
    }

    GeneratorSpec spec() const
    {
        GeneratorSpec s;
        s.branching = branching;
        s.depth = depth;
        s.n = n;
        if (exponents == "testing") {
            s.exponent_mode = ExponentMode::Testing;
        } else if (exponents == "wolff") {
            s.exponent_mode = ExponentMode::Wolff;
        } else {
            s.exponent_mode = ExponentMode::Fixed;
            std::stringstream in(exponents);
            std::string item;
            while (std::getline(in, item, ',')) {
                try {
                    s.exponents.push_back(std::stod(item));
                } catch (const std::exception&) {
                    throw Error("bad exponent '" + item + "'");
                }
            }
            if (static_cast<int>(s.exponents.size()) != n)
                throw Error("--exponents lists " + std::to_string(s.exponents.size()) + " values but --n is "
                            + std::to_string(n));
        }
        s.measure_family = family == "sparse" ? MeasureFamily::Sparse : MeasureFamily::IidExponential;
        s.sparse_q = q;
        s.kernel_family = kernel == "level-weighted" ? KernelFamily::LevelWeighted : KernelFamily::IidUniform;
        s.gamma = gamma;
        s.seed = seed;
        return s;
    }
};

struct AscentFlags {
    double tol = 1e-10;
    int restarts = 8;
    int max_iterations = 1000;
    std::uint64_t seed = 0;
    bool oracle = false;
    int resolution = 64;
    bool timing = false;

    void attach(CLI::App& cmd, bool with_seed)
    {
        cmd.add_option("--tol", tol, "Relative change that stops the ascent")->capture_default_str();
        cmd.add_option("--restarts", restarts, "Random restarts of the ascent")->capture_default_str();
        cmd.add_option("--max-iterations", max_iterations, "Ascent cycles per start")->capture_default_str();
        if (with_seed)
            cmd.add_option("--seed", seed, "Ascent seed")->capture_default_str();
        cmd.add_flag("--oracle", oracle, "Also brute-force c1 on desk-scale instances");
        cmd.add_option("--resolution", resolution, "Oracle grid resolution")->capture_default_str();
        cmd.add_flag("--timing", timing, "Record wall-clock seconds");
    }

    RunOptions options() const
    {
        RunOptions o;
        o.ascent.tolerance = tol;
        o.ascent.restarts = restarts;
        o.ascent.max_iterations = max_iterations;
        o.ascent.seed = seed;
        o.oracle = oracle;
        o.resolution = resolution;
        o.timing = timing;
        return o;
    }
};

void emit(const std::string& text, const std::string& out)
{
    if (out.empty() || out == "-")
        std::cout << text;
    else
        write_text_file(out, text);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Dyadic n-linear embedding toolkit"};
    app.require_subcommand(1);

    SpecFlags gen_flags;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "Generate a random instance");
    gen_flags.attach(*gen);
    gen->add_option("--out", gen_out, "Output file (default stdout)");

    std::string eval_instance, eval_functions, eval_out;
    auto* eval = app.add_subcommand("eval", "Evaluate the form at given functions (default: all ones)");
    eval->add_option("instance", eval_instance, "Instance JSON")->required();
    eval->add_option("--functions", eval_functions, "JSON array of leaf-value arrays");
    eval->add_option("--out", eval_out, "Output file (default stdout)");

    std::string const_instance, const_out;
    AscentFlags const_flags;
    auto* constants = app.add_subcommand("constants", "Estimate c1 and the regime's characterizing constant");
    constants->add_option("instance", const_instance, "Instance JSON")->required();
    const_flags.attach(*constants, true);
    constants->add_option("--out", const_out, "Output file (default stdout)");

    SpecFlags sweep_flags;
    AscentFlags sweep_ascent;
    int sweep_count = 10;
    std::string sweep_format = "json", sweep_out;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run constants over a seeded ensemble");
    sweep_flags.attach(*sweep_cmd);
    sweep_ascent.attach(*sweep_cmd, false);
    sweep_cmd->add_option("--count", sweep_count, "Number of instances")->capture_default_str();
    sweep_cmd->add_option("--format", sweep_format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    sweep_cmd->add_option("--out", sweep_out, "Output file (default stdout)");

    SpecFlags lemma_flags;
    int lemma_count = 1000;
    std::string lemma_out;
    auto* lemma = app.add_subcommand("check-lemma", "Verify the Carleson quantity inequalities on an ensemble");
    lemma_flags.attach(*lemma);
    lemma->add_option("--count", lemma_count, "Number of cases")->capture_default_str();
    lemma->add_option("--out", lemma_out, "Output file (default stdout)");

    SpecFlags corona_flags;
    int corona_count = 100;
    std::string corona_out;
    auto* corona = app.add_subcommand("check-corona", "Verify corona decompositions on an ensemble");
    corona_flags.attach(*corona);
    corona->add_option("--count", corona_count, "Number of instances")->capture_default_str();
    corona->add_option("--out", corona_out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*gen) {
            emit(save_instance(generate(gen_flags.spec())), gen_out);
            return 0;
        }
        if (*eval) {
            const auto instance = read_instance_file(eval_instance);
            std::vector<LeafFunction> fs;
            if (eval_functions.empty())
                fs.assign(instance.arity(), constant_function(instance.tree, 1.0));
            else
                fs = load_functions(read_text_file(eval_functions), instance.tree);
            nlohmann::ordered_json doc;
            doc["form"] = evaluate_form(instance, fs);
            doc["regime"] = std::string(to_string(regime(instance.exponents)));
            emit(doc.dump(2) + "\n", eval_out);
            return 0;
        }
        if (*constants) {
            const auto instance = read_instance_file(const_instance);
            emit(run_constants(instance, const_flags.options()).to_json() + "\n", const_out);
            return 0;
        }
        if (*sweep_cmd) {
            auto options = sweep_ascent.options();
            options.ascent.seed = sweep_flags.seed;
            const auto report = sweep(sweep_flags.spec(), sweep_count, options);
            emit(sweep_format == "csv" ? report.to_csv() : report.to_json(), sweep_out);
            return report.passed() ? 0 : 1;
        }
        if (*lemma) {
            const auto summary = check_lemma(lemma_flags.spec(), lemma_count);
            emit(summary.to_json(), lemma_out);
            if (!summary.passed())
                std::cerr << "check-lemma: " << summary.failures << " of " << summary.cases << " cases violated\n";
            return summary.exit_code();
        }
        if (*corona) {
            const auto summary = check_corona(corona_flags.spec(), corona_count);
            emit(summary.to_json(), corona_out);
            if (!summary.passed())
                std::cerr << "check-corona: " << summary.failures << " of " << summary.cases << " cases failed\n";
            return summary.exit_code();
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
