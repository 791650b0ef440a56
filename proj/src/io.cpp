#include "dyadic/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dyadic {

using json = nlohmann::ordered_json;

namespace {

template <typename T>
T field(const json& doc, const char* name)
{
    if (!doc.contains(name))
        throw Error(std::string("missing field '") + name + "'");
    try {
        return doc.at(name).get<T>();
    } catch (const json::exception&) {
        throw Error(std::string("field '") + name + "' has the wrong type");
    }
}

void check_masses(const std::vector<double>& masses)
{
    for (double m : masses) {
        if (!std::isfinite(m))
            throw Error("non-finite leaf mass");
        if (m < 0)
            throw Error("negative leaf mass");
    }
}

} // namespace

Instance load_instance(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw Error("instance must be a JSON object");

    const auto branching = field<int>(doc, "branching");
    const auto depth = field<int>(doc, "depth");
    if (depth > 40)
        throw Error("depth out of range");
    DyadicTree tree(branching, depth);

    const auto exponents = field<std::vector<double>>(doc, "exponents");
    for (double p : exponents)
        if (!(p > 1) || !std::isfinite(p))
            throw Error("exponent must exceed 1 (got " + std::to_string(p) + ")");

    const auto raw = field<std::vector<std::vector<double>>>(doc, "measures");
    if (raw.size() != exponents.size())
        throw Error("measures and exponents have different lengths");
    if (raw.empty())
        throw Error("instance needs at least one measure");
    std::vector<Measure> measures;
    measures.reserve(raw.size());
    for (const auto& masses : raw) {
        check_masses(masses);
        measures.emplace_back(tree, masses);
    }

    Kernel kernel(tree);
    if (doc.contains("kernel")) {
        const auto& k = doc.at("kernel");
        if (!k.is_object())
            throw Error("field 'kernel' must be an object");
        for (const auto& [key, value] : k.items()) {
            if (!value.is_number())
                throw Error("kernel value at " + key + " is not a number");
            const auto q = CubeId::parse(key);
            if (!tree.contains(q))
                throw Error("kernel cube " + key + " is outside the tree");
            const double v = value.get<double>();
            if (!std::isfinite(v) || v < 0)
                throw Error("negative or non-finite kernel value at " + key);
            kernel.set(tree, q, v);
        }
    }

    Instance instance{tree, std::move(kernel), std::move(measures), exponents};
    instance.validate();
    return instance;
}

std::string save_instance(const Instance& instance)
{
    const auto& tree = instance.tree;
    json doc;
    doc["branching"] = tree.branching();
    doc["depth"] = tree.depth();
    doc["exponents"] = instance.exponents;
    json measures = json::array();
    for (const auto& m : instance.measures)
        measures.push_back(std::vector<double>(m.leaf_masses().begin(), m.leaf_masses().end()));
    doc["measures"] = std::move(measures);
    json kernel = json::object();
    const auto values = instance.kernel.values();
    for (std::size_t q = 0; q < values.size(); ++q)
        if (values[q] != 0)
            kernel[tree.cube(q).str()] = values[q];
    doc["kernel"] = std::move(kernel);
    return doc.dump(2) + "\n";
}

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path);
    out << text;
}

Instance read_instance_file(const std::string& path)
{
    return load_instance(read_text_file(path));
}

std::vector<LeafFunction> load_functions(const std::string& text, const DyadicTree& tree)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(std::string("malformed JSON: ") + e.what());
    }
    std::vector<std::vector<double>> raw;
    try {
        raw = doc.get<std::vector<std::vector<double>>>();
    } catch (const json::exception&) {
        throw Error("functions must be an array of number arrays");
    }
    std::vector<LeafFunction> out;
    for (auto& values : raw) {
        for (double v : values)
            if (!std::isfinite(v) || v < 0)
                throw Error("function values must be finite and nonnegative");
        LeafFunction f{std::move(values)};
        require_same_tree(tree, f);
        out.push_back(std::move(f));
    }
    return out;
}

} // namespace dyadic
