#ifndef DYADIC_CORE_HPP
#define DYADIC_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dyadic {

/// Raised on invalid input or violated preconditions.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A cube of the truncated dyadic tree: `level` 0 is the root Q0,
/// `index` runs over [0, b^level) left to right.
struct CubeId {
    int level = 0;
    std::int64_t index = 0;

    friend bool operator==(const CubeId&, const CubeId&) = default;
    friend auto operator<=>(const CubeId&, const CubeId&) = default;

    std::string str() const;
    static CubeId parse(const std::string& text);
};

/// Finite b-ary tree of depth D standing in for the dyadic cubes inside Q0.
///
/// Cubes are addressed either by CubeId or by a flat position in
/// level-major, index-minor order (root first, leaves last). All per-cube
/// arrays in this library use the flat order.
class DyadicTree {
public:
    DyadicTree(int branching, int depth);

    int branching() const { return branching_; }
    int depth() const { return depth_; }
    std::size_t cube_count() const { return level_offset_.back(); }
    std::size_t leaf_count() const { return leaf_count_; }
    std::size_t level_size(int level) const;
    std::size_t level_offset(int level) const { return level_offset_[static_cast<std::size_t>(level)]; }

    bool contains(const CubeId& q) const;
    void require(const CubeId& q) const;
    bool is_leaf(const CubeId& q) const { return q.level == depth_; }

    std::size_t flat(const CubeId& q) const;
    CubeId cube(std::size_t flat) const;

    CubeId root() const { return {0, 0}; }
    CubeId parent(const CubeId& q) const;
    std::vector<CubeId> children(const CubeId& q) const;

    /// Leaves under q occupy the half-open range [first, last).
    std::pair<std::size_t, std::size_t> leaf_range(const CubeId& q) const;

    /// True when inner ⊆ outer.
    bool is_descendant(const CubeId& inner, const CubeId& outer) const;

    /// The ancestor of q at `level` (q itself if level == q.level).
    CubeId ancestor(const CubeId& q, int level) const;

    friend bool operator==(const DyadicTree& a, const DyadicTree& b)
    {
        return a.branching_ == b.branching_ && a.depth_ == b.depth_;
    }

private:
    int branching_;
    int depth_;
    std::size_t leaf_count_;
    std::vector<std::size_t> level_offset_; // depth + 2 entries
};

/// Nonnegative leaf masses with cached per-cube totals.
class Measure {
public:
    Measure(const DyadicTree& tree, std::vector<double> leaf_masses);

    std::span<const double> leaf_masses() const { return leaf_masses_; }
    std::span<const double> cube_masses() const { return cube_masses_; }
    double total() const { return cube_masses_.front(); }
    double operator[](std::size_t flat) const { return cube_masses_[flat]; }
    std::size_t positive_leaf_count() const;

    Measure scaled(const DyadicTree& tree, double t) const;

    friend bool operator==(const Measure& a, const Measure& b) { return a.leaf_masses_ == b.leaf_masses_; }

private:
    std::vector<double> leaf_masses_;
    std::vector<double> cube_masses_;
};

/// Leaf-constant function; the values are its restriction to the leaves.
struct LeafFunction {
    std::vector<double> values;

    friend bool operator==(const LeafFunction&, const LeafFunction&) = default;
};

/// Cube weights K(Q) >= 0 stored densely in flat order; absent cubes are 0.
class Kernel {
public:
    explicit Kernel(const DyadicTree& tree);
    Kernel(const DyadicTree& tree, std::vector<double> values);

    double operator[](std::size_t flat) const { return values_[flat]; }
    double at(const DyadicTree& tree, const CubeId& q) const { return values_[tree.flat(q)]; }
    void set(const DyadicTree& tree, const CubeId& q, double value);
    std::span<const double> values() const { return values_; }
    bool is_zero() const;

    friend bool operator==(const Kernel&, const Kernel&) = default;

private:
    std::vector<double> values_;
};

/// The full datum of the embedding inequality: tree, kernel, n measures and
/// exponents p_i in (1, inf).
struct Instance {
    DyadicTree tree;
    Kernel kernel;
    std::vector<Measure> measures;
    std::vector<double> exponents;

    std::size_t arity() const { return measures.size(); }
    void validate() const;

    friend bool operator==(const Instance&, const Instance&) = default;
};

std::vector<CubeId> children(const DyadicTree& tree, const CubeId& q);

double measure_of(const DyadicTree& tree, const Measure& sigma, const CubeId& q);

double integrate(const DyadicTree& tree, const LeafFunction& f, const Measure& sigma, const CubeId& q);

double lp_norm(const LeafFunction& f, const Measure& sigma, double p);

double dual_exponent(double p);

/// Dyadic maximal function; zero-mass cubes are skipped and zero-mass leaves
/// report 0.
LeafFunction maximal_function(const DyadicTree& tree, const LeafFunction& f, const Measure& sigma);

// Tree passes shared by every module. These are the parallel kernels.

/// Per-cube totals of leaf values, accumulated bottom-up in index order.
std::vector<double> subtree_sums(const DyadicTree& tree, std::span<const double> leaf_values);

/// S(Q) = Σ_{Q' ⊆ Q} w(Q') for per-cube weights w (inclusive).
std::vector<double> cube_subtree_sums(const DyadicTree& tree, std::span<const double> cube_weights);

/// Leaf values Σ_{Q ∋ x} w(Q), i.e. the leaf restriction of Σ_Q w(Q) 1_Q.
std::vector<double> ancestor_sums(const DyadicTree& tree, std::span<const double> cube_weights);

/// Per-cube integrals ∫_Q f dσ.
std::vector<double> cube_integrals(const DyadicTree& tree, const LeafFunction& f, const Measure& sigma);

LeafFunction constant_function(const DyadicTree& tree, double value);

void require_same_tree(const DyadicTree& tree, const LeafFunction& f);

} // namespace dyadic

#endif
