#ifndef DYADIC_IO_HPP
#define DYADIC_IO_HPP

#include <string>
#include <vector>

#include "dyadic/core.hpp"

namespace dyadic {

// Instance schema:
//   {"branching": int, "depth": int, "exponents": [float...],
//    "measures": [[leaf masses...]...], "kernel": {"level:index": float, ...}}
// Kernel entries equal to zero are omitted on save.

Instance load_instance(const std::string& text);
std::string save_instance(const Instance& instance);

Instance read_instance_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

/// Functions file: a JSON array of leaf-value arrays, one per measure.
std::vector<LeafFunction> load_functions(const std::string& text, const DyadicTree& tree);

} // namespace dyadic

#endif
