#pragma once

#include <string>

namespace hhwalk {

/// node2vec kernel weights: `alpha` for backtracking to the previous node,
/// `beta` for a neighbor shared with the previous node, `gamma` otherwise.
struct Node2vecParams {
    double alpha = 1.0;
    double beta = 1.0;
    double gamma = 1.0;

    /// Throws unless all weights are finite and non-negative (or strictly
    /// positive when `strict`).
    void validate(bool strict = false) const;
    std::string to_string() const;
};

} // namespace hhwalk
