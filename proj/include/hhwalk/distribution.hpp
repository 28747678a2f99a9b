#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hhwalk {

/// Probability vector over nodes or directed edges.
struct StationaryDistribution {
    std::vector<double> probabilities;

    std::size_t size() const { return probabilities.size(); }
    double operator[](std::size_t i) const { return probabilities[i]; }
    double sum() const;
};

double total_variation(std::span<const double> a, std::span<const double> b);
double max_abs_diff(std::span<const double> a, std::span<const double> b);

inline double total_variation(const StationaryDistribution& a, const StationaryDistribution& b)
{
    return total_variation(a.probabilities, b.probabilities);
}
inline double max_abs_diff(const StationaryDistribution& a, const StationaryDistribution& b)
{
    return max_abs_diff(a.probabilities, b.probabilities);
}

} // namespace hhwalk
