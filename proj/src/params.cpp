#include "hhwalk/params.hpp"

#include "hhwalk/distribution.hpp"
#include "hhwalk/error.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace hhwalk {

void Node2vecParams::validate(bool strict) const
{
    for (double w : {alpha, beta, gamma}) {
        require(std::isfinite(w), "node2vec weights must be finite (" + to_string() + ")");
        require(strict ? w > 0 : w >= 0,
                std::string("node2vec weights must be ") + (strict ? "positive" : "non-negative") + " (" + to_string() + ")");
    }
}

std::string Node2vecParams::to_string() const
{
    std::ostringstream os;
    os.precision(17);
    os << "alpha=" << alpha << " beta=" << beta << " gamma=" << gamma;
    return os.str();
}

double StationaryDistribution::sum() const
{
    return std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
}

double total_variation(std::span<const double> a, std::span<const double> b)
{
    require(a.size() == b.size(), "distribution sizes differ");
    double acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += std::abs(a[i] - b[i]);
    return 0.5 * acc;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b)
{
    require(a.size() == b.size(), "distribution sizes differ");
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace hhwalk
