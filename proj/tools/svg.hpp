#pragma once

#include <string>
#include <vector>

namespace svg {

struct BarSeries {
    std::string label;
    std::string color;
    std::vector<double> values;
};

// Grouped bar chart: one group per category, one bar per series.
struct BarChart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<std::string> categories;
    std::vector<BarSeries> series;
};

std::string render(const BarChart& chart);
void write(const std::string& path, const BarChart& chart);

} // namespace svg
