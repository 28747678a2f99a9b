#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace svg {

namespace {

constexpr double width = 720;
constexpr double height = 420;
constexpr double left = 80;
constexpr double right = 20;
constexpr double top = 40;
constexpr double bottom = 60;

std::string num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string label(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

// Round the axis maximum up to 1, 2 or 5 times a power of ten.
double nice_ceiling(double x)
{
    if (!(x > 0))
        return 1;
    const double e = std::pow(10.0, std::floor(std::log10(x)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * e >= x)
            return m * e;
    return 10 * e;
}

} // namespace

std::string render(const BarChart& chart)
{
    double ymax = 0;
    for (const auto& s : chart.series)
        for (double v : s.values)
            if (std::isfinite(v))
                ymax = std::max(ymax, v);
    ymax = nice_ceiling(ymax);

    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    const double y0 = top + plot_h;
    const std::size_t groups = std::max<std::size_t>(chart.categories.size(), 1);
    const std::size_t bars = std::max<std::size_t>(chart.series.size(), 1);
    const double group_w = plot_w / static_cast<double>(groups);
    const double bar_w = 0.8 * group_w / static_cast<double>(bars);

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << num(width / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(chart.title)
      << "</text>\n";

    for (int t = 0; t <= 5; ++t) {
        const double v = ymax * t / 5;
        const double y = y0 - plot_h * t / 5;
        o << "<line x1=\"" << num(left) << "\" y1=\"" << num(y) << "\" x2=\"" << num(width - right) << "\" y2=\""
          << num(y) << "\" stroke=\"#ddd\"/>\n";
        o << "<text x=\"" << num(left - 6) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << label(v)
          << "</text>\n";
    }

    for (std::size_t g = 0; g < chart.categories.size(); ++g) {
        const double gx = left + group_w * static_cast<double>(g) + 0.1 * group_w;
        for (std::size_t s = 0; s < chart.series.size(); ++s) {
            const auto& series = chart.series[s];
            if (g >= series.values.size() || !std::isfinite(series.values[g]))
                continue;
            const double h = plot_h * series.values[g] / ymax;
            o << "<rect x=\"" << num(gx + bar_w * static_cast<double>(s)) << "\" y=\"" << num(y0 - h)
              << "\" width=\"" << num(bar_w) << "\" height=\"" << num(h) << "\" fill=\"" << series.color << "\"/>\n";
        }
        o << "<text x=\"" << num(left + group_w * (static_cast<double>(g) + 0.5)) << "\" y=\"" << num(y0 + 16)
          << "\" text-anchor=\"middle\">" << escape(chart.categories[g]) << "</text>\n";
    }

    o << "<line x1=\"" << num(left) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(width - right) << "\" y2=\""
      << num(y0) << "\" stroke=\"black\"/>\n";
    o << "<line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\"" << num(left) << "\" y2=\"" << num(y0)
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << num(left + plot_w / 2) << "\" y=\"" << num(height - 14) << "\" text-anchor=\"middle\">"
      << escape(chart.x_label) << "</text>\n";
    o << "<text x=\"16\" y=\"" << num(top + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << num(top + plot_h / 2) << ")\">" << escape(chart.y_label) << "</text>\n";

    for (std::size_t s = 0; s < chart.series.size(); ++s) {
        const double lx = width - right - 170;
        const double ly = top + 8 + 18 * static_cast<double>(s);
        o << "<rect x=\"" << num(lx) << "\" y=\"" << num(ly) << "\" width=\"12\" height=\"12\" fill=\""
          << chart.series[s].color << "\"/>\n";
        o << "<text x=\"" << num(lx + 18) << "\" y=\"" << num(ly + 10) << "\">" << escape(chart.series[s].label)
          << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

void write(const std::string& path, const BarChart& chart)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write " + path);
    f << render(chart);
}

} // namespace svg
