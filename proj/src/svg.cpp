#include "neuristor/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace neuristor {

namespace {

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                               "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string line_plot_svg(const CsvTable& table, const std::string& x,
                          const std::vector<std::string>& ys, const PlotOptions& options)
{
    const auto xs = table.values(x);
    std::vector<std::vector<double>> series;
    for (const auto& y : ys)
        series.push_back(table.values(y));

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (double v : xs)
        if (std::isfinite(v))
            x0 = std::min(x0, v), x1 = std::max(x1, v);
    for (const auto& s : series)
        for (double v : s)
            if (std::isfinite(v))
                y0 = std::min(y0, v), y1 = std::max(y1, v);
    if (!(x1 > x0))
        x0 -= 0.5, x1 += 0.5;
    if (!(y1 > y0))
        y0 -= 0.5, y1 += 0.5;
    if (!std::isfinite(x0) || !std::isfinite(y0))
        x0 = y0 = 0.0, x1 = y1 = 1.0;

    const double left = 80, right = 20, top = 40, bottom = 50;
    const double pw = options.width - left - right, ph = options.height - top - bottom;
    auto px = [&](double v) { return left + (v - x0) / (x1 - x0) * pw; };
    auto py = [&](double v) { return top + (1.0 - (v - y0) / (y1 - y0)) * ph; };

    std::ostringstream os;
    os.precision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width
       << "\" height=\"" << options.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!options.title.empty())
        os << "<text x=\"" << options.width / 2 << "\" y=\"22\" text-anchor=\"middle\">"
           << escape(options.title) << "</text>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = x0 + (x1 - x0) * i / 4.0, fy = y0 + (y1 - y0) * i / 4.0;
        os << "<text x=\"" << px(fx) << "\" y=\"" << top + ph + 18
           << "\" text-anchor=\"middle\">" << format_number(fx) << "</text>\n";
        os << "<text x=\"" << left - 6 << "\" y=\"" << py(fy) + 4 << "\" text-anchor=\"end\">"
           << format_number(fy) << "</text>\n";
    }
    os << "<text x=\"" << left + pw / 2 << "\" y=\"" << options.height - 8
       << "\" text-anchor=\"middle\">" << escape(x) << "</text>\n";

    const std::size_t n = xs.size();
    const std::size_t stride =
        std::max<std::size_t>(1, (n + options.max_points - 1) / std::max<std::size_t>(1, options.max_points));
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kColors[s % (sizeof kColors / sizeof *kColors)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < n; i += stride) {
            if (!std::isfinite(xs[i]) || !std::isfinite(series[s][i]))
                continue;
            os << px(xs[i]) << ',' << py(series[s][i]) << ' ';
        }
        os << "\"/>\n";
        os << "<text x=\"" << left + 8 << "\" y=\"" << top + 16 + 14 * s << "\" fill=\"" << color
           << "\">" << escape(ys[s]) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace neuristor
