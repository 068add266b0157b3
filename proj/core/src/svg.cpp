#include <algorithm>
#include <cmath>
#include <sstream>

#include "alignability/analysis.hpp"
#include "alignability/error.hpp"
#include "alignability/util.hpp"

namespace alignability {

namespace {

constexpr double kWidth = 640.0, kHeight = 480.0;
constexpr double kLeft = 64.0, kRight = 16.0, kTop = 16.0, kBottom = 48.0;

std::string num(double v) { return format_fixed(v, 2); }

}  // namespace

std::string render_scatter_svg(const std::vector<ScatterPoint>& points,
                               std::optional<std::pair<double, double>> fit,
                               const std::string& x_label, const std::string& y_label,
                               const std::string& metadata) {
    if (points.empty()) fail("data.empty", "scatter plot needs at least one point");

    double xmin = points[0].x, xmax = points[0].x, ymin = points[0].y, ymax = points[0].y;
    for (const auto& p : points) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    if (fit) {
        ymin = std::min({ymin, fit->first * xmin + fit->second, fit->first * xmax + fit->second});
        ymax = std::max({ymax, fit->first * xmin + fit->second, fit->first * xmax + fit->second});
    }
    double xpad = (xmax - xmin) == 0.0 ? 1.0 : 0.05 * (xmax - xmin);
    double ypad = (ymax - ymin) == 0.0 ? 1.0 : 0.05 * (ymax - ymin);
    xmin -= xpad;
    xmax += xpad;
    ymin -= ypad;
    ymax += ypad;

    auto sx = [&](double x) {
        return kLeft + (x - xmin) / (xmax - xmin) * (kWidth - kLeft - kRight);
    };
    auto sy = [&](double y) {
        return kHeight - kBottom - (y - ymin) / (ymax - ymin) * (kHeight - kTop - kBottom);
    };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    if (!metadata.empty()) svg << "<!-- " << metadata << " -->\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
        << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";

    // axes
    svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kHeight - kBottom) << "\" x2=\""
        << num(kWidth - kRight) << "\" y2=\"" << num(kHeight - kBottom)
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft)
        << "\" y2=\"" << num(kHeight - kBottom) << "\" stroke=\"black\"/>\n";

    // ticks
    for (int t = 0; t <= 4; ++t) {
        double fx = xmin + (xmax - xmin) * t / 4.0;
        double fy = ymin + (ymax - ymin) * t / 4.0;
        char xlab[32], ylab[32];
        std::snprintf(xlab, sizeof(xlab), "%.3g", fx);
        std::snprintf(ylab, sizeof(ylab), "%.3g", fy);
        svg << "<line x1=\"" << num(sx(fx)) << "\" y1=\"" << num(kHeight - kBottom) << "\" x2=\""
            << num(sx(fx)) << "\" y2=\"" << num(kHeight - kBottom + 5)
            << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << num(sx(fx)) << "\" y=\"" << num(kHeight - kBottom + 18)
            << "\" font-size=\"11\" text-anchor=\"middle\">" << xlab << "</text>\n";
        svg << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(sy(fy)) << "\" x2=\""
            << num(kLeft) << "\" y2=\"" << num(sy(fy)) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(sy(fy) + 4)
            << "\" font-size=\"11\" text-anchor=\"end\">" << ylab << "</text>\n";
    }

    // axis labels
    svg << "<text x=\"" << num((kLeft + kWidth - kRight) / 2.0) << "\" y=\""
        << num(kHeight - 12.0) << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label
        << "</text>\n";
    svg << "<text x=\"14\" y=\"" << num((kTop + kHeight - kBottom) / 2.0)
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
        << num((kTop + kHeight - kBottom) / 2.0) << ")\">" << y_label << "</text>\n";

    if (fit) {
        double y1 = fit->first * xmin + fit->second;
        double y2 = fit->first * xmax + fit->second;
        svg << "<line x1=\"" << num(sx(xmin)) << "\" y1=\"" << num(sy(y1)) << "\" x2=\""
            << num(sx(xmax)) << "\" y2=\"" << num(sy(y2))
            << "\" stroke=\"orange\" stroke-width=\"2\"/>\n";
    }

    // same-script pairs as crosses, different-script as dots
    for (const auto& p : points) {
        double cx = sx(p.x), cy = sy(p.y);
        if (p.same_script) {
            svg << "<path class=\"marker\" d=\"M" << num(cx - 4) << " " << num(cy - 4) << " L"
                << num(cx + 4) << " " << num(cy + 4) << " M" << num(cx - 4) << " " << num(cy + 4)
                << " L" << num(cx + 4) << " " << num(cy - 4)
                << "\" stroke=\"teal\" stroke-width=\"2\" fill=\"none\"/>\n";
        } else {
            svg << "<circle class=\"marker\" cx=\"" << num(cx) << "\" cy=\"" << num(cy)
                << "\" r=\"4\" fill=\"magenta\"/>\n";
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace alignability
