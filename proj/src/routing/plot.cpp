#include "argnet/routing/plot.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "argnet/util/json_io.hpp"

namespace argnet::routing {

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_curve_svg(const RoutingCurve& c, const std::string& title) {
    double x0 = 0.5, x1 = 1.0;
    if (!c.points.empty()) {
        x0 = std::min(x0, c.points.front().threshold);
        x1 = std::max(x1, c.points.back().threshold);
    }
    if (x1 <= x0) x1 = x0 + 1.0;
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return kTop + (1.0 - y) * ph; };

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
        "font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        kWidth, kHeight);
    svg += fmt::format("<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n", kWidth / 2,
                       escape(title));
    for (int i = 0; i <= 5; ++i) {
        const double y = i / 5.0;
        svg += fmt::format("<line x1=\"{}\" y1=\"{:.1f}\" x2=\"{}\" y2=\"{:.1f}\" stroke=\"#ddd\"/>\n", kLeft, py(y),
                           kWidth - kRight, py(y));
        svg += fmt::format("<text x=\"{}\" y=\"{:.1f}\" text-anchor=\"end\">{:.1f}</text>\n", kLeft - 6, py(y) + 4, y);
        const double x = x0 + (x1 - x0) * i / 5.0;
        svg += fmt::format("<text x=\"{:.1f}\" y=\"{}\" text-anchor=\"middle\">{:.2f}</text>\n", px(x),
                           kHeight - kBottom + 18, x);
    }
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">confidence threshold</text>\n",
                       kLeft + pw / 2, kHeight - 10);

    auto polyline = [&](auto value, const char* colour) {
        std::string pts;
        for (const auto& p : c.points) pts += fmt::format("{:.1f},{:.1f} ", px(p.threshold), py(value(p)));
        return fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n", colour, pts);
    };
    svg += polyline([](const RoutingPoint& p) { return p.metrics.macro_f1; }, "#1f77b4");
    svg += polyline([](const RoutingPoint& p) { return p.fraction_routed; }, "#ff7f0e");
    svg += fmt::format("<text x=\"{}\" y=\"{}\" fill=\"#1f77b4\">macro F1</text>\n", kLeft + 10, kTop + 14);
    svg += fmt::format("<text x=\"{}\" y=\"{}\" fill=\"#ff7f0e\">fraction routed</text>\n", kLeft + 10, kTop + 30);
    svg += "</svg>\n";
    return svg;
}

void write_curve_svg(const std::filesystem::path& path, const RoutingCurve& c, const std::string& title) {
    util::write_text_atomic(path, render_curve_svg(c, title));
}

}  // namespace argnet::routing
