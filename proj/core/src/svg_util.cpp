#include "svg_util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "cmpkit/errors.hpp"

namespace cmpkit::svg {

namespace {

constexpr double kWidth = 640.0, kHeight = 440.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 50.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::vector<double> ticks(double lo, double hi, int want = 5) {
    std::vector<double> out;
    if (!(hi > lo)) return {lo};
    const double raw = (hi - lo) / want;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (mag * m >= raw) {
            step = mag * m;
            break;
        }
    }
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-12 * step; t += step) {
        out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    }
    return out;
}

} // namespace

Plot::Plot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void Plot::add_scatter(const std::vector<std::pair<double, double>>& pts,
                       const std::string& color, const std::string& name) {
    series_.push_back({pts, color, name, false});
}

void Plot::add_curve(const std::vector<std::pair<double, double>>& pts,
                     const std::string& color, const std::string& name) {
    series_.push_back({pts, color, name, true});
}

std::string Plot::render() const {
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
    double ylo = xlo, yhi = -xlo;
    for (const auto& s : series_) {
        for (const auto& [x, y] : s.pts) {
            xlo = std::min(xlo, x);
            xhi = std::max(xhi, x);
            ylo = std::min(ylo, y);
            yhi = std::max(yhi, y);
        }
    }
    if (!std::isfinite(xlo)) {
        xlo = 0.0; xhi = 1.0; ylo = 0.0; yhi = 1.0;
    }
    if (xhi == xlo) xhi = xlo + 1.0;
    if (yhi == ylo) yhi = ylo + 1.0;
    const double xpad = 0.05 * (xhi - xlo), ypad = 0.05 * (yhi - ylo);
    xlo -= xpad; xhi += xpad; ylo -= ypad; yhi += ypad;

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xlo) / (xhi - xlo) * pw; };
    auto py = [&](double y) { return kTop + ph - (y - ylo) / (yhi - ylo) * ph; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << (int)kWidth << "\" height=\""
        << (int)kHeight << "\" viewBox=\"0 0 " << (int)kWidth << " " << (int)kHeight << "\">\n";
    out << "<rect width=\"" << (int)kWidth << "\" height=\"" << (int)kHeight
        << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">" << title_ << "</text>\n";

    // frame
    out << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw)
        << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (double t : ticks(xlo, xhi)) {
        out << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(kTop + ph) << "\" x2=\""
            << num(px(t)) << "\" y2=\"" << num(kTop + ph + 5) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << num(px(t)) << "\" y=\"" << num(kTop + ph + 20)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_label(t) << "</text>\n";
    }
    for (double t : ticks(ylo, yhi)) {
        out << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(py(t)) << "\" x2=\""
            << num(kLeft) << "\" y2=\"" << num(py(t)) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py(t) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_label(t) << "</text>\n";
    }
    out << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 12)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << x_label_
        << "</text>\n";
    out << "<text x=\"16\" y=\"" << num(kTop + ph / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 16 " << num(kTop + ph / 2) << ")\">" << y_label_
        << "</text>\n";

    double legend_y = kTop + 14.0;
    for (const auto& s : series_) {
        if (s.line) {
            out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.pts.size(); ++i) {
                if (i) out << ' ';
                out << num(px(s.pts[i].first)) << ',' << num(py(s.pts[i].second));
            }
            out << "\"/>\n";
        } else {
            for (const auto& [x, y] : s.pts) {
                out << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y))
                    << "\" r=\"3.5\" fill=\"" << s.color << "\"/>\n";
            }
        }
        if (!s.name.empty()) {
            out << "<circle cx=\"" << num(kLeft + 12) << "\" cy=\"" << num(legend_y - 4)
                << "\" r=\"3.5\" fill=\"" << s.color << "\"/>\n";
            out << "<text x=\"" << num(kLeft + 22) << "\" y=\"" << num(legend_y)
                << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.name << "</text>\n";
            legend_y += 15.0;
        }
    }
    out << "</svg>\n";
    return out.str();
}

void Plot::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write plot: " + path, path);
    out << render();
}

} // namespace cmpkit::svg
