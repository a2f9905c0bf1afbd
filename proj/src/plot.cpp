#include "strauss/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace strauss {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
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

struct Frame {
    double x0, x1, y0, y1;

    double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
    double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

void pad(double& lo, double& hi) {
    if (hi == lo) {
        lo -= 0.5;
        hi += 0.5;
        return;
    }
    const double m = 0.05 * (hi - lo);
    lo -= m;
    hi += m;
}

Frame make_frame(const std::vector<double>& x, const std::vector<double>& y) {
    Frame f{*std::min_element(x.begin(), x.end()), *std::max_element(x.begin(), x.end()),
            *std::min_element(y.begin(), y.end()), *std::max_element(y.begin(), y.end())};
    pad(f.x0, f.x1);
    pad(f.y0, f.y1);
    return f;
}

std::string header(const std::string& title) {
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
                      num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"15\">" + escape(title) + "</text>\n";
    return out;
}

std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel, bool log_y) {
    std::string out;
    const double xa = kLeft, xb = kWidth - kRight, ya = kHeight - kBottom, yb = kTop;
    out += "<g stroke=\"black\" stroke-width=\"1\">\n";
    out += "<line x1=\"" + num(xa) + "\" y1=\"" + num(ya) + "\" x2=\"" + num(xb) + "\" y2=\"" + num(ya) + "\"/>\n";
    out += "<line x1=\"" + num(xa) + "\" y1=\"" + num(ya) + "\" x2=\"" + num(xa) + "\" y2=\"" + num(yb) + "\"/>\n";
    out += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = f.x0 + (f.x1 - f.x0) * i / 4.0;
        const double yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
        out += "<text x=\"" + num(f.px(xv)) + "\" y=\"" + num(ya + 16) + "\" text-anchor=\"middle\">" + label(xv) +
               "</text>\n";
        out += "<text x=\"" + num(xa - 6) + "\" y=\"" + num(f.py(yv) + 4) + "\" text-anchor=\"end\">" +
               label(log_y ? std::pow(10.0, yv) : yv) + "</text>\n";
    }
    out += "<text x=\"" + num((xa + xb) / 2) + "\" y=\"" + num(kHeight - 12) + "\" text-anchor=\"middle\">" +
           escape(xlabel) + "</text>\n";
    out += "<text x=\"16\" y=\"" + num((ya + yb) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           num((ya + yb) / 2) + ")\">" + escape(ylabel) + "</text>\n";
    out += "</g>\n";
    return out;
}

std::string markers(const Frame& f, const std::vector<double>& x, const std::vector<double>& y) {
    std::string out = "<g fill=\"#1f77b4\">\n";
    for (std::size_t i = 0; i < x.size(); ++i)
        out += "<circle cx=\"" + num(f.px(x[i])) + "\" cy=\"" + num(f.py(y[i])) + "\" r=\"4\"/>\n";
    out += "</g>\n";
    return out;
}

std::string line(const Frame& f, double slope, double intercept, const std::string& color, const std::string& dash) {
    const double ya = intercept + slope * f.x0;
    const double yb = intercept + slope * f.x1;
    std::string out = "<line x1=\"" + num(f.px(f.x0)) + "\" y1=\"" + num(f.py(ya)) + "\" x2=\"" + num(f.px(f.x1)) +
                      "\" y2=\"" + num(f.py(yb)) + "\" stroke=\"" + color + "\" stroke-width=\"1.5\"";
    if (!dash.empty()) out += " stroke-dasharray=\"" + dash + "\"";
    return out + "/>\n";
}

}  // namespace

std::string fit_svg(const ScalingFit& fit, const std::string& title) {
    if (fit.x.empty()) throw std::invalid_argument("fit_svg: no points");
    const Frame f = make_frame(fit.x, fit.y);
    std::string out = header(title);
    out += "<defs><clipPath id=\"plot\"><rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" +
           num(kWidth - kLeft - kRight) + "\" height=\"" + num(kHeight - kTop - kBottom) + "\"/></clipPath></defs>\n";
    out += axes(f, "log(1/eps)", "log T", false);
    out += "<g clip-path=\"url(#plot)\">\n";
    if (std::isfinite(fit.slope)) out += line(f, fit.slope, fit.intercept, "#d62728", "");
    if (std::isfinite(fit.theory_exponent) && fit.theory_exponent > 0.0) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < fit.x.size(); ++i) {
            mx += fit.x[i];
            my += fit.y[i];
        }
        mx /= fit.x.size();
        my /= fit.x.size();
        out += line(f, fit.theory_exponent, my - fit.theory_exponent * mx, "#2ca02c", "6 4");
    }
    out += "</g>\n";
    out += markers(f, fit.x, fit.y);
    out += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    out += "<text x=\"" + num(kLeft + 10) + "\" y=\"" + num(kTop + 14) + "\" fill=\"#d62728\">fit slope " +
           label(fit.slope) + ", r2 " + label(fit.r_squared) + "</text>\n";
    out += "<text x=\"" + num(kLeft + 10) + "\" y=\"" + num(kTop + 30) + "\" fill=\"#2ca02c\">theory slope " +
           label(fit.theory_exponent) + "</text>\n";
    out += "</g>\n</svg>\n";
    return out;
}

bool wants_log_axis(const std::vector<double>& y) {
    if (y.empty()) return false;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (double v : y) {
        if (!(v > 0.0)) return false;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi / lo > 100.0;
}

std::string series_svg(const std::vector<double>& x, const std::vector<double>& y, const std::string& title) {
    if (x.empty() || x.size() != y.size()) throw std::invalid_argument("series_svg: empty or mismatched input");
    const bool log_y = wants_log_axis(y);
    std::vector<double> ys = y;
    if (log_y)
        for (double& v : ys) v = std::log10(v);
    const Frame f = make_frame(x, ys);
    std::string out = header(title);
    out += axes(f, "T or M", log_y ? "ratio (log scale)" : "ratio", log_y);
    std::string path;
    for (std::size_t i = 0; i < x.size(); ++i)
        path += (i == 0 ? "M" : " L") + num(f.px(x[i])) + " " + num(f.py(ys[i]));
    out += "<path d=\"" + path + "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.2\"/>\n";
    out += markers(f, x, ys);
    out += "</svg>\n";
    return out;
}

}  // namespace strauss
