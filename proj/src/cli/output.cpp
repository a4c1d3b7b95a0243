#include "qgas/cli/output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace qgas::cli {

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

namespace {

// Fixed short form for SVG coordinates.
std::string svg_coord(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.2f", value);
    return buffer;
}

} // namespace

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        fs::create_directories(target.parent_path());
    }
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        out << content;
        if (!out) {
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, target);
}

std::string zeros_poly_csv(const std::vector<ZeroRow>& rows) {
    std::string out = "re,im,abs,residual,kind\n";
    for (const auto& row : rows) {
        out += format_double(row.re) + "," + format_double(row.im) + "," +
               format_double(row.abs) + "," + format_double(row.residual) + "," +
               row.kind + "\n";
    }
    return out;
}

std::string zeros_beta_csv(const std::vector<BetaRow>& rows) {
    std::string out = "beta,beta1,residual\n";
    for (const auto& row : rows) {
        out += format_double(row.beta) + "," + format_double(row.beta1) + "," +
               format_double(row.residual) + "\n";
    }
    return out;
}

std::string correlator_csv(const std::vector<TauRow>& rows) {
    std::string out = "tau,re,im,abs\n";
    for (const auto& row : rows) {
        out += format_double(row.tau) + "," + format_double(row.re) + "," +
               format_double(row.im) + "," + format_double(row.abs) + "\n";
    }
    return out;
}

namespace {

constexpr int kSvgSize = 640;
constexpr double kSvgMargin = 40.0;

struct SvgFrame {
    double x_min, x_max, y_min, y_max;

    double x(double v) const {
        return kSvgMargin + (v - x_min) / (x_max - x_min) * (kSvgSize - 2 * kSvgMargin);
    }
    double y(double v) const {
        return kSvgSize - kSvgMargin -
               (v - y_min) / (y_max - y_min) * (kSvgSize - 2 * kSvgMargin);
    }
};

std::string svg_header() {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
           "viewBox=\"0 0 640 640\">\n"
           "<rect width=\"640\" height=\"640\" fill=\"white\"/>\n";
}

std::string svg_axes(const SvgFrame& frame) {
    std::string out;
    if (frame.x_min < 0.0 && frame.x_max > 0.0) {
        const std::string x = svg_coord(frame.x(0.0));
        out += "<line x1=\"" + x + "\" y1=\"" + svg_coord(frame.y(frame.y_min)) +
               "\" x2=\"" + x + "\" y2=\"" + svg_coord(frame.y(frame.y_max)) +
               "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
    }
    if (frame.y_min < 0.0 && frame.y_max > 0.0) {
        const std::string y = svg_coord(frame.y(0.0));
        out += "<line x1=\"" + svg_coord(frame.x(frame.x_min)) + "\" y1=\"" + y +
               "\" x2=\"" + svg_coord(frame.x(frame.x_max)) + "\" y2=\"" + y +
               "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
    }
    return out;
}

} // namespace

std::string zeros_poly_svg(const std::vector<ZeroRow>& rows) {
    double extent = 1.25;
    for (const auto& row : rows) {
        extent = std::max(extent, 1.1 * std::max(std::abs(row.re), std::abs(row.im)));
    }
    const SvgFrame frame{-extent, extent, -extent, extent};

    std::string out = svg_header();
    out += svg_axes(frame);
    // unit circle for reference
    const double r_px = frame.x(1.0) - frame.x(0.0);
    out += "<circle cx=\"" + svg_coord(frame.x(0.0)) + "\" cy=\"" +
           svg_coord(frame.y(0.0)) + "\" r=\"" + svg_coord(r_px) +
           "\" fill=\"none\" stroke=\"#888888\" stroke-width=\"1\" "
           "stroke-dasharray=\"4 3\"/>\n";
    for (const auto& row : rows) {
        const std::string cx = svg_coord(frame.x(row.re));
        const std::string cy = svg_coord(frame.y(row.im));
        if (row.kind == "fisher") {
            out += "<circle cx=\"" + cx + "\" cy=\"" + cy +
                   "\" r=\"4\" fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"1.5\"/>\n";
        } else {
            const double x = frame.x(row.re);
            const double y = frame.y(row.im);
            out += "<line x1=\"" + svg_coord(x - 3.5) + "\" y1=\"" + svg_coord(y - 3.5) +
                   "\" x2=\"" + svg_coord(x + 3.5) + "\" y2=\"" + svg_coord(y + 3.5) +
                   "\" stroke=\"#bf3f1f\" stroke-width=\"1.5\"/>\n";
            out += "<line x1=\"" + svg_coord(x - 3.5) + "\" y1=\"" + svg_coord(y + 3.5) +
                   "\" x2=\"" + svg_coord(x + 3.5) + "\" y2=\"" + svg_coord(y - 3.5) +
                   "\" stroke=\"#bf3f1f\" stroke-width=\"1.5\"/>\n";
        }
    }
    out += "</svg>\n";
    return out;
}

std::string zeros_beta_svg(const std::vector<BetaRow>& rows) {
    double x_ext = 0.5, y_ext = 1.0;
    for (const auto& row : rows) {
        x_ext = std::max(x_ext, 1.1 * std::abs(row.beta));
        y_ext = std::max(y_ext, 1.1 * std::abs(row.beta1));
    }
    const SvgFrame frame{-x_ext, x_ext, -y_ext, y_ext};
    std::string out = svg_header();
    out += svg_axes(frame);
    for (const auto& row : rows) {
        out += "<circle cx=\"" + svg_coord(frame.x(row.beta)) + "\" cy=\"" +
               svg_coord(frame.y(row.beta1)) +
               "\" r=\"4\" fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"1.5\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

} // namespace qgas::cli
