#include "vmflow/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "vmflow/errors.hpp"

namespace vmflow {

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (const char ch : s) {
        h ^= static_cast<unsigned char>(ch);
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOError("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IOError("write failed: " + path);
}

RunManifest make_manifest(std::string command, std::string canonical_inputs,
                          std::vector<int> grid_sizes,
                          std::map<std::string, double> tolerances,
                          std::vector<std::string> output_paths) {
    RunManifest m;
    m.command = std::move(command);
    m.canonical_inputs = std::move(canonical_inputs);
    m.hash = fnv1a64(m.canonical_inputs);
    m.grid_sizes = std::move(grid_sizes);
    m.tolerances = std::move(tolerances);
    m.output_paths = std::move(output_paths);
    m.tool_version = kToolVersion;
    return m;
}

void write_manifest_json(const RunManifest& manifest, const std::string& path) {
    nlohmann::ordered_json j;
    j["command"] = manifest.command;
    j["hash"] = hash_hex(manifest.hash);
    j["grid_sizes"] = manifest.grid_sizes;
    j["tolerances"] = manifest.tolerances;
    j["output_paths"] = manifest.output_paths;
    j["wall_clock_seconds"] = manifest.wall_clock_seconds;
    j["tool_version"] = manifest.tool_version;
    j["canonical_inputs"] = manifest.canonical_inputs;
    write_text_file(path, j.dump(2) + "\n");
}

namespace {

std::string svg_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

bool emit_profile_svg(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<double>& x, const std::vector<double>& y,
                      std::uint64_t manifest_hash, std::string* message) {
    if (x.empty() || y.empty() || x.size() != y.size()) {
        if (message)
            *message = x.empty() || y.empty()
                           ? "svg skipped: no data points"
                           : "svg skipped: x/y length mismatch";
        return false;
    }
    for (const double v : y)
        if (!std::isfinite(v)) {
            if (message) *message = "svg skipped: non-finite values in data";
            return false;
        }

    const double width = 640.0, height = 480.0;
    const double ml = 72.0, mr = 24.0, mt = 40.0, mb = 56.0;
    double x0 = *std::min_element(x.begin(), x.end());
    double x1 = *std::max_element(x.begin(), x.end());
    double y0 = *std::min_element(y.begin(), y.end());
    double y1 = *std::max_element(y.begin(), y.end());
    if (x1 == x0) {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if (y1 == y0) {
        const double pad = 0.1 * std::abs(y0) + 1.0;
        y0 -= pad;
        y1 += pad;
    }
    const auto px = [&](double v) { return ml + (v - x0) / (x1 - x0) * (width - ml - mr); };
    const auto py = [&](double v) {
        return height - mb - (v - y0) / (y1 - y0) * (height - mt - mb);
    };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<!-- manifest-hash: " << hash_hex(manifest_hash) << " -->\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
        << "\">\n"
        << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "  <text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

    // Axes with min/max tick labels.
    svg << "  <line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\""
        << width - mr << "\" y2=\"" << height - mb
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n"
        << "  <line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << height - mb << "\" stroke=\"black\" stroke-width=\"1\"/>\n"
        << "  <text x=\"" << ml << "\" y=\"" << height - mb + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << svg_num(x0) << "</text>\n"
        << "  <text x=\"" << width - mr << "\" y=\"" << height - mb + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << svg_num(x1) << "</text>\n"
        << "  <text x=\"" << ml - 6 << "\" y=\"" << height - mb + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << svg_num(y0) << "</text>\n"
        << "  <text x=\"" << ml - 6 << "\" y=\"" << mt + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << svg_num(y1) << "</text>\n"
        << "  <text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << x_label << "</text>\n"
        << "  <text x=\"16\" y=\"" << (mt + height - mb) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 16 " << (mt + height - mb) / 2 << ")\">" << y_label
        << "</text>\n";

    svg << "  <polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) svg << " ";
        svg << svg_num(px(x[i])) << "," << svg_num(py(y[i]));
    }
    svg << "\"/>\n</svg>\n";

    write_text_file(path, svg.str());
    return true;
}

}  // namespace vmflow
