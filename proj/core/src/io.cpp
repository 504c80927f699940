#include "biphoton/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace biphoton {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

bool spatial_kind(ScanKind k) {
    return k == ScanKind::same_direction || k == ScanKind::opposite_direction;
}

std::string compact_json(const std::string& text) {
    return nlohmann::json::parse(text).dump();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

}  // namespace

std::string scan_csv_text(const ScanResult& result, const std::string& manifest_json) {
    std::string out = "# manifest: " + compact_json(manifest_json) + "\n";
    out += spatial_kind(result.spec.kind) ? "param_m" : "param_rad";
    out += ",rate_norm,counts,counts_err\n";
    for (const auto& s : result.samples) {
        out += fmt(s.parameter);
        out += ',';
        out += fmt(s.ideal_rate);
        out += ',';
        if (s.counts) out += fmt(*s.counts);
        out += ',';
        if (s.error) out += fmt(*s.error);
        out += '\n';
    }
    return out;
}

CsvScan parse_scan_csv(const std::string& text) {
    CsvScan csv;
    std::stringstream ss(text);
    std::string line;
    bool header_seen = false;
    const std::string manifest_prefix = "# manifest: ";
    while (std::getline(ss, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            if (line.rfind(manifest_prefix, 0) == 0) {
                csv.manifest_json = line.substr(manifest_prefix.size());
            }
            continue;
        }
        if (!header_seen) {
            const auto cells = split_csv_line(line);
            if (cells.empty() || (cells[0] != "param_m" && cells[0] != "param_rad")) {
                throw std::runtime_error("scan CSV: header must start with param_m or param_rad");
            }
            csv.param_in_meters = cells[0] == "param_m";
            header_seen = true;
            continue;
        }
        const auto cells = split_csv_line(line);
        if (cells.size() < 2) throw std::runtime_error("scan CSV: malformed row '" + line + "'");
        ScanSample sample;
        sample.parameter = std::stod(cells[0]);
        sample.ideal_rate = std::stod(cells[1]);
        if (cells.size() > 2 && !cells[2].empty()) sample.counts = std::stod(cells[2]);
        if (cells.size() > 3 && !cells[3].empty()) sample.error = std::stod(cells[3]);
        csv.samples.push_back(sample);
    }
    if (!header_seen) throw std::runtime_error("scan CSV: missing header row");
    return csv;
}

CsvScan read_scan_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open CSV file: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scan_csv(buffer.str());
}

std::vector<FitSample> fit_samples_from_csv(const CsvScan& csv) {
    std::vector<FitSample> samples;
    samples.reserve(csv.samples.size());
    bool all_counts = !csv.samples.empty();
    for (const auto& s : csv.samples) {
        if (!s.counts) {
            all_counts = false;
            break;
        }
    }
    for (const auto& s : csv.samples) {
        FitSample fs;
        fs.s = s.parameter;
        if (all_counts) {
            fs.value = *s.counts;
            if (s.error && *s.error > 0.0) fs.error = *s.error;
        } else {
            fs.value = s.ideal_rate;
        }
        samples.push_back(fs);
    }
    return samples;
}

std::string scan_svg_text(const ScanResult& result, const std::string& manifest_json) {
    const int width = 800, height = 500, margin = 60;
    double pmin = result.samples.front().parameter;
    double pmax = result.samples.back().parameter;
    double vmax = 0.0;
    for (const auto& s : result.samples) vmax = std::max(vmax, s.ideal_rate);
    if (vmax <= 0.0) vmax = 1.0;
    if (pmax <= pmin) pmax = pmin + 1.0;

    auto sx = [&](double p) {
        return margin + (p - pmin) / (pmax - pmin) * (width - 2 * margin);
    };
    auto sy = [&](double v) { return height - margin - v / vmax * (height - 2 * margin); };

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      std::to_string(width) + "\" height=\"" + std::to_string(height) + "\">\n";
    svg += "<!-- manifest: " + compact_json(manifest_json) + " -->\n";
    svg += "<line x1=\"" + fmt(margin) + "\" y1=\"" + fmt(height - margin) + "\" x2=\"" +
           fmt(width - margin) + "\" y2=\"" + fmt(height - margin) +
           "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + fmt(margin) + "\" y1=\"" + fmt(margin) + "\" x2=\"" + fmt(margin) +
           "\" y2=\"" + fmt(height - margin) + "\" stroke=\"black\"/>\n";
    svg += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (const auto& s : result.samples) {
        svg += fmt(sx(s.parameter)) + "," + fmt(sy(s.ideal_rate)) + " ";
    }
    svg += "\"/>\n</svg>\n";
    return svg;
}

void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write file: " + tmp);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace biphoton
