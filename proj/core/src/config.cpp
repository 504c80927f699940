#include "biphoton/config.hpp"

#include "biphoton/errors.hpp"
#include "json_detail.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace biphoton {

namespace {

using nlohmann::json;
constexpr double kDegToRad = std::numbers::pi / 180.0;

double require_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw std::runtime_error("missing key '" + key + "' in " + where);
    if (!obj.at(key).is_number()) {
        throw std::runtime_error("key '" + key + "' in " + where + " must be a number");
    }
    return obj.at(key).get<double>();
}

double optional_number(const json& obj, const std::string& key, double fallback,
                       const std::string& where) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number()) {
        throw std::runtime_error("key '" + key + "' in " + where + " must be a number");
    }
    return obj.at(key).get<double>();
}

ScanKind scan_kind_from_string(const std::string& s) {
    if (s == "same_direction") return ScanKind::same_direction;
    if (s == "opposite_direction") return ScanKind::opposite_direction;
    if (s == "phase") return ScanKind::phase;
    if (s == "hwp") return ScanKind::hwp;
    throw std::runtime_error("unknown scan kind '" + s + "'");
}

std::string scan_kind_to_string(ScanKind k) {
    switch (k) {
        case ScanKind::same_direction: return "same_direction";
        case ScanKind::opposite_direction: return "opposite_direction";
        case ScanKind::phase: return "phase";
        case ScanKind::hwp: return "hwp";
    }
    return "?";
}

bool spatial_kind(ScanKind k) {
    return k == ScanKind::same_direction || k == ScanKind::opposite_direction;
}

ScanSpec scan_from_json(const json& obj) {
    if (!obj.is_object()) throw std::runtime_error("scan must be a JSON object");
    detail::reject_unknown_keys(obj,
                                {"kind", "start_mm", "stop_mm", "start_deg", "stop_deg",
                                 "points", "theta_deg", "alpha_deg", "slit_mode", "pairing"},
                                "scan");
    if (!obj.contains("kind") || !obj.at("kind").is_string()) {
        throw std::runtime_error("scan requires a string 'kind'");
    }
    ScanSpec spec;
    spec.kind = scan_kind_from_string(obj.at("kind").get<std::string>());
    if (spatial_kind(spec.kind)) {
        if (obj.contains("start_deg") || obj.contains("stop_deg")) {
            throw std::runtime_error("spatial scans take start_mm/stop_mm, not *_deg");
        }
        spec.start = require_number(obj, "start_mm", "scan") * 1e-3;
        spec.stop = require_number(obj, "stop_mm", "scan") * 1e-3;
    } else {
        if (obj.contains("start_mm") || obj.contains("stop_mm")) {
            throw std::runtime_error("angular scans take start_deg/stop_deg, not *_mm");
        }
        spec.start = require_number(obj, "start_deg", "scan") * kDegToRad;
        spec.stop = require_number(obj, "stop_deg", "scan") * kDegToRad;
    }
    const double points = require_number(obj, "points", "scan");
    spec.points = static_cast<int>(points);
    if (spec.points < 2 || points != spec.points) {
        throw std::runtime_error("scan points must be an integer >= 2");
    }
    spec.theta = optional_number(obj, "theta_deg", 0.0, "scan") * kDegToRad;
    spec.alpha = optional_number(obj, "alpha_deg", 22.5, "scan") * kDegToRad;
    std::string slit_mode = obj.contains("slit_mode") ? obj.at("slit_mode").get<std::string>()
                                                      : std::string("narrow");
    if (slit_mode == "narrow") {
        spec.slit_mode = SlitMode::narrow;
    } else if (slit_mode == "finite") {
        spec.slit_mode = SlitMode::finite;
    } else {
        throw std::runtime_error("scan slit_mode must be 'narrow' or 'finite'");
    }
    std::string pairing = obj.contains("pairing") ? obj.at("pairing").get<std::string>()
                                                  : std::string("same_output");
    if (pairing == "same_output") {
        spec.pairing = Pairing::same_output;
    } else if (pairing == "different_outputs") {
        spec.pairing = Pairing::different_outputs;
    } else {
        throw std::runtime_error("scan pairing must be 'same_output' or 'different_outputs'");
    }
    return spec;
}

json scan_to_json(const ScanSpec& spec) {
    json obj;
    obj["kind"] = scan_kind_to_string(spec.kind);
    if (spatial_kind(spec.kind)) {
        obj["start_mm"] = detail::quantize_unit(spec.start * 1e3);
        obj["stop_mm"] = detail::quantize_unit(spec.stop * 1e3);
    } else {
        obj["start_deg"] = detail::quantize_unit(spec.start / kDegToRad);
        obj["stop_deg"] = detail::quantize_unit(spec.stop / kDegToRad);
    }
    obj["points"] = spec.points;
    obj["theta_deg"] = detail::quantize_unit(spec.theta / kDegToRad);
    obj["alpha_deg"] = detail::quantize_unit(spec.alpha / kDegToRad);
    obj["slit_mode"] = spec.slit_mode == SlitMode::narrow ? "narrow" : "finite";
    obj["pairing"] =
        spec.pairing == Pairing::same_output ? "same_output" : "different_outputs";
    return obj;
}

CountingConfig counting_from_json(const json& obj) {
    detail::reject_unknown_keys(
        obj, {"peak_rate_cps", "integration_time_s", "singles1_cps", "singles2_cps"},
        "counting");
    CountingConfig c;
    c.peak_rate_cps = require_number(obj, "peak_rate_cps", "counting");
    c.integration_time_s = require_number(obj, "integration_time_s", "counting");
    c.singles1_cps = optional_number(obj, "singles1_cps", 0.0, "counting");
    c.singles2_cps = optional_number(obj, "singles2_cps", 0.0, "counting");
    if (!(c.peak_rate_cps >= 0.0) || !(c.integration_time_s > 0.0)) {
        throw std::runtime_error("counting rates must be >= 0 and integration time > 0");
    }
    return c;
}

DephasingConfig dephasing_from_json(const json& obj) {
    detail::reject_unknown_keys(obj, {"sigma_theta_rad", "mc_samples"}, "dephasing");
    DephasingConfig d;
    d.sigma_theta_rad = require_number(obj, "sigma_theta_rad", "dephasing");
    const double mc = optional_number(obj, "mc_samples", 1.0, "dephasing");
    d.mc_samples = static_cast<int>(mc);
    if (d.sigma_theta_rad < 0.0 || d.mc_samples < 1 || mc != d.mc_samples) {
        throw std::runtime_error("dephasing requires sigma_theta_rad >= 0, mc_samples >= 1");
    }
    return d;
}

MapConfig map_from_json(const json& obj) {
    detail::reject_unknown_keys(obj, {"extent_xi", "points", "theta_deg", "alpha_deg"}, "map");
    MapConfig m;
    m.extent_xi = require_number(obj, "extent_xi", "map");
    const double points = require_number(obj, "points", "map");
    m.points = static_cast<int>(points);
    m.theta = optional_number(obj, "theta_deg", 0.0, "map") * kDegToRad;
    m.alpha = optional_number(obj, "alpha_deg", 22.5, "map") * kDegToRad;
    if (!(m.extent_xi > 0.0) || m.points < 2 || points != m.points) {
        throw std::runtime_error("map requires extent_xi > 0 and integer points >= 2");
    }
    return m;
}

}  // namespace

RunConfig config_from_json_text(const std::string& text) {
    json obj;
    try {
        obj = json::parse(text);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("config JSON parse error: ") + e.what());
    }
    if (!obj.is_object()) throw std::runtime_error("config must be a JSON object");
    detail::reject_unknown_keys(
        obj, {"setup", "scan", "map", "counting", "dephasing", "seed", "command", "derived"},
        "config");
    if (!obj.contains("setup")) throw InvalidSetup("config requires a 'setup' object");

    RunConfig config;
    config.setup = detail::setup_from_json(obj.at("setup"));
    if (obj.contains("scan")) config.scan = scan_from_json(obj.at("scan"));
    if (obj.contains("map")) config.map = map_from_json(obj.at("map"));
    if (obj.contains("counting")) config.counting = counting_from_json(obj.at("counting"));
    if (obj.contains("dephasing")) config.dephasing = dephasing_from_json(obj.at("dephasing"));
    if (obj.contains("seed")) {
        if (!obj.at("seed").is_number_integer() && !obj.at("seed").is_number_unsigned()) {
            throw std::runtime_error("config seed must be an integer");
        }
        config.seed = obj.at("seed").get<std::uint64_t>();
    }
    return config;
}

std::string manifest_json_text(const RunConfig& config, const std::string& command) {
    json obj;
    obj["command"] = command;
    obj["setup"] = detail::setup_to_json(config.setup);
    if (config.scan) obj["scan"] = scan_to_json(*config.scan);
    if (config.map) {
        json m;
        m["extent_xi"] = config.map->extent_xi;
        m["points"] = config.map->points;
        m["theta_deg"] = detail::quantize_unit(config.map->theta / kDegToRad);
        m["alpha_deg"] = detail::quantize_unit(config.map->alpha / kDegToRad);
        obj["map"] = m;
    }
    if (config.counting) {
        json c;
        c["peak_rate_cps"] = config.counting->peak_rate_cps;
        c["integration_time_s"] = config.counting->integration_time_s;
        c["singles1_cps"] = config.counting->singles1_cps;
        c["singles2_cps"] = config.counting->singles2_cps;
        obj["counting"] = c;
    }
    if (config.dephasing) {
        json d;
        d["sigma_theta_rad"] = config.dephasing->sigma_theta_rad;
        d["mc_samples"] = config.dephasing->mc_samples;
        obj["dephasing"] = d;
    }
    obj["seed"] = config.seed;
    const auto derived = derive(config.setup);
    json dq;
    dq["lambda_um"] = derived.period * 1e6;
    dq["sigma_um"] = derived.sigma * 1e6;
    obj["derived"] = dq;
    return obj.dump(2);
}

}  // namespace biphoton
