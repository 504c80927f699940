#include "biphoton/setup.hpp"

#include "biphoton/errors.hpp"
#include "json_detail.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

namespace biphoton {

std::vector<std::string> validate(const OpticalSetup& setup) {
    std::vector<std::string> violations;
    auto positive = [&](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            violations.push_back(std::string(name) + " > 0 fails");
        }
    };
    positive(setup.wavelength, "wavelength");
    positive(setup.focal_length, "focal_length");
    positive(setup.mode_separation, "d");
    positive(setup.mode_radius, "R");
    positive(setup.slit_width, "a");
    positive(setup.coincidence_window, "coincidence_window");
    // The analytic far fields drop mode-overlap cross terms; d >= 5R keeps
    // the neglected exp(-d^2/8R^2) below 1e-1.
    if (setup.mode_separation > 0.0 && setup.mode_radius > 0.0 &&
        setup.mode_separation < 5.0 * setup.mode_radius) {
        violations.push_back("d >= 5R fails");
    }
    return violations;
}

DerivedQuantities derive(const OpticalSetup& setup) {
    const auto violations = validate(setup);
    if (!violations.empty()) {
        std::string msg = "invalid setup:";
        for (const auto& v : violations) msg += " [" + v + "]";
        throw InvalidSetup(msg);
    }
    DerivedQuantities out;
    out.sigma = setup.wavelength * setup.focal_length /
                (4.0 * std::numbers::pi * setup.mode_radius);
    out.period = setup.wavelength * setup.focal_length / setup.mode_separation;
    return out;
}

namespace detail {

OpticalSetup setup_from_json(const json& obj, bool enforce_invariants) {
    if (!obj.is_object()) throw InvalidSetup("setup must be a JSON object");
    const std::set<std::string> known = {"wavelength_nm",     "focal_length_mm",
                                         "mode_separation_um", "mode_radius_um",
                                         "slit_width_um",      "coincidence_window_ns"};
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!known.count(it.key())) {
            throw InvalidSetup("unknown key '" + it.key() + "' in setup");
        }
    }
    auto require = [&](const char* key) -> double {
        if (!obj.contains(key)) throw InvalidSetup(std::string("missing setup key '") + key + "'");
        if (!obj.at(key).is_number()) throw InvalidSetup(std::string("setup key '") + key + "' must be a number");
        return obj.at(key).get<double>();
    };
    OpticalSetup setup;
    setup.wavelength = require("wavelength_nm") * 1e-9;
    setup.focal_length = require("focal_length_mm") * 1e-3;
    setup.mode_separation = require("mode_separation_um") * 1e-6;
    setup.mode_radius = require("mode_radius_um") * 1e-6;
    setup.slit_width = require("slit_width_um") * 1e-6;
    double window_ns = 7.0;
    if (obj.contains("coincidence_window_ns")) {
        if (!obj.at("coincidence_window_ns").is_number()) {
            throw InvalidSetup("setup key 'coincidence_window_ns' must be a number");
        }
        window_ns = obj.at("coincidence_window_ns").get<double>();
    }
    setup.coincidence_window = window_ns * 1e-9;

    if (enforce_invariants) {
        const auto violations = validate(setup);
        if (!violations.empty()) {
            std::string msg = "invalid setup:";
            for (const auto& v : violations) msg += " [" + v + "]";
            throw InvalidSetup(msg);
        }
    }
    return setup;
}

// Unit conversion (SI -> nm/mm/um/ns) leaves 1-ulp noise that would make a
// re-serialized manifest drift by one digit per round trip. Rounding to 12
// significant digits absorbs that noise and makes serialize(parse(x)) a
// fixed point.
double quantize_unit(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return std::strtod(buf, nullptr);
}

json setup_to_json(const OpticalSetup& setup) {
    json obj;
    obj["wavelength_nm"] = quantize_unit(setup.wavelength * 1e9);
    obj["focal_length_mm"] = quantize_unit(setup.focal_length * 1e3);
    obj["mode_separation_um"] = quantize_unit(setup.mode_separation * 1e6);
    obj["mode_radius_um"] = quantize_unit(setup.mode_radius * 1e6);
    obj["slit_width_um"] = quantize_unit(setup.slit_width * 1e6);
    obj["coincidence_window_ns"] = quantize_unit(setup.coincidence_window * 1e9);
    return obj;
}

}  // namespace detail

OpticalSetup setup_from_json_text(const std::string& text, bool enforce_invariants) {
    detail::json obj;
    try {
        obj = detail::json::parse(text);
    } catch (const std::exception& e) {
        throw InvalidSetup(std::string("setup JSON parse error: ") + e.what());
    }
    return detail::setup_from_json(obj, enforce_invariants);
}

std::string setup_to_json_text(const OpticalSetup& setup) {
    return detail::setup_to_json(setup).dump(2);
}

}  // namespace biphoton
