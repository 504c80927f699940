#pragma once

// Internal helpers shared between setup.cpp and config.cpp. Not installed.

#include "biphoton/setup.hpp"

#include <json.hpp>

#include <set>
#include <string>

namespace biphoton::detail {

using nlohmann::json;

// Strict object access: every key must be listed in `known`.
inline void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                                const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!known.count(it.key())) {
            throw std::runtime_error("unknown key '" + it.key() + "' in " + where);
        }
    }
}

OpticalSetup setup_from_json(const json& obj, bool enforce_invariants = true);
json setup_to_json(const OpticalSetup& setup);

// Rounds a unit-converted value to 12 significant digits so that
// serialize(parse(x)) is a fixed point; see setup.cpp.
double quantize_unit(double value);

}  // namespace biphoton::detail
