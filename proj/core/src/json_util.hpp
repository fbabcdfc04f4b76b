#pragma once

#include <json.hpp>

#include "ctis/error.hpp"
#include "ctis/optics.hpp"

namespace ctis::detail {

inline nlohmann::json geometry_to_json(const ShiftGeometry& g) {
    return {
        {"cube_side", g.cube_side()},
        {"bands", g.bands()},
        {"shifts", std::vector<std::uint32_t>(g.shifts().begin(), g.shifts().end())},
        {"weight_mode", std::string(to_string(g.weight_mode()))},
        {"block_side", g.block_side()},
        {"canvas_side", g.canvas_side()},
    };
}

/// Throws FormatError when fields are missing or disagree with each other.
inline ShiftGeometry geometry_from_json(const nlohmann::json& j) {
    try {
        ShiftGeometry g(j.at("cube_side").get<std::size_t>(), j.at("shifts").get<std::vector<std::uint32_t>>(),
                        weight_mode_from_string(j.at("weight_mode").get<std::string>()));
        if (j.contains("bands") && j["bands"].get<std::size_t>() != g.bands()) {
            throw FormatError("geometry 'bands' disagrees with the shift table", 0);
        }
        if (j.contains("canvas_side") && j["canvas_side"].get<std::size_t>() != g.canvas_side()) {
            throw FormatError("geometry 'canvas_side' disagrees with side and shifts", 0);
        }
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad geometry record: ") + e.what(), 0);
    } catch (const DimensionError& e) {
        throw FormatError(std::string("bad geometry record: ") + e.what(), 0);
    } catch (const ConfigError& e) {
        throw FormatError(std::string("bad geometry record: ") + e.what(), 0);
    }
}

}  // namespace ctis::detail
