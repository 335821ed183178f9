#pragma once

#include <filesystem>

#include "json.hpp"

#include "genus/map.hpp"

namespace genus {

// Map files: {"nodes": n, "edges": [[tail, head], ...], "rotation": [[ids...], ...]}.
// Edge-end ids in rotation lists are 1-based and signed: +(e+1) is the tail
// end of edge e, -(e+1) its head end. Writers add a "stats" object that
// loaders ignore.

nlohmann::json map_to_json(const CombinatorialMap& map);
CombinatorialMap map_from_json(const nlohmann::json& doc);

CombinatorialMap load_map(const std::filesystem::path& path);
void save_map(const CombinatorialMap& map, const std::filesystem::path& path);

nlohmann::json stats_to_json(const MapStats& stats);

}  // namespace genus
