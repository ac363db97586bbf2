#pragma once

#include <json.hpp>

#include "novamaze/neat/genome.hpp"

namespace novamaze::neat {

inline constexpr int kGenomeFormatVersion = 1;

// Versioned genome document:
// {"version":1,"id":..,"species":..|null,
//  "nodes":[{"id":..,"kind":"input|bias|hidden|output"}],
//  "connections":[{"innovation":..,"from":..,"to":..,"weight":..,"enabled":..}]}
void to_json(nlohmann::json& j, const Genome& genome);
// Throws std::invalid_argument on an unknown version or invalid genome.
void from_json(const nlohmann::json& j, Genome& genome);

}  // namespace novamaze::neat
