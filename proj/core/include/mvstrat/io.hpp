#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mvstrat/cgs.hpp"
#include "mvstrat/drones.hpp"
#include "mvstrat/lattice.hpp"
#include "mvstrat/mvmc.hpp"

namespace mvstrat {

// All loaders throw IoError for unreadable files and malformed JSON, and the
// domain errors of the builders otherwise.

// {"elements": [...], "hasse": [[lower, upper], ...], "constants": {name: element}}.
// Every element name is also a constant denoting itself.
[[nodiscard]] InterpretedLattice lattice_from_json(std::string_view text);
[[nodiscard]] std::string lattice_to_json(const InterpretedLattice& lattice);
// A built-in lattice name or a file path.
[[nodiscard]] InterpretedLattice load_lattice(std::string_view spec);

// Model document; "lattice" and "weight_lattice" may be a built-in name, a
// path relative to base_dir or an inline lattice document.
[[nodiscard]] MvCGS model_from_json(std::string_view text, const std::filesystem::path& base_dir = {});
[[nodiscard]] std::string model_to_json(const MvCGS& m);
// A built-in model name or a file path.
[[nodiscard]] MvCGS load_model(std::string_view spec);

[[nodiscard]] MapGraph map_from_json(std::string_view text);
[[nodiscard]] std::string map_to_json(const MapGraph& map);
// A built-in map name or a file path.
[[nodiscard]] MapGraph load_map(std::string_view spec);

// {"values": {state: element}}
[[nodiscard]] std::string valuation_to_json(const GameStructure& s, const Valuation& v);
[[nodiscard]] Valuation valuation_from_json(std::string_view text, const GameStructure& s, LatticePtr lattice);

[[nodiscard]] std::string read_file(const std::filesystem::path& path);

} // namespace mvstrat
