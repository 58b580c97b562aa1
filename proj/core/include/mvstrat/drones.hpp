#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mvstrat/cgs.hpp"
#include "mvstrat/deadline.hpp"
#include "mvstrat/formula.hpp"

namespace mvstrat {

enum class Reading { polluted, clean, none };
enum class Direction { N, S, E, W };

[[nodiscard]] std::string_view to_string(Reading r) noexcept;
[[nodiscard]] std::string_view to_string(Direction d) noexcept;
// Throw MapInvalid.
[[nodiscard]] Reading parse_reading(std::string_view s);
[[nodiscard]] Direction parse_direction(std::string_view s);
[[nodiscard]] Direction opposite(Direction d) noexcept;

struct Location {
    std::string id;
    Reading drone_reading = Reading::none;
    Reading ground_reading = Reading::none;
};

struct MapEdge {
    std::string from;
    Direction dir;
    std::string to;
};

struct MapGraph {
    std::vector<Location> locations;
    std::vector<MapEdge> edges;
    std::string start;
    std::optional<std::string> target;
    // Every edge can also be travelled backwards in the opposite direction.
    bool symmetric = true;
};

// Throws MapInvalid: unknown or duplicate ids, two neighbours in one
// direction, more than 64 locations.
void validate_map(const MapGraph& map);

// Element name of the pollution atom for a pair of sensor readings, over the
// lattice "2+2x2+2x2".
[[nodiscard]] std::string pollution_value(Reading drone, Reading ground);

enum class VisitedTracking {
    off,
    // The set of visited locations is part of the state.
    full_set,
    // As full_set, but once no drone can move only the all-visited flag is
    // kept. Bisimilar to full_set and smaller.
    compact,
};

struct DroneConfig {
    std::size_t drones = 1;
    std::size_t energy = 0;
    // Directions without an edge are not offered; otherwise such a move
    // fails, the drone stays and the energy is still spent.
    bool strict_moves = true;
    VisitedTracking visited = VisitedTracking::compact;
    // Wait is always offered; otherwise only when no move is possible.
    bool wait_always = true;
    bool epistemic = true;
    std::size_t state_cap = 2'000'000;
    Deadline deadline;
};

// Agents "1".."k", actions N, S, E, W, Wait. Atoms pol<d>, at_<d>_<loc>,
// allvisited (unless tracking is off) and target (all drones at the target).
// Throws MapInvalid, StateSpaceCapExceeded, Timeout.
[[nodiscard]] MvCGS gen_drones(const MapGraph& map, const DroneConfig& cfg);

// "square4": four locations with one-way edges, the map behind paper:mmulti.
// "grid12": a symmetric 4x3 grid, start 0, target 11.
[[nodiscard]] MapGraph builtin_map(std::string_view name);
[[nodiscard]] std::vector<std::string> builtin_map_names();

// "paper:mmulti" and "paper:mmulti_imperfect". Throws UnknownModel.
[[nodiscard]] MvCGS builtin_model(std::string_view name);
[[nodiscard]] std::vector<std::string> builtin_model_names();

// [[ ]] F pol<d>
[[nodiscard]] Formula phi1_left(std::size_t drone);
// <<d>> F pol<d>
[[nodiscard]] Formula phi1_right(std::size_t drone);
// <<1,..,k>> F ((at_1_L & pol1) | .. | (at_k_L & polk))
[[nodiscard]] Formula phi2_right(std::size_t drones, const std::string& location);

} // namespace mvstrat
