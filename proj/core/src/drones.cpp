#include "mvstrat/drones.hpp"

#include <array>
#include <deque>
#include <map>
#include <unordered_map>

#include "hash.hpp"
#include "mvstrat/error.hpp"

namespace mvstrat {

std::string_view to_string(Reading r) noexcept {
    switch (r) {
    case Reading::polluted:
        return "polluted";
    case Reading::clean:
        return "clean";
    case Reading::none:
        return "none";
    }
    return "none";
}

std::string_view to_string(Direction d) noexcept {
    static constexpr std::array<std::string_view, 4> names{"N", "S", "E", "W"};
    return names[static_cast<std::size_t>(d)];
}

Reading parse_reading(std::string_view s) {
    if (s == "polluted") {
        return Reading::polluted;
    }
    if (s == "clean") {
        return Reading::clean;
    }
    if (s == "none") {
        return Reading::none;
    }
    throw Error(ErrorCode::map_invalid, "unknown reading '" + std::string(s) + "'");
}

Direction parse_direction(std::string_view s) {
    for (Direction d : {Direction::N, Direction::S, Direction::E, Direction::W}) {
        if (s == to_string(d)) {
            return d;
        }
    }
    throw Error(ErrorCode::map_invalid, "unknown direction '" + std::string(s) + "'");
}

Direction opposite(Direction d) noexcept {
    switch (d) {
    case Direction::N:
        return Direction::S;
    case Direction::S:
        return Direction::N;
    case Direction::E:
        return Direction::W;
    case Direction::W:
        return Direction::E;
    }
    return d;
}

std::string pollution_value(Reading drone, Reading ground) {
    const bool dp = drone == Reading::polluted;
    const bool gp = ground == Reading::polluted;
    if (dp && gp) {
        return "top";
    }
    if (dp) {
        return "top_d";
    }
    if (gp) {
        return "top_g";
    }
    if (drone == Reading::clean && ground == Reading::clean) {
        return "bot";
    }
    if (drone == Reading::clean) {
        return "bot_d";
    }
    if (ground == Reading::clean) {
        return "bot_g";
    }
    return "undec";
}

namespace {

constexpr std::uint32_t no_neighbour = 0xffffffffU;

struct IndexedMap {
    std::vector<std::array<std::uint32_t, 4>> next; // by direction
    std::vector<std::vector<bool>> adjacent;
    std::uint32_t start = 0;
    std::optional<std::uint32_t> target;
};

IndexedMap index_map(const MapGraph& map) {
    if (map.locations.empty()) {
        throw Error(ErrorCode::map_invalid, "no locations");
    }
    if (map.locations.size() > 64) {
        throw Error(ErrorCode::map_invalid, "at most 64 locations are supported");
    }
    std::unordered_map<std::string, std::uint32_t> ids;
    for (std::uint32_t i = 0; i < map.locations.size(); ++i) {
        if (!ids.emplace(map.locations[i].id, i).second) {
            throw Error(ErrorCode::map_invalid, "duplicate location '" + map.locations[i].id + "'");
        }
    }
    auto lookup = [&](const std::string& id) {
        auto it = ids.find(id);
        if (it == ids.end()) {
            throw Error(ErrorCode::map_invalid, "unknown location '" + id + "'");
        }
        return it->second;
    };
    IndexedMap out;
    const std::size_t n = map.locations.size();
    out.next.assign(n, {no_neighbour, no_neighbour, no_neighbour, no_neighbour});
    out.adjacent.assign(n, std::vector<bool>(n, false));
    auto connect = [&](std::uint32_t from, Direction d, std::uint32_t to) {
        auto& slot = out.next[from][static_cast<std::size_t>(d)];
        if (slot != no_neighbour && slot != to) {
            throw Error(ErrorCode::map_invalid, "location '" + map.locations[from].id + "' has two neighbours to the " +
                                                    std::string(to_string(d)));
        }
        slot = to;
        out.adjacent[from][to] = true;
        out.adjacent[to][from] = true;
    };
    for (const auto& e : map.edges) {
        const auto from = lookup(e.from);
        const auto to = lookup(e.to);
        connect(from, e.dir, to);
        if (map.symmetric) {
            connect(to, opposite(e.dir), from);
        }
    }
    out.start = lookup(map.start);
    if (map.target) {
        out.target = lookup(*map.target);
    }
    return out;
}

struct KeyHash {
    std::size_t operator()(const std::vector<std::uint64_t>& k) const noexcept {
        detail::Fnv h;
        h.bytes(k.data(), k.size() * sizeof(std::uint64_t));
        return static_cast<std::size_t>(h.value());
    }
};

struct Move {
    ActionId action;
    std::uint32_t loc;
    std::uint32_t energy;
};

} // namespace

void validate_map(const MapGraph& map) { (void)index_map(map); }

MvCGS gen_drones(const MapGraph& map, const DroneConfig& cfg) {
    if (cfg.drones == 0) {
        throw Error(ErrorCode::map_invalid, "at least one drone is needed");
    }
    const IndexedMap im = index_map(map);
    const std::size_t k = cfg.drones;
    const std::size_t nloc = map.locations.size();
    const std::uint64_t full_mask = nloc == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << nloc) - 1;

    const LatticePtr lattice = builtin_lattice("2+2x2+2x2");
    const Lattice& l = *lattice;
    MvCGSBuilder b{InterpretedLattice(lattice)};

    for (std::size_t d = 1; d <= k; ++d) {
        b.agent(std::to_string(d));
    }
    std::array<ActionId, 4> move_action{};
    for (Direction dir : {Direction::N, Direction::S, Direction::E, Direction::W}) {
        move_action[static_cast<std::size_t>(dir)] = b.action(to_string(dir));
    }
    const ActionId wait = b.action("Wait");

    std::vector<Element> pol_of_loc;
    for (const auto& loc : map.locations) {
        pol_of_loc.push_back(l.element(pollution_value(loc.drone_reading, loc.ground_reading)));
    }
    for (std::size_t d = 1; d <= k; ++d) {
        b.proposition("pol" + std::to_string(d));
    }
    for (std::size_t d = 1; d <= k; ++d) {
        for (const auto& loc : map.locations) {
            b.proposition("at_" + std::to_string(d) + "_" + loc.id);
        }
    }
    if (cfg.visited != VisitedTracking::off) {
        b.proposition("allvisited");
    }
    b.proposition("target");

    // Key layout: locations, energies, visited tag, visited payload.
    enum : std::uint64_t { tag_none = 0, tag_set = 1, tag_flag = 2 };
    std::unordered_map<std::vector<std::uint64_t>, StateId, KeyHash> seen;
    std::deque<std::vector<std::uint64_t>> queue;
    std::vector<std::vector<std::uint64_t>> keys;

    auto name_of = [&](const std::vector<std::uint64_t>& key) {
        std::string s = "(";
        for (std::size_t d = 0; d < k; ++d) {
            s += (d ? "," : "") + map.locations[key[d]].id;
        }
        s += ")|";
        for (std::size_t d = 0; d < k; ++d) {
            s += (d ? "," : "") + std::to_string(key[k + d]);
        }
        if (key[2 * k] == tag_set) {
            char buf[24];
            std::snprintf(buf, sizeof buf, "|v%llx", static_cast<unsigned long long>(key[2 * k + 1]));
            s += buf;
        } else if (key[2 * k] == tag_flag) {
            s += key[2 * k + 1] ? "|all" : "|part";
        }
        return s;
    };

    auto intern = [&](std::vector<std::uint64_t> key) {
        auto it = seen.find(key);
        if (it != seen.end()) {
            return it->second;
        }
        if (seen.size() >= cfg.state_cap) {
            throw Error(ErrorCode::state_space_cap_exceeded,
                        "more than " + std::to_string(cfg.state_cap) + " states");
        }
        const StateId q = b.state(name_of(key));
        seen.emplace(key, q);
        // Valuation is a function of the key alone.
        bool all_at_target = im.target.has_value();
        for (std::size_t d = 0; d < k; ++d) {
            const auto loc = static_cast<std::uint32_t>(key[d]);
            b.value("pol" + std::to_string(d + 1), q, pol_of_loc[loc]);
            b.value("at_" + std::to_string(d + 1) + "_" + map.locations[loc].id, q, l.top());
            all_at_target = all_at_target && loc == *im.target;
        }
        if (all_at_target) {
            b.value("target", q, l.top());
        }
        const bool all_visited = (key[2 * k] == tag_set && key[2 * k + 1] == full_mask) ||
                                 (key[2 * k] == tag_flag && key[2 * k + 1] == 1);
        if (all_visited) {
            b.value("allvisited", q, l.top());
        }
        keys.push_back(key);
        queue.push_back(std::move(key));
        return q;
    };

    auto make_key = [&](const std::vector<std::uint32_t>& locs, const std::vector<std::uint32_t>& energy,
                        std::uint64_t visited) {
        std::vector<std::uint64_t> key;
        key.reserve(2 * k + 2);
        key.insert(key.end(), locs.begin(), locs.end());
        key.insert(key.end(), energy.begin(), energy.end());
        bool exhausted = true;
        for (auto e : energy) {
            exhausted = exhausted && e == 0;
        }
        switch (cfg.visited) {
        case VisitedTracking::off:
            key.push_back(tag_none);
            key.push_back(0);
            break;
        case VisitedTracking::full_set:
            key.push_back(tag_set);
            key.push_back(visited);
            break;
        case VisitedTracking::compact:
            if (exhausted) {
                key.push_back(tag_flag);
                key.push_back(visited == full_mask ? 1 : 0);
            } else {
                key.push_back(tag_set);
                key.push_back(visited);
            }
            break;
        }
        return key;
    };

    {
        std::vector<std::uint32_t> locs(k, im.start);
        std::vector<std::uint32_t> energy(k, static_cast<std::uint32_t>(cfg.energy));
        b.initial(intern(make_key(locs, energy, std::uint64_t{1} << im.start)));
    }

    std::vector<std::vector<Move>> options(k);
    std::vector<std::uint32_t> locs(k);
    std::vector<std::uint32_t> energy(k);
    while (!queue.empty()) {
        const std::vector<std::uint64_t> key = std::move(queue.front());
        queue.pop_front();
        if ((keys.size() & 255U) == 0) {
            cfg.deadline.check();
        }
        const StateId q = seen.at(key);
        const std::uint64_t visited = key[2 * k] == tag_set ? key[2 * k + 1] : 0;

        for (std::size_t d = 0; d < k; ++d) {
            const auto loc = static_cast<std::uint32_t>(key[d]);
            const auto e = static_cast<std::uint32_t>(key[k + d]);
            auto& opts = options[d];
            opts.clear();
            if (e > 0) {
                for (Direction dir : {Direction::N, Direction::S, Direction::E, Direction::W}) {
                    const auto to = im.next[loc][static_cast<std::size_t>(dir)];
                    if (to != no_neighbour) {
                        opts.push_back({move_action[static_cast<std::size_t>(dir)], to, e - 1});
                    } else if (!cfg.strict_moves) {
                        opts.push_back({move_action[static_cast<std::size_t>(dir)], loc, e - 1});
                    }
                }
            }
            if (e == 0 || cfg.wait_always || opts.empty()) {
                opts.push_back({wait, loc, e});
            }
            std::vector<ActionId> avail;
            for (const auto& m : opts) {
                avail.push_back(m.action);
            }
            b.available(static_cast<AgentId>(d), q, std::move(avail));
        }

        std::vector<std::size_t> digit(k, 0);
        for (;;) {
            std::vector<ActionId> joint(k);
            std::uint64_t next_visited = visited;
            for (std::size_t d = 0; d < k; ++d) {
                const Move& m = options[d][digit[d]];
                joint[d] = m.action;
                locs[d] = m.loc;
                energy[d] = m.energy;
                next_visited |= std::uint64_t{1} << m.loc;
            }
            if (key[2 * k] == tag_flag && key[2 * k + 1] == 1) {
                next_visited = full_mask;
            }
            const StateId to = intern(make_key(locs, energy, next_visited));
            b.transition(q, std::move(joint), to);

            std::size_t d = k;
            while (d-- > 0) {
                if (++digit[d] < options[d].size()) {
                    break;
                }
                digit[d] = 0;
            }
            if (d == static_cast<std::size_t>(-1)) {
                break;
            }
        }
    }

    if (cfg.epistemic) {
        for (std::size_t d = 0; d < k; ++d) {
            std::map<std::vector<std::uint64_t>, std::vector<StateId>> classes;
            for (StateId q = 0; q < keys.size(); ++q) {
                const auto& key = keys[q];
                const auto own = key[d];
                std::vector<std::uint64_t> view{own, key[k + d], key[2 * k], key[2 * k + 1]};
                for (std::size_t e = 0; e < k; ++e) {
                    if (e == d) {
                        continue;
                    }
                    const auto other = key[e];
                    const bool near = other == own || im.adjacent[own][other];
                    view.push_back(near ? static_cast<std::uint64_t>(map.locations[other].drone_reading) : 99);
                }
                classes[view].push_back(q);
            }
            std::vector<std::vector<StateId>> partition;
            for (auto& [view, members] : classes) {
                partition.push_back(std::move(members));
            }
            b.epistemic(static_cast<AgentId>(d), std::move(partition));
        }
    }
    return b.build();
}

MapGraph builtin_map(std::string_view name) {
    MapGraph m;
    if (name == "square4") {
        m.locations = {{"0", Reading::none, Reading::none},
                       {"1", Reading::polluted, Reading::polluted},
                       {"2", Reading::clean, Reading::clean},
                       {"3", Reading::polluted, Reading::none}};
        m.edges = {{"0", Direction::N, "1"}, {"0", Direction::E, "2"}, {"1", Direction::E, "3"}, {"2", Direction::N, "3"}};
        m.start = "0";
        m.target = "3";
        m.symmetric = false;
        return m;
    }
    if (name == "grid12") {
        // Row-major, row 0 southmost, 4 columns.
        const std::array<std::pair<Reading, Reading>, 12> readings{{
            {Reading::none, Reading::none},
            {Reading::polluted, Reading::none},
            {Reading::clean, Reading::none},
            {Reading::none, Reading::polluted},
            {Reading::clean, Reading::clean},
            {Reading::polluted, Reading::polluted},
            {Reading::none, Reading::clean},
            {Reading::polluted, Reading::clean},
            {Reading::clean, Reading::polluted},
            {Reading::none, Reading::none},
            {Reading::polluted, Reading::none},
            {Reading::clean, Reading::clean},
        }};
        for (int i = 0; i < 12; ++i) {
            m.locations.push_back({std::to_string(i), readings[i].first, readings[i].second});
        }
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 4; ++c) {
                const int i = r * 4 + c;
                if (c < 3) {
                    m.edges.push_back({std::to_string(i), Direction::E, std::to_string(i + 1)});
                }
                if (r < 2) {
                    m.edges.push_back({std::to_string(i), Direction::N, std::to_string(i + 4)});
                }
            }
        }
        m.start = "0";
        m.target = "11";
        m.symmetric = true;
        return m;
    }
    throw Error(ErrorCode::map_invalid, "no built-in map '" + std::string(name) + "'");
}

std::vector<std::string> builtin_map_names() { return {"square4", "grid12"}; }

namespace {

struct ExampleState {
    const char* name;
    std::vector<std::pair<const char*, const char*>> values;
};

MvCGS example_model(bool imperfect) {
    const LatticePtr lattice = builtin_lattice("2+2x2+2x2");
    const Lattice& l = *lattice;
    MvCGSBuilder b{InterpretedLattice(lattice)};
    const AgentId d1 = b.agent("1");
    const AgentId d2 = b.agent("2");
    const ActionId N = b.action("N");
    const ActionId E = b.action("E");
    const ActionId W = b.action("Wait");

    std::vector<ExampleState> states = {
        {"(0,0)", {{"pol1", "undec"}, {"pol2", "undec"}}},
        {"(1,1)", {{"pol1", "top"}, {"pol2", "top"}}},
        {"(2,2)", {}},
        {"(1,2)", {{"pol1", "top"}}},
        {"(2,1)", {{"pol2", "top"}}},
        {"(3,3)_1", {{"pol1", "top_d"}, {"pol2", "top_d"}, {"target", "top"}}},
        {"(3,3)_2", {{"pol1", "top_d"}, {"pol2", "top_d"}, {"target", "top"}, {"allvisited", "top"}}},
    };
    if (imperfect) {
        states.push_back({"(3,1)_1", {{"pol1", "top_d"}, {"pol2", "top"}}});
        states.push_back({"(3,1)_2", {{"pol1", "top_d"}, {"pol2", "top"}, {"allvisited", "top"}}});
        states.push_back({"(3,2)_1", {{"pol1", "top_d"}}});
        states.push_back({"(3,2)_2", {{"pol1", "top_d"}, {"allvisited", "top"}}});
    }
    for (const char* p : {"pol1", "pol2", "target", "allvisited"}) {
        b.proposition(p);
    }
    std::map<std::string, StateId> id;
    for (const auto& s : states) {
        id[s.name] = b.state(s.name);
        for (const auto& [p, v] : s.values) {
            b.value(p, id[s.name], l.element(v));
        }
    }
    b.initial(id["(0,0)"]);

    auto t = [&](const char* from, ActionId a1, ActionId a2, const char* to) { b.transition(id.at(from), {a1, a2}, id.at(to)); };
    t("(0,0)", N, N, "(1,1)");
    t("(0,0)", E, E, "(2,2)");
    t("(0,0)", N, E, "(1,2)");
    t("(0,0)", E, N, "(2,1)");
    t("(1,1)", E, E, "(3,3)_1");
    t("(2,2)", N, N, "(3,3)_1");
    t("(1,2)", E, N, "(3,3)_2");
    t("(2,1)", N, E, "(3,3)_2");
    if (imperfect) {
        t("(1,1)", E, N, "(3,1)_1");
        t("(2,2)", N, E, "(3,2)_1");
        t("(1,2)", E, E, "(3,2)_2");
        t("(2,1)", N, N, "(3,1)_2");
    }
    std::vector<std::string> sinks = {"(3,3)_1", "(3,3)_2"};
    if (imperfect) {
        for (const char* s : {"(3,1)_1", "(3,1)_2", "(3,2)_1", "(3,2)_2"}) {
            sinks.emplace_back(s);
        }
    }
    for (const auto& s : sinks) {
        b.transition(id.at(s), {W, W}, id.at(s));
        b.available(d1, id.at(s), {W});
        b.available(d2, id.at(s), {W});
    }

    b.available(d1, id["(0,0)"], {N, E});
    b.available(d2, id["(0,0)"], {N, E});
    b.available(d1, id["(1,1)"], {E});
    b.available(d1, id["(2,2)"], {N});
    b.available(d1, id["(1,2)"], {E});
    b.available(d1, id["(2,1)"], {N});
    if (imperfect) {
        for (const char* s : {"(1,1)", "(2,2)", "(1,2)", "(2,1)"}) {
            b.available(d2, id[s], {N, E});
        }
        std::vector<StateId> sink_ids;
        for (const auto& s : sinks) {
            sink_ids.push_back(id.at(s));
        }
        b.epistemic(d1, {{id["(0,0)"]}, {id["(1,1)"], id["(1,2)"]}, {id["(2,1)"], id["(2,2)"]}, sink_ids});
        b.epistemic(d2, {{id["(0,0)"], id["(1,1)"], id["(1,2)"], id["(2,2)"], id["(2,1)"]}, sink_ids});
    } else {
        b.available(d2, id["(1,1)"], {E});
        b.available(d2, id["(2,2)"], {N});
        b.available(d2, id["(1,2)"], {N});
        b.available(d2, id["(2,1)"], {E});
    }
    return b.build();
}

} // namespace

MvCGS builtin_model(std::string_view name) {
    if (name == "paper:mmulti") {
        return example_model(false);
    }
    if (name == "paper:mmulti_imperfect") {
        return example_model(true);
    }
    throw Error(ErrorCode::unknown_model, std::string(name));
}

std::vector<std::string> builtin_model_names() { return {"paper:mmulti", "paper:mmulti_imperfect"}; }

Formula phi1_left(std::size_t drone) { return parse_formula("[[ ]] F pol" + std::to_string(drone)); }

Formula phi1_right(std::size_t drone) {
    const auto d = std::to_string(drone);
    return parse_formula("<<" + d + ">> F pol" + d);
}

Formula phi2_right(std::size_t drones, const std::string& location) {
    std::string agents;
    std::string goal;
    for (std::size_t d = 1; d <= drones; ++d) {
        const auto s = std::to_string(d);
        agents += (d > 1 ? "," : "") + s;
        goal += (d > 1 ? " | " : "") + std::string("(at_") + s + "_" + location + " & pol" + s + ")";
    }
    return parse_formula("<<" + agents + ">> F (" + goal + ")");
}

} // namespace mvstrat
