#include "mvstrat/io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mvstrat/error.hpp"

namespace mvstrat {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::io_error, "cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

json parse(std::string_view text, const std::string& what) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::io_error, what + ": " + e.what());
    }
}

// Wraps type errors from nlohmann into IoError.
template <class F>
auto guarded(const std::string& what, F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::io_error, what + ": " + e.what());
    }
}

InterpretedLattice lattice_from(const json& j) {
    return guarded("lattice", [&] {
        const auto elements = j.at("elements").get<std::vector<std::string>>();
        std::vector<std::pair<std::string, std::string>> hasse;
        for (const auto& e : j.value("hasse", json::array())) {
            hasse.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
        }
        auto lattice = Lattice::make(elements, hasse);
        std::map<std::string, Element> constants;
        for (Element e : lattice->elements()) {
            constants.emplace(lattice->name(e), e);
        }
        if (j.contains("constants")) {
            for (const auto& [name, value] : j.at("constants").items()) {
                constants[name] = lattice->element(value.get<std::string>());
            }
        }
        return InterpretedLattice(lattice, std::move(constants));
    });
}

json lattice_json(const InterpretedLattice& il) {
    const Lattice& l = il.lattice();
    json j;
    j["elements"] = json::array();
    for (Element e : l.elements()) {
        j["elements"].push_back(l.name(e));
    }
    j["hasse"] = json::array();
    for (const auto& [lo, hi] : l.covers()) {
        j["hasse"].push_back({l.name(lo), l.name(hi)});
    }
    json constants = json::object();
    for (const auto& [name, e] : il.constants()) {
        if (name != l.name(e)) {
            constants[name] = l.name(e);
        }
    }
    if (!constants.empty()) {
        j["constants"] = constants;
    }
    return j;
}

bool is_builtin_lattice(std::string_view name) {
    for (const auto& n : builtin_lattice_names()) {
        if (n == name) {
            return true;
        }
    }
    return false;
}

InterpretedLattice lattice_ref(const json& j, const std::filesystem::path& base_dir) {
    if (j.is_object()) {
        return lattice_from(j);
    }
    if (!j.is_string()) {
        throw Error(ErrorCode::io_error, "lattice must be a name, a path or an object");
    }
    const auto s = j.get<std::string>();
    if (is_builtin_lattice(s)) {
        return InterpretedLattice(builtin_lattice(s));
    }
    std::filesystem::path p(s);
    if (p.is_relative() && !base_dir.empty()) {
        p = base_dir / p;
    }
    return lattice_from(parse(read_file(p), p.string()));
}

} // namespace

InterpretedLattice lattice_from_json(std::string_view text) { return lattice_from(parse(text, "lattice")); }

std::string lattice_to_json(const InterpretedLattice& lattice) { return lattice_json(lattice).dump(2); }

InterpretedLattice load_lattice(std::string_view spec) {
    if (is_builtin_lattice(spec)) {
        return InterpretedLattice(builtin_lattice(spec));
    }
    const std::filesystem::path p{std::string(spec)};
    return lattice_from(parse(read_file(p), p.string()));
}

MvCGS model_from_json(std::string_view text, const std::filesystem::path& base_dir) {
    const json j = parse(text, "model");
    return guarded("model", [&] {
        InterpretedLattice lattice =
            j.contains("lattice") ? lattice_ref(j.at("lattice"), base_dir) : InterpretedLattice(builtin_lattice("2"));
        const Lattice& l = lattice.lattice();
        MvCGSBuilder b(lattice);

        for (const auto& a : j.at("agents")) {
            b.agent(a.get<std::string>());
        }
        for (const auto& s : j.at("states")) {
            b.state(s.get<std::string>());
        }
        auto known_state = [&](const std::string& name) {
            // b.state would silently create unknown names.
            for (const auto& s : j.at("states")) {
                if (s.get<std::string>() == name) {
                    return b.state(name);
                }
            }
            throw Error(ErrorCode::unknown_state, name);
        };
        auto known_agent = [&](const std::string& name) {
            for (const auto& a : j.at("agents")) {
                if (a.get<std::string>() == name) {
                    return b.agent(name);
                }
            }
            throw Error(ErrorCode::unknown_agent, name);
        };
        if (j.contains("actions")) {
            for (const auto& x : j.at("actions")) {
                b.action(x.get<std::string>());
            }
        }
        if (j.contains("initial")) {
            b.initial(known_state(j.at("initial").get<std::string>()));
        }
        LatticePtr wl;
        if (j.contains("weight_lattice")) {
            wl = lattice_ref(j.at("weight_lattice"), base_dir).lattice_ptr();
            b.weight_lattice(wl);
        }
        if (j.contains("d")) {
            for (const auto& [agent, per_state] : j.at("d").items()) {
                const AgentId a = known_agent(agent);
                for (const auto& [state, acts] : per_state.items()) {
                    std::vector<ActionId> ids;
                    for (const auto& x : acts) {
                        ids.push_back(b.action(x.get<std::string>()));
                    }
                    b.available(a, known_state(state), std::move(ids));
                }
            }
        }
        for (const auto& t : j.at("transitions")) {
            std::vector<ActionId> joint;
            for (const auto& x : t.at("act")) {
                joint.push_back(b.action(x.get<std::string>()));
            }
            std::optional<Element> w;
            if (t.contains("weight")) {
                if (!wl) {
                    throw Error(ErrorCode::invalid_model, "weights need a weight_lattice");
                }
                w = wl->element(t.at("weight").get<std::string>());
            }
            b.transition(known_state(t.at("from").get<std::string>()), std::move(joint),
                         known_state(t.at("to").get<std::string>()), w);
        }
        // Declared order first; "valuation" is an object and iterates sorted.
        if (j.contains("propositions")) {
            for (const auto& p : j.at("propositions")) {
                b.proposition(p.get<std::string>());
            }
        }
        if (j.contains("valuation")) {
            for (const auto& [prop, per_state] : j.at("valuation").items()) {
                b.proposition(prop);
                for (const auto& [state, v] : per_state.items()) {
                    b.value(prop, known_state(state), l.element(v.get<std::string>()));
                }
            }
        }
        if (j.contains("epistemic")) {
            for (const auto& [agent, classes] : j.at("epistemic").items()) {
                std::vector<std::vector<StateId>> cls;
                for (const auto& c : classes) {
                    std::vector<StateId> members;
                    for (const auto& s : c) {
                        members.push_back(known_state(s.get<std::string>()));
                    }
                    cls.push_back(std::move(members));
                }
                b.epistemic(known_agent(agent), std::move(cls));
            }
        }
        return b.build();
    });
}

std::string model_to_json(const MvCGS& m) {
    const GameStructure& s = m.structure();
    const Lattice& l = m.lattice();
    json j;
    j["lattice"] = lattice_json(m.interpretation());
    j["agents"] = s.agents();
    j["states"] = s.states();
    j["initial"] = s.state_name(s.initial());
    j["actions"] = s.actions();
    json d = json::object();
    for (AgentId a = 0; a < s.num_agents(); ++a) {
        json per = json::object();
        for (StateId q = 0; q < s.num_states(); ++q) {
            json acts = json::array();
            for (ActionId x : s.available(a, q)) {
                acts.push_back(s.action_name(x));
            }
            per[s.state_name(q)] = acts;
        }
        d[s.agent_name(a)] = per;
    }
    j["d"] = d;
    if (m.weighted()) {
        j["weight_lattice"] = lattice_json(InterpretedLattice(m.weight_lattice()));
    }
    j["transitions"] = json::array();
    for (TransitionId t = 0; t < s.num_transitions(); ++t) {
        json tj;
        tj["from"] = s.state_name(s.from(t));
        json act = json::array();
        for (ActionId x : s.joint(t)) {
            act.push_back(s.action_name(x));
        }
        tj["act"] = act;
        tj["to"] = s.state_name(s.to(t));
        if (m.weighted() && m.weights()[t].id != no_position) {
            tj["weight"] = m.weight_lattice()->name(m.weights()[t]);
        }
        j["transitions"].push_back(tj);
    }
    j["propositions"] = m.propositions();
    json val = json::object();
    for (std::size_t p = 0; p < m.propositions().size(); ++p) {
        json per = json::object();
        auto vs = m.values(p);
        for (StateId q = 0; q < vs.size(); ++q) {
            if (vs[q] != l.bottom()) {
                per[s.state_name(q)] = l.name(vs[q]);
            }
        }
        val[m.propositions()[p]] = per;
    }
    j["valuation"] = val;
    if (s.has_epistemic()) {
        json ep = json::object();
        for (AgentId a = 0; a < s.num_agents(); ++a) {
            if (!s.epistemic_declared(a)) {
                continue;
            }
            json classes = json::array();
            for (const auto& c : s.declared_classes(a)) {
                json members = json::array();
                for (StateId q : c) {
                    members.push_back(s.state_name(q));
                }
                classes.push_back(members);
            }
            ep[s.agent_name(a)] = classes;
        }
        j["epistemic"] = ep;
    }
    return j.dump(2);
}

MvCGS load_model(std::string_view spec) {
    for (const auto& n : builtin_model_names()) {
        if (n == spec) {
            return builtin_model(spec);
        }
    }
    if (spec.substr(0, 6) == "paper:") {
        throw Error(ErrorCode::unknown_model, std::string(spec));
    }
    const std::filesystem::path p{std::string(spec)};
    return model_from_json(read_file(p), p.parent_path());
}

MapGraph map_from_json(std::string_view text) {
    const json j = parse(text, "map");
    return guarded("map", [&] {
        MapGraph m;
        for (const auto& loc : j.at("locations")) {
            Location l;
            l.id = loc.at("id").is_string() ? loc.at("id").get<std::string>() : std::to_string(loc.at("id").get<long>());
            l.drone_reading = parse_reading(loc.value("drone_reading", "none"));
            l.ground_reading = parse_reading(loc.value("ground_reading", "none"));
            m.locations.push_back(std::move(l));
        }
        auto id = [](const json& v) { return v.is_string() ? v.get<std::string>() : std::to_string(v.get<long>()); };
        for (const auto& e : j.at("edges")) {
            m.edges.push_back({id(e.at(0)), parse_direction(e.at(1).get<std::string>()), id(e.at(2))});
        }
        m.start = id(j.at("start"));
        if (j.contains("target") && !j.at("target").is_null()) {
            m.target = id(j.at("target"));
        }
        m.symmetric = j.value("symmetric", true);
        validate_map(m);
        return m;
    });
}

std::string map_to_json(const MapGraph& map) {
    json j;
    j["locations"] = json::array();
    for (const auto& l : map.locations) {
        j["locations"].push_back({{"id", l.id},
                                  {"drone_reading", std::string(to_string(l.drone_reading))},
                                  {"ground_reading", std::string(to_string(l.ground_reading))}});
    }
    j["edges"] = json::array();
    for (const auto& e : map.edges) {
        j["edges"].push_back({e.from, std::string(to_string(e.dir)), e.to});
    }
    j["start"] = map.start;
    if (map.target) {
        j["target"] = *map.target;
    }
    j["symmetric"] = map.symmetric;
    return j.dump(2);
}

MapGraph load_map(std::string_view spec) {
    for (const auto& n : builtin_map_names()) {
        if (n == spec) {
            return builtin_map(spec);
        }
    }
    return map_from_json(read_file(std::filesystem::path(std::string(spec))));
}

std::string valuation_to_json(const GameStructure& s, const Valuation& v) {
    json values = json::object();
    for (StateId q = 0; q < v.size(); ++q) {
        values[s.state_name(q)] = v.lattice().name(v[q]);
    }
    return json{{"values", values}}.dump(2);
}

Valuation valuation_from_json(std::string_view text, const GameStructure& s, LatticePtr lattice) {
    const json j = parse(text, "valuation");
    return guarded("valuation", [&] {
        std::vector<Element> values(s.num_states(), lattice->bottom());
        std::vector<bool> seen(s.num_states(), false);
        for (const auto& [state, v] : j.at("values").items()) {
            const StateId q = s.state(state);
            values[q] = lattice->element(v.get<std::string>());
            seen[q] = true;
        }
        for (StateId q = 0; q < s.num_states(); ++q) {
            if (!seen[q]) {
                throw Error(ErrorCode::missing_values, "no value for state '" + s.state_name(q) + "'");
            }
        }
        return Valuation(lattice, std::move(values));
    });
}

} // namespace mvstrat
