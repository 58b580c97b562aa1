#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mvstrat/drones.hpp"
#include "mvstrat/error.hpp"
#include "mvstrat/formula.hpp"
#include "mvstrat/io.hpp"
#include "mvstrat/mvmc.hpp"

namespace mvstrat::cli {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fixed(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool is_builtin_lattice(const std::string& name) {
    for (const auto& n : builtin_lattice_names()) {
        if (n == name) {
            return true;
        }
    }
    return false;
}

MvCGS load_model_with(const VerifyOptions& o) {
    if (o.model.rfind("paper:", 0) == 0) {
        MvCGS m = load_model(o.model);
        if (o.lattice && !load_lattice(*o.lattice).lattice().equivalent(m.lattice())) {
            throw Error(ErrorCode::lattice_mismatch, "--lattice does not match the lattice of " + o.model);
        }
        return m;
    }
    const std::filesystem::path path(o.model);
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::io_error, path.string() + ": " + e.what());
    }
    if (o.lattice && !j.contains("lattice")) {
        j["lattice"] = is_builtin_lattice(*o.lattice) ? *o.lattice : std::filesystem::absolute(*o.lattice).string();
    }
    MvCGS m = model_from_json(j.dump(), path.parent_path());
    if (o.lattice && !load_lattice(*o.lattice).lattice().equivalent(m.lattice())) {
        throw Error(ErrorCode::lattice_mismatch, "--lattice does not match the lattice of " + o.model);
    }
    return m;
}

Semantics parse_semantics(const std::string& s) {
    if (s == "perfect") {
        return Semantics::perfect;
    }
    if (s == "ir") {
        return Semantics::ir_exact;
    }
    return Semantics::ir_approx;
}

Algorithm parse_algorithm(const std::string& s) {
    if (s == "translate") {
        return Algorithm::translate;
    }
    if (s == "oracle") {
        return Algorithm::oracle;
    }
    return Algorithm::recursive;
}

std::unique_ptr<ProjectionCache> cache_from_env() {
    const char* dir = std::getenv("MVSTRAT_CACHE_DIR");
    if (dir == nullptr || *dir == '\0') {
        return nullptr;
    }
    return std::make_unique<ProjectionCache>(dir);
}

std::string describe(const GameStructure& s, const UniformStrategy& w) {
    std::string out;
    for (std::size_t i = 0; i < w.agents.size(); ++i) {
        const AgentId a = w.agents[i];
        out += (i ? "; " : "") + std::string("agent ") + s.agent_name(a) + ":";
        for (std::uint32_t c = 0; c < w.actions[i].size(); ++c) {
            const ActionId x = w.actions[i][c];
            if (x == no_position) {
                continue;
            }
            out += " {";
            auto members = s.class_members(a, c);
            for (std::size_t k = 0; k < members.size(); ++k) {
                out += (k ? "," : "") + s.state_name(members[k]);
            }
            out += "}->" + s.action_name(x);
        }
    }
    return out;
}

int verify(const VerifyOptions& o, std::ostream& out, std::ostream& err) {
    const auto start = Clock::now();
    std::string text = o.formula;
    if (!text.empty() && text[0] == '@') {
        text = trim(read_file(text.substr(1)));
    }

    MvCGS model = load_model_with(o);
    if (!o.designated.empty()) {
        if (!model.weighted()) {
            throw Error(ErrorCode::invalid_model, "--designated needs a model with transition weights");
        }
        std::vector<Element> d;
        for (const auto& name : o.designated) {
            d.push_back(model.weight_lattice()->element(name));
        }
        auto pruned = prune_designated(model, d);
        model = std::move(pruned.model);
        if (!pruned.dead_ends.empty()) {
            err << "dead ends after pruning:";
            for (StateId q : pruned.dead_ends) {
                err << ' ' << model.structure().state_name(q);
            }
            err << '\n';
        }
        const auto reachable = reachable_dead_ends(model.structure());
        if (!reachable.empty()) {
            throw Error(ErrorCode::dead_end,
                        "state '" + model.structure().state_name(reachable.front()) + "' is reachable");
        }
    }
    if (auto violations = validate(model); !violations.empty()) {
        std::string msg;
        for (const auto& v : violations) {
            msg += "\n  " + v.message;
        }
        throw Error(ErrorCode::invalid_model, "model is not valid:" + msg);
    }

    Formula f = [&] {
        try {
            return parse_formula(text, &model.structure().agents());
        } catch (const SyntaxError& e) {
            throw Error(ErrorCode::syntax_error, e.message() + " in formula '" + text + "'");
        }
    }();

    std::optional<StateId> state;
    if (o.state) {
        state = model.structure().state(*o.state);
    }

    auto cache = cache_from_env();
    CheckerConfig cfg;
    cfg.semantics = parse_semantics(o.semantics);
    cfg.algorithm = parse_algorithm(o.algorithm);
    cfg.parallelism = o.parallel;
    cfg.strategy_cap = o.strategy_cap;
    cfg.cache = cache.get();
    if (o.timeout > 0) {
        cfg.deadline = Deadline::after(std::chrono::duration<double>(o.timeout));
    }

    const CheckOutcome result = check(model, f, cfg);
    const double total = seconds_since(start);
    const GameStructure& s = model.structure();
    const Lattice& l = model.lattice();

    std::vector<StateId> shown;
    if (state) {
        shown.push_back(*state);
    } else {
        for (StateId q = 0; q < s.num_states(); ++q) {
            shown.push_back(q);
        }
    }
    bool conclusive = true;
    for (StateId q : shown) {
        conclusive = conclusive && result.conclusive(q);
    }

    if (o.output == "json") {
        json j;
        j["formula"] = to_string(f);
        j["semantics"] = o.semantics;
        j["algorithm"] = o.algorithm;
        j["conclusive"] = conclusive;
        json values = json::object();
        json lower = json::object();
        json upper = json::object();
        for (StateId q : shown) {
            if (result.conclusive(q)) {
                values[s.state_name(q)] = l.name(result.lower[q]);
            }
            lower[s.state_name(q)] = l.name(result.lower[q]);
            upper[s.state_name(q)] = l.name(result.upper[q]);
        }
        if (state) {
            j["state"] = s.state_name(*state);
            if (conclusive) {
                j["value"] = l.name(result.lower[*state]);
            }
        }
        j["values"] = values;
        if (!conclusive) {
            j["lower"] = lower;
            j["upper"] = upper;
        }
        json timings = json::array();
        for (const auto& t : result.timings) {
            timings.push_back({{"level", l.name(t.level)}, {"seconds", t.seconds}});
        }
        j["timings"] = timings;
        j["total_seconds"] = total;
        if (!result.witnesses.empty()) {
            json w = json::array();
            for (const auto& lw : result.witnesses) {
                w.push_back({{"level", l.name(lw.level)}, {"strategy", describe(s, lw.strategy)}});
            }
            j["witnesses"] = w;
        }
        out << j.dump(2) << '\n';
    } else if (o.output == "csv") {
        out << "state,lower,upper\n";
        for (StateId q : shown) {
            out << s.state_name(q) << ',' << l.name(result.lower[q]) << ',' << l.name(result.upper[q]) << '\n';
        }
    } else {
        out << "formula: " << to_string(f) << '\n';
        out << "semantics: " << o.semantics << ", algorithm: " << o.algorithm << '\n';
        for (StateId q : shown) {
            out << s.state_name(q) << ": ";
            if (result.conclusive(q)) {
                out << l.name(result.lower[q]) << '\n';
            } else {
                out << "inconclusive [" << l.name(result.lower[q]) << ", " << l.name(result.upper[q]) << "]\n";
            }
        }
        for (const auto& lw : result.witnesses) {
            out << "witness at " << l.name(lw.level) << ": " << describe(s, lw.strategy) << '\n';
        }
        out << "time: " << fixed(total) << " s\n";
    }
    return conclusive ? exit_ok : exit_inconclusive;
}

struct Cell {
    std::string states = "-";
    std::string tgen = "-";
    std::string lower = "-";
    std::string upper = "-";
    std::string output = "-";
};

Cell bench_cell(const BenchOptions& o, const MapGraph& map, std::size_t drones, std::size_t energy) {
    Cell c;
    DroneConfig dc;
    dc.drones = drones;
    dc.energy = energy;
    dc.strict_moves = o.strict_moves;
    dc.visited = o.visited == "off"  ? VisitedTracking::off
                 : o.visited == "set" ? VisitedTracking::full_set
                                      : VisitedTracking::compact;
    dc.epistemic = o.epistemic;
    dc.state_cap = o.state_cap;
    Deadline deadline;
    if (o.timeout > 0) {
        deadline = Deadline::after(std::chrono::duration<double>(o.timeout));
    }
    dc.deadline = deadline;

    std::string* stage = &c.tgen;
    try {
        auto start = Clock::now();
        const MvCGS m = gen_drones(map, dc);
        c.tgen = fixed(seconds_since(start));
        c.states = std::to_string(m.num_states());

        Formula f = phi1_right(1);
        if (o.formula == "phi1L") {
            f = phi1_left(1);
        } else if (o.formula == "phi2R") {
            const std::string loc = o.location ? *o.location : map.target.value_or(map.start);
            f = phi2_right(drones, loc);
        }

        CheckerConfig cfg;
        cfg.algorithm = Algorithm::translate;
        cfg.parallelism = o.parallel;
        cfg.deadline = deadline;
        cfg.semantics = o.epistemic ? Semantics::ir_lower : Semantics::perfect;
        stage = &c.lower;
        start = Clock::now();
        const auto lower = gmcheck_tr(m, f, cfg);
        c.lower = fixed(seconds_since(start));

        cfg.semantics = o.epistemic ? Semantics::ir_upper : Semantics::perfect;
        stage = &c.upper;
        start = Clock::now();
        const auto upper = gmcheck_tr(m, f, cfg);
        c.upper = fixed(seconds_since(start));

        const Lattice& l = m.lattice();
        const StateId q0 = m.structure().initial();
        const Element lo = lower.lower[q0];
        const Element hi = upper.upper[q0];
        c.output = lo == hi ? l.name(lo) : l.name(lo) + ".." + l.name(hi);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::timeout) {
            *stage = "timeout";
            c.output = "timeout";
        } else {
            c.output = "error:" + std::string(to_string(e.code()));
        }
    }
    return c;
}

int bench(const BenchOptions& o, std::ostream& out, std::ostream& err) {
    const MapGraph map = load_map(o.map);
    const auto drones = parse_range(o.drones);
    const auto energy = parse_range(o.energy);
    out << bench_header << '\n';
    int status = exit_ok;
    for (std::size_t k : drones) {
        for (std::size_t e : energy) {
            const Cell c = bench_cell(o, map, k, e);
            out << k << ',' << e << ',' << c.states << ',' << c.tgen << ',' << c.lower << ',' << c.upper << ','
                << c.output << '\n';
            out.flush();
            if (c.output.rfind("error:", 0) == 0) {
                err << "cell drones=" << k << " energy=" << e << ": " << c.output << '\n';
            }
        }
    }
    return status;
}

template <class F>
int guarded(std::ostream& err, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_error;
    }
}

} // namespace

std::vector<std::size_t> parse_range(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string part;
    auto number = [&](const std::string& s) {
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(s, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != s.size() || s.empty()) {
            throw Error(ErrorCode::io_error, "bad range '" + text + "'");
        }
        return static_cast<std::size_t>(v);
    };
    while (std::getline(ss, part, ',')) {
        part = trim(part);
        const auto dash = part.find('-');
        if (dash == std::string::npos) {
            out.push_back(number(part));
            continue;
        }
        const auto lo = number(trim(part.substr(0, dash)));
        const auto hi = number(trim(part.substr(dash + 1)));
        if (hi < lo) {
            throw Error(ErrorCode::io_error, "bad range '" + text + "'");
        }
        for (auto i = lo; i <= hi; ++i) {
            out.push_back(i);
        }
    }
    if (out.empty()) {
        throw Error(ErrorCode::io_error, "empty range");
    }
    return out;
}

int run_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] { return verify(opts, out, err); });
}

int run_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] { return bench(opts, out, err); });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Model checking of strategic abilities over multi-valued game structures"};
    app.require_subcommand(1);

    VerifyOptions v;
    auto* verify_cmd = app.add_subcommand("verify", "Check a formula on a model");
    verify_cmd->add_option("--lattice", v.lattice, "Lattice file or built-in name");
    verify_cmd->add_option("--model", v.model, "Model file or built-in name")->required();
    verify_cmd->add_option("--formula", v.formula, "Formula text or @file")->required();
    verify_cmd->add_option("--semantics", v.semantics)->check(CLI::IsMember({"perfect", "ir", "ir-approx"}));
    verify_cmd->add_option("--algorithm", v.algorithm)->check(CLI::IsMember({"translate", "recursive", "oracle"}));
    verify_cmd->add_option("--state", v.state, "Report only this state");
    verify_cmd->add_option("--designated", v.designated, "Designated weights; prunes the model")->delimiter(',');
    verify_cmd->add_option("--output", v.output)->check(CLI::IsMember({"text", "json", "csv"}));
    verify_cmd->add_option("--parallel", v.parallel)->check(CLI::PositiveNumber);
    verify_cmd->add_option("--timeout", v.timeout, "Seconds");
    verify_cmd->add_option("--strategy-cap", v.strategy_cap);

    BenchOptions b;
    auto* bench_cmd = app.add_subcommand("bench", "Drone benchmark over a grid of drones and energy");
    bench_cmd->add_option("--map", b.map, "Map file or built-in name");
    bench_cmd->add_option("--drones", b.drones, "e.g. 1-3");
    bench_cmd->add_option("--energy", b.energy, "e.g. 0-4");
    bench_cmd->add_option("--formula", b.formula)->check(CLI::IsMember({"phi1L", "phi1R", "phi2R"}));
    bench_cmd->add_option("--location", b.location, "Location of phi2R (default: map target)");
    bench_cmd->add_option("--timeout", b.timeout, "Seconds per cell");
    bench_cmd->add_option("--parallel", b.parallel)->check(CLI::PositiveNumber);
    bench_cmd->add_option("--visited", b.visited)->check(CLI::IsMember({"off", "set", "compact"}));
    bench_cmd->add_option("--state-cap", b.state_cap);
    bool lax = false;
    bool perfect = false;
    bench_cmd->add_flag("--lax-moves", lax, "Offer every direction; moves without an edge fail");
    bench_cmd->add_flag("--perfect-information", perfect, "No epistemic relations");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? exit_ok : exit_error;
    }
    if (verify_cmd->parsed()) {
        return run_verify(v, out, err);
    }
    b.strict_moves = !lax;
    b.epistemic = !perfect;
    return run_bench(b, out, err);
}

} // namespace mvstrat::cli
