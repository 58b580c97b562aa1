#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "mvstrat/error.hpp"
#include "mvstrat/io.hpp"

using namespace mvstrat;

namespace {

const std::filesystem::path kData = MVSTRAT_DATA_DIR;

ErrorCode error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::inconclusive;
}

} // namespace

TEST(Io, LatticeRoundTrip) {
    for (const auto& name : builtin_lattice_names()) {
        const auto l = load_lattice(name);
        const auto back = lattice_from_json(lattice_to_json(l));
        EXPECT_TRUE(back.lattice().equivalent(l.lattice())) << name;
        EXPECT_EQ(back.constants().size(), l.constants().size());
    }
}

TEST(Io, LatticeFileConstants) {
    const auto l = load_lattice((kData / "lattices" / "kleene3.json").string());
    EXPECT_EQ(l.lattice().name(l.resolve("unknown")), "u");
    EXPECT_EQ(l.resolve("u"), l.resolve("unknown"));
    EXPECT_EQ(error_of([] { (void)lattice_from_json("{\"elements\": [\"a\", \"b\"], \"hasse\": []}"); }),
              ErrorCode::not_a_lattice);
    EXPECT_EQ(error_of([] { (void)lattice_from_json("{ nope"); }), ErrorCode::io_error);
}

TEST(Io, ShippedModelsMatchBuiltins) {
    EXPECT_EQ(load_model((kData / "models" / "mmulti.json").string()).fingerprint(),
              builtin_model("paper:mmulti").fingerprint());
    EXPECT_EQ(load_model((kData / "models" / "mmulti_imperfect.json").string()).fingerprint(),
              builtin_model("paper:mmulti_imperfect").fingerprint());
}

TEST(Io, ModelRoundTrip) {
    for (const auto& name : builtin_model_names()) {
        const MvCGS m = builtin_model(name);
        const MvCGS back = model_from_json(model_to_json(m));
        EXPECT_EQ(back.fingerprint(), m.fingerprint()) << name;
        EXPECT_TRUE(validate(back).empty());
    }
}

TEST(Io, WeightedModel) {
    const MvCGS m = load_model((kData / "models" / "weighted.json").string());
    ASSERT_TRUE(m.weighted());
    EXPECT_TRUE(validate(m).empty());
    EXPECT_EQ(m.lattice().name(m.value("safe", m.structure().state("alarm"))), "bot");
    const MvCGS back = model_from_json(model_to_json(m));
    EXPECT_EQ(back.fingerprint(), m.fingerprint());
    const auto pruned = prune_designated(m, {m.weight_lattice()->top()});
    EXPECT_EQ(pruned.dead_ends.size(), 0U);
    EXPECT_EQ(pruned.model.structure().num_transitions(), 4U);
}

TEST(Io, ModelErrors) {
    EXPECT_EQ(error_of([] { (void)load_model("paper:unknown"); }), ErrorCode::unknown_model);
    EXPECT_EQ(error_of([] { (void)load_model("/nonexistent/model.json"); }), ErrorCode::io_error);
    EXPECT_EQ(error_of([] {
                  (void)model_from_json(R"({"agents": ["1"], "states": ["a"],
                      "transitions": [{"from": "a", "act": ["x"], "to": "b"}]})");
              }),
              ErrorCode::unknown_state);
    EXPECT_EQ(error_of([] {
                  (void)model_from_json(R"({"agents": ["1"], "states": ["a"], "epistemic": {"2": [["a"]]},
                      "transitions": [{"from": "a", "act": ["x"], "to": "a"}]})");
              }),
              ErrorCode::unknown_agent);
}

TEST(Io, MapsMatchBuiltins) {
    for (const auto& name : builtin_map_names()) {
        const MapGraph file = load_map((kData / "maps" / (name + ".json")).string());
        EXPECT_EQ(map_to_json(file), map_to_json(builtin_map(name))) << name;
        EXPECT_EQ(map_to_json(map_from_json(map_to_json(file))), map_to_json(file));
    }
    EXPECT_EQ(error_of([] { (void)map_from_json(R"({"locations": [{"id": 0}], "edges": [], "start": 4})"); }),
              ErrorCode::map_invalid);
}

TEST(Io, ValuationRoundTrip) {
    const MvCGS m = builtin_model("paper:mmulti");
    std::vector<Element> v;
    for (StateId q = 0; q < m.num_states(); ++q) {
        v.push_back(m.value("pol1", q));
    }
    const Valuation val(m.lattice_ptr(), v);
    EXPECT_EQ(valuation_from_json(valuation_to_json(m.structure(), val), m.structure(), m.lattice_ptr()), val);
    EXPECT_EQ(error_of([&] { (void)valuation_from_json(R"({"values": {}})", m.structure(), m.lattice_ptr()); }),
              ErrorCode::missing_values);
}
