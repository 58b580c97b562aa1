#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "mvstrat/drones.hpp"
#include "mvstrat/io.hpp"

using namespace mvstrat;

namespace {

const std::filesystem::path kData = MVSTRAT_DATA_DIR;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "mvstrat");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) {
        out.push_back(line);
    }
    return out;
}

} // namespace

TEST(Cli, VerifyExampleValue) {
    const auto r = run({"verify", "--model", "paper:mmulti", "--formula", "<<1>> F pol1", "--state", "(0,0)"});
    EXPECT_EQ(r.code, cli::exit_ok) << r.err;
    EXPECT_NE(r.out.find("(0,0): top\n"), std::string::npos) << r.out;
}

TEST(Cli, VerifyImperfectAndOracleAgree) {
    const std::vector<std::string> base{"verify", "--model", "paper:mmulti_imperfect", "--semantics", "ir",
                                        "--formula", "<<1,2>> F (target & allvisited & (pol1|pol2))",
                                        "--state", "(0,0)", "--output", "json"};
    const auto a = run(base);
    auto with_oracle = base;
    with_oracle.insert(with_oracle.end(), {"--algorithm", "oracle"});
    const auto b = run(with_oracle);
    ASSERT_EQ(a.code, cli::exit_ok) << a.err;
    ASSERT_EQ(b.code, cli::exit_ok) << b.err;
    const auto ja = nlohmann::json::parse(a.out);
    const auto jb = nlohmann::json::parse(b.out);
    EXPECT_EQ(ja.at("value"), "bot");
    EXPECT_EQ(ja.at("values"), jb.at("values"));
}

TEST(Cli, JsonRoundTripsIntoValuation) {
    const auto r = run({"verify", "--model", "paper:mmulti", "--formula", "<<1>> G pol1", "--output", "json"});
    ASSERT_EQ(r.code, cli::exit_ok) << r.err;
    const MvCGS m = builtin_model("paper:mmulti");
    const auto j = nlohmann::json::parse(r.out);
    const Valuation v = valuation_from_json(nlohmann::json{{"values", j.at("values")}}.dump(), m.structure(),
                                            m.lattice_ptr());
    const auto expected = gmcheck_rec(m, parse_formula("<<1>> G pol1")).value();
    EXPECT_EQ(v, expected);
    EXPECT_EQ(j.at("timings").size(), 6U);
    EXPECT_TRUE(j.at("conclusive").get<bool>());
}

TEST(Cli, CsvOutput) {
    const auto r = run({"verify", "--model", "paper:mmulti", "--formula", "pol1", "--output", "csv"});
    ASSERT_EQ(r.code, cli::exit_ok);
    const auto l = lines(r.out);
    ASSERT_EQ(l.size(), 8U);
    EXPECT_EQ(l[0], "state,lower,upper");
    EXPECT_EQ(l[1], "(0,0),undec,undec");
}

TEST(Cli, FormulaFromFileAndLatticeFlag) {
    const auto path = std::filesystem::temp_directory_path() / "mvstrat-cli-formula.txt";
    {
        std::ofstream(path) << "#undec -> <<1>> G pol1\n";
    }
    const auto r = run({"verify", "--model", (kData / "models" / "mmulti.json").string(), "--lattice",
                        "2+2x2+2x2", "--formula", "@" + path.string(), "--state", "(0,0)"});
    EXPECT_EQ(r.code, cli::exit_ok) << r.err;
    EXPECT_NE(r.out.find("(0,0): top"), std::string::npos);
    const auto bad = run({"verify", "--model", (kData / "models" / "mmulti.json").string(), "--lattice", "3",
                          "--formula", "pol1"});
    EXPECT_EQ(bad.code, cli::exit_error);
    EXPECT_NE(bad.err.find("LatticeMismatch"), std::string::npos) << bad.err;
    std::filesystem::remove(path);
}

TEST(Cli, DesignatedPruning) {
    const auto model = (kData / "models" / "weighted.json").string();
    const auto ok = run({"verify", "--model", model, "--designated", "U,top", "--formula", "<<ctrl>> G safe"});
    EXPECT_EQ(ok.code, cli::exit_ok) << ok.err;
    // Without the U edge, busy -> alarm disappears; alarm keeps its loop.
    const auto must = run({"verify", "--model", model, "--designated", "top", "--formula", "[[ctrl]] F working",
                           "--output", "csv"});
    EXPECT_EQ(must.code, cli::exit_ok) << must.err;
    const auto missing = run({"verify", "--model", "paper:mmulti", "--designated", "top", "--formula", "pol1"});
    EXPECT_EQ(missing.code, cli::exit_error);
}

TEST(Cli, DesignatedReachableDeadEndAborts) {
    const auto path = std::filesystem::temp_directory_path() / "mvstrat-cli-dead.json";
    {
        std::ofstream(path) << R"({"lattice": "2",
            "weight_lattice": {"elements": ["bot", "U", "top"], "hasse": [["bot", "U"], ["U", "top"]]},
            "agents": ["1"], "states": ["a", "b"],
            "transitions": [{"from": "a", "act": ["x"], "to": "b", "weight": "top"},
                            {"from": "b", "act": ["x"], "to": "b", "weight": "U"}]})";
    }
    const auto r = run({"verify", "--model", path.string(), "--designated", "top", "--formula", "<<1>> X #true"});
    EXPECT_EQ(r.code, cli::exit_error);
    EXPECT_NE(r.err.find("dead ends after pruning: b"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("DeadEnd"), std::string::npos) << r.err;
    std::filesystem::remove(path);
}

TEST(Cli, InconclusiveExitCode) {
    // A model where the lower approximation loses a uniform strategy that
    // perfect information has: agent 1 cannot tell s0 from s1 and needs
    // different actions there.
    const auto path = std::filesystem::temp_directory_path() / "mvstrat-cli-ir.json";
    {
        std::ofstream(path) << R"({"lattice": "2", "agents": ["1"], "states": ["s0", "s1", "good", "bad"],
            "transitions": [
              {"from": "s0", "act": ["l"], "to": "good"}, {"from": "s0", "act": ["r"], "to": "bad"},
              {"from": "s1", "act": ["l"], "to": "bad"}, {"from": "s1", "act": ["r"], "to": "good"},
              {"from": "good", "act": ["l"], "to": "good"}, {"from": "good", "act": ["r"], "to": "good"},
              {"from": "bad", "act": ["l"], "to": "bad"}, {"from": "bad", "act": ["r"], "to": "bad"}],
            "valuation": {"win": {"good": "top"}},
            "epistemic": {"1": [["s0", "s1"], ["good"], ["bad"]]}})";
    }
    const auto exact = run({"verify", "--model", path.string(), "--semantics", "ir", "--formula", "<<1>> X win",
                            "--state", "s0"});
    EXPECT_EQ(exact.code, cli::exit_ok) << exact.err;
    EXPECT_NE(exact.out.find("s0: top"), std::string::npos) << exact.out;
    const auto approx = run({"verify", "--model", path.string(), "--semantics", "ir-approx", "--algorithm",
                             "translate", "--formula", "<<1>> X win", "--state", "s0"});
    EXPECT_EQ(approx.code, cli::exit_inconclusive) << approx.out << approx.err;
    EXPECT_NE(approx.out.find("inconclusive"), std::string::npos);
    std::filesystem::remove(path);
}

TEST(Cli, Errors) {
    EXPECT_EQ(run({}).code, cli::exit_error);
    EXPECT_EQ(run({"verify", "--model", "paper:mmulti"}).code, cli::exit_error);
    const auto syntax = run({"verify", "--model", "paper:mmulti", "--formula", "pol1 &"});
    EXPECT_EQ(syntax.code, cli::exit_error);
    EXPECT_NE(syntax.err.find("error: SyntaxError"), std::string::npos) << syntax.err;
    EXPECT_EQ(run({"verify", "--model", "paper:mmulti", "--formula", "pol1", "--state", "nowhere"}).code,
              cli::exit_error);
    EXPECT_EQ(run({"verify", "--model", "paper:mmulti", "--formula", "pol1", "--semantics", "magic"}).code,
              cli::exit_error);
    EXPECT_EQ(run({"verify", "--model", "paper:mmulti", "--formula", "pol1 -> pol2", "--algorithm", "translate"}).code,
              cli::exit_error);
    EXPECT_EQ(run({"--help"}).code, cli::exit_ok);
}

TEST(Cli, Determinism) {
    const std::vector<std::string> args{"verify", "--model", "paper:mmulti", "--formula", "<<1,2>> G (pol1 | pol2)",
                                        "--output", "csv"};
    EXPECT_EQ(run(args).out, run(args).out);
}

TEST(Cli, BenchHeaderAndRows) {
    const auto r = run({"bench", "--map", "grid12", "--drones", "1", "--energy", "0-3"});
    ASSERT_EQ(r.code, cli::exit_ok) << r.err;
    const auto l = lines(r.out);
    ASSERT_EQ(l.size(), 5U);
    EXPECT_EQ(l[0], "drones,energy,states,tgen,tverif_lower,tverif_upper,output");
    EXPECT_EQ(l[1].substr(0, 6), "1,0,1,");
    for (std::size_t i = 1; i < l.size(); ++i) {
        EXPECT_EQ(std::count(l[i].begin(), l[i].end(), ','), 6) << l[i];
        EXPECT_EQ(l[i].find(".."), std::string::npos) << l[i];
    }
}

TEST(Cli, BenchTimeoutAndErrorCells) {
    const auto t = run({"bench", "--drones", "2", "--energy", "6", "--timeout", "0.000001"});
    EXPECT_EQ(t.code, cli::exit_ok);
    EXPECT_NE(t.out.find("timeout"), std::string::npos) << t.out;
    const auto e = run({"bench", "--drones", "2", "--energy", "1-2", "--state-cap", "5"});
    EXPECT_EQ(e.code, cli::exit_ok);
    EXPECT_NE(e.out.find("error:StateSpaceCapExceeded"), std::string::npos) << e.out;
    EXPECT_EQ(lines(e.out).size(), 3U);
}

TEST(Cli, BenchOtherFormulas) {
    for (const char* f : {"phi1L", "phi2R"}) {
        const auto r = run({"bench", "--map", (kData / "maps" / "square4.json").string(), "--drones", "1-2", "--energy",
                            "0-2", "--formula", f});
        EXPECT_EQ(r.code, cli::exit_ok) << r.err;
        EXPECT_EQ(lines(r.out).size(), 7U);
        EXPECT_EQ(r.out.find("error"), std::string::npos) << r.out;
    }
}

TEST(Cli, ParseRange) {
    EXPECT_EQ(cli::parse_range("3"), (std::vector<std::size_t>{3}));
    EXPECT_EQ(cli::parse_range("1-4"), (std::vector<std::size_t>{1, 2, 3, 4}));
    EXPECT_EQ(cli::parse_range("1,2,5"), (std::vector<std::size_t>{1, 2, 5}));
    EXPECT_THROW((void)cli::parse_range("4-1"), Error);
    EXPECT_THROW((void)cli::parse_range("x"), Error);
}
