#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "tegsim/config.hpp"
#include "tegsim/io.hpp"
#include "test_util.hpp"

using namespace tegsim;
using tegsim_test::code_of;

TEST_CASE("numbers render with twelve significant digits and no negative zero") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(100.0) == "100");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(1e-9) == "1e-09");
    CHECK(format_number(-2.5) == "-2.5");
    CHECK(format_number(-0.0) == "0");
}

TEST_CASE("snapshot rows round-trip byte for byte") {
    const std::vector<SnapshotRow> rows = {
        {0, "ubi", "A", 100.0},
        {1, "ubi", "B", 10.5},
    };
    const std::string text = snapshots_to_csv(rows);
    CHECK(text == "round,layer,player,balance\n0,ubi,A,100\n1,ubi,B,10.5\n");

    const auto back = snapshots_from_csv(text);
    REQUIRE(back.size() == 2);
    CHECK(back[0].round == 0);
    CHECK(back[0].player == "A");
    CHECK(back[1].balance == 10.5);

    CHECK(code_of([] { snapshots_from_csv(""); }) == errc::parse_error);
    CHECK(code_of([] { snapshots_from_csv("wrong,header\n"); }) == errc::parse_error);
    CHECK(code_of([&] { snapshots_from_csv(text + "1,ubi,B\n"); }) == errc::parse_error);
    CHECK(code_of([&] { snapshots_from_csv(text + "x,ubi,B,1\n"); }) == errc::parse_error);
    // Trailing newlines are tolerated; a blank row between data rows is not,
    // and the error carries its 1-based line number.
    CHECK(snapshots_from_csv("round,layer,player,balance\n0,ubi,A,100\n\n").size() == 1);
    try {
        snapshots_from_csv("round,layer,player,balance\n0,ubi,A,100\n\n1,ubi,B,2\n");
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("transaction logs survive a CSV round trip") {
    TransactionLog log;
    log.append({0, "alice", "bob", 4.0});
    log.append({2, "bob", "carol", 1.5});
    const std::string text = transactions_to_csv(log);
    CHECK(text == "round,sender,receiver,amount\n0,alice,bob,4\n2,bob,carol,1.5\n");

    const TransactionLog back = transactions_from_csv(text);
    REQUIRE(back.size() == 2);
    CHECK(back.records()[1].receiver == "carol");
    CHECK(back.records()[1].amount == 1.5);

    // Log-level rejections (here: a non-positive amount) surface as parse
    // errors naming the row.
    const auto bad = code_of(
        [] { transactions_from_csv("round,sender,receiver,amount\n0,a,b,0\n"); });
    CHECK(bad == errc::parse_error);
}

TEST_CASE("matrix CSV keeps triplets and infers the size") {
    TransferMatrix w(2);
    w.set(0, 0, 0.25);
    w.set(1, 0, 0.75);
    w.set(1, 1, 1.0);
    const std::string text = matrix_to_csv(w);
    CHECK(text == "row,col,weight\n0,0,0.25\n1,0,0.75\n1,1,1\n");

    const TransferMatrix back = matrix_from_csv(text);
    CHECK(back.size() == 2);
    CHECK(back.triplets() == w.triplets());

    // Explicit size wins over inference; too-small sizes are rejected.
    CHECK(matrix_from_csv(text, 5).size() == 5);
    CHECK(code_of([&] { matrix_from_csv(text, 1); }) == errc::parse_error);
    CHECK(code_of([] { matrix_from_csv("row,col,weight\n"); }) == errc::parse_error);
    CHECK(matrix_from_csv("row,col,weight\n", 3).entry_count() == 0);
    CHECK(code_of([] { matrix_from_csv("row,col,weight\n-1,0,1\n"); }) ==
          errc::parse_error);
}

TEST_CASE("fungibility CSV stores only posted directed rates") {
    FungibilityMatrix rho({"btc", "eur", "usd"});
    rho.set("usd", "eur", 0.9);
    rho.set("eur", "usd", 1.1);
    rho.set("btc", "usd", 50000.0);
    const std::string text = fungibility_to_csv(rho);

    const FungibilityMatrix back = fungibility_from_csv(text);
    CHECK(back.size() == 3);
    CHECK(back.rate("usd", "eur") == 0.9);
    CHECK(back.rate("eur", "usd") == 1.1);
    CHECK(back.rate("btc", "usd") == 50000.0);
    CHECK_FALSE(back.rate("usd", "btc").has_value()); // never posted
    CHECK(back.rate("usd", "usd") == 1.0);            // diagonal is implied

    // A layer with no posted rate in either direction leaves no trace.
    FungibilityMatrix sparse({"a", "b", "ghost"});
    sparse.set("a", "b", 2.0);
    CHECK(fungibility_from_csv(fungibility_to_csv(sparse)).size() == 2);

    // A self-rate row trips the matrix's own rules, surfaced as a parse error;
    // a merely bad value loads fine and is left for validate() to flag.
    CHECK(code_of([] { fungibility_from_csv("layer_a,layer_b,rate\na,a,2\n"); }) ==
          errc::parse_error);
    CHECK_FALSE(fungibility_from_csv("layer_a,layer_b,rate\na,b,-1\n").validate().ok);
}

TEST_CASE("pair-value tables parse under their declared value column") {
    const auto rows = pair_values_from_csv("layer_a,layer_b,kappa\nusd,eur,0.01\n", "kappa");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].a == "usd");
    CHECK(rows[0].b == "eur");
    CHECK(rows[0].value == 0.01);
    CHECK(code_of([] {
              pair_values_from_csv("layer_a,layer_b,kappa\nusd,eur,0.01\n", "mu");
          }) == errc::parse_error);
}

TEST_CASE("metrics rows leave the circulation cells empty when undefined") {
    std::vector<MetricsRow> rows;
    rows.push_back({0, "ubi", 100.0, 1.0, 0.7, 0.9});
    rows.push_back({1, "ubi", 100.0, 1.0, std::nullopt, std::nullopt});
    CHECK(metrics_to_csv(rows) ==
          "round,layer,supply,entropy_bits,zeta,zeta_star\n"
          "0,ubi,100,1,0.7,0.9\n"
          "1,ubi,100,1,,\n");
}

TEST_CASE("pairwise and bargaining rows serialize in declared field order") {
    CHECK(pairwise_to_csv({{2, "usd", "eur", 1.25}}) ==
          "round,layer_a,layer_b,x_r\n2,usd,eur,1.25\n");
    CHECK(bargaining_to_csv({{1, "dice", "a", "b", 0.5, "mean_a=4;mean_b=2"}}) ==
          "round,mechanism,layer_a,layer_b,rate,detail\n1,dice,a,b,0.5,mean_a=4;mean_b=2\n");
}

TEST_CASE("fingerprints use 64-bit FNV-1a with fixed-width hex") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(to_hex(0xcbf29ce484222325ull) == "cbf29ce484222325");
    CHECK(to_hex(0) == "0000000000000000");
}

TEST_CASE("text files round-trip and missing paths raise io errors") {
    const std::string path =
        (std::filesystem::temp_directory_path() / "tegsim_io_test.txt").string();
    write_text_file(path, "alpha\nbeta\n");
    CHECK(read_text_file(path) == "alpha\nbeta\n");
    std::remove(path.c_str());
    CHECK(code_of([&] { read_text_file(path); }) == errc::io_error);
}

TEST_CASE("configs parse every scenario kind") {
    const auto ubi = parse_config(R"({"scenario": {"kind": "ubi", "rounds": 10, "seed": 42,
        "ubi": {"omega": 100, "delta": 0.1, "epsilon": 0.5}}})", ".");
    CHECK(ubi.kind == ScenarioKind::ubi);
    CHECK(ubi.rounds == 10);
    CHECK(ubi.seed == 42);
    CHECK(ubi.ubi.omega == 100.0);
    CHECK(ubi.ubi.epsilon == 0.5);
    CHECK_FALSE(ubi.bargaining.any());

    const auto pr = parse_config(R"({"scenario": {"kind": "pagerank", "rounds": 50,
        "pagerank": {"pages": 3, "links": [[0, 1], [1, 0], [1, 2, 3]]}}})", ".");
    CHECK(pr.kind == ScenarioKind::pagerank);
    CHECK(pr.pagerank.pages == 3);
    CHECK(pr.pagerank.damping == 0.85); // default
    CHECK_FALSE(pr.pagerank.dangling_uniform);
    CHECK(pr.pagerank.links.at({1, 2}) == 3);

    const auto ln = parse_config(R"({"scenario": {"kind": "lightning", "rounds": 2,
        "lightning": {"players": {"zed": 50, "amy": 30}, "commitments": {"zed": 10}}}})", ".");
    CHECK(ln.lightning.players.size() == 2);
    CHECK(ln.lightning.players[0].first == "zed"); // file order, not sorted
    CHECK(ln.lightning.commitments[0].second == 10.0);

    const auto cr = parse_config(R"({"scenario": {"kind": "circles", "rounds": 3,
        "circles": {"trust_edges": [["a", "b"], ["b", "c"]], "attach_m": 1}}})", ".");
    CHECK(cr.circles.trust_edges.size() == 2);
    CHECK(cr.circles.attach_m == 1);

    const auto cu = parse_config(R"({"scenario": {"kind": "custom", "rounds": 1,
        "custom": {"players": {"a": 5}, "transactions": "tx.csv"}}})", "/data/runs");
    CHECK(cu.custom.transactions_file == "/data/runs/tx.csv");
    const auto cu_abs = parse_config(R"({"scenario": {"kind": "custom", "rounds": 1,
        "custom": {"players": {"a": 5}, "transactions": "/abs/tx.csv"}}})", "/data/runs");
    CHECK(cu_abs.custom.transactions_file == "/abs/tx.csv");
}

TEST_CASE("the optional bargaining block parses all three mechanisms") {
    const auto cfg = parse_config(R"({
        "scenario": {"kind": "ubi", "rounds": 1,
                     "ubi": {"omega": 1, "delta": 0, "epsilon": 0}},
        "bargaining": {
            "auction": {"item_layer": "gov", "quantity": 2,
                        "minimum_bids": {"usd": 1}, "bids":
                        [{"layer": "usd", "bidder": "walt", "amount": 3}]},
            "dice": {"sides_b": 20},
            "blind_vote": {"low": 1, "high": 2, "votes_a": [1, 2], "votes_b": [2]}
        }})", ".");
    REQUIRE(cfg.bargaining.any());
    REQUIRE(cfg.bargaining.auction.has_value());
    CHECK(cfg.bargaining.auction->bids.size() == 1);
    CHECK(cfg.bargaining.auction->minimum_bids.at("usd") == 1.0);
    REQUIRE(cfg.bargaining.dice.has_value());
    CHECK(cfg.bargaining.dice->sides_a == 6); // untouched default
    CHECK(cfg.bargaining.dice->sides_b == 20);
    REQUIRE(cfg.bargaining.blind_vote.has_value());
    CHECK(cfg.bargaining.blind_vote->votes_a.size() == 2);
}

TEST_CASE("config rejections name the offending key") {
    const auto unknown = [] {
        parse_config(R"({"scenario": {"kind": "ubi", "rounds": 1, "bogus": 7,
            "ubi": {"omega": 1, "delta": 0, "epsilon": 0}}})", ".");
    };
    CHECK(code_of(unknown) == errc::validation_error);
    try {
        unknown();
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("'bogus'") != std::string::npos);
    }

    // A scenario block that does not match the declared kind is an error.
    CHECK(code_of([] {
              parse_config(R"({"scenario": {"kind": "ubi", "rounds": 1,
            "ubi": {"omega": 1, "delta": 0, "epsilon": 0},
            "pagerank": {"pages": 1, "links": []}}})", ".");
          }) == errc::validation_error);

    CHECK(code_of([] { parse_config(R"({"scenario": {"kind": "nope", "rounds": 1}})", "."); }) ==
          errc::validation_error);
    CHECK(code_of([] {
              parse_config(R"({"scenario": {"kind": "ubi",
            "ubi": {"omega": 1, "delta": 0, "epsilon": 0}}})", ".");
          }) == errc::validation_error); // rounds missing
    CHECK(code_of([] {
              parse_config(R"({"scenario": {"kind": "ubi", "rounds": -1,
            "ubi": {"omega": 1, "delta": 0, "epsilon": 0}}})", ".");
          }) == errc::validation_error);
    CHECK(code_of([] {
              parse_config(R"({"scenario": {"kind": "ubi", "rounds": 1, "seed": -3,
            "ubi": {"omega": 1, "delta": 0, "epsilon": 0}}})", ".");
          }) == errc::validation_error);
    CHECK(code_of([] {
              parse_config(R"({"scenario": {"kind": "ubi", "rounds": "ten",
            "ubi": {"omega": 1, "delta": 0, "epsilon": 0}}})", ".");
          }) == errc::validation_error);
    CHECK(code_of([] { parse_config("{not json", "."); }) == errc::parse_error);
    CHECK(code_of([] { parse_config("[1, 2]", "."); }) == errc::validation_error);
}

TEST_CASE("configs load from disk relative to their own directory") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "tegsim_cfg_test";
    fs::create_directories(dir);
    write_text_file((dir / "run.json").string(),
                    R"({"scenario": {"kind": "custom", "rounds": 1,
                        "custom": {"players": {"a": 5}, "transactions": "tx.csv"}}})");
    const auto cfg = load_config((dir / "run.json").string());
    CHECK(cfg.custom.transactions_file == (dir / "tx.csv").string());
    CHECK(code_of([&] { load_config((dir / "absent.json").string()); }) == errc::io_error);
    fs::remove_all(dir);
}
