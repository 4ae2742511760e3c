#include <doctest.h>

#include "tegsim/ledger.hpp"
#include "test_util.hpp"

using namespace tegsim;
using tegsim_test::code_of;

TEST_CASE("ledger stores insertion-ordered unique labels") {
    Ledger book;
    book.set("alice", 10);
    book.set("bob", 5);
    book.set("alice", 7); // overwrite, not duplicate
    CHECK(book.size() == 2);
    CHECK(book.balance("alice") == 7);
    CHECK(book.total() == 12);
    CHECK(book.entries()[0].first == "alice");
    CHECK(book.entries()[1].first == "bob");
    CHECK(book.contains("bob"));
    CHECK_FALSE(book.contains("carol"));
    CHECK(code_of([&] { (void)book.balance("carol"); }) == errc::unknown_player);
}

TEST_CASE("ledger rejects negative balances and unsafe labels") {
    Ledger book;
    CHECK(code_of([&] { book.set("alice", -1); }) == errc::validation_error);
    CHECK(code_of([&] { book.set("", 1); }) == errc::validation_error);
    CHECK(code_of([&] { book.set("a,b", 1); }) == errc::validation_error);
    CHECK(code_of([&] { book.set("a\"b", 1); }) == errc::validation_error);
    CHECK(code_of([&] { book.set("a\nb", 1); }) == errc::validation_error);
    CHECK(book.size() == 0);
    CHECK_NOTHROW(Ledger::check_label("plain-label_3"));
}

TEST_CASE("tokenise is greedy largest-first and never overshoots") {
    const TokenSet tokens{{2, 5, 10}, 2};
    const auto counts = tokenise(17, tokens);
    REQUIRE(counts.size() == 3);
    CHECK(counts[0].denomination == 10);
    CHECK(counts[0].count == 1);
    CHECK(counts[1].denomination == 5);
    CHECK(counts[1].count == 1);
    CHECK(counts[2].denomination == 2);
    CHECK(counts[2].count == 1);
}

TEST_CASE("tokenise leaves the sub-denomination residual unrepresented") {
    const TokenSet tokens{{1, 2}, 1};
    const auto counts = tokenise(3.7, tokens);
    REQUIRE(counts.size() == 2);
    CHECK(counts[0].denomination == 2);
    CHECK(counts[0].count == 1);
    CHECK(counts[1].denomination == 1);
    CHECK(counts[1].count == 1);
    double represented = 0;
    for (const auto& c : counts) represented += c.denomination * c.count;
    CHECK(3.7 - represented == doctest::Approx(0.7));
}

TEST_CASE("tokenise validates inputs") {
    CHECK(code_of([] { tokenise(1, TokenSet{{}, 1}); }) == errc::empty_token_set);
    CHECK(code_of([] { tokenise(1, TokenSet{{2, 2}, 1}); }) == errc::validation_error);
    CHECK(code_of([] { tokenise(1, TokenSet{{5, 2}, 1}); }) == errc::validation_error);
    CHECK(code_of([] { tokenise(-1, TokenSet{{1}, 1}); }) == errc::validation_error);
    CHECK(tokenise(0, TokenSet{{1}, 1}).empty());
    CHECK(tokenise(0.5, TokenSet{{1}, 1}).empty()); // below the smallest denomination
}

TEST_CASE("token set validation ties resolution to the smallest denomination") {
    Ledger book;
    book.set("A", 1);

    // t_min == epsilon is allowed: the bound is t_min <= epsilon.
    CHECK(validate_token_set(TokenSet{{2}, 2}, book).ok);
    // t_min above epsilon means balances cannot be resolved finely enough.
    const auto bad = validate_token_set(TokenSet{{2}, 1}, book);
    CHECK_FALSE(bad.ok);
    CHECK(bad.detail.find("epsilon") != std::string::npos);

    Ledger rich;
    rich.set("A", 17);
    rich.set("B", 3.7);
    CHECK(validate_token_set(TokenSet{{1, 2, 5}, 1}, rich).ok);
}

TEST_CASE("ledger sequence wants rounds from zero, strictly increasing") {
    LedgerSequence seq;
    Ledger book;
    book.set("A", 1);
    CHECK(code_of([&] { seq.append(1, book); }) == errc::validation_error);
    seq.append(0, book);
    CHECK(code_of([&] { seq.append(0, book); }) == errc::validation_error);
    seq.append(3, book); // gaps are fine, going backwards is not
    CHECK(code_of([&] { seq.append(2, book); }) == errc::validation_error);
    CHECK(seq.size() == 2);
    CHECK(seq.back().first == 3);
}
