#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "heisttrace/decimal.hpp"
#include "heisttrace/error.hpp"
#include "heisttrace/types.hpp"

using namespace heisttrace;
using namespace heisttrace::testing;

TEST_CASE("address parsing enforces the canonical shape") {
    CHECK_THROWS_AS(Address::parse("0xABCDEF" + std::string(32, '0')), Error);  // too short
    CHECK_THROWS_AS(Address::parse("0xABCDEF" + std::string(36, '0')), Error);  // too long
    CHECK_THROWS_AS(Address::parse(std::string(42, 'a')), Error);               // no prefix
    CHECK_THROWS_AS(Address::parse("0x" + std::string(39, 'a') + "g"), Error);  // non-hex

    const std::string wall = "0x" + std::string(40, 'a');
    CHECK(Address::parse(wall).str() == wall);

    // mixed case folds to the same address
    std::string mixed = "0x" + std::string(20, 'A') + std::string(20, 'a');
    CHECK(Address::parse(mixed) == Address::parse(wall));
}

TEST_CASE("address canonicalization is idempotent") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        Address a;
        for (auto& b : a.bytes) b = static_cast<std::uint8_t>(rng());
        CHECK(Address::parse(a.str()) == a);
    }
}

TEST_CASE("decimal arithmetic is exact and canonical") {
    CHECK(Decimal::parse("0.3") + Decimal::parse("0.7") == Decimal::parse("1"));
    CHECK((Decimal::parse("1.5") - Decimal::parse("1.5")).is_zero());
    CHECK(Decimal::parse("1.50").to_string() == "1.5");
    CHECK(Decimal::parse("-0.010").to_string() == "-0.01");
    CHECK(Decimal::parse("3").to_csv_string() == "3.0");
    CHECK(Decimal::from_units(15, 1) == Decimal::parse("1.5"));
    // base-unit form equals its display form
    CHECK(Decimal::from_units(Decimal::Int("1500000000000000000"), 18) == Decimal::parse("1.5"));
    CHECK(Decimal::parse("0.01") < Decimal::parse("0.0100001"));
    CHECK_FALSE(Decimal::parse("0.01") > Decimal::parse("0.01"));

    CHECK_THROWS_AS(Decimal::parse("1e5"), Error);
    CHECK_THROWS_AS(Decimal::parse("1."), Error);
    CHECK_THROWS_AS(Decimal::parse(".5"), Error);
    CHECK_THROWS_AS(Decimal::parse(""), Error);
}

TEST_CASE("decimal round-trips through its text form") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        auto units = static_cast<long long>(rng() % 1'000'000'000'000ull) -
                     500'000'000'000ll;
        auto scale = static_cast<std::uint32_t>(rng() % 19);
        auto d = Decimal::from_units(units, scale);
        CHECK(Decimal::parse(d.to_string()) == d);
        CHECK(Decimal::parse(d.to_csv_string()) == d);
    }
}

TEST_CASE("asset and transaction invariants are enforced") {
    CHECK_THROWS_AS(AssetRef::erc20(Address{}, std::nullopt, 37), Error);  // decimals > 36

    Transaction t = mk_eth_tx(1, mk_addr(1), mk_addr(2), "1.0", 10, 1);
    t.asset = AssetRef::erc20(mk_addr(99));
    CHECK_THROWS_AS(t.validate(), Error);  // external must move ether

    Transaction token = mk_token_tx(2, mk_addr(1), mk_addr(2), mk_addr(99), "1.0", 10, 1);
    CHECK_NOTHROW(token.validate());
    CHECK(token.asset.key().display() == "erc20:" + mk_addr(99).str());
}

TEST_CASE("label lookups default to Unknown") {
    LabelLibrary lib;
    lib.add(mk_addr(1), {"Binance", LabelCategory::CEX});
    CHECK(lib.category(mk_addr(1)) == LabelCategory::CEX);
    CHECK(lib.category(mk_addr(2)) == LabelCategory::Unknown);
    CHECK(lib.lookup(mk_addr(2)).name.empty());
}

TEST_CASE("case spec rejects duplicate placement addresses") {
    CaseSpec spec;
    spec.name = "dup";
    spec.placement = {mk_addr(1), mk_addr(1)};
    CHECK_THROWS_AS(spec.validate(), Error);
}

TEST_CASE("trace result validation catches structural violations") {
    TraceResult r;
    r.placement = {mk_addr(1)};
    r.layering = {mk_addr(2)};
    r.depth_of = {{mk_addr(1), 0}, {mk_addr(2), 1}};
    CHECK_NOTHROW(r.validate(20));

    SUBCASE("overlap between layering and placement") {
        r.layering.insert(mk_addr(1));
        CHECK_THROWS_AS(r.validate(20), Error);
    }
    SUBCASE("layering depth outside bounds") {
        r.depth_of[mk_addr(2)] = 25;
        CHECK_THROWS_AS(r.validate(20), Error);
    }
    SUBCASE("transaction touching no traced address") {
        r.transactions.push_back(mk_eth_tx(1, mk_addr(8), mk_addr(9), "1.0", 5, 1));
        CHECK_THROWS_AS(r.validate(20), Error);
    }
}
