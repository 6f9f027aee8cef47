#include <doctest.h>

#include <cmath>
#include <limits>

#include "eeb/error.hpp"
#include "eeb/market.hpp"

using namespace eeb;

TEST_CASE("market parameters are validated") {
    CHECK_NOTHROW(MarketParams{0.03, 0.02, 0.3}.validate());
    CHECK_NOTHROW(MarketParams{0.0, 0.0, 0.3}.validate());
    CHECK_THROWS_AS(MarketParams({0.03, 0.02, 0.0}).validate(), InvalidSpec);
    CHECK_THROWS_AS(MarketParams({-0.01, 0.02, 0.3}).validate(), InvalidSpec);
    CHECK_THROWS_AS(MarketParams({0.01, -0.02, 0.3}).validate(), InvalidSpec);
    CHECK_THROWS_AS(MarketParams({std::nan(""), 0.02, 0.3}).validate(), InvalidSpec);
}

TEST_CASE("kind names round-trip") {
    for (Kind k : all_kinds()) {
        const auto back = parse_kind(kind_name(k));
        REQUIRE(back.has_value());
        CHECK(*back == k);
    }
    CHECK_FALSE(parse_kind("condor").has_value());
    CHECK_FALSE(parse_kind("bermudan_call").has_value());
}

TEST_CASE("factories enforce their orderings") {
    CHECK_THROWS_AS(make_condor(1, 1, 4, 5), InvalidSpec);
    CHECK_THROWS_AS(make_condor(1, 4, 3, 5), InvalidSpec);
    CHECK_THROWS_AS(make_condor(1, 3, 5, 5), InvalidSpec);
    CHECK_NOTHROW(make_condor(1, 3, 3, 5));
    CHECK_THROWS_AS(make_vanilla(OptionType::Call, 0.0), InvalidSpec);
    CHECK_THROWS_AS(make_vanilla(OptionType::Call, 1.0, -1.0), InvalidSpec);
    CHECK_THROWS_AS(make_strategy({{1.0, 3.0}, {1.0, 2.0}}), InvalidSpec);
    CHECK_THROWS_AS(make_asian(OptionType::Call, AveragingSpec::weighted(1.0, -0.5)), InvalidSpec);
    CHECK_THROWS_AS(make_british(OptionType::Put, std::numeric_limits<double>::infinity(), 1.0), InvalidSpec);
}

TEST_CASE("averaging presets") {
    CHECK(AveragingSpec::arithmetic().is_arithmetic());
    CHECK(AveragingSpec::geometric().is_geometric());
    CHECK_FALSE(AveragingSpec::geometric().is_extremum());
    CHECK(AveragingSpec::minimum().is_extremum());
    CHECK(AveragingSpec::maximum().is_extremum());
    CHECK(make_lookback(OptionType::Call).avg == AveragingSpec::minimum());
    CHECK(make_lookback(OptionType::Put).avg == AveragingSpec::maximum());
}

TEST_CASE("condor recognition") {
    CHECK(is_condor(make_condor(1, 3, 4, 5)));
    CHECK(is_condor(make_condor(1, 3, 3, 5)));
    CHECK_FALSE(is_condor(make_strategy({{1.0, 1.0}, {-2.0, 3.0}, {1.0, 5.0}})));
    CHECK_FALSE(is_condor(make_vanilla(OptionType::Call, 1.0)));
}

TEST_CASE("strategy payoff is piecewise linear") {
    const MarketParams m{0.03, 0.02, 0.3};
    const auto condor = make_condor(1, 3, 4, 5);
    auto at = [&](double s) { return payoff_eval(condor, m, 1.0, State{s}); };
    CHECK(at(0.5) == 0.0);
    CHECK(at(2.0) == doctest::Approx(1.0));
    CHECK(at(3.5) == 2.0);
    CHECK(at(4.5) == doctest::Approx(1.5));
    // Above X4 the legs leave X3 + X2 - X1 - X4 = 1.
    CHECK(at(7.0) == doctest::Approx(1.0));

    const auto p = build_payoff(condor);
    REQUIRE(p.breakpoints.size() == 4);
    REQUIRE(p.segments.size() == 5);
    const auto& last = std::get<LinearSegment>(p.segments.back());
    CHECK(last.slope == 0.0);
    CHECK(last.intercept == doctest::Approx(1.0));
}

TEST_CASE("butterfly legs share a breakpoint") {
    const auto p = build_payoff(make_condor(1, 2, 2, 3));
    CHECK(p.breakpoints == std::vector<double>{1, 2, 3});
    CHECK(std::get<LinearSegment>(p.segments[2]).slope == -1.0);
}

TEST_CASE("vanilla payoff and range checks") {
    const MarketParams m{0.03, 0.02, 0.3};
    const auto call = make_vanilla(OptionType::Call, 1.0);
    const auto put = make_vanilla(OptionType::Put, 1.0);
    CHECK(payoff_eval(call, m, 1.0, State{1.0}) == 0.0);
    CHECK(payoff_eval(call, m, 1.0, State{1.25}) == 0.25);
    CHECK(payoff_eval(put, m, 0.3, State{0.75}) == 0.25);
    CHECK_THROWS_AS(payoff_eval(call, m, 1.5, State{1.0}), OutOfRange);
    CHECK_THROWS_AS(payoff_eval(call, m, 0.5, State{0.0}), OutOfRange);
}

TEST_CASE("path-dependent payoffs compare spot with the path statistic") {
    const MarketParams m{0.03, 0.02, 0.3};
    const auto asian = make_asian(OptionType::Call, AveragingSpec::geometric());
    CHECK(payoff_eval(asian, m, 0.5, State{1.2, 1.0}) == doctest::Approx(0.2));
    CHECK(payoff_eval(asian, m, 0.5, State{0.8, 1.0}) == 0.0);
    const auto lb = make_lookback(OptionType::Put);
    CHECK(payoff_eval(lb, m, 0.5, State{0.8, 1.0}) == doctest::Approx(0.2));
    CHECK_THROWS_AS(payoff_eval(lb, m, 0.5, State{0.8}), OutOfRange);
    CHECK_THROWS_AS(build_payoff(asian), Unsupported);
}

TEST_CASE("shout and British payoffs reduce to the vanilla payoff at expiry") {
    const MarketParams m{0.03, 0.02, 0.3};
    for (double s : {0.5, 0.9, 1.1, 2.0}) {
        CHECK(payoff_eval(make_shout(OptionType::Call, 1.0), m, 1.0, State{s}) ==
              doctest::Approx(std::max(s - 1.0, 0.0)));
        CHECK(payoff_eval(make_british(OptionType::Put, 0.05, 1.0), m, 1.0, State{s}) ==
              doctest::Approx(std::max(1.0 - s, 0.0)));
    }
    // Before expiry the shout holder keeps an at-the-money option on top of S - X.
    CHECK(payoff_eval(make_shout(OptionType::Call, 1.0), m, 0.5, State{1.2}) > 0.2);
}
