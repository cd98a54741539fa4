#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "pegsim/amm.hpp"

using namespace pegsim::amm;

TEST_CASE("spot price, quotes, and impact match the closed forms") {
    Pool p(1000.0, 2000.0, 0, "x");
    CHECK(p.spot_price() == doctest::Approx(2.0));
    // delta_a = A*db/(B+db)
    CHECK(p.quote_out(500.0) == doctest::Approx(1000.0 * 500 / 2500));
    CHECK(p.price_impact(500.0) == doctest::Approx(0.5));
    auto r = p.execute_swap(500.0);
    CHECK(r.amount_out == doctest::Approx(200.0));
    CHECK(r.effective_price == doctest::Approx(2.5));
    CHECK(r.price_impact == doctest::Approx(0.5));
}

TEST_CASE("execution price minus spot equals input over opposite reserve") {
    // p_e - p_s == delta_b / A, exactly in rational arithmetic.
    RationalPool p(Rational(777), Rational(1234), 0, "r");
    for (int i = 1; i <= 50; ++i) {
        Rational db(i * 13, 7);
        Rational a_before = p.reserve_a();
        Rational spot = p.spot_price();
        auto r = p.execute_swap(db);
        CHECK(r.price_impact == db / a_before);
        CHECK(r.effective_price - spot == db / a_before);
    }
}

TEST_CASE("fee-free double arithmetic tracks the rational oracle") {
    std::mt19937_64 rng(17);
    Pool pd(10000.0, 10000.0, 0, "d");
    RationalPool pr(Rational(10000), Rational(10000), 0, "r");
    for (int i = 0; i < 300; ++i) {
        // Sizes on a 1/64 grid so the double start values stay exact.
        double db = double(1 + rng() % 2048) / 64.0;
        auto rd = pd.execute_swap(db);
        auto rr = pr.execute_swap(Rational(std::int64_t(db * 64), 64));
        double oracle = rr.amount_out.convert_to<double>();
        CHECK(rd.amount_out == doctest::Approx(oracle).epsilon(1e-9));
    }
}

TEST_CASE("constant-product invariant drifts at most 1e-12 over random swaps") {
    std::mt19937_64 rng(23);
    Pool p(50000.0, 80000.0, 0, "drift");
    double k0 = p.invariant();
    for (int i = 0; i < 1000; ++i) {
        double frac = double(rng() % 1000 + 1) / 100000.0;
        if (rng() % 2)
            p.execute_swap(p.reserve_b() * frac);
        else
            p.execute_swap_stable_in(p.reserve_a() * frac);
        CHECK(std::abs(p.invariant() - k0) / k0 <= 1e-12);
    }
}

TEST_CASE("with a fee the invariant only grows") {
    Pool p(10000.0, 10000.0, 30, "fee");
    double k = p.invariant();
    for (int i = 0; i < 100; ++i) {
        p.execute_swap(50.0);
        p.execute_swap_stable_in(50.0);
        CHECK(p.invariant() >= k);
        k = p.invariant();
    }
}

TEST_CASE("quotes are increasing and concave in trade size") {
    Pool p(10000.0, 10000.0, 0, "m");
    double prev = 0.0, prev_gain = 1e18;
    for (double db = 10.0; db <= 2000.0; db += 10.0) {
        double out = p.quote_out(db);
        CHECK(out > prev);
        double gain = out - prev;
        CHECK(gain < prev_gain + 1e-9);  // diminishing returns
        prev = out;
        prev_gain = gain;
    }
    // Output never exceeds the opposite reserve.
    CHECK(p.quote_out(1e12) < p.reserve_a());
}

TEST_CASE("bad construction and bad trades are rejected") {
    CHECK_THROWS_AS(Pool(0.0, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(Pool(10.0, 10.0, 10000), std::invalid_argument);
    Pool p(100.0, 100.0);
    CHECK_THROWS_AS(p.quote_out(0.0), std::invalid_argument);
    CHECK_THROWS_AS(p.quote_out(-5.0), std::invalid_argument);
}

TEST_CASE("liquidity scaling keeps the spot price") {
    Pool p(1000.0, 3000.0);
    double spot = p.spot_price();
    p.scale_liquidity(0.25);
    CHECK(p.spot_price() == doctest::Approx(spot));
    CHECK(p.reserve_a() == doctest::Approx(250.0));
    // Impact of a fixed-size trade rises as depth falls.
    Pool deep(1000.0, 3000.0), shallow(250.0, 750.0);
    CHECK(shallow.price_impact(50.0) > deep.price_impact(50.0));
}
