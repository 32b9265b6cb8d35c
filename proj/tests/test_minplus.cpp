#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "dnc/errors.hpp"
#include "dnc/minplus.hpp"

using namespace dnc;

namespace {

// ---- independent grid oracles over the defining formulas ----
// Test-suite constants: step 1e-3, horizons scaled to the operand parameters.

constexpr double kStep = 1e-3;

using Fn = std::function<double(double)>;

Fn tb(double r, double b) {
    return [=](double d) { return d <= 0.0 ? 0.0 : b + r * d; };
}

Fn rl(double R, double T) {
    return [=](double d) { return std::max(0.0, R * (d - T)); };
}

double oracleConvolve(const Fn& f, const Fn& g, double t) {
    // exact endpoints matter: token buckets jump at 0
    double best = std::min(f(t) + g(0), f(0) + g(t));
    for (double u = 0.0; u <= t + kStep / 2; u += kStep)
        best = std::min(best, f(t - u) + g(u));
    return best;
}

double oracleDeconvolve(const Fn& f, const Fn& g, double d, double uMax) {
    double best = -1e300;
    for (double u = 0.0; u <= uMax + kStep / 2; u += kStep)
        best = std::max(best, f(d + u) - g(u));
    return best;
}

double oracleSubtractClose(const Fn& beta, const Fn& alpha, double d) {
    double best = 0.0;  // u = 0 contributes beta(0)-alpha(0) = 0
    for (double u = 0.0; u <= d + kStep / 2; u += kStep)
        best = std::max(best, beta(u) - alpha(u));
    return std::max(0.0, best);
}

double oracleHdev(const Fn& alpha, const Fn& beta, double dMax, double tauMax) {
    double best = 0.0;
    for (double d = 0.0; d <= dMax; d += 16 * kStep) {
        double need = alpha(d);
        double lo = 0.0, hi = tauMax;
        for (int it = 0; it < 60; ++it) {
            double mid = (lo + hi) / 2;
            if (beta(d + mid) >= need) hi = mid;
            else lo = mid;
        }
        best = std::max(best, hi - 0.0);
    }
    return best;
}

double oracleVdev(const Fn& alpha, const Fn& beta, double dMax) {
    double best = 0.0;
    for (double d = 0.0; d <= dMax; d += kStep)
        best = std::max(best, alpha(d) - beta(d));
    return best;
}

double evalD(const Curve& c, double t) {
    auto v = c.eval(Rat::parse(std::to_string(t)));
    REQUIRE(v.has_value());
    return v->toDouble();
}

}  // namespace

TEST_CASE("curve construction, evaluation and invariants") {
    Curve g = Curve::tokenBucket(Rat(5, 2), Rat(5));
    CHECK(g.eval(Rat(0)).value() == Rat(0));
    CHECK(g.eval(Rat(2)).value() == Rat(10));
    CHECK(g.burstValue() == Rat(5));
    CHECK(g.isConcaveShape());
    CHECK_FALSE(g.isConvexShape());
    g.validate();

    Curve b = Curve::rateLatency(Rat(25), Rat(5));
    CHECK(b.eval(Rat(4)).value() == Rat(0));
    CHECK(b.eval(Rat(10)).value() == Rat(125));
    CHECK(b.isConvexShape());
    b.validate();

    Curve d0 = Curve::burstDelay(Rat(0));
    CHECK(d0.eval(Rat(0)).value() == Rat(0));
    CHECK_FALSE(d0.eval(Rat(1)).has_value());

    CHECK(Curve::zero().isZero());
    CHECK(Curve::tokenBucket(Rat(3), Rat(0)).segments().size() == 1);
}

TEST_CASE("curve text form round-trips exactly") {
    for (const char* text : {"TB(2.5,5)", "RL(25,5)", "TB(1/3,7/3)", "RL(8,23/6)", "DELTA(0)",
                             "PWL[(0,0,0);(0,4,3);(6,22,2)]"}) {
        Curve c = Curve::parseText(text);
        CHECK(Curve::parseText(c.toText()) == c);
    }
    CHECK(Curve::parseText("TB(2.5,5)") == Curve::tokenBucket(Rat(5, 2), Rat(5)));
    CHECK(Curve::parseText("RL(25,5)").asRateLatency().has_value());
    CHECK_THROWS_AS(Curve::parseText("nope"), ParseError);
    CHECK_THROWS_AS(Curve::parseText("PWL[(1,0,0)]"), ValidationError);
}

TEST_CASE("aggregate: closed forms and frozen examples") {
    // gamma_{2.5,5} + gamma_{2.5,5} = gamma_{5,10}
    Curve s = aggregate(Curve::tokenBucket(Rat(5, 2), Rat(5)), Curve::tokenBucket(Rat(5, 2), Rat(5)));
    CHECK(s == Curve::tokenBucket(Rat(5), Rat(10)));
    // identity
    Curve f = Curve::tokenBucket(Rat(3), Rat(7));
    CHECK(aggregate(f, Curve::zero()) == f);
    // mixed shapes stay pointwise: gamma_{5,5} + beta_{25,5} at d=10 is 180
    Curve mixed = aggregate(Curve::tokenBucket(Rat(5), Rat(5)), Curve::rateLatency(Rat(25), Rat(5)));
    CHECK(mixed.eval(Rat(10)).value() == Rat(180));
    mixed.validate();
}

TEST_CASE("convolve: closed forms and frozen examples") {
    // beta_{10,1} (x) beta_{10,1} = beta_{10,2}
    Curve c = convolve(Curve::rateLatency(Rat(10), Rat(1)), Curve::rateLatency(Rat(10), Rat(1)));
    CHECK(c == Curve::rateLatency(Rat(10), Rat(2)));
    Fn b1 = rl(10, 1);
    for (double t : {0.3, 1.7, 2.0, 3.9, 7.5})
        CHECK(evalD(c, t) == doctest::Approx(oracleConvolve(b1, b1, t)).epsilon(0).scale(1).epsilon(1e-9));

    // identity element delta_0
    Curve f = Curve::tokenBucket(Rat(2), Rat(4));
    CHECK(convolve(f, Curve::burstDelay(Rat(0))) == f);
    CHECK(convolve(Curve::burstDelay(Rat(0)), f) == f);

    // concave pair: pointwise minimum, checked on the grid
    Curve g = convolve(Curve::tokenBucket(Rat(2), Rat(4)), Curve::tokenBucket(Rat(3), Rat(1)));
    CHECK(g == minimum(Curve::tokenBucket(Rat(2), Rat(4)), Curve::tokenBucket(Rat(3), Rat(1))));
    Fn tb1 = tb(2, 4), tb2 = tb(3, 1);
    for (double t : {0.25, 1.0, 2.5, 3.0, 6.0})
        CHECK(evalD(g, t) == doctest::Approx(oracleConvolve(tb1, tb2, t)).epsilon(1e-6));

    CHECK_THROWS_AS(convolve(Curve::tokenBucket(Rat(1), Rat(1)), Curve::rateLatency(Rat(2), Rat(1))),
                    UnsupportedShape);
}

TEST_CASE("deconvolve: closed forms and frozen examples") {
    // gamma_{2.5,5} (/) beta_{25,5} = gamma_{2.5,17.5}
    Curve o = deconvolve(Curve::tokenBucket(Rat(5, 2), Rat(5)), Curve::rateLatency(Rat(25), Rat(5)));
    CHECK(o == Curve::tokenBucket(Rat(5, 2), Rat(35, 2)));
    // zero latency adds no burst
    Curve f = Curve::tokenBucket(Rat(2), Rat(4));
    CHECK(deconvolve(f, Curve::rateLatency(Rat(10), Rat(0))) == f);
    // gamma_{2,4} (/) beta_{10,2} = gamma_{2,8}
    CHECK(deconvolve(f, Curve::rateLatency(Rat(10), Rat(2))) == Curve::tokenBucket(Rat(2), Rat(8)));
    // unbounded when the rate condition fails
    CHECK_THROWS_AS(deconvolve(Curve::tokenBucket(Rat(30), Rat(1)), Curve::rateLatency(Rat(25), Rat(5))),
                    UnboundedResult);
}

TEST_CASE("deconvolve: general concave arrivals against the grid oracle") {
    // two-bucket concave arrival through a rate-latency service
    Curve alpha = minimum(Curve::tokenBucket(Rat(2), Rat(10)), Curve::tokenBucket(Rat(3), Rat(4)));
    Curve beta = Curve::rateLatency(Rat(8), Rat(3, 2));
    Curve o = deconvolve(alpha, beta);
    o.validate();
    CHECK(o.isConcaveShape());
    Fn fa = [](double d) { return d <= 0 ? 0.0 : std::min(10 + 2 * d, 4 + 3 * d); };
    Fn fb = rl(8, 1.5);
    for (double d : {0.0, 0.4, 1.0, 2.7, 5.0, 9.0})
        CHECK(o.rightLimit(Rat::parse(std::to_string(d))).toDouble() ==
              doctest::Approx(oracleDeconvolve(fa, fb, d, 40.0)).epsilon(1e-4));
}

TEST_CASE("deconvolve and hdev at equal long-term rates") {
    // fast path: full utilization is still bounded
    CHECK(deconvolve(Curve::tokenBucket(Rat(2), Rat(3)), Curve::rateLatency(Rat(2), Rat(5))) ==
          Curve::tokenBucket(Rat(2), Rat(13)));
    CHECK(horizontalDeviation(Curve::tokenBucket(Rat(2), Rat(3)), Curve::rateLatency(Rat(2), Rat(5))) ==
          Rat(5) + Rat(3, 2));
    // general path: the supremum lives at u -> infinity
    Curve alpha = minimum(Curve::tokenBucket(Rat(3), Rat(1)), Curve::tokenBucket(Rat(2), Rat(4)));
    Curve beta = Curve::rateLatency(Rat(2), Rat(1));
    Curve o = deconvolve(alpha, beta);
    CHECK(o == Curve::tokenBucket(Rat(2), Rat(6)));  // tail intercept 4 plus 2*1
    Fn fa = [](double d) { return d <= 0 ? 0.0 : std::min(1 + 3 * d, 4 + 2 * d); };
    Fn fb = rl(2, 1);
    for (double d : {0.0, 1.0, 4.0})
        CHECK(o.rightLimit(Rat::parse(std::to_string(d))).toDouble() ==
              doctest::Approx(oracleDeconvolve(fa, fb, d, 400.0)).epsilon(1e-3));
}

TEST_CASE("subtractAndClose: closed forms and frozen examples") {
    // beta_{25,5} (-) gamma_{5,10} = beta_{20, 6.75}
    Curve lo = subtractAndClose(Curve::rateLatency(Rat(25), Rat(5)), Curve::tokenBucket(Rat(5), Rat(10)));
    CHECK(lo == Curve::rateLatency(Rat(20), Rat(27, 4)));
    // subtracting nothing
    Curve beta = Curve::rateLatency(Rat(7), Rat(2));
    CHECK(subtractAndClose(beta, Curve::zero()) == beta);
    // beta_{10,2} (-) gamma_{2,4} = beta_{8,3}
    CHECK(subtractAndClose(Curve::rateLatency(Rat(10), Rat(2)), Curve::tokenBucket(Rat(2), Rat(4))) ==
          Curve::rateLatency(Rat(8), Rat(3)));
    CHECK_THROWS_AS(
        subtractAndClose(Curve::rateLatency(Rat(2), Rat(1)), Curve::tokenBucket(Rat(2), Rat(1))),
        UnboundedResult);
}

TEST_CASE("horizontal and vertical deviation: frozen examples") {
    CHECK(horizontalDeviation(Curve::tokenBucket(Rat(5), Rat(5)), Curve::rateLatency(Rat(25), Rat(5))) ==
          Rat(26, 5));  // 5.2 s
    CHECK(horizontalDeviation(Curve::zero(), Curve::rateLatency(Rat(25), Rat(5))) == Rat(0));
    CHECK(horizontalDeviation(Curve::tokenBucket(Rat(1), Rat(2)),
                              Curve::rateLatency(Rat(8), Rat(23, 6))) == Rat(49, 12));

    CHECK(verticalDeviation(Curve::tokenBucket(Rat(5), Rat(5)), Curve::rateLatency(Rat(25), Rat(5))) ==
          Rat(30));
    CHECK(verticalDeviation(Curve::zero(), Curve::rateLatency(Rat(25), Rat(5))) == Rat(0));
    CHECK(verticalDeviation(Curve::tokenBucket(Rat(2), Rat(4)), Curve::rateLatency(Rat(10), Rat(2))) ==
          Rat(8));
    CHECK_THROWS_AS(
        horizontalDeviation(Curve::tokenBucket(Rat(9), Rat(1)), Curve::rateLatency(Rat(8), Rat(1))),
        UnboundedResult);
}

TEST_CASE("outputBound and burst cap: frozen examples") {
    Curve a = Curve::tokenBucket(Rat(2), Rat(4));
    Curve b = Curve::rateLatency(Rat(8), Rat(3));
    CHECK(outputBound(a, b) == Curve::tokenBucket(Rat(2), Rat(10)));
    CHECK(outputBound(a, b, Rat(10)) == Curve::tokenBucket(Rat(2), Rat(10)));  // cap not binding
    Curve capped = outputBound(a, b, Rat(7));
    CHECK(capped == Curve::tokenBucket(Rat(2), Rat(7)));
    // capped result stays pointwise below the uncapped one
    Curve uncapped = outputBound(a, b);
    for (long long d = 0; d <= 20; ++d)
        CHECK(capped.eval(Rat(d)).value() <= uncapped.eval(Rat(d)).value());
}

TEST_CASE("minimum: frozen examples") {
    Curve m = minimum(Curve::tokenBucket(Rat(2), Rat(10)), Curve::tokenBucket(Rat(3), Rat(4)));
    // two-segment concave curve crossing at d=6
    CHECK(m == Curve::parseText("PWL[(0,0,0);(0,4,3);(6,22,2)]"));
    m.validate();
    Curve f = Curve::tokenBucket(Rat(2), Rat(10));
    CHECK(minimum(f, f) == f);
    CHECK(minimum(f, Curve::tokenBucket(Rat(2), Rat(7))) == Curve::tokenBucket(Rat(2), Rat(7)));
}

TEST_CASE("oracle equivalence across random token-bucket / rate-latency pairs") {
    std::mt19937_64 rng(99);
    auto smallRat = [&](int maxEighths) { return Rat(1 + static_cast<long long>(rng() % maxEighths), 8); };
    int cases = 1000;
    for (int i = 0; i < cases; ++i) {
        Rat r = smallRat(80), b = smallRat(160);           // rate <= 10, burst <= 20
        Rat R = r + smallRat(80), T = smallRat(16);        // service rate above arrival rate
        double rd = r.toDouble(), bd = b.toDouble(), Rd = R.toDouble(), Td = T.toDouble();
        Fn fa = tb(rd, bd), fb = rl(Rd, Td);
        double maxslope = std::max(rd, Rd);
        double tol = 2 * kStep * maxslope;

        // deconvolution
        Curve o = deconvolve(Curve::tokenBucket(r, b), Curve::rateLatency(R, T));
        double d = 0.25 + double(i % 7);
        double got = o.rightLimit(Rat::parse(std::to_string(d))).toDouble();
        CHECK(std::abs(got - oracleDeconvolve(fa, fb, d, 10 * Td + 5)) <= tol);

        // left-over
        Curve lo = subtractAndClose(Curve::rateLatency(R, T), Curve::tokenBucket(r, b));
        lo.validate();
        double got2 = evalD(lo, d);
        CHECK(std::abs(got2 - oracleSubtractClose(fb, fa, d)) <= tol);

        // horizontal deviation: closed form T + b/R exactly
        Rat h = horizontalDeviation(Curve::tokenBucket(r, b), Curve::rateLatency(R, T));
        CHECK(h == T + b / R);
        double horizon = Td + bd / Rd + bd / rd + 4;
        CHECK(std::abs(h.toDouble() - oracleHdev(fa, fb, horizon, horizon + Td + 2)) <= 0.05);

        // vertical deviation
        Rat v = verticalDeviation(Curve::tokenBucket(r, b), Curve::rateLatency(R, T));
        CHECK(v == b + r * T);
        CHECK(std::abs(v.toDouble() - oracleVdev(fa, fb, Td + 2)) <= tol);

        // convolution of the two service curves
        Rat R2 = r + smallRat(80), T2 = smallRat(16);
        Curve cc = convolve(Curve::rateLatency(R, T), Curve::rateLatency(R2, T2));
        CHECK(cc == Curve::rateLatency(Rat::min(R, R2), T + T2));
        double t = 0.5 + double(i % 5);
        CHECK(std::abs(evalD(cc, t) - oracleConvolve(fb, rl(R2.toDouble(), T2.toDouble()), t)) <= tol);

        // aggregation closed form
        Rat r2 = smallRat(80), b2 = smallRat(160);
        CHECK(aggregate(Curve::tokenBucket(r, b), Curve::tokenBucket(r2, b2)) ==
              Curve::tokenBucket(r + r2, b + b2));
    }
}

TEST_CASE("convolve is commutative and associative on same-shape triples") {
    std::mt19937_64 rng(123);
    auto smallRat = [&](int maxEighths) { return Rat(1 + static_cast<long long>(rng() % maxEighths), 8); };
    for (int i = 0; i < 200; ++i) {
        Curve a = Curve::tokenBucket(smallRat(40), smallRat(40));
        Curve b = Curve::tokenBucket(smallRat(40), smallRat(40));
        Curve c = Curve::tokenBucket(smallRat(40), smallRat(40));
        CHECK(convolve(a, b) == convolve(b, a));
        CHECK(convolve(convolve(a, b), c) == convolve(a, convolve(b, c)));

        Curve x = Curve::rateLatency(smallRat(40), smallRat(20));
        Curve y = Curve::rateLatency(smallRat(40), smallRat(20));
        Curve z = Curve::rateLatency(smallRat(40), smallRat(20));
        CHECK(convolve(x, y) == convolve(y, x));
        CHECK(convolve(convolve(x, y), z) == convolve(x, convolve(y, z)));
    }
}

TEST_CASE("convolution lies below the pointwise minimum") {
    std::mt19937_64 rng(321);
    auto smallRat = [&](int maxEighths) { return Rat(1 + static_cast<long long>(rng() % maxEighths), 8); };
    for (int i = 0; i < 200; ++i) {
        Curve x = Curve::rateLatency(smallRat(40), smallRat(20));
        Curve y = Curve::rateLatency(smallRat(40), smallRat(20));
        Curve conv = convolve(x, y);
        for (long long d = 0; d <= 12; ++d) {
            Rat at(d, 2);
            CHECK(conv.eval(at).value() <= Rat::min(x.eval(at).value(), y.eval(at).value()));
        }
        // concave curves through the origin achieve equality
        Curve f = Curve::tokenBucket(smallRat(40), smallRat(40));
        Curve g = Curve::tokenBucket(smallRat(40), smallRat(40));
        Curve cm = convolve(f, g);
        for (long long d = 0; d <= 12; ++d) {
            Rat at(d, 2);
            CHECK(cm.eval(at).value() == Rat::min(f.eval(at).value(), g.eval(at).value()));
        }
    }
}

TEST_CASE("operation closure: every result passes the curve validator") {
    std::mt19937_64 rng(555);
    auto smallRat = [&](int maxEighths) { return Rat(1 + static_cast<long long>(rng() % maxEighths), 8); };
    for (int i = 0; i < 300; ++i) {
        Curve a1 = Curve::tokenBucket(smallRat(30), smallRat(60));
        Curve a2 = Curve::tokenBucket(smallRat(30), smallRat(60));
        Curve alpha = minimum(a1, a2);
        // keep enough residual rate to bound alpha's own output
        Curve beta = Curve::rateLatency(alpha.tailSlope() * Rat(2) + smallRat(40), smallRat(12));
        alpha.validate();
        aggregate(a1, a2).validate();
        Curve lo = subtractAndClose(beta, alpha);
        lo.validate();
        CHECK(lo.isConvexShape());
        Curve o = deconvolve(alpha, lo);
        o.validate();
        CHECK(o.isConcaveShape());
        capBurst(o, smallRat(30)).validate();
        // deviations exist and are non-negative
        CHECK(horizontalDeviation(alpha, lo) >= Rat(0));
        CHECK(verticalDeviation(alpha, lo) >= Rat(0));
    }
}

TEST_CASE("randomized multi-segment operands against the grid oracles") {
    std::mt19937_64 rng(777);
    auto smallRat = [&](int maxEighths) { return Rat(1 + static_cast<long long>(rng() % maxEighths), 8); };
    for (int i = 0; i < 120; ++i) {
        // concave arrival: minimum of two or three token buckets
        Curve alpha = Curve::tokenBucket(smallRat(40), smallRat(60));
        int buckets = 2 + int(rng() % 2);
        for (int b = 1; b < buckets; ++b)
            alpha = minimum(alpha, Curve::tokenBucket(smallRat(40), smallRat(60)));
        // convex service: a rate-latency curve minus another concave bound
        Curve drain = minimum(Curve::tokenBucket(smallRat(24), smallRat(40)),
                              Curve::tokenBucket(smallRat(24), smallRat(40)));
        Curve beta = subtractAndClose(
            Curve::rateLatency(alpha.tailSlope() + drain.tailSlope() + smallRat(24), smallRat(16)),
            drain);
        REQUIRE(alpha.isConcaveShape());
        REQUIRE(beta.isConvexShape());

        // snapshot both curves as double segments so the grids stay cheap
        struct Seg {
            double start, value, slope;
        };
        auto snapshot = [](const Curve& c) {
            std::vector<Seg> out;
            for (const auto& s : c.segments())
                out.push_back({s.start.toDouble(), s.value.toDouble(), s.slope.toDouble()});
            return out;
        };
        auto evalSegs = [](const std::vector<Seg>& segs, double d) {
            if (d <= 0) return 0.0;
            size_t i = segs.size() - 1;
            while (i > 0 && segs[i].start >= d) --i;
            return segs[i].value + segs[i].slope * (d - segs[i].start);
        };
        auto sa = snapshot(alpha), sb = snapshot(beta);
        Fn fa = [&, sa](double d) { return evalSegs(sa, d); };
        Fn fb = [&, sb](double d) { return evalSegs(sb, d); };

        Curve out = deconvolve(alpha, beta);
        out.validate();
        CHECK(out.isConcaveShape());
        for (double d : {0.0, 0.9, 3.0, 7.5}) {
            double got = out.rightLimit(Rat::parse(std::to_string(d))).toDouble();
            CHECK(got == doctest::Approx(oracleDeconvolve(fa, fb, d, 60.0)).epsilon(1e-3));
        }

        Rat h = horizontalDeviation(alpha, beta);
        CHECK(std::abs(h.toDouble() - oracleHdev(fa, fb, 25.0, 40.0)) <= 0.08);
        Rat v = verticalDeviation(alpha, beta);
        double vg = 0.0;
        for (double d = 0.0; d <= 25.0; d += kStep) vg = std::max(vg, fa(d) - fb(d));
        CHECK(std::abs(v.toDouble() - vg) <= 0.05);

        Curve lo = subtractAndClose(beta, alpha);
        lo.validate();
        for (double d : {0.6, 2.0, 9.0})
            CHECK(evalD(lo, d) == doctest::Approx(oracleSubtractClose(fb, fa, d)).epsilon(1e-3));

        // text form of the multi-segment shapes round-trips exactly
        CHECK(Curve::parseText(alpha.toText()) == alpha);
        CHECK(Curve::parseText(beta.toText()) == beta);
        CHECK(Curve::parseText(out.toText()) == out);
    }
}

TEST_CASE("multi-segment service curves against the grid oracle") {
    // beta_{10,2} (-) min(gamma_{3,1}, gamma_{1,4}) gives a two-piece convex curve
    Curve alpha = minimum(Curve::tokenBucket(Rat(3), Rat(1)), Curve::tokenBucket(Rat(1), Rat(4)));
    Curve beta = Curve::rateLatency(Rat(10), Rat(2));
    Curve lo = subtractAndClose(beta, alpha);
    lo.validate();
    CHECK(lo.isConvexShape());
    Fn fa = [](double d) { return d <= 0 ? 0.0 : std::min(1 + 3 * d, 4 + d); };
    Fn fb = rl(10, 2);
    for (double d : {0.5, 1.0, 2.1, 3.0, 4.5, 8.0})
        CHECK(evalD(lo, d) == doctest::Approx(oracleSubtractClose(fb, fa, d)).epsilon(1e-4));

    // deviations of a concave arrival against the multi-piece left-over
    Curve a2 = Curve::tokenBucket(Rat(1, 2), Rat(2));
    Fn fa2 = tb(0.5, 2);
    Fn flo = [&](double d) { return evalD(lo, d); };
    Rat h = horizontalDeviation(a2, lo);
    CHECK(std::abs(h.toDouble() - oracleHdev(fa2, flo, 15, 20)) <= 0.05);
    Rat v = verticalDeviation(a2, lo);
    CHECK(std::abs(v.toDouble() - oracleVdev(fa2, flo, 15)) <= 0.05);
    Curve out = deconvolve(a2, lo);
    for (double d : {0.0, 0.7, 2.0, 5.5})
        CHECK(out.rightLimit(Rat::parse(std::to_string(d))).toDouble() ==
              doctest::Approx(oracleDeconvolve(fa2, flo, d, 30)).epsilon(1e-4));
}
