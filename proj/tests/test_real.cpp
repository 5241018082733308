#include <doctest.h>

#include "bilattice/real.hpp"
#include "test_util.hpp"

using namespace bilattice;

TEST_CASE("rational parsing") {
    CHECK(Rational::parse("3") == Rational(3));
    CHECK(Rational::parse("-7") == Rational(-7));
    CHECK(Rational::parse("1/3") == Rational(1, 3));
    CHECK(Rational::parse("-9/10") == Rational(-9, 10));
    CHECK(Rational::parse("0.25") == Rational(1, 4));
    CHECK(Rational::parse("2.5e-3") == Rational(1, 400));
    CHECK(Rational::parse("1e2") == Rational(100));
    CHECK(Rational::parse(" 1/2 ") == Rational(1, 2));

    CHECK_THROWS_AS(Rational::parse("1/0"), ValidityError);
    CHECK_THROWS_AS(Rational::parse("abc"), ValidityError);
    CHECK_THROWS_AS(Rational::parse(""), ValidityError);
    CHECK_THROWS_AS(Rational::parse("1.2.3"), ValidityError);
}

TEST_CASE("rational arithmetic and order") {
    Rational a(2, 3), b(1, 6);
    CHECK(a + b == Rational(5, 6));
    CHECK(a - b == Rational(1, 2));
    CHECK(a * b == Rational(1, 9));
    CHECK(a / b == Rational(4));
    CHECK(-a == Rational(-2, 3));
    CHECK(a > b);
    CHECK(b < 1);
    CHECK(a < 1);
    CHECK(Rational(2) >= 2);
    CHECK(Rational(7, 7).is_integer());
    CHECK_FALSE(Rational(1, 3).is_integer());
    CHECK_THROWS_AS(a / Rational(0), ValidityError);
}

TEST_CASE("context invariants") {
    CHECK_THROWS_AS(PrecisionContext(29), ValidityError);
    CHECK_THROWS_AS(PrecisionContext(60, Rational(2)), ValidityError);
    CHECK_THROWS_AS(PrecisionContext(60, Rational(0)), ValidityError);
    PrecisionContext ctx(60);
    CHECK(ctx.digits() == 60);
    CHECK(ctx.tail_eps() > 0);
    CHECK(ctx.tail_eps() < 1);
    // default tail_eps sits two digits under the working precision
    CHECK(ctx.tail_eps() == ctx.pow10(-62));
}

TEST_CASE("real arithmetic carries precision and rounds correctly") {
    PrecisionContext ctx(60);
    Real third = ctx.real(1) / 3;
    testutil::check_close(third * 3, ctx.real(1), 59);
    testutil::check_close(sqrt(ctx.real(2)) * sqrt(ctx.real(2)), ctx.real(2), 59);
    testutil::check_close(exp(log(ctx.real(7))), ctx.real(7), 58);

    PrecisionContext wide(120);
    Real mixed = ctx.real(1) + wide.real(1);  // result at the wider precision
    CHECK(mixed.precision() == wide.prec());

    Real z = ctx.zero();
    CHECK(z.is_zero());
    CHECK(z == 0);
    CHECK((z + ctx.real(5)) == 5);

    CHECK(ctx.real(Rational(1, 3)) < ctx.real(Rational(2, 5)));
    CHECK(ctx.real(-2) < 0);
    CHECK(abs(ctx.real(-2)) == 2);
    CHECK(min(ctx.real(1), ctx.real(2)) == 1);
    CHECK(max(ctx.real(1), ctx.real(2)) == 2);
    CHECK(floor(ctx.real(Rational(7, 2))) == 3);
    CHECK(ctx.real(Rational(14, 2)).is_integer());
}

TEST_CASE("decimal serialization is deterministic") {
    PrecisionContext ctx(60);
    Real x = sqrt(ctx.real(3)) / 7;
    CHECK(x.to_string(30) == x.to_string(30));
    Real y = ctx.real(Rational::parse("0.125"));
    CHECK(y.to_string(5) == "1.2500e-01");
}
