#include <doctest.h>

#include "secvne/fixed.hpp"

using secvne::Fixed;

TEST_CASE("parse and print round-trip") {
    for (const char* s : {"0", "1", "1.2", "5", "80", "0.001", "123.456", "-2.5"}) {
        Fixed f = Fixed::parse(s);
        CHECK(f.str() == s);
        CHECK(Fixed::parse(f.str()) == f);
    }
    CHECK(Fixed::parse("1.200") == Fixed::parse("1.2"));
    CHECK(Fixed::parse("+3") == Fixed::from_int(3));
    CHECK_THROWS(Fixed::parse(""));
    CHECK_THROWS(Fixed::parse("abc"));
    CHECK_THROWS(Fixed::parse("1.2.3"));
}

TEST_CASE("exact arithmetic") {
    Fixed a = Fixed::parse("0.1"), b = Fixed::parse("0.2");
    CHECK((a + b) == Fixed::parse("0.3"));  // exact, unlike binary floating point
    CHECK((b - a) == a);
    Fixed acc;
    for (int i = 0; i < 1000; ++i) acc += Fixed::parse("0.001");
    CHECK(acc == Fixed::from_int(1));
    for (int i = 0; i < 1000; ++i) acc -= Fixed::parse("0.001");
    CHECK(acc.is_zero());
}

TEST_CASE("ordering and sign") {
    CHECK(Fixed::parse("1.2") > Fixed::from_int(1));
    CHECK(Fixed::parse("1.2") < Fixed::from_int(5));
    CHECK((-Fixed::from_int(2)).is_negative());
    CHECK_FALSE(Fixed().is_negative());
    CHECK(Fixed::from_double(1.1999999) == Fixed::parse("1.2"));  // rounds to milli
}
