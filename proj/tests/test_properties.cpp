#include "doctest.h"
#include "kostov/properties.hpp"

using namespace kostov;

TEST_CASE("property suites on a small sample")
{
    for (const auto& r : run_property_suites(7, 10)) {
        CAPTURE(r.name);
        CAPTURE(r.first_failure);
        CHECK(r.ok());
        CHECK(r.max_numeric_error < 1e-9);
    }
}

TEST_CASE("instances do not depend on run order")
{
    const auto a = run_property("weierstrass-division", 3, 5);
    const auto b = run_property("weierstrass-division", 3, 5);
    CHECK(a.instances == 5);
    CHECK(a.failures == b.failures);
    CHECK_THROWS(run_property("no-such-suite", 3, 1));
}
