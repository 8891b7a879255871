#include <doctest.h>

#include "rodsim/dual.hpp"

using rodsim::Dual;

TEST_CASE("dual arithmetic propagates first derivatives") {
    using D = Dual<2>;
    const D x = D::seed(0.7, 0);
    const D y = D::seed(-1.3, 1);

    const D f = x * y + sin(x) / y;
    // df/dx = y + cos(x)/y ; df/dy = x - sin(x)/y^2
    CHECK(f.v == doctest::Approx(0.7 * -1.3 + std::sin(0.7) / -1.3));
    CHECK(f.d[0] == doctest::Approx(-1.3 + std::cos(0.7) / -1.3));
    CHECK(f.d[1] == doctest::Approx(0.7 - std::sin(0.7) / (1.3 * 1.3)));
}

TEST_CASE("dual sqrt and atan2 derivatives") {
    using D = Dual<1>;
    const D x = D::seed(2.0, 0);
    CHECK(sqrt(x).d[0] == doctest::Approx(0.5 / std::sqrt(2.0)));

    const D y = D::seed(0.5, 0);
    const D angle = atan2(y, D(1.0));
    CHECK(angle.v == doctest::Approx(std::atan2(0.5, 1.0)));
    CHECK(angle.d[0] == doctest::Approx(1.0 / (1.0 + 0.25)));
}
