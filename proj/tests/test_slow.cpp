#include "doctest.h"
#include "walkdens/holonomic/operators.hpp"
#include "walkdens/moments/exact.hpp"

using namespace walkdens;

namespace {

// The recurrence's leading k-coefficients and the leading D_x coefficient of its differential
// operator must both locate the singularities at x = m with m of the parity of n.
void check_operator(int n) {
    const RecurrenceOperator op = verrill_operator(n);
    CHECK(leading_char_poly(op) == char_poly_product(n));
    const Poly lead = theta_to_dx(mellin_translate(op)).leading();
    CHECK(lead == expected_leading_coefficient(n));
}

}  // namespace

// Full operators are expensive to build; the closed characteristic polynomial covers n <= 200 in
// the unit tests, this checks the operator itself against it.
TEST_CASE("leading coefficients of the full operator for n <= 80") {
    for (int n = 1; n <= 80; ++n) {
        CAPTURE(n);
        check_operator(n);
    }
}

TEST_CASE("leading coefficients of the full operator at n = 200") { check_operator(200); }
