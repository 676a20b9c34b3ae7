#pragma once

// Closed-form class counts and point-count bounds, in exact arithmetic.

#include <boost/rational.hpp>
#include <string>
#include <utility>

#include "ssp/field.hpp"

namespace ssp {

using Rational = boost::rational<i64>;

// Kronecker symbol (a / p) for an odd prime p
int kronecker(i64 a, u64 p);

u64 eichler_h(u64 p);     // supersingular j-invariants
u64 genus2_count(u64 p);  // superspecial genus-2 curves up to geometric isomorphism

Rational howe_heuristic(u64 p);  // p^3 / 1152
// n / heuristic rendered with three decimals
std::string howe_ratio(u64 n, u64 p);

// (q + 1 - 2g sqrt q, q + 1 + 2g sqrt q); q must be a square unless exact is false,
// in which case the bounds use floor(2g sqrt q)
std::pair<i64, i64> hasse_weil(int g, u64 q, bool exact = true);

}  // namespace ssp
