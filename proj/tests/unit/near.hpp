#ifndef WCONT_TEST_NEAR_HPP
#define WCONT_TEST_NEAR_HPP

#include <cmath>

#include <doctest.h>

/// Absolute-tolerance comparison that reports the observed difference.
#define CHECK_NEAR(a, b, tol) CHECK(std::abs((a) - (b)) <= (tol))

#endif  // WCONT_TEST_NEAR_HPP
