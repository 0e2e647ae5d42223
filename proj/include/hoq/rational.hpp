#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace hoq {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// "p/q" in lowest terms; integers are written "p/1" so the shape is uniform.
std::string to_string(const Rational& r);

/// Accepts "p/q" or a bare integer "p".
Rational parse_rational(const std::string& text);

}  // namespace hoq
