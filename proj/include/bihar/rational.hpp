#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace bihar {

using Rational = boost::multiprecision::cpp_rational;

}  // namespace bihar
