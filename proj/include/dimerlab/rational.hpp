#ifndef DIMERLAB_RATIONAL_HPP
#define DIMERLAB_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

namespace dimerlab {

// All arithmetic in the library is exact: arbitrary-precision integers for
// homology and rationals for structure constants.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer abs_int(const Integer& x) { return x < 0 ? Integer(-x) : x; }

} // namespace dimerlab

#endif
