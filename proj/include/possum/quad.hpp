#pragma once

#include <cmath>
#include <string>
#include <type_traits>

// Extended-precision helpers. Certificate assembly runs in __float128 because
// monomial coefficients of high-degree kernel squares cancel heavily.
namespace possum {

using quad = __float128;

template <class Real>
inline Real abs_value(Real x) {
  return x < Real(0) ? -x : x;
}

inline quad sqrt_quad(quad x) {
  if (x <= 0) return 0;
  quad y = static_cast<quad>(std::sqrt(static_cast<long double>(x)));
  y = (y + x / y) / 2;
  y = (y + x / y) / 2;
  return y;
}

template <class Real>
inline Real sqrt_value(Real x) {
  if constexpr (std::is_same_v<Real, quad>) {
    return sqrt_quad(x);
  } else {
    using std::sqrt;
    return sqrt(x);
  }
}

}  // namespace possum
