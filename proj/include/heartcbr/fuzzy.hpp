#pragma once

#include <stdexcept>

namespace heartcbr::fuzzy {

/// Triangle with feet at `a`, `b` and its peak at `m`.
template <typename Scalar>
struct Triangular {
  Scalar a;
  Scalar m;
  Scalar b;

  Triangular(Scalar lower, Scalar peak, Scalar upper) : a(lower), m(peak), b(upper) {
    if (!(a < m && m < b)) throw std::invalid_argument("triangular membership needs a < m < b");
  }
};

/// Trapezoid with feet at `a`, `d` and plateau [b, c]. Either shoulder may be
/// vertical (a == b or c == d).
template <typename Scalar>
struct Trapezoidal {
  Scalar a;
  Scalar b;
  Scalar c;
  Scalar d;

  Trapezoidal(Scalar lower, Scalar support_lo, Scalar support_hi, Scalar upper)
      : a(lower), b(support_lo), c(support_hi), d(upper) {
    if (!(a <= b && b <= c && c <= d && a < d)) {
      throw std::invalid_argument("trapezoidal membership needs a <= b <= c <= d and a < d");
    }
  }
};

// The right foot is closed at b (x >= b -> 0) so the function is a proper
// triangle.
template <typename Scalar>
Scalar membership(Scalar x, const Triangular<Scalar>& t) {
  if (x <= t.a || x >= t.b) return Scalar(0);
  if (x <= t.m) return (x - t.a) / (t.m - t.a);
  return (t.b - x) / (t.b - t.m);
}

template <typename Scalar>
Scalar membership(Scalar x, const Trapezoidal<Scalar>& t) {
  if (x < t.a || x > t.d) return Scalar(0);
  if (x >= t.b && x <= t.c) return Scalar(1);
  if (x < t.b) return (x - t.a) / (t.b - t.a);
  return (t.d - x) / (t.d - t.c);
}

template <typename Scalar>
Scalar triangular_membership(Scalar x, Scalar a, Scalar m, Scalar b) {
  return membership(x, Triangular<Scalar>(a, m, b));
}

template <typename Scalar>
Scalar trapezoidal_membership(Scalar x, Scalar a, Scalar b, Scalar c, Scalar d) {
  return membership(x, Trapezoidal<Scalar>(a, b, c, d));
}

}  // namespace heartcbr::fuzzy
