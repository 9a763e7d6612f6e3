#pragma once
#include <cmath>

namespace qbounce {

// Minimal double-double arithmetic. Only the operations needed to carry the
// oscillatory Airy phase (2/3)|x|^{3/2} at full precision down to its mod-2pi
// residue; not a general extended-precision type.
struct dd {
    double hi = 0.0;
    double lo = 0.0;
};

inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

// Requires |a| >= |b|.
inline dd quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline dd dd_add(dd a, dd b) {
    dd s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline dd dd_add(dd a, double b) {
    dd s = two_sum(a.hi, b);
    s.lo += a.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline dd dd_sub(dd a, dd b) {
    return dd_add(a, dd{-b.hi, -b.lo});
}

inline dd dd_mul(dd a, dd b) {
    dd p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline dd dd_mul(dd a, double b) {
    dd p = two_prod(a.hi, b);
    p.lo += a.lo * b;
    return quick_two_sum(p.hi, p.lo);
}

inline dd dd_div(dd a, double b) {
    double q1 = a.hi / b;
    dd p = two_prod(q1, b);
    double r = ((a.hi - p.hi) - p.lo) + a.lo;
    double q2 = r / b;
    return quick_two_sum(q1, q2);
}

inline dd dd_sqrt(dd a) {
    if (a.hi <= 0.0) return {0.0, 0.0};
    double h = std::sqrt(a.hi);
    dd p = two_prod(h, h);
    double corr = ((a.hi - p.hi) - p.lo + a.lo) / (2.0 * h);
    return quick_two_sum(h, corr);
}

inline constexpr double kTwoPiHi = 6.283185307179586476925286766559e+00;
inline constexpr double kTwoPiLo = 2.449293598294706414100166537293e-16;

// Reduces a to the interval [-pi, pi] (up to rounding), keeping the full
// double-double accuracy of the residue. Valid for |a| up to ~1e9.
inline double dd_mod_2pi(dd a) {
    double k = std::nearbyint(a.hi / kTwoPiHi);
    dd r = dd_sub(a, two_prod(k, kTwoPiHi));
    r = dd_add(r, -k * kTwoPiLo);
    return r.hi + r.lo;
}

} // namespace qbounce
