#pragma once

// Double-double arithmetic for phase bookkeeping.
//
// Action and internal-energy phases reach 1e6..1e14 rad while the observable
// difference between the two arms is a few radians, so every quantity that
// feeds a phase (times, positions, velocities, the phases themselves) is
// carried as an unevaluated sum hi + lo with |lo| <= ulp(hi)/2.

#include <cmath>

namespace backflow {

class Extended {
 public:
  constexpr Extended() = default;
  constexpr Extended(double value) : hi_(value) {}  // NOLINT(google-explicit-constructor)

  static constexpr Extended from_parts(double hi, double lo) { return Extended(hi, lo); }

  /// Exact sum of two doubles.
  static Extended sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return Extended(s, err);
  }

  /// Exact product of two doubles.
  static Extended product(double a, double b) {
    const double p = a * b;
    return Extended(p, std::fma(a, b, -p));
  }

  constexpr double hi() const { return hi_; }
  constexpr double lo() const { return lo_; }
  constexpr double value() const { return hi_ + lo_; }
  explicit constexpr operator double() const { return hi_ + lo_; }

  Extended operator-() const { return Extended(-hi_, -lo_); }

  friend Extended operator+(const Extended& a, const Extended& b) {
    Extended s = sum(a.hi_, b.hi_);
    const Extended t = sum(a.lo_, b.lo_);
    double lo = s.lo_ + t.hi_;
    Extended r = quick_sum(s.hi_, lo);
    lo = t.lo_ + r.lo_;
    return quick_sum(r.hi_, lo);
  }
  friend Extended operator-(const Extended& a, const Extended& b) { return a + (-b); }

  friend Extended operator*(const Extended& a, const Extended& b) {
    Extended p = product(a.hi_, b.hi_);
    const double cross = a.hi_ * b.lo_ + a.lo_ * b.hi_;
    return quick_sum(p.hi_, p.lo_ + cross);
  }
  friend Extended operator*(const Extended& a, double b) {
    Extended p = product(a.hi_, b);
    return quick_sum(p.hi_, p.lo_ + a.lo_ * b);
  }
  friend Extended operator*(double a, const Extended& b) { return b * a; }

  friend Extended operator/(const Extended& a, double b) {
    const double q1 = a.hi_ / b;
    const Extended r = a - product(q1, b);
    const double q2 = r.hi_ / b;
    return quick_sum(q1, q2);
  }
  friend Extended operator/(const Extended& a, const Extended& b) {
    const double q1 = a.hi_ / b.hi_;
    const Extended r = a - b * q1;
    const double q2 = r.hi_ / b.hi_;
    const Extended r2 = r - b * q2;
    const double q3 = r2.hi_ / b.hi_;
    return quick_sum(q1, q2) + Extended(q3);
  }

  Extended& operator+=(const Extended& other) { return *this = *this + other; }
  Extended& operator-=(const Extended& other) { return *this = *this - other; }

 private:
  constexpr Extended(double hi, double lo) : hi_(hi), lo_(lo) {}

  static Extended quick_sum(double a, double b) {
    const double s = a + b;
    return Extended(s, b - (s - a));
  }

  double hi_ = 0.0;
  double lo_ = 0.0;
};

/// 2*pi to double-double precision.
inline constexpr Extended kTwoPi = Extended::from_parts(6.283185307179586, 2.4492935982947064e-16);

/// Reduce an unwrapped phase to (-pi, pi]. Exact for |phase| up to ~2^52 * 2pi.
double wrap_phase(const Extended& phase);

}  // namespace backflow
