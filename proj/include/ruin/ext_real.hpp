#pragma once

#include <cassert>
#include <cmath>
#include <limits>

namespace ruin {

// Nonnegative extended real, i.e. a value in [0, +inf].  Multiplication uses
// the convention 0 * inf = 0, which is what makes the excursion recursion
// well defined when a transition probability vanishes while the associated
// Laplace factor diverges.
class ExtReal {
 public:
  ExtReal() = default;
  ExtReal(double v) : v_(v) { assert(v >= 0.0); }

  static ExtReal infinity() {
    return ExtReal(std::numeric_limits<double>::infinity());
  }

  bool finite() const { return std::isfinite(v_); }
  double value() const { return v_; }

  ExtReal& operator+=(ExtReal o) {
    v_ += o.v_;
    return *this;
  }

  ExtReal& operator*=(ExtReal o) {
    if (v_ == 0.0 || o.v_ == 0.0) {
      v_ = 0.0;
    } else {
      v_ *= o.v_;
    }
    return *this;
  }

  friend ExtReal operator+(ExtReal a, ExtReal b) { return a += b; }
  friend ExtReal operator*(ExtReal a, ExtReal b) { return a *= b; }

  friend bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
  friend bool operator<(ExtReal a, ExtReal b) { return a.v_ < b.v_; }
  friend bool operator<=(ExtReal a, ExtReal b) { return a.v_ <= b.v_; }
  friend bool operator>(ExtReal a, ExtReal b) { return a.v_ > b.v_; }
  friend bool operator>=(ExtReal a, ExtReal b) { return a.v_ >= b.v_; }

 private:
  double v_ = 0.0;
};

// Closed form of sum_{n>=0} x^n: 1/(1-x) for x < 1, +inf otherwise.
inline ExtReal geometric_series(ExtReal x) {
  if (x < ExtReal(1.0)) return ExtReal(1.0 / (1.0 - x.value()));
  return ExtReal::infinity();
}

}  // namespace ruin
