#ifndef QNTTNN_QUATERNION_HPP
#define QNTTNN_QUATERNION_HPP

#include <cmath>
#include <ostream>

namespace qnttnn {

/// Quaternion s + x*i + y*j + z*k with i^2 = j^2 = k^2 = ijk = -1.
struct Quaternion {
  double s = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double s_, double x_, double y_, double z_)
      : s(s_), x(x_), y(y_), z(z_) {}

  static constexpr Quaternion real(double v) { return {v, 0.0, 0.0, 0.0}; }
  static constexpr Quaternion i() { return {0.0, 1.0, 0.0, 0.0}; }
  static constexpr Quaternion j() { return {0.0, 0.0, 1.0, 0.0}; }
  static constexpr Quaternion k() { return {0.0, 0.0, 0.0, 1.0}; }

  constexpr Quaternion conj() const { return {s, -x, -y, -z}; }
  constexpr double squared_modulus() const { return s * s + x * x + y * y + z * z; }
  double modulus() const { return std::sqrt(squared_modulus()); }

  constexpr Quaternion& operator+=(const Quaternion& o) {
    s += o.s;
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) {
    s -= o.s;
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Quaternion& operator*=(double a) {
    s *= a;
    x *= a;
    y *= a;
    z *= a;
    return *this;
  }

  friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
constexpr Quaternion operator-(const Quaternion& a) { return {-a.s, -a.x, -a.y, -a.z}; }
constexpr Quaternion operator*(Quaternion a, double c) { return a *= c; }
constexpr Quaternion operator*(double c, Quaternion a) { return a *= c; }

/// Hamilton product; non-commutative.
constexpr Quaternion hamilton_product(const Quaternion& a, const Quaternion& b) {
  return {a.s * b.s - a.x * b.x - a.y * b.y - a.z * b.z,
          a.s * b.x + a.x * b.s + a.y * b.z - a.z * b.y,
          a.s * b.y - a.x * b.z + a.y * b.s + a.z * b.x,
          a.s * b.z + a.x * b.y - a.y * b.x + a.z * b.s};
}

constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
  return hamilton_product(a, b);
}

inline std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
  return os << '(' << q.s << ", " << q.x << ", " << q.y << ", " << q.z << ')';
}

}  // namespace qnttnn

#endif  // QNTTNN_QUATERNION_HPP
