#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace kerrlab {

// Coordinate-basis components in chart order (t, r, theta, phi).
using Vec4 = std::array<double, 4>;
using Mat4 = std::array<std::array<double, 4>, 4>;
// Connection coefficients indexed [upper][lower][lower].
using Connection = std::array<Mat4, 4>;

inline constexpr std::size_t kT = 0;
inline constexpr std::size_t kR = 1;
inline constexpr std::size_t kTheta = 2;
inline constexpr std::size_t kPhi = 3;

inline constexpr Mat4 zero_mat4() { return Mat4{}; }

inline Vec4 lower(const Mat4& g, const Vec4& v) {
  Vec4 out{};
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) out[a] += g[a][b] * v[b];
  return out;
}

inline double dot(const Vec4& u, const Vec4& v) {
  return u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3];
}

// T_{ab} u^a v^b
inline double contract(const Mat4& m, const Vec4& u, const Vec4& v) {
  double s = 0.0;
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) s += m[a][b] * u[a] * v[b];
  return s;
}

// out^{ab} = g^{am} g^{bn} m_{mn} for symmetric m (or the lowering analogue
// with g_{ab}); the result is symmetric bit for bit.
inline Mat4 transform_both(const Mat4& g, const Mat4& m) {
  Mat4 tmp{}, out{};
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t n = 0; n < 4; ++n)
      for (std::size_t k = 0; k < 4; ++k) tmp[a][n] += g[a][k] * m[k][n];
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = a; b < 4; ++b) {
      double s = 0.0;
      for (std::size_t n = 0; n < 4; ++n) s += tmp[a][n] * g[b][n];
      out[a][b] = out[b][a] = s;
    }
  return out;
}

inline double max_abs(const Mat4& m) {
  double s = 0.0;
  for (const auto& row : m)
    for (double x : row) s = std::max(s, std::abs(x));
  return s;
}

}  // namespace kerrlab
