#pragma once

#include <cstddef>
#include <vector>

#include "spinframe/error.hpp"

namespace spinframe {

// Rectangular parameter grid; node (i, j) sits at (u0 + i du, v0 + j dv) and is
// stored at index i * nv + j (row-major with u as the row).
struct Grid2 {
  int nu = 2, nv = 2;
  double u0 = 0.0, u1 = 1.0, v0 = 0.0, v1 = 1.0;

  double du() const { return (u1 - u0) / (nu - 1); }
  double dv() const { return (v1 - v0) / (nv - 1); }
  double u(int i) const { return u0 + i * du(); }
  double v(int j) const { return v0 + j * dv(); }
  std::size_t size() const { return static_cast<std::size_t>(nu) * nv; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * nv + j; }
  bool same_shape(const Grid2& o) const {
    return nu == o.nu && nv == o.nv && u0 == o.u0 && u1 == o.u1 && v0 == o.v0 && v1 == o.v1;
  }
  // Nodes whose stencils reach within this many nodes of the border.
  static constexpr int kEdgeBand = 4;
  bool in_edge_band(int i, int j) const {
    return i < kEdgeBand || j < kEdgeBand || i >= nu - kEdgeBand || j >= nv - kEdgeBand;
  }
  void validate() const;
};

template <class T>
using Field = std::vector<T>;

// Sixth-order differences (central inside, seven-point one-sided within three nodes of
// an end) when a line has seven nodes; fourth or second order on shorter lines.
template <class T, class Get>
T diff_line(int n, int i, double h, Get at) {
  if (n < 2) throw Error(ErrorKind::Stencil, "need at least two nodes to differentiate");
  if (n == 2) return (at(1) - at(0)) * (1.0 / h);
  if (n < 5) {
    if (i == 0) return (at(0) * -3.0 + at(1) * 4.0 - at(2)) * (1.0 / (2 * h));
    if (i == n - 1) return (at(n - 1) * 3.0 - at(n - 2) * 4.0 + at(n - 3)) * (1.0 / (2 * h));
    return (at(i + 1) - at(i - 1)) * (1.0 / (2 * h));
  }
  if (n >= 7) {
    // sixth order everywhere: an order jump near the border would be amplified by the
    // nested derivatives behind K
    const double s6 = 1.0 / (60.0 * h);
    if (i >= 3 && i <= n - 4)
      return (at(i + 3) - at(i - 3) + (at(i - 2) - at(i + 2)) * 9.0 + (at(i + 1) - at(i - 1)) * 45.0) * s6;
    static constexpr double w[3][7] = {{-147.0, 360.0, -450.0, 400.0, -225.0, 72.0, -10.0},
                                       {-10.0, -77.0, 150.0, -100.0, 50.0, -15.0, 2.0},
                                       {2.0, -24.0, -35.0, 80.0, -30.0, 8.0, -1.0}};
    const bool low = i < 3;
    const double* c = w[low ? i : n - 1 - i];
    T acc = at(low ? 0 : n - 1) * c[0];
    for (int k = 1; k < 7; ++k) acc = acc + at(low ? k : n - 1 - k) * c[k];
    return low ? T(acc * s6) : T(acc * -s6);
  }
  const double s = 1.0 / (12.0 * h);
  if (i == 0) return (at(0) * -25.0 + at(1) * 48.0 - at(2) * 36.0 + at(3) * 16.0 - at(4) * 3.0) * s;
  if (i == 1) return (at(0) * -3.0 - at(1) * 10.0 + at(2) * 18.0 - at(3) * 6.0 + at(4)) * s;
  if (i == n - 1)
    return (at(n - 1) * 25.0 - at(n - 2) * 48.0 + at(n - 3) * 36.0 - at(n - 4) * 16.0 + at(n - 5) * 3.0) * s;
  if (i == n - 2)
    return (at(n - 1) * 3.0 + at(n - 2) * 10.0 - at(n - 3) * 18.0 + at(n - 4) * 6.0 - at(n - 5)) * s;
  return (at(i - 2) - at(i - 1) * 8.0 + at(i + 1) * 8.0 - at(i + 2)) * s;
}

template <class T>
T diff_u(const Grid2& g, const Field<T>& f, int i, int j) {
  return diff_line<T>(g.nu, i, g.du(), [&](int k) { return f[g.index(k, j)]; });
}

template <class T>
T diff_v(const Grid2& g, const Field<T>& f, int i, int j) {
  return diff_line<T>(g.nv, j, g.dv(), [&](int k) { return f[g.index(i, k)]; });
}

template <class T>
Field<T> diff_u(const Grid2& g, const Field<T>& f) {
  Field<T> out(f.size());
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) out[g.index(i, j)] = diff_u(g, f, i, j);
  return out;
}

template <class T>
Field<T> diff_v(const Grid2& g, const Field<T>& f) {
  Field<T> out(f.size());
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) out[g.index(i, j)] = diff_v(g, f, i, j);
  return out;
}

// Value halfway between nodes k and k+1 of a line, cubic where four nodes exist.
template <class T, class Get>
T midpoint_line(int n, int k, Get at) {
  if (n < 4) return (at(k) + at(k + 1)) * 0.5;
  if (k == 0) return (at(0) * 5.0 + at(1) * 15.0 - at(2) * 5.0 + at(3)) * (1.0 / 16.0);
  if (k == n - 2) return (at(n - 1) * 5.0 + at(n - 2) * 15.0 - at(n - 3) * 5.0 + at(n - 4)) * (1.0 / 16.0);
  return (at(k - 1) * -1.0 + at(k) * 9.0 + at(k + 1) * 9.0 - at(k + 2)) * (1.0 / 16.0);
}

}  // namespace spinframe
