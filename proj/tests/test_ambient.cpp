#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "spinframe/ambient.hpp"
#include "spinframe/error.hpp"

using namespace spinframe;

namespace {

Vec3 random_point(std::mt19937_64& rng, const ModelSpace& m) {
  std::uniform_real_distribution<double> d(-0.8, 0.8);
  for (;;) {
    Vec3 p(d(rng), d(rng), 2.0 * d(rng));
    if (m.in_chart(p)) return p;
  }
}

AmbientVec fv(int i) {
  Vec3 c = Vec3::Zero();
  c[i - 1] = 1.0;
  return {c, Basis::Frame};
}

}  // namespace

TEST_CASE("model validation") {
  CHECK_THROWS_AS(ModelSpace(0.0, 0.0), Error);
  CHECK(ModelSpace(1.0, 0.0).kind() == ModelKind::Product);
  CHECK(ModelSpace(4.0, 1.0).sigma() == 2.0);
  CHECK(ModelSpace(4.0, 1.0).alpha() == 0.0);
  CHECK_THROWS_AS(ModelSpace(1.0, 0.0).sigma(), Error);
  ModelSpace h(-1.0, 0.8);
  CHECK(h.in_chart(Vec3(1.9, 0.0, 0.0)));
  CHECK_FALSE(h.in_chart(Vec3(2.0, 0.0, 0.0)));
  CHECK_THROWS_AS(metric_at(h, Vec3(0.0, 2.5, 0.0)), Error);
  ModelSpace s(4.0, 1.0);
  CHECK_FALSE(s.in_chart(Vec3(40.0, 0.0, 0.0)));
}

TEST_CASE("metric values") {
  ModelSpace nil(0.0, 0.5);
  CHECK((metric_at(nil, Vec3::Zero()) - Mat3::Identity()).norm() == 0.0);
  CHECK(metric_at(nil, Vec3(1.0, 0.0, 0.0))(1, 1) == doctest::Approx(1.25));
  ModelSpace h2(-1.0, 0.0);
  CHECK((metric_at(h2, Vec3::Zero()) - Mat3::Identity()).norm() == 0.0);
}

TEST_CASE("canonical frames") {
  ModelSpace nil(0.0, 0.5);
  const Vec3 p(0.3, -0.7, 1.1);
  const Mat3 e = canonical_frame(nil, p);
  CHECK((e.col(0) - Vec3(1.0, 0.0, -0.5 * p.y())).norm() < 1e-15);
  CHECK((e.col(1) - Vec3(0.0, 1.0, 0.5 * p.x())).norm() < 1e-15);
  CHECK((e.col(2) - Vec3(0.0, 0.0, 1.0)).norm() == 0.0);

  ModelSpace berger(4.0, 1.0);
  CHECK((canonical_frame(berger, Vec3::Zero()) - Mat3::Identity()).norm() < 1e-15);
  const Mat3 b = canonical_frame(berger, Vec3(0.0, 0.0, M_PI / 4));
  CHECK((b.col(0) - Vec3(0.0, 1.0, 0.0)).norm() < 1e-15);

  std::mt19937_64 rng(3);
  for (auto [k, t] : {std::pair{4.0, 1.0}, {0.0, 0.5}, {-1.0, 0.8}, {1.0, 0.0}, {-1.0, 0.0}}) {
    ModelSpace m(k, t);
    for (int n = 0; n < 20; ++n) {
      const Vec3 q = random_point(rng, m);
      const Mat3 f = canonical_frame(m, q);
      CHECK((f.transpose() * metric_at(m, q) * f - Mat3::Identity()).norm() < 1e-12);
      CHECK(f.determinant() > 0.0);
      const AmbientVec xi = vertical_field(m, q);
      CHECK(inner(m, q, xi, xi) == doctest::Approx(1.0));
      AmbientVec x{Vec3(0.3, -1.2, 0.5), Basis::Chart};
      CHECK((to_chart(m, q, to_frame(m, q, x)).c - x.c).norm() < 1e-12);
    }
  }
}

TEST_CASE("closed Christoffel symbols") {
  ModelSpace b(4.0, 1.0);
  CHECK(christoffel_closed(b, 1, 2, 3) == 1.0);
  CHECK(christoffel_closed(b, 1, 1, 1) == 0.0);
  CHECK(christoffel_closed(b, 3, 2, 1) == -1.0);
  CHECK(christoffel_closed(b, 3, 1, 2) == 1.0);
  CHECK_THROWS_AS(christoffel_closed(ModelSpace(1.0, 0.0), 1, 2, 3), Error);
}

TEST_CASE("numeric Christoffel oracle") {
  std::mt19937_64 rng(11);
  ModelSpace nil(0.0, 0.5);
  CHECK(christoffel_numeric(nil, random_point(rng, nil), 1, 2, 3) == doctest::Approx(0.5).epsilon(1e-7));
  ModelSpace prod(1.0, 0.0);
  for (int n = 0; n < 10; ++n) {
    const Vec3 p = random_point(rng, prod);
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j) {
        CHECK(std::abs(christoffel_numeric(prod, p, i, j, 3)) < 1e-7);
        CHECK(std::abs(christoffel_numeric(prod, p, i, 3, j)) < 1e-7);
        CHECK(std::abs(christoffel_numeric(prod, p, 3, i, j)) < 1e-7);
      }
  }
  for (auto [k, t] : {std::pair{4.0, 1.0}, {0.0, 0.5}, {-1.0, 0.8}, {1.0, 0.0}})
    for (int i = 1; i <= 3; ++i) CHECK(std::abs(christoffel_numeric(ModelSpace(k, t), Vec3::Zero(), i, i, i)) < 1e-7);
}

TEST_CASE("exact chart Christoffels match the difference oracle") {
  std::mt19937_64 rng(5);
  for (auto [k, t] : {std::pair{4.0, 1.0}, {0.0, 0.5}, {-1.0, 0.8}, {-1.0, 0.0}}) {
    ModelSpace m(k, t);
    for (int n = 0; n < 10; ++n) {
      const Vec3 p = random_point(rng, m);
      const ChartGamma a = chart_christoffel(m, p), b = chart_christoffel_numeric(m, p);
      for (int c = 0; c < 3; ++c)
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) CHECK(std::abs(a[c][i][j] - b[c][i][j]) < 1e-7);
    }
  }
}

TEST_CASE("frame brackets") {
  std::mt19937_64 rng(9);
  for (auto [k, t] : {std::pair{4.0, 1.0}, {0.0, 0.5}, {-1.0, 0.8}}) {
    ModelSpace m(k, t);
    for (int n = 0; n < 10; ++n) {
      const Vec3 p = random_point(rng, m);
      const Mat3 e = canonical_frame(m, p);
      CHECK((frame_bracket(m, p, 1, 2) - 2.0 * t * e.col(2)).norm() < 1e-6);
      CHECK((frame_bracket(m, p, 2, 3) - m.sigma() * e.col(0)).norm() < 1e-6);
      CHECK((frame_bracket(m, p, 3, 1) - m.sigma() * e.col(1)).norm() < 1e-6);
    }
  }
}

TEST_CASE("vector product") {
  ModelSpace m(-1.0, 0.8);
  const Vec3 p(0.2, 0.4, -0.3);
  CHECK((vector_product(m, p, fv(1), fv(2)).c - fv(3).c).norm() == 0.0);
  AmbientVec x{Vec3(0.1, 0.2, 0.3), Basis::Chart};
  CHECK(vector_product(m, p, x, x).c.norm() < 1e-15);
  CHECK_THROWS_AS(vector_product(m, p, x, fv(1)), Error);
  // <X ^ Y, Z> = det(X, Y, Z) in the canonical frame
  AmbientVec y{Vec3(-0.5, 0.7, 0.2), Basis::Chart}, z{Vec3(0.9, 0.1, -0.4), Basis::Chart};
  Mat3 cols;
  cols << to_frame(m, p, x).c, to_frame(m, p, y).c, to_frame(m, p, z).c;
  CHECK(inner(m, p, vector_product(m, p, x, y), z) == doctest::Approx(cols.determinant()));
}

TEST_CASE("nabla_X xi = tau X ^ xi") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> nd;
  for (auto [k, t] : {std::pair{4.0, 1.0}, {0.0, 0.5}, {-1.0, 0.8}}) {
    ModelSpace m(k, t);
    const Vec3 p = random_point(rng, m);
    const Vec3 x(nd(rng), nd(rng), nd(rng));  // frame components
    Vec3 nabla = Vec3::Zero();
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j) nabla[j - 1] += x[i - 1] * christoffel_numeric(m, p, i, 3, j);
    const Vec3 expect = t * vector_product(m, p, {x, Basis::Frame}, fv(3)).c;
    CHECK((nabla - expect).norm() < 1e-6);
  }
}

TEST_CASE("closed curvature") {
  ModelSpace b(4.0, 1.0), nil(0.0, 0.5);
  const Vec3 p(0.1, 0.2, 0.3);
  CHECK(curvature_closed(nil, p, fv(2), fv(3), fv(2), fv(3)) == doctest::Approx(0.25));
  CHECK(curvature_closed(nil, p, fv(1), fv(2), fv(1), fv(2)) == doctest::Approx(-0.75));
  CHECK(curvature_closed(b, p, fv(1), fv(2), fv(1), fv(2)) == doctest::Approx(1.0));
  AmbientVec x{Vec3(0.3, 0.1, -0.2), Basis::Frame}, z{Vec3(1, 2, 3), Basis::Frame}, w{Vec3(-1, 0, 2), Basis::Frame};
  CHECK(curvature_closed(b, p, x, x, z, w) == 0.0);

  // product surfaces: R(X,Y,X,Y) = kappa f^2 for an orthonormal tangent pair
  std::mt19937_64 rng(17);
  std::normal_distribution<double> nd;
  for (int n = 0; n < 20; ++n) {
    Vec3 nu(nd(rng), nd(rng), nd(rng));
    nu.normalize();
    Vec3 e1 = nu.unitOrthogonal();
    Vec3 e2 = nu.cross(e1);
    const double f = nu.z();
    CHECK(curvature_orthonormal(-1.0, 0.0, e1, e2, e1, e2, Vec3(0, 0, 1)) == doctest::Approx(-f * f));
    CHECK(curvature_orthonormal(0.0, 0.7, e1, e2, e1, e2, Vec3(0, 0, 1)) ==
          doctest::Approx(0.49 - 4 * 0.49 * f * f));
  }
}

TEST_CASE("algebraic symmetries of the closed curvature") {
  std::mt19937_64 rng(19);
  std::normal_distribution<double> nd;
  auto r3 = [&] { return Vec3(nd(rng), nd(rng), nd(rng)); };
  for (int n = 0; n < 100; ++n) {
    const double k = nd(rng), t = nd(rng);
    const Vec3 x = r3(), y = r3(), z = r3(), w = r3(), xi = r3().normalized();
    auto R = [&](const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
      return curvature_orthonormal(k, t, a, b, c, d, xi);
    };
    const double base = R(x, y, z, w);
    const double scale = 1e-12 * (1.0 + std::abs(base));
    CHECK(std::abs(base + R(y, x, z, w)) < scale);
    CHECK(std::abs(base + R(x, y, w, z)) < scale);
    CHECK(std::abs(base - R(z, w, x, y)) < scale);
    CHECK(std::abs(R(x, y, z, w) + R(y, z, x, w) + R(z, x, y, w)) < scale * 10);
  }
}

TEST_CASE("numeric curvature oracle") {
  std::mt19937_64 rng(23);
  ModelSpace nil(0.0, 0.5), b(4.0, 1.0);
  const Vec3 p = random_point(rng, nil);
  CHECK(curvature_numeric(nil, p, fv(1), fv(2), fv(1), fv(2)) == doctest::Approx(-0.75).epsilon(1e-5));
  const Vec3 q = random_point(rng, b);
  CHECK(std::abs(curvature_numeric(b, q, fv(2), fv(3), fv(2), fv(3)) - 1.0) < 1e-5);
  AmbientVec x{Vec3(0.3, 0.1, -0.2), Basis::Frame};
  CHECK(std::abs(curvature_numeric(b, q, x, x, fv(1), fv(3))) < 1e-9);
}
