#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "spinframe/clifford.hpp"

using namespace spinframe;

namespace {

struct Gen {
  std::mt19937_64 rng{7};
  std::normal_distribution<double> n{0.0, 1.0};
  TangentVec2 vec() { return {n(rng), n(rng)}; }
  Spinor spinor() { return Spinor(cplx(n(rng), n(rng)), cplx(n(rng), n(rng))); }
};

const cplx I(0.0, 1.0);

}  // namespace

TEST_CASE("reference representation values") {
  const Spinor up(1.0, 0.0);
  const Spinor e1up = clifford_mul({1, 0}, up);
  CHECK(e1up(0) == cplx(0.0, 0.0));
  CHECK(e1up(1) == I);
  const Spinor w = omega_mul(up);
  CHECK(w(0) == -I);
  CHECK(w(1) == cplx(0.0));
  const Spinor phi(cplx(0.3, -1.0), cplx(2.0, 0.5));
  auto [p, m] = split(phi);
  CHECK(p == Spinor(phi(0), 0.0));
  CHECK(m == Spinor(0.0, phi(1)));
  CHECK((omega2_op() - I * omega_op()).norm() == 0.0);
  CHECK((gamma({1, 0}) * gamma({0, 1}) - omega_op()).norm() == 0.0);
}

TEST_CASE("matrix and direct actions agree") {
  Gen g;
  for (int k = 0; k < 100; ++k) {
    const TangentVec2 x = g.vec();
    const Spinor phi = g.spinor();
    CHECK((gamma(x) * phi - clifford_mul(x, phi)).norm() < 1e-15);
    CHECK((omega_op() * phi - omega_mul(phi)).norm() < 1e-15);
  }
}

TEST_CASE("algebraic identities on random inputs") {
  Gen g;
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const TangentVec2 x = g.vec(), y = g.vec();
    const Spinor phi = g.spinor(), psi = g.spinor();
    const double scale = 1.0 + x.norm2() + y.norm2() + norm2(phi) + norm2(psi);
    auto upd = [&](double r) { worst = std::max(worst, r / scale); };
    upd((clifford_mul(x, clifford_mul(y, phi)) + clifford_mul(y, clifford_mul(x, phi)) + 2.0 * dot(x, y) * phi).norm());
    upd((omega_mul(omega_mul(phi)) + phi).norm());
    upd((omega_mul(clifford_mul(x, phi)) + clifford_mul(x, omega_mul(phi))).norm());
    upd(std::abs(herm(clifford_mul(x, phi), psi) + herm(phi, clifford_mul(x, psi))));
    upd(std::abs(re_herm(clifford_mul(x, phi), phi)));
    upd(std::abs(re_herm(omega_mul(phi), phi)));
    const Spinor beta = clifford_mul(x, phi) + dot(x, y) * omega_mul(phi);
    upd(std::abs(re_herm(beta, phi)));
    upd(std::abs(herm(phi, phi).imag()));
    auto [p, m] = split(phi);
    upd((omega2_mul(p) - p).norm() + (omega2_mul(m) + m).norm() + (p + m - phi).norm());
    upd((bar(phi) - (p - m)).norm());
    // vectors swap the halves, omega preserves them
    upd(split(clifford_mul(x, p)).first.norm() + split(clifford_mul(x, m)).second.norm());
    upd(split(omega_mul(p)).second.norm());
  }
  CHECK(worst < 1e-13);
}

TEST_CASE("degenerate inputs") {
  const Spinor phi(cplx(1, 2), cplx(3, 4));
  CHECK(clifford_mul({0, 0}, phi).norm() == 0.0);
  CHECK(norm2(Spinor::Zero()) == 0.0);
  CHECK(norm2(phi) == doctest::Approx(30.0));
  CHECK((clifford_mul({1, 0}, clifford_mul({1, 0}, phi)) + phi).norm() == 0.0);
  const Spinor pos(cplx(0.5, 1), 0.0);
  CHECK(bar(pos) == pos);
}

TEST_CASE("rotation J") {
  CHECK(rotate_J({1, 0}).a1 == 0.0);
  CHECK(rotate_J({1, 0}).a2 == 1.0);
  Gen g;
  for (int k = 0; k < 50; ++k) {
    const TangentVec2 x = g.vec(), y = g.vec();
    const TangentVec2 jj = rotate_J(rotate_J(x));
    CHECK(jj.a1 == -x.a1);
    CHECK(jj.a2 == -x.a2);
    CHECK(dot(rotate_J(x), rotate_J(y)) == doctest::Approx(dot(x, y)));
  }
}
