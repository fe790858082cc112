#include "qgk/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

#include "qgk/errors.hpp"
#include "test_util.hpp"

using namespace qgk;
using qgk::testing::rand_rational;

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

TEST_CASE("half-line image values") {
  CHECK(image_halfline(0, 1, 0, 1) ==
        doctest::Approx(-std::log(4.0) / (4 * kPi)).epsilon(1e-12));
  // (t-s0)^2 + (x+y0)^2 = 1
  CHECK(image_halfline(0.0, 0.6, 0.0, 0.4) == 0.0);
  // gamma equals G0 at the mirrored source
  CHECK(image_halfline(1.2, 0.7, 0.1, 0.4) ==
        doctest::Approx(g0(1.2, 0.7, 0.1, -0.4)).epsilon(1e-15));
}

#include "qgk/terms.hpp"

TEST_CASE("star cylinder kernel values") {
  CHECK(image_star_t(3, 1, 1, 1.0, 0.5, 0.5) ==
        doctest::Approx(5.0 / (6.0 * kPi)).epsilon(1e-12));
  // transparent vertex, cross edge: pure transmission
  CHECK(image_star_t(2, 1, 2, 1.0, 0.5, 0.5) ==
        doctest::Approx((1.0 / kPi) * 1.0 / (1.0 + 1.0)).epsilon(1e-12));
  // d_v = 1 reduces to the Neumann half-line kernel
  const double direct = (1.0 / kPi) * 1.0 / (1.0 + 0.0);
  const double image = (1.0 / kPi) * 1.0 / (1.0 + 4.0);
  CHECK(image_star_t(1, 1, 1, 1.0, 1.0, 1.0) ==
        doctest::Approx(direct + image).epsilon(1e-12));
}

TEST_CASE("interval image ladder") {
  const Rational L(1);
  const Rational y0 = frac(3, 10);
  auto e0 = image_interval(L, y0, 0);
  REQUIRE(e0.images.size() == 2);
  CHECK(e0.images[0].position == frac(-3, 10));
  CHECK(e0.images[1].position == frac(17, 10));

  auto e1 = image_interval(L, y0, 1);
  REQUIRE(e1.images.size() == 4);
  CHECK(e1.images[2].position == frac(-17, 10));
  CHECK(e1.images[3].position == frac(23, 10));

  for (const auto& img : e1.images) CHECK(img.coeff == 1);

  // all positions have the form +-y0 + 2kL; on each side of the interval the
  // image distances strictly increase
  auto deep = image_interval(L, y0, 6);
  CHECK(deep.images.size() == 14);
  Rational prev_neg(0), prev_pos(0);
  for (const auto& img : deep.images) {
    Rational r1((img.position - y0) / (2 * L));
    Rational r2((img.position + y0) / (2 * L));
    CHECK((r1.get_den() == 1 || r2.get_den() == 1));
    if (img.position < 0) {
      Rational mag(-img.position);
      CHECK(mag > prev_neg);
      prev_neg = mag;
    } else {
      CHECK(img.position > prev_pos);
      prev_pos = img.position;
    }
  }
  CHECK_THROWS_AS(image_interval(L, Rational(2), 0), Error);
}

TEST_CASE("named quadratures against closed forms") {
  // Lorentzian-pair lemma at the center: (pi/(x y0)) (x+y0)/((x+y0)^2)
  const double a1 = quad_lemma_even(1, 1, 0, 0);
  CHECK(a1 == doctest::Approx(kPi / 2.0).epsilon(1e-9));
  // odd integrand vanishes at t = s0
  CHECK(std::abs(quad_lemma_odd(1, 1, 0, 0)) <= 1e-9);
  // log lemma at the center: (pi/y0) ln[(x+y0)^2]
  CHECK(quad_prop_log(1, 1, 0, 0) ==
        doctest::Approx(kPi * std::log(4.0)).epsilon(1e-9));
}

TEST_CASE("lemma quadratures across random parameters") {
  std::mt19937 rng(67);
  for (int i = 0; i < 20; ++i) {
    const double x = to_double(rand_rational(rng, 0.25, 4.0));
    const double y0 = to_double(rand_rational(rng, 0.25, 4.0));
    const double t = to_double(rand_rational(rng, -3.0, 3.0));
    const double s0 = to_double(rand_rational(rng, -3.0, 3.0));
    const double u = t - s0, w = x + y0;
    const double even_rhs = (kPi / (x * y0)) * w / (u * u + w * w);
    CHECK(std::abs(quad_lemma_even(x, y0, t, s0) - even_rhs) <=
          1e-8 * std::max(1.0, std::abs(even_rhs)));
    const double odd_rhs = (kPi / y0) * u / (u * u + w * w);
    CHECK(std::abs(quad_lemma_odd(x, y0, t, s0) - odd_rhs) <=
          1e-8 * std::max(1.0, std::abs(odd_rhs)));
    const double log_rhs = (kPi / y0) * std::log(u * u + w * w);
    CHECK(std::abs(quad_prop_log(x, y0, t, s0) - log_rhs) <=
          1e-8 * std::max(1.0, std::abs(log_rhs)));
  }
}

TEST_CASE("flat-boundary reflection identity") {
  CHECK(balian_bloch_residual(1, 1, 0, 1) <= 1e-8);
  CHECK(balian_bloch_residual(0, 2, 0, 1) <= 1e-8);
  // symmetric under (t,x) <-> (s0,y0)
  const double lhs1 = image_halfline(1.3, 0.8, 0.2, 1.1);
  const double lhs2 = image_halfline(0.2, 1.1, 1.3, 0.8);
  CHECK(lhs1 == doctest::Approx(lhs2).epsilon(1e-12));
  CHECK(balian_bloch_residual(1.3, 0.8, 0.2, 1.1) <= 1e-8);
  CHECK(balian_bloch_residual(0.2, 1.1, 1.3, 0.8) <= 1e-8);
}

TEST_CASE("quadrature budget is enforced") {
  QuadOptions tiny;
  tiny.max_evals = 30;
  CHECK_THROWS_AS(quad_prop_log(1, 1, 0, 0, tiny), QuadratureBudgetError);
}
