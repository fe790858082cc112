#include "qgk/assembly.hpp"

#include <doctest.h>

#include <cmath>

#include "qgk/errors.hpp"
#include "qgk/oracles.hpp"
#include "test_util.hpp"

using namespace qgk;
using qgk::testing::rand_rational;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

DensitySeries halfline_series(const Rational& y0) {
  auto g = testing::interval_graph("10");
  DensitySeries series;
  series.graph = g;
  series.s0 = 0;
  series.source = {"e1", y0};
  series.formulation = Formulation::Nu;
  series.orders.push_back(solve_star(g, series.source, Rational(0)));
  return series;
}

DensitySeries star_series(int leaves, const Rational& y0) {
  auto g = testing::star_graph(leaves, "50");
  DensitySeries series;
  series.graph = g;
  series.s0 = 0;
  series.source = {"e1", y0};
  series.formulation = Formulation::Nu;
  series.orders.push_back(solve_star(g, series.source, Rational(0)));
  return series;
}

DensitySeries empty_series() {
  auto g = testing::interval_graph("10");
  DensitySeries series;
  series.graph = g;
  series.s0 = 0;
  series.source = {"e1", Rational(1)};
  series.formulation = Formulation::Nu;
  DensitySystem sys;
  sys.formulation = Formulation::Nu;
  sys.s0 = 0;
  sys.source = series.source;
  sys.mu.assign(g->vertex_count(), TermSum(Rational(0)));
  sys.nu.assign(2 * g->edge_count(), TermSum(Rational(0)));
  series.orders.push_back(sys);
  return series;
}

}  // namespace

TEST_CASE("half-line assembly equals the image solution exactly") {
  auto series = halfline_series(Rational(1));
  const EdgePoint x{"e1", Rational(1)};

  const auto gamma = assemble_gamma_terms(series, x);
  REQUIRE(gamma.size() == 1);
  TermSum expected(Rational(0));
  expected.add({Kind::Log, Coeff(frac(-1, 4), -1), Rational(2), Rational(0)});
  CHECK(gamma[0] == expected);  // identical rational term data

  // G - G0 at (0,1;0,1) = -(1/4pi) ln 4; the free part is singular there but
  // the boundary part is finite
  CHECK(gamma[0].eval(0.0) ==
        doctest::Approx(-std::log(4.0) / (4 * kPi)).epsilon(1e-12));
  CHECK(gamma[0].eval(0.0) == doctest::Approx(-0.110318).epsilon(1e-5));
  CHECK(assemble_green(series, 0.5, x).includes_free);

  // numeric agreement with the image oracle on a 5x5 grid
  for (int i = 1; i <= 5; ++i)
    for (int j = 1; j <= 5; ++j) {
      const double t = 0.3 * i - 0.9;
      const EdgePoint xi{"e1", frac(2 * j, 5)};
      const auto e = assemble_green(series, t, xi);
      const double image = image_halfline(t, to_double(xi.x), 0.0, 1.0);
      CHECK(std::abs(e.gamma - image) <= 1e-12);
    }
}

TEST_CASE("interval order-0 assembly produces the single-reflection images") {
  auto g = testing::interval_graph("1");
  auto series =
      neumann_sum(g, {"e1", frac(3, 10)}, Rational(0), 0, Formulation::Nu);
  for (double t : {-1.0, 0.25, 2.0}) {
    for (int j = 1; j <= 4; ++j) {
      const EdgePoint x{"e1", frac(j, 5)};
      const double xx = to_double(x.x);
      const double expect =
          -(std::log(t * t + (xx + 0.3) * (xx + 0.3)) +
            std::log(t * t + (1.7 - xx) * (1.7 - xx))) /
          (4 * kPi);
      CHECK(assemble_green(series, t, x).gamma ==
            doctest::Approx(expect).epsilon(1e-13));
    }
  }
}

TEST_CASE("interval MRE equals the image ladder with identical rational data") {
  auto g = testing::interval_graph("1");
  const Rational y0 = frac(3, 10);
  auto series = neumann_sum(g, {"e1", y0}, Rational(0), 5, Formulation::Nu);
  const EdgePoint x{"e1", frac(1, 2)};
  const auto gamma = assemble_gamma_terms(series, x);
  const auto ladder = image_interval(Rational(1), y0, 5);

  for (int order = 0; order <= 5; ++order) {
    TermSum expected(Rational(0));
    for (const auto& img : ladder.images) {
      if (img.order != order) continue;
      Rational dist(x.x - img.position);
      if (dist < 0) dist = -dist;
      expected.add({Kind::Log, Coeff(Rational(img.coeff) / 4 * -1, -1), dist,
                    Rational(0)});
    }
    CHECK(gamma[static_cast<size_t>(order)] == expected);
  }
}

TEST_CASE("star assembly matches the closed form on and off the source edge") {
  const Rational y0(2);
  auto series = star_series(3, y0);
  // gamma_j = (delta_jl - 2/3)(1/4pi) ln[(t-s0)^2 + (x+y0)^2], exact data
  const EdgePoint on{"e1", Rational(1)};
  TermSum expect_on(Rational(0));
  expect_on.add({Kind::Log, Coeff(frac(1, 12), -1), Rational(3), Rational(0)});
  CHECK(assemble_gamma_terms(series, on)[0] == expect_on);

  const EdgePoint off{"e2", Rational(1)};
  TermSum expect_off(Rational(0));
  expect_off.add({Kind::Log, Coeff(frac(-1, 6), -1), Rational(3), Rational(0)});
  CHECK(assemble_gamma_terms(series, off)[0] == expect_off);

  // numeric sanity at one point
  const double t = 0.7;
  const double expect =
      (1.0 - 2.0 / 3.0) / (4 * kPi) * std::log(t * t + 9.0);
  CHECK(assemble_green(series, t, on).gamma ==
        doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("cylinder Tbar") {
  // free part only at unit separation: -2 G0 = (1/2pi) ln 1 = 0
  auto empty = empty_series();
  CHECK(cylinder_tbar(empty, 1.0, {"e1", Rational(1)}) == 0.0);

  // half-line at (t,x,y) = (1,1,1): (1/2pi)[ln 1 + ln 5]
  auto series = halfline_series(Rational(1));
  CHECK(cylinder_tbar(series, 1.0, {"e1", Rational(1)}) ==
        doctest::Approx(std::log(5.0) / (2 * kPi)).epsilon(1e-12));
  CHECK(cylinder_tbar(series, 1.0, {"e1", Rational(1)}) ==
        doctest::Approx(0.256152).epsilon(1e-5));

  // symmetry Tbar(t,x,y) = Tbar(t,y,x)
  std::mt19937 rng(71);
  for (int i = 0; i < 10; ++i) {
    const Rational a = rand_rational(rng, 0.25, 4.0);
    const Rational b = rand_rational(rng, 0.25, 4.0);
    const double t = to_double(rand_rational(rng, 0.25, 3.0));
    auto from_b = halfline_series(b);
    auto from_a = halfline_series(a);
    const double t1 = cylinder_tbar(from_b, t, {"e1", a});
    const double t2 = cylinder_tbar(from_a, t, {"e1", b});
    CHECK(std::abs(t1 - t2) <= 1e-12);
  }
}

TEST_CASE("cylinder T against the star kernel") {
  // d_v = 3, j = l, t = 1, x = y = 1/2: 5/(6 pi)
  auto series = star_series(3, frac(1, 2));
  const EdgePoint x{"e1", frac(1, 2)};
  const double T = cylinder_t(series, 1.0, x, series.source);
  CHECK(T == doctest::Approx(5.0 / (6.0 * kPi)).epsilon(1e-12));
  CHECK(T == doctest::Approx(image_star_t(3, 1, 1, 1.0, 0.5, 0.5)).epsilon(1e-13));

  // d_v = 2: the vertex is transparent; off-edge T equals the free kernel
  auto two = star_series(2, frac(1, 2));
  const EdgePoint other{"e2", frac(1, 2)};
  const double cross = cylinder_t(two, 1.0, other, two.source);
  CHECK(cross == doctest::Approx((1.0 / kPi) / (1.0 + 1.0)).epsilon(1e-12));
  // on-edge: 2/d_v - delta = 0 kills the image term
  const double on = cylinder_t(two, 1.0, x, two.source);
  CHECK(on == doctest::Approx((1.0 / kPi) / 1.0).epsilon(1e-12));

  // d_v = 1 Neumann image: (1/pi)(1 + 1/5)
  auto half = halfline_series(Rational(1));
  CHECK(cylinder_t(half, 1.0, {"e1", Rational(1)}, half.source) ==
        doctest::Approx((1.0 / kPi) * 1.2).epsilon(1e-12));

  CHECK_THROWS_AS(cylinder_t(half, 1.0, x, EdgePoint{"e1", Rational(2)}), Error);
}

TEST_CASE("renormalized diagonal") {
  auto half = halfline_series(Rational(1));
  CHECK(renormalized_diagonal(half, 1.0, {"e1", Rational(1)}) ==
        doctest::Approx(1.0 / (5.0 * kPi)).epsilon(1e-12));

  auto star3 = star_series(3, Rational(1));
  CHECK(renormalized_diagonal(star3, 1.0, {"e1", Rational(1)}) ==
        doctest::Approx(-1.0 / (15.0 * kPi)).epsilon(1e-12));

  CHECK(renormalized_diagonal(empty_series(), 1.0, {"e1", Rational(1)}) == 0.0);
  CHECK_THROWS_AS(renormalized_diagonal(half, 0.0, EdgePoint{"e1", Rational(1)}),
                  Error);
  CHECK_THROWS_AS(renormalized_diagonal(half, 1.0, EdgePoint{"e1", Rational(2)}),
                  Error);
}

TEST_CASE("partial sums are symmetric under source-field exchange") {
  // interval, path, and triangle: per-order gamma invariance under
  // (t,x) <-> (s0,y0), checked at rational times
  struct Case {
    std::shared_ptr<const QuantumGraph> g;
    Formulation formulation;
  };
  std::vector<Case> cases = {
      {testing::interval_graph("1"), Formulation::Nu},
      {testing::path_graph("0.7", "1.3"), Formulation::NuPrime},
      {testing::triangle_graph("1", "0.5", "0.25"), Formulation::NuPrime}};
  for (const auto& c : cases) {
    const EdgePoint y{c.g->edge(0).id, frac(3, 10)};
    const EdgePoint x{c.g->edge(c.g->edge_count() > 1 ? 1 : 0).id, frac(2, 5)};
    const Rational s0(0), t0 = frac(3, 4);
    auto forward = neumann_sum(c.g, y, s0, 4, c.formulation);
    auto backward = neumann_sum(c.g, x, t0, 4, c.formulation);
    const auto gf = assemble_green(forward, to_double(t0), x);
    const auto gb = assemble_green(backward, to_double(s0), y);
    REQUIRE(gf.order_contrib.size() == gb.order_contrib.size());
    double cf = gf.includes_free ? gf.free_part : 0.0;
    double cb = gb.includes_free ? gb.free_part : 0.0;
    CHECK(std::abs(cf - cb) <= 1e-12);
    for (size_t k = 0; k < gf.order_contrib.size(); ++k) {
      cf += gf.order_contrib[k];
      cb += gb.order_contrib[k];
      CHECK(std::abs(cf - cb) <= 1e-12);
    }
  }
}

TEST_CASE("vertex conditions hold exactly for the closed forms") {
  auto half = halfline_series(Rational(1));
  CHECK(kirchhoff_residual_terms(half, -1, "v0").empty());

  auto star3 = star_series(3, Rational(2));
  CHECK(kirchhoff_residual_terms(star3, -1, "c").empty());
  const auto& g = *star3.graph;
  const EdgeEnd a{g.edge_index("e1"), 0};
  const EdgeEnd b{g.edge_index("e2"), 0};
  const EdgeEnd c{g.edge_index("e3"), 0};
  CHECK(continuity_residual_terms(star3, -1, a, b).empty());
  CHECK(continuity_residual_terms(star3, -1, b, c).empty());
}

TEST_CASE("interval truncation residual equals the first omitted reflection") {
  auto g = testing::interval_graph("1");
  auto series =
      neumann_sum(g, {"e1", frac(3, 10)}, Rational(0), 6, Formulation::Nu);
  for (int N : {0, 1, 2, 3, 4, 5}) {
    const auto residual = kirchhoff_residual_terms(series, N, "v0");
    const auto omitted =
        series.orders[static_cast<size_t>(N + 1)].mu_at(g->vertex_index("v0"));
    CHECK(residual == omitted.scaled(Coeff(frac(1, 2))));
    // numerically small and shrinking with the image distance
    for (int i = 0; i < 20; ++i) {
      const double t = -2.0 + 0.21 * i;
      CHECK(std::abs(residual.eval(t) - 0.5 * omitted.eval(t)) <= 1e-10);
    }
  }
  const auto r0 = kirchhoff_residual_terms(series, 0, "v0");
  const auto r5 = kirchhoff_residual_terms(series, 5, "v0");
  CHECK(std::abs(r5.eval(0.0)) < std::abs(r0.eval(0.0)));
}

TEST_CASE("nu-prime truncation residuals telescope to the omitted order") {
  auto g = testing::path_graph("0.5", "0.5");
  auto series = neumann_sum(g, {"e1", frac(3, 10)}, Rational(0), 6,
                            Formulation::NuPrime);
  const EdgeEnd at_b_left{g->edge_index("e1"), 1};
  const EdgeEnd at_b_right{g->edge_index("e2"), 0};
  for (int N : {0, 1, 3, 5}) {
    // continuity: residual = (nu_b - nu_a)/2 taken from the first omitted
    // order (its value grows logarithmically with the image distance, which
    // is the known behavior of the undifferentiated G series)
    const auto residual =
        continuity_residual_terms(series, N, at_b_left, at_b_right);
    const auto& next = series.orders[static_cast<size_t>(N + 1)];
    TermSum expected =
        antiderivative_time(next.nu_at(at_b_right)).scaled(Coeff(frac(1, 2)));
    expected.add(antiderivative_time(next.nu_at(at_b_left))
                     .scaled(Coeff(frac(-1, 2))));
    CHECK(residual == compact(expected));
  }
  // the flux residual is EVEN/ODD-type and does decay with the image distance
  const auto flux_deep = kirchhoff_residual_terms(series, 6, "b");
  const auto flux_shallow = kirchhoff_residual_terms(series, 1, "b");
  CHECK(std::abs(flux_deep.eval(0.1)) < std::abs(flux_shallow.eval(0.1)));
}

TEST_CASE("interchange identity via quadrature") {
  std::mt19937 rng(83);
  for (int i = 0; i < 5; ++i) {
    const double x = to_double(rand_rational(rng, 0.5, 3.0));
    const double y0 = to_double(rand_rational(rng, 0.5, 3.0));
    const double t = to_double(rand_rational(rng, -2.0, 2.0));
    const double s0 = to_double(rand_rational(rng, -2.0, 2.0));
    const double lhs = (y0 / kPi) * quad_prop_log(x, y0, t, s0);
    const double swapped = (x / kPi) * quad_prop_log(y0, x, s0, t);
    const double closed =
        std::log((t - s0) * (t - s0) + (x + y0) * (x + y0));
    CHECK(std::abs(lhs - closed) <= 1e-8);
    CHECK(std::abs(lhs - swapped) <= 1e-8);
  }
}

TEST_CASE("assembled G is harmonic away from source and boundary") {
  auto g = testing::path_graph("0.7", "1.3");
  auto series =
      neumann_sum(g, {"e1", frac(3, 10)}, Rational(0), 3, Formulation::NuPrime);
  const Rational h = frac(1, 2048);
  const double hd = to_double(h);
  for (const auto& [edge, xc] :
       {std::pair{std::string("e1"), frac(1, 2)},
        std::pair{std::string("e2"), frac(2, 5)}}) {
    for (double t : {0.4, 1.1}) {
      auto G = [&](double tt, const Rational& xx) {
        return assemble_green(series, tt, {edge, xx}).green;
      };
      const double center = G(t, xc);
      const double lap =
          (G(t + hd, xc) + G(t - hd, xc) + G(t, Rational(xc + h)) +
           G(t, Rational(xc - h)) - 4.0 * center) /
          (hd * hd);
      CHECK(std::abs(lap) <= 1e-6 * std::max(1.0, std::abs(center)));
    }
  }
}

TEST_CASE("singular evaluation at the source point") {
  auto series = halfline_series(Rational(1));
  CHECK_THROWS_AS(assemble_green(series, 0.0, EdgePoint{"e1", Rational(1)}),
                  SingularEvaluation);
  CHECK_NOTHROW(assemble_green(series, 0.5, EdgePoint{"e1", Rational(1)}));
}
