#include "qgk/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "qgk/errors.hpp"

namespace qgk {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// 15-point Kronrod rule with embedded 7-point Gauss (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
constexpr double kWgk[8] = {
    0.02293532201052922, 0.06309209262997855, 0.10479001032225018,
    0.14065325971552592, 0.16900472663926790, 0.19035057806478541,
    0.20443294007529889, 0.20948214108472783};
constexpr double kWg[4] = {0.12948496616886969, 0.27970539148927664,
                           0.38183005050511894, 0.41795918367346939};

struct CellEstimate {
  double value = 0;
  double error = 0;
};

CellEstimate gk15_cell(const std::function<double(double)>& f, double a,
                       double b, long& evals) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double fv[15];
  // fv layout: pairs (center - x, center + x) for kXgk[0..6], then center.
  for (int i = 0; i < 7; ++i) {
    fv[2 * i] = f(center - half * kXgk[i]);
    fv[2 * i + 1] = f(center + half * kXgk[i]);
  }
  fv[14] = f(center);
  evals += 15;

  double result_kronrod = kWgk[7] * fv[14];
  double result_abs = std::abs(result_kronrod);
  for (int i = 0; i < 7; ++i) {
    result_kronrod += kWgk[i] * (fv[2 * i] + fv[2 * i + 1]);
    result_abs += kWgk[i] * (std::abs(fv[2 * i]) + std::abs(fv[2 * i + 1]));
  }
  double result_gauss = kWg[3] * fv[14];
  for (int i = 0; i < 3; ++i) {
    const int k = 2 * i + 1;  // Gauss nodes sit at kXgk[1], kXgk[3], kXgk[5]
    result_gauss += kWg[i] * (fv[2 * k] + fv[2 * k + 1]);
  }
  const double mean = result_kronrod * 0.5;
  double result_asc = kWgk[7] * std::abs(fv[14] - mean);
  for (int i = 0; i < 7; ++i)
    result_asc += kWgk[i] * (std::abs(fv[2 * i] - mean) +
                             std::abs(fv[2 * i + 1] - mean));

  CellEstimate cell;
  cell.value = result_kronrod * half;
  result_abs *= half;
  result_asc *= half;
  double err = std::abs((result_kronrod - result_gauss) * half);
  if (result_asc != 0.0 && err != 0.0)
    err = result_asc * std::min(1.0, std::pow(200.0 * err / result_asc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  err = std::max(err, 50.0 * eps * result_abs);
  cell.error = err;
  return cell;
}

struct Budget {
  long remaining;
  double accumulated = 0.0;

  void charge(long used, const std::string& what) {
    remaining -= used;
    if (remaining < 0)
      throw QuadratureBudgetError("quadrature budget exceeded in " + what,
                                  accumulated);
  }
};

// Globally adaptive refinement: keep a worst-cell-first queue, bisect until
// the summed error estimate clears the tolerance or the budget runs out.
double gk_segment(const std::function<double(double)>& f, double a, double b,
                  const QuadOptions& opts, Budget& budget,
                  const std::string& what) {
  if (!(a < b)) return 0.0;
  struct Cell {
    double a, b;
    CellEstimate est;
    bool operator<(const Cell& o) const { return est.error < o.est.error; }
  };
  long evals = 0;
  std::priority_queue<Cell> queue;
  queue.push({a, b, gk15_cell(f, a, b, evals)});
  double total_value = queue.top().est.value;
  double total_error = queue.top().est.error;
  const double eps = std::numeric_limits<double>::epsilon();
  const double min_width = 16.0 * eps * std::max(std::abs(a), std::abs(b)) + 1e-300;

  while (total_error > opts.abs_tol) {
    budget.charge(evals, what);
    evals = 0;
    const Cell worst = queue.top();
    if (worst.b - worst.a <= min_width) break;  // cannot refine further
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Cell left{worst.a, mid, gk15_cell(f, worst.a, mid, evals)};
    const Cell right{mid, worst.b, gk15_cell(f, mid, worst.b, evals)};
    total_value += left.est.value + right.est.value - worst.est.value;
    total_error += left.est.error + right.est.error - worst.est.error;
    queue.push(left);
    queue.push(right);
  }
  budget.charge(evals, what);
  budget.accumulated += total_value;
  if (!(total_error <= opts.abs_tol) || !std::isfinite(total_value))
    throw QuadratureBudgetError(
        "quadrature failed to converge on [" + std::to_string(a) + ", " +
            std::to_string(b) + "] in " + what,
        total_value);
  return total_value;
}

}  // namespace

ImageExpansion image_interval(const Rational& length, const Rational& y0,
                              int order) {
  if (y0 <= 0 || y0 >= length)
    throw Error("source must satisfy 0 < y0 < L; got y0 = " + rational_str(y0) +
                ", L = " + rational_str(length));
  if (order < 0) throw Error("image expansion order must be >= 0");
  ImageExpansion out;
  out.max_order = order;
  const Rational L = length;
  for (int k = 0; k <= order; ++k) {
    // Even orders reflect off the near end, odd orders off the far end;
    // positions run through +-y0 + 2mL, two new images per order.
    Rational a, b;
    if (k % 2 == 0) {
      const int m = k / 2;
      a = Rational(-y0 - 2 * m * L);
      b = Rational(-y0 + (2 * m + 2) * L);
    } else {
      const int m = (k - 1) / 2;
      a = Rational(y0 - (2 * m + 2) * L);
      b = Rational(y0 + (2 * m + 2) * L);
    }
    out.images.push_back({Rational(1), a, k});
    out.images.push_back({Rational(1), b, k});
  }
  return out;
}

double image_halfline(double t, double x, double s0, double y0) {
  if (x <= 0 || y0 <= 0) throw Error("image_halfline requires x > 0 and y0 > 0");
  const double u = t - s0, v = x + y0;
  return -std::log(u * u + v * v) / (4.0 * kPi);
}

double image_star_t(int d_v, int j, int l, double t, double x, double y) {
  if (d_v < 1) throw Error("image_star_t requires d_v >= 1");
  if (t <= 0) throw Error("image_star_t requires t > 0");
  if (x <= 0 || y <= 0) throw Error("image_star_t requires x > 0 and y > 0");
  const double delta = (j == l) ? 1.0 : 0.0;
  const double direct = delta * (t / kPi) / (t * t + (x - y) * (x - y));
  const double image =
      (2.0 / d_v - delta) * (t / kPi) / (t * t + (x + y) * (x + y));
  return direct + image;
}

double integrate_segment(const std::function<double(double)>& f, double a,
                         double b, const QuadOptions& options) {
  Budget budget{options.max_evals};
  return gk_segment(f, a, b, options, budget, "segment");
}

double integrate_real_line(const std::function<double(double)>& f,
                           std::vector<double> breakpoints, double scale_hint,
                           const QuadOptions& options) {
  double reach = std::max(scale_hint, 1.0);
  for (double b : breakpoints) reach = std::max(reach, std::abs(b));
  const double S = 10.0 * reach;

  breakpoints.push_back(-S);
  breakpoints.push_back(S);
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()),
                    breakpoints.end());

  Budget budget{options.max_evals};
  double total = 0.0;
  for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = std::max(breakpoints[i], -S);
    const double b = std::min(breakpoints[i + 1], S);
    total += gk_segment(f, a, b, options, budget, "core");
  }
  // Tails: s = 1/u maps [S, inf) to (0, 1/S]; the integrand decays at least
  // like 1/s^2 here, so f(1/u)/u^2 stays integrable.
  auto upper = [&](double u) { return f(1.0 / u) / (u * u); };
  auto lower = [&](double u) { return f(-1.0 / u) / (u * u); };
  total += gk_segment(upper, 0.0, 1.0 / S, options, budget, "upper tail");
  total += gk_segment(lower, 0.0, 1.0 / S, options, budget, "lower tail");
  return total;
}

double quad_lemma_even(double x, double y0, double t, double s0,
                       const QuadOptions& options) {
  if (x <= 0 || y0 <= 0) throw Error("lemma integrals require x > 0 and y0 > 0");
  auto f = [=](double s) {
    const double a = (t - s) * (t - s) + x * x;
    const double b = (s - s0) * (s - s0) + y0 * y0;
    return 1.0 / (a * b);
  };
  const double hint = std::max({x, y0, std::abs(t - s0), std::abs(t), std::abs(s0)});
  return integrate_real_line(f, {t, s0, t - x, t + x, s0 - y0, s0 + y0}, hint,
                             options);
}

double quad_lemma_odd(double x, double y0, double t, double s0,
                      const QuadOptions& options) {
  if (x <= 0 || y0 <= 0) throw Error("lemma integrals require x > 0 and y0 > 0");
  auto f = [=](double s) {
    const double a = (t - s) * (t - s) + x * x;
    const double b = (s - s0) * (s - s0) + y0 * y0;
    return (t - s) / (a * b);
  };
  const double hint = std::max({x, y0, std::abs(t - s0), std::abs(t), std::abs(s0)});
  return integrate_real_line(f, {t, s0, t - x, t + x, s0 - y0, s0 + y0}, hint,
                             options);
}

double quad_prop_log(double x, double y0, double t, double s0,
                     const QuadOptions& options) {
  if (x <= 0 || y0 <= 0) throw Error("lemma integrals require x > 0 and y0 > 0");
  auto f = [=](double s) {
    const double a = (t - s) * (t - s) + x * x;
    const double b = (s - s0) * (s - s0) + y0 * y0;
    return std::log(a) / b;
  };
  const double hint = std::max({x, y0, std::abs(t - s0), std::abs(t), std::abs(s0)});
  return integrate_real_line(f, {t, s0, t - x, t + x, s0 - y0, s0 + y0}, hint,
                             options);
}

double convolution_numeric(const CanonicalTerm& kernel,
                           const CanonicalTerm& density, double t,
                           const QuadOptions& options) {
  auto f = [&](double s) { return kernel.eval(t - s) * density.eval(s); };
  const double kc = to_double(kernel.s0), kd = to_double(kernel.d);
  const double dc = to_double(density.s0), dd = to_double(density.d);
  std::vector<double> breaks = {t - kc, t - kc - kd, t - kc + kd,
                                dc,     dc - dd,     dc + dd};
  const double hint =
      std::max({kd, dd, std::abs(t - dc), std::abs(t), std::abs(dc), 1.0});
  return integrate_real_line(f, breaks, hint, options);
}

double constant_vanishing_integral(const QuadOptions& options) {
  // Split at sigma = 1; the substitution sigma -> 1/sigma shows the halves
  // cancel, which the quadrature should reproduce.
  auto f = [](double s) { return std::log(s) / (s * s + 1.0); };
  Budget budget{options.max_evals};
  const double head = gk_segment(f, 0.0, 1.0, options, budget, "head");
  auto mapped = [&](double u) { return f(1.0 / u) / (u * u); };
  const double tail = gk_segment(mapped, 0.0, 1.0, options, budget, "tail");
  return head + tail;
}

double balian_bloch_residual(double t, double x, double s0, double y0,
                             const QuadOptions& options) {
  if (x <= 0 || y0 <= 0)
    throw Error("balian_bloch_residual requires x > 0 and y0 > 0");
  // Inward normal derivative of G0 on the boundary line times the boundary
  // trace of G0 at the source, doubled.
  auto f = [=](double s) {
    const double dn = (x / (2.0 * kPi)) / ((t - s) * (t - s) + x * x);
    const double trace =
        -std::log((s - s0) * (s - s0) + y0 * y0) / (4.0 * kPi);
    return 2.0 * dn * trace;
  };
  const double hint = std::max({x, y0, std::abs(t - s0), std::abs(t), std::abs(s0)});
  const double lhs =
      integrate_real_line(f, {t, s0, t - x, t + x, s0 - y0, s0 + y0}, hint, options);
  const double rhs = image_halfline(t, x, s0, y0);
  return std::abs(lhs - rhs);
}

}  // namespace qgk
