#include "qgk/thermal.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "qgk/errors.hpp"

namespace qgk {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

void check_params(const ThermalParams& params) {
  if (!(params.temperature > 0)) throw Error("temperature must be positive");
}

// cos(2 pi T u) with the phase reduced to one period first, so that shifting
// t by beta reproduces the same value bit for bit.
double cos_reduced(double u_over_beta) {
  const double r = u_over_beta - std::floor(u_over_beta);
  return std::cos(2.0 * kPi * r);
}

double sin_reduced(double u_over_beta) {
  const double r = u_over_beta - std::floor(u_over_beta);
  return std::sin(2.0 * kPi * r);
}

double denom(double t, double x, double s, double y, const ThermalParams& p) {
  const double a = 2.0 * kPi * p.temperature * (x - y);
  return std::cosh(a) - cos_reduced(p.temperature * (t - s));
}

}  // namespace

double gt(double t, double x, double s, double y, const ThermalParams& params) {
  check_params(params);
  const double D = denom(t, x, s, y, params);
  if (D <= 0.0)
    throw SingularEvaluation("G_T at a periodic image of the source");
  return -std::log(D) / (4.0 * kPi);
}

std::pair<double, double> gt_grad(double t, double x, double s, double y,
                                  const ThermalParams& params) {
  check_params(params);
  const double T = params.temperature;
  const double D = denom(t, x, s, y, params);
  if (D <= 0.0)
    throw SingularEvaluation("grad G_T at a periodic image of the source");
  const double dt = -0.5 * T * sin_reduced(T * (t - s)) / D;
  const double dx = -0.5 * T * std::sinh(2.0 * kPi * T * (x - y)) / D;
  return {dt, dx};
}

double periodic_poisson(double u, double d, const ThermalParams& params) {
  check_params(params);
  if (!(d > 0)) throw Error("periodic_poisson requires separation d > 0");
  const double T = params.temperature;
  const double a = 2.0 * kPi * T * d;
  return T * std::sinh(a) / (std::cosh(a) - cos_reduced(T * u));
}

PeriodicSumCheck periodic_sum_check(double a, double b, long n_max) {
  if (!(a > 0)) throw Error("periodic_sum_check requires a > 0");
  if (n_max < 1) throw Error("periodic_sum_check requires N_max >= 1");
  PeriodicSumCheck out;
  // Sum smallest terms first so the accumulation stays accurate.
  double sum = 0.0;
  for (long n = n_max; n >= 1; --n) {
    sum += 1.0 / (a * a + (b + n) * (b + n));
    sum += 1.0 / (a * a + (b - n) * (b - n));
  }
  sum += 1.0 / (a * a + b * b);
  out.partial_sum = sum;
  out.closed_form = (kPi / a) * std::sinh(2.0 * kPi * a) /
                    (std::cosh(2.0 * kPi * a) - std::cos(2.0 * kPi * b));
  out.gap = std::abs(out.partial_sum - out.closed_form);
  out.tail_bound = 2.0 / (static_cast<double>(n_max) - std::abs(b));
  return out;
}

namespace {

struct DiscreteSystem {
  int M;
  double h;
  Eigen::MatrixXd A;   // h * K_T(t_m - t_k) at separation L
  Eigen::VectorXd g0;  // source at vertex 0
  Eigen::VectorXd gL;  // source at vertex L
};

DiscreteSystem discretize(double length, double y0, double s0,
                          const ThermalParams& params, int M) {
  check_params(params);
  if (!(length > 0)) throw Error("interval length must be positive");
  if (!(y0 > 0.0 && y0 < length)) throw Error("source must satisfy 0 < y0 < L");
  if (M < 8 || M % 2 != 0) throw Error("node count must be even and >= 8");

  DiscreteSystem sys;
  sys.M = M;
  const double beta = params.beta();
  sys.h = beta / M;
  sys.A.resize(M, M);
  sys.g0.resize(M);
  sys.gL.resize(M);
  for (int m = 0; m < M; ++m) {
    const double tm = m * sys.h;
    for (int k = 0; k < M; ++k)
      sys.A(m, k) = sys.h * periodic_poisson(tm - k * sys.h, length, params);
    sys.g0(m) = periodic_poisson(tm - s0, y0, params);
    sys.gL(m) = periodic_poisson(tm - s0, length - y0, params);
  }
  return sys;
}

PeriodicDensity make_density(const Eigen::VectorXd& values, double beta,
                             const std::string& vertex) {
  PeriodicDensity d;
  d.node_count = static_cast<int>(values.size());
  d.beta = beta;
  d.vertex = vertex;
  d.values.assign(values.data(), values.data() + values.size());
  return d;
}

}  // namespace

NystromResult nystrom_solve(double length, double y0, double s0,
                            const ThermalParams& params, int node_count,
                            double mean_target) {
  const DiscreteSystem sys = discretize(length, y0, s0, params, node_count);
  const int M = sys.M;
  const int n = 2 * M + 1;

  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  B.topLeftCorner(M, M).setIdentity();
  B.block(M, M, M, M).setIdentity();
  B.block(0, M, M, M) = -sys.A;
  B.block(M, 0, M, M) = -sys.A;
  // Deflation column (the constant null direction of the adjoint) and the
  // mean-constraint row.
  for (int i = 0; i < 2 * M; ++i) {
    B(i, 2 * M) = 1.0;
    B(2 * M, i) = sys.h;
  }

  Eigen::VectorXd rhs(n);
  rhs.segment(0, M) = sys.g0;
  rhs.segment(M, M) = sys.gL;
  rhs(2 * M) = mean_target;

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
  const double rcond = lu.rcond();
  if (rcond < 1e-10)
    throw NearResonanceError(
        "deflated Fredholm system is near-singular (extra eigenvalue at 1)",
        rcond);
  const Eigen::VectorXd sol = lu.solve(rhs);

  NystromResult out;
  out.residual = (B * sol - rhs).lpNorm<Eigen::Infinity>();
  out.rcond = rcond;
  out.zero_mode_defect = sol(2 * M);
  out.mean_target = mean_target;
  out.mu0 = make_density(sol.segment(0, M), params.beta(), "v0");
  out.muL = make_density(sol.segment(M, M), params.beta(), "vL");
  return out;
}

ThermalNeumannResult thermal_neumann(double length, double y0, double s0,
                                     const ThermalParams& params, int node_count,
                                     int n_max) {
  if (n_max < 0) throw Error("thermal_neumann requires N_max >= 0");
  const DiscreteSystem sys = discretize(length, y0, s0, params, node_count);
  const int M = sys.M;

  Eigen::VectorXd inc0 = sys.g0, incL = sys.gL;
  Eigen::VectorXd cum0 = inc0, cumL = incL;

  ThermalNeumannResult out;
  auto record = [&]() {
    const double plain =
        std::max(inc0.lpNorm<Eigen::Infinity>(), incL.lpNorm<Eigen::Infinity>());
    const double mean = (inc0.sum() + incL.sum()) / (2.0 * M);
    const double deflated =
        std::max((inc0.array() - mean).abs().maxCoeff(),
                 (incL.array() - mean).abs().maxCoeff());
    out.increment_norms.push_back(plain);
    out.deflated_increment_norms.push_back(deflated);
  };
  record();
  for (int k = 0; k < n_max; ++k) {
    const Eigen::VectorXd next0 = sys.A * incL;
    const Eigen::VectorXd nextL = sys.A * inc0;
    inc0 = next0;
    incL = nextL;
    cum0 += inc0;
    cumL += incL;
    record();
  }

  const auto& d = out.deflated_increment_norms;
  if (d.size() >= 2 && d[d.size() - 2] > 0)
    out.spectral_radius_estimate = d.back() / d[d.size() - 2];

  out.mu0 = make_density(cum0, params.beta(), "v0");
  out.muL = make_density(cumL, params.beta(), "vL");
  const double mean = (cum0.sum() + cumL.sum()) / (2.0 * M);
  out.mu0_fluct = make_density(cum0.array() - mean, params.beta(), "v0");
  out.muL_fluct = make_density(cumL.array() - mean, params.beta(), "vL");
  return out;
}

}  // namespace qgk
