#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qgk {

/// Finite-temperature setup: time becomes a circle of circumference
/// beta = 1/T. The normalization constant of the periodic Green function is
/// fixed to C = 0.
struct ThermalParams {
  double temperature = 1.0;
  double beta() const { return 1.0 / temperature; }
};

/// Periodic free Green function
///   G_T = -(1/4pi) ln[cosh(2 pi T (x-y)) - cos(2 pi T (t-s))].
double gt(double t, double x, double s, double y, const ThermalParams& params);

/// (dG_T/dt, dG_T/dx); the s and y derivatives are the negatives.
std::pair<double, double> gt_grad(double t, double x, double s, double y,
                                  const ThermalParams& params);

/// Periodization of the Poisson kernel EVEN(1, d) onto the time circle:
///   T sinh(2 pi T d) / (cosh(2 pi T d) - cos(2 pi T u)),
/// equal to -2 dG_T/dn at spatial separation d.
double periodic_poisson(double u, double d, const ThermalParams& params);

struct PeriodicSumCheck {
  double partial_sum = 0;
  double closed_form = 0;
  double gap = 0;
  double tail_bound = 0;  // 2/(N_max - |b|)
};

/// sum_{|N| <= N_max} 1/(a^2 + (b+N)^2) against its closed form
/// (pi/a) sinh(2 pi a) / (cosh(2 pi a) - cos(2 pi b)).
PeriodicSumCheck periodic_sum_check(double a, double b, long n_max);

/// Trapezoidal samples of a boundary density on the time circle.
struct PeriodicDensity {
  int node_count = 0;
  double beta = 0;
  std::string vertex;
  std::vector<double> values;  // at t_m = m beta / M
};

/// The interval system on the time circle, mu_v = g_v + K mu_vbar, carries an
/// exact zero mode: the kernel rows integrate to 1, so I - K annihilates
/// constants and the plain system is unsolvable (the compact Neumann problem
/// has no Green function). The solver deflates exactly that mode through a
/// bordered system with a mean constraint and reports the incompatibility as
/// zero_mode_defect (which equals the uniform background density 1/beta).
/// Any further near-singularity raises NearResonanceError.
struct NystromResult {
  PeriodicDensity mu0;
  PeriodicDensity muL;
  double residual = 0;          // inf-norm residual of the bordered system
  double rcond = 0;             // reciprocal condition estimate
  double zero_mode_defect = 0;  // multiplier on the deflation direction
  double mean_target = 0;
};

NystromResult nystrom_solve(double length, double y0, double s0,
                            const ThermalParams& params, int node_count,
                            double mean_target = 0.0);

/// Truncated Neumann iteration of the same discrete system. The plain
/// iteration stalls on the zero mode (increment norms plateau at 1/beta);
/// projected off constants it converges geometrically, and the mean-removed
/// cumulative densities match the deflated direct solve.
struct ThermalNeumannResult {
  PeriodicDensity mu0;
  PeriodicDensity muL;
  PeriodicDensity mu0_fluct;  // cumulative minus its circle mean
  PeriodicDensity muL_fluct;
  std::vector<double> increment_norms;
  std::vector<double> deflated_increment_norms;
  double spectral_radius_estimate = 0;
};

ThermalNeumannResult thermal_neumann(double length, double y0, double s0,
                                     const ThermalParams& params, int node_count,
                                     int n_max);

}  // namespace qgk
