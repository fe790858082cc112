#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qgk/graph.hpp"
#include "qgk/terms.hpp"

namespace qgk {

/// NU stores the dipole densities themselves (LOG profiles); NU_PRIME stores
/// their time derivatives (ODD profiles), which keeps every kernel of the
/// general-graph system inside the closed family. NU iteration is only
/// admissible when every vertex has degree 1 (the interval), where no dipole
/// layer exists.
enum class Formulation { Nu, NuPrime };

/// Boundary densities at one reflection order: one charge density mu per
/// vertex (shared across its incident edges) and one dipole density per
/// edge end, summing to zero exactly at every vertex.
struct DensitySystem {
  int order = 0;
  Formulation formulation = Formulation::NuPrime;
  bool collapsed_exact = false;  // closed-form star solution, all orders summed
  Rational s0;
  EdgePoint source;
  std::vector<TermSum> mu;  // indexed by vertex
  std::vector<TermSum> nu;  // indexed by EdgeEnd::key(); nu or nu' per formulation

  const TermSum& mu_at(int vertex) const { return mu[static_cast<size_t>(vertex)]; }
  const TermSum& nu_at(const EdgeEnd& ee) const {
    return nu[static_cast<size_t>(ee.key())];
  }
};

/// Orders 0..N of the multiple-reflection expansion. Systems are immutable
/// once built; independent runs may share a graph concurrently.
struct DensitySeries {
  std::shared_ptr<const QuantumGraph> graph;
  Rational s0;
  EdgePoint source;
  Formulation formulation = Formulation::NuPrime;
  std::vector<DensitySystem> orders;

  /// Compacted sum of orders 0..up_to (all orders when up_to < 0).
  DensitySystem cumulative(int up_to = -1) const;

  size_t order_term_count(int order) const;
  double order_max_abs_coeff(int order) const;
};

/// Zeroth-order densities: the boundary traces of the free source.
/// mu_v picks up EVEN(1/d_v, d(end, y0)) for every end of the source edge
/// at v (a loop contributes both of its ends); the dipole sources follow the
/// continuity equations, mean-subtracted so they sum to zero at each vertex.
DensitySystem source_densities(std::shared_ptr<const QuantumGraph> g,
                               const EdgePoint& source, const Rational& s0,
                               Formulation formulation);

/// Exact collapsed solution for an infinite star: the graph must be a simple
/// star (one center joined to degree-1 leaves); edge lengths are ignored, the
/// leaves are treated as infinite leads carrying no boundary layers.
DensitySystem solve_star(std::shared_ptr<const QuantumGraph> g,
                         const EdgePoint& source, const Rational& s0);

/// One application of the integral operator K: every density term is
/// transported across its edge (distance grows by exactly L_e) with the
/// vertex coefficients of the Kirchhoff system. Same-vertex contributions
/// vanish identically. Constraints (shared mu, zero dipole sum) hold on the
/// output by construction.
DensitySystem iterate(const QuantumGraph& g, const DensitySystem& ds);

/// Truncated Neumann series (1 + K + K^2 + ... + K^N) applied to the source.
DensitySeries neumann_sum(std::shared_ptr<const QuantumGraph> g,
                          const EdgePoint& source, const Rational& s0, int n_max,
                          Formulation formulation);

/// Row sum of the interval kernel K0(t,s) = (1/pi) L/((t-s)^2+L^2): exactly 1,
/// independent of L.
Rational k0_rowsum(const Rational& L);

/// N-fold iterated interval kernel: K0^N(t,s0) = EVEN(1, N*L).
CanonicalTerm iterated_k0(const Rational& L, int N);

enum class WeightKind { None, Rho };  // rho(s) = (1 + |s|)^-1

/// Per-order size and norm diagnostics with a decay classification.
/// Reports only; the truncation order is always caller-supplied.
struct NormReport {
  struct Row {
    int order = 0;
    size_t term_count = 0;
    double max_abs_coeff = 0;
    double sup_global = 0;   // +inf when a LOG term is present
    double sup_window = 0;   // grid sup over [s0-W, s0+W]
    double weighted_l1 = 0;  // +inf when a LOG term is present (divergent)
    double dominant_distance = 0;
  };
  std::vector<Row> rows;
  double window_halfwidth = 0;
  std::vector<double> sup_ratios;       // successive windowed-sup ratios
  std::vector<double> decay_exponents;  // distance-scaled decay exponents
  std::string classification;           // "decaying" | "marginal" | "growing"
  bool one_sample = false;
};

/// Diagnostics over the stacked per-order densities of a series.
NormReport norm_report(const DensitySeries& series, WeightKind weight,
                       double window_halfwidth = 0.0);

/// Diagnostics over an arbitrary per-order scalar term-sum sequence
/// (e.g. a time-differentiated assembled series).
NormReport norm_report(const std::vector<TermSum>& per_order, WeightKind weight,
                       double window_halfwidth = 0.0);

}  // namespace qgk
