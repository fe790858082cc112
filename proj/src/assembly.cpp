#include "qgk/assembly.hpp"

#include <cmath>

#include "qgk/errors.hpp"

namespace qgk {

namespace {

// Single-layer kernel seen from an edge end at interior height rho:
// G0(t, rho; s, 0) = LOG(-1/(4 pi), rho).
CanonicalTerm single_layer_kernel(const Rational& rho) {
  return {Kind::Log, Coeff(frac(-1, 4), -1), rho};
}

// Double-layer kernel from either end, oriented outward from its vertex:
// EVEN(1/2, rho) for both ends (the terminal sign is absorbed by measuring
// rho from that end).
CanonicalTerm double_layer_kernel(const Rational& rho) {
  return {Kind::Even, Coeff(frac(1, 2)), rho};
}

// Dipole densities as LOG profiles: stored directly under NU, rebuilt by
// antidifferentiation under NU_PRIME.
TermSum nu_as_log(const DensitySystem& sys, const EdgeEnd& ee) {
  const TermSum& stored = sys.nu_at(ee);
  if (sys.formulation == Formulation::Nu) return stored;
  return antiderivative_time(stored);
}

TermSum nu_as_odd(const DensitySystem& sys, const EdgeEnd& ee) {
  const TermSum& stored = sys.nu_at(ee);
  if (sys.formulation == Formulation::NuPrime) return stored;
  return differentiate_time(stored);
}

TermSum gamma_terms_one_order(const QuantumGraph& g, const DensitySystem& sys,
                              const EdgePoint& x) {
  const int ei = g.edge_index(x.edge);
  TermSum out(sys.s0);
  for (int end = 0; end < 2; ++end) {
    const EdgeEnd ee{ei, end};
    const Rational rho = end_distance(g, ee, x);
    const int w = g.end_vertex(ee);
    out.add(convolve(single_layer_kernel(rho), sys.mu_at(w)));
    const TermSum nu_log = nu_as_log(sys, ee);
    if (!nu_log.empty()) out.add(convolve(double_layer_kernel(rho), nu_log));
  }
  return compact(out);
}

void require_cylinder_center(const DensitySeries& series) {
  if (series.s0 != 0)
    throw Error("cylinder kernels are defined for a series centered at s0 = 0");
}

}  // namespace

std::vector<TermSum> assemble_gamma_terms(const DensitySeries& series,
                                          const EdgePoint& x) {
  if (!series.graph) throw Error("density series carries no graph");
  std::vector<TermSum> per_order;
  per_order.reserve(series.orders.size());
  for (const auto& sys : series.orders)
    per_order.push_back(gamma_terms_one_order(*series.graph, sys, x));
  return per_order;
}

std::optional<CanonicalTerm> free_green_term(const DensitySeries& series,
                                             const EdgePoint& x) {
  if (x.edge != series.source.edge) return std::nullopt;
  Rational diff(x.x - series.source.x);
  if (diff < 0) diff = -diff;
  return CanonicalTerm{Kind::Log, Coeff(frac(-1, 4), -1), diff, series.s0};
}

GreenEvaluation assemble_green(const DensitySeries& series, double t,
                               const EdgePoint& x) {
  GreenEvaluation out;
  out.t = t;
  out.field = x;
  out.s0 = series.s0;
  out.source = series.source;
  if (auto free = free_green_term(series, x)) {
    out.includes_free = true;
    out.free_part = free->eval(t);
  }
  for (const auto& sum : assemble_gamma_terms(series, x)) {
    const double v = sum.eval(t);
    out.order_contrib.push_back(v);
    out.gamma += v;
  }
  out.green = out.free_part + out.gamma;
  return out;
}

double cylinder_tbar(const DensitySeries& series, double t, const EdgePoint& x) {
  require_cylinder_center(series);
  return -2.0 * assemble_green(series, t, x).green;
}

CylinderValues cylinder_values(const DensitySeries& series, double t,
                               const EdgePoint& x) {
  require_cylinder_center(series);
  CylinderValues out;
  out.bookkeeping = assemble_green(series, t, x);
  out.tbar = -2.0 * out.bookkeeping.green;
  double dgdt = 0.0;
  if (auto free = free_green_term(series, x))
    dgdt += differentiate_time(*free).eval(t);
  for (const auto& sum : assemble_gamma_terms(series, x))
    dgdt += differentiate_time(sum).eval(t);
  out.t_kernel = -2.0 * dgdt;
  return out;
}

double cylinder_t(const DensitySeries& series, double t, const EdgePoint& x,
                  const EdgePoint& y) {
  if (y.edge != series.source.edge || y.x != series.source.x)
    throw Error("cylinder_t: y must be the source point the series was built for");
  return cylinder_values(series, t, x).t_kernel;
}

double renormalized_diagonal(const DensitySeries& series, double t,
                             const EdgePoint& x) {
  if (t <= 0) throw Error("renormalized_diagonal requires t > 0");
  if (x.edge != series.source.edge || x.x != series.source.x)
    throw Error("renormalized_diagonal evaluates on the diagonal x = y0 only");
  // T minus the free 1/(pi t): drop the direct ODD(1, 0) term entirely.
  double dgdt = 0.0;
  for (const auto& sum : assemble_gamma_terms(series, x))
    dgdt += differentiate_time(sum).eval(t);
  return -2.0 * dgdt;
}

TermSum kirchhoff_residual_terms(const DensitySeries& series, int up_to_order,
                                 const std::string& vertex) {
  const QuantumGraph& g = *series.graph;
  const DensitySystem sys = series.cumulative(up_to_order);
  const int v = g.vertex_index(vertex);
  const int dv = g.degree(v);
  const int e0 = g.edge_index(series.source.edge);

  TermSum residual(sys.s0);
  // Interior limit of the near single layers: each incident edge contributes
  // the jump -mu_v/2; the on-boundary kernel itself vanishes there. The
  // hypersingular near dipole parts cancel over the vertex because the nu sum
  // to zero exactly.
  residual.add(sys.mu_at(v).scaled(Coeff(frac(-dv, 2))));
  for (const auto& ee : g.incident(v)) {
    const EdgeEnd far = g.other_end(ee);
    const Rational& L = g.edge(ee.edge).length;
    residual.add(
        convolve(CanonicalTerm{Kind::Even, Coeff(frac(1, 2)), L},
                 sys.mu_at(g.end_vertex(far))));
    const TermSum far_nu_odd = nu_as_odd(sys, far);
    if (!far_nu_odd.empty())
      residual.add(convolve(
          CanonicalTerm{Kind::Odd, Coeff(frac(1, 2)), L}, far_nu_odd));
    if (ee.edge == e0) {
      const Rational dist = end_distance(g, ee, series.source);
      residual.add({Kind::Even, Coeff(frac(1, 2)), dist, sys.s0});
    }
  }
  return compact(residual);
}

TermSum continuity_residual_terms(const DensitySeries& series, int up_to_order,
                                  const EdgeEnd& a, const EdgeEnd& b) {
  const QuantumGraph& g = *series.graph;
  const DensitySystem sys = series.cumulative(up_to_order);
  if (g.end_vertex(a) != g.end_vertex(b))
    throw Error("continuity residual needs two edge ends at the same vertex");
  const int e0 = g.edge_index(series.source.edge);

  // Boundary trace of G seen from one edge end, omitting the near single
  // layer (shared across the vertex, it cancels in the difference).
  auto trace = [&](const EdgeEnd& ee) {
    TermSum out(sys.s0);
    out.add(nu_as_log(sys, ee).scaled(Coeff(frac(1, 2))));
    const EdgeEnd far = g.other_end(ee);
    const Rational& L = g.edge(ee.edge).length;
    out.add(convolve(single_layer_kernel(L), sys.mu_at(g.end_vertex(far))));
    const TermSum far_nu = nu_as_log(sys, far);
    if (!far_nu.empty()) out.add(convolve(double_layer_kernel(L), far_nu));
    if (ee.edge == e0) {
      const Rational dist = end_distance(g, ee, series.source);
      out.add({Kind::Log, Coeff(frac(-1, 4), -1), dist, sys.s0});
    }
    return out;
  };

  TermSum residual = trace(a);
  residual.add(trace(b).scaled(Coeff(Rational(-1))));
  return compact(residual);
}

}  // namespace qgk
