#include "qgk/mre.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qgk/errors.hpp"
#include "qgk/oracles.hpp"

namespace qgk {

namespace {

DensitySystem empty_system(const QuantumGraph& g, const EdgePoint& source,
                           const Rational& s0, Formulation formulation) {
  DensitySystem ds;
  ds.formulation = formulation;
  ds.s0 = s0;
  ds.source = source;
  ds.mu.assign(g.vertex_count(), TermSum(s0));
  ds.nu.assign(2 * g.edge_count(), TermSum(s0));
  return ds;
}

void subtract_vertex_means(const QuantumGraph& g, DensitySystem& ds,
                           std::vector<TermSum>& rhs) {
  for (size_t v = 0; v < g.vertex_count(); ++v) {
    const auto& ends = g.incident(static_cast<int>(v));
    TermSum mean(ds.s0);
    for (const auto& ee : ends) mean.add(rhs[static_cast<size_t>(ee.key())]);
    mean = mean.scaled(Coeff(frac(-1, static_cast<long>(ends.size()))));
    for (const auto& ee : ends) {
      TermSum value = rhs[static_cast<size_t>(ee.key())];
      value.add(mean);
      ds.nu[static_cast<size_t>(ee.key())] = compact(value);
    }
  }
}

bool all_degree_one(const QuantumGraph& g) {
  for (size_t v = 0; v < g.vertex_count(); ++v)
    if (g.degree(static_cast<int>(v)) != 1) return false;
  return true;
}

}  // namespace

DensitySystem source_densities(std::shared_ptr<const QuantumGraph> g,
                               const EdgePoint& source, const Rational& s0,
                               Formulation formulation) {
  const QuantumGraph& graph = *g;
  locate(graph, source);  // rejects vertex placement
  const int e0 = graph.edge_index(source.edge);

  DensitySystem ds = empty_system(graph, source, s0, formulation);
  std::vector<TermSum> rhs(2 * graph.edge_count(), TermSum(s0));

  for (size_t v = 0; v < graph.vertex_count(); ++v) {
    const int dv = graph.degree(static_cast<int>(v));
    for (const auto& ee : graph.incident(static_cast<int>(v))) {
      if (ee.edge != e0) continue;
      const Rational dist = end_distance(graph, ee, source);
      ds.mu[v].add({Kind::Even, Coeff(frac(1, dv)), dist, s0});
      if (formulation == Formulation::NuPrime) {
        rhs[static_cast<size_t>(ee.key())].add({Kind::Odd, Coeff(Rational(1)), dist, s0});
      } else {
        rhs[static_cast<size_t>(ee.key())].add(
            {Kind::Log, Coeff(frac(1, 2), -1), dist, s0});
      }
    }
    ds.mu[v] = compact(ds.mu[v]);
  }
  subtract_vertex_means(graph, ds, rhs);
  return ds;
}

DensitySystem solve_star(std::shared_ptr<const QuantumGraph> g,
                         const EdgePoint& source, const Rational& s0) {
  const QuantumGraph& graph = *g;
  locate(graph, source);
  const int e0 = graph.edge_index(source.edge);

  for (const auto& e : graph.edges())
    if (e.is_loop()) throw FormulationError("star solve requires a loop-free star");

  // The center must touch every edge exactly once; every other vertex must be
  // a degree-1 lead. A single edge is ambiguous; take the source edge's
  // initial vertex as the center by convention.
  int center = -1;
  for (size_t v = 0; v < graph.vertex_count(); ++v) {
    if (g->degree(static_cast<int>(v)) ==
        static_cast<int>(graph.edge_count())) {
      center = static_cast<int>(v);
      break;
    }
  }
  if (graph.edge_count() == 1) center = graph.edge(e0).v_init;
  if (center < 0) throw FormulationError("graph is not a star");
  for (size_t v = 0; v < graph.vertex_count(); ++v)
    if (static_cast<int>(v) != center && graph.degree(static_cast<int>(v)) != 1)
      throw FormulationError("graph is not a star: vertex '" +
                             graph.vertex_ids()[v] + "' is not a lead");

  const int dv = graph.degree(center);
  EdgeEnd center_end{-1, 0};
  for (const auto& ee : graph.incident(center))
    if (ee.edge == e0) center_end = ee;
  const Rational dist = end_distance(graph, center_end, source);

  DensitySystem ds = empty_system(graph, source, s0, Formulation::Nu);
  ds.collapsed_exact = true;
  ds.mu[static_cast<size_t>(center)].add(
      {Kind::Even, Coeff(frac(1, dv)), dist, s0});
  for (const auto& ee : graph.incident(center)) {
    const Rational delta = ee.edge == e0 ? Rational(1) : Rational(0);
    const Coeff c(Rational((delta - frac(1, dv)) / 2), -1);
    ds.nu[static_cast<size_t>(ee.key())].add({Kind::Log, c, dist, s0});
  }
  return ds;
}

DensitySystem iterate(const QuantumGraph& g, const DensitySystem& ds) {
  if (ds.collapsed_exact)
    throw FormulationError("the collapsed star solution is already exact");
  if (ds.formulation == Formulation::Nu && !all_degree_one(g))
    throw FormulationError(
        "NU iteration is restricted to the interval; use NU_PRIME on graphs "
        "with vertices of degree >= 2");

  DensitySystem out = empty_system(g, ds.source, ds.s0, ds.formulation);
  out.order = ds.order + 1;
  std::vector<TermSum> rhs(2 * g.edge_count(), TermSum(ds.s0));

  for (size_t v = 0; v < g.vertex_count(); ++v) {
    const int dv = g.degree(static_cast<int>(v));
    TermSum m(ds.s0);
    for (const auto& ee : g.incident(static_cast<int>(v))) {
      const EdgeEnd far = g.other_end(ee);
      const int w = g.end_vertex(far);
      const Rational& L = g.edge(ee.edge).length;
      const CanonicalTerm even_kernel{Kind::Even, Coeff(frac(1, dv)), L};
      m.add(convolve(even_kernel, ds.mu_at(w)));
      if (ds.formulation == Formulation::NuPrime) {
        const CanonicalTerm odd_kernel{Kind::Odd, Coeff(frac(1, dv)), L};
        m.add(convolve(odd_kernel, ds.nu_at(far)));

        const CanonicalTerm nu_from_mu{Kind::Odd, Coeff(Rational(1)), L};
        const CanonicalTerm nu_from_nu{Kind::Even, Coeff(Rational(-1)), L};
        TermSum r(ds.s0);
        r.add(convolve(nu_from_mu, ds.mu_at(w)));
        r.add(convolve(nu_from_nu, ds.nu_at(far)));
        rhs[static_cast<size_t>(ee.key())] = r;
      }
    }
    out.mu[v] = compact(m);
  }
  if (ds.formulation == Formulation::NuPrime) subtract_vertex_means(g, out, rhs);
  return out;
}

DensitySeries neumann_sum(std::shared_ptr<const QuantumGraph> g,
                          const EdgePoint& source, const Rational& s0, int n_max,
                          Formulation formulation) {
  if (n_max < 0) throw Error("neumann_sum requires N_max >= 0");
  DensitySeries series;
  series.graph = g;
  series.s0 = s0;
  series.source = source;
  series.formulation = formulation;
  series.orders.push_back(source_densities(g, source, s0, formulation));
  for (int k = 0; k < n_max; ++k)
    series.orders.push_back(iterate(*g, series.orders.back()));
  return series;
}

DensitySystem DensitySeries::cumulative(int up_to) const {
  if (orders.empty()) throw Error("empty density series");
  const size_t last = up_to < 0 ? orders.size() - 1
                                : std::min(static_cast<size_t>(up_to),
                                           orders.size() - 1);
  DensitySystem total = orders[0];
  for (size_t k = 1; k <= last; ++k) {
    for (size_t v = 0; v < total.mu.size(); ++v) total.mu[v].add(orders[k].mu[v]);
    for (size_t n = 0; n < total.nu.size(); ++n) total.nu[n].add(orders[k].nu[n]);
  }
  for (auto& m : total.mu) m = compact(m);
  for (auto& n : total.nu) n = compact(n);
  total.order = static_cast<int>(last);
  return total;
}

size_t DensitySeries::order_term_count(int order) const {
  const auto& sys = orders.at(static_cast<size_t>(order));
  size_t count = 0;
  for (const auto& m : sys.mu) count += m.size();
  for (const auto& n : sys.nu) count += n.size();
  return count;
}

double DensitySeries::order_max_abs_coeff(int order) const {
  const auto& sys = orders.at(static_cast<size_t>(order));
  double best = 0.0;
  for (const auto& m : sys.mu)
    for (const auto& t : m.terms())
      best = std::max(best, std::abs(t.c.to_double()));
  for (const auto& n : sys.nu)
    for (const auto& t : n.terms())
      best = std::max(best, std::abs(t.c.to_double()));
  return best;
}

Rational k0_rowsum(const Rational& L) {
  if (L <= 0) throw Error("k0_rowsum requires L > 0");
  return Rational(1);
}

CanonicalTerm iterated_k0(const Rational& L, int N) {
  if (L <= 0) throw Error("iterated_k0 requires L > 0");
  if (N < 1) throw Error("iterated_k0 requires N >= 1");
  return {Kind::Even, Coeff(Rational(1)), Rational(N * L), Rational(0)};
}

namespace {

bool has_kind(const std::vector<TermSum>& components, Kind kind) {
  for (const auto& sum : components)
    for (const auto& t : sum.terms())
      if (t.kind == kind) return true;
  return false;
}

double window_sup(const TermSum& sum, double center, double half_width,
                  double* dominant_distance) {
  double best = 0.0;
  std::vector<double> candidates;
  const int grid = 512;
  for (int i = 0; i <= grid; ++i)
    candidates.push_back(center - half_width + 2.0 * half_width * i / grid);
  for (const auto& t : sum.terms()) {
    const double d = to_double(t.d);
    for (double u : {0.0, d, -d}) {
      const double s = to_double(t.s0) + u;
      if (std::abs(s - center) <= half_width) candidates.push_back(s);
    }
  }
  for (double s : candidates) {
    double v;
    try {
      v = std::abs(sum.eval(s));
    } catch (const SingularEvaluation&) {
      v = std::numeric_limits<double>::infinity();
    }
    if (v > best) {
      best = v;
      if (dominant_distance) {
        // attribute the sup to the largest contributing term
        double top = -1.0;
        for (const auto& t : sum.terms()) {
          double tv = 0.0;
          try {
            tv = std::abs(t.eval(s));
          } catch (const SingularEvaluation&) {
            tv = std::numeric_limits<double>::infinity();
          }
          if (tv > top) {
            top = tv;
            *dominant_distance = to_double(t.d);
          }
        }
      }
    }
  }
  return best;
}

double weighted_l1(const std::vector<TermSum>& components, WeightKind weight,
                   double center) {
  // The rho-weighted norm diverges for LOG profiles, and the unweighted one
  // for ODD profiles; report infinity instead of burning quadrature budget.
  if (has_kind(components, Kind::Log)) return std::numeric_limits<double>::infinity();
  if (weight == WeightKind::None && has_kind(components, Kind::Odd))
    return std::numeric_limits<double>::infinity();
  QuadOptions opts;
  opts.abs_tol = 1e-7;
  double total = 0.0;
  for (const auto& sum : components) {
    if (sum.empty()) continue;
    auto f = [&](double s) {
      const double v = std::abs(sum.eval(s));
      return weight == WeightKind::Rho ? v / (1.0 + std::abs(s)) : v;
    };
    std::vector<double> breaks = {0.0, center};
    double hint = 1.0;
    for (const auto& t : sum.terms()) {
      const double d = to_double(t.d), c = to_double(t.s0);
      breaks.insert(breaks.end(), {c, c - d, c + d});
      hint = std::max(hint, std::abs(c) + d);
    }
    total += integrate_real_line(f, breaks, hint, opts);
  }
  return total;
}

NormReport build_report(const std::vector<std::vector<TermSum>>& per_order,
                        WeightKind weight, double window_halfwidth,
                        double center) {
  NormReport report;
  double w = window_halfwidth;
  if (w <= 0.0) {
    double d0 = 0.0;
    if (!per_order.empty())
      for (const auto& sum : per_order.front())
        for (const auto& t : sum.terms()) d0 = std::max(d0, to_double(t.d));
    w = std::max(1.0, 2.0 * d0);
  }
  report.window_halfwidth = w;

  for (size_t k = 0; k < per_order.size(); ++k) {
    NormReport::Row row;
    row.order = static_cast<int>(k);
    double sup_g = 0.0, sup_w = 0.0, dom = 0.0;
    for (const auto& sum : per_order[k]) {
      row.term_count += sum.size();
      double comp_sup = 0.0;
      for (const auto& t : sum.terms()) {
        row.max_abs_coeff = std::max(row.max_abs_coeff, std::abs(t.c.to_double()));
        comp_sup += term_sup_global(t);
      }
      sup_g = std::max(sup_g, comp_sup);
      double comp_dom = 0.0;
      const double comp_w = window_sup(sum, center, w, &comp_dom);
      if (comp_w > sup_w) {
        sup_w = comp_w;
        dom = comp_dom;
      }
    }
    row.sup_global = sup_g;
    row.sup_window = sup_w;
    row.dominant_distance = dom;
    row.weighted_l1 = weighted_l1(per_order[k], weight, center);
    report.rows.push_back(row);
  }

  // Classification: ratios of successive windowed sups, scaled by the growth
  // of the dominant distance to estimate a decay exponent.
  if (report.rows.size() < 2) {
    report.classification = "marginal";
    report.one_sample = true;
    return report;
  }
  bool growing = false;
  for (size_t k = 0; k + 1 < report.rows.size(); ++k) {
    const double a = report.rows[k].sup_window;
    const double b = report.rows[k + 1].sup_window;
    if (a > 0.0) report.sup_ratios.push_back(b / a);
    const double da = report.rows[k].dominant_distance;
    const double db = report.rows[k + 1].dominant_distance;
    if (a > 0.0 && b > 0.0 && da > 0.0 && db > da)
      report.decay_exponents.push_back(std::log(a / b) / std::log(db / da));
  }
  if (!report.sup_ratios.empty() && report.sup_ratios.back() > 1.0 + 1e-9)
    growing = true;
  if (growing) {
    report.classification = "growing";
  } else if (!report.decay_exponents.empty()) {
    const size_t take = std::min<size_t>(3, report.decay_exponents.size());
    double mean = 0.0;
    for (size_t i = report.decay_exponents.size() - take;
         i < report.decay_exponents.size(); ++i)
      mean += report.decay_exponents[i];
    mean /= static_cast<double>(take);
    report.classification = mean >= 1.5 ? "decaying" : "marginal";
  } else {
    report.classification = "marginal";
  }
  return report;
}

}  // namespace

NormReport norm_report(const DensitySeries& series, WeightKind weight,
                       double window_halfwidth) {
  if (series.orders.empty()) throw Error("norm_report needs a nonempty series");
  std::vector<std::vector<TermSum>> per_order;
  for (const auto& sys : series.orders) {
    std::vector<TermSum> components;
    for (const auto& m : sys.mu)
      if (!m.empty()) components.push_back(m);
    for (const auto& n : sys.nu)
      if (!n.empty()) components.push_back(n);
    per_order.push_back(std::move(components));
  }
  return build_report(per_order, weight, window_halfwidth, to_double(series.s0));
}

NormReport norm_report(const std::vector<TermSum>& per_order, WeightKind weight,
                       double window_halfwidth) {
  if (per_order.empty()) throw Error("norm_report needs a nonempty series");
  std::vector<std::vector<TermSum>> wrapped;
  for (const auto& sum : per_order) wrapped.push_back({sum});
  const double center = to_double(per_order.front().center());
  return build_report(wrapped, weight, window_halfwidth, center);
}

}  // namespace qgk
