#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "qgk/assembly.hpp"
#include "qgk/errors.hpp"
#include "qgk/graph.hpp"
#include "qgk/mre.hpp"
#include "qgk/oracles.hpp"
#include "qgk/serialize.hpp"
#include "qgk/terms.hpp"
#include "qgk/thermal.hpp"

namespace {

using namespace qgk;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15e", v);
  return buf;
}

EdgePoint parse_point(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw Error("point '" + text + "' must have the form <edge>:<coordinate>");
  return {text.substr(0, colon), parse_decimal(text.substr(colon + 1))};
}

Formulation parse_formulation(const std::string& text) {
  if (text == "nu") return Formulation::Nu;
  if (text == "nuprime" || text == "nu_prime") return Formulation::NuPrime;
  throw Error("formulation must be 'nu' or 'nuprime', got '" + text + "'");
}

struct Output {
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file.open(path);
      if (!file) throw Error("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file.is_open() ? file : std::cout; }
  std::ofstream file;
};

int cmd_validate(const std::string& graph_path) {
  std::ifstream in(graph_path);
  if (!in) throw GraphError("cannot open graph file '" + graph_path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw GraphError("graph file '" + graph_path + "' is not valid JSON: " +
                     ex.what());
  }
  const GraphSpec spec = graph_from_json(j);
  const auto violations = validate(spec);
  if (!violations.empty()) {
    std::string joined;
    for (size_t i = 0; i < violations.size(); ++i)
      joined += (i ? "; " : "") + violations[i];
    throw GraphError(graph_path + ": " + joined);
  }
  const auto g = build_graph(spec);
  std::cout << g.vertex_count() << " vertices, " << g.edge_count() << " edges\n";
  for (size_t v = 0; v < g.vertex_count(); ++v)
    std::cout << "d_" << g.vertex_ids()[v] << "=" << g.degree(static_cast<int>(v))
              << "\n";
  return 0;
}

DensitySeries build_series(const std::string& graph_path,
                           const std::string& source, int order,
                           const std::string& formulation,
                           const std::string& s0) {
  auto g = std::make_shared<const QuantumGraph>(load_graph_file(graph_path));
  return neumann_sum(g, parse_point(source), parse_decimal(s0), order,
                     parse_formulation(formulation));
}

int cmd_kernel(const std::string& graph_path, const std::string& source,
               const std::vector<std::string>& fields,
               const std::vector<double>& times, int order,
               const std::string& formulation, const std::string& out_path) {
  auto series = build_series(graph_path, source, order, formulation, "0");
  Output out(out_path);
  out.stream() << "t,edge,x,order,gamma_contrib,G_cumulative,Tbar,T\n";
  for (const auto& field_text : fields) {
    const EdgePoint x = parse_point(field_text);
    const auto gamma = assemble_gamma_terms(series, x);
    const auto free = free_green_term(series, x);
    for (double t : times) {
      double g_cum = free ? free->eval(t) : 0.0;
      double dgdt_cum = free ? differentiate_time(*free).eval(t) : 0.0;
      for (size_t k = 0; k < gamma.size(); ++k) {
        const double contrib = gamma[k].eval(t);
        g_cum += contrib;
        dgdt_cum += differentiate_time(gamma[k]).eval(t);
        out.stream() << fmt(t) << "," << x.edge << "," << rational_str(x.x) << ","
                     << k << "," << fmt(contrib) << "," << fmt(g_cum) << ","
                     << fmt(-2.0 * g_cum) << "," << fmt(-2.0 * dgdt_cum) << "\n";
      }
    }
  }
  return 0;
}

int cmd_densities(const std::string& graph_path, const std::string& source,
                  int order, const std::string& formulation,
                  const std::string& s0, const std::string& out_path) {
  auto series = build_series(graph_path, source, order, formulation, s0);
  Output out(out_path);
  out.stream() << densities_to_json(series).dump(2) << "\n";
  return 0;
}

int cmd_images(const std::string& graph_path, const std::string& source,
               int order, const std::string& out_path) {
  auto g = std::make_shared<const QuantumGraph>(load_graph_file(graph_path));
  if (g->edge_count() != 1 || g->edge(0).is_loop())
    throw GraphError("the images command compares against the interval ladder; "
                     "the graph must be a single non-loop edge");
  const EdgePoint src = parse_point(source);
  auto series = neumann_sum(g, src, Rational(0), order, Formulation::Nu);
  const auto ladder = image_interval(g->edge(0).length, src.x, order);

  Output out(out_path);
  out.stream() << "order,position,coeff,vertex,distance,exact_match\n";
  const Rational L = g->edge(0).length;
  for (const auto& img : ladder.images) {
    const bool near_side = img.position < 0;
    const int vertex = near_side ? g->edge(0).v_init : g->edge(0).v_term;
    const Rational dist =
        near_side ? Rational(-img.position) : Rational(img.position - L);
    const auto& mu = series.orders[static_cast<size_t>(img.order)].mu_at(vertex);
    bool match = false;
    for (const auto& term : mu.terms())
      if (term.kind == Kind::Even && term.d == dist && term.c == Coeff(img.coeff))
        match = true;
    out.stream() << img.order << "," << rational_str(img.position) << ","
                 << rational_str(img.coeff) << ","
                 << g->vertex_ids()[static_cast<size_t>(vertex)] << ","
                 << rational_str(dist) << "," << (match ? "true" : "false")
                 << "\n";
  }
  return 0;
}

int cmd_thermal(double length, const std::string& y0, const std::string& s0,
                double beta, int nodes, int orders, const std::string& out_path,
                const std::string& summary_path, const std::string& plot_path) {
  const ThermalParams params{1.0 / beta};
  const double y0d = to_double(parse_decimal(y0));
  const double s0d = to_double(parse_decimal(s0));
  auto direct = nystrom_solve(length, y0d, s0d, params, nodes);
  auto series = thermal_neumann(length, y0d, s0d, params, nodes, orders);

  Output out(out_path);
  out.stream() << "node,t,mu0_nystrom,muL_nystrom,mu0_neumann,muL_neumann\n";
  const double h = beta / nodes;
  for (int m = 0; m < nodes; ++m) {
    const auto mi = static_cast<size_t>(m);
    out.stream() << m << "," << fmt(m * h) << "," << fmt(direct.mu0.values[mi])
                 << "," << fmt(direct.muL.values[mi]) << ","
                 << fmt(series.mu0_fluct.values[mi]) << ","
                 << fmt(series.muL_fluct.values[mi]) << "\n";
  }
  if (!summary_path.empty()) {
    nlohmann::json summary = {
        {"M", nodes},
        {"beta", beta},
        {"residual", direct.residual},
        {"rcond", direct.rcond},
        {"zero_mode_defect", direct.zero_mode_defect},
        {"spectral_radius_estimate", series.spectral_radius_estimate}};
    std::ofstream s(summary_path);
    if (!s) throw Error("cannot open summary file '" + summary_path + "'");
    s << summary.dump(2) << "\n";
  }
  if (!plot_path.empty()) {
    Output plot(plot_path);
    plot.stream() << "k,value\n";
    for (size_t k = 0; k < series.deflated_increment_norms.size(); ++k)
      plot.stream() << k << "," << fmt(series.deflated_increment_norms[k]) << "\n";
  }
  return 0;
}

int cmd_diagnostics(const std::string& graph_path, const std::string& source,
                    int order, const std::string& formulation,
                    const std::string& weight, const std::string& out_path,
                    const std::string& plot_path) {
  auto series = build_series(graph_path, source, order, formulation, "0");
  const WeightKind w = weight == "rho" ? WeightKind::Rho : WeightKind::None;
  const auto report = norm_report(series, w);

  Output out(out_path);
  out.stream() << "order,terms,max_abs_coeff,sup_global,sup_window,weighted_l1\n";
  for (const auto& row : report.rows)
    out.stream() << row.order << "," << row.term_count << ","
                 << fmt(row.max_abs_coeff) << "," << fmt(row.sup_global) << ","
                 << fmt(row.sup_window) << "," << fmt(row.weighted_l1) << "\n";
  out.stream() << "# classification: " << report.classification
               << (report.one_sample ? " (single order)" : "") << "\n";

  if (!plot_path.empty()) {
    Output plot(plot_path);
    plot.stream() << "k,value\n";
    for (const auto& row : report.rows)
      plot.stream() << row.order << "," << fmt(row.sup_window) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Green functions and cylinder kernels on compact Kirchhoff "
               "quantum graphs via boundary integrals"};
  app.require_subcommand(1);

  std::string graph_path, source, out_path, plot_path, summary_path;
  std::string formulation = "nuprime", weight = "rho", s0 = "0";
  std::string y0_text = "0.3", s0_text = "0";
  std::vector<std::string> fields;
  std::vector<double> times;
  int order = 0, nodes = 128, orders = 20;
  double length = 1.0, beta = 20.0;

  auto* validate_cmd = app.add_subcommand("validate", "check a graph file");
  validate_cmd->add_option("graph", graph_path, "graph JSON file")->required();

  auto* kernel_cmd =
      app.add_subcommand("kernel", "assemble G, Tbar, T at field points");
  kernel_cmd->add_option("--graph", graph_path)->required();
  kernel_cmd->add_option("--source", source, "source point <edge>:<coord>")
      ->required();
  kernel_cmd->add_option("--field", fields, "field point(s) <edge>:<coord>")
      ->required();
  kernel_cmd->add_option("--t", times, "time value(s)")->required();
  kernel_cmd->add_option("--order", order, "truncation order");
  kernel_cmd->add_option("--formulation", formulation, "nu | nuprime");
  kernel_cmd->add_option("-o,--output", out_path);

  auto* densities_cmd =
      app.add_subcommand("densities", "dump the density series as JSON");
  densities_cmd->add_option("--graph", graph_path)->required();
  densities_cmd->add_option("--source", source)->required();
  densities_cmd->add_option("--order", order);
  densities_cmd->add_option("--formulation", formulation);
  densities_cmd->add_option("--s0", s0, "source time (decimal)");
  densities_cmd->add_option("-o,--output", out_path);

  auto* images_cmd = app.add_subcommand(
      "images", "compare the interval MRE with the image ladder");
  images_cmd->add_option("--graph", graph_path)->required();
  images_cmd->add_option("--source", source)->required();
  images_cmd->add_option("--order", order);
  images_cmd->add_option("-o,--output", out_path);

  auto* thermal_cmd = app.add_subcommand(
      "thermal", "finite-temperature Nystrom vs Neumann on the interval");
  thermal_cmd->add_option("--L", length, "interval length");
  thermal_cmd->add_option("--y0", y0_text, "source position (decimal)");
  thermal_cmd->add_option("--s0", s0_text, "source time (decimal)");
  thermal_cmd->add_option("--beta", beta, "inverse temperature");
  thermal_cmd->add_option("--M", nodes, "nodes on the time circle");
  thermal_cmd->add_option("--orders", orders, "Neumann iterations");
  thermal_cmd->add_option("-o,--output", out_path);
  thermal_cmd->add_option("--summary", summary_path, "JSON summary path");
  thermal_cmd->add_option("--plot", plot_path, "increment plot data");

  auto* diag_cmd =
      app.add_subcommand("diagnostics", "per-order norm and decay report");
  diag_cmd->add_option("--graph", graph_path)->required();
  diag_cmd->add_option("--source", source)->required();
  diag_cmd->add_option("--order", order);
  diag_cmd->add_option("--formulation", formulation);
  diag_cmd->add_option("--weight", weight, "rho | none");
  diag_cmd->add_option("-o,--output", out_path);
  diag_cmd->add_option("--plot", plot_path, "sup-norm plot data");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate_cmd->parsed()) return cmd_validate(graph_path);
    if (kernel_cmd->parsed())
      return cmd_kernel(graph_path, source, fields, times, order, formulation,
                        out_path);
    if (densities_cmd->parsed())
      return cmd_densities(graph_path, source, order, formulation, s0, out_path);
    if (images_cmd->parsed())
      return cmd_images(graph_path, source, order, out_path);
    if (thermal_cmd->parsed())
      return cmd_thermal(length, y0_text, s0_text, beta, nodes, orders, out_path,
                         summary_path, plot_path);
    if (diag_cmd->parsed())
      return cmd_diagnostics(graph_path, source, order, formulation, weight,
                             out_path, plot_path);
  } catch (const SingularEvaluation& ex) {
    std::cerr << "error: singular evaluation: " << ex.what() << "\n";
    return 2;
  } catch (const QuadratureBudgetError& ex) {
    std::cerr << "error: quadrature budget: " << ex.what() << "\n";
    return 3;
  } catch (const NearResonanceError& ex) {
    std::cerr << "error: near resonance: " << ex.what() << "\n";
    return 3;
  } catch (const GraphError& ex) {
    std::cerr << "error: invalid input: " << ex.what() << "\n";
    return 1;
  } catch (const Error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
