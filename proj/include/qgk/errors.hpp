#pragma once

#include <stdexcept>
#include <string>

namespace qgk {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Graph file or graph structure failed validation.
struct GraphError : Error {
  explicit GraphError(const std::string& msg) : Error(msg) {}
};

/// Evaluation requested exactly at a kernel singularity.
struct SingularEvaluation : Error {
  explicit SingularEvaluation(const std::string& msg) : Error(msg) {}
};

/// Convolution pair outside the closed LOG/EVEN/ODD family.
struct UnsupportedConvolution : Error {
  explicit UnsupportedConvolution(const std::string& msg) : Error(msg) {}
};

/// Time derivative that would leave the closed family.
struct UnsupportedDerivative : Error {
  explicit UnsupportedDerivative(const std::string& msg) : Error(msg) {}
};

/// Operation invoked with the wrong density formulation for the graph.
struct FormulationError : Error {
  explicit FormulationError(const std::string& msg) : Error(msg) {}
};

/// Adaptive quadrature exceeded its evaluation budget.
struct QuadratureBudgetError : Error {
  QuadratureBudgetError(const std::string& msg, double achieved)
      : Error(msg), achieved_estimate(achieved) {}
  double achieved_estimate;
};

/// Discrete Fredholm system singular beyond the deflated zero mode.
struct NearResonanceError : Error {
  NearResonanceError(const std::string& msg, double rcond_estimate)
      : Error(msg), rcond(rcond_estimate) {}
  double rcond;
};

}  // namespace qgk
