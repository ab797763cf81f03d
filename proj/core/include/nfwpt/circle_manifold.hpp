#pragma once

#include <vector>

#include "nfwpt/dma.hpp"

namespace nfwpt {

// Minimization of f(b) = 1/4 (b + j1)^H A (b + j1) over the product of N unit
// circles |b_l| = 1 by Riemannian conjugate gradients.

struct RcgOptions {
  int max_iterations = 500;
  /// Stop once ||grad_R f|| <= gradient_tolerance * N * trace(-A) / N.
  double gradient_tolerance = 1e-6;
  /// Trial step of the line search, in radians of the largest entry move.
  double initial_step = 1.0;
  double contraction = 0.5;
  double sufficient_decrease = 1e-4;
  int max_backtracks = 50;
  /// Forced steepest-descent restart period; 0 means every N iterations.
  int restart_period = 0;
};

/// Throws std::invalid_argument unless every field is in range.
void validate(const RcgOptions& options);

double objective(const QuadraticForm& form, const ComplexVector& b);

/// 1/2 (A b + j A 1). This is twice the Wirtinger derivative of f; the line
/// search absorbs the scale.
ComplexVector euclidean_gradient(const QuadraticForm& form, const ComplexVector& b);

/// Entrywise projection g_l - Re{g_l conj(b_l)} b_l onto the tangent space.
ComplexVector riemannian_gradient(const ComplexVector& euclid_grad, const ComplexVector& b);

/// Re-projects a tangent vector at one point onto the tangent space at `to`.
ComplexVector transport(const ComplexVector& tangent, const ComplexVector& to);

/// (b + step t) normalized entrywise. A zero entry halves the step.
ComplexVector retract(const ComplexVector& b, const ComplexVector& tangent, double step);

/// Real inner product Re{x^H y} used as the Riemannian metric.
inline double metric(const ComplexVector& x, const ComplexVector& y) {
  return x.dot(y).real();
}

enum class RcgStop { GradientTolerance, Stalled, IterationCap };

struct RcgResult {
  ComplexVector b;
  std::vector<double> trace;  ///< f after every accepted iterate, starting at f(b0)
  std::vector<double> gradient_norms;  ///< ||grad_R f|| at the same iterates
  int iterations = 0;
  double gradient_norm = 0.0;
  RcgStop stop = RcgStop::IterationCap;

  bool converged() const { return stop != RcgStop::IterationCap; }
};

/// Polak-Ribiere+ conjugate gradients with Armijo backtracking. The returned
/// point never has a larger objective than b0 and the trace is non-increasing.
RcgResult rcg_minimize(const QuadraticForm& form, const ComplexVector& b0,
                       const RcgOptions& options = {});

}  // namespace nfwpt
