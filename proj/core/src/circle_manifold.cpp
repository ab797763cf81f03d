#include "nfwpt/circle_manifold.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nfwpt {

void validate(const RcgOptions& o) {
  if (o.max_iterations < 0) throw std::invalid_argument("rcg: max_iterations must be >= 0");
  if (!(o.gradient_tolerance > 0.0))
    throw std::invalid_argument("rcg: gradient_tolerance must be positive");
  if (!(o.initial_step > 0.0)) throw std::invalid_argument("rcg: initial_step must be positive");
  if (!(o.contraction > 0.0 && o.contraction < 1.0))
    throw std::invalid_argument("rcg: contraction must lie in (0, 1)");
  if (!(o.sufficient_decrease > 0.0 && o.sufficient_decrease < 1.0))
    throw std::invalid_argument("rcg: sufficient_decrease must lie in (0, 1)");
  if (o.max_backtracks < 1) throw std::invalid_argument("rcg: max_backtracks must be >= 1");
  if (o.restart_period < 0) throw std::invalid_argument("rcg: restart_period must be >= 0");
}

double objective(const QuadraticForm& form, const ComplexVector& b) {
  return form.value(q_from_b(b));
}

ComplexVector euclidean_gradient(const QuadraticForm& form, const ComplexVector& b) {
  return 0.5 * (form.apply(b) + kImagUnit * form.ones_image());
}

ComplexVector riemannian_gradient(const ComplexVector& g, const ComplexVector& b) {
  ComplexVector out(g.size());
  for (Eigen::Index l = 0; l < g.size(); ++l)
    out[l] = g[l] - (g[l] * std::conj(b[l])).real() * b[l];
  return out;
}

ComplexVector transport(const ComplexVector& tangent, const ComplexVector& to) {
  return riemannian_gradient(tangent, to);
}

ComplexVector retract(const ComplexVector& b, const ComplexVector& tangent, double step) {
  if (step < 0.0) throw std::invalid_argument("retract: step must be >= 0");
  for (int attempt = 0; attempt < 64; ++attempt, step *= 0.5) {
    ComplexVector out = b + step * tangent;
    bool ok = true;
    for (Eigen::Index l = 0; l < out.size() && ok; ++l) {
      const double mag = std::abs(out[l]);
      if (mag == 0.0) ok = false;
      else out[l] /= mag;
    }
    if (ok) return out;
  }
  throw std::domain_error("retract: point is not on the manifold");
}

namespace {

double max_abs(const ComplexVector& v) {
  double m = 0.0;
  for (Eigen::Index l = 0; l < v.size(); ++l) m = std::max(m, std::abs(v[l]));
  return m;
}

}  // namespace

RcgResult rcg_minimize(const QuadraticForm& form, const ComplexVector& b0,
                       const RcgOptions& options) {
  validate(options);
  if (static_cast<std::size_t>(b0.size()) != form.dimension())
    throw std::invalid_argument("rcg_minimize: starting point has the wrong dimension");

  RcgResult out;
  out.b = b0;
  double f = objective(form, out.b);
  out.trace.push_back(f);

  const double threshold = options.gradient_tolerance * form.trace_magnitude();
  const int restart_period =
      options.restart_period > 0 ? options.restart_period : static_cast<int>(b0.size());

  ComplexVector grad = riemannian_gradient(euclidean_gradient(form, out.b), out.b);
  double grad_sq = grad.squaredNorm();
  out.gradient_norms.push_back(std::sqrt(grad_sq));
  ComplexVector dir = -grad;
  bool steepest = true;
  int since_restart = 0;
  double move = options.initial_step;  // radians of the largest entry change

  out.stop = RcgStop::IterationCap;
  while (out.iterations < options.max_iterations) {
    if (std::sqrt(grad_sq) <= threshold || form.is_zero()) {
      out.stop = RcgStop::GradientTolerance;
      break;
    }
    double slope = metric(grad, dir);
    if (!(slope < 0.0)) {
      dir = -grad;
      slope = -grad_sq;
      steepest = true;
    }

    const double dir_max = max_abs(dir);
    double step = std::min(options.initial_step, 2.0 * move) / dir_max;
    ComplexVector candidate;
    double f_candidate = f;
    bool accepted = false;
    for (int k = 0; k < options.max_backtracks; ++k, step *= options.contraction) {
      candidate = retract(out.b, dir, step);
      f_candidate = objective(form, candidate);
      if (f_candidate <= f + options.sufficient_decrease * step * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (steepest) {
        out.stop = RcgStop::Stalled;
        break;
      }
      dir = -grad;
      steepest = true;
      since_restart = 0;
      continue;
    }

    ++out.iterations;
    ++since_restart;
    move = step * dir_max;
    out.b = std::move(candidate);
    f = f_candidate;
    out.trace.push_back(f);

    const ComplexVector next = riemannian_gradient(euclidean_gradient(form, out.b), out.b);
    const double next_sq = next.squaredNorm();
    out.gradient_norms.push_back(std::sqrt(next_sq));
    double beta = 0.0;
    if (since_restart < restart_period && grad_sq > 0.0) {
      beta = std::max(0.0, metric(next, next - transport(grad, out.b)) / grad_sq);
    } else {
      since_restart = 0;
    }
    dir = -next + beta * transport(dir, out.b);
    steepest = beta == 0.0;
    grad = next;
    grad_sq = next_sq;
  }
  out.gradient_norm = std::sqrt(grad_sq);
  if (out.stop == RcgStop::IterationCap && out.gradient_norm <= threshold)
    out.stop = RcgStop::GradientTolerance;
  return out;
}

}  // namespace nfwpt
