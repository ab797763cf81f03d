#include <doctest.h>

#include <cmath>

#include "nfwpt/circle_manifold.hpp"
#include "support/oracles.hpp"

using namespace nfwpt;
using namespace nfwpt::testing;

namespace {

QuadraticForm random_form(Rng& rng, Eigen::Index n, int rank) {
  std::vector<ComplexVector> zs;
  std::vector<double> alpha;
  for (int m = 0; m < rank; ++m) {
    zs.push_back(random_vector(rng, n));
    alpha.push_back(uniform(rng, 0.1, 1.0));
  }
  return build_quadratic_form(std::move(zs), alpha, uniform(rng, 0.1, 0.9));
}

ComplexVector from_angles(const Eigen::VectorXd& psi) {
  ComplexVector b(psi.size());
  for (Eigen::Index l = 0; l < psi.size(); ++l) b[l] = std::polar(1.0, psi[l]);
  return b;
}

}  // namespace

TEST_CASE("objective") {
  Rng rng(1);
  const QuadraticForm a = random_form(rng, 6, 2);
  CHECK(objective(a, ComplexVector::Constant(6, -kImagUnit)) == 0.0);

  // N = 1, A = -1: f(j) = 1/4 |2j|^2 (-1) = -1.
  const QuadraticForm minus_one({ComplexVector::Ones(1)}, {1.0});
  CHECK(objective(minus_one, ComplexVector::Constant(1, kImagUnit)) == doctest::Approx(-1.0));

  SUBCASE("equals minus the weighted energy through b -> q -> Q") {
    for (int trial = 0; trial < 20; ++trial) {
      const Scenario s = random_scenario(rng, 3, 2);
      const auto channels = channel_vectors(s.geometry, s.receivers);
      const WaveguideMatrix h(s.geometry);
      const ComplexVector w = random_vector(rng, 3);
      const QuadraticForm form =
          build_quadratic_form(reduced_channels(w, channels, h, 3), s.weights(), s.zeta);
      const ComplexVector b = random_unit_modulus(rng, 9);
      const DmaState state = DmaState::from_circle(3, 3, b);
      double expected = 0.0;
      for (std::size_t m = 0; m < channels.size(); ++m)
        expected += s.receivers[m].weight *
                    dense_energy(channels[m], dense_h(h), dense_q(state), w, s.zeta);
      CHECK(std::abs(objective(form, b) + expected) <= 1e-10 * expected);
    }
  }
}

TEST_CASE("euclidean gradient") {
  Rng rng(2);
  const QuadraticForm a = random_form(rng, 5, 3);
  const QuadraticForm zero({ComplexVector::Zero(5)}, {1.0});
  CHECK(euclidean_gradient(zero, random_unit_modulus(rng, 5)).norm() == 0.0);
  CHECK(euclidean_gradient(a, ComplexVector::Constant(5, -kImagUnit)).norm() < 1e-15);
}

TEST_CASE("Riemannian gradient matches central finite differences over phases") {
  Rng rng(3);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = static_cast<Eigen::Index>(2 + rng() % 12);
    const QuadraticForm a = random_form(rng, n, 1 + static_cast<int>(rng() % 3));
    Eigen::VectorXd psi(n), dir(n);
    for (Eigen::Index l = 0; l < n; ++l) {
      psi[l] = uniform(rng, 0, kTwoPi);
      dir[l] = uniform(rng, -1, 1);
    }
    const ComplexVector b = from_angles(psi);
    const ComplexVector rg = riemannian_gradient(euclidean_gradient(a, b), b);
    // d b / d psi along dir is j b .* dir.
    ComplexVector tangent(n);
    for (Eigen::Index l = 0; l < n; ++l) tangent[l] = kImagUnit * b[l] * dir[l];
    const double analytic = metric(rg, tangent);
    const double h = 1e-6;
    const double fd =
        (objective(a, from_angles(psi + h * dir)) - objective(a, from_angles(psi - h * dir))) /
        (2.0 * h);
    worst = std::max(worst, std::abs(analytic - fd) / std::abs(fd));
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("gradient scale convention only rescales the direction") {
  Rng rng(4);
  const QuadraticForm a = random_form(rng, 7, 2);
  const ComplexVector b = random_unit_modulus(rng, 7);
  const ComplexVector g_half = riemannian_gradient(euclidean_gradient(a, b), b);
  const ComplexVector g_quarter = riemannian_gradient(0.5 * euclidean_gradient(a, b), b);
  const Complex ratio = g_half.dot(g_quarter) / g_half.squaredNorm();
  CHECK(ratio.real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(ratio.imag()) < 1e-14);
  CHECK((g_half - 2.0 * g_quarter).norm() <= 1e-14 * g_half.norm());
}

TEST_CASE("tangent projection") {
  Rng rng(5);
  const ComplexVector b = random_unit_modulus(rng, 10);
  CHECK(riemannian_gradient(b, b).norm() < 1e-15);
  const ComplexVector jb = kImagUnit * b;
  CHECK((riemannian_gradient(jb, b) - jb).norm() < 1e-15);
  const ComplexVector t = riemannian_gradient(random_vector(rng, 10), b);
  for (Eigen::Index l = 0; l < 10; ++l) CHECK(std::abs((t[l] * std::conj(b[l])).real()) < 1e-14);
}

TEST_CASE("retraction") {
  Rng rng(6);
  const ComplexVector b = random_unit_modulus(rng, 8);
  const ComplexVector t = riemannian_gradient(random_vector(rng, 8), b);
  CHECK(retract(b, t, 0.0) == b);
  const ComplexVector r = retract(b, t, 3.7);
  for (Eigen::Index l = 0; l < 8; ++l) CHECK(std::abs(std::abs(r[l]) - 1.0) < 1e-15);

  // Second-order agreement with the straight line: log-log slope near 2.
  const double e1 = 1e-2, e2 = 1e-3;
  const double d1 = (retract(b, t, e1) - (b + e1 * t)).norm();
  const double d2 = (retract(b, t, e2) - (b + e2 * t)).norm();
  const double slope = std::log(d1 / d2) / std::log(e1 / e2);
  CHECK(slope == doctest::Approx(2.0).epsilon(0.05));

  // b + step t vanishing in one entry: the step is halved.
  ComplexVector one = ComplexVector::Ones(1);
  ComplexVector back = ComplexVector::Constant(1, Complex(-1.0, 0.0));
  const ComplexVector safe = retract(one, back, 1.0);
  CHECK(std::abs(std::abs(safe[0]) - 1.0) < 1e-15);
  CHECK_THROWS_AS(retract(b, t, -1.0), std::invalid_argument);
}

TEST_CASE("vector transport") {
  Rng rng(7);
  const ComplexVector from = random_unit_modulus(rng, 6);
  const ComplexVector to = random_unit_modulus(rng, 6);
  const ComplexVector t = riemannian_gradient(random_vector(rng, 6), from);
  CHECK((transport(t, from) - t).norm() < 1e-15);
  const ComplexVector moved = transport(t, to);
  for (Eigen::Index l = 0; l < 6; ++l)
    CHECK(std::abs((moved[l] * std::conj(to[l])).real()) < 1e-14);
  CHECK(transport(ComplexVector::Zero(6), to).norm() == 0.0);
}

TEST_CASE("rcg_minimize with a zero form returns the start") {
  Rng rng(8);
  const QuadraticForm zero({ComplexVector::Zero(4)}, {1.0});
  const ComplexVector b0 = random_unit_modulus(rng, 4);
  const RcgResult r = rcg_minimize(zero, b0);
  CHECK(r.b == b0);
  REQUIRE(r.trace.size() == 1);
  CHECK(r.trace[0] == 0.0);
  CHECK(r.converged());
}

TEST_CASE("rcg_minimize reaches the brute-force optimum of a rank-one form") {
  // 24 phases per element, 24^4 points.
  Rng rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const QuadraticForm a = random_form(rng, 4, 1);
    const ComplexVector& z = a.factors()[0];
    const double c = a.coefficients()[0];
    double best = 0.0;
    std::array<Complex, 24> grid{};
    for (int k = 0; k < 24; ++k) grid[static_cast<std::size_t>(k)] = 0.5 * (kImagUnit + std::polar(1.0, kTwoPi * k / 24.0));
    for (int i0 = 0; i0 < 24; ++i0)
      for (int i1 = 0; i1 < 24; ++i1)
        for (int i2 = 0; i2 < 24; ++i2)
          for (int i3 = 0; i3 < 24; ++i3) {
            const Complex s = std::conj(z[0]) * grid[i0] + std::conj(z[1]) * grid[i1] +
                              std::conj(z[2]) * grid[i2] + std::conj(z[3]) * grid[i3];
            best = std::min(best, -c * std::norm(s));
          }
    const RcgResult r = rcg_minimize(a, random_unit_modulus(rng, 4));
    CHECK(r.trace.back() <= 0.98 * best);
  }
}

TEST_CASE("rcg_minimize descends monotonically and stays on the manifold") {
  Rng rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = static_cast<Eigen::Index>(4 + rng() % 60);
    const QuadraticForm a = random_form(rng, n, 1 + static_cast<int>(rng() % 3));
    const ComplexVector b0 = random_unit_modulus(rng, n);
    const RcgResult r = rcg_minimize(a, b0);
    CHECK(r.trace.back() <= objective(a, b0));
    for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k] <= r.trace[k - 1]);
    CHECK(r.trace.size() == r.gradient_norms.size());
    CHECK((r.b.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
    CHECK(r.trace.back() == doctest::Approx(objective(a, r.b)).epsilon(1e-14));
  }
}

TEST_CASE("rcg iteration cap is reported") {
  Rng rng(11);
  const QuadraticForm a = random_form(rng, 30, 2);
  RcgOptions o;
  o.max_iterations = 2;
  const RcgResult r = rcg_minimize(a, random_unit_modulus(rng, 30), o);
  CHECK(r.iterations <= 2);
  CHECK(r.stop == RcgStop::IterationCap);
  CHECK_FALSE(r.converged());
}

TEST_CASE("rcg option validation") {
  RcgOptions o;
  CHECK_NOTHROW(validate(o));
  o.contraction = 1.0;
  CHECK_THROWS_AS(validate(o), std::invalid_argument);
  o = RcgOptions{};
  o.sufficient_decrease = 0.0;
  CHECK_THROWS_AS(validate(o), std::invalid_argument);
  o = RcgOptions{};
  o.initial_step = -1.0;
  CHECK_THROWS_AS(validate(o), std::invalid_argument);
  o = RcgOptions{};
  o.gradient_tolerance = 0.0;
  CHECK_THROWS_AS(validate(o), std::invalid_argument);
}
