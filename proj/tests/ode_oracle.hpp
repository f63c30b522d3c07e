#pragma once
// Independent oracle for the radial Dirichlet profile, shared by the unit and
// acceptance tests.

#include "motility/numerics.hpp"

#include <cmath>

namespace motility::testing {

// Independent oracle: Chebyshev collocation of the Dirichlet problem
// (1/r)(rΦ')' − Φ/r² − (ζ − m0)Φ = m0 r on an odd-parity radial grid, then
// barycentric interpolation on the full symmetric grid.
struct OdeOracle {
  Eigen::VectorXd x;   // full Chebyshev nodes on [-1, 1]
  Eigen::VectorXd f;   // odd extension of the solution
  double R;

  OdeOracle(double R_, double m0, double zeta, int n_points) : R(R_) {
    const auto g = CollocationGrid::make(R, n_points, -1);
    const int n = g.size();
    Eigen::MatrixXd L = g.D2;
    for (int i = 0; i < n; ++i) {
      L.row(i) += g.D1.row(i) / g.r(i);
      L(i, i) -= 1.0 / (g.r(i) * g.r(i)) + (zeta - m0);
    }
    Eigen::VectorXd rhs = m0 * g.r;
    L.row(0).setZero();
    L(0, 0) = 1.0;
    rhs(0) = 0.0;
    const Eigen::VectorXd sol = L.partialPivLu().solve(rhs);
    const int N = 2 * n - 1;
    x.resize(N + 1);
    f.resize(N + 1);
    for (int j = 0; j <= N; ++j) x(j) = std::cos(M_PI * j / N);
    for (int j = 0; j < n; ++j) {
      f(j) = sol(j);
      f(N - j) = -sol(j);
    }
  }

  double operator()(double r) const {
    const double t = r / R;
    const int N = static_cast<int>(x.size()) - 1;
    double num = 0.0, den = 0.0;
    for (int j = 0; j <= N; ++j) {
      if (t == x(j)) return f(j);
      double w = (j % 2 ? -1.0 : 1.0) * ((j == 0 || j == N) ? 0.5 : 1.0);
      w /= (t - x(j));
      num += w * f(j);
      den += w;
    }
    return num / den;
  }
};

}  // namespace motility::testing
