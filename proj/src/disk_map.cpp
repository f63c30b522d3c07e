#include "motility/disk_map.hpp"

#include "motility/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace motility {

using std::numbers::pi;

namespace {

// Interpolatory weights on [0,1] for the given nodes, via Chebyshev moments.
Eigen::VectorXd interpolatory_weights(const Eigen::VectorXd& t) {
  const int n = static_cast<int>(t.size());
  Eigen::MatrixXd V(n, n);
  Eigen::VectorXd mom(n);
  for (int k = 0; k < n; ++k) {
    mom(k) = (k % 2 == 0) ? 1.0 / (1.0 - static_cast<double>(k) * k) : 0.0;
    for (int i = 0; i < n; ++i) V(k, i) = std::cos(k * std::acos(std::clamp(2.0 * t(i) - 1.0, -1.0, 1.0)));
  }
  return V.fullPivLu().solve(mom);
}

}  // namespace

DiskGrid DiskGrid::make(int n_s, int n_theta) {
  if (n_s < 4) throw DomainError("DiskGrid: need at least 4 radial nodes");
  if (n_theta < 4 || n_theta % 2) throw DomainError("DiskGrid: n_theta must be even and >= 4");
  DiskGrid g;
  g.n_s = n_s;
  g.n_theta = n_theta;
  const int Ns = 2 * n_s - 1;
  Eigen::VectorXd x;
  Eigen::MatrixXd D;
  chebyshev(Ns, x, D);
  g.s = x.head(n_s);
  g.theta.resize(n_theta);
  for (int j = 0; j < n_theta; ++j) g.theta(j) = 2.0 * pi * j / n_theta;

  const int N = n_s * n_theta, half = n_theta / 2;
  g.Ds.setZero(N, N);
  for (int i = 0; i < n_s; ++i)
    for (int k = 0; k < n_s; ++k)
      for (int j = 0; j < n_theta; ++j) {
        g.Ds(g.index(i, j), g.index(k, j)) += D(i, k);
        g.Ds(g.index(i, j), g.index(k, (j + half) % n_theta)) += D(i, Ns - k);
      }

  g.Dth1.setZero(n_theta, n_theta);
  for (int j = 0; j < n_theta; ++j)
    for (int k = 0; k < n_theta; ++k)
      if (j != k) {
        const double sign = ((j - k) % 2 == 0) ? 1.0 : -1.0;
        g.Dth1(j, k) = 0.5 * sign / std::tan((j - k) * pi / n_theta);
      }
  g.Dtheta.setZero(N, N);
  for (int i = 0; i < n_s; ++i) g.Dtheta.block(i * n_theta, i * n_theta, n_theta, n_theta) = g.Dth1;

  const Eigen::VectorXd t = g.s.array().square();
  const Eigen::VectorXd w = interpolatory_weights(t);
  g.radial_weights = w.array() / (2.0 * g.s.array());
  const Eigen::VectorXd wi = interpolatory_weights(t.tail(n_s - 1));
  g.radial_weights_interior = Eigen::VectorXd::Zero(n_s);
  g.radial_weights_interior.tail(n_s - 1) = wi.array() / (2.0 * g.s.tail(n_s - 1).array());
  return g;
}

Eigen::MatrixXd DiskGrid::even_extension(int rows_s) const {
  const int J = half();
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(rows_s * n_theta, rows_s * J);
  for (int i = 0; i < rows_s; ++i)
    for (int j = 0; j < n_theta; ++j) {
      const int jj = j <= n_theta / 2 ? j : n_theta - j;
      P(i * n_theta + j, i * J + jj) = 1.0;
    }
  return P;
}

Eigen::MatrixXd DiskGrid::angular_basis(bool full) const {
  const int K = n_theta / 2, nb = n_modes(full);
  Eigen::MatrixXd B(n_theta, nb);
  for (int j = 0; j < n_theta; ++j) {
    for (int k = 0; k < K; ++k) B(j, k) = std::cos(k * theta(j));
    if (full)
      for (int k = 1; k < K; ++k) B(j, K + k - 1) = std::sin(k * theta(j));
  }
  return B;
}

Eigen::MatrixXd DiskGrid::angular_projection(bool full) const {
  Eigen::MatrixXd Q = angular_basis(full).transpose() * (2.0 / n_theta);
  Q.row(0) *= 0.5;
  return Q;
}

Eigen::MatrixXd ring_kron(const Eigen::MatrixXd& A, int rings) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(A.rows() * rings, A.cols() * rings);
  for (int i = 0; i < rings; ++i) out.block(i * A.rows(), i * A.cols(), A.rows(), A.cols()) = A;
  return out;
}

double DiskGrid::interpolate(const Eigen::VectorXd& f, double s_pt, double th) const {
  // trigonometric interpolation on one ring (even node count)
  auto ring = [&](int i, double ang) {
    double v = 0.0;
    for (int j = 0; j < n_theta; ++j) {
      const double d = ang - theta(j);
      const double half_d = 0.5 * d;
      const double sn = std::sin(half_d);
      double S;
      if (std::abs(sn) < 1e-14) {
        // d is a multiple of 2π
        S = 1.0;
      } else {
        S = std::sin(0.5 * n_theta * d) * std::cos(half_d) / (n_theta * sn);
      }
      v += f(index(i, j)) * S;
    }
    return v;
  };
  const int Ns = 2 * n_s - 1;
  double num = 0.0, den = 0.0;
  for (int k = 0; k <= Ns; ++k) {
    const double xk = std::cos(pi * k / Ns);
    const double val = k < n_s ? ring(k, th) : ring(Ns - k, th + pi);
    if (s_pt == xk) return val;
    double wgt = ((k % 2) ? -1.0 : 1.0) * ((k == 0 || k == Ns) ? 0.5 : 1.0) / (s_pt - xk);
    num += wgt * val;
    den += wgt;
  }
  return num / den;
}

double BoundaryCurve::r(double th) const {
  double v = R0;
  for (std::size_t k = 0; k < modes.size(); ++k) v += modes[k] * std::cos(k * th);
  return v;
}

double BoundaryCurve::dr(double th) const {
  double v = 0.0;
  for (std::size_t k = 1; k < modes.size(); ++k) v -= k * modes[k] * std::sin(k * th);
  return v;
}

double BoundaryCurve::d2r(double th) const {
  double v = 0.0;
  for (std::size_t k = 1; k < modes.size(); ++k) v -= double(k * k) * modes[k] * std::cos(k * th);
  return v;
}

double BoundaryCurve::curvature(double th) const {
  const double a = r(th), b = dr(th), c = d2r(th);
  return (a * a + 2.0 * b * b - a * c) / std::pow(a * a + b * b, 1.5);
}

double BoundaryCurve::area() const {
  const double c0 = R0 + (modes.empty() ? 0.0 : modes[0]);
  double a = pi * c0 * c0;
  for (std::size_t k = 1; k < modes.size(); ++k) a += 0.5 * pi * modes[k] * modes[k];
  return a;
}

MappedGeometry MappedGeometry::make(const DiskGrid& grid, const BoundaryCurve& curve) {
  MappedGeometry g;
  g.grid = &grid;
  g.curve = curve;
  const int N = grid.size(), nt = grid.n_theta;
  g.x.resize(N);
  g.y.resize(N);
  g.u.resize(N);
  g.us.resize(N);
  g.uth.resize(N);
  g.sx.resize(N);
  g.sy.resize(N);
  g.thx.resize(N);
  g.thy.resize(N);
  g.area_weights.resize(N);
  g.area_weights_interior.resize(N);
  const std::size_t K = curve.modes.size();
  for (int i = 0; i < grid.n_s; ++i) {
    const double s = grid.s(i);
    for (int j = 0; j < nt; ++j) {
      const double th = grid.theta(j), c = std::cos(th), sn = std::sin(th);
      double H = curve.R0, Hs = 0.0, Hth = 0.0;
      double sk = 1.0;  // s^k
      for (std::size_t k = 0; k < K; ++k) {
        const double ck = std::cos(k * th), sk_th = std::sin(k * th);
        H += curve.modes[k] * sk * ck;
        if (k >= 1) Hs += k * curve.modes[k] * (sk / s) * ck;
        Hth -= k * curve.modes[k] * sk * sk_th;
        sk *= s;
      }
      const int id = grid.index(i, j);
      const double u = s * H, us = H + s * Hs, uth = s * Hth;
      g.u(id) = u;
      g.us(id) = us;
      g.uth(id) = uth;
      g.x(id) = u * c;
      g.y(id) = u * sn;
      g.sx(id) = c / us + sn * uth / (u * us);
      g.thx(id) = -sn / u;
      g.sy(id) = sn / us - c * uth / (u * us);
      g.thy(id) = c / u;
      g.area_weights(id) = (2.0 * pi / nt) * grid.radial_weights(i) * u * us;
      g.area_weights_interior(id) = (2.0 * pi / nt) * grid.radial_weights_interior(i) * u * us;
    }
  }
  g.nx.resize(nt);
  g.ny.resize(nt);
  g.arc.resize(nt);
  g.kappa.resize(nt);
  for (int j = 0; j < nt; ++j) {
    const double th = grid.theta(j), r = curve.r(th), rp = curve.dr(th);
    const double T = std::sqrt(r * r + rp * rp);
    g.arc(j) = T;
    g.nx(j) = (rp * std::sin(th) + r * std::cos(th)) / T;
    g.ny(j) = (r * std::sin(th) - rp * std::cos(th)) / T;
    g.kappa(j) = curve.curvature(th);
  }
  return g;
}

Eigen::VectorXd MappedGeometry::dx(const Eigen::VectorXd& f) const {
  return sx.cwiseProduct(grid->Ds * f) + thx.cwiseProduct(grid->Dtheta * f);
}

Eigen::VectorXd MappedGeometry::dy(const Eigen::VectorXd& f) const {
  return sy.cwiseProduct(grid->Ds * f) + thy.cwiseProduct(grid->Dtheta * f);
}

Eigen::MatrixXd MappedGeometry::Dx() const {
  return sx.asDiagonal() * grid->Ds + thx.asDiagonal() * grid->Dtheta;
}

Eigen::MatrixXd MappedGeometry::Dy() const {
  return sy.asDiagonal() * grid->Ds + thy.asDiagonal() * grid->Dtheta;
}

void MappedGeometry::node_displacement(const std::vector<double>& dmodes, Eigen::VectorXd& dX,
                                       Eigen::VectorXd& dY) const {
  const int N = grid->size();
  dX.resize(N);
  dY.resize(N);
  for (int i = 0; i < grid->n_s; ++i) {
    const double s = grid->s(i);
    for (int j = 0; j < grid->n_theta; ++j) {
      const double th = grid->theta(j);
      double dH = 0.0, sk = 1.0;
      for (std::size_t k = 0; k < dmodes.size(); ++k) {
        dH += dmodes[k] * sk * std::cos(k * th);
        sk *= s;
      }
      dX(grid->index(i, j)) = s * dH * std::cos(th);
      dY(grid->index(i, j)) = s * dH * std::sin(th);
    }
  }
}

}  // namespace motility
