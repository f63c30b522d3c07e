#pragma once
// Spectral grid on a star-shaped domain {r < R0 + ρ(θ)} obtained from the unit
// disk by the harmonic-extension map x = s·H(s,θ)·(cosθ, sinθ),
// H = R0 + Σ_k ρ_k s^k cos kθ. Radial direction: Chebyshev nodes with the
// (−s, θ) ≡ (s, θ+π) fold; angular direction: Fourier.

#include <Eigen/Dense>

#include <vector>

namespace motility {

struct DiskGrid {
  int n_s = 0;      // positive radial nodes; node 0 is the boundary s = 1
  int n_theta = 0;  // even number of angular nodes θ_j = 2πj/n_theta
  Eigen::VectorXd s;
  Eigen::VectorXd theta;
  Eigen::MatrixXd Ds;      // ∂_s on the flattened grid (index i*n_theta + j)
  Eigen::MatrixXd Dtheta;  // ∂_θ on the flattened grid
  Eigen::MatrixXd Dth1;    // ∂_θ on one ring
  Eigen::VectorXd radial_weights;           // ∫_0^1 G(s) ds ≈ Σ w_i G(s_i) for G odd in s
  Eigen::VectorXd radial_weights_interior;  // same rule without the s = 1 node (w_0 = 0)

  static DiskGrid make(int n_s, int n_theta);

  int size() const { return n_s * n_theta; }
  int index(int i, int j) const { return i * n_theta + j; }
  int half() const { return n_theta / 2 + 1; }  // angular nodes of the even subspace
  // Extension of even-in-θ data (j = 0..n_theta/2) to all angles, per radial node.
  Eigen::MatrixXd even_extension(int rows_s) const;
  // Angular modal basis on one ring: cos kθ for k = 0..n_theta/2 − 1 and, when
  // `full`, sin kθ for k = 1..n_theta/2 − 1. The Nyquist mode is excluded.
  Eigen::MatrixXd angular_basis(bool full) const;
  // Discrete coefficient extraction: angular_projection(full) * angular_basis(full) = I.
  Eigen::MatrixXd angular_projection(bool full) const;
  int n_modes(bool full) const { return full ? n_theta - 1 : n_theta / 2; }
  // Spectral interpolation of a grid function at an arbitrary (s, θ), s ∈ [0, 1].
  double interpolate(const Eigen::VectorXd& f, double s, double theta) const;
};

// Boundary r(θ) = R0 + Σ_k modes[k] cos kθ and its analytic derivatives.
struct BoundaryCurve {
  double R0 = 1.0;
  std::vector<double> modes;

  double r(double th) const;
  double dr(double th) const;
  double d2r(double th) const;
  double curvature(double th) const;
  double area() const;  // ½∫r² dθ, exact for the trigonometric polynomial
};

// Block-diagonal repetition of a per-ring matrix over `rings` consecutive rings.
Eigen::MatrixXd ring_kron(const Eigen::MatrixXd& A, int rings);

// Pointwise geometry of the mapped grid.
struct MappedGeometry {
  const DiskGrid* grid = nullptr;
  BoundaryCurve curve;
  Eigen::VectorXd x, y;         // physical node coordinates
  Eigen::VectorXd u, us, uth;   // u = sH and its derivatives
  Eigen::VectorXd sx, sy, thx, thy;
  Eigen::VectorXd area_weights;           // ∫_Ω f ≈ Σ w f
  Eigen::VectorXd area_weights_interior;  // same, boundary nodes excluded
  // boundary data at θ_j
  Eigen::VectorXd nx, ny, arc;  // outward normal and |dX/dθ|
  Eigen::VectorXd kappa;

  static MappedGeometry make(const DiskGrid& grid, const BoundaryCurve& curve);

  Eigen::VectorXd dx(const Eigen::VectorXd& f) const;
  Eigen::VectorXd dy(const Eigen::VectorXd& f) const;
  Eigen::MatrixXd Dx() const;
  Eigen::MatrixXd Dy() const;
  // ∂_V-type displacement of the nodes when the boundary modes change by dmodes.
  void node_displacement(const std::vector<double>& dmodes, Eigen::VectorXd& dX, Eigen::VectorXd& dY) const;
};

}  // namespace motility
