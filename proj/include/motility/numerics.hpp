#pragma once
// Special functions, quadrature, spectral differentiation and a dense
// eigensolver contract shared by every other module.

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace motility {

// Raised when a numerical procedure (Newton, eigensolver, root finder) fails.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Modified Bessel function of the first kind I_n(x) (or I_n'(x)) for n in {0,1,2}.
double bessel_i(int n, double x, bool derivative = false);

// First `count` eigenvalues of the Neumann Laplacian -Δ on the disk of radius R,
// ascending and counted with multiplicity (the constant mode contributes 0).
std::vector<double> neumann_laplacian_eigs(double R, int count);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  double integrate(const std::function<double(double)>& f) const;
  std::size_t size() const { return nodes.size(); }
};

QuadratureRule gauss_legendre(int n, double a, double b);

struct EigenPair {
  std::complex<double> value;
  Eigen::VectorXcd vector;
};

// All eigenpairs of a dense real matrix. Every pair satisfies
// ||A v - λ v|| <= 1e-8 ||A|| ||v||; complex values appear in conjugate pairs.
std::vector<EigenPair> dense_eig(const Eigen::MatrixXd& A);

// Eigenvalues only (cheaper for large matrices).
Eigen::VectorXcd dense_eigenvalues(const Eigen::MatrixXd& A);

// Chebyshev–Lobatto points x_j = cos(jπ/N), j = 0..N, and the differentiation
// matrix on them.
void chebyshev(int N, Eigen::VectorXd& x, Eigen::MatrixXd& D);

// Radial collocation on (0, R]. The nodes are the positive half of an even-count
// Chebyshev–Lobatto grid on [-R, R], so r = 0 is never a node. The matrices act
// on values at the positive nodes of a function of definite parity
// f(-r) = parity * f(r); node 0 is the boundary r = R.
struct CollocationGrid {
  double R = 1.0;
  int parity = 1;
  Eigen::VectorXd r;
  Eigen::MatrixXd D1;
  Eigen::MatrixXd D2;

  // n_points positive nodes (including r = R).
  static CollocationGrid make(double R, int n_points, int parity);
  int size() const { return static_cast<int>(r.size()); }
};

}  // namespace motility
