#include "motility/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace motility {

double bessel_i(int n, double x, bool derivative) {
  if (n < 0 || n > 2) throw DomainError("bessel_i: order must be 0, 1 or 2");
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("bessel_i: argument must be finite and >= 0");
  const double h = 0.5 * x;
  // term_k = h^(2k+n) / (k! (k+n)!)
  double fact_n = 1.0;
  for (int j = 2; j <= n; ++j) fact_n *= j;
  if (!derivative) {
    double term = std::pow(h, n) / fact_n;
    double sum = term;
    for (int k = 1; k < 500; ++k) {
      term *= h * h / (static_cast<double>(k) * (k + n));
      sum += term;
      if (term <= 1e-16 * sum && k > h) break;
    }
    return sum;
  }
  // d/dx h^(2k+n) = (2k+n)/2 * h^(2k+n-1)
  if (x == 0.0) return n == 1 ? 0.5 : 0.0;
  double term = std::pow(h, n) / fact_n;  // undifferentiated term_k
  double sum = n == 0 ? 0.0 : 0.5 * n * term / h;
  for (int k = 1; k < 500; ++k) {
    term *= h * h / (static_cast<double>(k) * (k + n));
    const double dterm = 0.5 * (2 * k + n) * term / h;
    sum += dterm;
    if (dterm <= 1e-16 * sum && k > h) break;
  }
  return sum;
}

namespace {

// J_n'(x) from the standard library cylindrical Bessel function.
double bessel_j_prime(int n, double x) {
  if (n == 0) return -std::cyl_bessel_j(1.0, x);
  return 0.5 * (std::cyl_bessel_j(n - 1.0, x) - std::cyl_bessel_j(n + 1.0, x));
}

// Positive zeros of J_n' below X, by sign scan and bisection.
std::vector<double> jprime_zeros(int n, double X) {
  std::vector<double> zeros;
  const double step = 0.02;
  double a = std::max(1e-3, n - 1.0);
  double fa = bessel_j_prime(n, a);
  for (double b = a + step; b <= X + step; b += step) {
    const double fb = bessel_j_prime(n, b);
    if (fa == 0.0 || (fa < 0) != (fb < 0)) {
      double lo = a, hi = b, flo = fa;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = bessel_j_prime(n, mid);
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      const double z = 0.5 * (lo + hi);
      if (z <= X) zeros.push_back(z);
    }
    a = b;
    fa = fb;
  }
  return zeros;
}

}  // namespace

std::vector<double> neumann_laplacian_eigs(double R, int count) {
  if (!(R > 0.0)) throw DomainError("neumann_laplacian_eigs: R must be positive");
  if (count < 1) throw DomainError("neumann_laplacian_eigs: count must be >= 1");
  for (double X = 8.0;; X *= 2.0) {
    std::vector<double> z{0.0};
    for (int n = 0; n <= static_cast<int>(X) + 1; ++n) {
      for (double j : jprime_zeros(n, X)) {
        z.push_back(j);
        if (n >= 1) z.push_back(j);
      }
    }
    if (static_cast<int>(z.size()) >= count) {
      std::sort(z.begin(), z.end());
      // Zeros are complete below X; any zero beyond X exceeds every kept one.
      std::vector<double> eig(count);
      for (int i = 0; i < count; ++i) eig[i] = (z[i] / R) * (z[i] / R);
      return eig;
    }
  }
}

double QuadratureRule::integrate(const std::function<double(double)>& f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
  return s;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw DomainError("gauss_legendre: n must be >= 1");
  if (!(a < b)) throw DomainError("gauss_legendre: require a < b");
  QuadratureRule q;
  q.nodes.resize(n);
  q.weights.resize(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    q.nodes[n - 1 - i] = mid + half * x;
    q.weights[n - 1 - i] = half * 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return q;
}

namespace {

void check_finite(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) throw DomainError("dense_eig: matrix must be square");
  if (!A.allFinite()) throw NumericalError("dense_eig: matrix contains non-finite entries");
}

}  // namespace

std::vector<EigenPair> dense_eig(const Eigen::MatrixXd& A) {
  check_finite(A);
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, true);
  if (es.info() != Eigen::Success) {
    std::ostringstream os;
    os << "dense_eig: no convergence for " << A.rows() << "x" << A.cols()
       << " matrix, ||A||_F = " << A.norm();
    throw NumericalError(os.str());
  }
  const Eigen::VectorXcd vals = es.eigenvalues();
  const Eigen::MatrixXcd vecs = es.eigenvectors();
  const Eigen::MatrixXcd Ac = A.cast<std::complex<double>>();
  const double normA = std::max(A.norm(), 1e-300);
  std::vector<EigenPair> out;
  out.reserve(vals.size());
  for (Eigen::Index k = 0; k < vals.size(); ++k) {
    Eigen::VectorXcd v = vecs.col(k);
    const double res = (Ac * v - vals(k) * v).norm();
    if (res > 1e-8 * normA * v.norm()) {
      std::ostringstream os;
      os << "dense_eig: eigenpair residual " << res / (normA * v.norm())
         << " exceeds 1e-8 for eigenvalue " << vals(k);
      throw NumericalError(os.str());
    }
    out.push_back({vals(k), std::move(v)});
  }
  return out;
}

Eigen::VectorXcd dense_eigenvalues(const Eigen::MatrixXd& A) {
  check_finite(A);
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
  if (es.info() != Eigen::Success) {
    std::ostringstream os;
    os << "dense_eigenvalues: no convergence for " << A.rows() << "x" << A.cols() << " matrix";
    throw NumericalError(os.str());
  }
  return es.eigenvalues();
}

void chebyshev(int N, Eigen::VectorXd& x, Eigen::MatrixXd& D) {
  x.resize(N + 1);
  D.setZero(N + 1, N + 1);
  if (N == 0) {
    x(0) = 1.0;
    return;
  }
  for (int j = 0; j <= N; ++j) x(j) = std::cos(std::numbers::pi * j / N);
  // sin form of differences avoids cancellation near the endpoints
  auto diff = [N](int i, int j) {
    return 2.0 * std::sin(std::numbers::pi * (j + i) / (2.0 * N)) *
           std::sin(std::numbers::pi * (j - i) / (2.0 * N));
  };
  auto c = [N](int i) { return ((i == 0 || i == N) ? 2.0 : 1.0) * ((i % 2) ? -1.0 : 1.0); };
  for (int i = 0; i <= N; ++i) {
    for (int j = 0; j <= N; ++j) {
      if (i != j) D(i, j) = c(i) / c(j) / diff(i, j);
    }
  }
  // negative-sum trick for the diagonal
  for (int i = 0; i <= N; ++i) {
    double s = 0.0;
    for (int j = 0; j <= N; ++j)
      if (j != i) s += D(i, j);
    D(i, i) = -s;
  }
}

CollocationGrid CollocationGrid::make(double R, int n_points, int parity) {
  if (!(R > 0.0)) throw DomainError("CollocationGrid: R must be positive");
  if (n_points < 2) throw DomainError("CollocationGrid: need at least 2 points");
  if (parity != 1 && parity != -1) throw DomainError("CollocationGrid: parity must be +1 or -1");
  const int N = 2 * n_points - 1;  // odd N: N+1 = 2 n_points nodes, none at 0
  Eigen::VectorXd x;
  Eigen::MatrixXd D;
  chebyshev(N, x, D);
  const Eigen::MatrixXd DD = D * D;
  CollocationGrid g;
  g.R = R;
  g.parity = parity;
  g.r = R * x.head(n_points);
  g.D1.resize(n_points, n_points);
  g.D2.resize(n_points, n_points);
  // Fold: f(x_{N-k}) = f(-x_k) = parity * f(x_k).
  for (int i = 0; i < n_points; ++i) {
    for (int k = 0; k < n_points; ++k) {
      g.D1(i, k) = (D(i, k) + parity * D(i, N - k)) / R;
      g.D2(i, k) = (DD(i, k) + parity * DD(i, N - k)) / (R * R);
    }
  }
  return g;
}

}  // namespace motility
