#include "motility/traveling_wave.hpp"

#include "motility/bifurcation.hpp"
#include "motility/io.hpp"
#include "motility/numerics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace motility {

using std::numbers::pi;

namespace {

// Unknowns z = [cos coefficients a(i,k) of Φ per ring (i*K + k), boundary
// modes 0..K−1, Λ], K = n_theta/2 (Nyquist excluded). Equations: cos
// projections of the PDE defect on rings i ≥ 1, of the Neumann defect and of
// the Young–Laplace defect on the boundary ring, and the centering row.
struct TwSystem {
  const ModelParams& params;
  double R0;
  double V;
  std::shared_ptr<const DiskGrid> grid;
  Eigen::MatrixXd Bc, Qc;  // one-ring cos basis / projection
  Eigen::MatrixXd P;       // coefficients -> nodal values on all rings
  int K, nphi, n;

  TwSystem(const ModelParams& p, double R0_, double V_, std::shared_ptr<const DiskGrid> g)
      : params(p), R0(R0_), V(V_), grid(std::move(g)) {
    K = grid->n_modes(false);
    nphi = grid->n_s * K;
    n = nphi + K + 1;
    Bc = grid->angular_basis(false);
    Qc = grid->angular_projection(false);
    P = ring_kron(Bc, grid->n_s);
  }

  BoundaryCurve curve(const Eigen::VectorXd& z) const {
    BoundaryCurve c;
    c.R0 = R0;
    c.modes.assign(z.data() + nphi, z.data() + nphi + K);
    return c;
  }

  Eigen::VectorXd ring(const Eigen::VectorXd& f, int i) const { return f.segment(i * grid->n_theta, grid->n_theta); }

  Eigen::VectorXd residual(const Eigen::VectorXd& z) const {
    const BoundaryCurve c = curve(z);
    const MappedGeometry g = MappedGeometry::make(*grid, c);
    const Eigen::VectorXd phi = P * z.head(nphi);
    const double Lam = z(n - 1);
    const Eigen::VectorXd e = (phi - V * g.x).array().exp();
    const Eigen::VectorXd px = g.dx(phi), py = g.dy(phi);
    const Eigen::VectorXd pde = g.dx(px) + g.dy(py) + Lam * e - params.zeta * phi;
    const double ps = p_star(params, c.area());
    Eigen::VectorXd F(n);
    for (int i = 1; i < grid->n_s; ++i) F.segment(i * K, K) = Qc * ring(pde, i);
    const int nt = grid->n_theta;
    Eigen::VectorXd neu(nt), yl(nt);
    for (int j = 0; j < nt; ++j) {
      neu(j) = g.nx(j) * px(j) + g.ny(j) * py(j) - V * g.nx(j);
      yl(j) = params.zeta * phi(j) - ps + params.gamma * g.kappa(j);
    }
    F.head(K) = Qc * neu;
    F.segment(nphi, K) = Qc * yl;
    F(n - 1) = z(nphi + 1);
    return F;
  }

  // Pointwise residual (PDE at interior nodes, both boundary conditions at
  // boundary nodes) for quality checks on arbitrary grids.
  double pointwise_residual(const Eigen::VectorXd& phi, const BoundaryCurve& c, double Lam) const {
    const MappedGeometry g = MappedGeometry::make(*grid, c);
    const Eigen::VectorXd e = (phi - V * g.x).array().exp();
    const Eigen::VectorXd px = g.dx(phi), py = g.dy(phi);
    const Eigen::VectorXd pde = g.dx(px) + g.dy(py) + Lam * e - params.zeta * phi;
    const double ps = p_star(params, c.area());
    const int nt = grid->n_theta;
    double r = pde.tail(grid->size() - nt).lpNorm<Eigen::Infinity>();
    for (int j = 0; j < nt; ++j) {
      r = std::max(r, std::abs(g.nx(j) * px(j) + g.ny(j) * py(j) - V * g.nx(j)));
      r = std::max(r, std::abs(params.zeta * phi(j) - ps + params.gamma * g.kappa(j)));
    }
    return r;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& z, double h) const {
    const BoundaryCurve c = curve(z);
    const MappedGeometry g = MappedGeometry::make(*grid, c);
    const Eigen::VectorXd phi = P * z.head(nphi);
    const double Lam = z(n - 1);
    const Eigen::VectorXd e = (phi - V * g.x).array().exp();
    const Eigen::MatrixXd Dx = g.Dx(), Dy = g.Dy();
    const Eigen::MatrixXd DxP = Dx * P, DyP = Dy * P;
    Eigen::MatrixXd G = Dx * DxP + Dy * DyP;
    G += (Lam * e.array() - params.zeta).matrix().asDiagonal() * P;
    const int nt = grid->n_theta;
    Eigen::MatrixXd Jm = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < grid->n_s; ++i) {
      Jm.block(i * K, 0, K, nphi) = Qc * G.middleRows(i * nt, nt);
      Jm.block(i * K, n - 1, K, 1) = Qc * ring(e, i);
    }
    Jm.block(0, 0, K, nphi) =
        Qc * (g.nx.asDiagonal() * DxP.topRows(nt) + g.ny.asDiagonal() * DyP.topRows(nt));
    Jm.block(nphi, 0, K, nphi) = params.zeta * Qc * P.topRows(nt);
    for (int k = 0; k < K; ++k) {
      Eigen::VectorXd zp = z, zm = z;
      zp(nphi + k) += h;
      zm(nphi + k) -= h;
      Jm.col(nphi + k) = (residual(zp) - residual(zm)) / (2.0 * h);
    }
    return Jm;
  }

  Eigen::VectorXd pack(const TravelingWave& tw) const {
    Eigen::VectorXd z(n);
    for (int i = 0; i < grid->n_s; ++i) z.segment(i * K, K) = Qc * ring(tw.phi, i);
    for (int k = 0; k < K; ++k) z(nphi + k) = k < static_cast<int>(tw.rho_modes.size()) ? tw.rho_modes[k] : 0.0;
    z(n - 1) = tw.Lambda;
    return z;
  }

  TravelingWave unpack(const Eigen::VectorXd& z, const TwSettings& settings) const {
    TravelingWave tw;
    tw.V = V;
    tw.R0 = R0;
    tw.grid = grid;
    tw.params = params;
    tw.settings = settings;
    tw.Lambda = z(n - 1);
    tw.rho_modes.assign(z.data() + nphi, z.data() + nphi + K);
    tw.phi = P * z.head(nphi);
    const MappedGeometry g = tw.geometry();
    tw.area = g.curve.area();
    const Eigen::VectorXd e = (tw.phi - V * g.x).array().exp();
    tw.M = tw.Lambda * g.area_weights.dot(e);
    return tw;
  }
};

std::shared_ptr<const DiskGrid> make_grid(const TwSettings& s) {
  return std::make_shared<const DiskGrid>(DiskGrid::make(s.n_s, s.n_theta));
}

}  // namespace

TravelingWave radial_wave(const ModelParams& params, double R0, const TwSettings& settings) {
  const RadialState st = radial_state(params, R0);
  auto grid = make_grid(settings);
  TwSystem sys(params, R0, 0.0, grid);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(sys.n);
  for (int i = 0; i < grid->n_s; ++i) z(i * sys.K) = st.phi0;  // constant = mode-0 coefficient
  z(sys.n - 1) = st.m0 * std::exp(-st.phi0);
  TravelingWave tw = sys.unpack(z, settings);
  tw.residual_norm = sys.residual(z).lpNorm<Eigen::Infinity>();
  return tw;
}

namespace {

TravelingWave linear_guess(const ModelParams& params, double R0, double V, const TwSettings& settings,
                           std::shared_ptr<const DiskGrid> grid) {
  const RadialState st = radial_state(params, R0);
  TravelingWave tw;
  tw.V = V;
  tw.R0 = R0;
  tw.grid = grid;
  tw.Lambda = st.m0 * std::exp(-st.phi0);
  tw.rho_modes.assign(grid->n_modes(false), 0.0);
  tw.phi.resize(grid->size());
  for (int i = 0; i < grid->n_s; ++i)
    for (int j = 0; j < grid->n_theta; ++j)
      tw.phi(grid->index(i, j)) =
          st.phi0 + V * phi_d(grid->s(i) * R0, R0, st.m0, params.zeta) * std::cos(grid->theta(j));
  tw.settings = settings;
  return tw;
}

}  // namespace

TravelingWave solve_tw(const ModelParams& params, double R0, double V, const TravelingWave* initial_guess,
                       const TwSettings& settings) {
  if (V == 0.0) return radial_wave(params, R0, settings);
  std::shared_ptr<const DiskGrid> grid;
  if (initial_guess && initial_guess->grid && initial_guess->grid->n_s == settings.n_s &&
      initial_guess->grid->n_theta == settings.n_theta)
    grid = initial_guess->grid;
  else
    grid = make_grid(settings);
  TwSystem sys(params, R0, V, grid);
  const TravelingWave guess =
      (initial_guess && initial_guess->grid == grid) ? *initial_guess : linear_guess(params, R0, V, settings, grid);
  Eigen::VectorXd z = sys.pack(guess);
  Eigen::VectorXd F;
  double fnorm;
  try {
    F = sys.residual(z);
    fnorm = F.lpNorm<Eigen::Infinity>();
  } catch (const DomainError& e) {
    throw NumericalError(std::string("traveling wave: invalid initial guess: ") + e.what());
  }
  int it = 0;
  while (!(fnorm <= settings.newton_tol)) {
    if (it >= settings.max_iter || !std::isfinite(fnorm)) {
      std::ostringstream os;
      os << "traveling wave Newton iteration did not converge at V = " << V << " (residual " << fnorm << " after "
         << it << " iterations)";
      throw NumericalError(os.str());
    }
    const Eigen::MatrixXd Jm = sys.jacobian(z, settings.jac_step);
    const Eigen::VectorXd dz = Jm.partialPivLu().solve(-F);
    // backtracking on the max-norm residual
    double t = 1.0;
    Eigen::VectorXd z_new;
    double f_new = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 8; ++k) {
      z_new = z + t * dz;
      try {
        const Eigen::VectorXd Fn = sys.residual(z_new);
        f_new = Fn.lpNorm<Eigen::Infinity>();
        if (f_new < fnorm || fnorm <= 10.0 * settings.newton_tol) {
          F = Fn;
          break;
        }
      } catch (const DomainError&) {
        f_new = std::numeric_limits<double>::infinity();
      }
      t *= 0.5;
    }
    if (!std::isfinite(f_new)) {
      std::ostringstream os;
      os << "traveling wave Newton step left the admissible range at V = " << V;
      throw NumericalError(os.str());
    }
    z = z_new;
    fnorm = f_new;
    ++it;
    if (t < 1.0 && it >= settings.max_iter) break;
  }
  TravelingWave tw = sys.unpack(z, settings);
  tw.residual_norm = fnorm;
  tw.newton_iters = it;
  const Eigen::VectorXd m = myosin_field(tw);
  if (m.minCoeff() <= 0.0) throw NumericalError("traveling wave: nonpositive myosin density");
  return tw;
}

namespace {

// Extrapolated guess from up to three previous equally informative waves.
TravelingWave extrapolate(const std::vector<const TravelingWave*>& prev, double V) {
  TravelingWave g = *prev.back();
  if (prev.size() < 2) {
    return g;
  }
  // Lagrange extrapolation in V over the last (up to 3) points
  const std::size_t m = std::min<std::size_t>(3, prev.size());
  std::vector<const TravelingWave*> pts(prev.end() - m, prev.end());
  std::vector<double> w(m, 1.0);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (a != b) w[a] *= (V - pts[b]->V) / (pts[a]->V - pts[b]->V);
  g.phi.setZero();
  g.Lambda = 0.0;
  std::fill(g.rho_modes.begin(), g.rho_modes.end(), 0.0);
  for (std::size_t a = 0; a < m; ++a) {
    g.phi += w[a] * pts[a]->phi;
    g.Lambda += w[a] * pts[a]->Lambda;
    for (std::size_t k = 0; k < g.rho_modes.size(); ++k) g.rho_modes[k] += w[a] * pts[a]->rho_modes[k];
  }
  g.V = V;
  return g;
}

}  // namespace

Branch continue_branch(const ModelParams& params, double R0, double V_max, int steps, const TwSettings& settings) {
  if (steps < 1) throw DomainError("continue_branch: steps must be >= 1");
  Branch br;
  br.params = params;
  br.R0 = R0;
  br.waves.push_back(radial_wave(params, R0, settings));
  const double h = V_max / steps;
  std::vector<TravelingWave> seeds;  // every converged wave, including bisection points
  seeds.push_back(br.waves.front());

  std::function<TravelingWave(double, int)> reach = [&](double V, int depth) -> TravelingWave {
    std::vector<const TravelingWave*> prev;
    for (const auto& s : seeds) prev.push_back(&s);
    try {
      if (seeds.size() == 1) {
        TravelingWave lg = solve_tw(params, R0, V, nullptr, settings);
        return lg;
      }
      const TravelingWave guess = extrapolate(prev, V);
      return solve_tw(params, R0, V, &guess, settings);
    } catch (const NumericalError&) {
      if (depth >= 4) throw;
      const double mid = 0.5 * (seeds.back().V + V);
      seeds.push_back(reach(mid, depth + 1));
      return reach(V, depth + 1);
    }
  };

  for (int k = 1; k <= steps; ++k) {
    const double V = k * h;
    TravelingWave tw;
    try {
      tw = reach(V, 0);
    } catch (const NumericalError& e) {
      std::ostringstream os;
      os << "branch continuation failed at V = " << V << ": " << e.what();
      throw NumericalError(os.str());
    }
    seeds.push_back(tw);
    br.waves.push_back(tw);
  }
  return br;
}

double tw_residual(const TravelingWave& tw) {
  TwSystem sys(tw.params, tw.R0, tw.V, tw.grid);
  return sys.pointwise_residual(tw.phi, tw.curve(), tw.Lambda);
}

double tw_residual_refined(const TravelingWave& tw, int n_s, int n_theta) {
  auto fine = make_grid({n_s, n_theta});
  if (fine->n_modes(false) < static_cast<int>(tw.rho_modes.size()))
    throw DomainError("tw_residual_refined: target grid is coarser than the solution grid");
  TwSystem sys(tw.params, tw.R0, tw.V, fine);
  Eigen::VectorXd phi(fine->size());
  for (int i = 0; i < fine->n_s; ++i)
    for (int j = 0; j < fine->n_theta; ++j)
      phi(fine->index(i, j)) = tw.grid->interpolate(tw.phi, fine->s(i), fine->theta(j));
  return sys.pointwise_residual(phi, tw.curve(), tw.Lambda);
}

Eigen::VectorXd myosin_field(const TravelingWave& tw) {
  const MappedGeometry g = tw.geometry();
  return tw.Lambda * (tw.phi - tw.V * g.x).array().exp().matrix();
}

double MassDerivatives::M_prime_at(double v) const {
  if (V.empty()) throw DomainError("M_prime_at: empty table");
  const double a = std::abs(v), sgn = v < 0 ? -1.0 : 1.0;
  for (std::size_t k = 0; k + 1 < V.size(); ++k) {
    if (a >= V[k] - 1e-15 && a <= V[k + 1] + 1e-15) {
      const double t = (a - V[k]) / (V[k + 1] - V[k]);
      return sgn * ((1 - t) * M_prime[k] + t * M_prime[k + 1]);
    }
  }
  throw DomainError("M_prime_at: velocity outside the branch");
}

MassDerivatives mass_derivatives(const Branch& branch) {
  const auto& w = branch.waves;
  if (w.size() < 5 || w.front().V != 0.0) throw DomainError("mass_derivatives: need >= 5 branch points starting at V = 0");
  const std::size_t n = w.size();
  const double h = w[1].V - w[0].V;
  MassDerivatives md;
  for (std::size_t k = 0; k < n; ++k) {
    md.V.push_back(w[k].V);
    double d;
    if (k == 0) {
      d = 0.0;  // M is even in V: M(−h) = M(h)
    } else if (k + 1 < n) {
      d = (w[k + 1].M - w[k - 1].M) / (2.0 * h);
    } else {
      d = (3.0 * w[k].M - 4.0 * w[k - 1].M + w[k - 2].M) / (2.0 * h);
    }
    md.M_prime.push_back(d);
  }
  // M(V) = a + b V² + c V⁴ fitted on the first five points
  Eigen::MatrixXd A(5, 3);
  Eigen::VectorXd y(5);
  for (int k = 0; k < 5; ++k) {
    const double v2 = w[k].V * w[k].V;
    A(k, 0) = 1.0;
    A(k, 1) = v2;
    A(k, 2) = v2 * v2;
    y(k) = w[k].M;
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
  md.M_dd0 = 2.0 * c(1);
  md.fit_residual = (A * c - y).norm();
  return md;
}

Expansion extract_expansion(const Branch& branch) {
  std::vector<const TravelingWave*> pts;
  for (const auto& w : branch.waves)
    if (w.V > 0.0) pts.push_back(&w);
  if (pts.size() < 3) throw DomainError("extract_expansion: need at least three nonzero velocities");
  const double M0 = branch.waves.front().M;
  auto coefficient = [&](auto value_of) {
    // f(V)/V² = f0 + c1 V² + c2 V⁴ through the three smallest velocities,
    // error estimated against the two-point extrapolation.
    Eigen::Matrix3d A;
    Eigen::Vector3d y;
    for (int k = 0; k < 3; ++k) {
      const double v2 = pts[k]->V * pts[k]->V;
      A(k, 0) = 1.0;
      A(k, 1) = v2;
      A(k, 2) = v2 * v2;
      y(k) = value_of(*pts[k]) / v2;
    }
    const Eigen::Vector3d c = A.fullPivLu().solve(y);
    const double v1 = A(0, 1), v2b = A(1, 1);
    const double two_point = (v2b * y(0) - v1 * y(1)) / (v2b - v1);
    return ExpansionCoefficient{c(0), std::abs(c(0) - two_point)};
  };
  Expansion ex;
  ex.rho_10 = coefficient([](const TravelingWave& t) { return t.rho_modes.at(0); });
  ex.rho_12 = coefficient([](const TravelingWave& t) { return t.rho_modes.at(2); });
  ex.rho_11 = coefficient([](const TravelingWave& t) { return t.rho_modes.at(1); });
  ex.M_1 = coefficient([&](const TravelingWave& t) { return t.M - M0; });
  for (const auto* c : {&ex.rho_10, &ex.rho_12, &ex.M_1})
    if (!(c->error_estimate <= 0.05 * std::abs(c->value) + 1e-12)) ex.converged = false;
  return ex;
}

void write_shape_csv(const TravelingWave& tw, const std::string& path, int samples) {
  const BoundaryCurve c = tw.curve();
  CsvWriter out(path, {"phi", "rho", "x", "y"});
  for (int k = 0; k < samples; ++k) {
    const double th = 2.0 * pi * k / samples, r = c.r(th);
    out.row({th, r - tw.R0, r * std::cos(th), r * std::sin(th)});
  }
}

void write_myosin_csv(const TravelingWave& tw, const std::string& path) {
  const MappedGeometry g = tw.geometry();
  const Eigen::VectorXd m = myosin_field(tw);
  CsvWriter out(path, {"x", "y", "m"});
  for (int k = 0; k < tw.grid->size(); ++k) out.row({g.x(k), g.y(k), m(k)});
}

void write_branch_csv(const Branch& branch, const std::string& path) {
  CsvWriter out(path, {"V", "M", "Lambda", "rho0", "rho2", "area", "newton_iters", "residual"});
  for (const auto& w : branch.waves)
    out.row({w.V, w.M, w.Lambda, w.rho_modes.at(0), w.rho_modes.at(2), w.area, static_cast<double>(w.newton_iters),
             w.residual_norm});
}

}  // namespace motility
