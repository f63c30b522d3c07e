#include "motility/tw_spectrum.hpp"

#include "motility/bifurcation.hpp"
#include "motility/io.hpp"
#include "motility/numerics.hpp"
#include "motility/parallel.hpp"

#include "json_text.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace motility {

namespace {

constexpr double pi = std::numbers::pi;

bool is_full(Subspace s) { return s == Subspace::Full; }

// Rows of the flattened grid belonging to rings first..n_s−1.
Eigen::MatrixXd ring_rows(const Eigen::MatrixXd& A, const DiskGrid& G, int first) {
  return A.middleRows(first * G.n_theta, (G.n_s - first) * G.n_theta);
}

}  // namespace

const char* to_string(Subspace s) { return is_full(s) ? "full" : "even"; }

Eigen::VectorXd LinearizedOperator::from_fields(const Eigen::VectorXd& m_nodes,
                                                const Eigen::VectorXd& rho_boundary) const {
  const DiskGrid& G = *tw.grid;
  const Eigen::MatrixXd Q = G.angular_projection(is_full(subspace));
  const int nm = static_cast<int>(Q.rows());
  Eigen::VectorXd u(size());
  for (int i = 1; i < G.n_s; ++i) u.segment((i - 1) * nm, nm) = Q * m_nodes.segment(i * G.n_theta, G.n_theta);
  u.tail(n_rho) = Q * rho_boundary;
  return u;
}

Eigen::MatrixXd LinearizedOperator::adjoint() const {
  const Eigen::LLT<Eigen::MatrixXd> llt(pairing);
  return llt.solve(matrix.transpose() * pairing);
}

LinearizedOperator assemble_A(const TravelingWave& tw, Subspace subspace) {
  if (!tw.grid) throw DomainError("assemble_A: traveling wave has no grid");
  const DiskGrid& G = *tw.grid;
  const ModelParams& p = tw.params;
  const MappedGeometry g = tw.geometry();
  const bool full = is_full(subspace);
  const int nt = G.n_theta, ns = G.n_s, N = G.size();
  const Eigen::MatrixXd B = G.angular_basis(full);
  const Eigen::MatrixXd Q = G.angular_projection(full);
  const int nm = static_cast<int>(B.cols());
  const int n_int = (ns - 1) * nm;  // m unknowns
  const int n = n_int + nm;         // + ρ unknowns
  const double V = tw.V;

  const Eigen::MatrixXd P = ring_kron(B, ns);  // all-ring coefficients -> nodes
  const Eigen::MatrixXd Qint = ring_kron(Q, ns - 1);
  const Eigen::MatrixXd Dx = g.Dx(), Dy = g.Dy();
  const Eigen::MatrixXd Lap = Dx * Dx + Dy * Dy;

  const Eigen::VectorXd mtw = myosin_field(tw);
  const Eigen::VectorXd Phx = Dx * tw.phi, Phy = Dy * tw.phi;
  const Eigen::VectorXd Phxx = Dx * Phx, Phxy = Dy * Phx, Phyy = Dy * Phy;

  // boundary geometry (ring 0 holds nodes i = 0, j = 0..nt−1)
  const Eigen::VectorXd nx = g.nx, ny = g.ny, T = g.arc;
  Eigen::VectorXd Phnn(nt), Phtau(nt), mb(nt), arc_w(nt);
  for (int j = 0; j < nt; ++j) {
    Phnn(j) = nx(j) * nx(j) * Phxx(j) + 2.0 * nx(j) * ny(j) * Phxy(j) + ny(j) * ny(j) * Phyy(j);
    Phtau(j) = -ny(j) * Phx(j) + nx(j) * Phy(j);
    mb(j) = mtw(j);
    arc_w(j) = 2.0 * pi / nt * T(j);
  }
  const Eigen::MatrixXd Darc = T.cwiseInverse().asDiagonal() * G.Dth1;  // d/ds along the boundary
  // ρ (modal) -> Φ_νν ρ − (Φ_τ + Vν_y) ρ' at the boundary nodes
  const Eigen::MatrixXd Grho =
      Phnn.asDiagonal() * B - (Phtau + V * ny).asDiagonal() * (Darc * B);

  // Myosin Neumann closure on ring 0: ∂_ν m + m_tw Grho ρ = 0, solved for the
  // boundary-ring coefficients.
  const Eigen::MatrixXd Nn = Q * ((nx.asDiagonal() * Dx.topRows(nt) + ny.asDiagonal() * Dy.topRows(nt)) * P);
  const Eigen::MatrixXd N0 = Nn.leftCols(nm), Nint = Nn.rightCols(n_int);
  const Eigen::MatrixXd Srho = Q * (mb.asDiagonal() * Grho);
  const Eigen::PartialPivLU<Eigen::MatrixXd> N0lu(N0);
  if (!(std::abs(N0lu.determinant()) > 0.0)) throw NumericalError("assemble_A: singular myosin boundary closure");
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(ns * nm, n);
  E.topLeftCorner(nm, n_int) = -N0lu.solve(Nint);
  E.topRightCorner(nm, nm) = -N0lu.solve(Srho);
  E.bottomLeftCorner(n_int, n_int).setIdentity();
  const Eigen::MatrixXd Mmap = P * E;

  // Potential: Δφ − ζφ = −m inside, Dirichlet data from the linearized Young–Laplace law.
  const double pstar_prime = p_star_prime(p);
  Eigen::MatrixXd Gphi = (pstar_prime / p.zeta) * Eigen::VectorXd::Ones(nt) * (arc_w.transpose() * B);
  Gphi += (p.gamma / p.zeta) * (Darc * (Darc * B) + g.kappa.cwiseAbs2().asDiagonal() * B);
  Gphi -= V * (nx.asDiagonal() * B);
  Eigen::MatrixXd Lphi(ns * nm, ns * nm);
  Lphi.topRows(nm) = Q * P.topRows(nt);
  const Eigen::MatrixXd Hz = Lap - p.zeta * Eigen::MatrixXd::Identity(N, N);
  Lphi.bottomRows(n_int) = Qint * ring_rows(Hz * P, G, 1);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(ns * nm, n);
  rhs.topRightCorner(nm, nm) = Q * Gphi;
  rhs.bottomRows(n_int) = -Qint * ring_rows(Mmap, G, 1);
  const Eigen::PartialPivLU<Eigen::MatrixXd> Llu(Lphi);
  if (!(std::abs(Llu.determinant()) > 0.0)) throw NumericalError("assemble_A: singular potential elimination");
  const Eigen::MatrixXd Phimap = P * Llu.solve(rhs);

  // m-equation: Δm + V∂_x m − div(m_tw ∇φ) − div(m ∇Φ)
  Eigen::MatrixXd Am = Lap * Mmap + V * (Dx * Mmap);
  Am -= Dx * (mtw.asDiagonal() * (Dx * Phimap)) + Dy * (mtw.asDiagonal() * (Dy * Phimap));
  Am -= Dx * (Phx.asDiagonal() * Mmap) + Dy * (Phy.asDiagonal() * Mmap);

  LinearizedOperator op;
  op.tw = tw;
  op.subspace = subspace;
  op.n_m = n_int;
  op.n_rho = nm;
  op.matrix.resize(n, n);
  op.matrix.topRows(n_int) = Qint * ring_rows(Am, G, 1);
  Eigen::MatrixXd Arho = (nx.asDiagonal() * (Dx * Phimap).topRows(nt) + ny.asDiagonal() * (Dy * Phimap).topRows(nt));
  Arho.rightCols(nm) += Grho;
  op.matrix.bottomRows(nm) = Q * Arho;
  op.to_m_nodes = Mmap;
  op.to_phi_nodes = Phimap;

  // pairing: interior quadrature for m, arc length for ρ
  const Eigen::MatrixXd Pint = ring_kron(B, ns - 1);
  const Eigen::VectorXd wint = g.area_weights_interior.tail(N - nt);
  op.pairing = Eigen::MatrixXd::Zero(n, n);
  op.pairing.topLeftCorner(n_int, n_int) = Pint.transpose() * wint.asDiagonal() * Pint;
  op.pairing.bottomRightCorner(nm, nm) = B.transpose() * arc_w.asDiagonal() * B;
  return op;
}

namespace {

// Eulerian V-derivative of the branch at tw by centered differences: myosin at
// fixed physical points and the normal velocity of the boundary.
void branch_derivative(const TravelingWave& tw, double h, Eigen::VectorXd& dm, Eigen::VectorXd& drho) {
  const DiskGrid& G = *tw.grid;
  const MappedGeometry g = tw.geometry();
  const int nt = G.n_theta;
  const Eigen::VectorXd mtw = myosin_field(tw);
  const TravelingWave plus = solve_tw(tw.params, tw.R0, tw.V + h, &tw, tw.settings);
  const TravelingWave minus = solve_tw(tw.params, tw.R0, tw.V - h, &tw, tw.settings);
  if (plus.phi.size() != tw.phi.size() || minus.phi.size() != tw.phi.size())
    throw NumericalError("kernel_vectors: grid mismatch");
  std::vector<double> dmodes(tw.rho_modes.size());
  for (std::size_t k = 0; k < dmodes.size(); ++k) dmodes[k] = (plus.rho_modes[k] - minus.rho_modes[k]) / (2.0 * h);
  Eigen::VectorXd dX, dY;
  g.node_displacement(dmodes, dX, dY);
  dm = (myosin_field(plus) - myosin_field(minus)) / (2.0 * h) - g.dx(mtw).cwiseProduct(dX) -
       g.dy(mtw).cwiseProduct(dY);
  drho.resize(nt);
  const BoundaryCurve c = tw.curve();
  for (int j = 0; j < nt; ++j) {
    double dr = 0.0;
    for (std::size_t k = 0; k < dmodes.size(); ++k) dr += dmodes[k] * std::cos(k * G.theta(j));
    drho(j) = dr * c.r(G.theta(j)) / g.arc(j);
  }
}

}  // namespace

KernelVectors kernel_vectors(const LinearizedOperator& op, double fd_step, bool richardson) {
  const TravelingWave& tw = op.tw;
  const DiskGrid& G = *tw.grid;
  const MappedGeometry g = tw.geometry();
  const int nt = G.n_theta;
  const Eigen::VectorXd mtw = myosin_field(tw);
  const Eigen::VectorXd mx = g.dx(mtw), my = g.dy(mtw);
  const Eigen::VectorXd xb = g.x.head(nt), yb = g.y.head(nt);
  KernelVectors w;
  w.fd_step = fd_step;
  w.W1 = op.from_fields(-mx, g.nx);
  if (is_full(op.subspace)) {
    w.W3 = op.from_fields(-my, g.ny);
    if (tw.V != 0.0) {
      const Eigen::VectorXd mrot = (g.y.cwiseProduct(mx) - g.x.cwiseProduct(my)) / tw.V;
      const Eigen::VectorXd rrot = (-yb.cwiseProduct(g.nx) + xb.cwiseProduct(g.ny)) / tw.V;
      w.W4 = op.from_fields(mrot, rrot);
    }
  }
  if (fd_step > 0.0) {
    Eigen::VectorXd dm, drho;
    branch_derivative(tw, fd_step, dm, drho);
    if (richardson) {
      Eigen::VectorXd dm2, drho2;
      branch_derivative(tw, 0.5 * fd_step, dm2, drho2);
      dm = (4.0 * dm2 - dm) / 3.0;
      drho = (4.0 * drho2 - drho) / 3.0;
    }
    w.W2 = op.from_fields(dm, drho);
  }
  return w;
}

KernelResiduals kernel_residuals(const LinearizedOperator& op, const KernelVectors& w) {
  KernelResiduals r;
  r.fd_step = w.fd_step;
  const Eigen::MatrixXd& A = op.matrix;
  r.W1 = op.norm(A * w.W1) / op.norm(w.W1);
  if (w.W2.size()) {
    r.has_W2 = true;
    r.W2 = op.norm(A * w.W2 - w.W1) / op.norm(w.W2);
  }
  if (w.W3.size()) {
    r.has_W3 = true;
    r.W3 = op.norm(A * w.W3) / op.norm(w.W3);
  }
  if (w.W4.size()) {
    r.has_W4 = true;
    r.W4 = op.norm(A * w.W4 - w.W3) / op.norm(w.W4);
  }
  return r;
}

KernelResiduals kernel_residuals(const LinearizedOperator& op, double fd_step, bool richardson) {
  return kernel_residuals(op, kernel_vectors(op, fd_step, richardson));
}

DeltaChoice choose_delta(const TravelingWave& radial, Subspace subspace, double zero_tol) {
  if (radial.V != 0.0) throw DomainError("choose_delta: expects the V = 0 wave");
  const LinearizedOperator op = assemble_A(radial, subspace);
  const Eigen::VectorXcd ev = dense_eigenvalues(op.matrix);
  DeltaChoice d;
  d.zero_tol = zero_tol;
  double smallest = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    const double a = std::abs(ev(k));
    if (a <= zero_tol)
      ++d.small_count;
    else
      smallest = std::min(smallest, a);
  }
  d.delta = 0.5 * smallest;
  return d;
}

AdjointConstants adjoint_constants(double R0, const ModelParams& params) {
  const RadialState st = radial_state(params, R0);
  const RadialIntegrals I = radial_integrals(R0, params);
  AdjointConstants c;
  const double R = R0, m0 = st.m0, z = params.zeta, g = params.gamma, pp = p_star_prime(params);
  const double R2 = R * R;
  c.R0 = R;
  c.m0 = m0;
  c.dE_dM = dE_dM_at_R0(R0, params);
  c.mass_integral = I.mass_integral;
  c.gradient_integral = I.gradient_integral;
  c.k0 = m0 * c.dE_dM * I.mass_integral;
  // Solvability of the order-V adjoint problem against the n = 0 kernel vector
  // (γ/R² + 2πR p★', 1):  s(πR²k − G) + πR(2m0 k + m0 − m0²R² + ζ) = 0.
  const double s = g / R2 + 2.0 * pi * R * pp;
  c.k0_solvability =
      (s * I.gradient_integral - pi * R * (m0 - m0 * m0 * R2 + z)) / (pi * R2 * s + 2.0 * pi * R * m0);
  c.A_const = R2 * z / (6.0 * g) * (z - m0 - m0 * m0 * R2);
  c.B_const = 0.5 * z * (2.0 * c.k0 * m0 + m0 - m0 * m0 * R2 + z) / (-s);
  const double A = c.A_const, B = c.B_const;
  c.bracket_nu2 = (m0 * m0 * R2 - m0) + 2.0 * m0 - z + 6.0 * g * A / (z * R2);
  // Constant-in-φ coefficient of the O(V) defect. The boundary integral enters
  // as −(p★'/ζ)∮v ds and the flux term as −k Λe, giving + signs on the last two
  // terms.
  c.bracket_const = m0 + 3.0 * g * A / (z * R2) + g * B / (z * R2) + 2.0 * pi * R * pp * B / z + m0 * c.k0;
  c.bracket_const_as_printed =
      m0 + 3.0 * g * A / (z * R2) + g * B / (z * R2) - 2.0 * pi * R * pp * B / z - m0 * c.k0;
  return c;
}

AlphaResult alpha_of_lambda_hat(double lambda_hat, double R0, const ModelParams& params) {
  const RadialState st = radial_state(params, R0);
  const RadialIntegrals I = radial_integrals(R0, params);
  const double R = R0, m0 = st.m0, z = params.zeta;
  const double s = params.gamma / (R * R) + 2.0 * pi * R * p_star_prime(params);
  AlphaResult a;
  a.bracket = -s * I.gradient_integral - pi * R * (m0 * m0 * R * R - m0 - z);
  a.bracket_via_F_prime = pi * z * R * transversality(R0, params).F_prime_closed;
  const double scale = std::abs(s * I.gradient_integral) + std::abs(pi * R * (m0 * m0 * R * R + m0 + z));
  a.degenerate = !(std::abs(a.bracket) > 1e-12 * scale);
  a.alpha = a.degenerate ? 0.0 : -lambda_hat * lambda_hat * m0 * I.mass_integral / a.bracket;
  return a;
}

double asymptotic_lambda(double V, double dE_dM, double M_prime_V) { return -dE_dM * V * M_prime_V; }

namespace {

// Cosine of the angle between v (complex) and the span of the columns of S
// under the pairing.
double overlap(const LinearizedOperator& op, const Eigen::VectorXcd& v, const Eigen::MatrixXd& S) {
  const Eigen::MatrixXd G = S.transpose() * op.pairing * S;
  const Eigen::MatrixXcd Sc = S.cast<std::complex<double>>();
  const Eigen::MatrixXcd Pc = op.pairing.cast<std::complex<double>>();
  const Eigen::VectorXcd b = Sc.transpose() * (Pc * v);
  const Eigen::VectorXcd c = G.cast<std::complex<double>>().ldlt().solve(b);
  const Eigen::VectorXcd proj = Sc * c;
  const double nv = std::sqrt(std::abs(v.dot(Pc * v)));
  const double np = std::sqrt(std::abs(proj.dot(Pc * proj)));
  return nv > 0 ? std::min(1.0, np / nv) : 0.0;
}

SpectrumReport report_at(const TravelingWave& tw, const SpectrumSettings& s, double delta, double fd_step,
                         double M_prime_V, double M_dd0, const AdjointConstants& constants) {
  const LinearizedOperator op = assemble_A(tw, s.subspace);
  SpectrumReport r;
  r.V = tw.V;
  r.subspace = s.subspace;
  r.delta = delta;
  r.constants = constants;
  r.expected_count = is_full(s.subspace) ? 5 : 3;

  const KernelVectors w = kernel_vectors(op, fd_step, s.richardson);
  r.kernel = kernel_residuals(op, w);
  Eigen::MatrixXd S(op.size(), is_full(s.subspace) && w.W4.size() ? 4 : (is_full(s.subspace) ? 3 : 2));
  S.col(0) = w.W1;
  S.col(1) = w.W2;
  if (is_full(s.subspace)) {
    S.col(2) = w.W3;
    if (w.W4.size()) S.col(3) = w.W4;
  }

  const std::vector<EigenPair> pairs = dense_eig(op.matrix);
  std::vector<const EigenPair*> inside;
  r.max_re_outside = -std::numeric_limits<double>::infinity();
  for (const auto& e : pairs) {
    if (std::abs(e.value) < delta)
      inside.push_back(&e);
    else
      r.max_re_outside = std::max(r.max_re_outside, e.value.real());
  }
  std::sort(inside.begin(), inside.end(), [](const EigenPair* a, const EigenPair* b) {
    const double ma = std::abs(a->value), mb = std::abs(b->value);
    if (ma != mb) return ma < mb;
    return a->value.imag() < b->value.imag();
  });
  r.delta_count = static_cast<int>(inside.size());
  r.count_ok = r.delta_count == r.expected_count;
  std::complex<double> trace = 0.0;
  for (const auto* e : inside) {
    r.eigenvalues_near_zero.push_back(e->value);
    r.structural_overlap.push_back(overlap(op, e->vector, S));
    trace += e->value;
    if (std::abs(e->value) > s.zero_tol) ++r.nonzero_count;
  }
  // the cluster is closed under conjugation, so its trace is real up to rounding
  r.lambda_V = {trace.real(), 0.0};
  if (!inside.empty()) r.lambda_V_member = inside.back()->value;
  r.lambda_asymptotic = asymptotic_lambda(tw.V, constants.dE_dM, M_prime_V);
  r.ratio = r.lambda_asymptotic != 0.0 ? r.lambda_V.real() / r.lambda_asymptotic
                                       : std::numeric_limits<double>::quiet_NaN();
  r.lambda_hat_formula = -constants.dE_dM * M_dd0;
  r.alpha = alpha_of_lambda_hat(tw.V != 0.0 ? r.lambda_V.real() / (tw.V * tw.V) : r.lambda_hat_formula, tw.R0,
                                tw.params);
  return r;
}

}  // namespace

std::vector<SpectrumReport> lambda_of_V(const Branch& branch, const SpectrumSettings& settings) {
  if (branch.waves.size() < 2 || branch.waves.front().V != 0.0)
    throw DomainError("lambda_of_V: branch must start at V = 0 and contain at least two points");
  double delta = settings.delta;
  if (!(delta > 0.0)) delta = choose_delta(branch.waves.front(), settings.subspace, settings.zero_tol).delta;
  const double h = branch.waves[1].V - branch.waves[0].V;
  const double fd_step = settings.fd_step > 0.0 ? settings.fd_step : h;
  const AdjointConstants constants = adjoint_constants(branch.R0, branch.params);
  MassDerivatives md;
  const bool have_mass = branch.waves.size() >= 5;
  if (have_mass) md = mass_derivatives(branch);
  std::vector<SpectrumReport> out(branch.waves.size());
  parallel_for(static_cast<int>(branch.waves.size()), [&](int k) {
    const TravelingWave& tw = branch.waves[k];
    const double Mp = have_mass ? md.M_prime[k] : 0.0;
    out[k] = report_at(tw, settings, delta, fd_step, Mp, have_mass ? md.M_dd0 : 0.0, constants);
  });
  return out;
}

AdjointScaling adjoint_scaling_check(const Branch& branch) {
  const AdjointConstants c = adjoint_constants(branch.R0, branch.params);
  const double limit = std::sqrt(c.mass_integral);
  std::vector<const TravelingWave*> pts;
  for (const auto& w : branch.waves)
    if (w.V > 0.0) pts.push_back(&w);
  if (pts.size() < 4) throw DomainError("adjoint_scaling_check: need at least four branch points with V > 0");
  AdjointScaling out;
  out.V.resize(pts.size());
  out.norm.resize(pts.size());
  out.limit_ratio.resize(pts.size());
  out.W1star_residual.resize(pts.size());
  out.solvability.resize(pts.size());
  parallel_for(static_cast<int>(pts.size()), [&](int k) {
    const TravelingWave& tw = *pts[k];
    const LinearizedOperator op = assemble_A(tw, Subspace::Even);
    const Eigen::MatrixXd As = op.adjoint();
    const MappedGeometry g = tw.geometry();
    const Eigen::VectorXd mtw = myosin_field(tw);
    const Eigen::VectorXd W1s = op.from_fields(Eigen::VectorXd::Ones(tw.grid->size()), mtw.head(tw.grid->n_theta));
    const Eigen::VectorXd W1 = kernel_vectors(op, 0.0).W1;
    // Bordered solve: A* W + μ P W1 = W1*, <W, W1*> = 0.
    const int n = op.size();
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + 1, n + 1);
    K.topLeftCorner(n, n) = As;
    K.topRightCorner(n, 1) = op.pairing * W1;
    K.bottomLeftCorner(1, n) = (op.pairing * W1s).transpose();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
    rhs.head(n) = W1s;
    const Eigen::VectorXd sol = K.partialPivLu().solve(rhs);
    const Eigen::VectorXd W = sol.head(n);
    Eigen::VectorXd Wm = W;
    Wm.tail(op.n_rho).setZero();
    out.V[k] = tw.V;
    out.norm[k] = op.norm(W);
    out.limit_ratio[k] = op.norm(Wm) * tw.V * std::abs(c.k0) / limit;
    // Scaled by the operator norm: the stiff, unresolved high modes break the
    // discrete divergence identity at the level of ‖A‖ times round-off/truncation,
    // while smooth vectors pair with W1* to machine precision.
    const double opnorm = Eigen::JacobiSVD<Eigen::MatrixXd>(As).singularValues()(0);
    out.W1star_residual[k] = op.norm(As * W1s) / (opnorm * op.norm(W1s));
    out.solvability[k] = sol(n);
  });
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double a = std::log(out.V[k]), b = std::log(out.norm[k]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return out;
}

std::string spectrum_report_json(const SpectrumReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["V"] = r.V;
  j["subspace"] = to_string(r.subspace);
  j["delta"] = r.delta;
  ordered_json ev = ordered_json::array();
  for (std::size_t k = 0; k < r.eigenvalues_near_zero.size(); ++k)
    ev.push_back({{"re", r.eigenvalues_near_zero[k].real()},
                  {"im", r.eigenvalues_near_zero[k].imag()},
                  {"structural_overlap", r.structural_overlap[k]}});
  j["eigenvalues_near_zero"] = ev;
  j["delta_count"] = r.delta_count;
  j["expected_count"] = r.expected_count;
  j["count_ok"] = r.count_ok;
  j["nonzero_count"] = r.nonzero_count;
  j["lambda_V"] = {{"re", r.lambda_V.real()}, {"im", r.lambda_V.imag()}};
  j["lambda_V_member"] = {{"re", r.lambda_V_member.real()}, {"im", r.lambda_V_member.imag()}};
  j["lambda_asymptotic"] = r.lambda_asymptotic;
  j["ratio"] = std::isfinite(r.ratio) ? ordered_json(r.ratio) : ordered_json(nullptr);
  j["lambda_hat_formula"] = r.lambda_hat_formula;
  j["max_re_outside"] = r.max_re_outside;
  ordered_json kr;
  kr["W1"] = r.kernel.W1;
  kr["W2"] = r.kernel.has_W2 ? ordered_json(r.kernel.W2) : ordered_json(nullptr);
  kr["W3"] = r.kernel.has_W3 ? ordered_json(r.kernel.W3) : ordered_json(nullptr);
  kr["W4"] = r.kernel.has_W4 ? ordered_json(r.kernel.W4) : ordered_json(nullptr);
  kr["fd_step"] = r.kernel.fd_step;
  j["kernel_residuals"] = kr;
  const AdjointConstants& c = r.constants;
  j["k0"] = c.k0;
  j["A_const"] = c.A_const;
  j["B_const"] = c.B_const;
  j["cancellation_residuals"] = {{"nu_x_squared", c.bracket_nu2},
                                 {"constant", c.bracket_const},
                                 {"constant_as_printed", c.bracket_const_as_printed}};
  j["alpha"] = r.alpha.alpha;
  j["alpha_degenerate"] = r.alpha.degenerate;
  return detail::json_text(j);
}

void write_spectrum_csv(const std::vector<SpectrumReport>& reports, const std::string& path) {
  CsvWriter out(path, {"V", "re_lambda", "im_lambda", "lambda_asymptotic", "ratio", "W1_residual", "W2_residual",
                       "W3_residual", "W4_residual", "delta_count"});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : reports)
    out.row({r.V, r.lambda_V.real(), r.lambda_V.imag(), r.lambda_asymptotic, r.ratio, r.kernel.W1,
             r.kernel.has_W2 ? r.kernel.W2 : nan, r.kernel.has_W3 ? r.kernel.W3 : nan,
             r.kernel.has_W4 ? r.kernel.W4 : nan, static_cast<double>(r.delta_count)});
}

}  // namespace motility
