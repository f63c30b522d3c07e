#include "motility/stationary_spectrum.hpp"

#include "motility/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace motility {

using std::numbers::pi;

ModeOperator assemble_mode(const RadialState& state, const ModelParams& params, int n, int n_radial) {
  if (n < 0) throw DomainError("assemble_mode: mode index must be >= 0");
  if (n_radial < 16) throw DomainError("assemble_mode: n_radial must be >= 16");
  ModeOperator op;
  op.n = n;
  op.R = state.R;
  op.grid = CollocationGrid::make(state.R, n_radial + 1, (n % 2) ? -1 : 1);
  const CollocationGrid& g = op.grid;
  const int N1 = g.size();
  const int nr = n_radial;
  const double zeta = params.zeta, m0 = state.m0, R = state.R;

  Eigen::MatrixXd L = g.D2;
  for (int i = 0; i < N1; ++i) {
    L.row(i) += g.D1.row(i) / g.r(i);
    L(i, i) -= n * n / (g.r(i) * g.r(i));
  }

  // m at all nodes from interior values: Neumann row fixes the boundary value.
  Eigen::MatrixXd Pm = Eigen::MatrixXd::Zero(N1, nr);
  Pm.bottomRows(nr).setIdentity();
  Pm.row(0) = -g.D1.row(0).tail(nr) / g.D1(0, 0);

  // φ: (L − ζ)φ = −m inside, φ(R) = g_bc ρ̂.
  const double g_bc =
      ((n == 0 ? 2.0 * pi * R * p_star_prime(params) : 0.0) + params.gamma * (1.0 - n * n) / (R * R)) / zeta;
  Eigen::MatrixXd H = L;
  H.diagonal().array() -= zeta;
  const Eigen::MatrixXd H_II = H.bottomRightCorner(nr, nr);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(H_II);
  Eigen::MatrixXd phi_m = Eigen::MatrixXd::Zero(N1, nr);
  phi_m.bottomRows(nr) = -lu.solve(Eigen::MatrixXd::Identity(nr, nr));
  Eigen::VectorXd phi_rho = Eigen::VectorXd::Zero(N1);
  phi_rho(0) = g_bc;
  phi_rho.tail(nr) = -lu.solve(H.col(0).tail(nr) * g_bc);
  if (!phi_m.allFinite() || !phi_rho.allFinite())
    throw NumericalError("assemble_mode: singular Helmholtz elimination");

  op.matrix.setZero(nr + 1, nr + 1);
  const Eigen::MatrixXd LPm = L * Pm;
  op.matrix.topLeftCorner(nr, nr) = LPm.bottomRows(nr) - m0 * zeta * phi_m.bottomRows(nr);
  op.matrix.topLeftCorner(nr, nr).diagonal().array() += m0;
  op.matrix.topRightCorner(nr, 1) = -m0 * zeta * phi_rho.tail(nr);
  op.matrix.bottomLeftCorner(1, nr) = g.D1.row(0) * phi_m;
  op.matrix(nr, nr) = g.D1.row(0).dot(phi_rho);
  return op;
}

Eigen::VectorXd ModeOperator::structural_kernel(const RadialState& state, const ModelParams& params) const {
  const int nr = n_radial();
  if (n == 1) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(nr + 1);
    v(nr) = 1.0;
    return v;
  }
  if (n == 0) {
    Eigen::VectorXd v = Eigen::VectorXd::Constant(nr + 1,
                                                  2.0 * pi * state.R * p_star_prime(params) +
                                                      params.gamma / (state.R * state.R));
    v(nr) = 1.0;
    return v;
  }
  return {};
}

namespace {

// Orthogonal similarity mapping the known kernel vector v to the last basis
// vector; returns the leading (N−1) block whose eigenvalues complete the spectrum.
Eigen::MatrixXd deflate_kernel(const Eigen::MatrixXd& A, const Eigen::VectorXd& v) {
  const int N = static_cast<int>(A.rows());
  Eigen::VectorXd u = v / v.norm();
  Eigen::VectorXd w = u;
  const double s = u(N - 1) >= 0 ? 1.0 : -1.0;
  w(N - 1) += s;  // w = u + s e_last; H = I − 2ww^T/|w|^2 maps u to −s e_last
  w /= w.norm();
  Eigen::MatrixXd B = A - 2.0 * w * (w.transpose() * A);
  B = B - 2.0 * (B * w) * w.transpose();
  return B.topLeftCorner(N - 1, N - 1);
}

void sort_desc(std::vector<std::complex<double>>& v) {
  std::sort(v.begin(), v.end(), [](auto a, auto b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
}

}  // namespace

EigReport mode_spectrum(const ModeOperator& op, const RadialState& state, const ModelParams& params) {
  EigReport rep;
  rep.n = op.n;
  const Eigen::VectorXd v = op.structural_kernel(state, params);
  Eigen::VectorXcd ev;
  if (v.size() > 0) {
    rep.structural_zero_residuals.push_back((op.matrix * v).norm() / (op.matrix.norm() * v.norm()));
    ev = dense_eigenvalues(deflate_kernel(op.matrix, v));
  } else {
    ev = dense_eigenvalues(op.matrix);
  }
  rep.max_re_nonzero = -std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    rep.eigenvalues.push_back(ev(k));
    rep.max_re_nonzero = std::max(rep.max_re_nonzero, ev(k).real());
  }
  if (op.n == 1) rep.E_value = rep.max_re_nonzero;
  if (v.size() > 0) rep.eigenvalues.push_back({0.0, 0.0});
  sort_desc(rep.eigenvalues);
  return rep;
}

MovabilityResult movability_E_operator_detail(const RadialState& state, const ModelParams& params, int n_radial) {
  const ModeOperator op = assemble_mode(state, params, 1, n_radial);
  MovabilityResult res;
  res.E = mode_spectrum(op, state, params).E_value;

  // Projection-based identification on the undeflated block.
  const auto pairs = dense_eig(op.matrix);
  const int last = op.n_radial();
  std::vector<std::pair<double, int>> overlaps;
  for (int k = 0; k < static_cast<int>(pairs.size()); ++k) {
    overlaps.push_back({std::abs(pairs[k].vector(last)) / pairs[k].vector.norm(), k});
  }
  std::sort(overlaps.begin(), overlaps.end(), std::greater<>());
  res.structural_overlap = overlaps[0].first;
  res.structural_eigenvalue = pairs[overlaps[0].second].value.real();
  if (overlaps.size() > 1 && overlaps[0].first - overlaps[1].first < 1e-3) {
    res.ambiguous = true;
    res.candidates = {pairs[overlaps[0].second].value, pairs[overlaps[1].second].value};
  }
  return res;
}

double movability_E_operator(const RadialState& state, const ModelParams& params, int n_radial) {
  return movability_E_operator_detail(state, params, n_radial).E;
}

namespace {

// Galerkin matrices for cos φ profiles on [0, R].
struct RayleighSystem {
  Eigen::MatrixXd K;     // quadratic form of E_ζ
  Eigen::MatrixXd Mass;  // ∫ m²
  QuadratureRule quad;
  Eigen::MatrixXd B;     // basis values at quadrature nodes (nodes × basis)
};

// Legendre P_j(t) and P_j'(t), j = 0..n−1.
void legendre(int n, double t, Eigen::VectorXd& P, Eigen::VectorXd& dP) {
  P.resize(n);
  dP.resize(n);
  P(0) = 1.0;
  dP(0) = 0.0;
  if (n > 1) {
    P(1) = t;
    dP(1) = 1.0;
  }
  for (int k = 2; k < n; ++k) {
    P(k) = ((2.0 * k - 1.0) * t * P(k - 1) - (k - 1.0) * P(k - 2)) / k;
    dP(k) = dP(k - 2) + (2.0 * k - 1.0) * P(k - 1);
  }
}

RayleighSystem build_rayleigh(const RadialState& state, const ModelParams& params, int n_basis) {
  if (n_basis < 4) throw DomainError("movability_E_rayleigh: need at least 4 basis functions");
  const double R = state.R, zeta = params.zeta, m0 = state.m0;
  RayleighSystem sys;
  sys.quad = gauss_legendre(2 * n_basis + 12, 0.0, R);
  const int nq = static_cast<int>(sys.quad.size());
  Eigen::MatrixXd b(nq, n_basis), db(nq, n_basis), p(nq, n_basis), dp(nq, n_basis);
  Eigen::VectorXd P, dP;
  for (int q = 0; q < nq; ++q) {
    const double r = sys.quad.nodes[q], x = r / R, t = 2.0 * x * x - 1.0;
    legendre(n_basis, t, P, dP);
    for (int j = 0; j < n_basis; ++j) {
      b(q, j) = x * P(j);
      db(q, j) = P(j) / R + x * dP(j) * 4.0 * r / (R * R);
      p(q, j) = b(q, j) * (1.0 - x * x);
      dp(q, j) = db(q, j) * (1.0 - x * x) - b(q, j) * 2.0 * r / (R * R);
    }
  }
  Eigen::VectorXd w(nq), w_over_r2(nq);
  for (int q = 0; q < nq; ++q) {
    const double r = sys.quad.nodes[q];
    w(q) = pi * sys.quad.weights[q] * r;
    w_over_r2(q) = w(q) / (r * r);
  }
  auto gram = [&](const Eigen::MatrixXd& f, const Eigen::MatrixXd& g, const Eigen::VectorXd& wt) {
    return Eigen::MatrixXd(f.transpose() * wt.asDiagonal() * g);
  };
  const Eigen::MatrixXd S_b = gram(db, db, w) + gram(b, b, w_over_r2);
  sys.Mass = gram(b, b, w);
  const Eigen::MatrixXd S_p = gram(dp, dp, w) + gram(p, p, w_over_r2);
  const Eigen::MatrixXd M_p = gram(p, p, w);
  const Eigen::MatrixXd C = gram(p, b, w);
  const Eigen::MatrixXd H = S_p + zeta * M_p;
  const Eigen::MatrixXd G = C.transpose() * H.ldlt().solve(C);
  sys.K = S_b - m0 * sys.Mass + m0 * zeta * G;
  sys.K = 0.5 * (sys.K + sys.K.transpose());
  sys.B = b;
  return sys;
}

}  // namespace

double movability_E_rayleigh(const RadialState& state, const ModelParams& params, int n_basis) {
  const RayleighSystem sys = build_rayleigh(state, params, n_basis);
  Eigen::LLT<Eigen::MatrixXd> chol(sys.Mass);
  if (chol.info() != Eigen::Success)
    throw NumericalError("movability_E_rayleigh: mass matrix is not positive definite");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(sys.K, sys.Mass, Eigen::EigenvaluesOnly);
  if (ges.info() != Eigen::Success) throw NumericalError("movability_E_rayleigh: eigensolver failed");
  return -ges.eigenvalues()(0);
}

double rayleigh_quotient(const RadialState& state, const ModelParams& params,
                         const std::function<double(double)>& m_hat, int n_basis) {
  const RayleighSystem sys = build_rayleigh(state, params, n_basis);
  const int nq = static_cast<int>(sys.quad.size());
  Eigen::VectorXd fw(nq);
  for (int q = 0; q < nq; ++q) {
    const double r = sys.quad.nodes[q];
    fw(q) = pi * sys.quad.weights[q] * r * m_hat(r);
  }
  const Eigen::VectorXd c = sys.Mass.ldlt().solve(sys.B.transpose() * fw);
  return c.dot(sys.K * c) / c.dot(sys.Mass * c);
}

StabilityReport verify_disk_stability(const RadialState& state, const ModelParams& params, int n_modes,
                                      int n_radial, double zero_tol) {
  StabilityReport rep;
  rep.zero_tol = zero_tol;
  const HypothesisReport hyp = check_hypotheses(params, state.R);
  if (!hyp.all_hold()) {
    rep.applicable = false;
    std::ostringstream os;
    os << "hypotheses violated:" << (hyp.a_holds ? "" : " (a) m0 <= zeta")
       << (hyp.b_holds_multiplicity ? "" : " (b) m0 < fourth Neumann eigenvalue")
       << (hyp.c_holds ? "" : " (c) area condition");
    rep.note = os.str();
  }
  rep.modes.resize(n_modes + 1);
  parallel_for(n_modes + 1, [&](int n) {
    const ModeOperator op = assemble_mode(state, params, n, n_radial);
    rep.modes[n] = mode_spectrum(op, state, params);
  });
  rep.E = rep.modes.size() > 1 ? rep.modes[1].E_value : 0.0;
  rep.max_re_nonzero = -std::numeric_limits<double>::infinity();
  for (const EigReport& m : rep.modes) {
    bool skip_E = m.n == 1;  // E(R) is excluded from the sign check
    for (const auto& lam : m.eigenvalues) {
      const bool is_E = skip_E && lam.real() == rep.E;
      if (is_E) skip_E = false;
      if (std::abs(lam) <= zero_tol) {
        ++rep.zero_multiplicity;
        continue;
      }
      if (!is_E) rep.max_re_nonzero = std::max(rep.max_re_nonzero, lam.real());
    }
  }
  rep.stable_apart_from_E = rep.max_re_nonzero < 0.0;
  rep.spectral_gap = -rep.max_re_nonzero;
  rep.truncated_mode_bound = rep.modes.back().eigenvalues.front().real();
  return rep;
}

std::vector<SweepRow> sweep_E(const ModelParams& params, const std::vector<double>& radii, int n_modes,
                              int n_radial) {
  std::vector<SweepRow> rows(radii.size());
  parallel_for(static_cast<int>(radii.size()), [&](int i) {
    const RadialState s = radial_state(params, radii[i]);
    const StabilityReport st = verify_disk_stability(s, params, n_modes, n_radial);
    rows[i] = {radii[i], st.E, movability_E_rayleigh(s, params, std::max(16, n_radial / 2)), st.max_re_nonzero,
               st.zero_multiplicity};
  });
  return rows;
}

}  // namespace motility
