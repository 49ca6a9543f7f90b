#include "kerrcat/fockspace.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "kerrcat/diagnostics.hpp"

namespace kerrcat {

namespace {

void require_dim(int dim, int minimum) {
  if (dim < minimum) fail(Errc::invalid_dimension, fmt::format("dim = {} (need >= {})", dim, minimum));
}

void warn_if_undersized(int dim, cplx alpha) {
  if (std::norm(alpha) > dim / 4.0)
    warn(fmt::format("|alpha|^2 = {:.4g} exceeds dim/4 = {:.4g}; truncation may be inaccurate",
                     std::norm(alpha), dim / 4.0));
}

// Unnormalized coherent amplitudes exp(-|a|^2/2) a^n / sqrt(n!).
Eigen::VectorXcd coherent_amplitudes(int dim, cplx alpha) {
  Eigen::VectorXcd c(dim);
  c(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < dim; ++n) c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  return c;
}

}  // namespace

FockOperator::FockOperator(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols())
    fail(Errc::invalid_dimension,
         fmt::format("operator must be square, got {}x{}", entries_.rows(), entries_.cols()));
}

double FockOperator::hermiticity_defect() const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

double FockOperator::unitarity_defect() const {
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim(), dim());
  return (entries_.adjoint() * entries_ - id).cwiseAbs().maxCoeff();
}

FockState::FockState(Eigen::VectorXcd amplitudes) : amplitudes_(std::move(amplitudes)) {}

cplx FockState::inner(const FockState& other) const {
  if (other.dim() != dim())
    fail(Errc::dimension_mismatch, fmt::format("inner product of dim {} and {}", dim(), other.dim()));
  return amplitudes_.dot(other.amplitudes_);
}

LadderOperators ladder_ops(int dim) {
  require_dim(dim, 2);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  Eigen::MatrixXcd a_dag = a.adjoint();
  return {FockOperator(std::move(a)), FockOperator(std::move(a_dag))};
}

FockOperator displacement(int dim, cplx alpha) {
  const auto [a, a_dag] = ladder_ops(dim);
  warn_if_undersized(dim, alpha);
  const Eigen::MatrixXcd generator = alpha * a_dag.matrix() - std::conj(alpha) * a.matrix();
  Eigen::MatrixXcd d = generator.exp();

  // The truncated generator exponentiates to an exactly unitary matrix, so
  // the column norm that matters is that of the untruncated D|0> restricted
  // to the first dim levels.
  const double column_defect = 1.0 - coherent_amplitudes(dim, alpha).squaredNorm();
  if (column_defect > 1e-8)
    warn(fmt::format("displacement(dim={}, |alpha|={:.4g}) truncated: 1 - |P_dim D|0>|^2 = {:.3e}", dim,
                     std::abs(alpha), column_defect));
  return FockOperator(std::move(d));
}

CoherentState coherent_state(int dim, cplx alpha) {
  require_dim(dim, 1);
  Eigen::VectorXcd c = coherent_amplitudes(dim, alpha);
  const double weight = c.squaredNorm();
  const double loss = 1.0 - weight;
  if (loss > 1e-8)
    warn(fmt::format("coherent_state(dim={}, |alpha|={:.4g}) truncation loss {:.3e}", dim,
                     std::abs(alpha), loss));
  c /= std::sqrt(weight);
  return {FockState(std::move(c)), loss};
}

CatBasis cat_basis(int dim, cplx alpha) {
  require_dim(dim, 2);
  if (std::norm(alpha) * 10.0 > dim)
    warn(fmt::format("cat_basis: dim = {} below the recommended 10|alpha|^2 = {:.4g}", dim,
                     10.0 * std::norm(alpha)));

  const Eigen::VectorXcd c = coherent_amplitudes(dim, alpha);
  Eigen::VectorXcd even = Eigen::VectorXcd::Zero(dim);
  Eigen::VectorXcd odd = Eigen::VectorXcd::Zero(dim);
  for (int n = 0; n < dim; ++n) (n % 2 == 0 ? even : odd)(n) = 2.0 * c(n);
  even.normalize();
  odd.normalize();

  for (int n = 0; n < dim; ++n) {
    const double wrong = std::abs((n % 2 == 0 ? odd : even)(n));
    if (wrong > 1e-12)
      fail(Errc::internal_consistency, fmt::format("cat state has amplitude {:.3e} on wrong-parity level {}", wrong, n));
  }

  CatBasis basis;
  basis.alpha = alpha;
  basis.dim = dim;
  const double overlap = std::exp(-2.0 * std::norm(alpha));
  basis.n_plus = 1.0 / std::sqrt(2.0 * (1.0 + overlap));
  basis.n_minus = 1.0 / std::sqrt(2.0 * (1.0 - overlap));

  const auto ops = ladder_ops(dim);
  const Eigen::MatrixXcd x = ops.a.matrix() + ops.a_dag.matrix();
  basis.sx_element = even.dot(x * odd).real();

  const Eigen::VectorXd m = laguerre_diagonal(dim, 2.0 * std::abs(alpha));
  const double m_plus = (even.cwiseAbs2().array() * m.array()).sum();
  const double m_minus = (odd.cwiseAbs2().array() * m.array()).sum();
  basis.m_diag_gap = m_plus - m_minus;

  basis.c_plus = FockState(std::move(even));
  basis.c_minus = FockState(std::move(odd));
  return basis;
}

FockOperator kerr_hamiltonian(int dim, double K, double P) {
  require_dim(dim, 2);
  if (!(K > 0.0)) fail(Errc::invalid_argument, fmt::format("Kerr strength K = {} must be positive", K));
  if (P < 0.0) fail(Errc::invalid_argument, fmt::format("two-photon drive P = {} must be non-negative", P));

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) h(n, n) = -K * n * (n - 1.0);
  for (int n = 2; n < dim; ++n) {
    const double elem = P * std::sqrt(n * (n - 1.0));
    h(n - 2, n) = elem;  // a^2
    h(n, n - 2) = elem;  // a^dagger^2
  }
  return FockOperator(std::move(h));
}

namespace {

std::vector<double> sorted_spectrum(int dim, double K, double P) {
  const Eigen::MatrixXd h = kerr_hamiltonian(dim, K, P).matrix().real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double top_pair_gap(const std::vector<double>& ev) {
  const std::size_t n = ev.size();
  return 0.5 * (ev[n - 1] + ev[n - 2]) - 0.5 * (ev[n - 3] + ev[n - 4]);
}

}  // namespace

KerrSpectrum kerr_spectrum(int dim, double K, double P) {
  require_dim(dim, 4);
  KerrSpectrum out;
  out.eigenvalues = sorted_spectrum(dim, K, P);
  out.gap = top_pair_gap(out.eigenvalues);

  const double refined = top_pair_gap(sorted_spectrum(dim + 10, K, P));
  if (std::abs(refined - out.gap) > 0.01 * std::abs(refined)) {
    out.converged = false;
    warn(fmt::format("kerr_spectrum: gap {:.6g} not converged at dim = {} (dim + 10 gives {:.6g})", out.gap, dim,
                     refined));
  }
  return out;
}

Eigen::VectorXd laguerre_diagonal(int dim, double phi_a) {
  require_dim(dim, 1);
  if (!(phi_a > 0.0)) fail(Errc::invalid_argument, fmt::format("phi_a = {} must be positive", phi_a));

  const double x = phi_a * phi_a;
  Eigen::VectorXd out(dim);

  // Three-term recurrence on L_n(x). For small x the prefactor is applied
  // up front; for large x the running values are kept in a rescaled form
  // (mantissa, log-scale) so neither e^{-x/2} nor L_n(x) over/underflows.
  if (x <= 30.0) {
    const double pre = std::exp(-0.5 * x);
    double prev = pre;
    double cur = pre * (1.0 - x);
    out(0) = prev;
    if (dim > 1) out(1) = cur;
    for (int n = 1; n + 1 < dim; ++n) {
      const double next = ((2.0 * n + 1.0 - x) * cur - n * prev) / (n + 1.0);
      prev = cur;
      cur = next;
      out(n + 1) = cur;
    }
  } else {
    constexpr double kRescale = 1e100;
    double log_scale = -0.5 * x;
    double prev = 1.0;
    double cur = 1.0 - x;
    out(0) = std::exp(log_scale);
    if (dim > 1) out(1) = std::copysign(std::exp(log_scale + std::log(std::abs(cur))), cur);
    for (int n = 1; n + 1 < dim; ++n) {
      double next = ((2.0 * n + 1.0 - x) * cur - n * prev) / (n + 1.0);
      prev = cur;
      cur = next;
      if (std::abs(cur) > kRescale) {
        cur /= kRescale;
        prev /= kRescale;
        log_scale += std::log(kRescale);
      }
      out(n + 1) = cur == 0.0 ? 0.0 : std::copysign(std::exp(log_scale + std::log(std::abs(cur))), cur);
    }
  }

  for (int n = 0; n < dim; ++n)
    if (!std::isfinite(out(n)))
      fail(Errc::overflow, fmt::format("Laguerre recurrence non-finite at n = {} (phi_a = {})", n, phi_a));
  return out;
}

FockOperator laguerre_control_op(int dim, double phi_a) {
  const Eigen::VectorXd diag = laguerre_diagonal(dim, phi_a);
  return FockOperator(diag.cast<cplx>().asDiagonal().toDenseMatrix());
}

FockOperator parity_operator(int dim) {
  require_dim(dim, 1);
  Eigen::VectorXcd diag(dim);
  for (int n = 0; n < dim; ++n) diag(n) = (n % 2 == 0) ? 1.0 : -1.0;
  return FockOperator(diag.asDiagonal().toDenseMatrix());
}

}  // namespace kerrcat
