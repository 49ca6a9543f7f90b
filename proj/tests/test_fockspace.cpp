#include <doctest.h>

#include <cmath>

#include <kerrcat/diagnostics.hpp>
#include <kerrcat/fockspace.hpp>

using namespace kerrcat;

namespace {

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("ladder operators") {
  const auto two = ladder_ops(2);
  CHECK(two.a(0, 1) == cplx(1.0));
  CHECK(max_abs(two.a.matrix()) == doctest::Approx(1.0));
  CHECK(std::abs(two.a(1, 0)) == 0.0);

  const auto four = ladder_ops(4);
  CHECK(four.a(2, 3).real() == doctest::Approx(std::sqrt(3.0)));
  CHECK(max_abs(four.a_dag.matrix() - four.a.matrix().adjoint()) == 0.0);

  const int dim = 12;
  const auto ops = ladder_ops(dim);
  const Eigen::MatrixXcd comm = ops.a.matrix() * ops.a_dag.matrix() - ops.a_dag.matrix() * ops.a.matrix();
  for (int i = 0; i + 1 < dim; ++i) CHECK(std::abs(comm(i, i) - 1.0) < 1e-14);
  CHECK(comm(dim - 1, dim - 1).real() == doctest::Approx(-(dim - 1.0)));

  CHECK_THROWS_AS(ladder_ops(1), Error);
  try {
    ladder_ops(1);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_dimension);
  }
}

TEST_CASE("displacement operator") {
  const auto id = displacement(10, 0.0);
  CHECK(max_abs(id.matrix() - Eigen::MatrixXcd::Identity(10, 10)) < 1e-15);

  const auto d = displacement(60, 2.0);
  const auto dm = displacement(60, -2.0);
  CHECK(max_abs((d * dm).matrix() - Eigen::MatrixXcd::Identity(60, 60)) < 1e-10);
  CHECK(d.unitarity_defect() < 1e-10);

  const auto coh = coherent_state(60, 2.0);
  CHECK((d.matrix().col(0) - coh.state.amplitudes()).norm() < 1e-10);

  WarningCapture warnings;
  displacement(8, 3.0);
  CHECK(warnings.contains("truncat"));
}

TEST_CASE("coherent states") {
  const auto vac = coherent_state(10, 0.0);
  CHECK(std::abs(vac.state[0] - 1.0) < 1e-15);
  CHECK(vac.truncation_loss == 0.0);

  const auto a = coherent_state(60, 2.0);
  const auto ops = ladder_ops(60);
  const Eigen::VectorXcd& v = a.state.amplitudes();
  const cplx n = v.dot(ops.a_dag.matrix() * ops.a.matrix() * v);
  CHECK(std::abs(n - 4.0) < 1e-8);
  CHECK(a.truncation_loss < 1e-15);

  const auto b = coherent_state(60, -2.0);
  CHECK(std::abs(a.state.inner(b.state)) == doctest::Approx(std::exp(-8.0)).epsilon(1e-8));
  CHECK(std::exp(-8.0) == doctest::Approx(3.3546e-4).epsilon(1e-4));

  WarningCapture warnings;
  const auto cut = coherent_state(6, 2.0);
  CHECK(cut.truncation_loss > 1e-8);
  CHECK(std::abs(cut.state.norm() - 1.0) < 1e-12);
  CHECK(warnings.messages().size() == 1);
}

TEST_CASE("cat basis") {
  const CatBasis cb = cat_basis(60, 2.0);
  CHECK(std::abs(cb.c_plus.norm() - 1.0) < 1e-10);
  CHECK(std::abs(cb.c_minus.norm() - 1.0) < 1e-10);
  CHECK(std::abs(cb.c_plus.inner(cb.c_minus)) < 1e-10);
  CHECK(cb.n_plus == doctest::Approx(1.0 / std::sqrt(2.0 * (1.0 + std::exp(-8.0)))).epsilon(1e-12));
  CHECK(cb.n_minus == doctest::Approx(1.0 / std::sqrt(2.0 * (1.0 - std::exp(-8.0)))).epsilon(1e-12));
  for (int k = 0; k < 60; ++k) {
    if (k % 2) CHECK(std::abs(cb.c_plus[k]) <= 1e-12);
    else CHECK(std::abs(cb.c_minus[k]) <= 1e-12);
  }

  // a|C+> = alpha (n+/n-) |C->
  const auto ops = ladder_ops(60);
  const Eigen::VectorXcd lowered = ops.a.matrix() * cb.c_plus.amplitudes();
  const double ratio = 2.0 * cb.n_plus / cb.n_minus;
  CHECK((lowered - ratio * cb.c_minus.amplitudes()).norm() < 1e-10);
  CHECK(std::abs(ratio - 2.0) < 1e-3);
  CHECK(std::abs(ratio - 2.0) > 1e-5);

  CHECK(cb.sx_element == doctest::Approx(4.0).epsilon(1e-3));
  // The Laguerre diagonal gap has the sign that makes E_J = -Delta / gap positive for Delta < 0.
  CHECK(cb.m_diag_gap == doctest::Approx(0.20109).epsilon(1e-4));
  CHECK(std::abs(cb.m_diag_gap) > 1e-3);
}

TEST_CASE("Kerr Hamiltonian") {
  const auto h0 = kerr_hamiltonian(12, 1.5, 0.0);
  for (int n = 0; n < 12; ++n) CHECK(h0(n, n).real() == doctest::Approx(-1.5 * n * (n - 1)));
  CHECK(max_abs(h0.matrix() - Eigen::MatrixXcd(h0.matrix().diagonal().asDiagonal())) == 0.0);

  const auto h = kerr_hamiltonian(60, 1.0, 4.0);
  CHECK(h.hermiticity_defect() <= 1e-12);
  const auto coh = coherent_state(60, 2.0);
  const Eigen::VectorXcd hv = h.matrix() * coh.state.amplitudes();
  CHECK((hv - 16.0 * coh.state.amplitudes()).norm() / 16.0 < 1e-6);

  const CatBasis cb = cat_basis(60, 2.0);
  const cplx ep = cb.c_plus.amplitudes().dot(h.matrix() * cb.c_plus.amplitudes());
  const cplx em = cb.c_minus.amplitudes().dot(h.matrix() * cb.c_minus.amplitudes());
  CHECK(std::abs(ep - em) < 1e-6);
  CHECK((h.matrix() * cb.c_plus.amplitudes() - ep * cb.c_plus.amplitudes()).norm() < 1e-6);
}

TEST_CASE("Kerr spectrum") {
  const auto s = kerr_spectrum(60, 1.0, 4.0);
  REQUIRE(s.eigenvalues.size() == 60);
  CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
  const auto top = s.eigenvalues.end() - 1;
  CHECK(std::abs(*top - *(top - 1)) < 1e-6);
  CHECK(*top == doctest::Approx(16.0).epsilon(1e-8));
  CHECK(std::abs(s.gap - 16.0) / 16.0 <= 0.15);
  CHECK(s.gap == doctest::Approx(13.6105).epsilon(1e-4));
  CHECK(s.converged);

  const auto free = kerr_spectrum(10, 1.0, 0.0);
  for (int n = 0; n < 10; ++n)
    CHECK(std::count(free.eigenvalues.begin(), free.eigenvalues.end(), -1.0 * n * (n - 1)) >= 1);

  const auto wide = kerr_spectrum(80, 1.0, 4.0);
  for (int k = 1; k <= 4; ++k)
    CHECK(std::abs(wide.eigenvalues[80 - k] - s.eigenvalues[60 - k]) <= 1e-8);
}

TEST_CASE("truncation convergence of the cat states") {
  const CatBasis a = cat_basis(60, 2.0);
  const CatBasis b = cat_basis(80, 2.0);
  CHECK((b.c_plus.amplitudes().head(60) - a.c_plus.amplitudes()).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((b.c_minus.amplitudes().head(60) - a.c_minus.amplitudes()).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(b.c_plus.amplitudes().tail(20).norm() <= 1e-10);
}

TEST_CASE("Laguerre control operator") {
  const double phi = 4.0;
  const auto m = laguerre_diagonal(60, phi);
  CHECK(m(0) == doctest::Approx(std::exp(-8.0)).epsilon(1e-14));
  CHECK(m(1) == doctest::Approx(std::exp(-8.0) * (1.0 - 16.0)).epsilon(1e-14));

  const auto d = displacement(60, cplx(0.0, phi));
  for (int n = 0; n <= 20; ++n) CHECK(std::abs(d(n, n) - m(n)) < 1e-8);

  const auto op = laguerre_control_op(60, phi);
  const auto par = parity_operator(60);
  CHECK(max_abs((op * par).matrix() - (par * op).matrix()) <= 1e-10);
  const auto h = kerr_hamiltonian(60, 1.0, 4.0);
  CHECK(max_abs((h * par).matrix() - (par * h).matrix()) <= 1e-10);

  // large argument stays finite
  const auto big = laguerre_diagonal(200, 12.0);
  CHECK(big.allFinite());
  CHECK(big.cwiseAbs().maxCoeff() <= 1.0 + 1e-9);
  CHECK_THROWS_AS(laguerre_diagonal(10, 0.0), Error);
}

TEST_CASE("parity operator") {
  const auto p = parity_operator(6);
  for (int n = 0; n < 6; ++n) CHECK(p(n, n).real() == (n % 2 ? -1.0 : 1.0));
  const CatBasis cb = cat_basis(40, 2.0);
  CHECK((parity_operator(40).matrix() * cb.c_plus.amplitudes() - cb.c_plus.amplitudes()).norm() < 1e-12);
}
