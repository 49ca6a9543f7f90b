#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <kerrcat/diagnostics.hpp>
#include <kerrcat/robustness.hpp>
#include <kerrcat/simulation.hpp>

using namespace kerrcat;
using std::numbers::pi;

namespace {

ProtocolSpec spec_of(ProtocolKind kind, int n = 1, double t_f = 5.0) {
  ProtocolSpec s;
  s.kind = kind;
  s.n = n;
  s.t_f = t_f;
  return s;
}

}  // namespace

TEST_CASE("error model application") {
  const Simulator sim;
  const auto s = sim.prepare(spec_of(ProtocolKind::optimal));
  const auto same = apply_error(s, {});
  CHECK(same.omega_re == s.omega_re);
  CHECK(same.e_j == s.e_j);
  const auto up = apply_error(s, {0.1, -0.2});
  for (std::size_t k = 0; k < s.size(); ++k) {
    CHECK(up.omega_re[k] == s.omega_re[k] * 1.1);
    CHECK(up.epsilon[k] == s.epsilon[k] * 1.1);
    CHECK(up.delta[k] == s.delta[k] * 0.8);
    CHECK(up.e_j[k] == s.e_j[k] * 0.8);
  }
  CHECK_THROWS_AS(apply_error(s, {1.5, 0.0}), Error);

  // no drive left: the populations stay put
  const auto off = sim.run(s, Model::effective, {-1.0, 0.0});
  CHECK(off.final_p_minus() < 1e-12);
}

TEST_CASE("sensitivity quadrature") {
  const auto base = design_schedule(spec_of(ProtocolKind::base));
  const auto q = qs_quadrature_detailed(base, ProtocolKind::base);
  CHECK(q.value == doctest::Approx(pi * pi / 4).epsilon(0.02));
  CHECK(q.error_estimate <= 1e-8);
  for (int n = 1; n <= 5; ++n)
    CHECK(qs_quadrature(design_schedule(spec_of(ProtocolKind::optimal, n)), ProtocolKind::optimal) <= 1e-6);

  PulseSchedule frozen = design_schedule(spec_of(ProtocolKind::optimal));
  std::fill(frozen.gamma_dot.begin(), frozen.gamma_dot.end(), 0.0);
  CHECK(qs_quadrature(frozen, ProtocolKind::optimal) == 0.0);
}

TEST_CASE("analytic sensitivity") {
  CHECK(qs_analytic(0) == doctest::Approx(pi * pi / 4));
  CHECK(qs_analytic(3) == 0.0);
  CHECK(qs_analytic(0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(qs_analytic(-1.0), Error);
}

TEST_CASE("finite-difference sensitivity") {
  const double fd = qs_finite_difference(spec_of(ProtocolKind::base), 0.02, Model::effective);
  const double quad = qs_quadrature(design_schedule(spec_of(ProtocolKind::base)), ProtocolKind::base);
  CHECK(std::abs(fd - quad) / quad <= 0.1);
  CHECK(std::abs(fd - qs_analytic(0)) / qs_analytic(0) <= 0.1);
  CHECK(std::abs(qs_finite_difference(spec_of(ProtocolKind::optimal), 0.05, Model::effective)) <= 1e-2);
  CHECK_THROWS_AS(qs_finite_difference(spec_of(ProtocolKind::base), 0.5, Model::effective), Error);
  CHECK_THROWS_AS(qs_finite_difference(spec_of(ProtocolKind::base), 0.02, Model::lindblad_full), Error);
}

TEST_CASE("base protocol amplitude errors") {
  const Simulator sim;
  const auto s = sim.prepare(spec_of(ProtocolKind::base));
  for (double mu : {0.1, -0.1}) CHECK(std::abs(sim.run(s, Model::effective, {mu, 0.0}).final_p_minus() - 0.975) <= 5e-3);
}

TEST_CASE("robustness sweep") {
  std::vector<double> mus;
  for (int k = -10; k <= 10; ++k) mus.push_back(0.02 * k);
  const auto r = robustness_sweep(spec_of(ProtocolKind::base), mus, {0.0}, Model::effective, {}, 3);
  REQUIRE(r.p_minus_final.rows() == 21);
  REQUIRE(r.p_minus_final.cols() == 1);
  CHECK(r.failed_cells() == 0);
  for (int k = 0; k <= 10; ++k) CHECK(std::abs(r.at(10 + k, 0) - r.at(10 - k, 0)) <= 5e-3);
  for (int k = 0; k < 21; ++k) {
    CHECK(r.at(k, 0) >= 0.0);
    CHECK(r.at(k, 0) <= 1.0);
  }

  // the zero cell reproduces a plain run bit for bit
  const Simulator sim;
  CHECK(r.at(10, 0) == sim.run(sim.prepare(spec_of(ProtocolKind::base)), Model::effective).final_p_minus());

  // worker count does not change the output
  const auto serial = robustness_sweep(spec_of(ProtocolKind::base), mus, {0.0}, Model::effective, {}, 1);
  CHECK(serial.p_minus_final == r.p_minus_final);
  std::ostringstream a, b;
  write_sweep_csv(a, r);
  write_sweep_csv(b, serial);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("mu,nu,p_minus\n") != std::string::npos);
  CHECK(a.str().rfind("# sweep: robustness\n", 0) == 0);
}

TEST_CASE("robustness grows with n") {
  const Simulator sim;
  double previous = sim.run(sim.prepare(spec_of(ProtocolKind::base)), Model::effective, {0.2, 0.0}).final_p_minus();
  for (int n : {1, 2, 5}) {
    const double p = sim.run(sim.prepare(spec_of(ProtocolKind::optimal, n)), Model::effective, {0.2, 0.0}).final_p_minus();
    CHECK(p >= previous);
    previous = p;
  }
}

TEST_CASE("infidelity is quartic in the amplitude error") {
  const Simulator sim;
  for (int n = 1; n <= 5; ++n) {
    const auto s = sim.prepare(spec_of(ProtocolKind::optimal, n));
    for (double sign : {-1.0, 1.0}) {
      const double small = 1.0 - sim.run(s, Model::effective, {0.05 * sign, 0.0}).final_p_minus();
      const double twice = 1.0 - sim.run(s, Model::effective, {0.1 * sign, 0.0}).final_p_minus();
      // base protocol sits near 2.46 here
      CHECK(twice / 0.01 <= 0.1);
      // doubling mu gives 4x for a quadratic, 16x for a quartic
      CHECK(twice / small >= 8.0);
    }
  }
}

TEST_CASE("failed cells are written as nan with a comment") {
  SweepResult r;
  r.axis1 = {"mu", {0.0, 0.1}};
  r.axis2 = {"nu", {0.0}};
  r.p_minus_final.resize(2, 1);
  r.p_minus_final << 0.5, std::nan("");
  r.cell_errors = {"", "stiffness: step collapsed"};
  r.metadata = {{"model", "effective"}};
  CHECK(r.failed_cells() == 1);
  std::ostringstream out;
  write_sweep_csv(out, r);
  CHECK(out.str() ==
        "# model: effective\n# failed mu=0.1 nu=0: stiffness: step collapsed\nmu,nu,p_minus\n0,0,0.5\n0.1,0,nan\n");
}
