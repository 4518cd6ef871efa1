#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "elastic_oracle.hpp"
#include "elscat/dtn.hpp"
#include "elscat/errors.hpp"
#include "helpers.hpp"

using namespace elscat;

namespace {

double relnorm(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return (a - b).norm() / b.norm();
}

// Trace of a single rotated-frame Fourier mode: (radial, tangential) = c e^{i n theta}.
Eigen::VectorXcd rotated_mode(int n, const Eigen::Vector2cd& c, int p) {
  Eigen::VectorXcd v(2 * p);
  for (int m = 0; m < p; ++m) {
    const double th = 2.0 * M_PI * m / p;
    const std::complex<double> e = std::exp(std::complex<double>(0.0, n * th));
    const std::complex<double> ur = c(0) * e;
    const std::complex<double> ut = c(1) * e;
    v(2 * m) = std::cos(th) * ur - std::sin(th) * ut;
    v(2 * m + 1) = std::sin(th) * ur + std::cos(th) * ut;
  }
  return v;
}

}  // namespace

TEST_SUITE("dtn") {
  TEST_CASE("wave numbers") {
    const BackgroundMedium medium;
    const WaveNumbers k1 = wave_numbers(medium, 1.0);
    CHECK(k1.kp == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(k1.ks == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(k1.tp == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(k1.ts == doctest::Approx(1.0).epsilon(1e-15));
    const WaveNumbers k10 = wave_numbers(medium, 10.0);
    CHECK(k10.kp == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(k10.ks == doctest::Approx(10.0).epsilon(1e-15));
    const BackgroundMedium other{3.0, 0.7, 1.3, 2.0};
    for (double w : {0.5, 2.0, 9.0}) {
      const WaveNumbers k = wave_numbers(other, w);
      CHECK(k.kp / k.ks == doctest::Approx(std::sqrt(0.7 / 4.4)).epsilon(1e-14));
      CHECK(k.kp < k.ks);
    }
    CHECK_THROWS_AS(wave_numbers(medium, 0.0), DomainError);
    CHECK_THROWS_AS(wave_numbers(medium, -1.0), DomainError);
    CHECK_THROWS_AS((BackgroundMedium{1.0, 0.0, 1.0, 1.0}).validate(), DomainError);
  }

  TEST_CASE("default truncation") {
    WaveNumbers k;
    k.ts = 1.0;
    CHECK(default_truncation(k) == 16);
    k.ts = 11.0;
    CHECK(default_truncation(k) == 23);
    k.ts = 60.0;
    CHECK(default_truncation(k) == 64);
    CHECK(default_boundary_points(16) == 128);
    CHECK(default_boundary_points(40) == 256);
  }

  TEST_CASE("mode matrix structure") {
    const BackgroundMedium medium;
    for (double w : {1.0, 5.0, 10.0}) {
      const WaveNumbers k = wave_numbers(medium, w);
      const ModeMatrix m0 = mode_matrix(k, medium, 0);
      CHECK(m0.w(0, 1) == std::complex<double>(0.0));
      CHECK(m0.w(1, 0) == std::complex<double>(0.0));
      for (int n = 1; n <= 30; ++n) {
        const ModeMatrix mp = mode_matrix(k, medium, n);
        const ModeMatrix mm = mode_matrix(k, medium, -n);
        const double scale = mp.w.norm();
        CHECK((mp.w * mp.a - mp.b).norm() <= 1e-10 * mp.b.norm());
        CHECK((mm.w - mp.w.transpose()).norm() <= 1e-12 * scale);
        CHECK(std::abs(mp.w(1, 0) + mp.w(0, 1)) <= 1e-12 * scale);
      }
    }
  }

  TEST_CASE("closed-form entries match the 2x2 solve with mu = mu0, scaled by R") {
    // mu0 != 1 and R != 1 so that both readings of the printed formula are distinguishable.
    const BackgroundMedium medium{2.0, 1.5, 1.2, 1.7};
    for (double w : {1.0, 4.0}) {
      const WaveNumbers k = wave_numbers(medium, w);
      for (int n : {-5, -1, 0, 2, 3, 9}) {
        const Eigen::Matrix2cd solve = mode_matrix(k, medium, n).w;
        const Eigen::Matrix2cd closed = oracle::closed_form_w(medium, w, n, medium.mu0);
        CHECK((medium.radius * closed - solve).norm() <= 1e-9 * solve.norm());
        const Eigen::Matrix2cd bare = oracle::closed_form_w(medium, w, n, 1.0);
        CHECK((medium.radius * bare - solve).norm() > 1e-3 * solve.norm());
        CHECK((closed - solve).norm() > 1e-3 * solve.norm());
      }
    }
    const BackgroundMedium unit;
    const Eigen::Matrix2cd w3 = mode_matrix(wave_numbers(unit, 1.0), unit, 3).w;
    CHECK((oracle::closed_form_w(unit, 1.0, 3, unit.mu0) - w3).norm() <= 1e-9 * w3.norm());
  }

  TEST_CASE("single mode is scaled by W_n / R") {
    const BackgroundMedium medium{2.0, 1.0, 1.0, 1.3};
    const DtnOperator op(medium, 3.0, 16, 64);
    std::mt19937_64 rng(1);
    for (int n : {-16, -3, 0, 1, 7, 16}) {
      const Eigen::Vector2cd c = elscat::testing::random_trace(rng, 2);
      const Eigen::Vector2cd wc = op.mode(n).w * c / medium.radius;
      CHECK(relnorm(op.apply(rotated_mode(n, c, 64)), rotated_mode(n, wc, 64)) < 1e-12);
    }
    // modes beyond the truncation are removed
    const Eigen::Vector2cd c(1.0, 0.5);
    CHECK(op.apply(rotated_mode(20, c, 64)).norm() < 1e-12);
  }

  TEST_CASE("adjoint identity on random traces") {
    const BackgroundMedium medium;
    std::mt19937_64 rng(2);
    for (double w : {1.0, 5.0, 10.0}) {
      const DtnOperator op = DtnOperator::build(medium, w);
      const int p = op.boundary_points();
      for (int k = 0; k < 100; ++k) {
        const Eigen::VectorXcd phi = elscat::testing::random_trace(rng, 2 * p);
        const Eigen::VectorXcd psi = elscat::testing::random_trace(rng, 2 * p);
        const std::complex<double> lhs = psi.dot(op.apply(phi, true));
        const std::complex<double> rhs = op.apply(psi).dot(phi);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs) + 1e-12 * phi.norm() * psi.norm());
      }
    }
  }

  TEST_CASE("standard and transposed series agree") {
    const BackgroundMedium medium;
    std::mt19937_64 rng(3);
    for (double w : {1.0, 7.0}) {
      const DtnOperator op = DtnOperator::build(medium, w);
      for (int k = 0; k < 10; ++k) {
        const Eigen::VectorXcd v = elscat::testing::random_trace(rng, 2 * op.boundary_points());
        const Eigen::VectorXcd a = op.apply(v, false, DtnForm::Standard);
        const Eigen::VectorXcd b = op.apply(v, false, DtnForm::Transposed);
        CHECK(relnorm(b, a) < 1e-12);
      }
    }
  }

  TEST_CASE("radiating exterior modes: DtN of the trace is the traction") {
    const BackgroundMedium medium{2.0, 1.0, 1.0, 1.25};
    for (double w : {1.0, 5.0}) {
      const DtnOperator op = DtnOperator::build(medium, w);
      for (int n : {-op.truncation() + 2, -4, 0, 1, 6, op.truncation() - 2}) {
        const oracle::CylindricalMode mode(medium, w, n, {0.7, -0.2}, {0.3, 0.9}, true);
        const Eigen::VectorXcd trace = mode.ring_displacement(medium.radius, op.boundary_points());
        const Eigen::VectorXcd traction = mode.ring_traction(medium.radius, op.boundary_points());
        CHECK(relnorm(op.apply(trace), traction) < 1e-8);
      }
    }
  }

  TEST_CASE("Hermitian part definiteness beyond ceil(ts)+2") {
    const BackgroundMedium medium;
    for (double w : {1.0, 5.0, 10.0}) {
      const WaveNumbers k = wave_numbers(medium, w);
      for (int n = static_cast<int>(std::ceil(k.ts)) + 2; n <= kMaxHankelOrder; ++n) {
        CHECK(hermitian_part_eigenvalues(mode_matrix(k, medium, n).w)(0) > 0.0);
        CHECK(hermitian_part_eigenvalues(mode_matrix(k, medium, -n).w)(0) > 0.0);
      }
    }
  }

  TEST_CASE("dense matrix reproduces apply and is complex symmetric") {
    const BackgroundMedium medium;
    const DtnOperator op(medium, 2.0, 16, 64);
    const Eigen::MatrixXcd d = op.dense_matrix();
    std::mt19937_64 rng(4);
    const Eigen::VectorXcd v = elscat::testing::random_trace(rng, 128);
    CHECK(relnorm(d * v, op.apply(v)) < 1e-12);
    CHECK((d - d.transpose()).norm() < 1e-12 * d.norm());
  }

  TEST_CASE("grid and size checks") {
    const BackgroundMedium medium;
    CHECK_THROWS_AS(DtnOperator(medium, 1.0, 16, 96), DomainError);
    CHECK_THROWS_AS(DtnOperator(medium, 1.0, 16, 32), DomainError);
    const DtnOperator op(medium, 1.0, 16, 64);
    CHECK_THROWS_AS(op.apply(Eigen::VectorXcd::Zero(100)), DimensionMismatch);
    CHECK_THROWS_AS(op.mode(17), DomainError);
  }

  TEST_CASE("mode CSV and corruption hook") {
    const BackgroundMedium medium;
    DtnOperator op(medium, 1.0, 16, 64);
    std::ostringstream os;
    op.write_mode_csv(os);
    int lines = 0;
    for (char c : os.str()) lines += c == '\n';
    CHECK(lines == 1 + 33);
    const Eigen::Vector2cd c(1.0, 0.0);
    const Eigen::VectorXcd before = op.apply(rotated_mode(3, c, 64));
    op.corrupt_mode_for_testing(3, 0, 0, 0.5);
    CHECK(relnorm(op.apply(rotated_mode(3, c, 64)), before) > 1e-3);
  }
}
