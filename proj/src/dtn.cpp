#include "elscat/dtn.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "elscat/errors.hpp"

namespace elscat {
namespace {

constexpr cplx kI(0.0, 1.0);

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

ModeMatrix assemble_mode(const WaveNumbers& waves, const BackgroundMedium& medium, int n,
                         cplx alpha_p, cplx alpha_s) {
  const double tp = waves.tp;
  const double ts = waves.ts;
  const double nn = static_cast<double>(n) * n;
  const cplx beta_p = nn / (tp * tp) - 1.0 - alpha_p / tp;
  const cplx beta_s = nn / (ts * ts) - 1.0 - alpha_s / ts;
  const double lam = medium.lambda0;
  const double mu = medium.mu0;
  const double nd = static_cast<double>(n);

  ModeMatrix m;
  m.n = n;
  m.a << tp * alpha_p, kI * nd, kI * nd, -ts * alpha_s;
  m.b << 2.0 * mu * tp * tp * beta_p - lam * tp * tp, 2.0 * kI * mu * nd * (ts * alpha_s - 1.0),
      2.0 * kI * mu * nd * (tp * alpha_p - 1.0), -2.0 * mu * ts * ts * beta_s - mu * ts * ts;
  m.det_a = m.a(0, 0) * m.a(1, 1) - m.a(0, 1) * m.a(1, 0);
  if (!(std::abs(m.det_a) > 1e-300) || !std::isfinite(std::abs(m.det_a))) {
    throw SingularModeError(n, "DtN mode " + std::to_string(n) + ": A_n is singular (|det|=" +
                                   std::to_string(std::abs(m.det_a)) + ")");
  }
  Mat2c a_inv;
  a_inv << m.a(1, 1), -m.a(0, 1), -m.a(1, 0), m.a(0, 0);
  a_inv /= m.det_a;
  m.w = m.b * a_inv;
  return m;
}

}  // namespace

void BackgroundMedium::validate() const {
  if (!(lambda0 > 0.0 && mu0 > 0.0 && rho0 > 0.0 && radius > 0.0)) {
    throw DomainError("background medium: lambda0, mu0, rho0 and radius must be positive");
  }
}

WaveNumbers wave_numbers(const BackgroundMedium& medium, double omega) {
  medium.validate();
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw DomainError("wave_numbers: omega must be positive, got " + std::to_string(omega));
  }
  WaveNumbers w;
  w.omega = omega;
  w.kp = omega * std::sqrt(medium.rho0 / (medium.lambda0 + 2.0 * medium.mu0));
  w.ks = omega * std::sqrt(medium.rho0 / medium.mu0);
  w.tp = w.kp * medium.radius;
  w.ts = w.ks * medium.radius;
  return w;
}

ModeMatrix mode_matrix(const WaveNumbers& waves, const BackgroundMedium& medium, int n) {
  return assemble_mode(waves, medium, n, alpha_n(n, waves.tp), alpha_n(n, waves.ts));
}

Eigen::Vector2d hermitian_part_eigenvalues(const Mat2c& w) {
  const Mat2c h = -0.5 * (w + w.adjoint());
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const double mean = 0.5 * (a + d);
  const double rad = std::hypot(0.5 * (a - d), std::abs(h(0, 1)));
  return {mean - rad, mean + rad};
}

int default_truncation(const WaveNumbers& waves) {
  const int rule = std::max(16, static_cast<int>(std::ceil(waves.ts)) + 12);
  return std::min(rule, kMaxHankelOrder);
}

int default_boundary_points(int truncation) {
  int p = 1;
  while (p < std::max(128, 4 * truncation)) p *= 2;
  return p;
}

DtnOperator::DtnOperator(const BackgroundMedium& medium, double omega, int truncation,
                         int boundary_points)
    : medium_(medium),
      waves_(wave_numbers(medium, omega)),
      truncation_(truncation),
      points_(boundary_points) {
  if (truncation_ < 0 || truncation_ > kMaxHankelOrder) {
    throw DomainError("DtN truncation must lie in [0, " + std::to_string(kMaxHankelOrder) + "]");
  }
  if (!is_power_of_two(points_)) {
    throw DomainError("DtN boundary grid size must be a power of two, got " +
                      std::to_string(points_));
  }
  if (points_ < 2 * truncation_ + 2) {
    throw DomainError("DtN boundary grid of " + std::to_string(points_) +
                      " points cannot resolve modes up to " + std::to_string(truncation_));
  }

  const auto hp = hankel1_orders(truncation_, waves_.tp);
  const auto hs = hankel1_orders(truncation_, waves_.ts);
  modes_.reserve(2 * truncation_ + 1);
  for (int n = -truncation_; n <= truncation_; ++n) {
    const int k = std::abs(n);
    modes_.push_back(
        assemble_mode(waves_, medium_, n, hp[k].dh / hp[k].h, hs[k].dh / hs[k].h));
  }

  fourier_.resize(points_, 2 * truncation_ + 1);
  for (int m = 0; m < points_; ++m) {
    for (int n = -truncation_; n <= truncation_; ++n) {
      // Reduce n*m mod P before forming the angle so large products stay exact.
      const long long idx = ((static_cast<long long>(n) * m) % points_ + points_) % points_;
      fourier_(m, n + truncation_) =
          std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(idx) / points_);
    }
  }
}

DtnOperator DtnOperator::build(const BackgroundMedium& medium, double omega,
                               int boundary_points) {
  const WaveNumbers waves = wave_numbers(medium, omega);
  const int nt = default_truncation(waves);
  const int p = boundary_points > 0 ? boundary_points : default_boundary_points(nt);
  return DtnOperator(medium, omega, nt, p);
}

double DtnOperator::angle(int m) const { return 2.0 * std::numbers::pi * m / points_; }

const ModeMatrix& DtnOperator::mode(int n) const {
  if (std::abs(n) > truncation_) {
    throw DomainError("DtN mode " + std::to_string(n) + " outside truncation " +
                      std::to_string(truncation_));
  }
  return modes_[n + truncation_];
}

Eigen::VectorXcd DtnOperator::apply_standard(const Eigen::VectorXcd& trace, DtnForm form) const {
  const int p = points_;
  // Rotate into (radial, tangential) components.
  Eigen::MatrixXcd local(p, 2);
  for (int m = 0; m < p; ++m) {
    const double c = std::cos(angle(m));
    const double s = std::sin(angle(m));
    const cplx u1 = trace(2 * m);
    const cplx u2 = trace(2 * m + 1);
    local(m, 0) = c * u1 + s * u2;
    local(m, 1) = -s * u1 + c * u2;
  }

  const int nmodes = 2 * truncation_ + 1;
  Eigen::MatrixXcd scaled(nmodes, 2);
  if (form == DtnForm::Standard) {
    // c_n = (1/P) sum_m v_m e^{-i n theta_m};  out = sum_n W_n c_n e^{i n theta}
    const Eigen::MatrixXcd coef = fourier_.transpose() * local / static_cast<double>(p);
    for (int k = 0; k < nmodes; ++k) {
      scaled.row(k) = (modes_[k].w * coef.row(k).transpose()).transpose();
    }
    local = fourier_.conjugate() * scaled;
  } else {
    // c_n = (1/P) sum_m v_m e^{+i n theta_m};  out = sum_n W_n^T c_n e^{-i n theta}
    const Eigen::MatrixXcd coef = fourier_.adjoint() * local / static_cast<double>(p);
    for (int k = 0; k < nmodes; ++k) {
      scaled.row(k) = (modes_[k].w.transpose() * coef.row(k).transpose()).transpose();
    }
    local = fourier_ * scaled;
  }

  Eigen::VectorXcd out(2 * p);
  const double inv_r = 1.0 / medium_.radius;
  for (int m = 0; m < p; ++m) {
    const double c = std::cos(angle(m));
    const double s = std::sin(angle(m));
    out(2 * m) = inv_r * (c * local(m, 0) - s * local(m, 1));
    out(2 * m + 1) = inv_r * (s * local(m, 0) + c * local(m, 1));
  }
  return out;
}

Eigen::VectorXcd DtnOperator::apply(const Eigen::VectorXcd& trace, bool adjoint,
                                    DtnForm form) const {
  if (trace.size() != 2 * points_) {
    throw DimensionMismatch("DtN apply: trace has " + std::to_string(trace.size()) +
                            " entries, expected " + std::to_string(2 * points_));
  }
  if (adjoint) {
    return apply_standard(trace.conjugate(), form).conjugate();
  }
  return apply_standard(trace, form);
}

Eigen::MatrixXcd DtnOperator::dense_matrix() const {
  const int p = points_;
  // kernel[d] = sum_n W_n e^{i n 2 pi d / P}
  std::vector<Mat2c> kernel(p, Mat2c::Zero());
  for (int d = 0; d < p; ++d) {
    for (int k = 0; k < 2 * truncation_ + 1; ++k) {
      kernel[d] += modes_[k].w * std::conj(fourier_(d, k));
    }
  }

  std::vector<Eigen::Matrix2d> rot(p);
  for (int m = 0; m < p; ++m) {
    const double c = std::cos(angle(m));
    const double s = std::sin(angle(m));
    rot[m] << c, s, -s, c;
  }

  const double scale = 1.0 / (medium_.radius * p);
  Eigen::MatrixXcd dense(2 * p, 2 * p);
  for (int m = 0; m < p; ++m) {
    for (int mp = 0; mp < p; ++mp) {
      const Mat2c& kd = kernel[(m - mp + p) % p];
      dense.block<2, 2>(2 * m, 2 * mp) =
          scale * (rot[m].transpose().cast<cplx>() * kd * rot[mp].cast<cplx>());
    }
  }
  return dense;
}

void DtnOperator::write_mode_csv(std::ostream& os) const {
  os << "n,w11_re,w11_im,w12_re,w12_im,w21_re,w21_im,w22_re,w22_im,herm_eig_min,herm_eig_max\n";
  os.precision(17);
  for (const ModeMatrix& m : modes_) {
    const Eigen::Vector2d eig = hermitian_part_eigenvalues(m.w);
    os << m.n;
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        os << ',' << m.w(r, c).real() << ',' << m.w(r, c).imag();
      }
    }
    os << ',' << eig(0) << ',' << eig(1) << '\n';
  }
}

void DtnOperator::corrupt_mode_for_testing(int n, int row, int col, cplx delta) {
  modes_.at(n + truncation_).w(row, col) += delta;
}

}  // namespace elscat
