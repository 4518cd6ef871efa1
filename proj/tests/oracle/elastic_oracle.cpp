#include "elastic_oracle.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "bessel_oracle.hpp"

namespace elscat::oracle {

CylindricalMode::CylindricalMode(const BackgroundMedium& medium, double omega, int n, cd a, cd b,
                                 bool radiating)
    : medium_(medium),
      kp_(omega * std::sqrt(medium.rho0 / (medium.lambda0 + 2.0 * medium.mu0))),
      ks_(omega * std::sqrt(medium.rho0 / medium.mu0)),
      n_(n),
      a_(a),
      b_(b),
      radiating_(radiating) {}

CylindricalMode::Profile CylindricalMode::profile(double k, double r) const {
  const double t = k * r;
  if (radiating_) {
    const HankelSeries h = hankel1(n_, t);
    return {h.h, k * h.dh, k * k * h.d2h};
  }
  const double j = bessel_j(n_, t);
  const double dj = 0.5 * (bessel_j(n_ - 1, t) - bessel_j(n_ + 1, t));
  const double d2j = 0.25 * (bessel_j(n_ - 2, t) - 2.0 * j + bessel_j(n_ + 2, t));
  return {j, k * dj, k * k * d2j};
}

Eigen::Vector2cd CylindricalMode::displacement(const Eigen::Vector2d& x) const {
  const double r = x.norm();
  return displacement_at(r, std::atan2(x.y(), x.x()), profile(kp_, r), profile(ks_, r));
}

Eigen::Vector2cd CylindricalMode::traction(const Eigen::Vector2d& x) const {
  const double r = x.norm();
  return traction_at(r, std::atan2(x.y(), x.x()), profile(kp_, r), profile(ks_, r));
}

Eigen::Vector2cd CylindricalMode::displacement_at(double r, double th, const Profile& p,
                                                  const Profile& s) const {
  const cd e = std::exp(cd(0.0, n_ * th));
  const cd in(0.0, n_);
  // u_r = phi_r + psi_theta / r,  u_theta = phi_theta / r - psi_r
  const cd ur = (a_ * p.dz + in * b_ * s.z / r) * e;
  const cd ut = (in * a_ * p.z / r - b_ * s.dz) * e;
  return {ur * std::cos(th) - ut * std::sin(th), ur * std::sin(th) + ut * std::cos(th)};
}

Eigen::Vector2cd CylindricalMode::traction_at(double r, double th, const Profile& p,
                                              const Profile& s) const {
  const cd e = std::exp(cd(0.0, n_ * th));
  const cd in(0.0, n_);
  // d_r u_r = phi_rr - psi_theta / r^2 + psi_r theta / r
  // d_r u_theta = phi_r theta / r - phi_theta / r^2 - psi_rr
  const cd dur = (a_ * p.d2z - in * b_ * s.z / (r * r) + in * b_ * s.dz / r) * e;
  const cd dut = (in * a_ * p.dz / r - in * a_ * p.z / (r * r) - b_ * s.d2z) * e;
  const cd div = -kp_ * kp_ * a_ * p.z * e;
  const cd curl = ks_ * ks_ * b_ * s.z * e;
  const cd tr = 2.0 * medium_.mu0 * dur + medium_.lambda0 * div;
  const cd tt = 2.0 * medium_.mu0 * dut - medium_.mu0 * curl;
  return {tr * std::cos(th) - tt * std::sin(th), tr * std::sin(th) + tt * std::cos(th)};
}

Eigen::VectorXcd CylindricalMode::ring_displacement(double r, int points) const {
  const Profile p = profile(kp_, r);
  const Profile s = profile(ks_, r);
  Eigen::VectorXcd out(2 * points);
  for (int m = 0; m < points; ++m) {
    out.segment<2>(2 * m) = displacement_at(r, 2.0 * std::numbers::pi * m / points, p, s);
  }
  return out;
}

Eigen::VectorXcd CylindricalMode::ring_traction(double r, int points) const {
  const Profile p = profile(kp_, r);
  const Profile s = profile(ks_, r);
  Eigen::VectorXcd out(2 * points);
  for (int m = 0; m < points; ++m) {
    out.segment<2>(2 * m) = traction_at(r, 2.0 * std::numbers::pi * m / points, p, s);
  }
  return out;
}

Eigen::VectorXcd CylindricalMode::displacement_at_points(
    const std::vector<Eigen::Vector2d>& points) const {
  std::map<double, std::pair<Profile, Profile>> cache;
  Eigen::VectorXcd out(2 * points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    Eigen::Vector2d x = points[i];
    if (x.norm() < 1e-9) x = Eigen::Vector2d(1e-9, 0.0);
    const double r = x.norm();
    auto it = cache.find(r);
    if (it == cache.end()) it = cache.emplace(r, std::make_pair(profile(kp_, r), profile(ks_, r))).first;
    out.segment<2>(2 * i) =
        displacement_at(r, std::atan2(x.y(), x.x()), it->second.first, it->second.second);
  }
  return out;
}

Eigen::Matrix2cd closed_form_w(const BackgroundMedium& medium, double omega, int n, double mu) {
  const double r = medium.radius;
  const double tp = omega * std::sqrt(medium.rho0 / (medium.lambda0 + 2.0 * medium.mu0)) * r;
  const double ts = omega * std::sqrt(medium.rho0 / medium.mu0) * r;
  const HankelSeries hp = hankel1(n, tp);
  const HankelSeries hs = hankel1(n, ts);
  const cd ap = hp.dh / hp.h;
  const cd as = hs.dh / hs.h;
  const cd in(0.0, n);
  const cd lambda_n = -tp * ap * ts * as - in * in;
  const double rw = medium.rho0 * omega * omega * r * r;
  Eigen::Matrix2cd w;
  w(0, 0) = (-2.0 * mu * lambda_n + rw * ts * as) / (r * lambda_n);
  w(1, 1) = (-2.0 * mu * lambda_n + rw * tp * ap) / (r * lambda_n);
  w(0, 1) = (-2.0 * in * mu * lambda_n + in * rw) / (r * lambda_n);
  w(1, 0) = -w(0, 1);
  return w;
}

Eigen::Vector2cd plane_wave_traction_fd(WaveKind kind, double angle, const BackgroundMedium& medium,
                                        double omega, const Eigen::Vector2d& x, double h) {
  const double k = kind == WaveKind::Pressure
                       ? omega * std::sqrt(medium.rho0 / (medium.lambda0 + 2.0 * medium.mu0))
                       : omega * std::sqrt(medium.rho0 / medium.mu0);
  const Eigen::Vector2d d(std::cos(angle), std::sin(angle));
  const Eigen::Vector2d pol = kind == WaveKind::Pressure ? d : Eigen::Vector2d(-d.y(), d.x());
  auto u = [&](const Eigen::Vector2d& p) -> Eigen::Vector2cd {
    return pol.cast<cd>() * std::exp(cd(0.0, k * p.dot(d)));
  };
  // grad(i, j) = d u_i / d x_j
  Eigen::Matrix2cd grad;
  for (int j = 0; j < 2; ++j) {
    Eigen::Vector2d step = Eigen::Vector2d::Zero();
    step(j) = h;
    grad.col(j) = (u(x + step) - u(x - step)) / (2.0 * h);
  }
  const Eigen::Matrix2cd sigma = medium.lambda0 * grad.trace() * Eigen::Matrix2cd::Identity() +
                                 medium.mu0 * (grad + grad.transpose());
  const Eigen::Vector2d nu = x.normalized();
  return sigma * nu.cast<cd>();
}

}  // namespace elscat::oracle
