#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "elscat/specfun.hpp"

namespace elscat {

using Mat2c = Eigen::Matrix2cd;

// Homogeneous isotropic background and the radius of the artificial boundary.
struct BackgroundMedium {
  double lambda0 = 2.0;
  double mu0 = 1.0;
  double rho0 = 1.0;
  double radius = 1.0;

  // Throws DomainError unless every field is strictly positive.
  void validate() const;
};

struct WaveNumbers {
  double omega = 0.0;
  double kp = 0.0;  // pressure wave number
  double ks = 0.0;  // shear wave number
  double tp = 0.0;  // kp * R
  double ts = 0.0;  // ks * R
};

WaveNumbers wave_numbers(const BackgroundMedium& medium, double omega);

// Fourier-mode block of the elastic DtN map.  w = b * a^{-1}.
struct ModeMatrix {
  int n = 0;
  Mat2c a;
  Mat2c b;
  Mat2c w;
  cplx det_a;
};

// Direct 2x2 solve of W_n A_n = B_n.  Throws SingularModeError if |det A_n| underflows.
ModeMatrix mode_matrix(const WaveNumbers& waves, const BackgroundMedium& medium, int n);

// Eigenvalues (ascending) of the Hermitian matrix -(W + W^*)/2.
Eigen::Vector2d hermitian_part_eigenvalues(const Mat2c& w);

// max(16, ceil(ts) + 12), capped at kMaxHankelOrder.
int default_truncation(const WaveNumbers& waves);

// max(128, 4 * truncation) rounded up to a power of two.
int default_boundary_points(int truncation);

// Series form used when applying the operator.  Both give the same result;
// Transposed sums W_n^T against the reversed exponential.
enum class DtnForm { Standard, Transposed };

// Truncated DtN operator on P uniform boundary angles theta_m = 2 pi m / P.
//
// Boundary traces are interleaved Cartesian samples
// (u_1(theta_0), u_2(theta_0), u_1(theta_1), ...), length 2P.
class DtnOperator {
 public:
  DtnOperator(const BackgroundMedium& medium, double omega, int truncation, int boundary_points);

  // Default truncation for the frequency; boundary_points as given (0 picks the default).
  static DtnOperator build(const BackgroundMedium& medium, double omega, int boundary_points = 0);

  const BackgroundMedium& medium() const { return medium_; }
  const WaveNumbers& waves() const { return waves_; }
  int truncation() const { return truncation_; }
  int boundary_points() const { return points_; }
  double angle(int m) const;

  // Mode matrix for -N_t <= n <= N_t.
  const ModeMatrix& mode(int n) const;

  // B(trace), or B^*(trace) = conj(B conj(trace)) when adjoint is set.
  Eigen::VectorXcd apply(const Eigen::VectorXcd& trace, bool adjoint = false,
                         DtnForm form = DtnForm::Standard) const;

  // Dense 2P x 2P matrix of apply() acting on interleaved samples.
  Eigen::MatrixXcd dense_matrix() const;

  // One CSV row per mode: n, Re/Im of W_n entries, eigenvalues of the Hermitian part.
  void write_mode_csv(std::ostream& os) const;

  // Test hook: perturbs one W_n entry after construction.
  void corrupt_mode_for_testing(int n, int row, int col, cplx delta);

 private:
  BackgroundMedium medium_;
  WaveNumbers waves_;
  int truncation_;
  int points_;
  std::vector<ModeMatrix> modes_;  // index n + truncation_
  Eigen::MatrixXcd fourier_;       // P x (2 N_t + 1), exp(-i n theta_m)

  Eigen::VectorXcd apply_standard(const Eigen::VectorXcd& trace, DtnForm form) const;
};

}  // namespace elscat
