#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rsnoum/objective.hpp"

namespace rsnoum {

/// Raised when a KKT matrix that must be positive definite is not, or a
/// linear solve fails.
class NumericalBreakdown : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Weighted sum of the per-user quadratic-form matrices. Every such matrix
/// is block diagonal over the K+1 streams, so the sum is stored as
///   block b = sum_k signal(b, k) * gamma_k a_k a_k^H + identity(b) * I.
struct QuadCombination {
  Eigen::MatrixXd signal;    // (K+1) x K
  Eigen::VectorXd identity;  // K+1

  static QuadCombination zero(int users);

  // Adds coef * M for the named per-user matrix M.
  void add_ac(const QuadFormSet& q, int k, double coef);
  void add_bc(const QuadFormSet& q, int k, double coef);
  void add_ap(const QuadFormSet& q, int k, double coef);
  void add_bp(const QuadFormSet& q, int k, double coef);

  QuadCombination& add_scaled(const QuadCombination& other, double coef);
  QuadCombination& operator*=(double s);
};

/// Hermitian block-diagonal matrix with K+1 blocks of size N_t.
class BlockDiagonal {
 public:
  BlockDiagonal() = default;
  explicit BlockDiagonal(std::vector<Eigen::MatrixXcd> blocks) : blocks_(std::move(blocks)) {}

  static BlockDiagonal from(const QuadCombination& c, const QuadFormSet& q);

  const std::vector<Eigen::MatrixXcd>& blocks() const { return blocks_; }
  Eigen::Index rows() const;

  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;
  /// Solves this * y = x block by block with a Cholesky factorization.
  /// Throws NumericalBreakdown when a block is not positive definite.
  Eigen::VectorXcd solve(const Eigen::VectorXcd& x) const;
  Eigen::MatrixXcd dense() const;
  double min_eigenvalue() const;
  BlockDiagonal& operator*=(double s);

 private:
  std::vector<Eigen::MatrixXcd> blocks_;
};

/// (L_A, L_B): softmax-weighted sums of Ac_i / f^H Ac_i f and Bc_i / f^H Bc_i f.
/// (L_A - L_B) f scaled by 1/ln 2 is the conjugate derivative of the smoothed
/// common rate.
struct CommonRateLoads {
  QuadCombination la;
  QuadCombination lb;
};

CommonRateLoads build_LA_LB(const QuadValues& quad, const Eigen::VectorXd& weights, const QuadFormSet& q);
CommonRateLoads build_LA_LB(const Eigen::VectorXcd& f, const QuadFormSet& q, double alpha);

/// Whether the scalar factors lambda_num / lambda_den multiply the KKT
/// matrices. They never change a normalized iteration direction.
enum class Prefactors { Dropped, Included };

/// Diagonal floor added to both matrices of each pair. It keeps the pair
/// invertible at degenerate points without changing their difference.
inline constexpr double kKktFloor = 1e-12;

struct KktF {
  QuadCombination a;  // without prefactor
  QuadCombination b;
  double lambda_num = 1.0;
  double lambda_den = 1.0;
  Prefactors prefactors = Prefactors::Dropped;

  BlockDiagonal a_matrix(const QuadFormSet& q) const;
  BlockDiagonal b_matrix(const QuadFormSet& q) const;
};

struct KktV {
  Eigen::VectorXd d;  // diagonal of D, without prefactor
  Eigen::VectorXd e;  // diagonal of E, without prefactor
  double lambda_num = 1.0;
  double lambda_den = 1.0;
  Prefactors prefactors = Prefactors::Dropped;

  Eigen::VectorXd d_diagonal() const;
  Eigen::VectorXd e_diagonal() const;
};

KktF build_kkt_f(const Evaluation& eval, const DemandProfile& demands, const QuadFormSet& q,
                 Prefactors prefactors = Prefactors::Dropped);
KktF build_kkt_f(const Eigen::VectorXcd& f, const Eigen::VectorXd& v, const QuadFormSet& q,
                 const DemandProfile& demands, double alpha, Prefactors prefactors = Prefactors::Dropped);

KktV build_kkt_v(const Evaluation& eval, const Eigen::VectorXd& v, const DemandProfile& demands,
                 Prefactors prefactors = Prefactors::Dropped);
KktV build_kkt_v(const Eigen::VectorXcd& f, const Eigen::VectorXd& v, const QuadFormSet& q,
                 const DemandProfile& demands, double alpha, Prefactors prefactors = Prefactors::Dropped);

/// Gradient of the objective in stacked real coordinates, packed as
/// d/dRe + j d/dIm, reconstructed from the KKT pair: -(4/ln 2)(A - B) f.
Eigen::VectorXcd kkt_gradient_f(const KktF& kkt, const Eigen::VectorXcd& f, const QuadFormSet& q);

/// Gradient of the objective with respect to v: -4 S (D - E) v.
Eigen::VectorXd kkt_gradient_v(const KktV& kkt, const Eigen::VectorXd& v, double smoothed);

/// ||U^{-1} W x - lambda x|| / ||x|| with x = [f; v], evaluated with the
/// prefactors included. With `freeze_v` only the precoder block counts.
double kkt_residual(const Eigen::VectorXcd& f, const Eigen::VectorXd& v, const QuadFormSet& q,
                    const DemandProfile& demands, double alpha, bool freeze_v = false);

}  // namespace rsnoum
