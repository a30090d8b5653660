#pragma once

#include <vector>

#include <Eigen/Dense>

#include "rsnoum/geometry.hpp"

namespace rsnoum {

/// Traffic demands in bps/Hz plus the multicast regularization weight.
struct DemandProfile {
  Eigen::VectorXd unicast;
  double multicast = 0.0;
  double eta_mc = 1.0;

  /// eta_mc = mean(unicast) / multicast; falls back to 1 when either of the
  /// two is zero.
  static DemandProfile with_default_eta(Eigen::VectorXd unicast, double multicast);

  int users() const { return static_cast<int>(unicast.size()); }
  void validate() const;
};

/// Quadratic-form values of one stacked precoder, one entry per user.
struct QuadValues {
  Eigen::VectorXd ac;  // f^H Ac_k f
  Eigen::VectorXd bc;  // f^H Bc_k f (== f^H Ap_k f)
  Eigen::VectorXd ap;
  Eigen::VectorXd bp;
};

/// The per-user matrices Ac_k, Bc_k, Ap_k, Bp_k over the stacked precoder
/// [f_c; f_1; ...; f_K]. All four are block diagonal with K+1 blocks of size
/// N_t, each block either gamma_k a_k a_k^H + (sigma^2/P) I or (sigma^2/P) I,
/// so only the responses, gains and the noise loading are stored. Rates are
/// evaluated through the scalars |a_k^H f_j|^2; dense matrices are produced
/// on request.
class QuadFormSet {
 public:
  QuadFormSet(Eigen::MatrixXcd responses, Eigen::VectorXd gains, double noise_scale);

  int users() const { return static_cast<int>(gains_.size()); }
  int antennas() const { return static_cast<int>(responses_.rows()); }
  int blocks() const { return users() + 1; }
  int stacked_dim() const { return antennas() * blocks(); }

  const Eigen::MatrixXcd& responses() const { return responses_; }
  const Eigen::VectorXd& gains() const { return gains_; }
  double noise_scale() const { return noise_scale_; }

  /// Same responses and noise loading with user gains replaced.
  QuadFormSet with_gains(const Eigen::VectorXd& gains) const;

  /// gamma_k |a_k^H f_j|^2 for user k (rows) and stream j (cols, 0 = common).
  Eigen::MatrixXd received_powers(const Eigen::VectorXcd& f) const;
  QuadValues values(const Eigen::VectorXcd& f) const;

  Eigen::MatrixXcd dense_ac(int k) const;
  Eigen::MatrixXcd dense_bc(int k) const;
  Eigen::MatrixXcd dense_ap(int k) const;
  Eigen::MatrixXcd dense_bp(int k) const;

 private:
  Eigen::MatrixXcd dense_from_mask(int k, const std::vector<bool>& block_has_signal) const;

  Eigen::MatrixXcd responses_;  // N_t x K, column k = a_k
  Eigen::VectorXd gains_;
  double noise_scale_;
};

QuadFormSet build_quadforms(const std::vector<ChannelStats>& stats, const SystemConfig& config);

/// Stream block j (0 = common) of a stacked precoder.
inline auto stream_block(const Eigen::VectorXcd& f, int antennas, int j) {
  return f.segment(static_cast<Eigen::Index>(j) * antennas, antennas);
}
inline auto stream_block(Eigen::VectorXcd& f, int antennas, int j) {
  return f.segment(static_cast<Eigen::Index>(j) * antennas, antennas);
}

double rate_common(int k, const Eigen::VectorXcd& f, const QuadFormSet& q);
double rate_private(int k, const Eigen::VectorXcd& f, const QuadFormSet& q);
Eigen::VectorXd common_rates(const Eigen::VectorXcd& f, const QuadFormSet& q);
Eigen::VectorXd private_rates(const Eigen::VectorXcd& f, const QuadFormSet& q);
Eigen::VectorXd common_rates(const QuadValues& qv);
Eigen::VectorXd private_rates(const QuadValues& qv);

/// Achieved rates of one transmission: per-user unicast and the multicast rate.
struct OfferedRates {
  Eigen::VectorXd unicast;
  double multicast = 0.0;
  double common_total = 0.0;  // min_k common rate, before splitting
};

/// Offered rates when `q` holds the realized channel power |g_k|^2 in place of
/// gamma_k. The common rate is the true minimum over users and is split by
/// `portions` (K unicast shares followed by the multicast share).
OfferedRates offered_rates(const Eigen::VectorXcd& f, const Eigen::VectorXd& portions,
                           const QuadFormSet& q);

std::vector<ChannelStats> realized_stats(const std::vector<ChannelStats>& stats,
                                         const std::vector<ChannelSample>& samples);

OfferedRates instantaneous_rates(const Eigen::VectorXcd& f, const Eigen::VectorXd& portions,
                                 const std::vector<ChannelSample>& samples,
                                 const std::vector<ChannelStats>& stats, const SystemConfig& config);

}  // namespace rsnoum
