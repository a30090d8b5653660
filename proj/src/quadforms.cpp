#include "rsnoum/quadforms.hpp"

#include <cmath>
#include <stdexcept>

namespace rsnoum {

DemandProfile DemandProfile::with_default_eta(Eigen::VectorXd unicast, double multicast) {
  DemandProfile d;
  const double mean_uc = unicast.size() > 0 ? unicast.mean() : 0.0;
  d.unicast = std::move(unicast);
  d.multicast = multicast;
  d.eta_mc = (multicast > 0.0 && mean_uc > 0.0) ? mean_uc / multicast : 1.0;
  return d;
}

void DemandProfile::validate() const {
  if (unicast.size() < 1) throw std::invalid_argument("DemandProfile: need at least one user");
  if ((unicast.array() < 0.0).any() || !unicast.allFinite()) {
    throw std::invalid_argument("DemandProfile: unicast demands must be finite and >= 0");
  }
  if (!(multicast >= 0.0) || !std::isfinite(multicast)) {
    throw std::invalid_argument("DemandProfile: multicast demand must be finite and >= 0");
  }
  if (!(eta_mc > 0.0) || !std::isfinite(eta_mc)) {
    throw std::invalid_argument("DemandProfile: eta_mc must be positive");
  }
}

QuadFormSet::QuadFormSet(Eigen::MatrixXcd responses, Eigen::VectorXd gains, double noise_scale)
    : responses_(std::move(responses)), gains_(std::move(gains)), noise_scale_(noise_scale) {
  if (gains_.size() < 1 || responses_.cols() != gains_.size() || responses_.rows() < 1) {
    throw std::invalid_argument("QuadFormSet: responses must be N_t x K with K gains, K >= 1");
  }
  if (!responses_.allFinite() || !gains_.allFinite()) {
    throw std::invalid_argument("QuadFormSet: non-finite array response or channel gain");
  }
  if ((gains_.array() < 0.0).any()) throw std::invalid_argument("QuadFormSet: negative channel gain");
  if (!(noise_scale_ > 0.0) || !std::isfinite(noise_scale_)) {
    throw std::invalid_argument("QuadFormSet: noise scale must be positive");
  }
}

QuadFormSet QuadFormSet::with_gains(const Eigen::VectorXd& gains) const {
  return QuadFormSet(responses_, gains, noise_scale_);
}

Eigen::MatrixXd QuadFormSet::received_powers(const Eigen::VectorXcd& f) const {
  const int n = antennas();
  const int k_users = users();
  if (f.size() != stacked_dim()) throw std::invalid_argument("received_powers: precoder size mismatch");
  // Row k of (A^H F) holds a_k^H f_j for every stream j.
  const Eigen::Map<const Eigen::MatrixXcd> streams(f.data(), n, k_users + 1);
  const Eigen::MatrixXcd inner = responses_.adjoint() * streams;
  Eigen::MatrixXd p = inner.cwiseAbs2();
  p.array().colwise() *= gains_.array();
  return p;
}

QuadValues QuadFormSet::values(const Eigen::VectorXcd& f) const {
  const Eigen::MatrixXd p = received_powers(f);
  const double noise = noise_scale_ * f.squaredNorm();
  const int k_users = users();
  QuadValues v;
  v.ac.resize(k_users);
  v.bc.resize(k_users);
  v.ap.resize(k_users);
  v.bp.resize(k_users);
  for (int k = 0; k < k_users; ++k) {
    const double privates = p.row(k).tail(k_users).sum();
    v.ac(k) = p(k, 0) + privates + noise;
    v.bc(k) = privates + noise;
    v.ap(k) = v.bc(k);
    double interference = 0.0;
    for (int j = 1; j <= k_users; ++j) {
      if (j != k + 1) interference += p(k, j);
    }
    v.bp(k) = interference + noise;
  }
  return v;
}

Eigen::MatrixXcd QuadFormSet::dense_from_mask(int k, const std::vector<bool>& block_has_signal) const {
  const int n = antennas();
  const int dim = stacked_dim();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim) * noise_scale_;
  const Eigen::MatrixXcd rank_one = gains_(k) * responses_.col(k) * responses_.col(k).adjoint();
  for (int b = 0; b < blocks(); ++b) {
    if (block_has_signal[static_cast<std::size_t>(b)]) m.block(b * n, b * n, n, n) += rank_one;
  }
  return m;
}

Eigen::MatrixXcd QuadFormSet::dense_ac(int k) const {
  std::vector<bool> mask(static_cast<std::size_t>(blocks()), true);
  return dense_from_mask(k, mask);
}

Eigen::MatrixXcd QuadFormSet::dense_bc(int k) const {
  std::vector<bool> mask(static_cast<std::size_t>(blocks()), true);
  mask[0] = false;
  return dense_from_mask(k, mask);
}

Eigen::MatrixXcd QuadFormSet::dense_ap(int k) const { return dense_bc(k); }

Eigen::MatrixXcd QuadFormSet::dense_bp(int k) const {
  std::vector<bool> mask(static_cast<std::size_t>(blocks()), true);
  mask[0] = false;
  mask[static_cast<std::size_t>(k) + 1] = false;
  return dense_from_mask(k, mask);
}

QuadFormSet build_quadforms(const std::vector<ChannelStats>& stats, const SystemConfig& config) {
  if (stats.empty()) throw std::invalid_argument("build_quadforms: need at least one user");
  const int n = config.antennas();
  Eigen::MatrixXcd responses(n, static_cast<Eigen::Index>(stats.size()));
  Eigen::VectorXd gains(static_cast<Eigen::Index>(stats.size()));
  for (std::size_t k = 0; k < stats.size(); ++k) {
    if (stats[k].array_response.size() != n) {
      throw std::invalid_argument("build_quadforms: array response length differs from N_t");
    }
    responses.col(static_cast<Eigen::Index>(k)) = stats[k].array_response;
    gains(static_cast<Eigen::Index>(k)) = stats[k].gamma;
  }
  return QuadFormSet(std::move(responses), std::move(gains), config.noise_scale());
}

Eigen::VectorXd common_rates(const QuadValues& qv) {
  return (qv.ac.array() / qv.bc.array()).log() / std::log(2.0);
}

Eigen::VectorXd private_rates(const QuadValues& qv) {
  return (qv.ap.array() / qv.bp.array()).log() / std::log(2.0);
}

Eigen::VectorXd common_rates(const Eigen::VectorXcd& f, const QuadFormSet& q) {
  return common_rates(q.values(f));
}

Eigen::VectorXd private_rates(const Eigen::VectorXcd& f, const QuadFormSet& q) {
  return private_rates(q.values(f));
}

double rate_common(int k, const Eigen::VectorXcd& f, const QuadFormSet& q) {
  return common_rates(f, q)(k);
}

double rate_private(int k, const Eigen::VectorXcd& f, const QuadFormSet& q) {
  return private_rates(f, q)(k);
}

OfferedRates offered_rates(const Eigen::VectorXcd& f, const Eigen::VectorXd& portions,
                           const QuadFormSet& q) {
  const int k_users = q.users();
  if (portions.size() != k_users + 1) throw std::invalid_argument("offered_rates: need K+1 portions");
  const QuadValues qv = q.values(f);
  OfferedRates out;
  out.common_total = common_rates(qv).minCoeff();
  out.unicast = private_rates(qv) + portions.head(k_users) * out.common_total;
  out.multicast = portions(k_users) * out.common_total;
  return out;
}

std::vector<ChannelStats> realized_stats(const std::vector<ChannelStats>& stats,
                                         const std::vector<ChannelSample>& samples) {
  if (stats.size() != samples.size()) throw std::invalid_argument("realized_stats: size mismatch");
  std::vector<ChannelStats> out = stats;
  for (std::size_t k = 0; k < out.size(); ++k) out[k].gamma = std::norm(samples[k].gain);
  return out;
}

OfferedRates instantaneous_rates(const Eigen::VectorXcd& f, const Eigen::VectorXd& portions,
                                 const std::vector<ChannelSample>& samples,
                                 const std::vector<ChannelStats>& stats, const SystemConfig& config) {
  return offered_rates(f, portions, build_quadforms(realized_stats(stats, samples), config));
}

}  // namespace rsnoum
