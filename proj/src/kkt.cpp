#include "rsnoum/kkt.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace rsnoum {

namespace {

const double kLn2 = std::log(2.0);

}  // namespace

QuadCombination QuadCombination::zero(int users) {
  QuadCombination c;
  c.signal = Eigen::MatrixXd::Zero(users + 1, users);
  c.identity = Eigen::VectorXd::Zero(users + 1);
  return c;
}

void QuadCombination::add_ac(const QuadFormSet& q, int k, double coef) {
  signal.col(k).array() += coef;
  identity.array() += coef * q.noise_scale();
}

void QuadCombination::add_bc(const QuadFormSet& q, int k, double coef) {
  signal.col(k).tail(q.users()).array() += coef;
  identity.array() += coef * q.noise_scale();
}

void QuadCombination::add_ap(const QuadFormSet& q, int k, double coef) { add_bc(q, k, coef); }

void QuadCombination::add_bp(const QuadFormSet& q, int k, double coef) {
  add_bc(q, k, coef);
  signal(k + 1, k) -= coef;
}

QuadCombination& QuadCombination::add_scaled(const QuadCombination& other, double coef) {
  signal += coef * other.signal;
  identity += coef * other.identity;
  return *this;
}

QuadCombination& QuadCombination::operator*=(double s) {
  signal *= s;
  identity *= s;
  return *this;
}

BlockDiagonal BlockDiagonal::from(const QuadCombination& c, const QuadFormSet& q) {
  const Eigen::MatrixXcd& a = q.responses();
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(static_cast<std::size_t>(q.blocks()));
  for (int b = 0; b < q.blocks(); ++b) {
    const Eigen::VectorXd scale = c.signal.row(b).transpose().cwiseProduct(q.gains());
    Eigen::MatrixXcd block = (a * scale.asDiagonal()) * a.adjoint();
    block.diagonal().array() += c.identity(b);
    // exact Hermitian symmetry for the Cholesky factorization
    block = 0.5 * (block + block.adjoint()).eval();
    blocks.push_back(std::move(block));
  }
  return BlockDiagonal(std::move(blocks));
}

Eigen::Index BlockDiagonal::rows() const {
  Eigen::Index r = 0;
  for (const auto& b : blocks_) r += b.rows();
  return r;
}

Eigen::VectorXcd BlockDiagonal::apply(const Eigen::VectorXcd& x) const {
  Eigen::VectorXcd y(x.size());
  Eigen::Index offset = 0;
  for (const auto& b : blocks_) {
    y.segment(offset, b.rows()) = b * x.segment(offset, b.rows());
    offset += b.rows();
  }
  return y;
}

Eigen::VectorXcd BlockDiagonal::solve(const Eigen::VectorXcd& x) const {
  Eigen::VectorXcd y(x.size());
  Eigen::Index offset = 0;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const auto& b = blocks_[i];
    Eigen::LLT<Eigen::MatrixXcd> llt(b);
    if (llt.info() != Eigen::Success) {
      std::ostringstream msg;
      msg << "KKT block " << i << " is not positive definite (diagonal range ["
          << b.diagonal().real().minCoeff() << ", " << b.diagonal().real().maxCoeff() << "])";
      throw NumericalBreakdown(msg.str());
    }
    y.segment(offset, b.rows()) = llt.solve(x.segment(offset, b.rows()));
    offset += b.rows();
  }
  if (!y.allFinite()) throw NumericalBreakdown("KKT solve produced non-finite values");
  return y;
}

Eigen::MatrixXcd BlockDiagonal::dense() const {
  const Eigen::Index n = rows();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  Eigen::Index offset = 0;
  for (const auto& b : blocks_) {
    m.block(offset, offset, b.rows(), b.cols()) = b;
    offset += b.rows();
  }
  return m;
}

double BlockDiagonal::min_eigenvalue() const {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& b : blocks_) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(b, Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
  }
  return lo;
}

BlockDiagonal& BlockDiagonal::operator*=(double s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

CommonRateLoads build_LA_LB(const QuadValues& quad, const Eigen::VectorXd& weights, const QuadFormSet& q) {
  const int k_users = q.users();
  CommonRateLoads loads{QuadCombination::zero(k_users), QuadCombination::zero(k_users)};
  for (int i = 0; i < k_users; ++i) {
    loads.la.add_ac(q, i, weights(i) / quad.ac(i));
    loads.lb.add_bc(q, i, weights(i) / quad.bc(i));
  }
  return loads;
}

CommonRateLoads build_LA_LB(const Eigen::VectorXcd& f, const QuadFormSet& q, double alpha) {
  const QuadValues quad = q.values(f);
  return build_LA_LB(quad, softmax_weights(common_rates(quad), alpha), q);
}

BlockDiagonal KktF::a_matrix(const QuadFormSet& q) const {
  BlockDiagonal m = BlockDiagonal::from(a, q);
  if (prefactors == Prefactors::Included) m *= lambda_num;
  return m;
}

BlockDiagonal KktF::b_matrix(const QuadFormSet& q) const {
  BlockDiagonal m = BlockDiagonal::from(b, q);
  if (prefactors == Prefactors::Included) m *= lambda_den;
  return m;
}

Eigen::VectorXd KktV::d_diagonal() const {
  return prefactors == Prefactors::Included ? Eigen::VectorXd(lambda_num * d) : d;
}

Eigen::VectorXd KktV::e_diagonal() const {
  return prefactors == Prefactors::Included ? Eigen::VectorXd(lambda_den * e) : e;
}

KktF build_kkt_f(const Evaluation& eval, const DemandProfile& demands, const QuadFormSet& q,
                 Prefactors prefactors) {
  const int k_users = q.users();
  const CommonRateLoads loads = build_LA_LB(eval.quad, eval.weights, q);
  const double s = eval.smoothed;
  const Eigen::VectorXd& p = eval.shares;

  // Every coefficient below is non-negative, so A and B are sums of PSD
  // terms; their difference is (ln 2 / 2) times the negative conjugate
  // gradient of the objective.
  KktF kkt{QuadCombination::zero(k_users), QuadCombination::zero(k_users)};
  for (int j = 0; j < k_users; ++j) {
    const double target = demands.unicast(j);
    const double rp = eval.priv(j);
    const double cj = p(j) * s;
    const double ap = eval.quad.ap(j);
    const double bp = eval.quad.bp(j);

    kkt.a.add_ap(q, j, target / ap);
    kkt.a.add_bp(q, j, (rp + cj) / bp);
    kkt.a.add_scaled(loads.la, target * p(j));
    kkt.a.add_scaled(loads.lb, p(j) * (cj + rp));

    kkt.b.add_bp(q, j, target / bp);
    kkt.b.add_ap(q, j, (rp + cj) / ap);
    kkt.b.add_scaled(loads.lb, target * p(j));
    kkt.b.add_scaled(loads.la, p(j) * (cj + rp));
  }
  const double pmc = p(k_users);
  const double cmc = pmc * s;
  kkt.a.add_scaled(loads.la, demands.eta_mc * demands.multicast * pmc);
  kkt.a.add_scaled(loads.lb, demands.eta_mc * pmc * cmc);
  kkt.b.add_scaled(loads.lb, demands.eta_mc * demands.multicast * pmc);
  kkt.b.add_scaled(loads.la, demands.eta_mc * pmc * cmc);

  kkt.a.identity.array() += kKktFloor;
  kkt.b.identity.array() += kKktFloor;

  kkt.lambda_num = std::exp(-eval.unicast_error);
  kkt.lambda_den = std::exp(eval.multicast_error);
  kkt.prefactors = prefactors;
  return kkt;
}

KktF build_kkt_f(const Eigen::VectorXcd& f, const Eigen::VectorXd& v, const QuadFormSet& q,
                 const DemandProfile& demands, double alpha, Prefactors prefactors) {
  return build_kkt_f(evaluate(f, v, q, demands, alpha), demands, q, prefactors);
}

KktV build_kkt_v(const Evaluation& eval, const Eigen::VectorXd& v, const DemandProfile& demands,
                 Prefactors prefactors) {
  const int k_users = static_cast<int>(eval.priv.size());
  const double vv = v.squaredNorm();
  const double s = eval.smoothed;
  const Eigen::VectorXd& p = eval.shares;

  // Scaled-identity parts shared by every diagonal entry.
  double d_common = 0.0;
  double e_common = 0.0;
  for (int j = 0; j < k_users; ++j) {
    d_common += (s * p(j) + eval.priv(j)) * p(j);
    e_common += demands.unicast(j) * p(j);
  }
  d_common += demands.eta_mc * s * p(k_users) * p(k_users);
  e_common += demands.eta_mc * demands.multicast * p(k_users);

  KktV kkt;
  kkt.d = Eigen::VectorXd::Constant(k_users + 1, d_common);
  kkt.e = Eigen::VectorXd::Constant(k_users + 1, e_common);
  for (int j = 0; j < k_users; ++j) {
    kkt.d(j) += demands.unicast(j);
    kkt.e(j) += s * p(j) + eval.priv(j);
  }
  kkt.d(k_users) += demands.eta_mc * demands.multicast;
  kkt.e(k_users) += demands.eta_mc * s * p(k_users);
  kkt.d /= vv;
  kkt.e /= vv;
  kkt.d.array() += kKktFloor;
  kkt.e.array() += kKktFloor;

  kkt.lambda_num = std::exp(-eval.unicast_error);
  kkt.lambda_den = std::exp(eval.multicast_error);
  kkt.prefactors = prefactors;
  return kkt;
}

KktV build_kkt_v(const Eigen::VectorXcd& f, const Eigen::VectorXd& v, const QuadFormSet& q,
                 const DemandProfile& demands, double alpha, Prefactors prefactors) {
  return build_kkt_v(evaluate(f, v, q, demands, alpha), v, demands, prefactors);
}

Eigen::VectorXcd kkt_gradient_f(const KktF& kkt, const Eigen::VectorXcd& f, const QuadFormSet& q) {
  const Eigen::VectorXcd diff = BlockDiagonal::from(kkt.a, q).apply(f) - BlockDiagonal::from(kkt.b, q).apply(f);
  return -(4.0 / kLn2) * diff;
}

Eigen::VectorXd kkt_gradient_v(const KktV& kkt, const Eigen::VectorXd& v, double smoothed) {
  return -4.0 * smoothed * (kkt.d - kkt.e).cwiseProduct(v);
}

double kkt_residual(const Eigen::VectorXcd& f, const Eigen::VectorXd& v, const QuadFormSet& q,
                    const DemandProfile& demands, double alpha, bool freeze_v) {
  const Evaluation eval = evaluate(f, v, q, demands, alpha);
  const double lambda = std::exp(-eval.objective);
  const KktF kf = build_kkt_f(eval, demands, q, Prefactors::Included);
  const Eigen::VectorXcd rf = kf.b_matrix(q).solve(kf.a_matrix(q).apply(f)) - lambda * f;
  double num2 = rf.squaredNorm();
  double den2 = f.squaredNorm();
  if (!freeze_v) {
    const KktV kv = build_kkt_v(eval, v, demands, Prefactors::Included);
    const Eigen::VectorXd rv = kv.d_diagonal().cwiseProduct(v).cwiseQuotient(kv.e_diagonal()) - lambda * v;
    num2 += rv.squaredNorm();
    den2 += v.squaredNorm();
  }
  return std::sqrt(num2 / den2);
}

}  // namespace rsnoum
