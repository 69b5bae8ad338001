#include "sofr/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>

#include "sofr/errors.hpp"
#include "sofr/rng.hpp"
#include "sofr/special.hpp"

namespace sofr::vem {

namespace {

double clamp_prob(double x) {
  return std::min(1.0 - kProbClamp, std::max(kProbClamp, x));
}

Eigen::VectorXd block_expand(const Eigen::VectorXd& v,
                             const std::vector<BlockIndex>& blocks,
                             int total) {
  Eigen::VectorXd out(total);
  for (std::size_t j = 0; j < blocks.size(); ++j)
    out.segment(blocks[j].offset, blocks[j].size).setConstant(v[j]);
  return out;
}

Eigen::VectorXd e_inv_tau2(const VariationalState& s) {
  return (s.gig_psi.array() / s.gig_chi.array()).sqrt();
}

Eigen::VectorXd e_inv_nu2(const VariationalState& s) {
  return (s.gig_alpha_psi.array() / s.gig_alpha_chi.array()).sqrt();
}

double e_inv_sigma2(const VariationalState& s) {
  return s.delta1_star / s.delta2_star;
}

double e_log_sigma2(const VariationalState& s) {
  return std::log(s.delta2_star) - digamma(s.delta1_star);
}

// response with the expected scalar contribution removed
Eigen::VectorXd y_minus_scalar(const VariationalState& s, const Problem& prob) {
  return prob.y - prob.design->scalars * s.pu.cwiseProduct(s.mu_alpha);
}

// response with the expected functional contribution removed
Eigen::VectorXd y_minus_functional(const VariationalState& s,
                                   const Problem& prob) {
  const Eigen::VectorXd ez =
      block_expand(s.pz, prob.design->blocks, prob.total_coef());
  return prob.y - prob.design->W * ez.cwiseProduct(s.mu_b);
}

Eigen::LLT<Eigen::MatrixXd> factorize_spd(Eigen::MatrixXd m, double jitter,
                                          const char* what) {
  if (jitter > 0.0) m.diagonal().array() += jitter;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() == Eigen::Success) return llt;
  // retry once with a trace-scaled ridge
  m.diagonal().array() += 1e-8 * m.trace() / static_cast<double>(m.rows());
  llt.compute(m);
  if (llt.info() == Eigen::Success) return llt;
  throw NumericalError(std::string(what) +
                       ": matrix not positive definite even after jitter");
}

double log_det_from_spd(const Eigen::MatrixXd& m, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw NumericalError(std::string(what) + ": covariance not positive definite");
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

// scalar-level Omega: entry (l,l) = p_l, (l,m) = p_l p_m
Eigen::MatrixXd omega_dense(const Eigen::VectorXd& p) {
  Eigen::MatrixXd omega = p * p.transpose();
  omega.diagonal() = p;
  return omega;
}

}  // namespace

Problem make_problem(const DesignMatrix& design, const Eigen::VectorXd& y) {
  if (y.size() != design.n())
    throw InputError("make_problem: response length does not match design");
  Problem prob;
  prob.design = &design;
  prob.y = y;
  prob.Wty = design.W.transpose() * y;
  prob.Xsty = design.q() > 0 ? Eigen::VectorXd(design.scalars.transpose() * y)
                             : Eigen::VectorXd(0);
  prob.yty = y.squaredNorm();
  prob.n = static_cast<int>(y.size());
  prob.col_block.resize(design.total_coef());
  for (std::size_t j = 0; j < design.blocks.size(); ++j)
    for (int k = 0; k < design.blocks[j].size; ++k)
      prob.col_block[design.blocks[j].offset + k] = static_cast<int>(j);
  return prob;
}

Eigen::MatrixXd expected_gamma_wtw(const Eigen::VectorXd& pz,
                                   const Eigen::MatrixXd& wtw,
                                   const std::vector<BlockIndex>& blocks) {
  Eigen::MatrixXd out(wtw.rows(), wtw.cols());
  for (std::size_t j = 0; j < blocks.size(); ++j)
    for (std::size_t l = 0; l < blocks.size(); ++l) {
      const double factor = (j == l) ? pz[j] : pz[j] * pz[l];
      out.block(blocks[j].offset, blocks[l].offset, blocks[j].size,
                blocks[l].size) =
          factor * wtw.block(blocks[j].offset, blocks[l].offset,
                             blocks[j].size, blocks[l].size);
    }
  return out;
}

VariationalState init_state(const Problem& prob, const PriorConfig& prior) {
  prior.validate();
  const int total = prob.total_coef();
  const int p = prob.p();
  const int q = prob.q();

  VariationalState s;
  s.mu_b = Eigen::VectorXd::Zero(total);
  s.sigma_b = Eigen::MatrixXd::Identity(total, total);

  s.pz.resize(p);
  switch (prior.pz_init_mode) {
    case PzInit::AllOne:
      s.pz.setOnes();
      break;
    case PzInit::Vector:
      if (static_cast<int>(prior.pz_init.size()) != p)
        throw InputError("init_state: pz_init length does not match covariate count");
      for (int j = 0; j < p; ++j) s.pz[j] = prior.pz_init[j];
      break;
    case PzInit::Random:
      throw InputError(
          "init_state: pz_init 'random' must be resolved by restart_fit");
  }
  for (int j = 0; j < p; ++j) s.pz[j] = clamp_prob(s.pz[j]);
  s.theta_a = s.pz.array() + 0.5;
  s.theta_b = 1.5 - s.pz.array();

  s.delta1_star = prior.delta1 + 2.0;
  double sigma2_init = prior.sigma2_mean_init;
  if (!(sigma2_init > 0.0)) {
    const double mean = prob.y.mean();
    sigma2_init = (prob.y.array() - mean).square().sum() /
                  std::max(1, prob.n - 1);
    if (!(sigma2_init > 0.0)) sigma2_init = 1.0;
  }
  s.delta2_star = sigma2_init * (prior.delta1 + 1.0);

  s.lambda2 = Eigen::VectorXd::Constant(p, prior.lambda2_init);
  s.gig_chi = Eigen::VectorXd::Constant(total, 1.0);
  s.gig_psi = block_expand(s.lambda2, prob.design->blocks, total);
  s.gig_e_log.resize(total);
  for (int j = 0; j < p; ++j) {
    const double e_log = gig_half_moments(1.0, s.lambda2[j]).e_log;
    s.gig_e_log
        .segment(prob.design->blocks[j].offset, prob.design->blocks[j].size)
        .setConstant(e_log);
  }

  s.mu_alpha = Eigen::VectorXd::Zero(q);
  s.sigma_alpha = Eigen::MatrixXd::Identity(q, q);
  s.pu.resize(q);
  if (prior.pu_init.empty()) {
    s.pu.setOnes();
  } else {
    if (static_cast<int>(prior.pu_init.size()) != q)
      throw InputError("init_state: pu_init length does not match scalar count");
    for (int l = 0; l < q; ++l) s.pu[l] = prior.pu_init[l];
  }
  for (int l = 0; l < q; ++l) s.pu[l] = clamp_prob(s.pu[l]);
  s.theta_u_a = s.pu.array() + 0.5;
  s.theta_u_b = 1.5 - s.pu.array();
  s.lambda2_alpha = Eigen::VectorXd::Constant(q, prior.lambda2_init);
  s.gig_alpha_chi = Eigen::VectorXd::Constant(q, 1.0);
  s.gig_alpha_psi = s.lambda2_alpha;
  s.gig_alpha_e_log.resize(q);
  if (q > 0) {
    const double e_log = gig_half_moments(1.0, prior.lambda2_init).e_log;
    s.gig_alpha_e_log.setConstant(e_log);
  }
  return s;
}

void update_b(VariationalState& s, const Problem& prob,
              const PriorConfig& prior) {
  const auto& blocks = prob.design->blocks;
  const int total = prob.total_coef();
  Eigen::MatrixXd q_mat = expected_gamma_wtw(s.pz, prob.design->WtW, blocks);
  q_mat.diagonal() += e_inv_tau2(s);
  const auto llt = factorize_spd(std::move(q_mat), prior.jitter, "update_b");
  const Eigen::VectorXd wty =
      prob.q() == 0
          ? prob.Wty
          : Eigen::VectorXd(prob.design->W.transpose() * y_minus_scalar(s, prob));
  const Eigen::VectorXd ez = block_expand(s.pz, blocks, total);
  s.mu_b = llt.solve(ez.cwiseProduct(wty));
  s.sigma_b = llt.solve(Eigen::MatrixXd::Identity(total, total)) /
              e_inv_sigma2(s);
  s.sigma_b = 0.5 * (s.sigma_b + s.sigma_b.transpose()).eval();
}

void update_alpha(VariationalState& s, const Problem& prob,
                  const PriorConfig& prior) {
  const int q = prob.q();
  if (q == 0) return;
  Eigen::MatrixXd m = prob.design->XstXs.cwiseProduct(omega_dense(s.pu));
  m.diagonal() += e_inv_nu2(s);
  const auto llt = factorize_spd(std::move(m), prior.jitter, "update_alpha");
  const Eigen::VectorXd xty =
      prob.design->scalars.transpose() * y_minus_functional(s, prob);
  s.mu_alpha = llt.solve(s.pu.cwiseProduct(xty));
  s.sigma_alpha =
      llt.solve(Eigen::MatrixXd::Identity(q, q)) / e_inv_sigma2(s);
  s.sigma_alpha = 0.5 * (s.sigma_alpha + s.sigma_alpha.transpose()).eval();
}

double expected_residual_quadform(const VariationalState& s,
                                  const Problem& prob) {
  const auto& blocks = prob.design->blocks;
  const int total = prob.total_coef();
  const Eigen::VectorXd ez = block_expand(s.pz, blocks, total);
  const Eigen::MatrixXd mb = s.sigma_b + s.mu_b * s.mu_b.transpose();
  double quad = prob.yty - 2.0 * prob.Wty.dot(ez.cwiseProduct(s.mu_b)) +
                mb.cwiseProduct(
                      expected_gamma_wtw(s.pz, prob.design->WtW, blocks))
                    .sum();
  if (prob.q() > 0) {
    const Eigen::MatrixXd ma =
        s.sigma_alpha + s.mu_alpha * s.mu_alpha.transpose();
    const Eigen::VectorXd ua = s.pu.cwiseProduct(s.mu_alpha);
    quad += -2.0 * prob.Xsty.dot(ua) +
            ma.cwiseProduct(prob.design->XstXs.cwiseProduct(omega_dense(s.pu)))
                .sum() +
            2.0 * ez.cwiseProduct(s.mu_b)
                      .dot(prob.design->W.transpose() *
                           (prob.design->scalars * ua));
  }
  return quad;
}

void update_sigma2(VariationalState& s, const Problem& prob,
                   const PriorConfig& prior) {
  const Eigen::VectorXd e_b2 = s.sigma_b.diagonal() + s.mu_b.cwiseAbs2();
  double accum = expected_residual_quadform(s, prob) +
                 e_inv_tau2(s).dot(e_b2) + 2.0 * prior.delta2;
  if (prob.q() > 0) {
    const Eigen::VectorXd e_a2 =
        s.sigma_alpha.diagonal() + s.mu_alpha.cwiseAbs2();
    accum += e_inv_nu2(s).dot(e_a2);
  }
  s.delta1_star =
      0.5 * (prob.n + prob.total_coef() + prob.q()) + prior.delta1;
  s.delta2_star = 0.5 * accum;
  if (!(s.delta2_star > 0.0))
    throw NumericalError("update_sigma2: non-positive delta2*");
}

void update_tau2(VariationalState& s, const Problem& prob) {
  const double e1s = e_inv_sigma2(s);
  const auto& blocks = prob.design->blocks;
  for (std::size_t j = 0; j < blocks.size(); ++j)
    for (int k = 0; k < blocks[j].size; ++k) {
      const int idx = blocks[j].offset + k;
      const double e_b2 = s.sigma_b(idx, idx) + s.mu_b[idx] * s.mu_b[idx];
      s.gig_chi[idx] = std::max(e_b2 * e1s, kChiFloor);
      s.gig_psi[idx] = s.lambda2[j];
      s.gig_e_log[idx] =
          gig_half_moments(s.gig_chi[idx], s.gig_psi[idx]).e_log;
    }
}

void update_nu2(VariationalState& s, const Problem& prob) {
  const double e1s = e_inv_sigma2(s);
  for (int l = 0; l < prob.q(); ++l) {
    const double e_a2 =
        s.sigma_alpha(l, l) + s.mu_alpha[l] * s.mu_alpha[l];
    s.gig_alpha_chi[l] = std::max(e_a2 * e1s, kChiFloor);
    s.gig_alpha_psi[l] = s.lambda2_alpha[l];
    s.gig_alpha_e_log[l] =
        gig_half_moments(s.gig_alpha_chi[l], s.gig_alpha_psi[l]).e_log;
  }
}

void update_theta(VariationalState& s, int j) {
  s.theta_a[j] = s.pz[j] + 0.5;
  s.theta_b[j] = 2.0 - s.pz[j] - 0.5;
}

void update_theta_u(VariationalState& s, int l) {
  s.theta_u_a[l] = s.pu[l] + 0.5;
  s.theta_u_b[l] = 2.0 - s.pu[l] - 0.5;
}

void update_z(VariationalState& s, const Problem& prob, int j) {
  const auto& blocks = prob.design->blocks;
  const auto& wtw = prob.design->WtW;
  const int off = blocks[j].offset;
  const int size = blocks[j].size;
  const double dg_ab = digamma(s.theta_a[j] + s.theta_b[j]);
  const double e_log_theta = digamma(s.theta_a[j]) - dg_ab;
  const double e_log_1m_theta = digamma(s.theta_b[j]) - dg_ab;

  const Eigen::VectorXd wty =
      prob.q() == 0
          ? prob.Wty
          : Eigen::VectorXd(prob.design->W.transpose() * y_minus_scalar(s, prob));
  const Eigen::MatrixXd mb = s.sigma_b + s.mu_b * s.mu_b.transpose();

  // difference of the expected residual quadform with Z_j pinned at 1 vs 0;
  // only the row/column blocks of j survive
  double s_j = 0.0;
  for (int a = 0; a < size; ++a) {
    const int row = off + a;
    for (int t = 0; t < wtw.cols(); ++t) {
      const double c = mb(row, t) * wtw(row, t);
      if (prob.col_block[t] == j) {
        s_j += c;
      } else {
        s_j += 2.0 * c * s.pz[prob.col_block[t]];
      }
    }
  }
  const double quad_diff =
      -2.0 * wty.segment(off, size).dot(s.mu_b.segment(off, size)) + s_j;
  const double d =
      e_log_theta - e_log_1m_theta - 0.5 * e_inv_sigma2(s) * quad_diff;
  s.pz[j] = clamp_prob(1.0 / (1.0 + std::exp(-d)));
}

void update_u(VariationalState& s, const Problem& prob, int l) {
  const double dg_ab = digamma(s.theta_u_a[l] + s.theta_u_b[l]);
  const double e_log_theta = digamma(s.theta_u_a[l]) - dg_ab;
  const double e_log_1m_theta = digamma(s.theta_u_b[l]) - dg_ab;

  const Eigen::VectorXd xty =
      prob.design->scalars.transpose() * y_minus_functional(s, prob);
  const Eigen::MatrixXd ma =
      s.sigma_alpha + s.mu_alpha * s.mu_alpha.transpose();

  double s_l = 0.0;
  for (int t = 0; t < prob.q(); ++t) {
    const double c = ma(l, t) * prob.design->XstXs(l, t);
    s_l += (t == l) ? c : 2.0 * c * s.pu[t];
  }
  const double quad_diff = -2.0 * xty[l] * s.mu_alpha[l] + s_l;
  const double d =
      e_log_theta - e_log_1m_theta - 0.5 * e_inv_sigma2(s) * quad_diff;
  s.pu[l] = clamp_prob(1.0 / (1.0 + std::exp(-d)));
}

void mstep_lambda(VariationalState& s, const Problem& prob) {
  const auto& blocks = prob.design->blocks;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    double sum_e_tau2 = 0.0;
    for (int k = 0; k < blocks[j].size; ++k) {
      const int idx = blocks[j].offset + k;
      sum_e_tau2 += std::sqrt(s.gig_chi[idx] / s.gig_psi[idx]) +
                    1.0 / s.gig_psi[idx];
    }
    s.lambda2[j] = 2.0 * static_cast<double>(blocks[j].size) / sum_e_tau2;
  }
}

void mstep_lambda_alpha(VariationalState& s) {
  for (int l = 0; l < s.q(); ++l) {
    const double e_nu2 = std::sqrt(s.gig_alpha_chi[l] / s.gig_alpha_psi[l]) +
                         1.0 / s.gig_alpha_psi[l];
    s.lambda2_alpha[l] = 2.0 / e_nu2;
  }
}

namespace {

// E log p(tau^2 | lambda^2) - E log q(tau^2) for one GIG(1/2, chi, psi)
// factor under an Exponential(lambda^2 / 2) prior (log 2 terms cancel).
double gig_block_term(double chi, double psi, double lambda2, double e_log) {
  const double e_val = std::sqrt(chi / psi) + 1.0 / psi;
  const double e_inv = std::sqrt(psi / chi);
  const double omega = std::sqrt(chi) * std::sqrt(psi);
  return std::log(lambda2) - 0.5 * lambda2 * e_val -
         0.25 * (std::log(psi) - std::log(chi)) + log_bessel_k_half(omega) +
         0.5 * e_log + 0.5 * (chi * e_inv + psi * e_val);
}

// E log p(Bern | theta) + entropy, with E log theta terms from a Beta factor
double bernoulli_block_term(double p, double e_log_theta,
                            double e_log_1m_theta) {
  return p * e_log_theta + (1.0 - p) * e_log_1m_theta - p * std::log(p) -
         (1.0 - p) * std::log(1.0 - p);
}

// E log p(theta) - E log q(theta) for Beta(0.5, 0.5) prior vs Beta(a, b)
double beta_block_term(double a, double b, double e_log_theta,
                       double e_log_1m_theta) {
  return (0.5 - a) * e_log_theta + (0.5 - b) * e_log_1m_theta -
         log_gamma(a + b) + log_gamma(a) + log_gamma(b) -
         2.0 * log_gamma(0.5);
}

}  // namespace

ElboTerms compute_elbo(const VariationalState& s, const Problem& prob,
                       const PriorConfig& prior) {
  ElboTerms t;
  const int total = prob.total_coef();
  const int q = prob.q();
  const double e1s = e_inv_sigma2(s);
  const double elog_s2 = e_log_sigma2(s);
  constexpr double log_2pi = 1.8378770664093454836;

  t.likelihood = -0.5 * prob.n * log_2pi - 0.5 * prob.n * elog_s2 -
                 0.5 * e1s * expected_residual_quadform(s, prob);

  for (int j = 0; j < prob.p(); ++j) {
    const double dg_ab = digamma(s.theta_a[j] + s.theta_b[j]);
    const double e_log_theta = digamma(s.theta_a[j]) - dg_ab;
    const double e_log_1m_theta = digamma(s.theta_b[j]) - dg_ab;
    const double pz = clamp_prob(s.pz[j]);
    t.z_block += bernoulli_block_term(pz, e_log_theta, e_log_1m_theta);
    t.theta_block += beta_block_term(s.theta_a[j], s.theta_b[j], e_log_theta,
                                     e_log_1m_theta);
  }

  const Eigen::VectorXd e_b2 = s.sigma_b.diagonal() + s.mu_b.cwiseAbs2();
  t.b_block = -0.5 * total * elog_s2 - 0.5 * s.gig_e_log.sum() -
              0.5 * e1s * e_inv_tau2(s).dot(e_b2) +
              0.5 * log_det_from_spd(s.sigma_b, "compute_elbo") +
              0.5 * total;

  t.sigma2_block = prior.delta1 * std::log(prior.delta2) -
                   log_gamma(prior.delta1) -
                   s.delta1_star * std::log(s.delta2_star) +
                   log_gamma(s.delta1_star) +
                   (s.delta1_star - prior.delta1) * elog_s2 +
                   (s.delta2_star - prior.delta2) * e1s;

  const auto& blocks = prob.design->blocks;
  for (std::size_t j = 0; j < blocks.size(); ++j)
    for (int k = 0; k < blocks[j].size; ++k) {
      const int idx = blocks[j].offset + k;
      t.tau2_block += gig_block_term(s.gig_chi[idx], s.gig_psi[idx],
                                     s.lambda2[j], s.gig_e_log[idx]);
    }

  if (q > 0) {
    for (int l = 0; l < q; ++l) {
      const double dg_ab = digamma(s.theta_u_a[l] + s.theta_u_b[l]);
      const double e_log_theta = digamma(s.theta_u_a[l]) - dg_ab;
      const double e_log_1m_theta = digamma(s.theta_u_b[l]) - dg_ab;
      const double pu = clamp_prob(s.pu[l]);
      t.u_block += bernoulli_block_term(pu, e_log_theta, e_log_1m_theta);
      t.theta_u_block += beta_block_term(s.theta_u_a[l], s.theta_u_b[l],
                                         e_log_theta, e_log_1m_theta);
      t.nu2_block +=
          gig_block_term(s.gig_alpha_chi[l], s.gig_alpha_psi[l],
                         s.lambda2_alpha[l], s.gig_alpha_e_log[l]);
    }
    const Eigen::VectorXd e_a2 =
        s.sigma_alpha.diagonal() + s.mu_alpha.cwiseAbs2();
    t.alpha_block = -0.5 * q * elog_s2 - 0.5 * s.gig_alpha_e_log.sum() -
                    0.5 * e1s * e_inv_nu2(s).dot(e_a2) +
                    0.5 * log_det_from_spd(s.sigma_alpha, "compute_elbo") +
                    0.5 * q;
  }

  if (!std::isfinite(t.total())) {
    std::ostringstream msg;
    msg << "compute_elbo: non-finite ELBO; terms: likelihood=" << t.likelihood
        << " z=" << t.z_block << " b=" << t.b_block
        << " theta=" << t.theta_block << " sigma2=" << t.sigma2_block
        << " tau2=" << t.tau2_block << " u=" << t.u_block
        << " alpha=" << t.alpha_block << " theta_u=" << t.theta_u_block
        << " nu2=" << t.nu2_block;
    throw NumericalError(msg.str());
  }
  return t;
}

namespace {

FitOutcome run_vem(const Problem& prob, const PriorConfig& prior) {
  VariationalState s = init_state(prob, prior);
  const bool scalar_block = prob.q() > 0;

  FitOutcome out;
  double prev = 0.0;
  bool have_prev = false;
  for (int iter = 1; iter <= prior.max_iter; ++iter) {
    update_b(s, prob, prior);
    if (scalar_block) update_alpha(s, prob, prior);
    update_sigma2(s, prob, prior);
    update_tau2(s, prob);
    if (scalar_block) update_nu2(s, prob);
    for (int j = 0; j < prob.p(); ++j) {
      update_theta(s, j);
      update_z(s, prob, j);
    }
    if (scalar_block)
      for (int l = 0; l < prob.q(); ++l) {
        update_theta_u(s, l);
        update_u(s, prob, l);
      }
    mstep_lambda(s, prob);
    if (scalar_block) mstep_lambda_alpha(s);

    const ElboTerms terms = compute_elbo(s, prob, prior);
    const double elbo = terms.total();
    out.trace.values.push_back(elbo);
    out.trace.terms.push_back(terms);
    out.iterations = iter;
    if (have_prev && elbo - prev <= prior.tol) {
      out.converged = true;
      break;
    }
    prev = elbo;
    have_prev = true;
  }
  out.final_elbo = out.trace.values.back();
  out.state = std::move(s);
  return out;
}

}  // namespace

FitOutcome fit(const DesignMatrix& design, const Eigen::VectorXd& y,
               const PriorConfig& prior) {
  prior.validate();
  if (design.q() != 0)
    throw InputError("fit: design carries scalar covariates; use fit_partial");
  return run_vem(make_problem(design, y), prior);
}

FitOutcome fit_partial(const DesignMatrix& design, const Eigen::VectorXd& y,
                       const PriorConfig& prior) {
  prior.validate();
  return run_vem(make_problem(design, y), prior);
}

FitOutcome restart_fit(const DesignMatrix& design, const Eigen::VectorXd& y,
                       const PriorConfig& prior, int n_restarts,
                       std::uint64_t seed) {
  prior.validate();
  if (n_restarts < 1)
    throw InputError("restart_fit: need at least one restart");
  const Problem prob = make_problem(design, y);

  FitOutcome best;
  bool have_best = false;
  int best_selected = 0;
  std::string last_error = "no restart executed";

  for (int r = 0; r < n_restarts; ++r) {
    PriorConfig restart_prior = prior;
    if (r > 0 || prior.pz_init_mode == PzInit::Random) {
      Rng rng(seed, static_cast<std::uint64_t>(r));
      restart_prior.pz_init_mode = PzInit::Vector;
      restart_prior.pz_init.resize(prob.p());
      for (int j = 0; j < prob.p(); ++j)
        restart_prior.pz_init[j] = rng.bernoulli(0.5) ? 1.0 : 0.0;
      restart_prior.pu_init.resize(prob.q());
      for (int l = 0; l < prob.q(); ++l)
        restart_prior.pu_init[l] = rng.bernoulli(0.5) ? 1.0 : 0.0;
    }
    FitOutcome out;
    try {
      out = run_vem(prob, restart_prior);
    } catch (const NumericalError& err) {
      last_error = err.what();
      continue;
    }
    const int selected =
        static_cast<int>((out.state.pz.array() > 0.5).count()) +
        static_cast<int>((out.state.pu.array() > 0.5).count());
    const bool better =
        !have_best || out.final_elbo > best.final_elbo ||
        (out.final_elbo == best.final_elbo && selected < best_selected);
    if (better) {
      best = std::move(out);
      best_selected = selected;
      have_best = true;
    }
  }
  if (!have_best)
    throw NumericalError("restart_fit: all restarts failed numerically; last: " +
                         last_error);
  return best;
}

}  // namespace sofr::vem
