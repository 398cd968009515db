#include "aglearn/ricf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace aglearn {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;  // ln(2*pi)

struct LocalModel {
  std::vector<int> nodes;          // global ids, ascending: district + parents
  std::vector<int> district_idx;   // local indices of district nodes
  std::vector<char> in_district;   // per local index
  std::vector<std::vector<int>> pa;  // local parent indices per local index
  std::vector<std::vector<int>> sp;  // local spouse indices per local index
  Eigen::MatrixXd s;               // MLE-scaled covariance over nodes
};

LocalModel build_local(const CComponent& c, const Eigen::MatrixXd& q, int n) {
  LocalModel m;
  const NodeSet all = c.district | c.parent_union();
  m.nodes = set_to_vector(all);
  const int k = static_cast<int>(m.nodes.size());
  std::vector<int> local_of(kMaxNodes, -1);
  for (int li = 0; li < k; ++li) local_of[static_cast<std::size_t>(m.nodes[li])] = li;

  m.in_district.assign(static_cast<std::size_t>(k), 0);
  m.pa.assign(static_cast<std::size_t>(k), {});
  m.sp.assign(static_cast<std::size_t>(k), {});
  const std::vector<int> dnodes = c.district_nodes();
  for (std::size_t di = 0; di < dnodes.size(); ++di) {
    const int li = local_of[static_cast<std::size_t>(dnodes[di])];
    m.district_idx.push_back(li);
    m.in_district[static_cast<std::size_t>(li)] = 1;
    for_each_node(c.parents[di],
                  [&](int p) { m.pa[static_cast<std::size_t>(li)].push_back(local_of[static_cast<std::size_t>(p)]); });
  }
  for (auto [a, b] : c.bidirected) {
    const int la = local_of[static_cast<std::size_t>(a)];
    const int lb = local_of[static_cast<std::size_t>(b)];
    m.sp[static_cast<std::size_t>(la)].push_back(lb);
    m.sp[static_cast<std::size_t>(lb)].push_back(la);
  }

  // Directed edges inside the component must be acyclic; this keeps
  // det(I - B) = 1 and the likelihood formulas valid.
  {
    std::vector<int> indeg(static_cast<std::size_t>(k), 0);
    for (int li = 0; li < k; ++li)
      indeg[static_cast<std::size_t>(li)] = static_cast<int>(m.pa[static_cast<std::size_t>(li)].size());
    std::vector<int> ready;
    for (int li = 0; li < k; ++li)
      if (indeg[static_cast<std::size_t>(li)] == 0) ready.push_back(li);
    int emitted = 0;
    std::vector<std::vector<int>> children(static_cast<std::size_t>(k));
    for (int li = 0; li < k; ++li)
      for (int p : m.pa[static_cast<std::size_t>(li)]) children[static_cast<std::size_t>(p)].push_back(li);
    while (!ready.empty()) {
      const int u = ready.back();
      ready.pop_back();
      ++emitted;
      for (int v : children[static_cast<std::size_t>(u)])
        if (--indeg[static_cast<std::size_t>(v)] == 0) ready.push_back(v);
    }
    if (emitted != k) throw std::invalid_argument("component has a directed cycle");
  }

  m.s.resize(k, k);
  const double scale = static_cast<double>(n - 1) / static_cast<double>(n);
  for (int r = 0; r < k; ++r)
    for (int cidx = 0; cidx < k; ++cidx)
      m.s(r, cidx) = scale * q(m.nodes[static_cast<std::size_t>(r)], m.nodes[static_cast<std::size_t>(cidx)]);
  return m;
}

// Joint Gaussian log-likelihood over all local nodes at parameters (B, Omega).
double joint_loglik(const Eigen::MatrixXd& b, const Eigen::MatrixXd& omega,
                    const Eigen::MatrixXd& s, int n) {
  const Eigen::Index k = s.rows();
  const Eigen::MatrixXd resid = Eigen::MatrixXd::Identity(k, k) - b;
  // det(I - B) = 1: the directed part of a component is acyclic.
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(omega);
  if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() <= 0.0).any())
    throw std::runtime_error("fitted noise covariance is not positive definite");
  const double logdet = ldlt.vectorD().array().log().sum();
  const double trace = (resid.transpose() * ldlt.solve(resid * s)).trace();
  return -0.5 * n * (static_cast<double>(k) * kLogTwoPi + logdet + trace);
}

void take_closed_form_row(const LocalModel& m, int li, Eigen::MatrixXd& b,
                          Eigen::MatrixXd& omega) {
  const auto& pa = m.pa[static_cast<std::size_t>(li)];
  if (pa.empty()) {
    omega(li, li) = m.s(li, li);
    return;
  }
  const Eigen::Index np = static_cast<Eigen::Index>(pa.size());
  Eigen::MatrixXd sww(np, np);
  Eigen::VectorXd swi(np);
  for (Eigen::Index r = 0; r < np; ++r) {
    swi(r) = m.s(pa[static_cast<std::size_t>(r)], li);
    for (Eigen::Index cidx = 0; cidx < np; ++cidx)
      sww(r, cidx) = m.s(pa[static_cast<std::size_t>(r)], pa[static_cast<std::size_t>(cidx)]);
  }
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(sww);
  if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() <= 0.0).any())
    throw std::runtime_error("singular regression system (parent covariance)");
  const Eigen::VectorXd beta = ldlt.solve(swi);
  for (Eigen::Index r = 0; r < np; ++r) b(li, pa[static_cast<std::size_t>(r)]) = beta(r);
  const double lambda = m.s(li, li) - swi.dot(beta);
  if (lambda <= 0.0) throw std::runtime_error("nonpositive residual variance in regression");
  omega(li, li) = lambda;
}

// One RICF update of district node li given the current (B, Omega) of all
// other rows; returns the largest absolute parameter change.
double ricf_update_row(const LocalModel& m, int li, Eigen::MatrixXd& b,
                       Eigen::MatrixXd& omega) {
  const Eigen::Index k = m.s.rows();
  const auto& pa = m.pa[static_cast<std::size_t>(li)];
  const auto& sp = m.sp[static_cast<std::size_t>(li)];
  if (sp.empty()) {
    Eigen::MatrixXd b_old = b.row(li);
    const double om_old = omega(li, li);
    b.row(li).setZero();
    take_closed_form_row(m, li, b, omega);
    double change = std::abs(omega(li, li) - om_old);
    for (Eigen::Index j = 0; j < k; ++j) change = std::max(change, std::abs(b(li, j) - b_old(0, j)));
    return change;
  }

  std::vector<int> others;
  others.reserve(static_cast<std::size_t>(k) - 1);
  for (int j = 0; j < static_cast<int>(k); ++j)
    if (j != li) others.push_back(j);
  const Eigen::Index no = static_cast<Eigen::Index>(others.size());

  Eigen::MatrixXd omega_oo(no, no);
  for (Eigen::Index r = 0; r < no; ++r)
    for (Eigen::Index cidx = 0; cidx < no; ++cidx)
      omega_oo(r, cidx) = omega(others[static_cast<std::size_t>(r)], others[static_cast<std::size_t>(cidx)]);
  const Eigen::LDLT<Eigen::MatrixXd> oo(omega_oo);
  if (oo.info() != Eigen::Success || (oo.vectorD().array() <= 0.0).any())
    throw std::runtime_error("singular noise covariance during fitting");
  const Eigen::MatrixXd oinv = oo.solve(Eigen::MatrixXd::Identity(no, no));

  const Eigen::MatrixXd resid_t = (Eigen::MatrixXd::Identity(k, k) - b).transpose();
  const Eigen::MatrixXd cov_y_eps = m.s * resid_t;  // Cov(Y, eps)
  Eigen::MatrixXd r_oo(no, no);                     // Cov(eps_o, eps_o)
  {
    const Eigen::MatrixXd r_full = resid_t.transpose() * m.s * resid_t;
    for (Eigen::Index r = 0; r < no; ++r)
      for (Eigen::Index cidx = 0; cidx < no; ++cidx)
        r_oo(r, cidx) = r_full(others[static_cast<std::size_t>(r)], others[static_cast<std::size_t>(cidx)]);
  }

  // Pseudo-variables for the spouses of li: Z = (Omega_oo^{-1} eps_o)[sp].
  const Eigen::Index ns = static_cast<Eigen::Index>(sp.size());
  std::vector<Eigen::Index> sp_pos(sp.size());
  for (std::size_t six = 0; six < sp.size(); ++six) {
    const auto it = std::find(others.begin(), others.end(), sp[six]);
    sp_pos[six] = static_cast<Eigen::Index>(it - others.begin());
  }
  Eigen::MatrixXd cov_y_eps_o(k, no);
  for (Eigen::Index cidx = 0; cidx < no; ++cidx)
    cov_y_eps_o.col(cidx) = cov_y_eps.col(others[static_cast<std::size_t>(cidx)]);
  Eigen::MatrixXd cov_y_z(k, ns);  // Cov(Y, Z)
  for (Eigen::Index zc = 0; zc < ns; ++zc)
    cov_y_z.col(zc) = cov_y_eps_o * oinv.col(sp_pos[static_cast<std::size_t>(zc)]);
  Eigen::MatrixXd cov_z_z(ns, ns);
  {
    const Eigen::MatrixXd tmp = oinv * r_oo * oinv;
    for (Eigen::Index r = 0; r < ns; ++r)
      for (Eigen::Index cidx = 0; cidx < ns; ++cidx)
        cov_z_z(r, cidx) = tmp(sp_pos[static_cast<std::size_t>(r)], sp_pos[static_cast<std::size_t>(cidx)]);
  }

  const Eigen::Index np = static_cast<Eigen::Index>(pa.size());
  const Eigen::Index nr = np + ns;
  Eigen::MatrixXd gram(nr, nr);
  Eigen::VectorXd rhs(nr);
  for (Eigen::Index r = 0; r < np; ++r) {
    rhs(r) = m.s(pa[static_cast<std::size_t>(r)], li);
    for (Eigen::Index cidx = 0; cidx < np; ++cidx)
      gram(r, cidx) = m.s(pa[static_cast<std::size_t>(r)], pa[static_cast<std::size_t>(cidx)]);
    for (Eigen::Index cidx = 0; cidx < ns; ++cidx)
      gram(r, np + cidx) = cov_y_z(pa[static_cast<std::size_t>(r)], cidx);
  }
  for (Eigen::Index r = 0; r < ns; ++r) {
    rhs(np + r) = cov_y_z(li, r);
    for (Eigen::Index cidx = 0; cidx < np; ++cidx)
      gram(np + r, cidx) = cov_y_z(pa[static_cast<std::size_t>(cidx)], r);
    for (Eigen::Index cidx = 0; cidx < ns; ++cidx) gram(np + r, np + cidx) = cov_z_z(r, cidx);
  }
  const Eigen::LDLT<Eigen::MatrixXd> gl(gram);
  if (gl.info() != Eigen::Success || (gl.vectorD().array() <= 0.0).any())
    throw std::runtime_error("singular regression system in RICF update");
  const Eigen::VectorXd theta = gl.solve(rhs);

  const double lambda = m.s(li, li) - theta.dot(rhs);
  if (lambda <= 0.0) throw std::runtime_error("nonpositive conditional variance in RICF update");

  // omega_ii = lambda + Omega_{i,o} Omega_oo^{-1} Omega_{o,i} with new spouse entries.
  Eigen::VectorXd omega_sp = theta.tail(ns);
  double quad = 0.0;
  for (Eigen::Index r = 0; r < ns; ++r)
    for (Eigen::Index cidx = 0; cidx < ns; ++cidx)
      quad += omega_sp(r) * oinv(sp_pos[static_cast<std::size_t>(r)], sp_pos[static_cast<std::size_t>(cidx)]) *
              omega_sp(cidx);

  double change = 0.0;
  for (Eigen::Index r = 0; r < np; ++r) {
    const int p = pa[static_cast<std::size_t>(r)];
    change = std::max(change, std::abs(b(li, p) - theta(r)));
    b(li, p) = theta(r);
  }
  for (Eigen::Index r = 0; r < ns; ++r) {
    const int sidx = sp[static_cast<std::size_t>(r)];
    change = std::max(change, std::abs(omega(li, sidx) - omega_sp(r)));
    omega(li, sidx) = omega_sp(r);
    omega(sidx, li) = omega_sp(r);
  }
  const double om_new = lambda + quad;
  change = std::max(change, std::abs(omega(li, li) - om_new));
  omega(li, li) = om_new;
  return change;
}

}  // namespace

Eigen::MatrixXd FittedParams::implied_covariance() const {
  const Eigen::Index k = coeff.rows();
  const Eigen::MatrixXd resid = Eigen::MatrixXd::Identity(k, k) - coeff;
  const Eigen::MatrixXd inv = resid.inverse();
  return inv * noise_cov * inv.transpose();
}

double ccomponent_loglik(const FittedParams& params, const Eigen::MatrixXd& q, int n) {
  const int k = static_cast<int>(params.nodes.size());
  const double scale = static_cast<double>(n - 1) / static_cast<double>(n);
  Eigen::MatrixXd s(k, k);
  for (int r = 0; r < k; ++r)
    for (int cidx = 0; cidx < k; ++cidx)
      s(r, cidx) = scale * q(params.nodes[static_cast<std::size_t>(r)],
                             params.nodes[static_cast<std::size_t>(cidx)]);

  const Eigen::MatrixXd sigma = params.implied_covariance();
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(sigma);
  if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() <= 0.0).any())
    throw std::runtime_error("singular implied covariance");
  const double logdet = ldlt.vectorD().array().log().sum();
  const double trace = ldlt.solve(s).trace();

  double logdet_pa = 0.0;
  int n_pa = 0;
  for (int li = 0; li < k; ++li) {
    if (contains(params.district, params.nodes[static_cast<std::size_t>(li)])) continue;
    logdet_pa += std::log(sigma(li, li));
    ++n_pa;
  }
  const int district_size = k - n_pa;
  return -0.5 * n *
         (district_size * kLogTwoPi + (logdet - logdet_pa) + trace - static_cast<double>(n_pa));
}

FittedParams fit_mle(const CComponent& c, const Eigen::MatrixXd& q, int n,
                     const RicfOptions& options) {
  if (n < 2) throw std::invalid_argument("need at least 2 samples");
  c.validate(static_cast<int>(q.cols()));
  const LocalModel m = build_local(c, q, n);
  const Eigen::Index k = m.s.rows();

  FittedParams out;
  out.nodes = m.nodes;
  out.district = c.district;
  out.coeff = Eigen::MatrixXd::Zero(k, k);
  out.noise_cov = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index j = 0; j < k; ++j) out.noise_cov(j, j) = m.s(j, j);

  const bool closed_form = c.district_size() == 1 && !options.force_iterative;
  if (closed_form) {
    take_closed_form_row(m, m.district_idx.front(), out.coeff, out.noise_cov);
    out.loglik = ccomponent_loglik(out, q, n);
    return out;
  }

  double prev_ll = joint_loglik(out.coeff, out.noise_cov, m.s, n);
  bool done = false;
  for (int sweep = 0; sweep < options.max_sweeps && !done; ++sweep) {
    double change = 0.0;
    for (int li : m.district_idx)
      change = std::max(change, ricf_update_row(m, li, out.coeff, out.noise_cov));
    out.sweeps = sweep + 1;
    const double ll = joint_loglik(out.coeff, out.noise_cov, m.s, n);
    out.sweep_logliks.push_back(ll);
    // Each row update maximizes the likelihood in its own block, so the
    // sweep value can only go up (modulo floating-point noise).
    if (ll < prev_ll - 1e-7 * (1.0 + std::abs(prev_ll)))
      throw std::runtime_error("RICF log-likelihood decreased across a sweep");
    prev_ll = ll;
    done = change < options.tol;
  }
  if (!done) {
    out.converged = false;
    throw std::runtime_error("RICF did not converge after " + std::to_string(options.max_sweeps) +
                             " sweeps (last log-likelihood " + std::to_string(prev_ll) + ")");
  }
  out.loglik = ccomponent_loglik(out, q, n);
  return out;
}

double local_loglik(const CComponent& c, const Eigen::MatrixXd& q, int n,
                    const RicfOptions& options) {
  return fit_mle(c, q, n, options).loglik;
}

int parameter_count(const CComponent& c) {
  return 2 * c.district_size() + c.directed_edge_count() +
         static_cast<int>(c.bidirected.size());
}

double local_bic(const CComponent& c, const Eigen::MatrixXd& q, int n,
                 const RicfOptions& options) {
  return 2.0 * local_loglik(c, q, n, options) - std::log(static_cast<double>(n)) * parameter_count(c);
}

double graph_bic(const Admg& g, const Eigen::MatrixXd& q, int n, const RicfOptions& options) {
  if (!is_ancestral(g)) throw std::invalid_argument("graph is not ancestral");
  double total = 0.0;
  for (const CComponent& c : all_c_components(g)) total += local_bic(c, q, n, options);
  return total;
}

}  // namespace aglearn
