#include "gdscap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace gdscap {

namespace {

constexpr double kLog2E = 1.4426950408889634;  // 1 / ln 2

void validate_density(const ComplexMatrix& rho, Eigen::Index dim, const char* where,
                      double tol = 1e-9) {
  if (rho.rows() != dim || rho.cols() != dim)
    throw std::invalid_argument(std::string(where) + ": state has wrong dimension");
  if (!is_hermitian(rho, tol))
    throw std::invalid_argument(std::string(where) + ": state is not Hermitian");
  const Complex tr = rho.trace();
  if (std::abs(tr.real() - 1.0) > tol || std::abs(tr.imag()) > tol)
    throw std::invalid_argument(std::string(where) + ": state trace is not one");
  if (!feasibly_psd(rho, tol))
    throw std::invalid_argument(std::string(where) + ": state is not positive semidefinite");
}

double entropy_bits(const ComplexMatrix& m) {
  return von_neumann_entropy(ComplexMatrix(0.5 * (m + m.adjoint())));
}

// Complement output as a Gram matrix, G_{kl} = Tr(E_k rho E_l^dag); identical
// entrywise to applying the complement() channel but cheaper.
ComplexMatrix environment_output(const std::vector<ComplexMatrix>& kraus,
                                 const ComplexMatrix& rho) {
  const int k_count = static_cast<int>(kraus.size());
  std::vector<ComplexMatrix> pushed(k_count);
  for (int k = 0; k < k_count; ++k) pushed[k] = kraus[k] * rho;
  ComplexMatrix out(k_count, k_count);
  for (int k = 0; k < k_count; ++k)
    for (int l = 0; l < k_count; ++l)
      out(k, l) = pushed[k].cwiseProduct(kraus[l].conjugate()).sum();
  return 0.5 * (out + out.adjoint());
}

// Spectral log2 with eigenvalues clamped below; keeps gradients finite when an
// output state is singular (the clamped directions carry zero weight).
ComplexMatrix matrix_log2_clamped(const ComplexMatrix& herm, double floor = 1e-18) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (herm + herm.adjoint()));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("matrix_log2_clamped: eigendecomposition failed");
  RealVector logs = es.eigenvalues();
  for (Eigen::Index i = 0; i < logs.size(); ++i)
    logs(i) = std::log2(std::max(logs(i), floor));
  return es.eigenvectors() * logs.asDiagonal() * es.eigenvectors().adjoint();
}

void check_block_dims(const GdsChannel& g, std::size_t count, const char* where) {
  if (static_cast<int>(count) != g.block_count())
    throw std::invalid_argument(std::string(where) + ": expected one entry per block");
}

double log2_sum_exp2(const std::vector<double>& values) {
  const double top = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += std::exp2(v - top);
  return top + std::log2(sum);
}

}  // namespace

ComplexMatrix Ensemble::average() const {
  if (states.empty()) throw std::invalid_argument("Ensemble::average: empty ensemble");
  ComplexMatrix out = ComplexMatrix::Zero(states[0].rows(), states[0].cols());
  for (std::size_t i = 0; i < states.size(); ++i) out += probs[i] * states[i];
  return out;
}

void validate_ensemble(const Ensemble& ensemble, double tol) {
  if (ensemble.probs.size() != ensemble.states.size())
    throw std::invalid_argument("ensemble: probs and states lengths differ");
  if (ensemble.probs.empty()) throw std::invalid_argument("ensemble: empty");
  double sum = 0.0;
  for (double p : ensemble.probs) {
    if (!(p >= -1e-12)) throw std::invalid_argument("ensemble: negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-10)
    throw std::invalid_argument("ensemble: probabilities do not sum to one");
  const Eigen::Index dim = ensemble.states[0].rows();
  for (const auto& rho : ensemble.states) validate_density(rho, dim, "ensemble", tol);
}

ComplexMatrix BlockDiagState::assemble(const BlockStructure& blocks) const {
  return assemble_block_state(probs, block_states, blocks);
}

BlockDiagState project_block_diagonal(const ComplexMatrix& rho, const BlockStructure& blocks) {
  if (rho.rows() != blocks.total() || rho.cols() != blocks.total())
    throw std::invalid_argument("project_block_diagonal: dimension mismatch");
  BlockDiagState s;
  for (int b = 0; b < blocks.block_count(); ++b) {
    const int d = blocks.sizes[b];
    ComplexMatrix blk = rho.block(blocks.offsets[b], blocks.offsets[b], d, d);
    double p = blk.trace().real();
    if (p > 1e-14)
      blk /= p;
    else {
      p = 0.0;
      blk = ComplexMatrix::Identity(d, d) / static_cast<double>(d);
    }
    s.probs.push_back(p);
    s.block_states.push_back(0.5 * (blk + blk.adjoint()));
  }
  return s;
}

double coherent_information(const KrausChannel& ch, const ComplexMatrix& rho) {
  validate_density(rho, ch.dim_in, "coherent_information");
  const double s_out = entropy_bits(gdscap::apply(ch, rho));
  const double s_env = entropy_bits(environment_output(ch.kraus, rho));
  return s_out - s_env;
}

double coherent_information_gds(const GdsChannel& g, const BlockDiagState& state) {
  check_block_dims(g, state.probs.size(), "coherent_information_gds");
  check_block_dims(g, state.block_states.size(), "coherent_information_gds");
  double sum = 0.0;
  for (double p : state.probs) {
    if (!(p >= -1e-10)) throw std::invalid_argument("coherent_information_gds: negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("coherent_information_gds: probabilities do not sum to one");

  // H(p) + sum_i p_i I_c(rho_i, N_i) - chi({p_i, omega_i}) collapses to
  // H(p) + sum_i p_i S(N_i(rho_i)) - S(sum_i p_i omega_i): the per-block
  // environment entropies cancel between the I_c terms and chi.
  const int k_count = g.assembled.kraus_count();
  ComplexMatrix env_bar = ComplexMatrix::Zero(k_count, k_count);
  double value = shannon_entropy_bits(state.probs);
  for (int i = 0; i < g.block_count(); ++i) {
    validate_density(state.block_states[i], g.in_blocks.sizes[i], "coherent_information_gds");
    if (state.probs[i] <= 0.0) continue;
    value += state.probs[i] * entropy_bits(gdscap::apply(g.subchannels[i], state.block_states[i]));
    env_bar += state.probs[i] * environment_output(g.subchannels[i].kraus, state.block_states[i]);
  }
  return value - entropy_bits(env_bar);
}

double holevo_chi(const Ensemble& ensemble) {
  validate_ensemble(ensemble);
  double chi = entropy_bits(ensemble.average());
  for (std::size_t i = 0; i < ensemble.size(); ++i)
    if (ensemble.probs[i] > 0.0) chi -= ensemble.probs[i] * entropy_bits(ensemble.states[i]);
  return std::max(chi, 0.0);
}

double holevo_chi(const Ensemble& ensemble, const KrausChannel& ch) {
  validate_ensemble(ensemble);
  Ensemble image;
  image.probs = ensemble.probs;
  for (const auto& rho : ensemble.states) image.states.push_back(gdscap::apply(ch, rho));
  return holevo_chi(image);
}

double private_information(const Ensemble& ensemble, const KrausChannel& ch) {
  validate_ensemble(ensemble);
  double value = coherent_information(ch, ensemble.average());
  for (std::size_t i = 0; i < ensemble.size(); ++i)
    if (ensemble.probs[i] > 0.0)
      value -= ensemble.probs[i] * coherent_information(ch, ensemble.states[i]);
  return value;
}

ConcavityBounds concavity_bounds(const Ensemble& ensemble, double lower_prefactor) {
  validate_ensemble(ensemble);
  ConcavityBounds b;
  const ComplexMatrix avg = ensemble.average();
  double max_dist = 0.0;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    if (ensemble.probs[i] <= 0.0) continue;
    const double d = trace_norm(ensemble.states[i] - avg);
    b.lower += lower_prefactor * ensemble.probs[i] * d * d;
    for (std::size_t j = i + 1; j < ensemble.size(); ++j)
      if (ensemble.probs[j] > 0.0)
        max_dist = std::max(max_dist, trace_norm(ensemble.states[i] - ensemble.states[j]));
  }
  b.upper = 0.5 * shannon_entropy_bits(ensemble.probs) * max_dist;
  return b;
}

GdsObjective::GdsObjective(const GdsChannel& g) : g_(&g) {
  const int nb = g.block_count();
  param_count_ = static_cast<std::size_t>(nb);
  for (int i = 0; i < nb; ++i) {
    complements_.push_back(subchannel_complement(g, i));
    const int d = g.in_blocks.sizes[i];
    block_dims_.push_back(d);
    block_offsets_.push_back(param_count_);
    param_count_ += static_cast<std::size_t>(d) * (d + 1);  // re+im of lower triangle
  }
}

namespace {

ComplexMatrix unpack_lower_triangular(const RealVector& params, std::size_t offset, int d) {
  ComplexMatrix l = ComplexMatrix::Zero(d, d);
  std::size_t idx = offset;
  for (int r = 0; r < d; ++r)
    for (int c = 0; c <= r; ++c) {
      l(r, c) = Complex(params(idx), params(idx + 1));
      idx += 2;
    }
  return l;
}

}  // namespace

BlockDiagState GdsObjective::decode(const RealVector& params) const {
  if (params.size() != static_cast<Eigen::Index>(param_count_))
    throw std::invalid_argument("GdsObjective: wrong parameter count");
  const int nb = g_->block_count();
  BlockDiagState s;
  double top = params.head(nb).maxCoeff();
  double norm = 0.0;
  for (int i = 0; i < nb; ++i) {
    s.probs.push_back(std::exp(params(i) - top));
    norm += s.probs.back();
  }
  for (double& p : s.probs) p /= norm;
  for (int i = 0; i < nb; ++i) {
    const int d = block_dims_[i];
    const ComplexMatrix l = unpack_lower_triangular(params, block_offsets_[i], d);
    ComplexMatrix rho = l * l.adjoint();
    const double tr = rho.trace().real();
    if (tr > 1e-30)
      rho /= tr;
    else
      rho = ComplexMatrix::Identity(d, d) / static_cast<double>(d);
    s.block_states.push_back(0.5 * (rho + rho.adjoint()));
  }
  return s;
}

double GdsObjective::value(const RealVector& params) const {
  const BlockDiagState s = decode(params);
  const int k_count = g_->assembled.kraus_count();
  ComplexMatrix env_bar = ComplexMatrix::Zero(k_count, k_count);
  double value = shannon_entropy_bits(s.probs);
  for (int i = 0; i < g_->block_count(); ++i) {
    if (s.probs[i] <= 0.0) continue;
    value += s.probs[i] * entropy_bits(gdscap::apply(g_->subchannels[i], s.block_states[i]));
    env_bar += s.probs[i] * environment_output(g_->subchannels[i].kraus, s.block_states[i]);
  }
  return value - entropy_bits(env_bar);
}

RealVector GdsObjective::gradient(const RealVector& params) const {
  const BlockDiagState s = decode(params);
  const int nb = g_->block_count();
  const int k_count = g_->assembled.kraus_count();

  std::vector<ComplexMatrix> outs(nb), envs(nb);
  std::vector<double> s_out(nb), s_env(nb);
  ComplexMatrix env_bar = ComplexMatrix::Zero(k_count, k_count);
  for (int i = 0; i < nb; ++i) {
    outs[i] = gdscap::apply(g_->subchannels[i], s.block_states[i]);
    outs[i] = 0.5 * (outs[i] + outs[i].adjoint());
    envs[i] = environment_output(g_->subchannels[i].kraus, s.block_states[i]);
    s_out[i] = entropy_bits(outs[i]);
    s_env[i] = entropy_bits(envs[i]);
    env_bar += s.probs[i] * envs[i];
  }
  const ComplexMatrix log_env_bar = matrix_log2_clamped(env_bar);

  RealVector grad = RealVector::Zero(params.size());

  // d/dp_i of H(p) + sum p_i I_c - chi, then the softmax chain rule.
  std::vector<double> gp(nb);
  double mean_gp = 0.0;
  for (int i = 0; i < nb; ++i) {
    const double fi = s_out[i] - s_env[i];
    const double cross = (envs[i].cwiseProduct(log_env_bar.transpose())).sum().real();
    gp[i] = -std::log2(std::max(s.probs[i], 1e-300)) + fi + cross + s_env[i];
    mean_gp += s.probs[i] * gp[i];
  }
  for (int i = 0; i < nb; ++i) grad(i) = s.probs[i] * (gp[i] - mean_gp);

  // d/drho_i = p_i [ Phi_i^dag(log2 env_bar) - N_i^dag(log2 N_i(rho_i)) ],
  // chained through rho = L L^dag / Tr.
  for (int i = 0; i < nb; ++i) {
    const int d = block_dims_[i];
    const ComplexMatrix l = unpack_lower_triangular(params, block_offsets_[i], d);
    const double tr = (l * l.adjoint()).trace().real();
    if (tr <= 1e-30) continue;
    const ComplexMatrix g_rho =
        s.probs[i] * (gdscap::apply_adjoint(complements_[i], log_env_bar) -
                      gdscap::apply_adjoint(g_->subchannels[i], matrix_log2_clamped(outs[i])));
    const double inner = (g_rho.cwiseProduct(s.block_states[i].transpose())).sum().real();
    const ComplexMatrix m =
        2.0 / tr * (g_rho - inner * ComplexMatrix::Identity(d, d)) * l;
    std::size_t idx = block_offsets_[i];
    for (int r = 0; r < d; ++r)
      for (int c = 0; c <= r; ++c) {
        grad(idx) = m(r, c).real();
        grad(idx + 1) = m(r, c).imag();
        idx += 2;
      }
  }
  return grad;
}

namespace {

struct RestartOutcome {
  double value = -1e300;
  RealVector params;
  bool converged = false;
};

RestartOutcome run_restart(const GdsObjective& obj, std::uint64_t seed, double tol,
                           int max_iterations) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  RealVector x(obj.parameter_count());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = gauss(rng);

  RestartOutcome out;
  out.params = x;
  std::vector<double> best_hist;
  auto record = [&](double val, const RealVector& p) {
    if (val > out.value) {
      out.value = val;
      out.params = p;
    }
    best_hist.push_back(out.value);
  };

  // Phase 1: Adam with a decaying step to find the basin.
  const int adam_iters = (2 * max_iterations) / 3;
  RealVector m = RealVector::Zero(x.size()), v = RealVector::Zero(x.size());
  const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  for (int t = 0; t < adam_iters; ++t) {
    record(obj.value(x), x);
    if (t >= 60 && best_hist.back() - best_hist[best_hist.size() - 51] < tol) {
      out.converged = true;
      break;
    }
    const RealVector g = obj.gradient(x);
    m = beta1 * m + (1.0 - beta1) * g;
    v = beta2 * v + (1.0 - beta2) * g.cwiseProduct(g);
    const double bc1 = 1.0 - std::pow(beta1, t + 1), bc2 = 1.0 - std::pow(beta2, t + 1);
    const double lr = 0.08 * std::pow(0.995, t);
    x += (lr / bc1) * m.cwiseQuotient(((v / bc2).cwiseSqrt().array() + eps).matrix());
  }

  // Phase 2: monotone backtracking gradient ascent from the best point found.
  x = out.params;
  double step = 0.02;
  double val = obj.value(x);
  int flat = 0;
  for (int t = 0; t < max_iterations - adam_iters; ++t) {
    const RealVector g = obj.gradient(x);
    const double gg = g.squaredNorm();
    if (g.lpNorm<Eigen::Infinity>() < 1e-12) {
      out.converged = true;
      break;
    }
    bool accepted = false;
    while (step >= 1e-14) {
      const RealVector cand = x + step * g;
      const double cand_val = obj.value(cand);
      if (cand_val >= val + 1e-4 * step * gg) {
        x = cand;
        const double gain = cand_val - val;
        val = cand_val;
        record(val, x);
        step = std::min(step * 1.5, 0.5);
        accepted = true;
        flat = gain < 0.1 * tol ? flat + 1 : 0;
        break;
      }
      step *= 0.5;
    }
    if (!accepted || flat >= 30) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace

OptimizationResult maximize_coherent_information_gds(const GdsChannel& g, int restarts, double tol,
                                                     std::uint64_t base_seed, int max_iterations) {
  if (restarts < 1) throw std::invalid_argument("maximize_coherent_information_gds: restarts < 1");
  if (!(tol > 0.0)) throw std::invalid_argument("maximize_coherent_information_gds: tol <= 0");
  const GdsObjective obj(g);
  RestartOutcome best;
  for (int r = 0; r < restarts; ++r) {
    RestartOutcome cur = run_restart(obj, base_seed + static_cast<std::uint64_t>(r), tol,
                                     max_iterations);
    if (cur.value > best.value) best = cur;
  }
  OptimizationResult result;
  result.argument = obj.decode(best.params);
  result.value = coherent_information_gds(g, result.argument);
  result.restarts_used = restarts;
  result.converged = best.converged;
  result.gradient_residual = obj.gradient(best.params).lpNorm<Eigen::Infinity>();
  return result;
}

Q1LowerBound q1_lower_bound_gds(
    const GdsChannel& g, const std::vector<std::pair<ComplexMatrix, double>>& per_block_optima) {
  check_block_dims(g, per_block_optima.size(), "q1_lower_bound_gds");
  const int nb = g.block_count();
  std::vector<ComplexMatrix> omegas;
  std::vector<double> q1s;
  for (int i = 0; i < nb; ++i) {
    validate_density(per_block_optima[i].first, g.in_blocks.sizes[i], "q1_lower_bound_gds");
    omegas.push_back(environment_output(g.subchannels[i].kraus, per_block_optima[i].first));
    q1s.push_back(per_block_optima[i].second);
  }
  double max_dist = 0.0;
  for (int i = 0; i < nb; ++i)
    for (int j = i + 1; j < nb; ++j)
      max_dist = std::max(max_dist, trace_norm(omegas[i] - omegas[j]));
  Q1LowerBound b;
  b.analytic = log2_sum_exp2(q1s) - 0.5 * std::log2(static_cast<double>(nb)) * max_dist;
  b.trivial = std::max(0.0, *std::max_element(q1s.begin(), q1s.end()));
  b.value = std::max(b.analytic, b.trivial);
  return b;
}

Q1UpperBound q1_upper_bound_equal(const GdsChannel& g, double shared_q1,
                                  const std::vector<ComplexMatrix>& complement_outputs) {
  check_block_dims(g, complement_outputs.size(), "q1_upper_bound_equal");
  const int nb = g.block_count();
  const Eigen::Index dim = complement_outputs[0].rows();
  ComplexMatrix mean = ComplexMatrix::Zero(dim, dim);
  for (const auto& w : complement_outputs) {
    validate_density(w, dim, "q1_upper_bound_equal");
    mean += w;
  }
  mean /= static_cast<double>(nb);
  double sum = 0.0;
  for (const auto& w : complement_outputs) {
    const double d = trace_norm(w - mean);
    sum += std::exp2(-0.5 * d * d);
  }
  Q1UpperBound b;
  b.value = shared_q1 + std::log2(sum);
  b.trivial = shared_q1 + std::log2(static_cast<double>(nb));
  return b;
}

namespace {

// H(p) + sum_i p_i a_i - chi({p_i, omega_i}) and its simplex maximization,
// shared by the P1 lower bound.
double mixing_objective(const std::vector<double>& probs, const std::vector<double>& a,
                        const std::vector<ComplexMatrix>& omegas) {
  const int nb = static_cast<int>(probs.size());
  ComplexMatrix bar = ComplexMatrix::Zero(omegas[0].rows(), omegas[0].cols());
  double value = shannon_entropy_bits(probs);
  for (int i = 0; i < nb; ++i) {
    if (probs[i] <= 0.0) continue;
    value += probs[i] * (a[i] + entropy_bits(omegas[i]));
    bar += probs[i] * omegas[i];
  }
  return value - entropy_bits(bar);
}

double maximize_mixing_objective(const std::vector<double>& a,
                                 const std::vector<ComplexMatrix>& omegas) {
  const int nb = static_cast<int>(a.size());
  if (nb == 1) return a[0];
  std::vector<double> s_env(nb);
  for (int i = 0; i < nb; ++i) s_env[i] = entropy_bits(omegas[i]);

  auto probs_of = [&](const RealVector& theta) {
    std::vector<double> p(nb);
    const double top = theta.maxCoeff();
    double norm = 0.0;
    for (int i = 0; i < nb; ++i) norm += (p[i] = std::exp(theta(i) - top));
    for (double& q : p) q /= norm;
    return p;
  };

  double best = -1e300;
  std::vector<RealVector> starts;
  starts.push_back(RealVector::Zero(nb));  // uniform
  RealVector biased(nb);                   // closed form ignoring the chi penalty
  for (int i = 0; i < nb; ++i) biased(i) = a[i] / kLog2E;
  starts.push_back(biased);
  std::mt19937_64 rng(7151);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int s = 0; s < 2; ++s) {
    RealVector r(nb);
    for (int i = 0; i < nb; ++i) r(i) = gauss(rng);
    starts.push_back(r);
  }

  for (const RealVector& start : starts) {
    RealVector theta = start;
    for (int t = 0; t < 600; ++t) {
      const std::vector<double> p = probs_of(theta);
      ComplexMatrix bar = ComplexMatrix::Zero(omegas[0].rows(), omegas[0].cols());
      for (int i = 0; i < nb; ++i) bar += p[i] * omegas[i];
      const ComplexMatrix log_bar = matrix_log2_clamped(bar);
      RealVector gp(nb);
      double mean_gp = 0.0;
      for (int i = 0; i < nb; ++i) {
        const double cross = (omegas[i].cwiseProduct(log_bar.transpose())).sum().real();
        gp(i) = -std::log2(std::max(p[i], 1e-300)) + a[i] + cross + s_env[i];
        mean_gp += p[i] * gp(i);
      }
      RealVector g(nb);
      for (int i = 0; i < nb; ++i) g(i) = p[i] * (gp(i) - mean_gp);
      theta += 0.25 * std::pow(0.995, t) * g;
      if (g.lpNorm<Eigen::Infinity>() < 1e-13) break;
    }
    best = std::max(best, mixing_objective(probs_of(theta), a, omegas));
  }
  best = std::max(best, mixing_objective(std::vector<double>(nb, 1.0 / nb), a, omegas));
  return best;
}

}  // namespace

double p1_lower_bound_gds(const GdsChannel& g, const std::vector<Ensemble>& per_block_ensembles) {
  check_block_dims(g, per_block_ensembles.size(), "p1_lower_bound_gds");
  const int nb = g.block_count();
  std::vector<double> ip(nb);
  std::vector<ComplexMatrix> omegas(nb);
  for (int i = 0; i < nb; ++i) {
    ip[i] = private_information(per_block_ensembles[i], g.subchannels[i]);
    omegas[i] = environment_output(g.subchannels[i].kraus, per_block_ensembles[i].average());
  }
  return maximize_mixing_objective(ip, omegas);
}

double c1_lower_bound_gds(const GdsChannel& g, const std::vector<Ensemble>& per_block_ensembles) {
  check_block_dims(g, per_block_ensembles.size(), "c1_lower_bound_gds");
  std::vector<double> chis;
  for (int i = 0; i < g.block_count(); ++i)
    chis.push_back(holevo_chi(per_block_ensembles[i], g.subchannels[i]));
  return log2_sum_exp2(chis);
}

double direct_sum_capacities(const std::vector<double>& values, CapacityKind kind) {
  if (values.empty()) throw std::invalid_argument("direct_sum_capacities: empty value list");
  if (kind == CapacityKind::C1) return log2_sum_exp2(values);
  return *std::max_element(values.begin(), values.end());
}

}  // namespace gdscap
