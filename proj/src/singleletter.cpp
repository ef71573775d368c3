#include "gdscap/singleletter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace gdscap {

namespace {

// Complement outputs omega_i = N_i^c(psi_i psi_i^dag) on the common environment.
std::vector<ComplexMatrix> complement_outputs(const std::vector<KrausChannel>& complements,
                                              const std::vector<ComplexVector>& states) {
  std::vector<ComplexMatrix> out(complements.size());
  for (std::size_t i = 0; i < complements.size(); ++i)
    out[i] = gdscap::apply(complements[i], states[i] * states[i].adjoint());
  return out;
}

double max_pairwise_trace_distance(const std::vector<ComplexMatrix>& outputs) {
  double worst = 0.0;
  for (std::size_t i = 0; i < outputs.size(); ++i)
    for (std::size_t j = i + 1; j < outputs.size(); ++j)
      worst = std::max(worst, 0.5 * trace_norm(outputs[i] - outputs[j]));
  return worst;
}

// Smooth search objective: F = sum_i ||omega_i - omega_bar||_F^2.
double spread_objective(const std::vector<ComplexMatrix>& outputs) {
  ComplexMatrix mean = outputs[0];
  for (std::size_t i = 1; i < outputs.size(); ++i) mean += outputs[i];
  mean /= double(outputs.size());
  double f = 0.0;
  for (const ComplexMatrix& w : outputs) f += (w - mean).squaredNorm();
  return f;
}

struct SearchResult {
  std::vector<ComplexVector> states;
  double residual = 0.0;  // exact max pairwise trace distance
};

// Projected gradient descent with backtracking from the given start; the
// sphere gradient for block i is 2 C_i^adj(omega_i - omega_bar) psi_i
// projected orthogonal to psi_i.
SearchResult descend(const std::vector<KrausChannel>& complements,
                     std::vector<ComplexVector> states, int max_iterations) {
  const std::size_t nb = complements.size();
  std::vector<ComplexMatrix> outputs = complement_outputs(complements, states);
  double f = spread_objective(outputs);
  double step = 0.5;
  for (int iter = 0; iter < max_iterations && f > 1e-20; ++iter) {
    ComplexMatrix mean = outputs[0];
    for (std::size_t i = 1; i < nb; ++i) mean += outputs[i];
    mean /= double(nb);

    std::vector<ComplexVector> grads(nb);
    double grad_norm_sq = 0.0;
    for (std::size_t i = 0; i < nb; ++i) {
      ComplexMatrix euclid = 2.0 * gdscap::apply_adjoint(complements[i], outputs[i] - mean);
      ComplexVector gv = euclid * states[i];
      gv -= states[i].dot(gv) * states[i];  // tangent to the unit sphere
      grads[i] = gv;
      grad_norm_sq += gv.squaredNorm();
    }
    if (grad_norm_sq <= 1e-24) break;

    bool accepted = false;
    for (int shrink = 0; shrink < 40; ++shrink) {
      std::vector<ComplexVector> trial(nb);
      for (std::size_t i = 0; i < nb; ++i) {
        trial[i] = states[i] - step * grads[i];
        trial[i].normalize();
      }
      std::vector<ComplexMatrix> trial_outputs = complement_outputs(complements, trial);
      double trial_f = spread_objective(trial_outputs);
      if (trial_f < f) {
        states = std::move(trial);
        outputs = std::move(trial_outputs);
        f = trial_f;
        step = std::min(step * 1.5, 4.0);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  return {std::move(states), max_pairwise_trace_distance(outputs)};
}

SearchResult search_matched_states(const GdsChannel& g,
                                   const std::vector<KrausChannel>& complements,
                                   const MatchSearchConfig& config) {
  const int nb = g.block_count();
  SearchResult best;
  best.residual = std::numeric_limits<double>::infinity();
  for (int r = 0; r < config.restarts; ++r) {
    std::vector<ComplexVector> start(nb);
    if (r == 0) {
      for (int i = 0; i < nb; ++i) {
        start[i] = ComplexVector::Zero(g.in_blocks.sizes[i]);
        start[i](0) = 1.0;
      }
    } else {
      std::mt19937_64 rng(config.base_seed + std::uint64_t(r));
      for (int i = 0; i < nb; ++i) start[i] = random_pure_state(g.in_blocks.sizes[i], rng);
    }
    SearchResult result = descend(complements, std::move(start), config.max_iterations);
    if (result.residual < best.residual) best = std::move(result);
    if (best.residual <= 0.01 * config.tolerance) break;
  }
  return best;
}

}  // namespace

const char* route_name(SingleLetterRoute route) {
  switch (route) {
    case SingleLetterRoute::all_antidegradable: return "all_antidegradable";
    case SingleLetterRoute::all_ppt: return "all_ppt";
    case SingleLetterRoute::none: return "none";
  }
  return "none";
}

SingleLetterVerdict check_single_letter(const GdsChannel& g,
                                        const std::vector<ComplexVector>& candidate_states,
                                        const MatchSearchConfig& config) {
  const int nb = g.block_count();
  if (config.restarts < 1 || config.max_iterations < 1 || !(config.tolerance > 0))
    throw std::invalid_argument("check_single_letter: bad search configuration");
  if (!candidate_states.empty()) {
    if (int(candidate_states.size()) != nb)
      throw std::invalid_argument("check_single_letter: need one candidate state per block");
    for (int i = 0; i < nb; ++i) {
      if (candidate_states[i].size() != g.in_blocks.sizes[i])
        throw std::invalid_argument("check_single_letter: candidate dimension mismatch");
      if (candidate_states[i].norm() <= 1e-12)
        throw std::invalid_argument("check_single_letter: candidate state is null");
    }
  }

  SingleLetterVerdict verdict;

  std::vector<ChannelVerdict> ppt(nb);
  bool all_ppt = true;
  for (int i = 0; i < nb; ++i) {
    ppt[i] = is_ppt(g.subchannels[i]);
    all_ppt = all_ppt && ppt[i].holds;
  }
  if (all_ppt) {
    verdict.route = SingleLetterRoute::all_ppt;
    verdict.per_block = std::move(ppt);
  } else {
    std::vector<ChannelVerdict> anti(nb);
    bool all_anti = true;
    for (int i = 0; i < nb; ++i) {
      anti[i] = is_antidegradable(g.subchannels[i]);
      all_anti = all_anti && anti[i].holds;
    }
    verdict.route = all_anti ? SingleLetterRoute::all_antidegradable : SingleLetterRoute::none;
    verdict.per_block = std::move(anti);
  }

  std::vector<KrausChannel> complements(nb);
  for (int i = 0; i < nb; ++i) complements[i] = subchannel_complement(g, i);

  SearchResult match;
  bool have_match = false;
  if (!candidate_states.empty()) {
    match.states = candidate_states;
    for (ComplexVector& psi : match.states) psi.normalize();
    match.residual = max_pairwise_trace_distance(complement_outputs(complements, match.states));
    have_match = match.residual <= config.tolerance;
  }
  if (!have_match) {
    SearchResult searched = search_matched_states(g, complements, config);
    if (match.states.empty() || searched.residual < match.residual) match = std::move(searched);
  }
  verdict.matched_states = std::move(match.states);
  verdict.match_residual = match.residual;

  verdict.qualifies =
      verdict.route != SingleLetterRoute::none && verdict.match_residual <= config.tolerance;
  if (verdict.qualifies) verdict.capacity_bits = std::log2(double(nb));
  return verdict;
}

double single_letter_capacity(const SingleLetterVerdict& verdict) {
  if (!verdict.qualifies || !verdict.capacity_bits)
    throw std::invalid_argument("single_letter_capacity: verdict does not qualify");
  return *verdict.capacity_bits;
}

GdsChannel hadamard_complement_example(int n, const std::vector<ComplexMatrix>& correlations) {
  if (n < 1) throw std::invalid_argument("hadamard_complement_example: need n >= 1");
  if (int(correlations.size()) != n + 1)
    throw std::invalid_argument("hadamard_complement_example: need n + 1 correlation matrices");

  std::vector<KrausChannel> subs;
  subs.reserve(correlations.size());
  int max_kraus = 0;
  for (std::size_t i = 0; i < correlations.size(); ++i) {
    const ComplexMatrix& m = correlations[i];
    const int d = int(m.rows());
    if (d < 1 || m.cols() != d || !is_hermitian(m, 1e-9))
      throw std::invalid_argument("hadamard_complement_example: M_i must be square Hermitian");
    for (int b = 0; b < d; ++b)
      if (std::abs(m(b, b) - 1.0) > 1e-9)
        throw std::invalid_argument("hadamard_complement_example: M_i needs a unit diagonal");

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig((m + m.adjoint()) / 2.0);
    const RealVector& lambda = eig.eigenvalues();
    if (lambda(0) < -1e-10 * std::max(1.0, lambda(d - 1)))
      throw std::invalid_argument("hadamard_complement_example: M_i is not PSD");

    // Rows of W are sqrt(lambda_k) u_k^T, so <w_{b'}, w_b> = M_{b b'} and the
    // measure-and-prepare channel with Kraus |w_b><b| has complement M (*) rho.
    std::vector<int> kept;
    for (int k = 0; k < d; ++k)
      if (lambda(k) > 1e-12 * std::max(1.0, lambda(d - 1))) kept.push_back(k);
    ComplexMatrix w(int(kept.size()), d);
    for (std::size_t k = 0; k < kept.size(); ++k)
      w.row(int(k)) = std::sqrt(lambda(kept[k])) * eig.eigenvectors().col(kept[k]).transpose();

    std::vector<ComplexMatrix> kraus(d);
    for (int b = 0; b < d; ++b) {
      kraus[b] = ComplexMatrix::Zero(w.rows(), d);
      kraus[b].col(b) = w.col(b);
    }
    subs.push_back(make_channel("hadamard_block_" + std::to_string(i), std::move(kraus)));
    max_kraus = std::max(max_kraus, d);
  }
  for (KrausChannel& sub : subs)
    if (sub.kraus_count() < max_kraus) sub = zero_pad(sub, max_kraus);
  return build_gds(std::move(subs), "hadamard_complement");
}

}  // namespace gdscap
