#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gdscap/gds.hpp"

namespace gdscap {

// Ensemble {p_i, rho_i} of density matrices on a common space.
struct Ensemble {
  std::vector<double> probs;
  std::vector<ComplexMatrix> states;

  std::size_t size() const { return probs.size(); }
  ComplexMatrix average() const;
};

// Throws std::invalid_argument unless lengths match, probs are nonnegative and
// sum to one (1e-10), and every state is a density matrix (tolerance tol).
void validate_ensemble(const Ensemble& ensemble, double tol = 1e-9);

// Block-diagonal input state (+)_i p_i rho_i for a GDS channel; rho_i lives on
// block i of the input structure. Blocks with d_{A_i} = 1 carry the scalar 1.
struct BlockDiagState {
  std::vector<double> probs;
  std::vector<ComplexMatrix> block_states;

  ComplexMatrix assemble(const BlockStructure& blocks) const;
};

// Pinches a full density matrix to its block-diagonal part and renormalizes
// the blocks; zero-weight blocks get the maximally mixed state.
BlockDiagState project_block_diagonal(const ComplexMatrix& rho, const BlockStructure& blocks);

struct OptimizationResult {
  double value = 0.0;  // bits; re-evaluated independently at `argument`
  BlockDiagState argument;
  int restarts_used = 0;
  bool converged = false;
  double gradient_residual = 0.0;  // inf-norm of the gradient at `argument`
};

// I_c(rho, ch) = S(ch(rho)) - S(ch^c(rho)) in bits. The environment entropy is
// taken from the Gram matrix G_{kl} = Tr(E_k rho E_l^dag) without materializing
// the complementary channel.
double coherent_information(const KrausChannel& ch, const ComplexMatrix& rho);

// Coherent information of the GDS channel at a block-diagonal state, through
// the decomposition H(p) + sum_i p_i I_c(rho_i, N_i) - chi({p_i, omega_i})
// with omega_i = N_i^c(rho_i) on the common environment.
double coherent_information_gds(const GdsChannel& g, const BlockDiagState& state);

// chi({p_i, rho_i}) = S(rho_bar) - sum_i p_i S(rho_i) in bits; the overload
// with a channel pushes every state through `ch` first.
double holevo_chi(const Ensemble& ensemble);
double holevo_chi(const Ensemble& ensemble, const KrausChannel& ch);

// I_p(E, ch) = I_c(rho_bar, ch) - sum_i p_i I_c(rho_i, ch).
double private_information(const Ensemble& ensemble, const KrausChannel& ch);

// Two-sided concavity bound on holevo_chi(ensemble):
//   lower_prefactor * sum_i p_i ||rho_i - rho_bar||_1^2  <=  chi
//   chi  <=  (H(p)/2) * max_{i,j} ||rho_i - rho_j||_1.
// The lower bound is experimental (the literature differs on its constant);
// certified pipelines use only the upper bound.
struct ConcavityBounds {
  double lower = 0.0;
  double upper = 0.0;
};
ConcavityBounds concavity_bounds(const Ensemble& ensemble, double lower_prefactor = 0.5);

// Differentiable objective behind the maximizer: an unconstrained real vector
// encodes softmax logits for the block probabilities followed by, per block,
// the real and imaginary parts of a lower-triangular factor L (row-major over
// r >= c), with rho = L L^dag / Tr(L L^dag). Exposed so the analytic gradient
// can be checked against finite differences.
class GdsObjective {
 public:
  explicit GdsObjective(const GdsChannel& g);

  std::size_t parameter_count() const { return param_count_; }
  BlockDiagState decode(const RealVector& params) const;
  double value(const RealVector& params) const;
  RealVector gradient(const RealVector& params) const;

 private:
  const GdsChannel* g_;
  std::vector<KrausChannel> complements_;  // common-environment complements
  std::vector<int> block_dims_;
  std::vector<std::size_t> block_offsets_;  // offset of block factor in params
  std::size_t param_count_ = 0;
};

// Multi-restart adaptive gradient ascent (Adam followed by a monotone
// line-search polish) on the block-diagonal decomposition. Deterministic:
// restart r uses seed base_seed + r. The reported value is a lower-bound
// certificate re-evaluated at the returned argument.
OptimizationResult maximize_coherent_information_gds(const GdsChannel& g, int restarts = 32,
                                                     double tol = 1e-9,
                                                     std::uint64_t base_seed = 20240829,
                                                     int max_iterations = 2000);

// Lower bound on Q1 of the GDS channel from certified per-block optima
// (rho_i, I_c value): analytic = log2 sum_i 2^{q1_i} minus
// (log2(n+1)/2) * max_{i,j} ||omega_i - omega_j||_1 with omega_i = N_i^c(rho_i);
// trivial = max(0, max_i q1_i); value = max(analytic, trivial).
struct Q1LowerBound {
  double value = 0.0;
  double analytic = 0.0;
  double trivial = 0.0;
};
Q1LowerBound q1_lower_bound_gds(const GdsChannel& g,
                                const std::vector<std::pair<ComplexMatrix, double>>& per_block_optima);

// Upper bound on Q1 when all subchannels share the coherent-information value
// shared_q1 and omega_i are complement outputs at per-block optimal states:
// value = shared_q1 + log2 sum_i 2^{-||omega_i - omega_bar||_1^2 / 2} with
// omega_bar the uniform mixture of the supplied outputs; trivial is the
// universal cap log2 sum_i 2^{q1_i} = log2(n+1) + shared_q1.
struct Q1UpperBound {
  double value = 0.0;
  double trivial = 0.0;
};
Q1UpperBound q1_upper_bound_equal(const GdsChannel& g, double shared_q1,
                                  const std::vector<ComplexMatrix>& complement_outputs);

// Lower bound on P1: best over p of H(p) + sum_i p_i I_p(E_i, N_i)
// - chi({p_i, omega_i}) with omega_i = N_i^c of the ensemble average.
double p1_lower_bound_gds(const GdsChannel& g, const std::vector<Ensemble>& per_block_ensembles);

// Lower bound on C1: closed form log2 sum_i 2^{chi(E_i, N_i)}.
double c1_lower_bound_gds(const GdsChannel& g, const std::vector<Ensemble>& per_block_ensembles);

// One-shot quantities of a plain direct sum channel from subchannel values.
enum class CapacityKind { Q1, P1, C1 };
double direct_sum_capacities(const std::vector<double>& values, CapacityKind kind);

}  // namespace gdscap
