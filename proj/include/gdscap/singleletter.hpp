#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gdscap/capacity.hpp"

namespace gdscap {

// Route by which a direct sum of zero-capacity subchannels earns a
// single-letter quantum capacity: every subchannel PPT, or every subchannel
// antidegradable. Mixed collections are rejected outright because combining
// the two kinds can superactivate quantum capacity.
enum class SingleLetterRoute { all_antidegradable, all_ppt, none };

const char* route_name(SingleLetterRoute route);

// Outcome of the single-letter test. When `qualifies`, the quantum capacity of
// the direct sum is exactly log2(n+1) for n+1 blocks — each block contributes
// zero capacity of its own, and the value is attained by block-uniform
// mixtures of the matched pure states.
struct SingleLetterVerdict {
  bool qualifies = false;
  SingleLetterRoute route = SingleLetterRoute::none;
  std::vector<ComplexVector> matched_states;  // one pure input state per block
  double match_residual = 0.0;  // max pairwise trace distance of complement outputs
  std::optional<double> capacity_bits;        // set iff qualifies
  // Per-block predicate runs behind `route`: the PPT verdicts when the PPT
  // route holds, otherwise the antidegradability verdicts.
  std::vector<ChannelVerdict> per_block;
};

// Controls the matched-state search: multi-restart projected gradient descent
// on F = sum_i ||omega_i - omega_bar||_F^2 with omega_i = N_i^c(psi_i) on the
// common environment. Restart r draws from seed base_seed + r; restart 0
// starts from |0> in every block (the natural match for many families).
struct MatchSearchConfig {
  int restarts = 16;
  int max_iterations = 600;
  std::uint64_t base_seed = 7041931;
  double tolerance = 1e-7;  // qualifying cap on the max pairwise trace distance
};

// Decides whether g has a single-letter quantum capacity through the
// zero-capacity-blocks route: all subchannels PPT (checked first) or all
// antidegradable, plus pure states psi_i whose complement outputs
// N_i^c(psi_i) coincide on the common environment. Candidate states, when
// given, must supply one vector per block with the block input dimensions;
// they are evaluated first and the search only runs when they miss the
// tolerance, so true matched states can only improve the verdict.
SingleLetterVerdict check_single_letter(const GdsChannel& g,
                                        const std::vector<ComplexVector>& candidate_states = {},
                                        const MatchSearchConfig& config = {});

// Capacity claimed by a qualifying verdict, in bits; throws
// std::invalid_argument when verdict.qualifies is false.
double single_letter_capacity(const SingleLetterVerdict& verdict);

// GDS channel of n+1 measure-and-prepare blocks whose complements are the
// Schur multipliers rho -> M_i (entrywise x) rho for the supplied correlation
// matrices (Hermitian PSD with unit diagonal). Block i measures in the
// computational basis and prepares |w_b>, where the w_b are columns of a
// factor of M_i, so psi_i = |0> matches every complement output to |0><0|.
// Kraus lists are zero-padded to a common count when the dimensions differ.
// Throws std::invalid_argument when some M_i is not PSD, has a diagonal entry
// away from one, or the list does not hold n+1 matrices.
GdsChannel hadamard_complement_example(int n, const std::vector<ComplexMatrix>& correlations);

}  // namespace gdscap
