#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "gdscap/gds.hpp"

namespace gdscap {

using SparseComplex = Eigen::SparseMatrix<Complex>;

// One cross-sector piece of a block-structured witness: the positive part
// |C_{M_ij}^{T_B}| of the off-diagonal map's transposed Choi, which lives on
// the sector A_j (x) B_i, scaled by `coefficient`.
struct WitnessPairTerm {
  int i = 0;
  int j = 0;
  double coefficient = 0.0;
  SparseComplex abs_pt;  // |C_{M_ij}^{T_B}| on A_j (x) B_i, dim d_{A_j} d_{B_i}
};

// Feasible point of the transposition-bound SDP: Q(ch) <= log2 y whenever
// Y +- C^{T_B} >= 0 and Tr_B Y <= y I_A. Witnesses built against a GDS block
// split also carry a structured form (per-block terms plus sparse pair terms)
// so that large direct sums can be verified without materializing Y; the dense
// Y is filled in only when the ambient dimension is moderate.
struct TranspositionWitness {
  double y = 0.0;
  ComplexMatrix Y;  // dense form on A (x) B; may be empty for large witnesses

  double y_tight = 0.0;                    // per-row cap, <= y (diagnostic)
  std::vector<ComplexMatrix> block_terms;  // Y_i on A_i (x) B_i
  std::vector<WitnessPairTerm> pair_terms;
  BlockStructure in_blocks, out_blocks;
  std::string notes;  // construction remarks, forwarded to the certificate

  bool has_structure() const { return !block_terms.empty(); }
};

// Feasible point of the beta SDP for the classical capacity: C(ch) <= log2 Tr S
// whenever Y +- C^{T_B} >= 0 and I_A (x) S +- Y^{T_B} >= 0.
struct ClassicalWitness {
  ComplexMatrix Y;  // dense form; may be empty for large witnesses
  ComplexMatrix S;  // Hermitian on B

  std::vector<ComplexMatrix> block_terms;
  std::vector<WitnessPairTerm> pair_terms;
  BlockStructure in_blocks, out_blocks;

  bool has_structure() const { return !block_terms.empty(); }
};

struct BoundCertificate {
  std::string kind;  // "Q_transposition" or "C_beta"
  double value_bits = 0.0;
  bool feasible = false;
  std::vector<std::pair<std::string, double>> residuals;  // named min-eig slacks
  double y = 0.0;        // transposition payload
  double trace_s = 0.0;  // classical payload
  std::string notes;
};

// Materializes the structured form on the full A (x) B space.
ComplexMatrix assemble_witness_dense(const std::vector<ComplexMatrix>& block_terms,
                                     const std::vector<WitnessPairTerm>& pair_terms,
                                     const BlockStructure& in_blocks,
                                     const BlockStructure& out_blocks);

// Dense verification of the transposition-bound SDP constraints against the
// channel's Choi matrix; certifies Q(ch) <= log2 y on success.
BoundCertificate check_transposition_witness(const KrausChannel& ch,
                                             const TranspositionWitness& w);

// Structured verification for a GDS channel: per-block PSD checks, sparse
// sector-pair PSD checks (split into connected components), and per-block
// partial-trace caps. Falls back to the dense path when w carries no structure.
BoundCertificate check_transposition_witness(const GdsChannel& g, const TranspositionWitness& w);

// Theorem-1 construction: combines feasible subchannel witnesses with the
// absolute values of the transposed off-diagonal Chois,
//   Y = sum_i Y_i + sum_{i<j} (b_ij/a_ij)|C_{M_ij}^{T_B}| + (a_ij/b_ij)|C_{M_ji}^{T_B}|,
//   a_ij = sqrt(||Tr_B |C_{M_ij}^{T_B}| ||_inf), b_ij analogous,
//   y = max_i y_i + (n_blocks - 1) * max_{i!=j} a_ij b_ij.
// The per-row cap max_i [y_i + sum_{j!=i} a_ij b_ij] is reported as y_tight.
// Degenerate pairs (one norm vanishing while the partner does not) fall back
// to the trace-norm relaxation and are recorded in the certificate notes.
TranspositionWitness build_gds_transposition_witness(
    const GdsChannel& g, const std::vector<TranspositionWitness>& sub_witnesses);

// Residual of the splitting lemma (b/a)|M| + (a/b)|M^dag| >= +-(M + M^dag):
// the smaller of the two minimum eigenvalues; nonnegative up to roundoff.
double abs_splitting_check(const ComplexMatrix& m, double a, double b);

// Dense and structured verification of the beta SDP; certifies
// C(ch) <= log2 Tr S on success.
BoundCertificate check_classical_witness(const KrausChannel& ch, const ClassicalWitness& w);
BoundCertificate check_classical_witness(const GdsChannel& g, const ClassicalWitness& w);

// The explicit classical-capacity witness for the completely-depolarizing
// direct sum: Y = sum_i I_{A_i} (x) I_{B_i}/d_{B_i} + sum_{i<j} (|C_{M_ij}^{T_B}|
// + |C_{M_ji}^{T_B}|), S = (+)_i I_{B_i}/d_{B_i}, so Tr S = n+1.
ClassicalWitness build_cdc_classical_witness(const GdsChannel& g);

// Lower estimate of the diamond norm of a Hermiticity-preserving map given as
// a Choi matrix: alternating ascent over pure bipartite inputs (the optimum of
// such maps is attained at pure states), deterministic under seed.
double diamond_norm_oracle(const ComplexMatrix& map_choi, int dim_in, int dim_out,
                           int restarts = 64, std::uint64_t seed = 20240829);

}  // namespace gdscap
