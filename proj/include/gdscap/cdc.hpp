#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "gdscap/witness.hpp"

namespace gdscap {

// The completely-depolarizing ladder: block i (i = 0..n) maps d_{A_i} = p^i
// to d_{B_i} = p^(alpha - i), so every block has the same product p^alpha.
// alpha defaults to n, the smallest admissible exponent.
struct CdcParams {
  int p = 2;
  int n = 1;
  int alpha = -1;  // -1 means alpha = n

  int effective_alpha() const { return alpha < 0 ? n : alpha; }
  void validate() const;  // throws std::invalid_argument
};

// Erasure channel on `dim` levels: keeps the input with weight 1 - lambda and
// replaces it by the flag state |dim> with weight lambda.
struct ErasureParams {
  double lambda = 0.0;
  int dim = 2;
};

GdsChannel build_cdc(const CdcParams& params);

// True when the assembled ladder fits the materialization budget (2048 Kraus
// operators, 2^25 stored entries); build_cdc rejects anything larger.
bool cdc_materializable(const CdcParams& params);

// The generalized platypus channel as a two-block direct sum: block 0 prepares
// diag(mu) from a one-dimensional input, block 1 discards a dim(mu)-dimensional
// input into a one-dimensional output.
GdsChannel build_platypus(const RealVector& mu);

// ||Tr_B |C_{M_ij}^{T_B}| ||_inf for a ladder-built channel, evaluated both
// numerically from the Choi matrix and combinatorially; throws
// std::runtime_error if the two paths disagree beyond 1e-10.
double cdc_offdiag_infnorm(const GdsChannel& g, int i, int j);

// The combinatorial path alone. For d_{B_i} < d_{B_j} the squared positive
// part is diagonal with residue-class counts; otherwise it decomposes into
// maximally entangled states indexed by the interval sets S_q^(r).
double cdc_offdiag_infnorm_combinatorial(int p, int alpha, int i, int j);

// Sizes |S_q^(r)| for q = 0..d_ai-1 given block dimensions with d_bi >= d_bj;
// each size is floor(d_bi/d_bj) or floor(d_bi/d_bj) + 1, and exactly
// d_bi/d_bj when the ratio is an integer.
std::vector<int> cdc_sqr_set_sizes(int d_ai, int d_bi, int d_bj, int r);

// Closed-form capacity record for the ladder:
//   q1_lower = log2(n+1) / p^alpha   (achievable one-shot rate)
//   q_upper  = log2(1 + n/sqrt(p))   (transposition witness)
//   pc_exact = log2(n+1)             (private = classical capacity)
// Certificates are attached (and `certified` set) when the ladder is
// materializable with p^alpha <= 1024; the closed-form values are always
// filled.
struct CdcBounds {
  double q1_lower_bits = 0.0;
  double q_upper_bits = 0.0;
  double pc_exact_bits = 0.0;
  bool certified = false;
  BoundCertificate q_certificate;
  BoundCertificate c_certificate;
};

CdcBounds cdc_bounds(const CdcParams& params);

KrausChannel build_erasure(const ErasureParams& params);

// Q(E_lambda) = max{(1 - 2 lambda) log2 dim, 0}.
double erasure_quantum_capacity(const ErasureParams& params);

// I_c(omega, N (x) E_lambda) for the block-diagonal input
// omega = (1/(n+1)) (+)_i |Phi_i><Phi_i|, where |Phi_i> purifies the maximally
// mixed state of block A_i into a mirrored reference A'; the erasure channel
// acts on A'. Equals (1 - lambda) log2(n+1).
double joint_coherent_information(const CdcParams& params, double lambda);

// Supremum of lambda >= 1/2 for which the joint rate (1-lambda) log2(n+1)
// exceeds the certified cap log2(1 + n/sqrt(p)) on Q(N) while Q(E_lambda) = 0:
//   lambda_max = 1 - log2(1 + n/sqrt(p)) / log2(n+1), clamped to [1/2, 1].
// `certified` is false when the window is empty.
struct LambdaWindow {
  double lambda_max = 0.5;
  bool certified = false;
};

LambdaWindow superadditivity_max_lambda(const CdcParams& params);

struct Fig1Row {
  int n = 0;
  int p = 0;
  double q_upper_bits = 0.0;
  double private_bits = 0.0;
  double lambda_max = 0.0;
};

// One row per n in [n_min, n_max] with p = p_rule(n), alpha = n.
std::vector<Fig1Row> fig1_data(const std::function<int(int)>& p_rule, int n_min, int n_max);

// Header n,p,q_upper_bits,private_bits,lambda_max; 12 significant digits; LF.
void write_fig1_csv(const std::vector<Fig1Row>& rows, std::ostream& os);

}  // namespace gdscap
