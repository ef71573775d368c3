#pragma once

#include "gdscap/linalg.hpp"

#include <optional>
#include <string>

namespace gdscap {

// Thrown when channel data fails validation (shape mismatch, not CPTP, ...).
class channel_error : public std::runtime_error {
 public:
  explicit channel_error(const std::string& what) : std::runtime_error(what) {}
};

// A completely positive trace-preserving map given by an explicit Kraus list.
struct KrausChannel {
  std::string name;
  int dim_in = 0;
  int dim_out = 0;
  std::vector<ComplexMatrix> kraus;  // each dim_out x dim_in

  int kraus_count() const { return static_cast<int>(kraus.size()); }
};

// Validates shapes and the CPTP condition ||sum_k E_k^dag E_k - I||_inf <= 1e-10.
KrausChannel make_channel(std::string name, std::vector<ComplexMatrix> kraus);
void validate_channel(const KrausChannel& ch);
double cptp_residual(const KrausChannel& ch);

ComplexMatrix apply(const KrausChannel& ch, const ComplexMatrix& rho);

// Complementary channel from the canonical Stinespring dilation
// V|psi> = sum_k |k>_E (x) E_k|psi>:  N^c(rho)[k,k'] = Tr(E_k rho E_{k'}^dag).
// Output dimension equals the Kraus count; complement(complement(ch)) == ch.
KrausChannel complement(const KrausChannel& ch);

// Unnormalized Choi matrix sum_{s,t} |s><t| (x) ch(|s><t|) on C^{dim_in} (x) C^{dim_out};
// trace equals dim_in.
ComplexMatrix choi(const KrausChannel& ch);

// Transfer matrix R with vec_row(ch(X)) = R vec_row(X); dim_out^2 x dim_in^2.
ComplexMatrix transfer_matrix(const KrausChannel& ch);

// Adjoint map (Heisenberg picture): ch_adj(O) = sum_k E_k^dag O E_k.
ComplexMatrix apply_adjoint(const KrausChannel& ch, const ComplexMatrix& op);

// Tensor product channel with Kraus list {E_k (x) F_l} in row-major (k, l) order.
KrausChannel tensor(const KrausChannel& a, const KrausChannel& b);

// Composition second o first with Kraus list {F_l E_k}.
KrausChannel compose(const KrausChannel& second, const KrausChannel& first);

// Appends zero Kraus operators to reach target_count (same map, larger environment).
KrausChannel zero_pad(const KrausChannel& ch, int target_count);

// True when both channels act identically (equal Chois); environment size may differ.
bool channels_equal_as_maps(const KrausChannel& a, const KrausChannel& b, double tol = 1e-9);

// Outcome of a channel-predicate decision procedure.
struct ChannelVerdict {
  std::string predicate;
  bool holds = false;
  double residual = 0.0;                 // max constraint violation of the found witness
  std::optional<ComplexMatrix> witness;  // Choi of the (anti)degrading map when found
};

// Degradability via least squares on transfer matrices: finds the min-norm
// solution D of D o ch = ch^c, then checks its Choi for complete positivity
// and trace preservation. Decisive whenever the least-squares solution is
// unique; a CPTP solution elsewhere in the affine solution set would be
// missed (reported as not degradable).
ChannelVerdict is_degradable(const KrausChannel& ch);
ChannelVerdict is_antidegradable(const KrausChannel& ch);

// PPT: partial transpose of the Choi matrix remains PSD (within 1e-9 scale).
ChannelVerdict is_ppt(const KrausChannel& ch);

// Stock channels used across tests and examples.
KrausChannel identity_channel(int dim);
KrausChannel dephasing_channel(double p);                      // E0 = sqrt(1-p) I, E1 = sqrt(p) Z
KrausChannel bitflip_channel(double p);                        // E0 = sqrt(1-p) I, E1 = sqrt(p) X
KrausChannel amplitude_damping_channel(double gamma);
KrausChannel completely_depolarizing_channel(int dim_in, int dim_out);  // rho -> I/dim_out

}  // namespace gdscap
