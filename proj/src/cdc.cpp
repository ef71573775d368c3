#include "gdscap/cdc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <Eigen/SVD>

namespace gdscap {

namespace {

long long ipow_ll(int base, int exp) {
  long long out = 1;
  for (int k = 0; k < exp; ++k) out *= base;
  return out;
}

// Recover (p, alpha) from a ladder-built channel and verify the canonical
// Kraus form; throws if g was not built as a completely-depolarizing ladder.
CdcParams infer_cdc(const GdsChannel& g) {
  const int nb = g.block_count();
  if (nb < 2) throw std::invalid_argument("cdc: at least two blocks expected");
  if (g.in_blocks.sizes[0] != 1) throw std::invalid_argument("cdc: block 0 must have d_A = 1");
  const int p = g.in_blocks.sizes[1];
  if (p < 2) throw std::invalid_argument("cdc: block dimensions must grow by powers of p > 1");
  int alpha = 0;
  long long pw = 1;
  while (pw < g.out_blocks.sizes[0]) {
    pw *= p;
    ++alpha;
  }
  CdcParams params{p, nb - 1, alpha};
  if (alpha < params.n || pw != g.out_blocks.sizes[0])
    throw std::invalid_argument("cdc: output dimensions are not powers of p");
  for (int i = 0; i < nb; ++i) {
    if (g.in_blocks.sizes[i] != ipow_ll(p, i) ||
        g.out_blocks.sizes[i] != ipow_ll(p, alpha - i))
      throw std::invalid_argument("cdc: block dimensions do not follow the ladder");
    const KrausChannel ref =
        completely_depolarizing_channel(g.in_blocks.sizes[i], g.out_blocks.sizes[i]);
    if (g.subchannels[i].kraus_count() != ref.kraus_count())
      throw std::invalid_argument("cdc: subchannel is not completely depolarizing");
    for (int k = 0; k < ref.kraus_count(); ++k)
      if ((g.subchannels[i].kraus[k] - ref.kraus[k]).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("cdc: subchannel is not completely depolarizing");
  }
  return params;
}

// ||Tr_B |C_{M_ij}^{T_B}| ||_inf straight from the Choi matrix: thin SVD, then
// the partial trace of sum_k sigma_k v_k v_k^dag accumulated on A_j.
double numeric_infnorm(const GdsChannel& g, int i, int j) {
  const ComplexMatrix m = off_diagonal_choi_pt(off_diagonal_choi(g, i, j));
  const int da = g.in_blocks.sizes[j], db = g.out_blocks.sizes[i];
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinV);
  const RealVector& sigma = svd.singularValues();
  const double cut = (sigma.size() ? sigma(0) : 0.0) * 1e-13;
  ComplexMatrix t = ComplexMatrix::Zero(da, da);
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (sigma(k) <= cut) continue;
    const auto v = svd.matrixV().col(k);
    for (int a = 0; a < da; ++a)
      for (int ap = 0; ap < da; ++ap) {
        Complex acc(0.0, 0.0);
        for (int b = 0; b < db; ++b)
          acc += v(Eigen::Index(a) * db + b) * std::conj(v(Eigen::Index(ap) * db + b));
        t(a, ap) += sigma(k) * acc;
      }
  }
  return spectral_norm(t);
}

}  // namespace

bool cdc_materializable(const CdcParams& params) {
  params.validate();
  const int a = params.effective_alpha();
  const double d = std::pow(double(params.p), double(a));
  double da = 0.0, db = 0.0;
  for (int i = 0; i <= params.n; ++i) {
    da += std::pow(double(params.p), double(i));
    db += std::pow(double(params.p), double(a - i));
  }
  // Assembled Kraus storage: p^alpha operators on (sum d_Ai) x (sum d_Bi).
  return d <= 2048.0 && d * da * db <= double(1 << 25);
}

void CdcParams::validate() const {
  if (p < 2) throw std::invalid_argument("cdc: p must be at least 2");
  if (n < 1) throw std::invalid_argument("cdc: n must be at least 1");
  if (alpha >= 0 && alpha < n) throw std::invalid_argument("cdc: alpha must be at least n");
  if (effective_alpha() > 62 || effective_alpha() * std::log2(double(p)) > 400)
    throw std::invalid_argument("cdc: ladder exponent out of range");
}

GdsChannel build_cdc(const CdcParams& params) {
  params.validate();
  const int a = params.effective_alpha();
  const long long d = ipow_ll(params.p, a);
  if (d > 2048 || !cdc_materializable(params))
    throw std::invalid_argument("cdc: ladder too large to materialize");
  std::vector<KrausChannel> subs;
  for (int i = 0; i <= params.n; ++i)
    subs.push_back(completely_depolarizing_channel(static_cast<int>(ipow_ll(params.p, i)),
                                                   static_cast<int>(ipow_ll(params.p, a - i))));
  std::string name = "cdc_p" + std::to_string(params.p) + "_n" + std::to_string(params.n);
  if (a != params.n) name += "_a" + std::to_string(a);
  return build_gds(std::move(subs), std::move(name));
}

GdsChannel build_platypus(const RealVector& mu) {
  const int d = static_cast<int>(mu.size());
  if (d < 1) throw std::invalid_argument("platypus: mu must be nonempty");
  double sum = 0.0;
  for (int k = 0; k < d; ++k) {
    if (mu(k) < -1e-12) throw std::invalid_argument("platypus: mu must be nonnegative");
    sum += mu(k);
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("platypus: mu must sum to one");
  std::vector<ComplexMatrix> prepare;
  for (int k = 0; k < d; ++k) {
    ComplexMatrix e = ComplexMatrix::Zero(d, 1);
    e(k, 0) = std::sqrt(std::max(mu(k), 0.0));
    prepare.push_back(e);
  }
  std::vector<KrausChannel> subs;
  subs.push_back(make_channel("prepare", std::move(prepare)));
  subs.push_back(completely_depolarizing_channel(d, 1));
  return build_gds(std::move(subs), "platypus");
}

std::vector<int> cdc_sqr_set_sizes(int d_ai, int d_bi, int d_bj, int r) {
  if (d_ai < 1 || d_bj < 1 || d_bi < d_bj || r < 0 || r >= d_bj)
    throw std::invalid_argument("cdc_sqr_set_sizes: invalid arguments");
  std::vector<int> sizes;
  int prev = -1;
  for (int q = 0; q < d_ai; ++q) {
    const int a_q = ((q + 1) * d_bi - 1 - r) / d_bj;
    sizes.push_back(a_q - prev);
    prev = a_q;
  }
  return sizes;
}

double cdc_offdiag_infnorm_combinatorial(int p, int alpha, int i, int j) {
  if (p < 2 || alpha < 1 || i < 0 || j < 0 || i == j || i > alpha || j > alpha)
    throw std::invalid_argument("cdc_offdiag_infnorm_combinatorial: invalid indices");
  if (alpha * std::log2(double(p)) > 24)
    throw std::invalid_argument("cdc_offdiag_infnorm_combinatorial: ladder too large");
  const long long d_ai = ipow_ll(p, i), d_bi = ipow_ll(p, alpha - i);
  const long long d_aj = ipow_ll(p, j), d_bj = ipow_ll(p, alpha - j);
  const double denom = std::sqrt(double(d_bi) * double(d_bj));
  if (d_bi < d_bj) {
    // The squared positive part is diagonal; entry (a, b) counts indices
    // k in [a d_bj, (a+1) d_bj) with k = b mod d_bi.
    double best = 0.0;
    for (long long a = 0; a < d_aj; ++a) {
      double row = 0.0;
      for (long long b = 0; b < d_bi; ++b) {
        const long long lo = a * d_bj, hi = (a + 1) * d_bj;  // half-open
        const long long count = (hi - 1 - b >= 0 ? (hi - 1 - b) / d_bi + 1 : 0) -
                                (lo - 1 - b >= 0 ? (lo - 1 - b) / d_bi + 1 : 0);
        row += std::sqrt(double(count));
      }
      best = std::max(best, row);
    }
    return best / denom;
  }
  // Interval-set decomposition: each (r, q) contributes the projector onto
  // S_q^(r) scaled by 1/sqrt(d_bi d_bj |S_q^(r)|).
  std::vector<double> diag(static_cast<std::size_t>(d_aj), 0.0);
  for (int r = 0; r < d_bj; ++r) {
    const std::vector<int> sizes =
        cdc_sqr_set_sizes(static_cast<int>(d_ai), static_cast<int>(d_bi),
                          static_cast<int>(d_bj), r);
    long long m = 0;
    for (int size : sizes) {
      const double w = 1.0 / (denom * std::sqrt(double(size)));
      for (int c = 0; c < size; ++c) diag[static_cast<std::size_t>(m++)] += w;
    }
  }
  return *std::max_element(diag.begin(), diag.end());
}

double cdc_offdiag_infnorm(const GdsChannel& g, int i, int j) {
  const CdcParams params = infer_cdc(g);
  if (i < 0 || j < 0 || i >= g.block_count() || j >= g.block_count() || i == j)
    throw std::invalid_argument("cdc_offdiag_infnorm: invalid block pair");
  const double numeric = numeric_infnorm(g, i, j);
  const double comb = cdc_offdiag_infnorm_combinatorial(params.p, params.effective_alpha(), i, j);
  if (std::abs(numeric - comb) > 1e-10 * (1.0 + comb))
    throw std::runtime_error("cdc_offdiag_infnorm: numeric and combinatorial paths disagree");
  return comb;
}

CdcBounds cdc_bounds(const CdcParams& params) {
  params.validate();
  CdcBounds b;
  const double d = std::pow(double(params.p), double(params.effective_alpha()));
  b.q1_lower_bits = std::log2(params.n + 1.0) / d;
  b.q_upper_bits = std::log2(1.0 + params.n / std::sqrt(double(params.p)));
  b.pc_exact_bits = std::log2(params.n + 1.0);
  if (d <= 1024.0 && cdc_materializable(params)) {
    const GdsChannel g = build_cdc(params);
    std::vector<TranspositionWitness> subs;
    for (int i = 0; i < g.block_count(); ++i) {
      TranspositionWitness sub;
      const Eigen::Index dim = Eigen::Index(g.in_blocks.sizes[i]) * g.out_blocks.sizes[i];
      sub.y = 1.0;
      sub.Y = ComplexMatrix::Identity(dim, dim) / static_cast<double>(g.out_blocks.sizes[i]);
      subs.push_back(std::move(sub));
    }
    const TranspositionWitness qw = build_gds_transposition_witness(g, subs);
    b.q_certificate = check_transposition_witness(g, qw);
    b.c_certificate = check_classical_witness(g, build_cdc_classical_witness(g));
    b.certified = b.q_certificate.feasible && b.c_certificate.feasible;
  }
  return b;
}

KrausChannel build_erasure(const ErasureParams& params) {
  if (!(params.lambda >= 0.0 && params.lambda <= 1.0))
    throw std::invalid_argument("erasure: lambda must lie in [0, 1]");
  if (params.dim < 1) throw std::invalid_argument("erasure: dimension must be positive");
  const int d = params.dim;
  std::vector<ComplexMatrix> kraus;
  ComplexMatrix keep = ComplexMatrix::Zero(d + 1, d);
  for (int x = 0; x < d; ++x) keep(x, x) = std::sqrt(1.0 - params.lambda);
  kraus.push_back(keep);
  for (int x = 0; x < d; ++x) {
    ComplexMatrix flag = ComplexMatrix::Zero(d + 1, d);
    flag(d, x) = std::sqrt(params.lambda);
    kraus.push_back(flag);
  }
  return make_channel("erasure", std::move(kraus));
}

double erasure_quantum_capacity(const ErasureParams& params) {
  if (!(params.lambda >= 0.0 && params.lambda <= 1.0))
    throw std::invalid_argument("erasure: lambda must lie in [0, 1]");
  return std::max((1.0 - 2.0 * params.lambda) * std::log2(double(params.dim)), 0.0);
}

double joint_coherent_information(const CdcParams& params, double lambda) {
  params.validate();
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::invalid_argument("joint_coherent_information: lambda must lie in [0, 1]");
  const GdsChannel g = build_cdc(params);
  const int da = g.in_blocks.total(), db = g.out_blocks.total();
  if (Eigen::Index(da) * (da + 1) > 4096 || Eigen::Index(db) * (da + 1) > 4096)
    throw std::invalid_argument("joint_coherent_information: dimension guard exceeded");
  const KrausChannel er = build_erasure({lambda, da});
  const int nb = g.block_count();
  const double q = 1.0 / nb;
  const Eigen::Index out_dim = Eigen::Index(db) * (da + 1);
  const int kn = g.assembled.kraus_count(), ke = er.kraus_count();
  ComplexMatrix out = ComplexMatrix::Zero(out_dim, out_dim);
  ComplexMatrix gram = ComplexMatrix::Zero(Eigen::Index(kn) * ke, Eigen::Index(kn) * ke);
  for (int i = 0; i < nb; ++i) {
    // |Phi_i> purifies I/d_{A_i} on block i into the mirrored reference, so
    // its matrix form is the scaled identity on that block.
    const int off = g.in_blocks.offsets[i], size = g.in_blocks.sizes[i];
    const double scale = 1.0 / std::sqrt(static_cast<double>(size));
    ComplexMatrix w(out_dim, Eigen::Index(kn) * ke);
    for (int k = 0; k < kn; ++k) {
      ComplexMatrix nf = ComplexMatrix::Zero(db, da);
      nf.middleCols(off, size) = scale * g.assembled.kraus[k].middleCols(off, size);
      for (int l = 0; l < ke; ++l) {
        const ComplexMatrix img = nf * er.kraus[l].transpose();  // db x (da+1)
        for (int bo = 0; bo < db; ++bo)
          for (int ao = 0; ao <= da; ++ao)
            w(Eigen::Index(bo) * (da + 1) + ao, Eigen::Index(k) * ke + l) = img(bo, ao);
      }
    }
    out.noalias() += q * w * w.adjoint();
    gram.noalias() += q * w.adjoint() * w;
  }
  return von_neumann_entropy(out) - von_neumann_entropy(gram);
}

LambdaWindow superadditivity_max_lambda(const CdcParams& params) {
  params.validate();
  const double q_upper = std::log2(1.0 + params.n / std::sqrt(double(params.p)));
  const double pc = std::log2(params.n + 1.0);
  const double raw = 1.0 - q_upper / pc;
  LambdaWindow window;
  window.certified = raw > 0.5;
  window.lambda_max = std::clamp(raw, 0.5, 1.0);
  return window;
}

std::vector<Fig1Row> fig1_data(const std::function<int(int)>& p_rule, int n_min, int n_max) {
  if (!p_rule) throw std::invalid_argument("fig1_data: missing p rule");
  if (n_min < 1 || n_max < n_min) throw std::invalid_argument("fig1_data: invalid n range");
  std::vector<Fig1Row> rows;
  for (int n = n_min; n <= n_max; ++n) {
    const int p = p_rule(n);
    CdcParams params{p, n, -1};
    params.validate();
    Fig1Row row;
    row.n = n;
    row.p = p;
    row.q_upper_bits = std::log2(1.0 + n / std::sqrt(double(p)));
    row.private_bits = std::log2(n + 1.0);
    row.lambda_max = superadditivity_max_lambda(params).lambda_max;
    rows.push_back(row);
  }
  return rows;
}

void write_fig1_csv(const std::vector<Fig1Row>& rows, std::ostream& os) {
  os << "n,p,q_upper_bits,private_bits,lambda_max\n";
  char buf[160];
  for (const Fig1Row& row : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.12g,%.12g,%.12g\n", row.n, row.p,
                  row.q_upper_bits, row.private_bits, row.lambda_max);
    os << buf;
  }
}

}  // namespace gdscap
