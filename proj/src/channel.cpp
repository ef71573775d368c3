#include "gdscap/channel.hpp"

#include <cmath>
#include <sstream>

namespace gdscap {

namespace {

void require_state_shape(const KrausChannel& ch, const ComplexMatrix& rho) {
  if (rho.rows() != ch.dim_in || rho.cols() != ch.dim_in)
    throw channel_error(ch.name + ": input state has wrong dimension");
}

}  // namespace

KrausChannel make_channel(std::string name, std::vector<ComplexMatrix> kraus) {
  KrausChannel ch;
  ch.name = std::move(name);
  ch.kraus = std::move(kraus);
  if (ch.kraus.empty()) throw channel_error(ch.name + ": empty Kraus list");
  ch.dim_out = static_cast<int>(ch.kraus[0].rows());
  ch.dim_in = static_cast<int>(ch.kraus[0].cols());
  validate_channel(ch);
  return ch;
}

double cptp_residual(const KrausChannel& ch) {
  ComplexMatrix acc = ComplexMatrix::Zero(ch.dim_in, ch.dim_in);
  for (const auto& e : ch.kraus) acc += e.adjoint() * e;
  return spectral_norm(acc - ComplexMatrix::Identity(ch.dim_in, ch.dim_in));
}

void validate_channel(const KrausChannel& ch) {
  if (ch.kraus.empty()) throw channel_error(ch.name + ": empty Kraus list");
  if (ch.dim_in <= 0 || ch.dim_out <= 0) throw channel_error(ch.name + ": nonpositive dimension");
  for (const auto& e : ch.kraus)
    if (e.rows() != ch.dim_out || e.cols() != ch.dim_in)
      throw channel_error(ch.name + ": inconsistent Kraus shapes");
  double res = cptp_residual(ch);
  if (res > 1e-10) {
    std::ostringstream msg;
    msg << ch.name << ": Kraus list is not trace preserving (residual " << res << ")";
    throw channel_error(msg.str());
  }
}

ComplexMatrix apply(const KrausChannel& ch, const ComplexMatrix& rho) {
  require_state_shape(ch, rho);
  ComplexMatrix out = ComplexMatrix::Zero(ch.dim_out, ch.dim_out);
  for (const auto& e : ch.kraus) out += e * rho * e.adjoint();
  return out;
}

ComplexMatrix apply_adjoint(const KrausChannel& ch, const ComplexMatrix& op) {
  if (op.rows() != ch.dim_out || op.cols() != ch.dim_out)
    throw channel_error(ch.name + ": adjoint input has wrong dimension");
  ComplexMatrix out = ComplexMatrix::Zero(ch.dim_in, ch.dim_in);
  for (const auto& e : ch.kraus) out += e.adjoint() * op * e;
  return out;
}

KrausChannel complement(const KrausChannel& ch) {
  const int k_count = ch.kraus_count();
  std::vector<ComplexMatrix> comp(ch.dim_out, ComplexMatrix::Zero(k_count, ch.dim_in));
  for (int b = 0; b < ch.dim_out; ++b)
    for (int k = 0; k < k_count; ++k)
      for (int a = 0; a < ch.dim_in; ++a) comp[b](k, a) = ch.kraus[k](b, a);
  KrausChannel out;
  out.name = ch.name.empty() ? "complement" : ch.name + "_complement";
  out.dim_in = ch.dim_in;
  out.dim_out = k_count;
  out.kraus = std::move(comp);
  validate_channel(out);
  return out;
}

ComplexMatrix choi(const KrausChannel& ch) {
  const Eigen::Index dim = Eigen::Index(ch.dim_in) * ch.dim_out;
  ComplexMatrix c = ComplexMatrix::Zero(dim, dim);
  ComplexVector v(dim);
  for (const auto& e : ch.kraus) {
    for (int s = 0; s < ch.dim_in; ++s)
      for (int i = 0; i < ch.dim_out; ++i) v(Eigen::Index(s) * ch.dim_out + i) = e(i, s);
    c += v * v.adjoint();
  }
  return c;
}

ComplexMatrix transfer_matrix(const KrausChannel& ch) {
  // vec_row(ch(X)) = R vec_row(X): R[(i,j),(s,t)] = sum_k E_k(i,s) conj(E_k(j,t)).
  const int di = ch.dim_in, dd = ch.dim_out;
  ComplexMatrix r = ComplexMatrix::Zero(Eigen::Index(dd) * dd, Eigen::Index(di) * di);
  for (const auto& e : ch.kraus)
    for (int i = 0; i < dd; ++i)
      for (int j = 0; j < dd; ++j)
        for (int s = 0; s < di; ++s)
          for (int t = 0; t < di; ++t)
            r(Eigen::Index(i) * dd + j, Eigen::Index(s) * di + t) += e(i, s) * std::conj(e(j, t));
  return r;
}

KrausChannel tensor(const KrausChannel& a, const KrausChannel& b) {
  std::vector<ComplexMatrix> ops;
  ops.reserve(a.kraus.size() * b.kraus.size());
  for (const auto& ea : a.kraus)
    for (const auto& eb : b.kraus) ops.push_back(tensor_product(ea, eb));
  KrausChannel out;
  out.name = a.name + "(x)" + b.name;
  out.dim_in = a.dim_in * b.dim_in;
  out.dim_out = a.dim_out * b.dim_out;
  out.kraus = std::move(ops);
  validate_channel(out);
  return out;
}

KrausChannel compose(const KrausChannel& second, const KrausChannel& first) {
  if (second.dim_in != first.dim_out)
    throw channel_error("compose: dimension mismatch between stages");
  std::vector<ComplexMatrix> ops;
  ops.reserve(second.kraus.size() * first.kraus.size());
  for (const auto& f : second.kraus)
    for (const auto& e : first.kraus) ops.push_back(f * e);
  KrausChannel out;
  out.name = second.name + " o " + first.name;
  out.dim_in = first.dim_in;
  out.dim_out = second.dim_out;
  out.kraus = std::move(ops);
  validate_channel(out);
  return out;
}

KrausChannel zero_pad(const KrausChannel& ch, int target_count) {
  if (target_count < ch.kraus_count())
    throw channel_error(ch.name + ": zero_pad target below current Kraus count");
  KrausChannel out = ch;
  while (out.kraus_count() < target_count)
    out.kraus.push_back(ComplexMatrix::Zero(ch.dim_out, ch.dim_in));
  return out;
}

bool channels_equal_as_maps(const KrausChannel& a, const KrausChannel& b, double tol) {
  if (a.dim_in != b.dim_in || a.dim_out != b.dim_out) return false;
  return (choi(a) - choi(b)).cwiseAbs().maxCoeff() <= tol;
}

namespace {

// Min-norm solution rows of R_D in R_D * R_src = R_dst, i.e. per-row least
// squares against A = R_src^T. Returns the Choi matrix of the candidate map
// (dims: src output -> dst output) and the relative composition residual.
struct DegradingFit {
  ComplexMatrix choi_d;  // on C^{d_mid} (x) C^{d_to}
  double residual = 0.0;
};

DegradingFit fit_degrading_map(const KrausChannel& src, const KrausChannel& dst) {
  // Wanted: D with D o src = dst (src and dst share dim_in).
  const int d_mid = src.dim_out, d_to = dst.dim_out;
  ComplexMatrix r_src = transfer_matrix(src);
  ComplexMatrix r_dst = transfer_matrix(dst);
  Eigen::CompleteOrthogonalDecomposition<ComplexMatrix> cod(r_src.transpose());
  // Solve row-by-row: r_src^T x = r_dst[r,:]^T, x = R_D[r,:]^T.
  ComplexMatrix r_d(Eigen::Index(d_to) * d_to, Eigen::Index(d_mid) * d_mid);
  for (Eigen::Index r = 0; r < r_d.rows(); ++r)
    r_d.row(r) = cod.solve(r_dst.row(r).transpose()).transpose();

  DegradingFit fit;
  double num = (r_d * r_src - r_dst).norm();
  fit.residual = num / (1.0 + r_dst.norm());

  // Choi from transfer: C[(m,e),(m',e')] = R_D[(e,e'),(m,m')], then Hermitize.
  ComplexMatrix c(Eigen::Index(d_mid) * d_to, Eigen::Index(d_mid) * d_to);
  for (int m = 0; m < d_mid; ++m)
    for (int mp = 0; mp < d_mid; ++mp)
      for (int e = 0; e < d_to; ++e)
        for (int ep = 0; ep < d_to; ++ep)
          c(Eigen::Index(m) * d_to + e, Eigen::Index(mp) * d_to + ep) =
              r_d(Eigen::Index(e) * d_to + ep, Eigen::Index(m) * d_mid + mp);
  fit.choi_d = (c + c.adjoint()) / 2.0;
  return fit;
}

ChannelVerdict degradability_verdict(const std::string& predicate, const KrausChannel& src,
                                     const KrausChannel& dst) {
  DegradingFit fit = fit_degrading_map(src, dst);
  const int d_mid = src.dim_out, d_to = dst.dim_out;

  double psd_deficit =
      std::max(0.0, -min_eigenvalue(fit.choi_d)) / (1.0 + spectral_norm(fit.choi_d));
  ComplexMatrix marginal = partial_trace(fit.choi_d, d_mid, d_to, Factor::A);
  double tp_res = (marginal - ComplexMatrix::Identity(d_mid, d_mid)).cwiseAbs().maxCoeff();

  ChannelVerdict v;
  v.predicate = predicate;
  v.residual = std::max({fit.residual, psd_deficit, tp_res});
  v.holds = v.residual <= 1e-7;
  if (v.holds) v.witness = fit.choi_d;
  return v;
}

}  // namespace

ChannelVerdict is_degradable(const KrausChannel& ch) {
  return degradability_verdict("degradable", ch, complement(ch));
}

ChannelVerdict is_antidegradable(const KrausChannel& ch) {
  return degradability_verdict("antidegradable", complement(ch), ch);
}

ChannelVerdict is_ppt(const KrausChannel& ch) {
  ComplexMatrix pt = partial_transpose(choi(ch), ch.dim_in, ch.dim_out);
  double lo = min_eigenvalue(pt);
  ChannelVerdict v;
  v.predicate = "ppt";
  v.residual = std::max(0.0, -lo) / (1.0 + spectral_norm(pt));
  v.holds = lo >= -1e-9 * (1.0 + spectral_norm(pt));
  v.witness = pt;
  return v;
}

KrausChannel identity_channel(int dim) {
  return make_channel("identity", {ComplexMatrix::Identity(dim, dim)});
}

KrausChannel dephasing_channel(double p) {
  if (p < 0.0 || p > 1.0) throw channel_error("dephasing: p outside [0, 1]");
  ComplexMatrix z(2, 2);
  z << 1, 0, 0, -1;
  return make_channel("dephasing", {std::sqrt(1.0 - p) * ComplexMatrix::Identity(2, 2),
                                    std::sqrt(p) * z});
}

KrausChannel bitflip_channel(double p) {
  if (p < 0.0 || p > 1.0) throw channel_error("bitflip: p outside [0, 1]");
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  return make_channel("bitflip", {std::sqrt(1.0 - p) * ComplexMatrix::Identity(2, 2),
                                  std::sqrt(p) * x});
}

KrausChannel amplitude_damping_channel(double gamma) {
  if (gamma < 0.0 || gamma > 1.0) throw channel_error("amplitude_damping: gamma outside [0, 1]");
  ComplexMatrix e0(2, 2), e1(2, 2);
  e0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  e1 << 0, std::sqrt(gamma), 0, 0;
  return make_channel("amplitude_damping", {e0, e1});
}

KrausChannel completely_depolarizing_channel(int dim_in, int dim_out) {
  if (dim_in <= 0 || dim_out <= 0)
    throw channel_error("completely_depolarizing: nonpositive dimension");
  // E_{t*dim_out+b} = |b><t| / sqrt(dim_out): rho -> Tr(rho) I / dim_out.
  std::vector<ComplexMatrix> ops;
  ops.reserve(std::size_t(dim_in) * dim_out);
  const double w = 1.0 / std::sqrt(double(dim_out));
  for (int t = 0; t < dim_in; ++t)
    for (int b = 0; b < dim_out; ++b) {
      ComplexMatrix e = ComplexMatrix::Zero(dim_out, dim_in);
      e(b, t) = w;
      ops.push_back(std::move(e));
    }
  return make_channel("completely_depolarizing", std::move(ops));
}

}  // namespace gdscap
