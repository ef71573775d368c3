#include "gdscap/gds.hpp"

#include <sstream>

namespace gdscap {

GdsChannel build_gds(std::vector<KrausChannel> subchannels, std::string name) {
  if (subchannels.empty()) throw channel_error("build_gds: need at least one subchannel");
  const int k_count = subchannels[0].kraus_count();
  for (const auto& sub : subchannels) {
    validate_channel(sub);
    if (sub.kraus_count() != k_count) {
      std::ostringstream msg;
      msg << "build_gds: subchannel Kraus counts differ (" << sub.kraus_count() << " vs "
          << k_count << "); zero_pad them explicitly if intended";
      throw channel_error(msg.str());
    }
  }

  GdsChannel g;
  std::vector<int> in_sizes, out_sizes;
  for (const auto& sub : subchannels) {
    in_sizes.push_back(sub.dim_in);
    out_sizes.push_back(sub.dim_out);
  }
  g.in_blocks = BlockStructure(in_sizes);
  g.out_blocks = BlockStructure(out_sizes);

  std::vector<ComplexMatrix> kraus;
  kraus.reserve(k_count);
  for (int k = 0; k < k_count; ++k) {
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(subchannels.size());
    for (const auto& sub : subchannels) blocks.push_back(sub.kraus[k]);
    kraus.push_back(direct_sum(blocks));
  }
  g.assembled = make_channel(name, std::move(kraus));
  g.subchannels = std::move(subchannels);
  return g;
}

BlockDecomposition validate_block_structure(const KrausChannel& ch,
                                            const BlockStructure& in_blocks,
                                            const BlockStructure& out_blocks) {
  BlockDecomposition dec;
  if (in_blocks.block_count() != out_blocks.block_count())
    throw std::invalid_argument("validate_block_structure: block counts differ");
  if (in_blocks.total() != ch.dim_in || out_blocks.total() != ch.dim_out)
    throw std::invalid_argument("validate_block_structure: totals do not match channel dims");

  const int nb = in_blocks.block_count();
  dec.ok = true;
  for (int k = 0; k < ch.kraus_count(); ++k) {
    const ComplexMatrix& e = ch.kraus[k];
    // Mass outside the block diagonal must vanish exactly up to 1e-12 scale.
    double scale = 1.0 + e.cwiseAbs().maxCoeff();
    for (int bi = 0; bi < nb; ++bi)
      for (int bj = 0; bj < nb; ++bj) {
        if (bi == bj) continue;
        double mass = e.block(out_blocks.offsets[bi], in_blocks.offsets[bj], out_blocks.sizes[bi],
                              in_blocks.sizes[bj])
                          .cwiseAbs()
                          .maxCoeff();
        if (mass > 1e-12 * scale) {
          dec.ok = false;
          if (dec.bad_kraus < 0) dec.bad_kraus = k;
          dec.off_block_mass = std::max(dec.off_block_mass, mass);
        }
      }
  }
  if (!dec.ok) return dec;

  dec.sub_kraus.assign(nb, {});
  for (int b = 0; b < nb; ++b)
    for (int k = 0; k < ch.kraus_count(); ++k)
      dec.sub_kraus[b].push_back(ch.kraus[k].block(out_blocks.offsets[b], in_blocks.offsets[b],
                                                   out_blocks.sizes[b], in_blocks.sizes[b]));
  return dec;
}

GdsChannel gds_from_assembled(const KrausChannel& ch, const BlockStructure& in_blocks,
                              const BlockStructure& out_blocks, std::string name) {
  BlockDecomposition dec = validate_block_structure(ch, in_blocks, out_blocks);
  if (!dec.ok) {
    std::ostringstream msg;
    msg << "gds_from_assembled: Kraus operator " << dec.bad_kraus
        << " has off-block mass " << dec.off_block_mass;
    throw channel_error(msg.str());
  }
  std::vector<KrausChannel> subs;
  for (std::size_t b = 0; b < dec.sub_kraus.size(); ++b) {
    std::ostringstream sub_name;
    sub_name << name << "_block" << b;
    subs.push_back(make_channel(sub_name.str(), dec.sub_kraus[b]));
  }
  return build_gds(std::move(subs), std::move(name));
}

ComplexMatrix gds_complement_apply(const GdsChannel& g, const ComplexMatrix& rho) {
  if (rho.rows() != g.in_blocks.total() || rho.cols() != g.in_blocks.total())
    throw channel_error("gds_complement_apply: state has wrong dimension");
  const int k_count = g.assembled.kraus_count();
  ComplexMatrix out = ComplexMatrix::Zero(k_count, k_count);
  for (int b = 0; b < g.block_count(); ++b) {
    const auto& sub = g.subchannels[b];
    ComplexMatrix rho_b = rho.block(g.in_blocks.offsets[b], g.in_blocks.offsets[b],
                                    g.in_blocks.sizes[b], g.in_blocks.sizes[b]);
    for (int k = 0; k < k_count; ++k)
      for (int kp = 0; kp < k_count; ++kp)
        out(k, kp) += (sub.kraus[k] * rho_b * sub.kraus[kp].adjoint()).trace();
  }
  return out;
}

KrausChannel subchannel_complement(const GdsChannel& g, int i) {
  if (i < 0 || i >= g.block_count()) throw std::out_of_range("subchannel_complement: bad index");
  return complement(g.subchannels[i]);
}

OffDiagonalMap off_diagonal_choi(const GdsChannel& g, int i, int j) {
  const int nb = g.block_count();
  if (i < 0 || j < 0 || i >= nb || j >= nb) throw std::out_of_range("off_diagonal_choi: bad index");
  if (i == j) throw std::invalid_argument("off_diagonal_choi: i and j must differ");
  OffDiagonalMap m;
  m.i = i;
  m.j = j;
  m.dim_a_i = g.in_blocks.sizes[i];
  m.dim_b_i = g.out_blocks.sizes[i];
  m.dim_a_j = g.in_blocks.sizes[j];
  m.dim_b_j = g.out_blocks.sizes[j];
  m.choi = ComplexMatrix::Zero(Eigen::Index(m.dim_a_i) * m.dim_b_i,
                               Eigen::Index(m.dim_a_j) * m.dim_b_j);
  for (int s = 0; s < m.dim_a_i; ++s)
    for (int t = 0; t < m.dim_a_j; ++t) {
      ComplexMatrix block = ComplexMatrix::Zero(m.dim_b_i, m.dim_b_j);
      for (int k = 0; k < g.subchannels[i].kraus_count(); ++k)
        block += g.subchannels[i].kraus[k].col(s) * g.subchannels[j].kraus[k].col(t).adjoint();
      m.choi.block(Eigen::Index(s) * m.dim_b_i, Eigen::Index(t) * m.dim_b_j, m.dim_b_i,
                   m.dim_b_j) = block;
    }
  return m;
}

ComplexMatrix off_diagonal_choi_pt(const OffDiagonalMap& m) {
  ComplexMatrix out(Eigen::Index(m.dim_a_i) * m.dim_b_j, Eigen::Index(m.dim_a_j) * m.dim_b_i);
  for (int s = 0; s < m.dim_a_i; ++s)
    for (int t = 0; t < m.dim_a_j; ++t)
      for (int bi = 0; bi < m.dim_b_i; ++bi)
        for (int bj = 0; bj < m.dim_b_j; ++bj)
          out(Eigen::Index(s) * m.dim_b_j + bj, Eigen::Index(t) * m.dim_b_i + bi) =
              m.choi(Eigen::Index(s) * m.dim_b_i + bi, Eigen::Index(t) * m.dim_b_j + bj);
  return out;
}

namespace {

GdsVerdict collect_verdicts(const GdsChannel& g, const std::string& predicate,
                            ChannelVerdict (*check)(const KrausChannel&)) {
  GdsVerdict v;
  v.predicate = predicate;
  v.holds = true;
  for (const auto& sub : g.subchannels) {
    v.per_block.push_back(check(sub));
    v.holds = v.holds && v.per_block.back().holds;
    v.residual = std::max(v.residual, v.per_block.back().residual);
  }
  return v;
}

}  // namespace

GdsVerdict gds_is_degradable(const GdsChannel& g) {
  return collect_verdicts(g, "degradable", &is_degradable);
}

GdsVerdict gds_is_antidegradable(const GdsChannel& g) {
  return collect_verdicts(g, "antidegradable", &is_antidegradable);
}

GdsVerdict gds_is_ppt(const GdsChannel& g) {
  return collect_verdicts(g, "ppt", &is_ppt);
}

ComplexMatrix block_diagonal_truncation(const ComplexMatrix& rho, const BlockStructure& blocks) {
  if (rho.rows() != blocks.total() || rho.cols() != blocks.total())
    throw std::invalid_argument("block_diagonal_truncation: dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (int b = 0; b < blocks.block_count(); ++b)
    out.block(blocks.offsets[b], blocks.offsets[b], blocks.sizes[b], blocks.sizes[b]) =
        rho.block(blocks.offsets[b], blocks.offsets[b], blocks.sizes[b], blocks.sizes[b]);
  return out;
}

ComplexMatrix assemble_block_state(const std::vector<double>& probs,
                                   const std::vector<ComplexMatrix>& states,
                                   const BlockStructure& blocks) {
  if (static_cast<int>(probs.size()) != blocks.block_count() ||
      static_cast<int>(states.size()) != blocks.block_count())
    throw std::invalid_argument("assemble_block_state: need one probability and state per block");
  double total = 0.0;
  for (double p : probs) {
    if (p < -1e-12) throw std::invalid_argument("assemble_block_state: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("assemble_block_state: probabilities must sum to 1");
  ComplexMatrix out = ComplexMatrix::Zero(blocks.total(), blocks.total());
  for (int b = 0; b < blocks.block_count(); ++b) {
    const ComplexMatrix& s = states[b];
    if (s.rows() != blocks.sizes[b] || s.cols() != blocks.sizes[b])
      throw std::invalid_argument("assemble_block_state: block state has wrong dimension");
    if (std::abs(s.trace().real() - 1.0) > 1e-9 || !is_hermitian(s))
      throw std::invalid_argument("assemble_block_state: block state must be Hermitian unit trace");
    out.block(blocks.offsets[b], blocks.offsets[b], blocks.sizes[b], blocks.sizes[b]) =
        probs[b] * s;
  }
  return out;
}

}  // namespace gdscap
