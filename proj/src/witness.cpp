#include "gdscap/witness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace gdscap {

namespace {

constexpr double kFeasTol = 1e-9;

bool slack_ok(double min_eig, double scale) { return min_eig >= -kFeasTol * (1.0 + scale); }

std::pair<double, double> dense_min_max(const ComplexMatrix& h) {
  const RealVector eigs = hermitian_eigenvalues(0.5 * (h + h.adjoint()));
  return {eigs.minCoeff(), eigs.cwiseAbs().maxCoeff()};
}

struct UnionFind {
  std::vector<int> parent, rank_;
  explicit UnionFind(int n) : parent(n), rank_(n, 0) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }
};

struct ExtremeEigs {
  double min_eig = 0.0;
  double max_abs = 0.0;
};

// Extreme eigenvalues of a sparse Hermitian matrix by splitting the nonzero
// pattern into connected components and solving each densely. Indices touched
// by no entry contribute eigenvalue zero.
ExtremeEigs sparse_extreme_eigs(const SparseComplex& h) {
  const int n = static_cast<int>(h.rows());
  UnionFind uf(n);
  std::vector<bool> covered(n, false);
  for (int k = 0; k < h.outerSize(); ++k)
    for (SparseComplex::InnerIterator it(h, k); it; ++it) {
      if (it.value() == Complex(0.0, 0.0)) continue;
      uf.unite(static_cast<int>(it.row()), static_cast<int>(it.col()));
      covered[it.row()] = covered[it.col()] = true;
    }
  std::map<int, std::vector<int>> components;
  bool uncovered = false;
  for (int v = 0; v < n; ++v) {
    if (covered[v])
      components[uf.find(v)].push_back(v);
    else
      uncovered = true;
  }
  ExtremeEigs out;
  out.min_eig = uncovered || components.empty() ? 0.0 : 1e300;
  for (const auto& [root, members] : components) {
    (void)root;
    const int m = static_cast<int>(members.size());
    if (m > 4096) throw std::runtime_error("sparse_extreme_eigs: component too large");
    std::map<int, int> local;
    for (int v = 0; v < m; ++v) local[members[v]] = v;
    ComplexMatrix sub = ComplexMatrix::Zero(m, m);
    for (int v : members)
      for (SparseComplex::InnerIterator it(h, v); it; ++it)
        sub(local.at(static_cast<int>(it.row())), local.at(v)) = it.value();
    const auto [lo, hi] = dense_min_max(sub);
    out.min_eig = std::min(out.min_eig, lo);
    out.max_abs = std::max(out.max_abs, hi);
  }
  return out;
}

// Tr_B of a sparse operator on A (x) B, returned dense on A.
ComplexMatrix sparse_trace_out_b(const SparseComplex& m, int dim_a, int dim_b) {
  if (m.rows() != Eigen::Index(dim_a) * dim_b)
    throw std::invalid_argument("sparse_trace_out_b: dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(dim_a, dim_a);
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseComplex::InnerIterator it(m, k); it; ++it) {
      const int r = static_cast<int>(it.row()), c = static_cast<int>(it.col());
      if (r % dim_b == c % dim_b) out(r / dim_b, c / dim_b) += it.value();
    }
  return out;
}

// Partial transpose of the B factor of a sparse operator on A (x) B.
SparseComplex sparse_partial_transpose_b(const SparseComplex& m, int dim_a, int dim_b) {
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(m.nonZeros());
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseComplex::InnerIterator it(m, k); it; ++it) {
      const int r = static_cast<int>(it.row()), c = static_cast<int>(it.col());
      const int ra = r / dim_b, rb = r % dim_b, ca = c / dim_b, cb = c % dim_b;
      trips.emplace_back(ra * dim_b + cb, ca * dim_b + rb, it.value());
    }
  SparseComplex out(m.rows(), m.cols());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

// |M| = V Sigma V^dag and |M^dag| = U Sigma U^dag from a thin SVD, assembled
// sparsely so that structured Chois keep their small support.
struct AbsPair {
  SparseComplex abs_m;      // on the column space, cols x cols
  SparseComplex abs_m_dag;  // on the row space, rows x rows
  double trace = 0.0;       // sum of singular values
  double sigma_max = 0.0;
};

AbsPair sparse_abs_pair(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sigma = svd.singularValues();
  AbsPair out;
  out.sigma_max = sigma.size() ? sigma(0) : 0.0;
  const double cut = out.sigma_max * 1e-13;
  auto build = [&](const ComplexMatrix& vecs, Eigen::Index dim) {
    std::vector<Eigen::Triplet<Complex>> trips;
    for (Eigen::Index k = 0; k < sigma.size(); ++k) {
      if (sigma(k) <= cut) continue;
      std::vector<Eigen::Index> support;
      for (Eigen::Index x = 0; x < dim; ++x)
        if (std::abs(vecs(x, k)) > 1e-14) support.push_back(x);
      for (Eigen::Index x : support)
        for (Eigen::Index y : support)
          trips.emplace_back(x, y, sigma(k) * vecs(x, k) * std::conj(vecs(y, k)));
    }
    SparseComplex s(dim, dim);
    s.setFromTriplets(trips.begin(), trips.end());
    return s;
  };
  out.abs_m = build(svd.matrixV(), m.cols());
  out.abs_m_dag = build(svd.matrixU(), m.rows());
  for (Eigen::Index k = 0; k < sigma.size(); ++k)
    if (sigma(k) > cut) out.trace += sigma(k);
  return out;
}

// The sector-pair block [[c_rows * A_rows, sign * M], [sign * M^dag, c_cols * A_cols]]
// on sector(i,j) (+) sector(j,i), assembled sparsely.
SparseComplex build_pair_block(const ComplexMatrix& m, const SparseComplex* abs_rows,
                               double c_rows, const SparseComplex* abs_cols, double c_cols,
                               double sign) {
  const Eigen::Index s1 = m.rows(), s2 = m.cols();
  std::vector<Eigen::Triplet<Complex>> trips;
  auto add_abs = [&](const SparseComplex* a, double c, Eigen::Index offset) {
    if (!a) return;
    for (int k = 0; k < a->outerSize(); ++k)
      for (SparseComplex::InnerIterator it(*a, k); it; ++it)
        trips.emplace_back(offset + it.row(), offset + it.col(), c * it.value());
  };
  add_abs(abs_rows, c_rows, 0);
  add_abs(abs_cols, c_cols, s1);
  for (Eigen::Index r = 0; r < s1; ++r)
    for (Eigen::Index c = 0; c < s2; ++c) {
      const Complex v = m(r, c);
      if (v == Complex(0.0, 0.0)) continue;
      trips.emplace_back(r, s1 + c, sign * v);
      trips.emplace_back(s1 + c, r, sign * std::conj(v));
    }
  SparseComplex h(s1 + s2, s1 + s2);
  h.setFromTriplets(trips.begin(), trips.end());
  return h;
}

void record(BoundCertificate& cert, bool& ok, const std::string& name, double min_eig,
            double scale) {
  cert.residuals.emplace_back(name, min_eig);
  ok = ok && slack_ok(min_eig, scale);
}

const WitnessPairTerm* find_term(const std::vector<WitnessPairTerm>& terms, int i, int j) {
  for (const auto& t : terms)
    if (t.i == i && t.j == j) return &t;
  return nullptr;
}

void validate_structure(const GdsChannel& g, const std::vector<ComplexMatrix>& block_terms,
                        const std::vector<WitnessPairTerm>& pair_terms) {
  const int nb = g.block_count();
  if (static_cast<int>(block_terms.size()) != nb)
    throw std::invalid_argument("witness: one block term per block required");
  for (int i = 0; i < nb; ++i) {
    const Eigen::Index d = Eigen::Index(g.in_blocks.sizes[i]) * g.out_blocks.sizes[i];
    if (block_terms[i].rows() != d || block_terms[i].cols() != d)
      throw std::invalid_argument("witness: block term has wrong dimension");
  }
  for (const auto& t : pair_terms) {
    if (t.i < 0 || t.j < 0 || t.i >= nb || t.j >= nb || t.i == t.j)
      throw std::invalid_argument("witness: pair term indexes invalid blocks");
    const Eigen::Index d = Eigen::Index(g.in_blocks.sizes[t.j]) * g.out_blocks.sizes[t.i];
    if (t.abs_pt.rows() != d || t.abs_pt.cols() != d)
      throw std::invalid_argument("witness: pair term has wrong dimension");
  }
}

// Shared structured verification of Y +- C^{T_B} >= 0 for a block witness.
void structured_pt_psd(const GdsChannel& g, const std::vector<ComplexMatrix>& block_terms,
                       const std::vector<WitnessPairTerm>& pair_terms, BoundCertificate& cert,
                       bool& ok) {
  const int nb = g.block_count();
  for (int i = 0; i < nb; ++i) {
    const ComplexMatrix ct = partial_transpose(choi(g.subchannels[i]), g.in_blocks.sizes[i],
                                               g.out_blocks.sizes[i]);
    for (double sign : {1.0, -1.0}) {
      const auto [lo, hi] = dense_min_max(block_terms[i] + sign * ct);
      record(cert, ok, "block" + std::to_string(i) + (sign > 0 ? "_plus" : "_minus"), lo, hi);
    }
  }
  for (int i = 0; i < nb; ++i)
    for (int j = i + 1; j < nb; ++j) {
      const ComplexMatrix m = off_diagonal_choi_pt(off_diagonal_choi(g, i, j));
      const WitnessPairTerm* rows_term = find_term(pair_terms, j, i);  // on sector (i, j)
      const WitnessPairTerm* cols_term = find_term(pair_terms, i, j);  // on sector (j, i)
      for (double sign : {1.0, -1.0}) {
        const SparseComplex h = build_pair_block(
            m, rows_term ? &rows_term->abs_pt : nullptr, rows_term ? rows_term->coefficient : 0.0,
            cols_term ? &cols_term->abs_pt : nullptr, cols_term ? cols_term->coefficient : 0.0,
            sign);
        const ExtremeEigs ee = sparse_extreme_eigs(h);
        record(cert, ok,
               "pair" + std::to_string(i) + "_" + std::to_string(j) +
                   (sign > 0 ? "_plus" : "_minus"),
               ee.min_eig, ee.max_abs);
      }
    }
}

ComplexMatrix require_dense_y(const ComplexMatrix& y, const TranspositionWitness& w) {
  if (y.size() != 0) return y;
  if (!w.has_structure())
    throw std::invalid_argument("transposition witness: no dense Y and no structure");
  return assemble_witness_dense(w.block_terms, w.pair_terms, w.in_blocks, w.out_blocks);
}

}  // namespace

ComplexMatrix assemble_witness_dense(const std::vector<ComplexMatrix>& block_terms,
                                     const std::vector<WitnessPairTerm>& pair_terms,
                                     const BlockStructure& in_blocks,
                                     const BlockStructure& out_blocks) {
  const Eigen::Index da = in_blocks.total(), db = out_blocks.total();
  ComplexMatrix y = ComplexMatrix::Zero(da * db, da * db);
  auto global_index = [&](int a_block, int b_block, Eigen::Index local, int local_db) {
    const Eigen::Index a = in_blocks.offsets[a_block] + local / local_db;
    const Eigen::Index b = out_blocks.offsets[b_block] + local % local_db;
    return a * db + b;
  };
  for (std::size_t i = 0; i < block_terms.size(); ++i) {
    const int bi = static_cast<int>(i);
    const int local_db = out_blocks.sizes[bi];
    const ComplexMatrix& term = block_terms[i];
    for (Eigen::Index r = 0; r < term.rows(); ++r)
      for (Eigen::Index c = 0; c < term.cols(); ++c)
        y(global_index(bi, bi, r, local_db), global_index(bi, bi, c, local_db)) += term(r, c);
  }
  for (const auto& t : pair_terms) {
    const int local_db = out_blocks.sizes[t.i];
    for (int k = 0; k < t.abs_pt.outerSize(); ++k)
      for (SparseComplex::InnerIterator it(t.abs_pt, k); it; ++it)
        y(global_index(t.j, t.i, it.row(), local_db), global_index(t.j, t.i, it.col(), local_db)) +=
            t.coefficient * it.value();
  }
  return y;
}

BoundCertificate check_transposition_witness(const KrausChannel& ch,
                                             const TranspositionWitness& w) {
  BoundCertificate cert;
  cert.kind = "Q_transposition";
  cert.y = w.y;
  cert.notes = w.notes;
  const ComplexMatrix y = require_dense_y(w.Y, w);
  const Eigen::Index ambient = Eigen::Index(ch.dim_in) * ch.dim_out;
  if (y.rows() != ambient || y.cols() != ambient)
    throw std::invalid_argument("check_transposition_witness: dimension mismatch");
  if (!is_hermitian(y, 1e-9))
    throw std::invalid_argument("check_transposition_witness: Y is not Hermitian");
  bool ok = true;
  const ComplexMatrix ct = partial_transpose(choi(ch), ch.dim_in, ch.dim_out);
  for (double sign : {1.0, -1.0}) {
    const auto [lo, hi] = dense_min_max(y + sign * ct);
    record(cert, ok, sign > 0 ? "psd_plus" : "psd_minus", lo, hi);
  }
  const ComplexMatrix tb = partial_trace(y, ch.dim_in, ch.dim_out, Factor::A);
  const auto [lo, hi] = dense_min_max(w.y * ComplexMatrix::Identity(ch.dim_in, ch.dim_in) - tb);
  record(cert, ok, "trace_cap", lo, hi + std::abs(w.y));
  cert.feasible = ok && w.y > 0.0;
  cert.value_bits = w.y > 0.0 ? std::log2(w.y) : 0.0;
  return cert;
}

BoundCertificate check_transposition_witness(const GdsChannel& g, const TranspositionWitness& w) {
  if (!w.has_structure()) return check_transposition_witness(g.assembled, w);
  validate_structure(g, w.block_terms, w.pair_terms);
  BoundCertificate cert;
  cert.kind = "Q_transposition";
  cert.y = w.y;
  cert.notes = "structured check over " + std::to_string(g.block_count()) + " blocks";
  if (!w.notes.empty()) cert.notes += "; " + w.notes;
  bool ok = true;
  structured_pt_psd(g, w.block_terms, w.pair_terms, cert, ok);

  // Per-block partial-trace cap: rows of A collect the block term plus every
  // pair term living on a sector with that A block.
  for (int a = 0; a < g.block_count(); ++a) {
    ComplexMatrix t = partial_trace(w.block_terms[a], g.in_blocks.sizes[a],
                                    g.out_blocks.sizes[a], Factor::A);
    for (const auto& term : w.pair_terms)
      if (term.j == a)
        t += term.coefficient *
             sparse_trace_out_b(term.abs_pt, g.in_blocks.sizes[a], g.out_blocks.sizes[term.i]);
    const auto [lo, hi] = dense_min_max(
        w.y * ComplexMatrix::Identity(g.in_blocks.sizes[a], g.in_blocks.sizes[a]) - t);
    record(cert, ok, "trace_cap_block" + std::to_string(a), lo, hi + std::abs(w.y));
  }
  cert.feasible = ok && w.y > 0.0;
  cert.value_bits = w.y > 0.0 ? std::log2(w.y) : 0.0;
  return cert;
}

TranspositionWitness build_gds_transposition_witness(
    const GdsChannel& g, const std::vector<TranspositionWitness>& sub_witnesses) {
  const int nb = g.block_count();
  if (static_cast<int>(sub_witnesses.size()) != nb)
    throw std::invalid_argument("build_gds_transposition_witness: one witness per block required");
  if (nb == 1) return sub_witnesses[0];

  TranspositionWitness w;
  w.in_blocks = g.in_blocks;
  w.out_blocks = g.out_blocks;
  std::vector<double> row_extra(nb, 0.0);
  double max_pair = 0.0;
  std::string notes;
  for (int i = 0; i < nb; ++i) {
    const Eigen::Index d = Eigen::Index(g.in_blocks.sizes[i]) * g.out_blocks.sizes[i];
    if (sub_witnesses[i].Y.rows() != d || sub_witnesses[i].Y.cols() != d)
      throw std::invalid_argument("build_gds_transposition_witness: sub-witness dimension");
    w.block_terms.push_back(sub_witnesses[i].Y);
  }
  for (int i = 0; i < nb; ++i)
    for (int j = i + 1; j < nb; ++j) {
      const ComplexMatrix m = off_diagonal_choi_pt(off_diagonal_choi(g, i, j));
      const AbsPair ab = sparse_abs_pair(m);
      if (ab.sigma_max <= 1e-14) continue;  // vanishing off-diagonal map
      // abs_m = |C_{M_ij}^{T_B}| on sector (j,i); abs_m_dag = |C_{M_ji}^{T_B}|
      // on sector (i,j).
      const double m_ij =
          spectral_norm(sparse_trace_out_b(ab.abs_m, g.in_blocks.sizes[j], g.out_blocks.sizes[i]));
      const double m_ji = spectral_norm(
          sparse_trace_out_b(ab.abs_m_dag, g.in_blocks.sizes[i], g.out_blocks.sizes[j]));
      double c_ij, c_ji, pair_value;
      if (std::min(m_ij, m_ji) <= 1e-13 * std::max(m_ij, m_ji)) {
        // Degenerate norms: trace-norm relaxation with unit coefficients.
        c_ij = c_ji = 1.0;
        pair_value = ab.trace;
        notes += (notes.empty() ? "" : "; ") + std::string("trace-norm fallback for pair (") +
                 std::to_string(i) + "," + std::to_string(j) + ")";
      } else {
        const double a = std::sqrt(m_ij), b = std::sqrt(m_ji);
        c_ij = b / a;  // multiplies |C_{M_ij}^{T_B}|
        c_ji = a / b;  // multiplies |C_{M_ji}^{T_B}|
        pair_value = a * b;
      }
      w.pair_terms.push_back({i, j, c_ij, ab.abs_m});
      w.pair_terms.push_back({j, i, c_ji, ab.abs_m_dag});
      row_extra[i] += pair_value;
      row_extra[j] += pair_value;
      max_pair = std::max(max_pair, pair_value);
    }
  double max_y = 0.0, tight = 0.0;
  for (int i = 0; i < nb; ++i) {
    max_y = std::max(max_y, sub_witnesses[i].y);
    tight = std::max(tight, sub_witnesses[i].y + row_extra[i]);
  }
  w.y = max_y + (nb - 1) * max_pair;
  w.y_tight = tight;
  w.notes = notes;
  if (Eigen::Index(g.in_blocks.total()) * g.out_blocks.total() <= 2048)
    w.Y = assemble_witness_dense(w.block_terms, w.pair_terms, w.in_blocks, w.out_blocks);
  return w;
}

double abs_splitting_check(const ComplexMatrix& m, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("abs_splitting_check: a and b must be positive");
  if (m.rows() != m.cols()) throw std::invalid_argument("abs_splitting_check: square matrix required");
  const ComplexMatrix abs_m = matrix_abs(m);
  const ComplexMatrix abs_m_dag = matrix_abs(ComplexMatrix(m.adjoint()));
  const ComplexMatrix lhs = (b / a) * abs_m + (a / b) * abs_m_dag;
  const ComplexMatrix sym = m + m.adjoint();
  return std::min(dense_min_max(lhs - sym).first, dense_min_max(lhs + sym).first);
}

BoundCertificate check_classical_witness(const KrausChannel& ch, const ClassicalWitness& w) {
  BoundCertificate cert;
  cert.kind = "C_beta";
  ComplexMatrix y = w.Y;
  if (y.size() == 0 && w.has_structure())
    y = assemble_witness_dense(w.block_terms, w.pair_terms, w.in_blocks, w.out_blocks);
  const Eigen::Index ambient = Eigen::Index(ch.dim_in) * ch.dim_out;
  if (y.rows() != ambient || w.S.rows() != ch.dim_out || w.S.cols() != ch.dim_out)
    throw std::invalid_argument("check_classical_witness: dimension mismatch");
  if (!is_hermitian(y, 1e-9) || !is_hermitian(w.S, 1e-9))
    throw std::invalid_argument("check_classical_witness: witness must be Hermitian");
  bool ok = true;
  const ComplexMatrix ct = partial_transpose(choi(ch), ch.dim_in, ch.dim_out);
  for (double sign : {1.0, -1.0}) {
    const auto [lo, hi] = dense_min_max(y + sign * ct);
    record(cert, ok, sign > 0 ? "psd_plus" : "psd_minus", lo, hi);
  }
  const ComplexMatrix ytb = partial_transpose(y, ch.dim_in, ch.dim_out);
  const ComplexMatrix is = tensor_product(ComplexMatrix::Identity(ch.dim_in, ch.dim_in), w.S);
  for (double sign : {1.0, -1.0}) {
    const auto [lo, hi] = dense_min_max(is + sign * ytb);
    record(cert, ok, sign > 0 ? "pt_plus" : "pt_minus", lo, hi);
  }
  cert.trace_s = w.S.trace().real();
  cert.feasible = ok && cert.trace_s > 0.0;
  cert.value_bits = cert.trace_s > 0.0 ? std::log2(cert.trace_s) : 0.0;
  return cert;
}

BoundCertificate check_classical_witness(const GdsChannel& g, const ClassicalWitness& w) {
  if (!w.has_structure()) return check_classical_witness(g.assembled, w);
  validate_structure(g, w.block_terms, w.pair_terms);
  const int nb = g.block_count();
  if (w.S.rows() != g.out_blocks.total() || w.S.cols() != g.out_blocks.total())
    throw std::invalid_argument("check_classical_witness: S dimension mismatch");
  // The structured path needs S block diagonal over the output blocks.
  double off_mass = 0.0;
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j) {
      if (i == j) continue;
      off_mass = std::max(off_mass, w.S
                                        .block(g.out_blocks.offsets[i], g.out_blocks.offsets[j],
                                               g.out_blocks.sizes[i], g.out_blocks.sizes[j])
                                        .cwiseAbs()
                                        .maxCoeff());
    }
  if (off_mass > 1e-12 * (1.0 + w.S.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("check_classical_witness: S must be block diagonal");

  BoundCertificate cert;
  cert.kind = "C_beta";
  cert.notes = "structured check over " + std::to_string(nb) + " blocks";
  bool ok = true;
  structured_pt_psd(g, w.block_terms, w.pair_terms, cert, ok);

  std::vector<ComplexMatrix> s_blocks(nb);
  for (int i = 0; i < nb; ++i) {
    s_blocks[i] = w.S.block(g.out_blocks.offsets[i], g.out_blocks.offsets[i],
                            g.out_blocks.sizes[i], g.out_blocks.sizes[i]);
    const auto [lo, hi] = dense_min_max(s_blocks[i]);
    record(cert, ok, "s_block" + std::to_string(i), lo, hi);
  }

  // I (x) S +- Y^{T_B} decomposes over sectors: diagonal sectors carry the
  // block terms, sector (j,i) carries the pair term for the ordered pair (i,j).
  for (int i = 0; i < nb; ++i) {
    const ComplexMatrix ytb =
        partial_transpose(w.block_terms[i], g.in_blocks.sizes[i], g.out_blocks.sizes[i]);
    const ComplexMatrix is =
        tensor_product(ComplexMatrix::Identity(g.in_blocks.sizes[i], g.in_blocks.sizes[i]),
                       s_blocks[i]);
    for (double sign : {1.0, -1.0}) {
      const auto [lo, hi] = dense_min_max(is + sign * ytb);
      record(cert, ok, "pt_block" + std::to_string(i) + (sign > 0 ? "_plus" : "_minus"), lo, hi);
    }
  }
  for (const auto& term : w.pair_terms) {
    const int da = g.in_blocks.sizes[term.j], db = g.out_blocks.sizes[term.i];
    const SparseComplex pt =
        sparse_partial_transpose_b(term.abs_pt, da, db);
    std::vector<Eigen::Triplet<Complex>> trips;
    for (int a = 0; a < da; ++a)
      for (int b = 0; b < db; ++b)
        for (int bp = 0; bp < db; ++bp) {
          const Complex v = s_blocks[term.i](b, bp);
          if (v != Complex(0.0, 0.0))
            trips.emplace_back(Eigen::Index(a) * db + b, Eigen::Index(a) * db + bp, v);
        }
    for (double sign : {1.0, -1.0}) {
      std::vector<Eigen::Triplet<Complex>> all = trips;
      for (int k = 0; k < pt.outerSize(); ++k)
        for (SparseComplex::InnerIterator it(pt, k); it; ++it)
          all.emplace_back(it.row(), it.col(), sign * term.coefficient * it.value());
      SparseComplex h(Eigen::Index(da) * db, Eigen::Index(da) * db);
      h.setFromTriplets(all.begin(), all.end());
      const ExtremeEigs ee = sparse_extreme_eigs(h);
      record(cert, ok,
             "pt_pair" + std::to_string(term.i) + "_" + std::to_string(term.j) +
                 (sign > 0 ? "_plus" : "_minus"),
             ee.min_eig, ee.max_abs);
    }
  }
  cert.trace_s = w.S.trace().real();
  cert.feasible = ok && cert.trace_s > 0.0;
  cert.value_bits = cert.trace_s > 0.0 ? std::log2(cert.trace_s) : 0.0;
  return cert;
}

ClassicalWitness build_cdc_classical_witness(const GdsChannel& g) {
  const int nb = g.block_count();
  // Verify the completely-depolarizing ladder: equal products d_{A_i} d_{B_i},
  // a divisible chain of output dimensions, and the canonical Kraus form.
  const Eigen::Index prod0 = Eigen::Index(g.in_blocks.sizes[0]) * g.out_blocks.sizes[0];
  for (int i = 0; i < nb; ++i) {
    const int da = g.in_blocks.sizes[i], db = g.out_blocks.sizes[i];
    if (Eigen::Index(da) * db != prod0)
      throw std::invalid_argument("build_cdc_classical_witness: unequal block products");
    if (i > 0) {
      const int prev = g.out_blocks.sizes[i - 1];
      if (db == 0 || prev % db != 0)
        throw std::invalid_argument("build_cdc_classical_witness: non-divisible ladder");
    }
    const KrausChannel ref = completely_depolarizing_channel(da, db);
    if (g.subchannels[i].kraus_count() != ref.kraus_count())
      throw std::invalid_argument("build_cdc_classical_witness: not a depolarizing ladder");
    for (int k = 0; k < ref.kraus_count(); ++k)
      if ((g.subchannels[i].kraus[k] - ref.kraus[k]).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("build_cdc_classical_witness: not a depolarizing ladder");
  }

  ClassicalWitness w;
  w.in_blocks = g.in_blocks;
  w.out_blocks = g.out_blocks;
  for (int i = 0; i < nb; ++i) {
    const int da = g.in_blocks.sizes[i], db = g.out_blocks.sizes[i];
    w.block_terms.push_back(ComplexMatrix::Identity(Eigen::Index(da) * db, Eigen::Index(da) * db) /
                            static_cast<double>(db));
  }
  for (int i = 0; i < nb; ++i)
    for (int j = i + 1; j < nb; ++j) {
      const ComplexMatrix m = off_diagonal_choi_pt(off_diagonal_choi(g, i, j));
      const AbsPair ab = sparse_abs_pair(m);
      if (ab.sigma_max <= 1e-14) continue;
      w.pair_terms.push_back({i, j, 1.0, ab.abs_m});
      w.pair_terms.push_back({j, i, 1.0, ab.abs_m_dag});
    }
  w.S = ComplexMatrix::Zero(g.out_blocks.total(), g.out_blocks.total());
  for (int i = 0; i < nb; ++i) {
    const int db = g.out_blocks.sizes[i];
    w.S.block(g.out_blocks.offsets[i], g.out_blocks.offsets[i], db, db) =
        ComplexMatrix::Identity(db, db) / static_cast<double>(db);
  }
  if (Eigen::Index(g.in_blocks.total()) * g.out_blocks.total() <= 2048)
    w.Y = assemble_witness_dense(w.block_terms, w.pair_terms, w.in_blocks, w.out_blocks);
  return w;
}

double diamond_norm_oracle(const ComplexMatrix& map_choi, int dim_in, int dim_out, int restarts,
                           std::uint64_t seed) {
  const Eigen::Index ambient = Eigen::Index(dim_in) * dim_out;
  if (map_choi.rows() != ambient || map_choi.cols() != ambient)
    throw std::invalid_argument("diamond_norm_oracle: Choi dimension mismatch");
  if (!is_hermitian(map_choi, 1e-9))
    throw std::invalid_argument("diamond_norm_oracle: Choi must be Hermitian");
  if (restarts < 1) throw std::invalid_argument("diamond_norm_oracle: restarts < 1");

  const ComplexMatrix c = 0.5 * (map_choi + map_choi.adjoint());
  const Eigen::Index dr = dim_in;  // reference system mirrors the input

  // Choi rearranged so that the fixed-sign subproblem is a single product:
  // cr[(i',i),(t,s)] = C[(s,i),(t,i')].
  ComplexMatrix cr(Eigen::Index(dim_out) * dim_out, dr * dim_in);
  for (int s = 0; s < dim_in; ++s)
    for (int i = 0; i < dim_out; ++i)
      for (int t = 0; t < dim_in; ++t)
        for (int ip = 0; ip < dim_out; ++ip)
          cr(Eigen::Index(ip) * dim_out + i, Eigen::Index(t) * dim_in + s) =
              c(Eigen::Index(s) * dim_out + i, Eigen::Index(t) * dim_out + ip);

  auto output_state = [&](const ComplexVector& psi) {
    ComplexMatrix big_psi(dr, dim_in);
    for (Eigen::Index r = 0; r < dr; ++r)
      for (int s = 0; s < dim_in; ++s) big_psi(r, s) = psi(r * dim_in + s);
    const ComplexMatrix lift = tensor_product(big_psi, ComplexMatrix::Identity(dim_out, dim_out));
    return ComplexMatrix(lift * c * lift.adjoint());
  };

  double best = 0.0;
  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(r));
    ComplexVector psi;
    if (r == 0) {
      psi = ComplexVector::Zero(dr * dim_in);
      for (int s = 0; s < dim_in; ++s)
        psi(Eigen::Index(s) * dim_in + s) = 1.0 / std::sqrt(static_cast<double>(dim_in));
    } else {
      psi = random_pure_state(static_cast<int>(dr) * dim_in, rng);
    }
    double value = 0.0;
    for (int iter = 0; iter < 150; ++iter) {
      const ComplexMatrix x = output_state(psi);
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(x);
      double trace_val = es.eigenvalues().cwiseAbs().sum();
      ComplexMatrix s_op = ComplexMatrix::Zero(x.rows(), x.cols());
      for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
        s_op += (es.eigenvalues()(k) >= 0.0 ? 1.0 : -1.0) * es.eigenvectors().col(k) *
                es.eigenvectors().col(k).adjoint();
      if (trace_val <= value + 1e-12) {
        value = std::max(value, trace_val);
        break;
      }
      value = trace_val;
      // K[(r',t),(r,s)] = sum_{i,i'} S[(r',i'),(r,i)] C[(s,i),(t,i')].
      ComplexMatrix sr(dr * dr, Eigen::Index(dim_out) * dim_out);
      for (Eigen::Index rp = 0; rp < dr; ++rp)
        for (Eigen::Index rr = 0; rr < dr; ++rr)
          for (int ip = 0; ip < dim_out; ++ip)
            for (int i = 0; i < dim_out; ++i)
              sr(rp * dr + rr, Eigen::Index(ip) * dim_out + i) =
                  s_op(rp * dim_out + ip, rr * dim_out + i);
      const ComplexMatrix p = sr * cr;
      ComplexMatrix k_op(dr * dim_in, dr * dim_in);
      for (Eigen::Index rp = 0; rp < dr; ++rp)
        for (int t = 0; t < dim_in; ++t)
          for (Eigen::Index rr = 0; rr < dr; ++rr)
            for (int s = 0; s < dim_in; ++s)
              k_op(rp * dim_in + t, rr * dim_in + s) =
                  p(rp * dr + rr, Eigen::Index(t) * dim_in + s);
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> ek(0.5 * (k_op + k_op.adjoint()));
      psi = ek.eigenvectors().col(ek.eigenvalues().size() - 1);
    }
    best = std::max(best, value);
  }
  return best;
}

}  // namespace gdscap
