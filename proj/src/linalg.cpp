#include "gdscap/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gdscap {

namespace {

constexpr double kHermTol = 1e-10;

// Union-find over matrix indices; connects indices coupled by nonzero entries
// so Hermitian eigenproblems can be solved per connected component.
struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[a] = b;
  }
};

void require_square(const ComplexMatrix& m, const char* who) {
  if (m.rows() != m.cols()) throw std::invalid_argument(std::string(who) + ": matrix must be square");
}

void require_hermitian(const ComplexMatrix& m, const char* who) {
  if (!is_hermitian(m)) throw std::invalid_argument(std::string(who) + ": matrix must be Hermitian");
}

}  // namespace

BlockStructure::BlockStructure(std::vector<int> block_sizes) : sizes(std::move(block_sizes)) {
  if (sizes.empty()) throw std::invalid_argument("BlockStructure: need at least one block");
  offsets.resize(sizes.size() + 1);
  offsets[0] = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] <= 0) throw std::invalid_argument("BlockStructure: block sizes must be positive");
    offsets[i + 1] = offsets[i] + sizes[i];
  }
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix direct_sum(const std::vector<ComplexMatrix>& blocks) {
  if (blocks.empty()) throw std::invalid_argument("direct_sum: need at least one block");
  Eigen::Index rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  ComplexMatrix out = ComplexMatrix::Zero(rows, cols);
  Eigen::Index r = 0, c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, int dim_a, int dim_b, Factor keep) {
  require_square(m, "partial_trace");
  if (dim_a <= 0 || dim_b <= 0 || m.rows() != Eigen::Index(dim_a) * dim_b)
    throw std::invalid_argument("partial_trace: dimension mismatch");
  if (keep == Factor::A) {
    ComplexMatrix out = ComplexMatrix::Zero(dim_a, dim_a);
    for (int i = 0; i < dim_a; ++i)
      for (int j = 0; j < dim_a; ++j)
        for (int b = 0; b < dim_b; ++b) out(i, j) += m(i * dim_b + b, j * dim_b + b);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_b, dim_b);
  for (int b = 0; b < dim_b; ++b)
    for (int c = 0; c < dim_b; ++c)
      for (int i = 0; i < dim_a; ++i) out(b, c) += m(i * dim_b + b, i * dim_b + c);
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, int dim_a, int dim_b) {
  require_square(m, "partial_transpose");
  if (dim_a <= 0 || dim_b <= 0 || m.rows() != Eigen::Index(dim_a) * dim_b)
    throw std::invalid_argument("partial_transpose: dimension mismatch");
  ComplexMatrix out(m.rows(), m.cols());
  for (int i = 0; i < dim_a; ++i)
    for (int j = 0; j < dim_a; ++j)
      out.block(i * dim_b, j * dim_b, dim_b, dim_b) =
          m.block(i * dim_b, j * dim_b, dim_b, dim_b).transpose();
  return out;
}

ComplexMatrix matrix_abs(const ComplexMatrix& m) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  if (rows == 0 || cols == 0) throw std::invalid_argument("matrix_abs: empty matrix");
  // |M| = V Sigma V^dag from the SVD. Building from the right singular vectors
  // with sigma > 0 keeps the exact column support of M (v = M^dag u / sigma),
  // so |M| of a sparse matrix stays sparse.
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinV);
  const RealVector& sigma = svd.singularValues();
  const double cut = (sigma.size() > 0 ? sigma(0) : 0.0) * 1e-14;
  ComplexMatrix out = ComplexMatrix::Zero(cols, cols);
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (sigma(k) <= cut) continue;
    out += sigma(k) * svd.matrixV().col(k) * svd.matrixV().col(k).adjoint();
  }
  return out;
}

std::vector<double> singular_values(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const RealVector& sigma = svd.singularValues();
  return std::vector<double>(sigma.data(), sigma.data() + sigma.size());
}

double trace_norm(const ComplexMatrix& m) {
  auto sv = singular_values(m);
  return std::accumulate(sv.begin(), sv.end(), 0.0);
}

double spectral_norm(const ComplexMatrix& m) {
  auto sv = singular_values(m);
  return sv.empty() ? 0.0 : sv.front();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
  require_hermitian(m, "hermitian_eigenvalues");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

namespace {

// Min/max eigenvalue of a Hermitian matrix, splitting into connected
// components of the nonzero pattern when the matrix is large and sparse.
std::pair<double, double> eig_range(const ComplexMatrix& m) {
  const int n = static_cast<int>(m.rows());
  if (n <= 192) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
    return {es.eigenvalues()(0), es.eigenvalues()(n - 1)};
  }
  UnionFind uf(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (m(i, j) != Complex(0.0, 0.0)) uf.unite(i, j);
  std::vector<std::vector<int>> comps(n);
  for (int i = 0; i < n; ++i) comps[uf.find(i)].push_back(i);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& comp : comps) {
    if (comp.empty()) continue;
    if (comp.size() == 1) {
      const double v = m(comp[0], comp[0]).real();
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      continue;
    }
    ComplexMatrix sub(comp.size(), comp.size());
    for (std::size_t a = 0; a < comp.size(); ++a)
      for (std::size_t b = 0; b < comp.size(); ++b) sub(a, b) = m(comp[a], comp[b]);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sub, Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues()(0));
    hi = std::max(hi, es.eigenvalues()(es.eigenvalues().size() - 1));
  }
  return {lo, hi};
}

}  // namespace

double min_eigenvalue(const ComplexMatrix& m) {
  require_hermitian(m, "min_eigenvalue");
  return eig_range(m).first;
}

double max_eigenvalue(const ComplexMatrix& m) {
  require_hermitian(m, "max_eigenvalue");
  return eig_range(m).second;
}

bool feasibly_psd(const ComplexMatrix& m, double tol) {
  require_hermitian(m, "feasibly_psd");
  auto [lo, hi] = eig_range(m);
  const double scale = 1.0 + std::max(std::abs(lo), std::abs(hi));
  return lo >= -tol * scale;
}

double von_neumann_entropy(const ComplexMatrix& rho) {
  require_hermitian(rho, "von_neumann_entropy");
  if (std::abs(rho.trace().real() - 1.0) > 1e-9 || std::abs(rho.trace().imag()) > 1e-9)
    throw std::domain_error("von_neumann_entropy: state must have unit trace");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    double lam = es.eigenvalues()(k);
    if (lam < -1e-9) throw std::domain_error("von_neumann_entropy: state is not PSD");
    if (lam <= 1e-12) continue;  // 0 log 0 = 0 with tolerance for rounding
    s -= lam * std::log2(lam);
  }
  return s;
}

double binary_entropy(double p) {
  if (p < -1e-12 || p > 1.0 + 1e-12) throw std::domain_error("binary_entropy: p must be in [0, 1]");
  p = std::clamp(p, 0.0, 1.0);
  double s = 0.0;
  if (p > 0.0) s -= p * std::log2(p);
  if (p < 1.0) s -= (1.0 - p) * std::log2(1.0 - p);
  return s;
}

double shannon_entropy_bits(const std::vector<double>& probs) {
  double total = 0.0, s = 0.0;
  for (double p : probs) {
    if (p < -1e-12) throw std::domain_error("shannon_entropy_bits: negative probability");
    total += p;
    if (p > 1e-15) s -= p * std::log2(p);
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::domain_error("shannon_entropy_bits: probabilities must sum to 1");
  return s;
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("trace_distance: dimension mismatch");
  return trace_norm(a - b);
}

ComplexVector random_pure_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  return v / v.norm();
}

ComplexMatrix random_density_matrix(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix l(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) l(i, j) = Complex(gauss(rng), gauss(rng));
  ComplexMatrix rho = l * l.adjoint();
  return rho / rho.trace().real();
}

ComplexMatrix random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    Complex d = r(i, i);
    q.col(i) *= (std::abs(d) > 0) ? d / std::abs(d) : Complex(1.0, 0.0);
  }
  return q;
}

}  // namespace gdscap
