#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

namespace gdscap {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Partition of a dimension into contiguous blocks.
struct BlockStructure {
  std::vector<int> sizes;
  std::vector<int> offsets;  // sizes.size() + 1 entries, offsets[0] == 0

  BlockStructure() = default;
  explicit BlockStructure(std::vector<int> block_sizes);

  int block_count() const { return static_cast<int>(sizes.size()); }
  int total() const { return offsets.empty() ? 0 : offsets.back(); }
  bool operator==(const BlockStructure& other) const { return sizes == other.sizes; }
};

// Which tensor factor an operation acts on / keeps. Factor ordering is
// row-major: index (a, b) of C^{dim_a} (x) C^{dim_b} is a*dim_b + b.
enum class Factor { A, B };

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix direct_sum(const std::vector<ComplexMatrix>& blocks);

// Trace out one factor of a dim_a*dim_b square matrix, keeping `keep`.
ComplexMatrix partial_trace(const ComplexMatrix& m, int dim_a, int dim_b, Factor keep);

// Transpose the B factor of a dim_a*dim_b square matrix.
ComplexMatrix partial_transpose(const ComplexMatrix& m, int dim_a, int dim_b);

// |M| = sqrt(M^dag M); result is cols x cols, PSD, eigenvalues = singular values of M.
ComplexMatrix matrix_abs(const ComplexMatrix& m);

std::vector<double> singular_values(const ComplexMatrix& m);  // descending
double trace_norm(const ComplexMatrix& m);
double spectral_norm(const ComplexMatrix& m);

// Ascending eigenvalues of a Hermitian matrix (throws if not Hermitian).
RealVector hermitian_eigenvalues(const ComplexMatrix& m);
double min_eigenvalue(const ComplexMatrix& m);
double max_eigenvalue(const ComplexMatrix& m);

// min_eigenvalue(m) >= -tol * (1 + spectral_norm(m)).
bool feasibly_psd(const ComplexMatrix& m, double tol = 1e-9);

bool is_hermitian(const ComplexMatrix& m, double tol = 1e-10);

// Entropy in bits of a density matrix (Hermitian, unit trace, PSD up to 1e-9).
double von_neumann_entropy(const ComplexMatrix& rho);
double binary_entropy(double p);
double shannon_entropy_bits(const std::vector<double>& probs);

// Trace distance ||a - b||_1.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

// Fixed-seed samplers used by tests and multi-restart optimizers.
ComplexVector random_pure_state(int dim, std::mt19937_64& rng);
ComplexMatrix random_density_matrix(int dim, std::mt19937_64& rng);
ComplexMatrix random_unitary(int dim, std::mt19937_64& rng);

}  // namespace gdscap
