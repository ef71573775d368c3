#include "doctest.h"
#include "gdscap/linalg.hpp"

#include <cmath>

using namespace gdscap;

namespace {

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

bool matrix_near(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

ComplexMatrix pauli_x() {
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

ComplexMatrix pauli_z() {
  ComplexMatrix z(2, 2);
  z << 1, 0, 0, -1;
  return z;
}

ComplexMatrix swap_matrix(int d) {
  ComplexMatrix s = ComplexMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s(i * d + j, j * d + i) = 1.0;
  return s;
}

// Unnormalized maximally entangled matrix sum_{s,t} |ss><tt|.
ComplexMatrix phi_matrix(int d) {
  ComplexMatrix phi = ComplexMatrix::Zero(d * d, d * d);
  for (int s = 0; s < d; ++s)
    for (int t = 0; t < d; ++t) phi(s * d + s, t * d + t) = 1.0;
  return phi;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("block structure offsets and validation") {
  BlockStructure bs({2, 1, 3});
  CHECK(bs.block_count() == 3);
  CHECK(bs.total() == 6);
  CHECK(bs.offsets == std::vector<int>({0, 2, 3, 6}));
  CHECK_THROWS_AS(BlockStructure({2, 0}), std::invalid_argument);
  CHECK_THROWS_AS(BlockStructure(std::vector<int>{}), std::invalid_argument);
}

TEST_CASE("tensor product known values") {
  ComplexMatrix xz = tensor_product(pauli_x(), pauli_z());
  ComplexMatrix expect(4, 4);
  expect << 0, 0, 1, 0, 0, 0, 0, -1, 1, 0, 0, 0, 0, -1, 0, 0;
  CHECK(matrix_near(xz, expect, 1e-15));

  ComplexMatrix id4 = tensor_product(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2));
  CHECK(matrix_near(id4, ComplexMatrix::Identity(4, 4), 1e-15));

  // Rectangular factors: (1x2) (x) (2x1) is 2x2.
  ComplexMatrix row(1, 2), col(2, 1);
  row << 1, 2;
  col << 3, 4;
  ComplexMatrix rc = tensor_product(row, col);
  CHECK(rc.rows() == 2);
  CHECK(rc.cols() == 2);
  CHECK(rc(0, 0) == Complex(3, 0));
  CHECK(rc(1, 1) == Complex(8, 0));
}

TEST_CASE("tensor product bilinear and associative on random input") {
  std::mt19937_64 rng(07101);
  ComplexMatrix a = random_density_matrix(2, rng);
  ComplexMatrix b = random_density_matrix(3, rng);
  ComplexMatrix c = random_density_matrix(2, rng);
  CHECK(matrix_near(tensor_product(tensor_product(a, b), c),
                    tensor_product(a, tensor_product(b, c)), 1e-14));
  CHECK(near(tensor_product(a, b).trace().real(), 1.0, 1e-12));
}

TEST_CASE("direct sum known values") {
  ComplexMatrix a(1, 1), b(1, 1);
  a << 1;
  b << 2;
  ComplexMatrix d = direct_sum({a, b});
  CHECK(matrix_near(d, (ComplexMatrix(2, 2) << 1, 0, 0, 2).finished(), 1e-15));

  // Rectangular blocks stack on the block diagonal.
  ComplexMatrix r(1, 2), c(2, 1);
  r << 1, 2;
  c << 3, 4;
  ComplexMatrix rc = direct_sum({r, c});
  CHECK(rc.rows() == 3);
  CHECK(rc.cols() == 3);
  CHECK(rc(0, 0) == Complex(1, 0));
  CHECK(rc(0, 1) == Complex(2, 0));
  CHECK(rc(1, 2) == Complex(3, 0));
  CHECK(rc(2, 2) == Complex(4, 0));
  CHECK(rc(0, 2) == Complex(0, 0));
  CHECK(rc(1, 0) == Complex(0, 0));

  ComplexMatrix xz = direct_sum({pauli_x(), pauli_z()});
  CHECK(xz.rows() == 4);
  CHECK(xz(0, 1) == Complex(1, 0));
  CHECK(xz(3, 3) == Complex(-1, 0));
}

TEST_CASE("partial trace on product states and Bell state") {
  std::mt19937_64 rng(2024);
  ComplexMatrix rho = random_density_matrix(2, rng);
  ComplexMatrix sigma = random_density_matrix(3, rng);
  ComplexMatrix both = tensor_product(rho, sigma);
  CHECK(matrix_near(partial_trace(both, 2, 3, Factor::A), rho, 1e-12));
  CHECK(matrix_near(partial_trace(both, 2, 3, Factor::B), sigma, 1e-12));

  ComplexMatrix bell = phi_matrix(2) / 2.0;
  CHECK(matrix_near(partial_trace(bell, 2, 2, Factor::A), ComplexMatrix::Identity(2, 2) / 2.0, 1e-15));
  CHECK(matrix_near(partial_trace(bell, 2, 2, Factor::B), ComplexMatrix::Identity(2, 2) / 2.0, 1e-15));

  CHECK_THROWS_AS(partial_trace(ComplexMatrix::Identity(5, 5), 2, 2, Factor::A),
                  std::invalid_argument);
}

TEST_CASE("partial trace preserves trace on random matrices") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 50; ++t) {
    ComplexMatrix m = random_density_matrix(6, rng);
    CHECK(near(partial_trace(m, 2, 3, Factor::A).trace().real(), 1.0, 1e-12));
    CHECK(near(partial_trace(m, 3, 2, Factor::B).trace().real(), 1.0, 1e-12));
  }
}

TEST_CASE("partial transpose on products and the maximally entangled matrix") {
  std::mt19937_64 rng(5150);
  ComplexMatrix rho = random_density_matrix(2, rng);
  ComplexMatrix sigma = random_density_matrix(3, rng);
  CHECK(matrix_near(partial_transpose(tensor_product(rho, sigma), 2, 3),
                    tensor_product(rho, sigma.transpose()), 1e-13));

  // Phi^{T_B} is the SWAP operator.
  for (int d = 2; d <= 3; ++d) {
    CHECK(matrix_near(partial_transpose(phi_matrix(d), d, d), swap_matrix(d), 1e-15));
  }

  // Normalized Bell state has min PT eigenvalue -1/2.
  CHECK(near(min_eigenvalue(partial_transpose(phi_matrix(2) / 2.0, 2, 2)), -0.5, 1e-12));
}

TEST_CASE("partial transpose is an involution on 500 random matrices") {
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<int> dim(1, 4);
  for (int t = 0; t < 500; ++t) {
    int da = dim(rng), db = dim(rng);
    ComplexMatrix m = random_density_matrix(da * db, rng);
    CHECK(matrix_near(partial_transpose(partial_transpose(m, da, db), da, db), m, 1e-14));
  }
}

TEST_CASE("matrix abs known values") {
  ComplexMatrix d(2, 2);
  d << -1, 0, 0, 2;
  CHECK(matrix_near(matrix_abs(d), (ComplexMatrix(2, 2) << 1, 0, 0, 2).finished(), 1e-12));

  // Row vector [1 1]: |M| = [[1,1],[1,1]]/sqrt(2).
  ComplexMatrix row(1, 2);
  row << 1, 1;
  ComplexMatrix expect(2, 2);
  expect << 1, 1, 1, 1;
  expect /= std::sqrt(2.0);
  CHECK(matrix_near(matrix_abs(row), expect, 1e-12));

  // Rank one s |x><y| has |M| = s |y><y|.
  std::mt19937_64 rng(88);
  ComplexVector x = random_pure_state(3, rng);
  ComplexVector y = random_pure_state(4, rng);
  ComplexMatrix m = 2.5 * x * y.adjoint();
  CHECK(matrix_near(matrix_abs(m), 2.5 * y * y.adjoint(), 1e-12));

  // Result is cols x cols.
  ComplexMatrix wide(2, 3);
  wide << 1, 0, 2, 0, 1, 0;
  CHECK(matrix_abs(wide).rows() == 3);
  CHECK(matrix_abs(wide).cols() == 3);
}

TEST_CASE("matrix abs eigenvalues equal singular values") {
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<int> dim(1, 6);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    int r = dim(rng), c = dim(rng);
    ComplexMatrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
    RealVector ev = hermitian_eigenvalues(matrix_abs(m));
    auto sv = singular_values(m);  // descending, length min(r, c)
    // |M| is cols x cols; its spectrum is the singular values padded with zeros.
    std::vector<double> abs_ev(ev.data(), ev.data() + ev.size());
    std::sort(abs_ev.begin(), abs_ev.end(), std::greater<double>());
    for (std::size_t k = 0; k < abs_ev.size(); ++k) {
      double expect = (k < sv.size()) ? sv[k] : 0.0;
      CHECK(near(abs_ev[k], expect, 1e-10));
    }
  }
}

TEST_CASE("trace and spectral norms") {
  ComplexMatrix d(2, 2);
  d << 1, 0, 0, -3;
  CHECK(near(trace_norm(d), 4.0, 1e-12));
  CHECK(near(spectral_norm(d), 3.0, 1e-12));

  for (int dd = 2; dd <= 3; ++dd) CHECK(near(trace_norm(swap_matrix(dd)), double(dd * dd), 1e-10));

  ComplexMatrix n(2, 2);
  n << 0, 5, 0, 0;
  CHECK(near(spectral_norm(n), 5.0, 1e-12));
  CHECK(near(trace_norm(n), 5.0, 1e-12));

  std::mt19937_64 rng(777);
  CHECK(near(spectral_norm(random_unitary(4, rng)), 1.0, 1e-12));

  // trace_norm >= spectral_norm, equality at rank one.
  for (int t = 0; t < 100; ++t) {
    ComplexMatrix m = random_density_matrix(4, rng);
    CHECK(trace_norm(m) >= spectral_norm(m) - 1e-12);
    ComplexVector x = random_pure_state(3, rng), y = random_pure_state(3, rng);
    ComplexMatrix r1 = x * y.adjoint();
    CHECK(near(trace_norm(r1), spectral_norm(r1), 1e-11));
  }
}

TEST_CASE("min and max eigenvalue") {
  CHECK(near(min_eigenvalue(swap_matrix(2)), -1.0, 1e-12));
  CHECK(near(max_eigenvalue(swap_matrix(2)), 1.0, 1e-12));
  CHECK(near(min_eigenvalue(ComplexMatrix::Identity(3, 3)), 1.0, 1e-15));
  std::mt19937_64 rng(12);
  ComplexVector x = random_pure_state(3, rng);
  CHECK(near(min_eigenvalue(x * x.adjoint()), 0.0, 1e-12));
  ComplexMatrix nh(2, 2);
  nh << 0, 1, 0, 0;
  CHECK_THROWS_AS(min_eigenvalue(nh), std::invalid_argument);
}

TEST_CASE("min eigenvalue agrees across the component-splitting threshold") {
  // Large sparse block-diagonal matrix exercises the component path.
  std::mt19937_64 rng(909);
  int n = 300;
  ComplexMatrix big = ComplexMatrix::Zero(n, n);
  double expected_min = std::numeric_limits<double>::infinity();
  int at = 0;
  while (at + 3 <= n) {
    ComplexMatrix blk = random_density_matrix(3, rng);
    blk -= 0.2 * ComplexMatrix::Identity(3, 3);
    big.block(at, at, 3, 3) = blk;
    expected_min = std::min(expected_min, min_eigenvalue(blk));
    at += 3;
  }
  CHECK(near(min_eigenvalue(big), expected_min, 1e-10));
}

TEST_CASE("feasibly psd tolerance behaviour") {
  CHECK(feasibly_psd(ComplexMatrix::Identity(2, 2)));
  ComplexMatrix tiny(2, 2);
  tiny << 1, 0, 0, -1e-12;
  CHECK(feasibly_psd(tiny));
  ComplexMatrix bad(2, 2);
  bad << 1, 0, 0, -1e-3;
  CHECK(!feasibly_psd(bad));
}

TEST_CASE("entropies") {
  for (int d = 2; d <= 4; ++d)
    CHECK(near(von_neumann_entropy(ComplexMatrix::Identity(d, d) / double(d)), std::log2(d), 1e-12));

  std::mt19937_64 rng(55);
  ComplexVector psi = random_pure_state(4, rng);
  CHECK(near(von_neumann_entropy(psi * psi.adjoint()), 0.0, 1e-9));

  for (double p : {0.1, 0.25, 0.5}) {
    ComplexMatrix rho(2, 2);
    rho << p, 0, 0, 1 - p;
    CHECK(near(von_neumann_entropy(rho), binary_entropy(p), 1e-12));
  }

  // Unitary invariance.
  ComplexMatrix rho = random_density_matrix(4, rng);
  ComplexMatrix u = random_unitary(4, rng);
  CHECK(near(von_neumann_entropy(u * rho * u.adjoint()), von_neumann_entropy(rho), 1e-10));

  CHECK_THROWS_AS(von_neumann_entropy(ComplexMatrix::Identity(2, 2)), std::domain_error);
  ComplexMatrix neg(2, 2);
  neg << 1.0 + 1e-6, 0, 0, -1e-6;
  CHECK_THROWS_AS(von_neumann_entropy(neg), std::domain_error);

  CHECK(near(binary_entropy(0.5), 1.0, 1e-15));
  CHECK(near(binary_entropy(0.0), 0.0, 1e-15));
  CHECK(near(shannon_entropy_bits({0.25, 0.25, 0.25, 0.25}), 2.0, 1e-12));
  CHECK_THROWS_AS(shannon_entropy_bits({0.5, 0.2}), std::domain_error);
}

TEST_CASE("trace distance") {
  ComplexMatrix e0 = ComplexMatrix::Zero(2, 2), e1 = ComplexMatrix::Zero(2, 2);
  e0(0, 0) = 1.0;
  e1(1, 1) = 1.0;
  CHECK(near(trace_distance(e0, e1), 2.0, 1e-12));
  CHECK(near(trace_distance(e0, e0), 0.0, 1e-12));
  ComplexMatrix p(2, 2), q(2, 2);
  p << 0.7, 0, 0, 0.3;
  q << 0.4, 0, 0, 0.6;
  CHECK(near(trace_distance(p, q), 0.6, 1e-12));
}

TEST_CASE("block-diagonal truncation majorization on random Hermitian matrices") {
  std::mt19937_64 rng(314159);
  std::uniform_int_distribution<int> nblocks(2, 3);
  std::uniform_int_distribution<int> bsize(1, 3);
  for (int t = 0; t < 100; ++t) {
    std::vector<int> sizes;
    int nb = nblocks(rng);
    for (int b = 0; b < nb; ++b) sizes.push_back(bsize(rng));
    BlockStructure bs(sizes);
    ComplexMatrix rho = random_density_matrix(bs.total(), rng);
    ComplexMatrix trunc = ComplexMatrix::Zero(bs.total(), bs.total());
    for (int b = 0; b < bs.block_count(); ++b)
      trunc.block(bs.offsets[b], bs.offsets[b], bs.sizes[b], bs.sizes[b]) =
          rho.block(bs.offsets[b], bs.offsets[b], bs.sizes[b], bs.sizes[b]);

    RealVector ev_rho = hermitian_eigenvalues(rho);
    RealVector ev_tr = hermitian_eigenvalues(trunc);
    std::vector<double> a(ev_rho.data(), ev_rho.data() + ev_rho.size());
    std::vector<double> b(ev_tr.data(), ev_tr.data() + ev_tr.size());
    std::sort(a.rbegin(), a.rend());
    std::sort(b.rbegin(), b.rend());
    double sa = 0.0, sb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      sa += a[k];
      sb += b[k];
      CHECK(sb <= sa + 1e-10);  // truncated spectrum is majorized by the original
    }
    CHECK(von_neumann_entropy(trunc) >= von_neumann_entropy(rho) - 1e-9);
  }
}

}  // TEST_SUITE
