#include <catch2/catch_amalgamated.hpp>

#include "slep/linalg.hpp"
#include "slep/rng.hpp"
#include "slep/sparse_sym.hpp"

#include "oracles.hpp"

#include <algorithm>

using namespace slep;

TEST_CASE("symmetrize basics") {
  Matrix w(2, 2);
  w << 0, 2, 0, 0;
  Matrix s = symmetrize(w);
  Matrix want(2, 2);
  want << 0, 1, 1, 0;
  CHECK((s - want).norm() == 0.0);

  Matrix w2(2, 2);
  w2 << 1, 3, 1, 2;
  Matrix want2(2, 2);
  want2 << 1, 2, 2, 2;  // (W + W^T)/2 entrywise
  CHECK((symmetrize(w2) - want2).norm() == 0.0);

  SeededRng rng(7);
  Matrix sym = oracle::random_symmetric(rng, 5);
  CHECK((symmetrize(sym) - sym).norm() <= 1e-15 * sym.norm());

  CHECK_THROWS_AS(symmetrize(Matrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("symmetrize is idempotent and linear") {
  SeededRng rng(11);
  Matrix a = rng.gaussian_matrix(6, 6), b = rng.gaussian_matrix(6, 6);
  Matrix sa = symmetrize(a);
  CHECK((symmetrize(sa) - sa).norm() <= 1e-15 * sa.norm());
  Matrix lin = symmetrize(2.5 * a - 0.75 * b);
  Matrix lin2 = 2.5 * symmetrize(a) - 0.75 * symmetrize(b);
  CHECK((lin - lin2).norm() <= 1e-14 * (lin.norm() + 1));
}

TEST_CASE("sym_eig on diagonal and random matrices") {
  SymEig id = sym_eig(Matrix::Identity(3, 3));
  CHECK((id.values - Vector::Ones(3)).norm() <= 1e-14);

  Matrix d(2, 2);
  d << 2, 0, 0, 5;
  SymEig de = sym_eig(d);
  CHECK(de.values(0) == Catch::Approx(2.0).margin(1e-13));
  CHECK(de.values(1) == Catch::Approx(5.0).margin(1e-13));
  CHECK((de.vectors.cwiseAbs() - Matrix::Identity(2, 2)).norm() <= 1e-12);

  SeededRng rng(3);
  for (Index n : {5, 40, 120}) {
    Matrix w = oracle::random_symmetric(rng, n, 3.0);
    SymEig e = sym_eig(w);
    CHECK((e.reconstruct() - w).norm() <= 1e-10 * w.norm());
    CHECK((e.vectors.transpose() * e.vectors - Matrix::Identity(n, n)).norm() <= 1e-12 * n);
    CHECK(std::is_sorted(e.values.data(), e.values.data() + n));
  }
}

TEST_CASE("sym_eig rejects asymmetric input") {
  Matrix w(2, 2);
  w << 1, 1, 0, 1;
  CHECK_THROWS_AS(sym_eig(w), ContractError);
}

TEST_CASE("spd_power closed forms") {
  CHECK((spd_power(4.0 * Matrix::Identity(2, 2), -0.5) - 0.5 * Matrix::Identity(2, 2)).norm() <=
        1e-14);
  for (double e : {-1.0, -0.5, 0.5})
    CHECK((spd_power(Matrix::Identity(4, 4), e) - Matrix::Identity(4, 4)).norm() <= 1e-14);

  Matrix d(2, 2);
  d << 1, 0, 0, 9;
  Matrix want(2, 2);
  want << 1, 0, 0, 3;  // scalar square roots
  CHECK((spd_power(d, 0.5) - want).norm() <= 1e-13);
}

TEST_CASE("spd_power sqrt squares back to the input") {
  SeededRng rng(5);
  Matrix w = oracle::random_spd(rng, 12);
  Matrix r = spd_power(w, 0.5);
  CHECK((r * r - w).norm() <= 1e-9 * w.norm());
  Matrix inv = spd_power(w, -1.0);
  CHECK((inv * w - Matrix::Identity(12, 12)).norm() <= 1e-9);
}

TEST_CASE("spd_power singularity carries lambda_min") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  try {
    spd_power(d, -0.5);
    FAIL("expected SingularityError");
  } catch (const SingularityError& e) {
    CHECK(std::abs(e.lambda_min) <= 1e-12);
  }
}

TEST_CASE("qr_qfactor orthogonality, span, determinism") {
  SeededRng rng(17);
  Matrix w = rng.gaussian_matrix(20, 5);
  Matrix q = qr_qfactor(w);
  CHECK((q.transpose() * q - Matrix::Identity(5, 5)).norm() <= 1e-12);
  // span(Q) = span(W): projecting W onto Q reproduces W.
  CHECK((q * (q.transpose() * w) - w).norm() <= 1e-11 * w.norm());
  // Sign convention makes qf idempotent on orthonormal input.
  CHECK((qr_qfactor(q) - q).norm() <= 1e-12);

  Matrix scaled = Matrix::Zero(3, 2);
  scaled(0, 0) = 2.0;
  scaled(2, 1) = 3.0;
  Matrix qs = qr_qfactor(scaled);
  CHECK(std::abs(qs(0, 0) - 1.0) <= 1e-14);
  CHECK(std::abs(qs(2, 1) - 1.0) <= 1e-14);

  Matrix rankdef(4, 2);
  rankdef.col(0) = Vector::Ones(4);
  rankdef.col(1) = 2.0 * Vector::Ones(4);
  CHECK_THROWS_AS(qr_qfactor(rankdef), SingularityError);
}

TEST_CASE("sprandsym_like identity fixed point") {
  SeededRng rng(23);
  SparseSymmetric m = sprandsym_like(3, 1.0, Vector::Ones(3), rng);
  CHECK((m.dense() - Matrix::Identity(3, 3)).norm() <= 1e-12);
}

TEST_CASE("sprandsym_like preserves the prescribed spectrum") {
  SeededRng rng(29);
  Vector eigs(50);
  for (Index i = 0; i < 50; ++i) eigs(i) = rng.uniform_pos();
  SparseSymmetric m = sprandsym_like(50, 0.1, eigs, rng);
  CHECK(static_cast<double>(m.nonzeros()) >= 0.1 * 50 * 50);

  SymEig e = sym_eig(m.dense());
  Vector sorted = eigs;
  std::sort(sorted.data(), sorted.data() + 50);
  CHECK((e.values - sorted).norm() <= 1e-8 * sorted.norm());
}

TEST_CASE("sprandsym_like rank equals count of nonzero eigenvalues") {
  SeededRng rng(31);
  Vector eigs = Vector::Zero(20);
  for (Index i = 0; i < 12; ++i) eigs(i) = 0.5 + rng.uniform();
  SparseSymmetric m = sprandsym_like(20, 0.5, eigs, rng);
  SymEig e = sym_eig(m.dense());
  Index rank = 0;
  for (Index i = 0; i < 20; ++i)
    if (std::abs(e.values(i)) > 1e-8) ++rank;
  CHECK(rank == 12);
}

TEST_CASE("sprandsym_like stays PSD for nonnegative spectra") {
  SeededRng rng(37);
  Vector eigs(30);
  for (Index i = 0; i < 30; ++i) eigs(i) = rng.uniform();  // in [0,1)
  SparseSymmetric m = sprandsym_like(30, 0.2, eigs, rng);
  for (int t = 0; t < 50; ++t) {
    Vector v = rng.gaussian_matrix(30, 1);
    Vector mv = m * v;
    CHECK(v.dot(mv) >= -1e-9 * m.norm() * v.squaredNorm());
  }
}

TEST_CASE("sprandsym_like is deterministic under the seed") {
  Vector eigs(15);
  SeededRng s(41);
  for (Index i = 0; i < 15; ++i) eigs(i) = s.uniform_pos();
  SeededRng a(99), b(99);
  Matrix ma = sprandsym_like(15, 0.3, eigs, a).dense();
  Matrix mb = sprandsym_like(15, 0.3, eigs, b).dense();
  CHECK((ma - mb).norm() == 0.0);
}

TEST_CASE("SeededRng streams are reproducible") {
  SeededRng a(123), b(123), c(124);
  bool same = true, diff = false;
  for (int i = 0; i < 1000; ++i) {
    double ua = a.uniform(), ub = b.uniform(), uc = c.uniform();
    same = same && (ua == ub);
    diff = diff || (ua != uc);
    CHECK(ua >= 0.0);
    CHECK(ua < 1.0);
  }
  CHECK(same);
  CHECK(diff);
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  CHECK(mix_seed(1, 0) == mix_seed(1, 0));
}

TEST_CASE("SeededRng gaussian moments are sane") {
  SeededRng rng(55);
  double sum = 0, sq = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    double g = rng.normal();
    sum += g;
    sq += g * g;
  }
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(std::abs(sq / n - 1.0) < 0.05);
}

TEST_CASE("SparseSymmetric symmetrizes and validates") {
  std::vector<Eigen::Triplet<double>> t{{0, 1, 2.0}, {0, 0, 1.0}};
  SparseSymmetric m(2, t);
  Matrix d = m.dense();
  CHECK(d(0, 1) == Catch::Approx(2.0));
  CHECK(d(1, 0) == Catch::Approx(2.0));
  CHECK(d(0, 0) == Catch::Approx(1.0));

  std::vector<Eigen::Triplet<double>> bad{{0, 1, std::nan("")}};
  CHECK_THROWS_AS(SparseSymmetric(2, bad), ContractError);
}
