#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mlines/linalg.hpp"

using namespace mlines;

TEST_CASE("field arithmetic round trips") {
  Fp F(32003);
  CHECK(F.p() == 32003);
  CHECK(F.add(32000, 5) == 2);
  CHECK(F.sub(3, 7) == 31999);
  CHECK(F.neg(0) == 0);
  CHECK(F.neg(1) == 32002);
  CHECK(F.mul(31990, 31991) == F.mul(31991, 31990));
  CHECK(F.reduce64(uint64_t(32003) * 32003 + 17) == 17);
  CHECK(F.reduce_int(-1) == 32002);
  CHECK(F.reduce_int(-32003) == 0);

  Rng rng(42);
  for (int i = 0; i < 200; ++i) {
    uint32_t a = rng.nonzero_field_elt(F);
    CHECK(F.mul(a, F.inv(a)) == 1);
    CHECK(F.add(a, F.neg(a)) == 0);
    CHECK(F.pow(a, F.p() - 1) == 1); // Fermat
  }
  CHECK(F.pow(0, 0) == 1);
  CHECK(F.pow(5, 0) == 1);
  CHECK_THROWS_AS(F.inv(0), std::domain_error);
}

TEST_CASE("field constructor validates the modulus") {
  CHECK(Fp::is_prime(32003));
  CHECK(Fp::is_prime(101));
  CHECK(!Fp::is_prime(1));
  CHECK(!Fp::is_prime(32001));
  CHECK_THROWS_AS(Fp(32001), std::invalid_argument);
  CHECK_THROWS_AS(Fp(2), std::invalid_argument);
  CHECK_NOTHROW(Fp(101));
}

TEST_CASE("rng streams are deterministic and fork independently") {
  Rng a(7), b(7);
  for (int i = 0; i < 16; ++i) CHECK(a.next() == b.next());

  Rng base(7);
  Rng f1 = base.fork(1), f2 = base.fork(2);
  // forked labels must not collide with each other or the parent
  CHECK(f1.next() != f2.next());
  Rng c(7), d(7);
  Rng cf = c.fork(3);
  (void)cf.next();
  CHECK(c.next() == d.next()); // forking leaves the parent stream untouched
}

TEST_CASE("rref produces unit pivots and a reduced matrix") {
  Fp F(32003);
  MatF m(3, 4);
  // rows: (1,2,3,4), (2,4,6,8), (0,1,1,0) -- rank 2
  uint32_t rows[3][4] = {{1, 2, 3, 4}, {2, 4, 6, 8}, {0, 1, 1, 0}};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 4; ++c) m.at(r, c) = rows[r][c];
  std::vector<int> piv = rref(m, F);
  REQUIRE(piv.size() == 2);
  CHECK(piv[0] == 0);
  CHECK(piv[1] == 1);
  for (size_t r = 0; r < piv.size(); ++r) {
    CHECK(m.at(int(r), piv[r]) == 1);
    for (size_t q = 0; q < piv.size(); ++q)
      if (q != r) CHECK(m.at(int(q), piv[r]) == 0);
  }
  CHECK(rank(m, F) == 2);
}

TEST_CASE("rank_kernel returns a right kernel basis") {
  Fp F(32003);
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    int rows = 4 + int(rng.below(4)), cols = 6 + int(rng.below(4));
    MatF m(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) m.at(r, c) = rng.field_elt(F);
    auto [rk, ker] = rank_kernel(m, F);
    CHECK(rk + ker.rows == cols); // rank-nullity
    for (int k = 0; k < ker.rows; ++k)
      for (int r = 0; r < rows; ++r) {
        uint64_t acc = 0;
        for (int c = 0; c < cols; ++c)
          acc += uint64_t(m.at(r, c)) * ker.at(k, c);
        CHECK(F.reduce64(acc) == 0);
      }
    // kernel rows are independent
    CHECK(rank(ker, F) == ker.rows);
  }
}

TEST_CASE("determinant is multiplicative") {
  Fp F(32003);
  Rng rng(13);
  for (int trial = 0; trial < 8; ++trial) {
    int n = 2 + int(rng.below(4));
    MatF a(n, n), b(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        a.at(r, c) = rng.field_elt(F);
        b.at(r, c) = rng.field_elt(F);
      }
    uint32_t lhs = det(mat_mul(a, b, F), F);
    CHECK(lhs == F.mul(det(a, F), det(b, F)));
  }
  MatF id(3, 3);
  for (int i = 0; i < 3; ++i) id.at(i, i) = 1;
  CHECK(det(id, F) == 1);
}

TEST_CASE("row_basis spans the same row space") {
  Fp F(32003);
  MatF m(4, 5);
  Rng rng(17);
  for (int c = 0; c < 5; ++c) {
    m.at(0, c) = rng.field_elt(F);
    m.at(1, c) = rng.field_elt(F);
    m.at(2, c) = F.add(m.at(0, c), m.at(1, c)); // dependent row
    m.at(3, c) = rng.field_elt(F);
  }
  MatF b = row_basis(m, F);
  CHECK(b.rows == 3);
  // each original row reduces to zero against the basis
  EchelonBasis E(5, F);
  for (int r = 0; r < b.rows; ++r) {
    std::vector<uint32_t> v(b.row(r), b.row(r) + 5);
    E.insert(dense_to_sparse(v));
  }
  for (int r = 0; r < 4; ++r) {
    std::vector<uint32_t> v(m.row(r), m.row(r) + 5);
    CHECK(E.contains(dense_to_sparse(v)));
  }
}

TEST_CASE("echelon basis insert, reduce and coordinates agree") {
  Fp F(32003);
  Rng rng(23);
  int cols = 12;
  EchelonBasis E(cols, F);
  std::vector<std::vector<uint32_t>> inserted;
  for (int i = 0; i < 6; ++i) {
    std::vector<uint32_t> v(size_t(cols));
    for (auto& x : v) x = rng.field_elt(F);
    if (E.insert(dense_to_sparse(v))) inserted.push_back(v);
  }
  REQUIRE(E.dim() == int(inserted.size()));

  // a random combination lies in the span and its coordinates rebuild it
  std::vector<uint32_t> comb(size_t(cols), 0);
  std::vector<uint32_t> lam;
  for (const auto& v : inserted) {
    uint32_t l = rng.nonzero_field_elt(F);
    lam.push_back(l);
    for (int c = 0; c < cols; ++c)
      comb[size_t(c)] = F.add(comb[size_t(c)], F.mul(l, v[size_t(c)]));
  }
  CHECK(E.contains(dense_to_sparse(comb)));
  auto coords = E.coordinates(dense_to_sparse(comb));
  REQUIRE(coords.has_value());
  std::vector<uint32_t> rebuilt(size_t(cols), 0);
  for (size_t i = 0; i < coords->size(); ++i) {
    // rows are stored pivot-stripped: pivot contributes implicitly
    uint32_t ci = (*coords)[i];
    if (ci == 0) continue;
    rebuilt[size_t(E.pivot(int(i)))] =
        F.add(rebuilt[size_t(E.pivot(int(i)))], ci);
    for (const auto& [c, x] : E.row(int(i)).t)
      rebuilt[size_t(c)] = F.add(rebuilt[size_t(c)], F.mul(ci, x));
  }
  CHECK(rebuilt == comb);

  // a vector off the span keeps a nonzero residual and has no coordinates
  std::vector<uint32_t> off(size_t(cols), 0);
  off[11] = 1;
  off[0] = 3;
  if (!E.contains(dense_to_sparse(off))) {
    CHECK(!E.coordinates(dense_to_sparse(off)).has_value());
    SparseRow r = E.reduce(dense_to_sparse(off));
    CHECK(!r.empty());
    // the residual itself inserts, then reduces to zero
    EchelonBasis E2 = E;
    CHECK(E2.insert(r));
    CHECK(E2.contains(dense_to_sparse(off)));
  }
}

TEST_CASE("canonical rows are fully back-reduced") {
  Fp F(32003);
  EchelonBasis E(6, F);
  // insert in an order that leaves stored tails touching later pivots
  std::vector<uint32_t> v1 = {0, 1, 2, 3, 0, 5};
  std::vector<uint32_t> v2 = {1, 1, 0, 0, 4, 0};
  std::vector<uint32_t> v3 = {0, 0, 7, 1, 1, 1};
  E.insert(dense_to_sparse(v1));
  E.insert(dense_to_sparse(v2));
  E.insert(dense_to_sparse(v3));
  std::vector<SparseRow> rows = E.canonical_rows();
  REQUIRE(rows.size() == 3);
  std::vector<int> pivs;
  for (const SparseRow& r : rows) {
    REQUIRE(!r.empty());
    CHECK(r.t.front().second == 1);
    pivs.push_back(r.leading());
  }
  CHECK(std::is_sorted(pivs.begin(), pivs.end()));
  // no canonical row touches another's pivot column
  for (const SparseRow& r : rows)
    for (size_t i = 1; i < r.t.size(); ++i)
      for (int p : pivs) CHECK(r.t[i].first != p);
  // the canonical rows span the same space
  EchelonBasis E2(6, F);
  for (const SparseRow& r : rows) E2.insert(r);
  CHECK(E2.dim() == 3);
  CHECK(E2.contains(dense_to_sparse(v1)));
  CHECK(E2.contains(dense_to_sparse(v2)));
  CHECK(E2.contains(dense_to_sparse(v3)));
}

TEST_CASE("intersection of row spaces") {
  Fp F(32003);
  Rng rng(31);
  int cols = 10;
  // a and b share a planted two-dimensional subspace
  std::vector<std::vector<uint32_t>> shared;
  for (int i = 0; i < 2; ++i) {
    std::vector<uint32_t> v(size_t(cols));
    for (auto& x : v) x = rng.field_elt(F);
    shared.push_back(v);
  }
  EchelonBasis A(cols, F), B(cols, F);
  for (const auto& v : shared) {
    A.insert(dense_to_sparse(v));
    B.insert(dense_to_sparse(v));
  }
  for (int i = 0; i < 3; ++i) {
    std::vector<uint32_t> v(size_t(cols)), w(size_t(cols));
    for (auto& x : v) x = rng.field_elt(F);
    for (auto& x : w) x = rng.field_elt(F);
    A.insert(dense_to_sparse(v));
    B.insert(dense_to_sparse(w));
  }
  REQUIRE(A.dim() == 5);
  REQUIRE(B.dim() == 5);
  EchelonBasis I = intersect(A, B);
  // generic extra rows meet only in the planted plane
  CHECK(I.dim() == 2);
  for (size_t i = 0; i < I.rows().size(); ++i) {
    SparseRow full;
    full.t.push_back({I.pivot(int(i)), 1});
    for (const auto& t : I.row(int(i)).t) full.t.push_back(t);
    full.sort_terms();
    CHECK(A.contains(full));
    CHECK(B.contains(full));
  }
  for (const auto& v : shared) CHECK(I.contains(dense_to_sparse(v)));
}

TEST_CASE("sparse conversion drops zeros and keeps order") {
  std::vector<uint32_t> v = {0, 5, 0, 0, 7, 1};
  SparseRow r = dense_to_sparse(v);
  REQUIRE(r.t.size() == 3);
  CHECK(r.t[0] == std::make_pair(1, 5u));
  CHECK(r.t[1] == std::make_pair(4, 7u));
  CHECK(r.t[2] == std::make_pair(5, 1u));
  CHECK(r.leading() == 1);
  CHECK(dense_to_sparse(std::vector<uint32_t>(4, 0)).empty());
}
