#include <algorithm>
#include <vector>

#include "doctest.h"
#include "frobkit/error.hpp"
#include "frobkit/exterior.hpp"
#include "test_support.hpp"

using namespace frobkit;
using frobkit::testing::Rng;

namespace {

// Oracle: parity of the number of adjacent swaps bubble sort performs.
int bubble_sort_sign(std::vector<int> seq) {
  for (std::size_t i = 0; i < seq.size(); ++i) {
    for (std::size_t j = i + 1; j < seq.size(); ++j) {
      if (seq[i] == seq[j]) return 0;
    }
  }
  int swaps = 0;
  for (std::size_t pass = 0; pass < seq.size(); ++pass) {
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      if (seq[i] > seq[i + 1]) {
        std::swap(seq[i], seq[i + 1]);
        ++swaps;
      }
    }
  }
  return swaps % 2 == 0 ? 1 : -1;
}

MultiVector e(int n, std::vector<int> idx, double c = 1.0) {
  return MultiVector::basis(n, std::move(idx), c);
}

MultiCovector dx(int n, std::vector<int> idx, double c = 1.0) {
  return MultiCovector::basis(n, std::move(idx), c);
}

// Oracle for v ⌐ α: pair against every basis (k-h)-covector β using only
// wedge and pair.
MultiVector trace_oracle(const MultiVector& v, const MultiCovector& alpha) {
  const int n = v.n();
  MultiVector out(n, v.k() - alpha.k());
  for (std::size_t p = 0; p < out.size(); ++p) {
    MultiCovector beta(n, out.k());
    beta[p] = 1.0;
    out[p] = pair(v, wedge(alpha, beta));
  }
  return out;
}

MultiCovector antitrace_oracle(const MultiVector& v,
                               const MultiCovector& alpha) {
  const int n = v.n();
  MultiCovector out(n, alpha.k() - v.k());
  for (std::size_t p = 0; p < out.size(); ++p) {
    MultiVector w(n, out.k());
    w[p] = 1.0;
    out[p] = pair(wedge(w, v), alpha);
  }
  return out;
}

}  // namespace

TEST_CASE("perm_sign examples and bubble-sort oracle") {
  CHECK(perm_sign(std::vector<int>{1, 2, 3}) == 1);
  CHECK(perm_sign(std::vector<int>{3, 1, 2}) == bubble_sort_sign({3, 1, 2}));
  CHECK(perm_sign(std::vector<int>{3, 1, 2}) == 1);
  CHECK(perm_sign(std::vector<int>{2, 1, 3}) == -1);
  CHECK(perm_sign(std::vector<int>{1, 1, 2}) == 0);
  CHECK(perm_sign(std::vector<int>{}) == 1);

  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const int len = frobkit::testing::uniform_int(rng, 0, 8);
    std::vector<int> seq(len);
    for (int& s : seq) s = frobkit::testing::uniform_int(rng, 1, 9);
    CHECK(perm_sign(seq) == bubble_sort_sign(seq));
  }
}

TEST_CASE("index tables are lexicographic with C(n,k) entries") {
  for (int n = 0; n <= kMaxDimension; ++n) {
    for (int k = 0; k <= n; ++k) {
      const auto& table = index_table(n, k);
      REQUIRE(table.size() == binomial(n, k));
      for (std::size_t p = 0; p < table.size(); ++p) {
        CHECK(index_position(n, table[p]) == p);
        if (p > 0) {
          CHECK(std::lexicographical_compare(
              MultiIndex::from_mask(n, table[p - 1]).entries().begin(),
              MultiIndex::from_mask(n, table[p - 1]).entries().end(),
              MultiIndex::from_mask(n, table[p]).entries().begin(),
              MultiIndex::from_mask(n, table[p]).entries().end()));
        }
      }
    }
  }
  CHECK(binomial(10, 5) == 252);
  CHECK(MultiIndex(4, {1, 3}).complement() == MultiIndex(4, {2, 4}));
  CHECK_THROWS_AS(MultiIndex(3, {2, 1}), GradeError);
  CHECK_THROWS_AS(MultiIndex(3, {0, 1}), DimensionMismatch);
  CHECK_THROWS_AS(MultiIndex(3, {1, 4}), DimensionMismatch);
}

TEST_CASE("wedge examples") {
  CHECK(wedge(e(3, {1}), e(3, {2})) == e(3, {1, 2}));
  CHECK(wedge(e(3, {1}), e(3, {1})).max_abs() == 0.0);
  CHECK(wedge(e(3, {1}) + e(3, {3}), e(3, {2})) ==
        e(3, {1, 2}) - e(3, {2, 3}));
  CHECK(MultiVector::basis(3, {2, 1}) == -e(3, {1, 2}));
  CHECK_THROWS_AS(wedge(e(3, {1, 2}), e(3, {2, 3})), GradeError);
  CHECK_THROWS_AS(wedge(e(3, {1}), e(4, {2})), DimensionMismatch);
  // Scalars act by multiplication.
  CHECK(wedge(MultiVector::scalar(3, 2.0), e(3, {1, 3})) == e(3, {1, 3}, 2.0));
}

TEST_CASE("wedge is graded anticommutative and associative") {
  Rng rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = frobkit::testing::uniform_int(rng, 1, 6);
    const int p = frobkit::testing::uniform_int(rng, 0, n);
    const int q = frobkit::testing::uniform_int(rng, 0, n - p);
    const auto a = frobkit::testing::random_vector(rng, n, p);
    const auto b = frobkit::testing::random_vector(rng, n, q);
    const auto ab = wedge(a, b);
    const auto ba = wedge(b, a);
    const double sign = (p * q) % 2 == 0 ? 1.0 : -1.0;
    const double scale = std::max(1.0, ab.max_abs());
    CHECK((ab - sign * ba).max_abs() <= 1e-14 * scale);
  }
  for (int trial = 0; trial < 200; ++trial) {
    const int n = frobkit::testing::uniform_int(rng, 3, 6);
    const auto a = frobkit::testing::random_covector(rng, n, 1);
    const auto b = frobkit::testing::random_covector(rng, n, 1);
    const auto c = frobkit::testing::random_covector(rng, n, n - 2);
    CHECK((wedge(wedge(a, b), c) - wedge(a, wedge(b, c))).max_abs() <= 1e-12);
  }
}

TEST_CASE("pairing is dual-orthonormal") {
  for (int i = 1; i <= 4; ++i) {
    for (int j = 1; j <= 4; ++j) {
      CHECK(pair(e(4, {i}), dx(4, {j})) == (i == j ? 1.0 : 0.0));
    }
  }
  CHECK(pair(e(3, {1, 2}), dx(3, {1, 2})) == 1.0);
  CHECK(pair(e(3, {1, 2}) + e(3, {1, 3}, 2.0), dx(3, {1, 3})) == 2.0);
  CHECK_THROWS_AS(pair(e(3, {1}), dx(3, {1, 2})), GradeError);
}

TEST_CASE("trace examples agree with the pairing oracle") {
  CHECK(trace(e(3, {1, 2}), dx(3, {1})) == e(3, {2}));
  CHECK(trace(e(3, {1, 2}), dx(3, {2})) == -e(3, {1}));
  CHECK(trace(e(3, {1, 3}), dx(3, {3})) == -e(3, {1}));
  CHECK_THROWS_AS(trace(e(3, {1}), dx(3, {1, 2})), GradeError);

  Rng rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = frobkit::testing::uniform_int(rng, 1, 6);
    const int k = frobkit::testing::uniform_int(rng, 0, n);
    const int h = frobkit::testing::uniform_int(rng, 0, k);
    const auto v = frobkit::testing::random_vector(rng, n, k);
    const auto a = frobkit::testing::random_covector(rng, n, h);
    CHECK((trace(v, a) - trace_oracle(v, a)).max_abs() <= 1e-13);
  }
}

TEST_CASE("antitrace examples agree with the pairing oracle") {
  CHECK(antitrace(e(3, {3}), dx(3, {1, 2, 3})) == dx(3, {1, 2}));
  CHECK(antitrace(e(3, {1}), dx(3, {1})) == MultiCovector::scalar(3, 1.0));
  CHECK(antitrace(e(3, {2}), dx(3, {1})) == MultiCovector::scalar(3, 0.0));
  CHECK_THROWS_AS(antitrace(e(3, {1, 2}), dx(3, {1})), GradeError);

  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = frobkit::testing::uniform_int(rng, 1, 6);
    const int h = frobkit::testing::uniform_int(rng, 0, n);
    const int k = frobkit::testing::uniform_int(rng, 0, h);
    const auto v = frobkit::testing::random_vector(rng, n, k);
    const auto a = frobkit::testing::random_covector(rng, n, h);
    CHECK((antitrace(v, a) - antitrace_oracle(v, a)).max_abs() <= 1e-13);
  }
}

TEST_CASE("interior product composition laws") {
  Rng rng(4);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = frobkit::testing::uniform_int(rng, 2, 6);
    {
      const int k = frobkit::testing::uniform_int(rng, 0, n);
      const int h = frobkit::testing::uniform_int(rng, 0, k);
      const int hp = frobkit::testing::uniform_int(rng, 0, k - h);
      const auto v = frobkit::testing::random_vector(rng, n, k);
      const auto a = frobkit::testing::random_covector(rng, n, h);
      const auto ap = frobkit::testing::random_covector(rng, n, hp);
      CHECK((trace(v, wedge(a, ap)) - trace(trace(v, a), ap)).max_abs() <=
            1e-12);
    }
    {
      const int h = frobkit::testing::uniform_int(rng, 0, n);
      const int k = frobkit::testing::uniform_int(rng, 0, h);
      const int kp = frobkit::testing::uniform_int(rng, 0, h - k);
      const auto v = frobkit::testing::random_vector(rng, n, k);
      const auto vp = frobkit::testing::random_vector(rng, n, kp);
      const auto a = frobkit::testing::random_covector(rng, n, h);
      CHECK((antitrace(wedge(v, vp), a) - antitrace(v, antitrace(vp, a)))
                .max_abs() <= 1e-12);
    }
  }
}

TEST_CASE("star basis formula, definitions and involution") {
  CHECK(star_vec(e(3, {1, 2})) == dx(3, {3}));
  CHECK(star_vec(e(3, {1, 3})) == -dx(3, {2}));
  CHECK(star_covec(dx(3, {1, 2})) == e(3, {3}));
  CHECK(star_vec(e(4, {1, 2, 4})) == dx(4, {3}));

  Rng rng(5);
  for (int n = 1; n <= 6; ++n) {
    for (int k = 0; k <= n; ++k) {
      for (int trial = 0; trial < 20; ++trial) {
        const auto v = frobkit::testing::random_vector(rng, n, k);
        const auto a = frobkit::testing::random_covector(rng, n, k);
        // Exact: ★ permutes coefficients with signs.
        CHECK(star_covec(star_vec(v)) == v);
        CHECK(star_vec(star_covec(a)) == a);
        // ★v = v ⌐′ dx and ★α = e ⌐ α.
        CHECK((star_vec(v) - antitrace(v, MultiCovector::volume(n)))
                  .max_abs() <= 1e-15);
        CHECK((star_covec(a) - trace(MultiVector::volume(n), a)).max_abs() <=
              1e-15);
      }
    }
  }
}

TEST_CASE("star relates trace and wedge") {
  Rng rng(6);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = frobkit::testing::uniform_int(rng, 1, 6);
    const int k = frobkit::testing::uniform_int(rng, 0, n);
    const int h = frobkit::testing::uniform_int(rng, 0, k);
    const auto v = frobkit::testing::random_vector(rng, n, k);
    const auto a = frobkit::testing::random_covector(rng, n, h);
    CHECK((star_vec(trace(v, a)) - wedge(star_vec(v), a)).max_abs() <= 1e-12);

    const auto w = frobkit::testing::random_vector(rng, n, n - k);
    CHECK(std::abs(pair(w, star_vec(v)) -
                   pair(wedge(w, v), MultiCovector::volume(n))) <= 1e-12);
  }
}

TEST_CASE("span and simplicity") {
  const auto s12 = span_of(e(4, {1, 2}));
  CHECK(s12.dim() == 2);
  CHECK(Subspace::from_columns(Eigen::MatrixXd::Identity(4, 4).leftCols(2))
            .containment_residual(s12) <= 1e-14);

  const auto s1234 = span_of(e(4, {1, 2}) + e(4, {3, 4}));
  CHECK(s1234.dim() == 4);
  CHECK(span_of(MultiVector(4, 2)).dim() == 0);
  CHECK(span_of(MultiVector::scalar(3, 2.0)).dim() == 0);

  CHECK(is_simple(e(4, {1, 2})));
  CHECK_FALSE(is_simple(e(4, {1, 2}) + e(4, {3, 4})));
  CHECK(is_simple(wedge(e(3, {1}), e(3, {2}) + e(3, {3}))));
  CHECK(span_of(wedge(e(3, {1}), e(3, {2}) + e(3, {3}))).dim() == 2);
  CHECK_THROWS_AS(is_simple(MultiVector(3, 2)), Error);

  // Scale invariance of the relative cutoff.
  CHECK(span_of(e(4, {1, 2}, 1e-200) + e(4, {3, 4}, 1e-200)).dim() == 4);
}

TEST_CASE("span containment lemma by brute force") {
  Rng rng(7);
  int positives = 0;
  int negatives = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int n = frobkit::testing::uniform_int(rng, 2, 5);
    const int d = frobkit::testing::uniform_int(rng, 1, n - 1);
    const int k = frobkit::testing::uniform_int(rng, 1, d);
    Eigen::MatrixXd gens = Eigen::MatrixXd::Random(n, d);
    const Subspace w_space = Subspace::from_columns(gens);
    REQUIRE(w_space.dim() == d);
    std::vector<MultiVector> w_basis;
    for (int c = 0; c < d; ++c) {
      MultiVector col(n, 1);
      for (int r = 0; r < n; ++r) col[r] = w_space.basis()(r, c);
      w_basis.push_back(col);
    }
    auto wedge_of = [&](IndexMask mask) {
      MultiVector acc = MultiVector::scalar(n, 1.0);
      for (int c = 0; c < d; ++c) {
        if (mask & (1u << c)) acc = wedge(acc, w_basis[c]);
      }
      return acc;
    };

    // Either v ∈ Λ_k(W) (condition (b) should hold) or a generic v.
    const bool inside = trial % 2 == 0;
    MultiVector v(n, k);
    if (inside) {
      for (IndexMask m : index_table(d, k)) {
        v += frobkit::testing::uniform(rng) * wedge_of(m);
      }
    } else {
      v = frobkit::testing::random_vector(rng, n, k);
    }
    double condition_b = 0.0;
    for (IndexMask m : index_table(d, d - k + 1)) {
      condition_b = std::max(condition_b, wedge(v, wedge_of(m)).max_abs());
    }
    const double containment = span_of(v).containment_residual(w_space);
    if (condition_b <= 1e-12) {
      ++positives;
      CHECK(containment <= 1e-10);
    } else {
      ++negatives;
      // Contrapositive: span(v) ⊄ W must break condition (b).
      if (containment > 1e-6) CHECK(condition_b > 1e-12);
    }
  }
  CHECK(positives > 50);
  CHECK(negatives > 50);
}
