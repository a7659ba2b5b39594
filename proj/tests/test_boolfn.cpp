#include <doctest.h>

#include <stdexcept>

#include "sddkit/boolfn.hpp"
#include "test_support.hpp"

using namespace sddkit;

namespace {

Assignment x_assign(std::initializer_list<int> bits) {
  Assignment a;
  VarId v = 1;
  for (int b : bits) a.set(v++, b != 0);
  return a;
}

std::uint64_t binomial(std::uint32_t n, std::uint32_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint32_t j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

}  // namespace

TEST_CASE("hwb evaluates the hidden weighted bit") {
  const FunctionOracle f2 = hwb_oracle(2);
  CHECK(f2.evaluate(x_assign({1, 0})));
  CHECK_FALSE(f2.evaluate(x_assign({0, 1})));

  const FunctionOracle f4 = hwb_oracle(4);
  CHECK_FALSE(f4.evaluate(x_assign({0, 0, 0, 0})));
  CHECK(f4.evaluate(x_assign({1, 1, 1, 1})));

  CHECK_THROWS_AS(f4.evaluate(x_assign({1, 0})), std::invalid_argument);
}

TEST_CASE("exact count tests the Hamming weight") {
  CHECK(exact_count_oracle(4, 2).evaluate(x_assign({1, 0, 1, 0})));
  CHECK_FALSE(exact_count_oracle(4, 2).evaluate(x_assign({1, 1, 1, 0})));
  CHECK(exact_count_oracle(3, 0).evaluate(x_assign({0, 0, 0})));
  CHECK_THROWS_AS(exact_count_oracle(4, 5), std::invalid_argument);
}

TEST_CASE("primes split the weight classes by the hidden index") {
  CHECK(prime_oracle(PrimeId::without_index(2), 4).evaluate(x_assign({1, 0, 1, 0})));
  CHECK_FALSE(prime_oracle(PrimeId::with_index(2), 4).evaluate(x_assign({1, 0, 1, 0})));
  CHECK(prime_oracle(PrimeId::empty(), 4).evaluate(x_assign({0, 0, 0, 0})));
  CHECK_THROWS_AS(prime_oracle(PrimeId::with_index(4), 4), std::invalid_argument);
  CHECK_THROWS_AS(prime_oracle(PrimeId::with_index(0), 4), std::invalid_argument);
}

TEST_CASE("prime family has exactly 2n distinct members") {
  for (std::uint32_t n : {1u, 2u, 5u}) {
    const auto ids = prime_family_ids(n);
    CHECK(ids.size() == 2 * n);
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = i + 1; j < ids.size(); ++j) CHECK(!(ids[i] == ids[j]));
  }
  CHECK_THROWS_AS(prime_family_ids(0), std::invalid_argument);
}

TEST_CASE("prime tags round-trip through the CLI syntax") {
  for (const PrimeId& p : prime_family_ids(6)) CHECK(PrimeId::from_tag(p.tag()) == p);
  CHECK_THROWS_AS(PrimeId::from_tag("p2"), std::invalid_argument);
  CHECK_THROWS_AS(PrimeId::from_tag("p2.5"), std::invalid_argument);
}

TEST_CASE("generalized hwb follows the 2n-case disjunction") {
  const FunctionOracle f2 = generalized_hwb_oracle(2);
  {
    // All-ones y reduces F_n to HWB_n.
    Assignment a = x_assign({1, 0});
    for (std::uint32_t j = 0; j <= 2; ++j) a.set(y_var(2, j), true);
    CHECK(f2.evaluate(a));
  }
  {
    // Weight 0 reads ~y_0 whatever the other y values are.
    for (int y1 = 0; y1 < 2; ++y1)
      for (int y2 = 0; y2 < 2; ++y2) {
        Assignment a = x_assign({0, 0});
        a.set(y_var(2, 0), false);
        a.set(y_var(2, 1), y1 != 0);
        a.set(y_var(2, 2), y2 != 0);
        CHECK(f2.evaluate(a));
      }
  }
  {
    Assignment a = x_assign({1, 1, 0});
    const bool ys[4] = {true, false, true, true};
    for (std::uint32_t j = 0; j <= 3; ++j) a.set(y_var(3, j), ys[j]);
    // Weight 2 with x_2 = 1 reads y_2 = 1; frozen from the brute-forced
    // disjunction below.
    CHECK(generalized_hwb_oracle(3).evaluate(a));
    CHECK(testing::fn_disjunction_brute(3, a));
  }
  CHECK_THROWS_AS(f2.evaluate(x_assign({1, 0})), std::invalid_argument);
}

TEST_CASE("generalized hwb agrees with the literal disjunction everywhere") {
  for (std::uint32_t n : {1u, 2u, 3u, 4u}) {
    const FunctionOracle f = generalized_hwb_oracle(n);
    const std::uint64_t rows = std::uint64_t{1} << (2 * n + 1);
    for (std::uint64_t r = 0; r < rows; ++r) {
      const Assignment a = Assignment::from_row(f.scope(), r);
      CHECK(f.evaluate(a) == testing::fn_disjunction_brute(n, a));
    }
  }
}

TEST_CASE("truth tables enumerate scope-order rows, first variable first") {
  const BitVec hwb2 = hwb_oracle(2).truth_table();
  CHECK(hwb2.size() == 4);
  CHECK_FALSE(hwb2.get(0b00));
  CHECK_FALSE(hwb2.get(0b01));
  CHECK(hwb2.get(0b10));
  CHECK(hwb2.get(0b11));

  const FunctionOracle bottom(x_scope(2), [](const Assignment&) { return false; }, "bottom");
  CHECK(bottom.truth_table().all_zero());

  const BitVec e12 = exact_count_oracle(2, 1).truth_table();
  CHECK_FALSE(e12.get(0b00));
  CHECK(e12.get(0b01));
  CHECK(e12.get(0b10));
  CHECK_FALSE(e12.get(0b11));

  const FunctionOracle wide(
      [] {
        std::vector<VarId> s;
        for (VarId v = 1; v <= 25; ++v) s.push_back(v);
        return s;
      }(),
      [](const Assignment&) { return true; }, "wide");
  CHECK_THROWS_AS(wide.truth_table(), std::invalid_argument);
}

TEST_CASE("model counts come from the enumeration oracle") {
  CHECK(hwb_oracle(2).model_count() == 2);
  CHECK(exact_count_oracle(4, 2).model_count() == 6);  // binomial(4, 2)
  const FunctionOracle top(x_scope(5), [](const Assignment&) { return true; }, "top");
  CHECK(top.model_count() == 32);
}

TEST_CASE("model count of hwb matches the combinatorial identity") {
  for (std::uint32_t n = 1; n <= 12; ++n) {
    std::uint64_t expected = 0;
    for (std::uint32_t i = 1; i <= n; ++i) expected += binomial(n - 1, i - 1);
    CHECK(hwb_oracle(n).model_count() == expected);
  }
}

TEST_CASE("restriction fixes variables and keeps the rest of the scope") {
  {
    // F_2 with every y pinned to 1 is HWB_2 pointwise.
    Assignment ys;
    for (std::uint32_t j = 0; j <= 2; ++j) ys.set(y_var(2, j), true);
    const FunctionOracle restricted = generalized_hwb_oracle(2).restrict(ys);
    CHECK(restricted.scope() == x_scope(2));
    CHECK(restricted.truth_table() == hwb_oracle(2).truth_table());
  }
  {
    const FunctionOracle same = hwb_oracle(2).restrict(Assignment{});
    CHECK(same.truth_table() == hwb_oracle(2).truth_table());
  }
  {
    Assignment x1;
    x1.set(1, true);
    const FunctionOracle restricted = exact_count_oracle(4, 2).restrict(x1);
    CHECK(restricted.scope() == std::vector<VarId>{2, 3, 4});
    CHECK(restricted.truth_table() ==
          exact_count_oracle(3, 1).renamed({2, 3, 4}).truth_table());
  }
  {
    Assignment bad;
    bad.set(9, true);
    CHECK_THROWS_AS(hwb_oracle(2).restrict(bad), std::invalid_argument);
  }
}

TEST_CASE("restriction of the generalized function recovers hwb pointwise") {
  for (std::uint32_t n : {1u, 3u, 6u, 12u}) {
    Assignment ys;
    for (std::uint32_t j = 0; j <= n; ++j) ys.set(y_var(n, j), true);
    const FunctionOracle restricted = generalized_hwb_oracle(n).restrict(ys);
    const FunctionOracle direct = hwb_oracle(n);
    const std::uint64_t rows = std::uint64_t{1} << n;
    for (std::uint64_t r = 0; r < rows; ++r)
      CHECK(restricted.evaluate_row(r) == direct.evaluate_row(r));
  }
}

TEST_CASE("hwb equals the weight-indexed disjunction of exact counts") {
  for (std::uint32_t n : {1u, 2u, 3u, 5u, 8u, 12u}) {
    const FunctionOracle f = hwb_oracle(n);
    std::vector<FunctionOracle> exact;
    for (std::uint32_t i = 0; i <= n; ++i) exact.push_back(exact_count_oracle(n, i));
    const std::uint64_t rows = std::uint64_t{1} << n;
    for (std::uint64_t r = 0; r < rows; ++r) {
      const Assignment a = Assignment::from_row(f.scope(), r);
      bool expected = false;
      for (std::uint32_t i = 1; i <= n && !expected; ++i)
        expected = exact[i].evaluate(a) && a.value_of(i);
      CHECK(f.evaluate(a) == expected);
    }
  }
}

TEST_CASE("every assignment satisfies exactly one prime") {
  for (std::uint32_t n = 1; n <= 10; ++n) {
    std::vector<FunctionOracle> primes;
    for (const PrimeId& p : prime_family_ids(n)) primes.push_back(prime_oracle(p, n));
    std::vector<bool> satisfiable(primes.size(), false);
    const std::uint64_t rows = std::uint64_t{1} << n;
    for (std::uint64_t r = 0; r < rows; ++r) {
      int hits = 0;
      for (std::size_t i = 0; i < primes.size(); ++i)
        if (primes[i].evaluate_row(r)) {
          ++hits;
          satisfiable[i] = true;
        }
      REQUIRE(hits == 1);
    }
    for (bool sat : satisfiable) CHECK(sat);
  }
}

TEST_CASE("function specs parse the CLI syntax") {
  CHECK(parse_function_spec("hwb:6").scope().size() == 6);
  CHECK(parse_function_spec("ghwb:3").scope().size() == 7);
  CHECK(parse_function_spec("exact:5:2").model_count() == 10);
  CHECK(parse_function_spec("prime:4:p2.1").scope().size() == 4);
  CHECK_THROWS_AS(parse_function_spec("hwb"), std::invalid_argument);
  CHECK_THROWS_AS(parse_function_spec("exact:5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_function_spec("nope:3"), std::invalid_argument);
}
