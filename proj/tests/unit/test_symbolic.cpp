#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dynlab/symbolic.hpp"
#include "../oracles.hpp"

using namespace dynlab;

TEST_CASE("languages") {
  CHECK(language(Subshift::full(2), 3).size() == 8);
  CHECK(language(Subshift::sft(2, {"11"}), 3) == std::vector<Word>{"000", "001", "010", "100", "101"});
  CHECK(language(Subshift::substitution(2, {"01", "10"}), 2) == std::vector<Word>{"00", "01", "10", "11"});
}

TEST_CASE("complexity profiles") {
  const auto cycle = Subshift::sft(3, {"00", "02", "10", "11", "21", "22"});
  for (std::size_t p : complexity_profile(cycle, 8)) CHECK(p == 3);

  const auto sturm = Subshift::sturmian(ContinuedFraction::from_value(std::numbers::sqrt2_v<long double> - 1.0L));
  const auto prof = complexity_profile(sturm, 12);
  const std::string w = oracle::mechanical_word(std::numbers::sqrt2_v<long double> - 1.0L, 0.123L, 20000);
  for (std::size_t n = 1; n <= 12; ++n) {
    CHECK(prof[n - 1] == n + 1);
    CHECK(oracle::factor_count(w, n) == n + 1);
  }

  const auto morse = complexity_profile(morse_generator(), 4);
  const std::string m = oracle::morse_prefix(1 << 12);
  CHECK(morse == std::vector<std::size_t>{2, 4, 6, 10});
  for (std::size_t n = 1; n <= 4; ++n) CHECK(oracle::factor_count(m, n) == morse[n - 1]);
}

TEST_CASE("expansivity") {
  CHECK(expansivity_constant(Subshift::full(2)) == 0.5);
  CHECK(expansivity_constant(Subshift::sft(2, {"11"})) == 0.5);
  CHECK_FALSE(expansivity_constant(Subshift::full(1)).has_value());
}

TEST_CASE("countability") {
  CHECK(classify_countability(Subshift::sft(2, {"11"}), 32).countability == Countability::uncountable);
  const auto cycle = classify_countability(Subshift::sft(3, {"00", "02", "10", "11", "21", "22"}), 32);
  CHECK(cycle.countability == Countability::countable);
  CHECK(cycle.rn == RNVerdict::rn);
  const auto morse = classify_countability(morse_generator(), 64);
  CHECK(morse.countability == Countability::uncountable);
  CHECK(morse.rn == RNVerdict::not_rn);
}

TEST_CASE("recurrent points of RN subshifts are periodic") {
  const auto check = recurrent_periodicity_check(Subshift::sft(3, {"00", "02", "10", "11", "21", "22"}), 32);
  CHECK(check.passed());
  CHECK(check.periodic >= 1);
  CHECK_THROWS_AS(recurrent_periodicity_check(Subshift::sft(2, {"11"}), 32), PreconditionError);
}

TEST_CASE("Thue-Morse generator") {
  const int expected[] = {0, 1, 1, 0, 1, 0, 0, 1};
  for (int n = 0; n < 8; ++n) CHECK(morse_symbol(n) == expected[n]);
  const std::string prefix = oracle::morse_prefix(1024);
  for (int n = 0; n < 1024; ++n) CHECK(morse_symbol(n) == prefix[static_cast<std::size_t>(n)] - '0');
  CHECK(morse_symbol(-1) == morse_symbol(0));
}

TEST_CASE("continued fractions") {
  const auto g = ContinuedFraction::golden(30);
  CHECK(static_cast<double>(g.value()) == doctest::Approx((std::sqrt(5.0) - 1) / 2));
  const auto conv = g.convergents();
  CHECK(conv[5].second == 8);
  CHECK_THROWS_AS(ContinuedFraction::from_value(0.25L), InputError);
}

TEST_CASE("undeclared explicit generators stay unknown") {
  ExplicitGenerator gen;
  gen.fn = [](std::int64_t n) { return n == 0 ? 1 : 0; };
  gen.label = "single one";
  const auto bare = Subshift::explicit_generator(2, gen);
  const auto verdict = classify_countability(bare, 32);
  CHECK(verdict.countability == Countability::unknown);
  CHECK(verdict.rn == RNVerdict::unknown);
  CHECK_THROWS_AS(language(bare, 3), InputError);
  gen.tails = TailDeclaration{-1, 1, 1, 1};
  const auto sub = Subshift::explicit_generator(2, gen);
  CHECK(classify_countability(sub, 32).rn == RNVerdict::rn);
}
