#include "support.hpp"

#include "properties.hpp"

namespace {

constexpr std::size_t kCases = 250;

void expect(const properties::Outcome& o) {
  INFO(o.name << ": " << o.failures << " of " << o.cases << " cases failed; " << o.first_failure);
  CHECK(o.cases == kCases);
  CHECK(o.ok());
}

}  // namespace

TEST_CASE("property: chunks partition the token stream") {
  expect(properties::chunk_partition(testing::repo(), kCases, 101));
}

TEST_CASE("property: raising the threshold never adds matches") {
  expect(properties::threshold_monotonicity(testing::repo(), kCases, 202));
}

TEST_CASE("property: merging conserves matched pairs") {
  expect(properties::merge_conservation(testing::repo(), kCases, 303));
}

TEST_CASE("property: normalization is idempotent and offset-preserving") {
  expect(properties::normalization_idempotent(testing::repo(), kCases, 404));
}

TEST_CASE("property: indexes survive persist and load") {
  const auto dir = testing::scratch("prop-index");
  expect(properties::index_round_trip(testing::repo(), dir, kCases, 505));
  std::filesystem::remove_all(dir);
}

TEST_CASE("property: parallel kernels equal their serial twins") {
  expect(properties::kernels_match_serial(kCases, 606));
}
