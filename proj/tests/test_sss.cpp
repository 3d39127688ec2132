#include <map>

#include "doctest.h"
#include "silmarils/error.hpp"
#include "silmarils/sss.hpp"

using namespace silmarils;
using sss::SharePair;
using sss::Weights;

TEST_CASE("share and reconstruct vectors at p=13") {
  Prime f(13);
  Weights w{f.element(1), f.element(2)};
  SharePair pair = sss::share_with_slope(f.element(5), f.element(3), w);
  CHECK(pair.s0.to_u64() == 8);
  CHECK(pair.s1.to_u64() == 11);
  CHECK(sss::reconstruct(SharePair{f.element(8), f.element(11)}, w).to_u64() == 5);
  CHECK(sss::reconstruct(SharePair{f.zero(), f.zero()}, w).is_zero());
}

TEST_CASE("zero slope from scripted randomness gives constant shares") {
  Prime f(13);
  Weights w{f.element(4), f.element(9)};
  ScriptedSource script;
  script.push(f.zero().to_bytes());
  auto s = sss::share(f.element(6), w, script);
  CHECK(s.slope.is_zero());
  CHECK(s.shares.s0 == f.element(6));
  CHECK(s.shares.s1 == f.element(6));
}

TEST_CASE("round trip is exhaustive at p=13 over secrets, slopes and weights") {
  Prime f(13);
  for (std::uint64_t w0 = 1; w0 < 13; ++w0) {
    for (std::uint64_t w1 = 1; w1 < 13; ++w1) {
      if (w0 == w1) continue;
      Weights w{f.element(w0), f.element(w1)};
      for (std::uint64_t s = 0; s < 13; ++s) {
        for (std::uint64_t a = 0; a < 13; ++a) {
          auto pair = sss::share_with_slope(f.element(s), f.element(a), w);
          CHECK(sss::reconstruct(pair, w) == f.element(s));
          CHECK(sss::reconstructs_to_zero(pair, w) == (s == 0));
        }
      }
    }
  }
}

TEST_CASE("each share is exactly uniform and independent of the secret at p=5") {
  Prime f(5);
  Weights w{f.element(2), f.element(3)};
  for (std::uint64_t s = 0; s < 5; ++s) {
    std::map<std::uint64_t, int> m0, m1;
    for (std::uint64_t a = 0; a < 5; ++a) {
      auto pair = sss::share_with_slope(f.element(s), f.element(a), w);
      ++m0[pair.s0.to_u64()];
      ++m1[pair.s1.to_u64()];
    }
    CHECK(m0.size() == 5);
    CHECK(m1.size() == 5);
    for (auto& [v, c] : m0) CHECK(c == 1);
    for (auto& [v, c] : m1) CHECK(c == 1);
  }
}

TEST_CASE("reconstruction is linear") {
  Prime f(251);
  auto rng = ChaChaRng::from_u64(11);
  for (int i = 0; i < 2000; ++i) {
    Weights w = Weights::sample(f, rng);
    SharePair a{f.sample(rng), f.sample(rng)};
    SharePair b{f.sample(rng), f.sample(rng)};
    auto alpha = f.sample(rng);
    SharePair combo{alpha * a.s0 + b.s0, alpha * a.s1 + b.s1};
    CHECK(sss::reconstruct(combo, w) == alpha * sss::reconstruct(a, w) + sss::reconstruct(b, w));
    // w1 * V0 == w0 * V1 is the division-free zero test.
    CHECK(sss::reconstructs_to_zero(a, w) == sss::reconstruct(a, w).is_zero());
  }
}

TEST_CASE("degenerate weights are rejected") {
  Prime f(13);
  Weights same{f.element(3), f.element(3)};
  CHECK_THROWS_AS(sss::reconstruct(SharePair{f.one(), f.one()}, same), Error);
  CHECK_THROWS_AS(same.validate(), Error);
  CHECK_THROWS_AS((Weights{f.zero(), f.one()}.validate()), Error);
  auto rng = ChaChaRng::from_u64(5);
  for (int i = 0; i < 1000; ++i) CHECK_NOTHROW(Weights::sample(Prime(5), rng).validate());
}

TEST_CASE("encodings are two fixed-width elements") {
  auto f = presets::secure();
  auto rng = ChaChaRng::from_u64(9);
  Weights w = Weights::sample(*f, rng);
  CHECK(w.encode().size() == 64);
  CHECK(Weights::decode(*f, w.encode()) == w);
  SharePair p{f->sample(rng), f->sample(rng)};
  CHECK(SharePair::decode(*f, p.encode()) == p);
  CHECK_THROWS_AS(Weights::decode(*f, Bytes(63, 0)), Error);
}
