#include <cmath>
#include <vector>

#include "doctest.h"
#include "silmarils/error.hpp"
#include "silmarils/field.hpp"

using namespace silmarils;

namespace {

// Bit-serial double-and-add modular multiply. Shares nothing with the
// Montgomery code path it checks.
U256 slow_mulmod(const U256& a, const U256& b, const U256& p) {
  auto add_mod = [&](const U256& x, const U256& y) {
    U256 s;
    unsigned __int128 carry = 0;
    for (int i = 0; i < 4; ++i) {
      unsigned __int128 t = static_cast<unsigned __int128>(x.limb[i]) + y.limb[i] + carry;
      s.limb[i] = static_cast<std::uint64_t>(t);
      carry = t >> 64;
    }
    if (carry != 0 || !(s < p)) {
      unsigned __int128 borrow = 0;
      for (int i = 0; i < 4; ++i) {
        unsigned __int128 t = static_cast<unsigned __int128>(s.limb[i]) - p.limb[i] - borrow;
        s.limb[i] = static_cast<std::uint64_t>(t);
        borrow = (t >> 64) & 1;
      }
    }
    return s;
  };
  U256 acc;
  for (int i = 255; i >= 0; --i) {
    acc = add_mod(acc, acc);
    if (b.bit(static_cast<unsigned>(i))) acc = add_mod(acc, a);
  }
  return acc;
}

}  // namespace

TEST_CASE("small-prime arithmetic vectors") {
  Prime f(13);
  CHECK((f.element(7) + f.element(9)).to_u64() == 3);
  CHECK((f.element(7) * f.element(8)).to_u64() == 4);
  CHECK(f.element(5).inverse().to_u64() == 8);
  CHECK(f.one().inverse() == f.one());
  CHECK_THROWS_AS(f.zero().inverse(), Error);
  try {
    (void)f.zero().inverse();
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroInverse);
  }
  for (std::uint64_t a = 0; a < 13; ++a) {
    auto x = f.element(a);
    CHECK(x + f.zero() == x);
    CHECK(x + f.element((13 - a) % 13) == f.zero());
    CHECK(x * f.one() == x);
    CHECK((x * f.zero()).is_zero());
  }
}

TEST_CASE("field axioms hold exhaustively at p=13") {
  Prime f(13);
  std::vector<FieldElement> all;
  for (std::uint64_t v = 0; v < 13; ++v) all.push_back(f.element(v));
  for (const auto& a : all) {
    CHECK(a.value() < f.value());
    if (!a.is_zero()) CHECK(a * a.inverse() == f.one());
    for (const auto& b : all) {
      CHECK(a + b == b + a);
      CHECK(a * b == b * a);
      CHECK((a - b) + b == a);
      CHECK((a * b).value() < f.value());
      for (const auto& c : all) {
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
      }
    }
  }
}

TEST_CASE("inverse is exhaustive at every small preset up to 257") {
  for (std::uint64_t p : {3ULL, 5ULL, 7ULL, 13ULL, 251ULL, 257ULL}) {
    Prime f(p);
    for (std::uint64_t v = 1; v < p; ++v) CHECK(f.element(v) * f.element(v).inverse() == f.one());
  }
}

TEST_CASE("prime validation") {
  CHECK_THROWS_AS(Prime(1), Error);
  CHECK_THROWS_AS(Prime(2), Error);
  CHECK_THROWS_AS(Prime(15), Error);
  CHECK_THROWS_AS(Prime(65535), Error);
  CHECK_NOTHROW(Prime(65537));
  CHECK_NOTHROW(Prime(4294967311ULL));                    // first prime above 2^32
  CHECK_THROWS_AS(Prime(4294967297ULL), Error);           // 641 * 6700417
  CHECK_NOTHROW(Prime(U256::from_hex("ffffffffffffffc5")));  // 2^64 - 59
  CHECK_THROWS_AS(Prime(U256::from_hex("ffffffffffffffc7")), Error);
  // 2^255 - 21 is divisible by 3.
  CHECK_THROWS_AS(Prime(U256::from_hex("7fffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffeb")), Error);
  auto secure = presets::secure();
  CHECK(secure->bits() == 255);
  CHECK(secure->byte_width() == 32);
  CHECK(Prime(13).byte_width() == 1);
  CHECK(Prime(65537).byte_width() == 3);
}

TEST_CASE("secure prime matches frozen wide-integer vectors") {
  auto f = presets::secure();
  auto a = f->element(U256::from_hex("100000000000000000000000000000000000000000000003039"));
  auto b = f->element(U256::from_hex("359ba2b98ca11d6864a331b45ae7114c01ffbdcf60cc16e692fb63c6e219"));
  CHECK((a * b).value() == U256::from_hex("70ac198dcc909e6327121bcf6d137b0e993c9ee8ead11e4d9d31d2db4a0b52e8"));
  CHECK(a.inverse().value() == U256::from_hex("71102662a84721761a3eb72316725db33bb76fda109c66c2becc34f47b31e357"));

  Bytes wide(64);
  for (int i = 0; i < 64; ++i) wide[i] = static_cast<std::uint8_t>(i + 1);
  CHECK(f->reduce_wide(wide).value() ==
        U256::from_hex("476e95bce40b325980a7cef61d446b92b9e1082f567da4cbf31a41688fb6de00"));
  CHECK(Prime(13).reduce_wide(wide).to_u64() == 11);
  CHECK(Prime(251).reduce_wide(wide).to_u64() == 244);
}

TEST_CASE("montgomery multiply agrees with bit-serial oracle at 256 bits") {
  auto f = presets::secure();
  // A 256-bit prime with the top bit set exercises the overflow branch.
  Prime top(U256::from_hex("ffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffff43"));
  auto rng = ChaChaRng::from_u64(7);
  for (const Prime* field : std::vector<const Prime*>{f.get(), &top}) {
    for (int i = 0; i < 300; ++i) {
      auto a = field->sample(rng);
      auto b = field->sample(rng);
      CHECK((a * b).value() == slow_mulmod(a.value(), b.value(), field->value()));
      CHECK((a + b) - b == a);
      if (!a.is_zero()) CHECK(a * a.inverse() == field->one());
    }
  }
}

TEST_CASE("reduce_wide edge cases") {
  Prime f(13);
  CHECK(f.reduce_wide(Bytes(64, 0)).is_zero());
  Bytes enc(64, 0);
  enc[63] = 13;
  CHECK(f.reduce_wide(enc).is_zero());
  enc[63] = 27;
  CHECK(f.reduce_wide(enc).to_u64() == 1);
  CHECK_THROWS_AS(f.reduce_wide(Bytes(63, 0)), Error);

  auto s = presets::secure();
  auto pbytes = s->value().to_be_bytes(32);
  Bytes wide(32, 0);
  wide.insert(wide.end(), pbytes.begin(), pbytes.end());
  CHECK(s->reduce_wide(wide).is_zero());
}

TEST_CASE("serialization is fixed width and canonical") {
  Prime f(251);
  auto x = f.element(200);
  CHECK(x.to_bytes() == Bytes{200});
  CHECK(f.from_bytes(Bytes{200}) == x);
  CHECK_THROWS_AS(f.from_bytes(Bytes{251}), Error);
  CHECK_THROWS_AS(f.from_bytes(Bytes{1, 2}), Error);
  auto s = presets::secure();
  auto rng = ChaChaRng::from_u64(3);
  for (int i = 0; i < 50; ++i) {
    auto e = s->sample(rng);
    CHECK(e.to_bytes().size() == 32);
    CHECK(s->from_bytes(e.to_bytes()) == e);
  }
}

TEST_CASE("elements of different moduli never mix") {
  Prime a(13), b(251);
  CHECK_THROWS_AS((void)(a.one() + b.one()), Error);
  CHECK_THROWS_AS((void)(a.one() * b.one()), Error);
  CHECK_THROWS_AS((void)(a.one() == b.one()), Error);
  Prime a2(13);
  CHECK(a.one() + a2.one() == a.element(2));
  CHECK_THROWS_AS((void)(FieldElement{} + a.one()), Error);
}

TEST_CASE("sample is uniform at p=13 (chi-square and 5 sigma)") {
  Prime f(13);
  auto rng = ChaChaRng::from_u64(2024);
  const int n = 100000;
  std::vector<int> counts(13, 0);
  for (int i = 0; i < n; ++i) ++counts[f.sample(rng).to_u64()];
  const double expected = n / 13.0;
  const double sigma = std::sqrt(n * (1.0 / 13) * (12.0 / 13));
  double chi2 = 0;
  for (int c : counts) {
    CHECK(std::abs(c - expected) <= 5 * sigma);
    chi2 += (c - expected) * (c - expected) / expected;
  }
  CHECK(chi2 < 39.13);  // 99.99% quantile, 12 degrees of freedom
}

TEST_CASE("sample_unit never returns zero") {
  Prime three(3);
  auto rng = ChaChaRng::from_u64(1);
  for (int i = 0; i < 1000; ++i) {
    auto u = three.sample_unit(rng);
    CHECK(!u.is_zero());
  }
  Prime f(13);
  bool saw_zero = false;
  for (int i = 0; i < 1000000; ++i) saw_zero |= f.sample_unit(rng).is_zero();
  CHECK_FALSE(saw_zero);
}

TEST_CASE("operation counter") {
  Prime f(13);
  OpCountScope scope;
  auto x = f.element(2) * f.element(4);
  x = x + f.one();
  (void)x.inverse();
  if constexpr (kOpCountingEnabled) {
    CHECK(scope.delta().mul == 1);
    CHECK(scope.delta().add == 1);
    CHECK(scope.delta().inv == 1);
  }
}
