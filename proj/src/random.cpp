#include "silmarils/random.hpp"

#include <sodium.h>

#include <algorithm>
#include <cstring>

#include "silmarils/error.hpp"

namespace silmarils {

namespace {

struct SodiumInit {
  SodiumInit() {
    if (sodium_init() < 0) throw Error(ErrorCode::IoError, "libsodium initialisation failed");
  }
};

void ensure_sodium() { static SodiumInit once; }

}  // namespace

ChaChaRng::ChaChaRng(const Seed& seed) : key_(seed) { ensure_sodium(); }

ChaChaRng ChaChaRng::from_u64(std::uint64_t seed) { return ChaChaRng(seed_from_u64(seed)); }

void ChaChaRng::refill() {
  static constexpr std::array<std::uint8_t, crypto_stream_chacha20_ietf_NONCEBYTES> kNonce{};
  buffer_.fill(0);
  crypto_stream_chacha20_ietf_xor_ic(buffer_.data(), buffer_.data(), buffer_.size(), kNonce.data(),
                                     block_counter_, key_.data());
  block_counter_ += static_cast<std::uint32_t>(buffer_.size() / 64);
  offset_ = 0;
}

void ChaChaRng::fill(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    if (offset_ == buffer_.size()) refill();
    std::size_t n = std::min(out.size() - done, buffer_.size() - offset_);
    std::memcpy(out.data() + done, buffer_.data() + offset_, n);
    offset_ += n;
    done += n;
  }
}

void SystemRng::fill(std::span<std::uint8_t> out) {
  ensure_sodium();
  randombytes_buf(out.data(), out.size());
}

void ScriptedSource::fill(std::span<std::uint8_t> out) {
  if (chunks_.empty()) {
    if (fallback_ == nullptr) throw Error(ErrorCode::PhaseViolation, "scripted randomness exhausted");
    fallback_->fill(out);
    return;
  }
  const Bytes& next = chunks_.front();
  if (next.size() != out.size()) {
    throw Error(ErrorCode::LengthMismatch, "scripted chunk has " + std::to_string(next.size()) +
                                               " bytes, draw wants " + std::to_string(out.size()));
  }
  std::copy(next.begin(), next.end(), out.begin());
  chunks_.pop_front();
}

void RecordingSource::fill(std::span<std::uint8_t> out) {
  inner_.fill(out);
  recorded_.insert(recorded_.end(), out.begin(), out.end());
}

Seed derive_seed(const Seed& parent, std::string_view label, std::uint64_t index) {
  ensure_sodium();
  crypto_auth_hmacsha512_state st;
  crypto_auth_hmacsha512_init(&st, parent.data(), parent.size());
  crypto_auth_hmacsha512_update(&st, reinterpret_cast<const unsigned char*>(label.data()), label.size());
  Bytes idx;
  append_be64(idx, index);
  crypto_auth_hmacsha512_update(&st, idx.data(), idx.size());
  std::array<std::uint8_t, crypto_auth_hmacsha512_BYTES> mac{};
  crypto_auth_hmacsha512_final(&st, mac.data());
  Seed out{};
  std::copy_n(mac.begin(), out.size(), out.begin());
  return out;
}

Seed seed_from_u64(std::uint64_t value) {
  Seed s{};
  for (int i = 0; i < 8; ++i) s[24 + i] = static_cast<std::uint8_t>(value >> (56 - 8 * i));
  return s;
}

}  // namespace silmarils
