#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <string_view>

#include "silmarils/bytes.hpp"

namespace silmarils {

using Seed = std::array<std::uint8_t, 32>;

/// Byte-oriented randomness source. Field sampling draws fixed-width chunks
/// from here and rejects out-of-range values.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;
};

/// Deterministic ChaCha20 keystream keyed by a 32-byte seed.
class ChaChaRng final : public RandomSource {
 public:
  explicit ChaChaRng(const Seed& seed);
  static ChaChaRng from_u64(std::uint64_t seed);

  void fill(std::span<std::uint8_t> out) override;

 private:
  void refill();

  Seed key_;
  std::uint32_t block_counter_ = 0;
  std::array<std::uint8_t, 512> buffer_{};
  std::size_t offset_ = 512;
};

/// Operating-system entropy, for non-reproducible CLI use.
class SystemRng final : public RandomSource {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

/// Replays scripted chunks. Each fill must request exactly the size of the
/// next chunk; once the script is exhausted the fallback (if any) takes over,
/// otherwise fill throws Error(PhaseViolation).
class ScriptedSource final : public RandomSource {
 public:
  explicit ScriptedSource(RandomSource* fallback = nullptr) : fallback_(fallback) {}

  void push(ByteView chunk) { chunks_.emplace_back(chunk.begin(), chunk.end()); }
  std::size_t remaining() const { return chunks_.size(); }

  void fill(std::span<std::uint8_t> out) override;

 private:
  std::deque<Bytes> chunks_;
  RandomSource* fallback_;
};

/// Forwards to an inner source and keeps every byte handed out, so a party's
/// randomness can be reported as part of its view.
class RecordingSource final : public RandomSource {
 public:
  explicit RecordingSource(RandomSource& inner) : inner_(inner) {}

  void fill(std::span<std::uint8_t> out) override;
  const Bytes& recorded() const { return recorded_; }

 private:
  RandomSource& inner_;
  Bytes recorded_;
};

/// Child seed = first 32 bytes of HMAC-SHA-512(parent, label || be64(index)).
Seed derive_seed(const Seed& parent, std::string_view label, std::uint64_t index = 0);

Seed seed_from_u64(std::uint64_t value);

}  // namespace silmarils
