#include "silmarils/bytes.hpp"

#include <cctype>

#include "silmarils/error.hpp"

namespace silmarils {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidPrime: return "InvalidPrime";
    case ErrorCode::ModulusMismatch: return "ModulusMismatch";
    case ErrorCode::ZeroInverse: return "ZeroInverse";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NonCanonical: return "NonCanonical";
    case ErrorCode::DegenerateWeights: return "DegenerateWeights";
    case ErrorCode::MalformedSignature: return "MalformedSignature";
    case ErrorCode::DegenerateExtraction: return "DegenerateExtraction";
    case ErrorCode::MissingSetup: return "MissingSetup";
    case ErrorCode::MissingNonce: return "MissingNonce";
    case ErrorCode::PhaseViolation: return "PhaseViolation";
    case ErrorCode::ScheduleViolation: return "ScheduleViolation";
    case ErrorCode::AuthenticationViolation: return "AuthenticationViolation";
    case ErrorCode::EmptyExperiment: return "EmptyExperiment";
    case ErrorCode::UnknownStrategy: return "UnknownStrategy";
    case ErrorCode::RoleMismatch: return "RoleMismatch";
    case ErrorCode::PrimeTooLarge: return "PrimeTooLarge";
    case ErrorCode::InvalidHex: return "InvalidHex";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::Usage: return "Usage";
  }
  return "Unknown";
}

std::string to_hex(ByteView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (auto b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Bytes from_hex(std::string_view hex) {
  while (!hex.empty() && std::isspace(static_cast<unsigned char>(hex.front()))) hex.remove_prefix(1);
  while (!hex.empty() && std::isspace(static_cast<unsigned char>(hex.back()))) hex.remove_suffix(1);
  if (hex.size() % 2 != 0) throw Error(ErrorCode::InvalidHex, "odd number of hex digits");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = hex_value(hex[2 * i]);
    int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw Error(ErrorCode::InvalidHex, "non-hex digit");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

void append_be64(Bytes& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void append_be32(Bytes& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

std::uint64_t read_be64(ByteView in) {
  if (in.size() < 8) throw Error(ErrorCode::LengthMismatch, "need 8 bytes");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | in[i];
  return v;
}

std::uint32_t read_be32(ByteView in) {
  if (in.size() < 4) throw Error(ErrorCode::LengthMismatch, "need 4 bytes");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v = (v << 8) | in[i];
  return v;
}

}  // namespace silmarils
