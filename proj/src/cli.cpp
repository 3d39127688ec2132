#include "silmarils/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "silmarils/stats.hpp"
#include "silmarils/strategies.hpp"
#include "silmarils/three_party.hpp"
#include "silmarils/two_party.hpp"

namespace silmarils::cli {

namespace fs = std::filesystem;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError:
      return kIo;
    case ErrorCode::MalformedSignature:
    case ErrorCode::InvalidHex:
    case ErrorCode::LengthMismatch:
    case ErrorCode::NonCanonical:
      return kMalformed;
    case ErrorCode::DegenerateExtraction:
    case ErrorCode::DegenerateWeights:
    case ErrorCode::ZeroInverse:
      return kDegenerate;
    case ErrorCode::UnknownStrategy:
    case ErrorCode::RoleMismatch:
      return kUnknownStrategy;
    default:
      return kUsage;
  }
}

namespace {

const std::vector<std::pair<std::string, std::uint64_t>>& toy_profiles() {
  static const std::vector<std::pair<std::string, std::uint64_t>> t = {
      {"toy-5", 5}, {"toy-7", 7}, {"toy-13", 13}, {"toy-251", 251}, {"toy-1009", 1009}, {"toy-65537", 65537}};
  return t;
}

}  // namespace

std::shared_ptr<const Prime> profile_prime(std::string_view profile) {
  if (profile == "secure") return presets::secure();
  for (const auto& [name, p] : toy_profiles()) {
    if (name == profile) return presets::small(p);
  }
  throw Error(ErrorCode::Usage, "unknown profile '" + std::string(profile) + "'");
}

namespace {

Bytes read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string read_text(const fs::path& path) {
  Bytes b = read_file(path);
  return std::string(b.begin(), b.end());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

Seed parse_seed(const std::string& s) {
  if (s.size() == 64) {
    Bytes b = from_hex(s);
    Seed seed{};
    std::copy(b.begin(), b.end(), seed.begin());
    return seed;
  }
  if (s.empty() || s.size() > 20 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw Error(ErrorCode::Usage, "--seed takes a decimal u64 or 64 hex digits");
  try {
    return seed_from_u64(std::stoull(s));
  } catch (const std::out_of_range&) {
    throw Error(ErrorCode::Usage, "--seed out of range");
  }
}

Seed fresh_seed() {
  SystemRng sys;
  Seed s{};
  sys.fill(s);
  return s;
}

Seed seed_or_fresh(const std::string& s) { return s.empty() ? fresh_seed() : parse_seed(s); }

struct KeyDir {
  std::string profile;
  std::shared_ptr<const Prime> prime;
  sss::Weights pk;
  std::optional<FieldElement> sk;
  std::optional<PairKey> k_sig;

  const Prime& field() const { return *prime; }

  KeyMaterial material() const {
    if (!sk) throw Error(ErrorCode::IoError, "key directory has no sk.hex");
    if (!k_sig) throw Error(ErrorCode::IoError, "key directory has no ksig.hex");
    return KeyMaterial{*sk, pk, *k_sig};
  }
  const PairKey& pair_key() const {
    if (!k_sig) throw Error(ErrorCode::IoError, "key directory has no ksig.hex");
    return *k_sig;
  }
};

KeyDir load_keys(const fs::path& dir) {
  KeyDir k;
  std::istringstream params(read_text(dir / "params.txt"));
  std::map<std::string, std::string> kv;
  for (std::string line; std::getline(params, line);) {
    auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  if (!kv.contains("profile")) throw Error(ErrorCode::MalformedSignature, "params.txt has no profile");
  k.profile = kv["profile"];
  k.prime = profile_prime(k.profile);
  if (kv.contains("p") && kv["p"] != k.prime->value().to_decimal())
    throw Error(ErrorCode::MalformedSignature, "params.txt modulus does not match its profile");
  k.pk = sss::Weights::decode(*k.prime, from_hex(read_text(dir / "pk.hex")));
  if (fs::exists(dir / "sk.hex")) {
    k.sk = k.prime->from_bytes(from_hex(read_text(dir / "sk.hex")));
    if (k.sk->is_zero()) throw Error(ErrorCode::DegenerateWeights, "secret key is zero");
  }
  if (fs::exists(dir / "ksig.hex")) k.k_sig = PairKey::decode(from_hex(read_text(dir / "ksig.hex")));
  return k;
}

FieldElement parse_element(const Prime& f, const std::string& hex) {
  Bytes b = from_hex(hex);
  if (b.size() > f.byte_width()) throw Error(ErrorCode::LengthMismatch, "field element too long");
  Bytes padded(f.byte_width() - b.size(), 0);
  append(padded, b);
  return f.from_bytes(padded);
}

void emit_signature(const Signature& sig, const std::string& out_path, std::ostream& out) {
  std::string hex = to_hex(sig.encode());
  if (out_path.empty()) {
    out << hex << "\n";
  } else {
    write_text(out_path, hex + "\n");
    out << "signature written to " << out_path << "\n";
  }
}

struct Options {
  std::string profile = "secure";
  std::string seed;
  std::string out;
  std::string keys;
  std::string msg;
  std::string sig;
  std::string receipt;
  std::string adversary = "none";
  std::string suite = "all";
  std::string hint_d, hint_s, hint_a;
  std::uint64_t trials = 0;
  std::uint64_t iterations = 2000;
  bool weak_public_r = false;
  bool no_rushing = false;
};

int cmd_keygen(const Options& o, std::ostream& out) {
  auto prime = profile_prime(o.profile);
  if (o.out.empty()) throw Error(ErrorCode::Usage, "keygen needs --out DIR");
  Seed seed = seed_or_fresh(o.seed);
  ChaChaRng rng(seed);
  auto keys = keygen(Params::generate(prime, rng), rng);
  std::error_code ec;
  fs::create_directories(o.out, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + o.out);
  const fs::path dir(o.out);
  write_text(dir / "sk.hex", to_hex(keys.encode_sk()) + "\n");
  write_text(dir / "pk.hex", to_hex(keys.encode_pk()) + "\n");
  write_text(dir / "ksig.hex", to_hex(keys.k_sig.view()) + "\n");
  write_text(dir / "params.txt", "profile=" + o.profile + "\np=" + prime->value().to_decimal() + "\n");
  out << "profile=" << o.profile << " element_bytes=" << prime->byte_width()
      << " sk_bytes=" << keys.encode_sk().size() << " pk_bytes=" << keys.encode_pk().size() << "\n";
  return kOk;
}

int cmd_sign(const Options& o, std::ostream& out, std::ostream& err) {
  KeyDir k = load_keys(o.keys);
  Bytes msg = read_file(o.msg);
  ChaChaRng rng(seed_or_fresh(o.seed));
  auto res = sign(k.material(), msg, rng);
  if (res.signature.s[3].is_zero()) err << "warning: sigma4 = 0, this signature will be rejected\n";
  emit_signature(res.signature, o.out, out);
  return kOk;
}

Signature load_signature(const Prime& f, const std::string& path) {
  return Signature::decode(f, from_hex(read_text(path)));
}

int cmd_verify(const Options& o, std::ostream& out) {
  KeyDir k = load_keys(o.keys);
  Bytes msg = read_file(o.msg);
  Signature sig = load_signature(k.field(), o.sig);
  bool ok;
  if (o.weak_public_r) {
    ok = verify_public_r(k.pk, msg, sig);
  } else if (!o.receipt.empty()) {
    ok = verify_with_receipt(k.pk, parse_element(k.field(), o.receipt), sig);
  } else {
    ok = verify(k.pk, k.pair_key(), msg, sig);
  }
  out << (ok ? "accept" : "reject") << "\n";
  return ok ? kOk : kReject;
}

int cmd_forge_dv(const Options& o, std::ostream& out) {
  KeyDir k = load_keys(o.keys);
  Bytes msg = read_file(o.msg);
  ChaChaRng rng(seed_or_fresh(o.seed));
  emit_signature(dv_forge(k.pair_key(), k.pk, msg, rng), o.out, out);
  return kOk;
}

int cmd_forge_public_r(const Options& o, std::ostream& out) {
  KeyDir k = load_keys(o.keys);
  Bytes msg = read_file(o.msg);
  ChaChaRng rng(seed_or_fresh(o.seed));
  emit_signature(public_r_forge(k.pk, msg, rng), o.out, out);
  return kOk;
}

int cmd_extract(const Options& o, std::ostream& out) {
  KeyDir k = load_keys(o.keys);
  Bytes msg = read_file(o.msg);
  Signature sig = load_signature(k.field(), o.sig);
  const Prime& f = k.field();
  FieldElement r = o.receipt.empty() ? derive_receipt(k.pair_key(), msg, f).receipt : parse_element(f, o.receipt);
  ExtractionFamily family(k.pk, r, sig);

  int hints = !o.hint_d.empty() + !o.hint_s.empty() + !o.hint_a.empty();
  if (hints > 1) throw Error(ErrorCode::Usage, "give at most one of --hint-d, --hint-s, --hint-a");
  out << "r=" << r.to_hex() << "\n";
  if (!sig.s[2].is_zero()) out << "ratio=" << family.ratio().to_hex() << "\n";
  if (hints == 0) {
    out << "one free parameter remains; pin it with --hint-d, --hint-s or --hint-a\n";
    return kOk;
  }
  ExtractionHint hint = !o.hint_d.empty()   ? ExtractionHint{HintD{parse_element(f, o.hint_d)}}
                        : !o.hint_s.empty() ? ExtractionHint{HintS{parse_element(f, o.hint_s)}}
                                            : ExtractionHint{HintA{parse_element(f, o.hint_a)}};
  ExtractedParams p = family.pin(hint);
  out << "d=" << p.d.to_hex() << "\n"
      << "s=" << p.s.to_hex() << "\n"
      << "a=" << p.a.to_hex() << "\n"
      << "u0=" << p.u0.to_hex() << "\n"
      << "u1=" << p.u1.to_hex() << "\n"
      << "share0=" << p.share0.to_hex() << "\n"
      << "share1=" << p.share1.to_hex() << "\n";
  return kOk;
}

int cmd_sim3p(const Options& o, std::ostream& out) {
  auto prime = profile_prime(o.profile);
  strategy_info(o.adversary);
  const std::uint64_t trials = o.trials == 0 ? 1 : o.trials;
  Seed root = seed_or_fresh(o.seed);
  ChaChaRng key_rng(derive_seed(root, "cli/keys"));
  auto keys = keygen(Params::generate(prime, key_rng), key_rng);
  Bytes msg = o.msg.empty() ? to_bytes("sim3p") : read_file(o.msg);
  SessionOptions opts;
  opts.rushing = o.no_rushing ? Rushing::None : Rushing::Weak;

  std::ofstream log;
  if (!o.out.empty()) {
    log.open(o.out, std::ios::trunc);
    if (!log) throw Error(ErrorCode::IoError, "cannot write " + o.out);
  }

  std::uint64_t z2_ok = 0, z3_ok = 0, z3_bottom = 0, z3_other = 0, mismatch = 0, interp_ok = 0;
  std::map<std::string, std::uint64_t> arms;
  for (std::uint64_t i = 0; i < trials; ++i) {
    auto adv = make_strategy(o.adversary);
    auto run = run_three_party(keys, msg, adv.get(), stats::trial_seed(root, i), opts);
    const auto& oc = run.outcome;
    if (oc.z2 && *oc.z2 == oc.x) ++z2_ok;
    if (!oc.z3) {
      ++z3_bottom;
    } else if (*oc.z3 == oc.x) {
      ++z3_ok;
    } else {
      ++z3_other;
    }
    if (oc.z2 && oc.z2 != oc.z3) ++mismatch;
    if (oc.interpreted.value_or(false)) ++interp_ok;
    ++arms[std::string(arm_name(oc.arm))];
    if (log.is_open()) log << "session=" << i << " arm=" << arm_name(oc.arm) << "\n" << run.record.log();
  }
  out << "profile=" << o.profile << " adversary=" << o.adversary
      << " rushing=" << (o.no_rushing ? "none" : "weak") << " trials=" << trials << "\n";
  out << "z2_equals_x=" << z2_ok << "\n"
      << "z3_equals_x=" << z3_ok << "\n"
      << "z3_bottom=" << z3_bottom << "\n"
      << "z3_other=" << z3_other << "\n"
      << "z2_ne_z3=" << mismatch << "\n"
      << "interpreted_accept=" << interp_ok << "\n";
  for (const auto& [name, n] : arms) out << "arm." << name << "=" << n << "\n";
  if (!o.out.empty()) out << "transcript written to " << o.out << "\n";
  return kOk;
}

int cmd_stats(const Options& o, std::ostream& out) {
  auto prime = profile_prime(o.profile);
  const std::uint64_t trials = o.trials == 0 ? 100000 : o.trials;
  Seed root = seed_or_fresh(o.seed);
  stats::Config cfg{root, o.no_rushing ? Rushing::None : Rushing::Weak};
  auto rows = stats::run_suite(*prime, o.suite, trials, cfg);
  std::size_t passed = 0;
  for (const auto& row : rows) {
    out << row.line << "\n";
    passed += row.pass;
  }
  out << "summary suite=" << o.suite << " profile=" << o.profile << " seed=" << to_hex(root) << " passed=" << passed
      << "/" << rows.size() << "\n";
  return passed == rows.size() ? kOk : kReject;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

int cmd_bench(const Options& o, std::ostream& out) {
  auto prime = profile_prime(o.profile);
  if (o.iterations == 0) throw Error(ErrorCode::Usage, "--iterations must be positive");
  ChaChaRng rng(seed_or_fresh(o.seed));
  auto keys = keygen(Params::generate(prime, rng), rng);
  const Bytes msg = to_bytes("bench");

  OpCountScope sign_scope;
  auto probe = sign_until_valid(keys, msg, rng);
  const OpCounts sign_ops = sign_scope.delta();
  OpCountScope verify_scope;
  const bool ok = verify(keys.pk, keys.k_sig, msg, probe.signature);
  const OpCounts verify_ops = verify_scope.delta();

  using clock = std::chrono::steady_clock;
  std::vector<double> sign_ns, verify_ns;
  sign_ns.reserve(o.iterations);
  verify_ns.reserve(o.iterations);
  std::uint64_t accepted = 0;
  for (std::uint64_t i = 0; i < o.iterations; ++i) {
    auto t0 = clock::now();
    auto res = sign(keys, msg, rng);
    auto t1 = clock::now();
    accepted += verify(keys.pk, keys.k_sig, msg, res.signature);
    auto t2 = clock::now();
    sign_ns.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count());
    verify_ns.push_back(std::chrono::duration<double, std::nano>(t2 - t1).count());
  }

  out << "profile=" << o.profile << " p_bits=" << prime->bits() << " element_bytes=" << prime->byte_width() << "\n";
  out << "sk_bytes=" << keys.encode_sk().size() << "\n"
      << "pk_bytes=" << keys.encode_pk().size() << "\n"
      << "sig_bytes=" << probe.signature.encode().size() << "\n";
  if (kOpCountingEnabled) {
    out << "sign_mul=" << sign_ops.mul << " sign_inv=" << sign_ops.inv << "\n"
        << "verify_mul=" << verify_ops.mul << " verify_inv=" << verify_ops.inv << "\n";
  } else {
    out << "op counting disabled at build time\n";
  }
  out << "probe_verify=" << (ok ? "accept" : "reject") << "\n";
  out << "iterations=" << o.iterations << " accepted=" << accepted << "\n";
  out << "sign_median_us=" << median(sign_ns) / 1000 << "\n"
      << "verify_median_us=" << median(verify_ns) / 1000 << "\n";
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"SILMARILS signatures and three-party transfer simulator", "silmarils"};
  app.require_subcommand(1);

  std::string profiles = "secure";
  for (const auto& [name, p] : toy_profiles()) profiles += ", " + name;

  auto add_profile = [&](CLI::App* c) { c->add_option("--profile", o.profile, "One of: " + profiles); };
  auto add_seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "Decimal u64 or 64 hex digits"); };
  auto add_keys = [&](CLI::App* c) { c->add_option("--keys", o.keys, "Key directory")->required(); };
  auto add_msg = [&](CLI::App* c, bool req) {
    auto opt = c->add_option("--msg", o.msg, "Message file");
    if (req) opt->required();
  };
  auto add_sig = [&](CLI::App* c) { c->add_option("--sig", o.sig, "Signature file (hex)")->required(); };

  auto* keygen_cmd = app.add_subcommand("keygen", "Generate a key directory");
  add_profile(keygen_cmd);
  add_seed(keygen_cmd);
  keygen_cmd->add_option("--out", o.out, "Output directory")->required();

  auto* sign_cmd = app.add_subcommand("sign", "Sign a message");
  add_keys(sign_cmd);
  add_msg(sign_cmd, true);
  add_seed(sign_cmd);
  sign_cmd->add_option("--out", o.out, "Signature output file");

  auto* verify_cmd = app.add_subcommand("verify", "Verify a signature (exit 0 accept, 1 reject)");
  add_keys(verify_cmd);
  add_msg(verify_cmd, true);
  add_sig(verify_cmd);
  verify_cmd->add_option("--receipt", o.receipt, "Use this receipt instead of deriving it");
  verify_cmd->add_flag("--weak-public-r", o.weak_public_r, "Use the weakened public-receipt verifier");

  auto* dv_cmd = app.add_subcommand("forge-dv", "Simulate a signature from the pair key alone");
  add_keys(dv_cmd);
  add_msg(dv_cmd, true);
  add_seed(dv_cmd);
  dv_cmd->add_option("--out", o.out, "Signature output file");

  auto* extract_cmd = app.add_subcommand("extract", "Recover the hidden signing parameters");
  add_keys(extract_cmd);
  add_msg(extract_cmd, true);
  add_sig(extract_cmd);
  extract_cmd->add_option("--receipt", o.receipt, "Use this receipt instead of deriving it");
  extract_cmd->add_option("--hint-d", o.hint_d, "Pin d (hex)");
  extract_cmd->add_option("--hint-s", o.hint_s, "Pin K' (hex)");
  extract_cmd->add_option("--hint-a", o.hint_a, "Pin the slope a_K (hex)");

  auto* public_cmd = app.add_subcommand("forge-public-r", "Forge against the public-receipt verifier");
  add_keys(public_cmd);
  add_msg(public_cmd, true);
  add_seed(public_cmd);
  public_cmd->add_option("--out", o.out, "Signature output file");

  auto* sim_cmd = app.add_subcommand("sim3p", "Run three-party sessions");
  add_profile(sim_cmd);
  add_seed(sim_cmd);
  add_msg(sim_cmd, false);
  sim_cmd->add_option("--adversary", o.adversary, "Strategy name");
  sim_cmd->add_option("--trials", o.trials, "Number of sessions (default 1)");
  sim_cmd->add_option("--out", o.out, "Transcript log file");
  sim_cmd->add_flag("--no-rushing", o.no_rushing, "Deliver round messages only after every party acted");

  auto* stats_cmd = app.add_subcommand("stats", "Run a statistics suite (exit 1 if any row fails)");
  add_profile(stats_cmd);
  add_seed(stats_cmd);
  stats_cmd->add_option("--suite", o.suite, "correctness, unforgeability, transferability, secrecy, core or all");
  stats_cmd->add_option("--trials", o.trials, "Monte Carlo trials per row (default 100000)");
  stats_cmd->add_flag("--no-rushing", o.no_rushing, "Deliver round messages only after every party acted");

  auto* bench_cmd = app.add_subcommand("bench", "Sizes, operation counts and timings");
  add_profile(bench_cmd);
  add_seed(bench_cmd);
  bench_cmd->add_option("--iterations", o.iterations, "Timed sign/verify pairs (default 2000)");

  auto* list_cmd = app.add_subcommand("strategies", "List adversary strategies");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (keygen_cmd->parsed()) return cmd_keygen(o, out);
    if (sign_cmd->parsed()) return cmd_sign(o, out, err);
    if (verify_cmd->parsed()) return cmd_verify(o, out);
    if (dv_cmd->parsed()) return cmd_forge_dv(o, out);
    if (extract_cmd->parsed()) return cmd_extract(o, out);
    if (public_cmd->parsed()) return cmd_forge_public_r(o, out);
    if (sim_cmd->parsed()) return cmd_sim3p(o, out);
    if (stats_cmd->parsed()) return cmd_stats(o, out);
    if (bench_cmd->parsed()) return cmd_bench(o, out);
    if (list_cmd->parsed()) {
      for (const auto& s : strategies()) {
        out << s.name << " role=" << (s.role ? role_name(*s.role) : "none") << " bound=" << s.bound << "  "
            << s.summary << "\n";
      }
      return kOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return kUsage;
}

}  // namespace silmarils::cli
