#include "ccwlan/coded_cache.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "ccwlan/errors.hpp"

namespace ccwlan {

namespace {

constexpr unsigned kMaxProfiles = 62;

// k-subsets of [n] as masks, in lexicographic order of their sorted elements.
std::vector<SubsetMask> combinations(unsigned n, unsigned k) {
  std::vector<SubsetMask> out;
  if (k > n) return out;
  std::vector<unsigned> idx(k);
  for (unsigned i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    SubsetMask m = 0;
    for (unsigned i : idx) m |= SubsetMask{1} << i;
    out.push_back(m);
    int pos = static_cast<int>(k) - 1;
    while (pos >= 0 && idx[pos] == n - k + static_cast<unsigned>(pos)) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (unsigned j = static_cast<unsigned>(pos) + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

void require_coded(const CacheConfig& cfg, const char* what) {
  if (cfg.is_uncoded()) throw std::invalid_argument(std::string{what} + ": not defined for uncoded (L = 1) caching");
}

}  // namespace

std::uint64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  UInt128 r = 1;
  for (unsigned i = 0; i < k; ++i) {
    r = r * (n - i) / (i + 1);
    if (r > static_cast<UInt128>(UINT64_MAX)) throw std::overflow_error("binomial overflow");
  }
  return static_cast<std::uint64_t>(r);
}

CacheConfig CacheConfig::coded(unsigned profiles, unsigned t) {
  if (profiles == 0) throw InvalidScenario("number of cache profiles must be positive");
  if (profiles > kMaxProfiles) throw InvalidScenario("at most " + std::to_string(kMaxProfiles) + " cache profiles supported");
  if (t > profiles) throw InvalidScenario("t must not exceed L");
  if (profiles == 1) {
    if (t == 1) throw InvalidScenario("gamma = 1 leaves nothing to deliver");
    return uncoded(Rational{0});
  }
  CacheConfig c;
  c.profiles_ = profiles;
  c.t_ = t;
  c.gamma_ = Rational{static_cast<std::int64_t>(t), static_cast<std::int64_t>(profiles)};
  return c;
}

CacheConfig CacheConfig::from_gamma(unsigned profiles, const Rational& gamma) {
  if (profiles == 1) return uncoded(gamma);
  if (gamma < Rational{0} || gamma > Rational{1}) throw InvalidScenario("gamma must lie in [0, 1]");
  const Rational t = gamma * Rational{static_cast<std::int64_t>(profiles)};
  if (t.den() != 1)
    throw InvalidScenario("gamma * L = " + t.to_string() + " is not an integer (memory sharing is not supported)");
  return coded(profiles, static_cast<unsigned>(t.num()));
}

CacheConfig CacheConfig::uncoded(const Rational& gamma) {
  if (gamma < Rational{0} || gamma >= Rational{1}) throw InvalidScenario("uncoded caching needs 0 <= gamma < 1");
  CacheConfig c;
  c.profiles_ = 1;
  c.t_ = 0;
  c.gamma_ = gamma;
  c.uncoded_ = true;
  return c;
}

std::uint64_t CacheConfig::subpacket_count() const { return uncoded_ ? 1 : binomial(profiles_, t_); }

double CacheConfig::max_rate() const {
  if (uncoded_) return std::ceil(uncoded_rate(gamma_).to_double());
  return static_cast<double>(binomial(profiles_, t_));
}

ProfileAssignment random_profiles(std::size_t users, unsigned profiles, std::mt19937_64& rng) {
  if (profiles == 0) throw std::invalid_argument("random_profiles: need at least one profile");
  std::uniform_int_distribution<unsigned> pick{0, profiles - 1};
  ProfileAssignment out(users);
  for (auto& p : out) p = pick(rng);
  return out;
}

std::vector<SubsetMask> build_profile(const CacheConfig& cfg, unsigned profile) {
  require_coded(cfg, "build_profile");
  if (profile >= cfg.profiles()) throw std::out_of_range("build_profile: profile index out of range");
  std::vector<SubsetMask> out;
  for (SubsetMask s : combinations(cfg.profiles(), cfg.t()))
    if ((s >> profile) & 1U) out.push_back(s);
  return out;
}

std::vector<SubsetMask> all_subpackets(const CacheConfig& cfg) {
  require_coded(cfg, "all_subpackets");
  return combinations(cfg.profiles(), cfg.t());
}

std::uint64_t transmissions_needed(const CacheConfig& cfg, unsigned group_size) {
  require_coded(cfg, "transmissions_needed");
  const unsigned l = cfg.profiles();
  const unsigned t = cfg.t();
  if (group_size < 1 || group_size > l) throw std::out_of_range("group size must be in [1, L]");
  if (t >= l) throw std::invalid_argument("transmissions_needed: requires t < L");
  return binomial(l, t + 1) - binomial(l - group_size, t + 1);
}

Rational group_rate(const CacheConfig& cfg, unsigned group_size) {
  if (cfg.is_uncoded()) {
    if (group_size != 1) throw std::out_of_range("uncoded caching serves one user per AP");
    return uncoded_rate(cfg.gamma());
  }
  return Rational{static_cast<std::int64_t>(cfg.subpacket_count()),
                  static_cast<std::int64_t>(transmissions_needed(cfg, group_size))};
}

Rational uncoded_rate(const Rational& gamma) {
  if (gamma < Rational{0} || gamma >= Rational{1}) throw std::domain_error("uncoded_rate: gamma must lie in [0, 1)");
  return Rational{1} / (Rational{1} - gamma);
}

std::vector<std::size_t> Codeword::multicast_set() const {
  std::vector<std::size_t> users;
  users.reserve(payloads.size());
  for (const auto& p : payloads) users.push_back(p.user);
  return users;
}

std::vector<Codeword> build_codewords(const CacheConfig& cfg, std::span<const GroupMember> group) {
  require_coded(cfg, "build_codewords");
  const unsigned l = cfg.profiles();
  if (group.empty() || group.size() > l) throw std::invalid_argument("build_codewords: group size must be in [1, L]");
  if (cfg.t() >= l) throw std::invalid_argument("build_codewords: requires t < L");

  std::vector<const GroupMember*> by_profile(l, nullptr);
  for (const auto& m : group) {
    if (m.profile >= l) throw std::out_of_range("build_codewords: profile index out of range");
    if (by_profile[m.profile] != nullptr) throw std::invalid_argument("build_codewords: duplicate profile in group");
    by_profile[m.profile] = &m;
  }

  // Profiles without a real member are held by phantom users, which
  // contribute nothing to the transmitted XOR.
  std::vector<Codeword> out;
  for (SubsetMask s : combinations(l, cfg.t() + 1)) {
    Codeword cw;
    for (unsigned p = 0; p < l; ++p) {
      if (((s >> p) & 1U) == 0 || by_profile[p] == nullptr) continue;
      cw.payloads.push_back({by_profile[p]->user, by_profile[p]->chunk, s & ~(SubsetMask{1} << p)});
    }
    if (!cw.payloads.empty()) out.push_back(std::move(cw));
  }
  return out;
}

ChunkLibrary::ChunkLibrary(const CacheConfig& cfg, std::size_t chunk_bytes) : chunk_bytes_{chunk_bytes} {
  require_coded(cfg, "ChunkLibrary");
  const auto count = cfg.subpacket_count();
  if (chunk_bytes == 0 || chunk_bytes % count != 0)
    throw std::invalid_argument("chunk size " + std::to_string(chunk_bytes) + " is not divisible by C(L,t) = " +
                                std::to_string(count));
  subpacket_bytes_ = chunk_bytes / count;
  const auto subsets = all_subpackets(cfg);
  for (std::size_t i = 0; i < subsets.size(); ++i) rank_.emplace(subsets[i], i);
}

void ChunkLibrary::add_random(ChunkId chunk, std::mt19937_64& rng) {
  Bytes b(chunk_bytes_);
  std::uniform_int_distribution<int> byte{0, 255};
  for (auto& x : b) x = static_cast<std::uint8_t>(byte(rng));
  chunks_[chunk] = std::move(b);
}

std::span<const std::uint8_t> ChunkLibrary::subpacket(ChunkId chunk, SubsetMask index) const {
  const auto c = chunks_.find(chunk);
  if (c == chunks_.end()) throw std::out_of_range("unknown chunk " + std::to_string(chunk));
  const auto r = rank_.find(index);
  if (r == rank_.end()) throw std::out_of_range("invalid subpacket index");
  return std::span<const std::uint8_t>{c->second}.subspan(r->second * subpacket_bytes_, subpacket_bytes_);
}

std::vector<Bytes> encode_codewords(std::span<const Codeword> codewords, const ChunkLibrary& library) {
  std::vector<Bytes> out;
  out.reserve(codewords.size());
  for (const auto& cw : codewords) {
    Bytes buf(library.subpacket_bytes(), 0);
    for (const auto& p : cw.payloads) {
      const auto sp = library.subpacket(p.chunk, p.subpacket);
      for (std::size_t i = 0; i < buf.size(); ++i) buf[i] ^= sp[i];
    }
    out.push_back(std::move(buf));
  }
  return out;
}

bool verify_decodability(const CacheConfig& cfg, std::span<const Codeword> codewords, std::span<const Bytes> received,
                         std::span<const GroupMember> group, const ChunkLibrary& library) {
  require_coded(cfg, "verify_decodability");
  if (received.size() != codewords.size()) return false;

  for (const auto& member : group) {
    const SubsetMask own = SubsetMask{1} << member.profile;
    std::set<SubsetMask> recovered;
    for (std::size_t i = 0; i < codewords.size(); ++i) {
      const auto& cw = codewords[i];
      const auto mine = std::count_if(cw.payloads.begin(), cw.payloads.end(),
                                      [&](const Payload& p) { return p.user == member.user; });
      if (mine == 0) continue;
      if (mine > 1 || received[i].size() != library.subpacket_bytes()) return false;

      Bytes buf = received[i];
      const Payload* wanted = nullptr;
      for (const auto& p : cw.payloads) {
        if (p.user == member.user) {
          wanted = &p;
          continue;
        }
        // Interference must be cancellable from the member's own cache.
        if ((p.subpacket & own) == 0) return false;
        const auto sp = library.subpacket(p.chunk, p.subpacket);
        for (std::size_t b = 0; b < buf.size(); ++b) buf[b] ^= sp[b];
      }
      if ((wanted->subpacket & own) != 0 || wanted->chunk != member.chunk) return false;
      const auto truth = library.subpacket(member.chunk, wanted->subpacket);
      if (!std::equal(buf.begin(), buf.end(), truth.begin(), truth.end())) return false;
      if (!recovered.insert(wanted->subpacket).second) return false;
    }

    std::set<SubsetMask> missing;
    for (SubsetMask s : combinations(cfg.profiles(), cfg.t()))
      if ((s & own) == 0) missing.insert(s);
    if (recovered != missing) return false;
  }
  return true;
}

}  // namespace ccwlan
