#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "ccwlan/rational.hpp"

namespace ccwlan {

/// Subset of the profile indices [0, L) as a bit mask (bit l = profile l+1).
using SubsetMask = std::uint64_t;
using ChunkId = std::uint64_t;
using Bytes = std::vector<std::uint8_t>;

/// Per-user cache profile, 0-based.
using ProfileAssignment = std::vector<unsigned>;

/// Binomial coefficient, zero when k > n.
std::uint64_t binomial(unsigned n, unsigned k);

/// Cache placement parameters: L profiles, t = gamma * L.
///
/// L = 1 is the uncoded (prefix caching) special case: gamma may be any
/// rational in [0, 1) and no subpacketization takes place.
class CacheConfig {
public:
  static CacheConfig coded(unsigned profiles, unsigned t);
  static CacheConfig from_gamma(unsigned profiles, const Rational& gamma);
  static CacheConfig uncoded(const Rational& gamma);

  unsigned profiles() const { return profiles_; }
  unsigned t() const { return t_; }
  const Rational& gamma() const { return gamma_; }
  bool is_uncoded() const { return uncoded_; }
  std::uint64_t subpacket_count() const;

  /// Upper bound on any instantaneous rate: C(L, t), or ceil(1 / (1 - gamma)) for L = 1.
  double max_rate() const;

private:
  CacheConfig() = default;

  unsigned profiles_ = 1;
  unsigned t_ = 0;
  Rational gamma_;
  bool uncoded_ = false;
};

/// Uniform random profile per user.
ProfileAssignment random_profiles(std::size_t users, unsigned profiles, std::mt19937_64& rng);

/// All t-subsets of [L] containing profile l (0-based), in lexicographic order.
std::vector<SubsetMask> build_profile(const CacheConfig& cfg, unsigned profile);

/// All t-subsets of [L] in lexicographic order.
std::vector<SubsetMask> all_subpackets(const CacheConfig& cfg);

/// Codewords sent to serve a group of v users with distinct profiles:
/// C(L, t+1) - C(L-v, t+1).
std::uint64_t transmissions_needed(const CacheConfig& cfg, unsigned group_size);

/// Chunks per slot delivered to each member of a group of size v.
Rational group_rate(const CacheConfig& cfg, unsigned group_size);

/// Rate of a unicast user missing a (1 - gamma) fraction of its chunk.
Rational uncoded_rate(const Rational& gamma);

struct GroupMember {
  std::size_t user = 0;
  unsigned profile = 0;  // 0-based
  ChunkId chunk = 0;
};

/// One real user's share of a codeword: subpacket `subpacket` of `chunk`.
struct Payload {
  std::size_t user = 0;
  ChunkId chunk = 0;
  SubsetMask subpacket = 0;
  friend bool operator==(const Payload&, const Payload&) = default;
};

/// XOR of the payloads' subpackets; one subpacket long.
struct Codeword {
  std::vector<Payload> payloads;
  std::vector<std::size_t> multicast_set() const;
};

/// Codewords for a feasible set, built over the set extended with phantom
/// users for each missing profile. Phantom-only codewords are dropped and
/// phantom terms stripped. Ordered by the lexicographic (t+1)-subset of
/// profiles they come from.
std::vector<Codeword> build_codewords(const CacheConfig& cfg, std::span<const GroupMember> group);

/// Chunk contents keyed by chunk id, split into C(L, t) equal subpackets.
class ChunkLibrary {
public:
  ChunkLibrary(const CacheConfig& cfg, std::size_t chunk_bytes);

  void add_random(ChunkId chunk, std::mt19937_64& rng);
  bool contains(ChunkId chunk) const { return chunks_.contains(chunk); }
  std::span<const std::uint8_t> subpacket(ChunkId chunk, SubsetMask index) const;
  std::size_t subpacket_bytes() const { return subpacket_bytes_; }

private:
  std::size_t chunk_bytes_;
  std::size_t subpacket_bytes_;
  std::unordered_map<SubsetMask, std::size_t> rank_;
  std::unordered_map<ChunkId, Bytes> chunks_;
};

/// Bytes on air for each codeword.
std::vector<Bytes> encode_codewords(std::span<const Codeword> codewords, const ChunkLibrary& library);

/// True iff every member, XOR-ing each received codeword with subpackets
/// from its own cache, recovers exactly its missing subpackets bit-exactly.
bool verify_decodability(const CacheConfig& cfg, std::span<const Codeword> codewords, std::span<const Bytes> received,
                         std::span<const GroupMember> group, const ChunkLibrary& library);

}  // namespace ccwlan
