#pragma once

#include <cstdint>
#include <random>

namespace unn {

using RandomEngine = std::mt19937_64;

// splitmix64 finalizer, used to decorrelate derived seeds.
inline std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Derives an independent stream seed from a base seed plus up to three
// indices (salt, query index, object index, ...). Batch results stay
// reproducible and order-independent because every consumer owns a stream
// keyed by its identity, not by call order.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::uint64_t a = 0,
                                 std::uint64_t b = 0,
                                 std::uint64_t c = 0) noexcept {
    std::uint64_t s = mix64(base);
    s = mix64(s ^ a);
    s = mix64(s ^ b);
    s = mix64(s ^ c);
    return s;
}

inline RandomEngine make_engine(std::uint64_t seed) { return RandomEngine(seed); }

// Stream salts: one per independent consumer of randomness.
inline constexpr std::uint64_t kSaltObjectCdf    = 0x6f626a636466ull;   // per-object distance histograms
inline constexpr std::uint64_t kSaltQuerySample  = 0x71736d706cull;     // uncertain test object draws
inline constexpr std::uint64_t kSaltOutcome      = 0x6f7574636dull;     // training-set outcome draws
inline constexpr std::uint64_t kSaltNaive        = 0x6e61697665ull;     // expected-distance estimates
inline constexpr std::uint64_t kSaltPivot        = 0x7069766f74ull;     // pivot selection
inline constexpr std::uint64_t kSaltInject       = 0x696e6a656374ull;   // uncertainty injection
inline constexpr std::uint64_t kSaltFold         = 0x666f6c64ull;       // cross-validation splits
inline constexpr std::uint64_t kSaltManet        = 0x6d616e6574ull;     // scenario generation
inline constexpr std::uint64_t kSaltPower        = 0x706f776572ull;     // power labeling
inline constexpr std::uint64_t kSaltQueryGen     = 0x71676efull;        // midpoint/border query generation

} // namespace unn
