#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace costsense {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
///
/// Stream layout used throughout the library: the 64-bit master seed is the
/// key (low word first); counter word 0 is the block index within a stream
/// and words 1..3 name the stream. A stream therefore yields up to 2^34
/// 32-bit values, and any stream can be regenerated independently of all
/// others, which makes results independent of evaluation order.
class PhiloxStream {
public:
    static constexpr std::string_view algorithm_id = "philox4x32-10";

    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    PhiloxStream(std::uint64_t seed, std::uint32_t stream_a, std::uint32_t stream_b, std::uint32_t stream_c);

    /// Raw bijection; exposed for known-answer tests.
    static Block generate(Block counter, Key key);

    std::uint32_t next_u32();
    std::uint64_t next_u64();
    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit();
    /// Uniform integer in [0, bound), bound > 0, without modulo bias.
    std::uint32_t below(std::uint32_t bound);

private:
    Key key_;
    Block counter_;
    Block buffer_{};
    unsigned used_{4};
};

/// k distinct indices drawn uniformly from [0, n), in draw order (partial
/// Fisher-Yates). k == n yields a uniformly random permutation.
std::vector<std::uint32_t> choose_without_replacement(std::uint32_t n, std::uint32_t k, PhiloxStream& rng);

}  // namespace costsense
