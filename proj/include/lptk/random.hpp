#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace lptk {

/// Seeded generator with a fully specified output stream.
///
/// std::mt19937_64 is bit-exact across conforming standard libraries, but the
/// standard distributions are not, so uniforms, normals and index sampling
/// are derived here by hand: uniforms from the top 53 bits, normals by the
/// Marsaglia polar transform, integers by rejection.
class Rng {
public:
    static constexpr std::string_view kAlgorithm = "mt19937_64/polar-normal/v1";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform();

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound);

    double normal();

    /// k distinct indices drawn uniformly from [0, n), in draw order.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace lptk
