#pragma once

#include <array>
#include <cstdint>

namespace jumphedge::sim {

// Philox4x32-10 block cipher (Salmon et al., "Parallel Random Numbers:
// As Easy as 1, 2, 3", SC'11). Stateless: output is a pure function of
// (counter, key), which is what makes per-path streams reproducible
// independently of scheduling.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Inverse standard normal CDF. Acklam's rational approximation refined
// with one Halley step against erfc; absolute error < 1e-15 over (0,1).
double inverse_normal_cdf(double p);

// One random stream, keyed by (seed, stream_id). Each draw consumes one
// counter tick, so the n-th draw of a stream is identical no matter how
// many threads run or in which order paths are processed.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream_id);

    double next_uniform();      // in (0, 1]
    double next_normal();
    double next_exponential();  // unit rate

    std::uint64_t draws() const { return counter_; }
    std::uint64_t stream_id() const { return stream_; }

private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

}  // namespace jumphedge::sim
