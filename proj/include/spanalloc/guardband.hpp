#pragma once

#include <cstddef>
#include <vector>

#include "spanalloc/model.hpp"

namespace spanalloc {

enum class GuardbandMode {
    // Null the incoming link's channel when its residual rate is <= the previous link's.
    paper,
    // Alternate: null the incoming link's channel when its residual rate is >= the
    // previous link's, so the link left poorer keeps its edge channel.
    flipped,
};

/// One decision taken at a boundary between channels `left` and `left + 1`
/// owned by different links. Channels are zero-based.
struct GuardbandDecision {
    std::size_t left;
    std::size_t nulled_link;
    std::size_t nulled_channel;
};

struct GuardbandReport {
    AllocationMatrix input;
    AllocationMatrix output;
    RateResult rates_after;
    std::vector<GuardbandDecision> decisions;
    std::vector<double> rate_delta;  // per link, after minus before (bits/s, <= 0)
};

/// Scans channels left to right and frees one channel at every boundary where
/// two different links sit on adjacent channels. Throws InvalidInput if the
/// allocation is not orthogonal or `rates` does not match it.
GuardbandReport insert_guardbands(const AllocationMatrix& alloc, const RateResult& rates,
                                  GuardbandMode mode = GuardbandMode::paper);

/// True iff no two adjacent channels belong to different links.
bool validate_guardbands(const AllocationMatrix& alloc);

}  // namespace spanalloc
