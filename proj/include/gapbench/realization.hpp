#pragma once

#include <cstdint>
#include <vector>

#include "gapbench/graph.hpp"

namespace gapbench {

enum class EdgeStatus : std::uint8_t { Blocked = 0, Live = 1 };
enum class PartialStatus : std::uint8_t { Blocked = 0, Live = 1, Unknown = 2 };

// Complete live/blocked assignment, indexed by edge id.
struct Realization {
    std::vector<EdgeStatus> status;

    bool live(int eid) const { return status[eid] == EdgeStatus::Live; }
};

// Feedback view of a realization: revealed edges keep their status, the rest
// are Unknown.
struct PartialRealization {
    std::vector<PartialStatus> status;

    static PartialRealization all_unknown(int edge_count) {
        PartialRealization p;
        p.status.assign(edge_count, PartialStatus::Unknown);
        return p;
    }
    bool known(int eid) const { return status[eid] != PartialStatus::Unknown; }
    bool live(int eid) const { return status[eid] == PartialStatus::Live; }
    bool blocked(int eid) const { return status[eid] == PartialStatus::Blocked; }
    bool consistent_with(const Realization& phi) const {
        for (std::size_t e = 0; e < status.size(); ++e) {
            if (status[e] == PartialStatus::Unknown) continue;
            if ((status[e] == PartialStatus::Live) != phi.live(static_cast<int>(e))) return false;
        }
        return true;
    }
};

// Per-vertex thresholds in (0,1] for the general threshold model.
struct ThresholdRealization {
    std::vector<double> theta;
};

// GTM feedback: a vertex is either known infected or known to have threshold
// above `level` (= local influence of its observed infected in-neighbors).
struct LevelRealization {
    std::vector<std::uint8_t> infected;  // 1 = known infected
    std::vector<double> level;           // meaningful where infected == 0

    static LevelRealization zeros(int n) {
        LevelRealization l;
        l.infected.assign(n, 0);
        l.level.assign(n, 0.0);
        return l;
    }
};

}  // namespace gapbench
