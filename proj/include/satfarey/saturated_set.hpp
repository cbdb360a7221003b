#pragma once

#include "satfarey/core_fractions.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <algorithm>
#include <vector>

namespace satfarey {

/// The saturated Farey level for one Q, ascending. The virtual endpoint 0/1
/// is implied and not stored.
struct SaturatedLevel {
    Int Q = 0;
    std::vector<HeightedFraction> elements;

    std::size_t size() const { return elements.size(); }
};

/// Passage from level Q-1 to level Q. inserted[k] is the mediant of
/// vanished_pairs[k]; both lists run left to right.
struct LevelDelta {
    Int Q = 0;
    std::vector<Fraction> inserted;
    std::vector<UnimodularPair> vanished_pairs;
};

/// Enumerates every reduced a/q with q <= Q-2 (plus 1/1) and keeps those of
/// height <= Q. Inverses come from one batch inversion per denominator.
SaturatedLevel build_filter(Int Q, unsigned threads = 1);

/// Mediant-insertion process started from level 3. Gaps wait in a min-heap
/// keyed by the height of their mediant; ties resolve left to right.
class IncrementalBuilder {
public:
    IncrementalBuilder();

    Int level() const { return level_; }
    std::size_t size() const { return nodes_.size() - 1; }

    /// Moves to level()+1 and returns what changed.
    LevelDelta advance();

    /// Moves to level()+1 without materialising the delta; returns Phi.
    std::size_t advance_count();

    SaturatedLevel snapshot() const;

    /// Calls f(left, right) for every adjacent pair of stored elements
    /// (0/1 excluded), left to right.
    template <class F>
    void for_each_adjacent(F&& f) const
    {
        std::uint32_t cur = nodes_[0].next;
        while (cur != kEnd) {
            const std::uint32_t nxt = nodes_[cur].next;
            if (nxt == kEnd)
                break;
            f(nodes_[cur], nodes_[nxt]);
            cur = nxt;
        }
    }

    struct Node {
        Int a;
        Int q;
        Int inv;
        Int h;
        std::uint32_t next;
    };

private:
    static constexpr std::uint32_t kEnd = 0xffffffffu;

    struct Gap {
        Int h_star;
        Int left_a;
        Int left_q;
        std::uint32_t left;
        std::uint32_t right;
    };
    struct GapAfter {
        bool operator()(const Gap& x, const Gap& y) const
        {
            if (x.h_star != y.h_star)
                return x.h_star > y.h_star;
            return x.left_a * y.left_q > y.left_a * x.left_q;
        }
    };

    void push_gap(std::uint32_t left, std::uint32_t right);
    template <class OnInsert>
    std::size_t step(OnInsert&& on_insert);
    /// Renumbers nodes in list order so traversal walks memory forwards.
    void compact();

    Int level_ = 3;
    std::vector<Node> nodes_;
    std::vector<Gap> heap_;  // binary heap under GapAfter
    std::size_t appended_ = 0;
};

SaturatedLevel build_incremental(Int Q);

struct PartitionCheck {
    bool ok = true;
    /// Index i into {0/1} + level such that (i, i+1) breaks unimodularity.
    std::optional<std::size_t> first_violation;

    explicit operator bool() const { return ok; }
};

PartitionCheck verify_modular_partition(const SaturatedLevel& level);

/// Number of elements <= beta.
Int count_interval(const SaturatedLevel& level, double beta);

/// Main term Q^2/(2 zeta(2)) log((2+2 beta)/(2+beta)).
double predicted_count(Int Q, double beta);

/// Number of reduced a/q with q + a + inv(a) == Q, counted directly.
Int phi(Int Q);

struct PhiEntry {
    Int Q;
    Int phi;
    Int S;
};

/// Phi and cumulative size for every level in [q_min, q_max], read off one
/// incremental run. S_2 = 0, so Phi(3) = 1.
std::vector<PhiEntry> phi_range(Int q_min, Int q_max);

/// Sum over i of (q_{i-1} + q_{i+1})/q_i with q_0 = 1 and wraparound to the
/// first element. Throws InvariantError on a non-integral summand.
Int index_sum(const SaturatedLevel& level);

LevelDelta level_delta(Int Q);

/// count_interval(level, 1/2) / size.
double asymmetry_ratio(const SaturatedLevel& level);

}  // namespace satfarey
