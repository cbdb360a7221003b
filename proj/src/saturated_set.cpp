#include "satfarey/saturated_set.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

namespace satfarey {

namespace {

void require_level(Int Q, Int min_q = 3)
{
    if (Q < min_q)
        throw PreconditionError("level Q must be >= " + std::to_string(min_q) + ", got " +
                                std::to_string(Q));
    if (Q > kMaxLevel)
        throw PreconditionError("level Q exceeds the supported maximum " + std::to_string(kMaxLevel));
}

std::vector<Int> distinct_prime_factors(Int n)
{
    std::vector<Int> out;
    for (Int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0)
                n /= p;
        }
    }
    if (n > 1)
        out.push_back(n);
    return out;
}

// Appends every a/q with a <= a_max, gcd(a, q) = 1 and height <= Q.
// All inverses mod q come from one extended-Euclid call (prefix products).
void collect_denominator(Int q, Int Q, std::vector<HeightedFraction>& out,
                         std::vector<char>& coprime, std::vector<Int>& units, std::vector<Int>& prefix)
{
    const Int a_max = std::min(q - 1, Q - q - 1);
    if (a_max < 1)
        return;

    coprime.assign(static_cast<std::size_t>(a_max) + 1, 1);
    for (Int p : distinct_prime_factors(q))
        for (Int m = p; m <= a_max; m += p)
            coprime[static_cast<std::size_t>(m)] = 0;

    units.clear();
    for (Int a = 1; a <= a_max; ++a)
        if (coprime[static_cast<std::size_t>(a)])
            units.push_back(a);

    prefix.resize(units.size());
    Int acc = 1;
    for (std::size_t k = 0; k < units.size(); ++k) {
        acc = acc * units[k] % q;
        prefix[k] = acc;
    }
    Int inv_acc = mod_inverse(acc, q);

    const std::size_t first = out.size();
    for (std::size_t k = units.size(); k-- > 0;) {
        const Int a = units[k];
        const Int inv = k == 0 ? inv_acc : inv_acc * prefix[k - 1] % q;
        inv_acc = inv_acc * a % q;
        const Int h = q + a + inv;
        if (h <= Q)
            out.push_back({Fraction::make(a, q), inv, h});
    }
    std::reverse(out.begin() + static_cast<std::ptrdiff_t>(first), out.end());
}

}  // namespace

SaturatedLevel build_filter(Int Q, unsigned threads)
{
    require_level(Q);
    SaturatedLevel level;
    level.Q = Q;

    const Int q_max = Q - 2;
    auto chunks = detail::parallel_chunks<std::vector<HeightedFraction>>(
        2, q_max + 1, threads, [Q](Int lo, Int hi) {
            std::vector<HeightedFraction> part;
            std::vector<char> coprime;
            std::vector<Int> units, prefix;
            for (Int q = lo; q < hi; ++q)
                collect_denominator(q, Q, part, coprime, units, prefix);
            return part;
        });

    std::size_t total = 1;
    for (const auto& c : chunks)
        total += c.size();
    level.elements.reserve(total);
    for (auto& c : chunks)
        level.elements.insert(level.elements.end(), c.begin(), c.end());
    level.elements.push_back({Fraction::make(1, 1), 1, 3});

    std::sort(level.elements.begin(), level.elements.end(),
              [](const HeightedFraction& x, const HeightedFraction& y) { return x.frac < y.frac; });
    return level;
}

IncrementalBuilder::IncrementalBuilder()
{
    nodes_.push_back({0, 1, 0, 0, 1});
    nodes_.push_back({1, 1, 1, 3, kEnd});
    push_gap(0, 1);
}

void IncrementalBuilder::push_gap(std::uint32_t left, std::uint32_t right)
{
    const Node& l = nodes_[left];
    const Node& r = nodes_[right];
    const Int a = l.a + r.a;
    const Int q = l.q + r.q;
    const Int h = q + a + mod_inverse(a, q);
    if (h <= level_) {
        std::ostringstream os;
        os << "mediant height " << h << " of gap " << l.a << "/" << l.q << " < " << r.a << "/" << r.q
           << " does not exceed the current level " << level_;
        throw InvariantError(os.str());
    }
    heap_.push_back({h, l.a, l.q, left, right});
    std::push_heap(heap_.begin(), heap_.end(), GapAfter{});
}

void IncrementalBuilder::compact()
{
    std::vector<std::uint32_t> order(nodes_.size(), kEnd);
    std::vector<Node> sorted;
    sorted.reserve(nodes_.size());
    for (std::uint32_t cur = 0; cur != kEnd; cur = nodes_[cur].next) {
        order[cur] = static_cast<std::uint32_t>(sorted.size());
        sorted.push_back(nodes_[cur]);
    }
    for (std::size_t i = 0; i < sorted.size(); ++i)
        sorted[i].next = i + 1 < sorted.size() ? static_cast<std::uint32_t>(i + 1) : kEnd;
    for (Gap& g : heap_) {
        g.left = order[g.left];
        g.right = order[g.right];
    }
    nodes_ = std::move(sorted);
    appended_ = 0;
}

template <class OnInsert>
std::size_t IncrementalBuilder::step(OnInsert&& on_insert)
{
    if (level_ >= kMaxLevel)
        throw PreconditionError("incremental builder reached the supported maximum level");
    ++level_;
    std::size_t inserted = 0;
    while (!heap_.empty() && heap_.front().h_star <= level_) {
        std::pop_heap(heap_.begin(), heap_.end(), GapAfter{});
        const Gap g = heap_.back();
        heap_.pop_back();
        if (g.h_star != level_)
            throw InvariantError("gap skipped its insertion level");
        const Node& l = nodes_[g.left];
        const Node& r = nodes_[g.right];
        const Int a = l.a + r.a;
        const Int q = l.q + r.q;
        const auto mid = static_cast<std::uint32_t>(nodes_.size());
        nodes_.push_back({a, q, mod_inverse(a, q), g.h_star, g.right});
        nodes_[g.left].next = mid;
        on_insert(g.left, mid, g.right);
        push_gap(g.left, mid);
        push_gap(mid, g.right);
        ++inserted;
    }
    appended_ += inserted;
    if (appended_ * 16 > nodes_.size())
        compact();
    return inserted;
}

LevelDelta IncrementalBuilder::advance()
{
    LevelDelta delta;
    delta.Q = level_ + 1;
    auto as_fraction = [this](std::uint32_t i) { return Fraction::make(nodes_[i].a, nodes_[i].q); };
    step([&](std::uint32_t l, std::uint32_t m, std::uint32_t r) {
        delta.inserted.push_back(as_fraction(m));
        delta.vanished_pairs.push_back(UnimodularPair::make(as_fraction(l), as_fraction(r)));
    });
    return delta;
}

std::size_t IncrementalBuilder::advance_count()
{
    return step([](std::uint32_t, std::uint32_t, std::uint32_t) {});
}

SaturatedLevel IncrementalBuilder::snapshot() const
{
    SaturatedLevel level;
    level.Q = level_;
    level.elements.reserve(size());
    for (std::uint32_t cur = nodes_[0].next; cur != kEnd; cur = nodes_[cur].next) {
        const Node& n = nodes_[cur];
        level.elements.push_back({Fraction::make(n.a, n.q), n.inv, n.h});
    }
    return level;
}

SaturatedLevel build_incremental(Int Q)
{
    require_level(Q);
    IncrementalBuilder builder;
    while (builder.level() < Q)
        builder.advance_count();
    return builder.snapshot();
}

PartitionCheck verify_modular_partition(const SaturatedLevel& level)
{
    PartitionCheck out;
    Int prev_a = 0, prev_q = 1;
    for (std::size_t i = 0; i < level.elements.size(); ++i) {
        const Fraction f = level.elements[i].frac;
        if (f.num() * prev_q - prev_a * f.den() != 1) {
            out.ok = false;
            out.first_violation = i;
            return out;
        }
        prev_a = f.num();
        prev_q = f.den();
    }
    return out;
}

Int count_interval(const SaturatedLevel& level, double beta)
{
    if (!(beta >= 0.0 && beta <= 1.0))
        throw PreconditionError("beta must lie in [0, 1]");
    const auto it = std::partition_point(
        level.elements.begin(), level.elements.end(), [beta](const HeightedFraction& e) {
            return static_cast<double>(e.frac.num()) <= beta * static_cast<double>(e.frac.den());
        });
    return static_cast<Int>(it - level.elements.begin());
}

double predicted_count(Int Q, double beta)
{
    if (!(beta >= 0.0 && beta <= 1.0))
        throw PreconditionError("beta must lie in [0, 1]");
    const double zeta2 = std::numbers::pi * std::numbers::pi / 6.0;
    const double q = static_cast<double>(Q);
    return q * q / (2.0 * zeta2) * std::log((2.0 + 2.0 * beta) / (2.0 + beta));
}

Int phi(Int Q)
{
    require_level(Q);
    if (Q == 3)
        return 1;
    Int count = 0;
    // a + inv = Q - q with 1 <= a, inv < q.
    for (Int q = 2; q <= Q - 2; ++q) {
        const Int s = Q - q;
        const Int a_lo = std::max<Int>(1, s - (q - 1));
        const Int a_hi = std::min(q - 1, s - 1);
        for (Int a = a_lo; a <= a_hi; ++a)
            if (a * (s - a) % q == 1)
                ++count;
    }
    return count;
}

std::vector<PhiEntry> phi_range(Int q_min, Int q_max)
{
    require_level(q_min);
    require_level(q_max);
    if (q_min > q_max)
        throw PreconditionError("empty level range");
    std::vector<PhiEntry> out;
    out.reserve(static_cast<std::size_t>(q_max - q_min + 1));
    IncrementalBuilder builder;
    if (q_min == 3)
        out.push_back({3, 1, 1});
    while (builder.level() < q_max) {
        const auto added = static_cast<Int>(builder.advance_count());
        if (builder.level() >= q_min)
            out.push_back({builder.level(), added, static_cast<Int>(builder.size())});
    }
    return out;
}

Int index_sum(const SaturatedLevel& level)
{
    const auto& e = level.elements;
    const std::size_t n = e.size();
    if (n == 0)
        throw PreconditionError("index_sum of an empty level");
    Int total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Int prev = i == 0 ? 1 : e[i - 1].frac.den();
        const Int next = i + 1 == n ? e[0].frac.den() : e[i + 1].frac.den();
        const Int cur = e[i].frac.den();
        if ((prev + next) % cur != 0)
            throw InvariantError("non-integral index at " + e[i].frac.str() + " in level " +
                                 std::to_string(level.Q));
        total += (prev + next) / cur;
    }
    return total;
}

LevelDelta level_delta(Int Q)
{
    require_level(Q, 4);
    IncrementalBuilder builder;
    while (builder.level() < Q - 1)
        builder.advance_count();
    return builder.advance();
}

double asymmetry_ratio(const SaturatedLevel& level)
{
    if (level.elements.empty())
        throw PreconditionError("asymmetry_ratio of an empty level");
    return static_cast<double>(count_interval(level, 0.5)) / static_cast<double>(level.size());
}

}  // namespace satfarey
