/**
 * @file token_allocator.hpp
 * @brief Proportional assignment of m-sequence window identifiers to stations.
 *
 * The 2^n - 1 identifiers are the n-bit windows A_j of one period of an
 * m-sequence; each nonzero window occurs exactly once. Station i receives
 * about Y_i/ΣY of them (never fewer than one), as one contiguous block.
 * Blocks are placed by Shannon-Fano splitting of the stations sorted by
 * descending share, which also yields a prefix code per station.
 */
#pragma once

#include "invcrit/errors.hpp"
#include "invcrit/msequence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace invcrit {

struct TokenRequest {
    int station = 0;
    double bandwidth = 0.0;  ///< required bandwidth share Y_i
};

struct StationAllocation {
    int station = 0;
    double request = 0.0;
    double exact_share = 0.0;  ///< Y_i/ΣY·(2^n - 1)
    std::size_t count = 0;     ///< m_ii
    std::size_t first_index = 0;
    std::string code;          ///< Shannon-Fano path
    std::vector<std::uint32_t> identifiers;
};

struct TokenAllocation {
    int degree = 0;
    std::uint64_t polynomial = 0;
    std::size_t space = 0;  ///< 2^n - 1
    std::size_t unassigned = 0;
    std::vector<StationAllocation> stations;  ///< ordered by station id
};

namespace detail {

inline void shannon_fano_place(std::vector<StationAllocation*>& order, std::size_t begin, std::size_t end,
                               std::size_t offset, const std::string& prefix) {
    if (end - begin == 1) {
        order[begin]->first_index = offset;
        order[begin]->code = prefix;
        return;
    }
    std::size_t total = 0;
    for (std::size_t k = begin; k < end; ++k) total += order[k]->count;
    std::size_t split = begin + 1;
    std::size_t left = order[begin]->count;
    std::size_t best_diff = total > 2 * left ? total - 2 * left : 2 * left - total;
    std::size_t run = left;
    for (std::size_t k = begin + 1; k + 1 < end; ++k) {
        run += order[k]->count;
        const std::size_t diff = total > 2 * run ? total - 2 * run : 2 * run - total;
        if (diff < best_diff) {
            best_diff = diff;
            split = k + 1;
            left = run;
        }
    }
    shannon_fano_place(order, begin, split, offset, prefix + "0");
    shannon_fano_place(order, split, end, offset + left, prefix + "1");
}

}  // namespace detail

inline TokenAllocation allocate_identifiers(std::span<const TokenRequest> requests, int degree,
                                            std::optional<std::uint64_t> polynomial = std::nullopt) {
    if (requests.empty()) throw DomainError("no stations requested identifiers");
    const auto seq = polynomial ? MSequence::generate(degree, *polynomial) : MSequence::generate(degree);
    const std::size_t space = seq.period();
    if (requests.size() > space)
        throw Oversubscribed("more stations than identifiers: " + std::to_string(requests.size()) + " > " +
                             std::to_string(space));
    double sum = 0.0;
    std::set<int> ids;
    for (const auto& r : requests) {
        if (!(r.bandwidth >= 0.0) || !std::isfinite(r.bandwidth)) throw DomainError("requests must be finite and >= 0");
        if (!ids.insert(r.station).second) throw DomainError("duplicate station id " + std::to_string(r.station));
        sum += r.bandwidth;
    }
    if (!(sum > 0.0)) throw DomainError("total requested bandwidth must be positive");

    TokenAllocation out;
    out.degree = degree;
    out.polynomial = seq.polynomial();
    out.space = space;
    for (const auto& r : requests) {
        StationAllocation s;
        s.station = r.station;
        s.request = r.bandwidth;
        s.exact_share = r.bandwidth / sum * static_cast<double>(space);
        out.stations.push_back(s);
    }
    std::sort(out.stations.begin(), out.stations.end(),
              [](const auto& a, const auto& b) { return a.station < b.station; });

    // Floors with a minimum of one, then largest remainders (ties to the smaller station id). When the
    // minimum-one guarantees overshoot the space, identifiers are taken back from the stations whose
    // fractional share is smallest; that is the only case where a count can miss its share by more than one.
    std::size_t assigned = 0;
    for (auto& st : out.stations) {
        st.count = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(st.exact_share)));
        assigned += st.count;
    }
    auto frac = [](const StationAllocation& st) { return st.exact_share - std::floor(st.exact_share); };
    std::vector<StationAllocation*> order_by_rem;
    for (auto& st : out.stations)
        if (st.exact_share >= 1.0) order_by_rem.push_back(&st);
    if (assigned <= space) {
        std::stable_sort(order_by_rem.begin(), order_by_rem.end(),
                         [&](const auto* a, const auto* b) { return frac(*a) > frac(*b); });
        std::size_t remaining = space - assigned;
        for (auto* st : order_by_rem) {
            if (remaining == 0) break;
            ++st->count;
            --remaining;
        }
        out.unassigned = remaining;
    } else {
        std::size_t excess = assigned - space;
        while (excess > 0) {
            StationAllocation* pick = nullptr;
            for (auto& st : out.stations)
                if (st.count > 1 && (!pick || frac(st) < frac(*pick))) pick = &st;
            if (!pick)
                throw Oversubscribed("minimum-one guarantees need " + std::to_string(assigned) +
                                     " identifiers, only " + std::to_string(space) + " exist");
            --pick->count;
            --excess;
        }
        out.unassigned = 0;
    }

    std::vector<StationAllocation*> order;
    for (auto& s : out.stations) order.push_back(&s);
    std::stable_sort(order.begin(), order.end(), [](const auto* a, const auto* b) { return a->count > b->count; });
    detail::shannon_fano_place(order, 0, order.size(), 0, "");

    for (auto& s : out.stations) {
        s.identifiers.reserve(s.count);
        for (std::size_t j = 0; j < s.count; ++j) s.identifiers.push_back(seq.window(s.first_index + j));
    }
    return out;
}

inline TokenAllocation allocate_identifiers(std::span<const double> shares, int degree) {
    std::vector<TokenRequest> req;
    for (std::size_t i = 0; i < shares.size(); ++i) req.push_back({static_cast<int>(i), shares[i]});
    return allocate_identifiers(req, degree);
}

struct AllocationCheck {
    bool disjoint = true;
    bool windows_valid = true;
    bool proportional = true;
    bool within_space = true;
    [[nodiscard]] bool ok() const noexcept { return disjoint && windows_valid && proportional && within_space; }
};

/// Re-derives all allocation invariants from the generating sequence.
inline AllocationCheck verify_allocation(const TokenAllocation& alloc) {
    AllocationCheck check;
    const auto seq = MSequence::generate(alloc.degree, alloc.polynomial);
    std::set<std::uint32_t> seen;
    std::set<std::uint32_t> all_windows;
    for (std::size_t j = 0; j < seq.period(); ++j) all_windows.insert(seq.window(j));
    if (all_windows.size() != seq.period() || all_windows.count(0) != 0) check.windows_valid = false;
    std::size_t total = 0;
    for (const auto& s : alloc.stations) {
        total += s.count;
        if (s.identifiers.size() != s.count) check.windows_valid = false;
        for (std::size_t j = 0; j < s.identifiers.size(); ++j) {
            const std::uint32_t id = s.identifiers[j];
            if (!seen.insert(id).second) check.disjoint = false;
            if (id == 0 || seq.window(s.first_index + j) != id) check.windows_valid = false;
        }
        if (std::abs(static_cast<double>(s.count) - s.exact_share) > 1.0) check.proportional = false;
    }
    if (total + alloc.unassigned != seq.period() || total > seq.period()) check.within_space = false;
    return check;
}

}  // namespace invcrit
