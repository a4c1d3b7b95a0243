#ifndef QGAS_COMPOSITIONS_HPP
#define QGAS_COMPOSITIONS_HPP

#include <cstdint>
#include <vector>

namespace qgas {

/// One occupation configuration (n_1, ..., n_s) with sum(n_i) = N.
using OccupationVector = std::vector<int>;

/// Number of compositions of N into s ordered nonnegative parts,
/// C(N+s-1, s-1).
std::uint64_t composition_count(int particles, int levels);

/// Enumerates every composition of N into s ordered nonnegative parts exactly
/// once, in lexicographic order: (0,...,0,N) first, (N,0,...,0) last.
/// Input-iterator semantics; the dereferenced vector is owned by the range.
class CompositionRange {
public:
    CompositionRange(int particles, int levels);

    class iterator {
    public:
        const OccupationVector& operator*() const { return occ_; }
        const OccupationVector* operator->() const { return &occ_; }
        iterator& operator++();
        bool operator==(const iterator& other) const { return done_ == other.done_; }
        bool operator!=(const iterator& other) const { return !(*this == other); }

    private:
        friend class CompositionRange;
        iterator(int particles, int levels, bool done);
        OccupationVector occ_;
        bool done_;
    };

    iterator begin() const { return iterator(particles_, levels_, false); }
    iterator end() const { return iterator(particles_, levels_, true); }

private:
    int particles_;
    int levels_;
};

/// Materialized composition list in the same lexicographic order.
std::vector<OccupationVector> compositions(int particles, int levels);

} // namespace qgas

#endif
