#include "qgas/compositions.hpp"

#include <stdexcept>

namespace qgas {

std::uint64_t composition_count(int particles, int levels) {
    if (particles < 0 || levels < 1) {
        throw std::domain_error("composition_count: need N >= 0, s >= 1");
    }
    // C(N+s-1, s-1), multiplied in factor order to stay integral.
    std::uint64_t result = 1;
    for (int i = 1; i <= levels - 1; ++i) {
        result = result * static_cast<std::uint64_t>(particles + i) /
                 static_cast<std::uint64_t>(i);
    }
    return result;
}

CompositionRange::CompositionRange(int particles, int levels)
    : particles_(particles), levels_(levels) {
    if (particles < 0 || levels < 1) {
        throw std::domain_error("CompositionRange: need N >= 0, s >= 1");
    }
}

CompositionRange::iterator::iterator(int particles, int levels, bool done)
    : occ_(static_cast<std::size_t>(levels), 0), done_(done) {
    if (!done_) {
        occ_.back() = particles; // lexicographically first: (0,...,0,N)
    }
}

CompositionRange::iterator& CompositionRange::iterator::operator++() {
    const int s = static_cast<int>(occ_.size());
    // Find the rightmost position before the last that can absorb one unit
    // from the suffix; everything after it is reset with the remainder pushed
    // into the last slot.
    int suffix = occ_[s - 1];
    for (int k = s - 2; k >= 0; --k) {
        if (suffix > 0) {
            occ_[k] += 1;
            for (int j = k + 1; j < s; ++j) {
                occ_[j] = 0;
            }
            occ_[s - 1] = suffix - 1;
            return *this;
        }
        suffix += occ_[k];
    }
    done_ = true;
    return *this;
}

std::vector<OccupationVector> compositions(int particles, int levels) {
    std::vector<OccupationVector> out;
    out.reserve(composition_count(particles, levels));
    for (const auto& occ : CompositionRange(particles, levels)) {
        out.push_back(occ);
    }
    return out;
}

} // namespace qgas
