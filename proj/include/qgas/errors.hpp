#ifndef QGAS_ERRORS_HPP
#define QGAS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qgas {

// exp() argument would leave the finite double range (|Re(bt)*E| > 700),
// or a partition sum underflowed to zero.
class OverflowError : public std::runtime_error {
public:
    explicit OverflowError(const std::string& what) : std::runtime_error(what) {}
};

// A brute-force evaluation would exceed its configured size cap.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qgas

#endif
