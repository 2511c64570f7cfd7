#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ebethe {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr cplx kI{0.0, 1.0};

// Thrown when an argument lands on (or too close to) a pole of a theta ratio.
class pole_error : public std::runtime_error {
public:
    explicit pole_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a quasi-periodicity prefactor exponent leaves the double range.
class range_overflow_error : public std::runtime_error {
public:
    range_overflow_error(const std::string& what, double exponent)
        : std::runtime_error(what + " (raw exponent " + std::to_string(exponent) + ")"),
          raw_exponent(exponent) {}
    double raw_exponent;
};

// Thrown when a gauge matrix degenerates (u at a zero of mu(u)).
class singular_gauge_error : public std::runtime_error {
public:
    explicit singular_gauge_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown for ill-posed state configurations (root collisions, off-shell input
// where on-shell is required, degenerate Gaudin matrix and the like).
class degenerate_configuration_error : public std::runtime_error {
public:
    explicit degenerate_configuration_error(const std::string& what)
        : std::runtime_error(what) {}
};

inline bool is_finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline std::string to_string(cplx z) {
    return "(" + std::to_string(z.real()) + (z.imag() < 0 ? "" : "+") +
           std::to_string(z.imag()) + "i)";
}

}  // namespace ebethe
