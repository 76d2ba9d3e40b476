#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mixlink {

using Vec = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Thrown for bad user input (CLI maps this to exit code 2).
struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Bisection for a continuous function with f(lo) and f(hi) of opposite sign.
// Returns the midpoint of the final bracket of width <= tol.
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol);

// Solve g(x) = target for strictly monotone g on [lo, hi].
double solve_monotone(const std::function<double(double)>& g, double target,
                      double lo, double hi, bool increasing, double tol);

// Adaptive Simpson quadrature with absolute tolerance.
double integrate(const std::function<double(double)>& f, double a, double b, double tol);

inline double central_diff(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double second_diff(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

// Stable hash for deriving per-cell RNG seeds (FNV-1a).
std::uint64_t stable_hash(const std::string& s);

std::string format_double(double v);

}  // namespace mixlink
