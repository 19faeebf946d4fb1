#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace srwe {

using Vector = std::vector<double>;

inline double clip(double v, double lo, double hi) {
    return std::min(std::max(v, lo), hi);
}

inline double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        s += a[k] * b[k];
    return s;
}

inline double norm2(const Vector& v) {
    double s = 0.0;
    for (double x : v)
        s += x * x;
    return std::sqrt(s);
}

inline double sq_norm2(const Vector& v) {
    double s = 0.0;
    for (double x : v)
        s += x * x;
    return s;
}

inline double sup_norm(const Vector& v) {
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

inline double sup_distance(const Vector& a, const Vector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("sup_distance: dimension mismatch");
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

inline double sq_distance2(const Vector& a, const Vector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("sq_distance2: dimension mismatch");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

inline bool all_finite(const Vector& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace srwe
