#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace medialkit {

// Small fixed-capacity vector for points/directions in ambient dimension <= 8.
// Value type, cheap to copy; dimension carried at runtime.
struct Vec {
    static constexpr std::size_t kMaxDim = 8;

    std::array<double, kMaxDim> c{};
    std::size_t n = 0;

    Vec() = default;
    explicit Vec(std::size_t dim) : n(dim) {
        if (dim > kMaxDim) throw std::invalid_argument("Vec: dimension above capacity");
    }
    Vec(std::initializer_list<double> xs) : n(xs.size()) {
        if (n > kMaxDim) throw std::invalid_argument("Vec: dimension above capacity");
        std::size_t i = 0;
        for (double v : xs) c[i++] = v;
    }
    static Vec from(const std::vector<double>& xs) {
        Vec v(xs.size());
        std::copy(xs.begin(), xs.end(), v.c.begin());
        return v;
    }

    std::size_t size() const { return n; }
    double& operator[](std::size_t i) { return c[i]; }
    double operator[](std::size_t i) const { return c[i]; }

    Vec& operator+=(const Vec& o) {
        for (std::size_t i = 0; i < n; ++i) c[i] += o.c[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (std::size_t i = 0; i < n; ++i) c[i] -= o.c[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (std::size_t i = 0; i < n; ++i) c[i] *= s;
        return *this;
    }
    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(Vec a, double s) { return a *= s; }
    friend Vec operator*(double s, Vec a) { return a *= s; }

    friend bool operator==(const Vec& a, const Vec& b) {
        if (a.n != b.n) return false;
        for (std::size_t i = 0; i < a.n; ++i)
            if (a.c[i] != b.c[i]) return false;
        return true;
    }

    std::vector<double> to_vector() const { return std::vector<double>(c.begin(), c.begin() + n); }
};

inline double dot(const Vec& a, const Vec& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }

inline double dist2(const Vec& a, const Vec& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}
inline double dist(const Vec& a, const Vec& b) { return std::sqrt(dist2(a, b)); }

inline Vec normalized(const Vec& a) {
    double m = norm(a);
    if (m == 0) throw std::invalid_argument("normalized: zero vector");
    return a * (1.0 / m);
}

// Angle between two nonzero vectors in [0, pi].
inline double angle_between(const Vec& a, const Vec& b) {
    double na = norm(a), nb = norm(b);
    if (na == 0 || nb == 0) return 0.0;
    double c = dot(a, b) / (na * nb);
    c = std::clamp(c, -1.0, 1.0);
    return std::acos(c);
}

// Strict lexicographic order on coordinates; the deterministic tie-break used
// everywhere a canonical representative is needed.
inline bool lex_less(const Vec& a, const Vec& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return a.size() < b.size();
}

inline std::string to_string(const Vec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(v[i]);
    }
    return s + ")";
}

}  // namespace medialkit
