#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace hydresim {

/// Forward-mode dual number with N derivative slots.
///
/// All constitutive relations are templated on the scalar type, so the same
/// code path yields values (double) and exact derivatives (Dual<4> for
/// cell-local terms, Dual<8> for two-cell face terms).
template <int N>
struct Dual {
    double v = 0.0;
    std::array<double, N> d{};

    Dual() = default;
    Dual(double value) : v(value) { d.fill(0.0); } // NOLINT: implicit by design
    Dual(double value, int seed_slot) : v(value)
    {
        d.fill(0.0);
        d[seed_slot] = 1.0;
    }

    Dual& operator+=(const Dual& o)
    {
        v += o.v;
        for (int i = 0; i < N; ++i) d[i] += o.d[i];
        return *this;
    }
    Dual& operator-=(const Dual& o)
    {
        v -= o.v;
        for (int i = 0; i < N; ++i) d[i] -= o.d[i];
        return *this;
    }
    Dual& operator*=(const Dual& o) { return *this = *this * o; }
    Dual& operator/=(const Dual& o) { return *this = *this / o; }

    friend Dual operator-(const Dual& a)
    {
        Dual r;
        r.v = -a.v;
        for (int i = 0; i < N; ++i) r.d[i] = -a.d[i];
        return r;
    }
    friend Dual operator+(const Dual& a, const Dual& b)
    {
        Dual r;
        r.v = a.v + b.v;
        for (int i = 0; i < N; ++i) r.d[i] = a.d[i] + b.d[i];
        return r;
    }
    friend Dual operator-(const Dual& a, const Dual& b)
    {
        Dual r;
        r.v = a.v - b.v;
        for (int i = 0; i < N; ++i) r.d[i] = a.d[i] - b.d[i];
        return r;
    }
    friend Dual operator*(const Dual& a, const Dual& b)
    {
        Dual r;
        r.v = a.v * b.v;
        for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
        return r;
    }
    friend Dual operator/(const Dual& a, const Dual& b)
    {
        Dual r;
        const double inv = 1.0 / b.v;
        r.v = a.v * inv;
        for (int i = 0; i < N; ++i) r.d[i] = (a.d[i] - r.v * b.d[i]) * inv;
        return r;
    }

    friend Dual operator+(const Dual& a, double b) { return a + Dual(b); }
    friend Dual operator+(double a, const Dual& b) { return Dual(a) + b; }
    friend Dual operator-(const Dual& a, double b) { return a - Dual(b); }
    friend Dual operator-(double a, const Dual& b) { return Dual(a) - b; }
    friend Dual operator*(const Dual& a, double b)
    {
        Dual r;
        r.v = a.v * b;
        for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * b;
        return r;
    }
    friend Dual operator*(double a, const Dual& b) { return b * a; }
    friend Dual operator/(const Dual& a, double b) { return a * (1.0 / b); }
    friend Dual operator/(double a, const Dual& b) { return Dual(a) / b; }

    friend bool operator<(const Dual& a, const Dual& b) { return a.v < b.v; }
    friend bool operator>(const Dual& a, const Dual& b) { return a.v > b.v; }
    friend bool operator<=(const Dual& a, const Dual& b) { return a.v <= b.v; }
    friend bool operator>=(const Dual& a, const Dual& b) { return a.v >= b.v; }
    friend bool operator<(const Dual& a, double b) { return a.v < b; }
    friend bool operator>(const Dual& a, double b) { return a.v > b; }
    friend bool operator<=(const Dual& a, double b) { return a.v <= b; }
    friend bool operator>=(const Dual& a, double b) { return a.v >= b; }
    friend bool operator<(double a, const Dual& b) { return a < b.v; }
    friend bool operator>(double a, const Dual& b) { return a > b.v; }
};

template <int N>
inline Dual<N> exp(const Dual<N>& a)
{
    Dual<N> r;
    r.v = std::exp(a.v);
    for (int i = 0; i < N; ++i) r.d[i] = r.v * a.d[i];
    return r;
}

template <int N>
inline Dual<N> log(const Dual<N>& a)
{
    Dual<N> r;
    r.v = std::log(a.v);
    const double inv = 1.0 / a.v;
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * inv;
    return r;
}

template <int N>
inline Dual<N> sqrt(const Dual<N>& a)
{
    Dual<N> r;
    r.v = std::sqrt(a.v);
    const double s = (r.v > 0.0) ? 0.5 / r.v : 0.0;
    for (int i = 0; i < N; ++i) r.d[i] = s * a.d[i];
    return r;
}

/// pow with constant exponent; derivative vanishes at a zero base.
template <int N>
inline Dual<N> pow(const Dual<N>& a, double e)
{
    Dual<N> r;
    r.v = std::pow(a.v, e);
    const double s = (a.v != 0.0) ? e * r.v / a.v : 0.0;
    for (int i = 0; i < N; ++i) r.d[i] = s * a.d[i];
    return r;
}

template <int N>
inline Dual<N> abs(const Dual<N>& a)
{
    return a.v < 0.0 ? -a : a;
}

template <int N>
inline Dual<N> max(const Dual<N>& a, const Dual<N>& b)
{
    return a.v >= b.v ? a : b;
}
template <int N>
inline Dual<N> min(const Dual<N>& a, const Dual<N>& b)
{
    return a.v <= b.v ? a : b;
}
template <int N>
inline Dual<N> max(const Dual<N>& a, double b)
{
    return a.v >= b ? a : Dual<N>(b);
}
template <int N>
inline Dual<N> min(const Dual<N>& a, double b)
{
    return a.v <= b ? a : Dual<N>(b);
}

/// Scalar fallbacks so templated physics compiles for plain double.
inline double value_of(double x) { return x; }
template <int N>
inline double value_of(const Dual<N>& x)
{
    return x.v;
}

namespace scalar_ops {
using std::abs;
using std::exp;
using std::log;
using std::max;
using std::min;
using std::pow;
using std::sqrt;
using hydresim::abs;
using hydresim::exp;
using hydresim::log;
using hydresim::max;
using hydresim::min;
using hydresim::pow;
using hydresim::sqrt;
} // namespace scalar_ops

/// Copy a Dual<M> into a wider Dual<N>, placing derivatives at `offset`.
template <int N, int M>
inline Dual<N> widen(const Dual<M>& a, int offset)
{
    static_assert(N >= M);
    Dual<N> r(a.v);
    for (int i = 0; i < M; ++i) r.d[offset + i] = a.d[i];
    return r;
}

} // namespace hydresim
