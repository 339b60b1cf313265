/*
 * Copyright 2026 The nodaldiv Authors. All rights reserved.
 * This file is licensed to you under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License. You may obtain a copy
 * of the License at http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software distributed under
 * the License is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR REPRESENTATIONS
 * OF ANY KIND, either express or implied. See the License for the specific language
 * governing permissions and limitations under the License.
 */

#include <nodaldiv/profile.hpp>

#include <nodaldiv/error.hpp>

#include <array>
#include <cmath>
#include <string>

namespace nodaldiv {

namespace {

constexpr int kPanels = 64;

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 8> kNodes{
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 8> kWeights{
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

// Sharpness of the flat-function factor; larger values concentrate the transition.
constexpr double kSharpness = 1.5;

double phi(double tau)
{
    return tau > 0.0 ? std::exp(-kSharpness / tau) : 0.0;
}

double dphi(double tau)
{
    return tau > 0.0 ? kSharpness * std::exp(-kSharpness / tau) / (tau * tau) : 0.0;
}

double psi(double tau)
{
    if (tau <= 0.0) return 0.0;
    if (tau >= 1.0) return 1.0;
    const double a = phi(tau), b = phi(1.0 - tau);
    return a / (a + b);
}

double dpsi(double tau)
{
    if (tau <= 0.0 || tau >= 1.0) return 0.0;
    const double a = phi(tau), b = phi(1.0 - tau);
    const double da = dphi(tau), db = dphi(1.0 - tau);
    return (da * b + a * db) / ((a + b) * (a + b));
}

struct Blend
{
    double A, center, width;

    double chi(double s) const { return psi((s - (center - width)) / (2.0 * width)); }
    double dchi(double s) const { return dpsi((s - (center - width)) / (2.0 * width)) / (2.0 * width); }
    double g1(double s) const
    {
        const double c = chi(s);
        return (1.0 - c) * A * std::exp(s) + 2.0 * c;
    }
    /// Integral of G' over [a, b] inside the blend interval.
    double integrate(double a, double b) const
    {
        if (b <= a) return 0.0;
        const double lo = center - width;
        const double panel = 2.0 * width / kPanels;
        double sum = 0.0;
        // Fixed panel grid anchored at the blend start keeps evaluations reproducible.
        const int first = std::max(0, static_cast<int>(std::floor((a - lo) / panel)));
        const int last = std::min(kPanels - 1, static_cast<int>(std::floor((b - lo) / panel)));
        for (int p = first; p <= last; ++p) {
            const double x0 = std::max(a, lo + p * panel);
            const double x1 = std::min(b, lo + (p + 1) * panel);
            if (x1 <= x0) continue;
            const double mid = 0.5 * (x0 + x1), half = 0.5 * (x1 - x0);
            double q = 0.0;
            for (int k = 0; k < 8; ++k) q += kWeights[k] * g1(mid + half * kNodes[k]);
            sum += half * q;
        }
        return sum;
    }
};

double left_tail(double A, double s)
{
    static const double inv_e = std::exp(-1.0);
    return A * (std::exp(s) - inv_e) - 1.0;
}

} // namespace

double ConvexProfile::normalization_integral(double A, double center, double width)
{
    const Blend b{A, center, width};
    const double lo = center - width, hi = center + width;
    return (left_tail(A, lo) + 1.0) + b.integrate(lo, hi) + 2.0 * (0.0 - hi);
}

ConvexProfile ConvexProfile::build(double A, double initial_width)
{
    if (!(A > 0.0 && A < 0.5)) {
        throw Error(ErrorKind::InvalidArgument, "profile slope A must lie in (0, 1/2), got " + std::to_string(A));
    }
    double w = initial_width;
    for (int attempt = 0; attempt <= 6; ++attempt, w *= 0.5) {
        double lo = -1.0 + w, hi = -w;
        if (!(lo < hi)) continue;
        const double i_lo = normalization_integral(A, lo, w);
        const double i_hi = normalization_integral(A, hi, w);
        if (!(i_lo > 1.0 && i_hi < 1.0)) continue;
        while (hi - lo > 1e-14) {
            const double mid = 0.5 * (lo + hi);
            (normalization_integral(A, mid, w) > 1.0 ? lo : hi) = mid;
        }
        ConvexProfile p;
        p.m_A = A;
        p.m_center = 0.5 * (lo + hi);
        p.m_width = w;
        p.m_blend_start_value = left_tail(A, p.m_center - w);
        p.sample();
        p.certify();
        return p;
    }
    throw Error(ErrorKind::Construction, "no blend centre solves the profile normalization");
}

double ConvexProfile::blend(double s) const
{
    return Blend{m_A, m_center, m_width}.chi(s);
}

double ConvexProfile::blend_derivative(double s) const
{
    return Blend{m_A, m_center, m_width}.dchi(s);
}

double ConvexProfile::value(double s) const
{
    if (s >= linear_start()) return 2.0 * s;
    if (s <= exponential_end()) return left_tail(m_A, s);
    return m_blend_start_value + Blend{m_A, m_center, m_width}.integrate(exponential_end(), s);
}

double ConvexProfile::derivative(double s) const
{
    if (s >= linear_start()) return 2.0;
    if (s <= exponential_end()) return m_A * std::exp(s);
    return Blend{m_A, m_center, m_width}.g1(s);
}

double ConvexProfile::second_derivative(double s) const
{
    if (s >= linear_start()) return 0.0;
    if (s <= exponential_end()) return m_A * std::exp(s);
    const Blend b{m_A, m_center, m_width};
    const double e = m_A * std::exp(s);
    return (1.0 - b.chi(s)) * e + b.dchi(s) * (2.0 - e);
}

void ConvexProfile::sample()
{
    m_nodes.resize(kSampleCount);
    m_values.resize(kSampleCount);
    m_derivatives.resize(kSampleCount);
    m_second.resize(kSampleCount);
    for (int i = 0; i < kSampleCount; ++i) {
        const double s = -1.0 + 2.0 * i / (kSampleCount - 1);
        m_nodes[i] = s;
        m_values[i] = value(s);
        m_derivatives[i] = derivative(s);
        m_second[i] = second_derivative(s);
    }
}

void ConvexProfile::certify() const
{
    auto fail = [&](const std::string& what) {
        throw Error(ErrorKind::Construction, "profile A=" + std::to_string(m_A) + ": " + what);
    };
    if (!(exponential_end() > -1.0 && linear_start() < 0.0)) fail("blend interval leaves (-1, 0)");
    if (std::abs(value(-1.0) + 1.0) > 1e-12) fail("G(-1) != -1");
    if (value(0.0) != 0.0) fail("G(0) != 0");
    const double seam = value(std::nextafter(linear_start(), -1.0)) - 2.0 * linear_start();
    if (std::abs(seam) > 1e-10) fail("blend does not meet the linear tail");
    for (int i = 0; i < kSampleCount; ++i) {
        if (!(m_derivatives[i] > 0.0)) fail("G' not positive at s=" + std::to_string(m_nodes[i]));
        if (m_second[i] < -1e-12) fail("G'' negative at s=" + std::to_string(m_nodes[i]));
    }
}

} // namespace nodaldiv
