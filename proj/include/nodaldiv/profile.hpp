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
#pragma once

#include <nodaldiv/error.hpp>

#include <vector>

namespace nodaldiv {

///
/// Convex increasing G_A on [-1, 1] with
///
///     G_A(s) = A (e^s - 1/e) - 1    for s <= m - w,
///     G_A(s) = 2 s                  for s >= m + w,
///
/// joined by G' = (1 - chi) A e^s + 2 chi, chi a smooth monotone blend on [m - w, m + w].
/// The centre m is chosen so that G(-1) = -1 and G(0) = 0 hold simultaneously.
///
class ConvexProfile
{
public:
    static constexpr int kSampleCount = 2001;

    /// Throws InvalidArgument unless 0 < A < 1/2; Construction if no centre is found.
    static ConvexProfile build(double A, double initial_width = 0.1);

    double A() const { return m_A; }
    double center() const { return m_center; }
    double width() const { return m_width; }
    /// Start of the exactly linear tail.
    double linear_start() const { return m_center + m_width; }
    /// End of the exponential tail.
    double exponential_end() const { return m_center - m_width; }

    double value(double s) const;
    double derivative(double s) const;
    double second_derivative(double s) const;

    /// The blend on [m - w, m + w] and its derivative.
    double blend(double s) const;
    double blend_derivative(double s) const;

    /// Uniform samples on [-1, 1].
    const std::vector<double>& nodes() const { return m_nodes; }
    const std::vector<double>& value_samples() const { return m_values; }
    const std::vector<double>& derivative_samples() const { return m_derivatives; }
    const std::vector<double>& second_derivative_samples() const { return m_second; }

    /// Integral of G' over [-1, 0] for a trial centre (the normalization equation).
    static double normalization_integral(double A, double center, double width);

private:
    ConvexProfile() = default;
    void sample();
    void certify() const;

    double m_A = 0.0;
    double m_center = 0.0;
    double m_width = 0.0;
    double m_blend_start_value = 0.0; ///< G(m - w)
    std::vector<double> m_nodes, m_values, m_derivatives, m_second;
};

} // namespace nodaldiv
