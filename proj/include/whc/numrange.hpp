/*
   Copyright 2026 The whc authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef WHC_NUMRANGE_HPP
#define WHC_NUMRANGE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "whc/trigpoly.hpp"

namespace whc {

namespace detail {

/// Wrap an angle into (-pi, pi].
inline double wrap_angle(double a) {
    const double pi = std::numbers::pi;
    double w = std::remainder(a, 2.0 * pi);
    if (w <= -pi) w += 2.0 * pi;
    return w;
}

inline double dist_point_segment(Complex p, Complex a, Complex b) {
    Complex ab = b - a;
    double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    double t = ((p - a).real() * ab.real() + (p - a).imag() * ab.imag()) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

/// Distance from a point to the closed ray {x <= 0, y = 0}.
inline double dist_point_negray(Complex p) {
    if (p.real() <= 0.0) return std::abs(p.imag());
    return std::abs(p);
}

/// Distance from the segment [a, b] to the closed ray {x <= 0, y = 0}.
/// Convexity of both sets puts the minimum at an endpoint of the segment, at
/// the ray endpoint 0, or at a proper crossing.
inline double dist_segment_negray(Complex a, Complex b) {
    if (a.imag() == 0.0 && b.imag() == 0.0) {
        if (std::min(a.real(), b.real()) <= 0.0) return 0.0;
    } else if ((a.imag() > 0.0) != (b.imag() > 0.0)) {
        double t = a.imag() / (a.imag() - b.imag());
        double x = a.real() + t * (b.real() - a.real());
        if (x <= 0.0) return 0.0;
    }
    return std::min({dist_point_negray(a), dist_point_negray(b),
                     dist_point_segment(Complex(0, 0), a, b)});
}

} // namespace detail

/// Circular sector with vertex at 0: all z with |arg z - bisector| <= halfangle.
struct Sector {
    double bisector = 0.0;   // in (-pi, pi]
    double halfangle = 0.0;  // in [0, pi/2)

    double opening() const { return 2.0 * halfangle; }
    bool contains(Complex z, double tol = 0.0) const {
        return std::abs(detail::wrap_angle(std::arg(z) - bisector)) <= halfangle + tol;
    }
};

/// Support-function description of the numerical range over `ndirs` equally
/// spaced directions.  bndpoints[u] is the Rayleigh quotient of a maximizing
/// unit vector for direction theta_u, hence a point of W(M) on the supporting
/// line Re(e^{-i theta_u} z) = support[u].
struct NRBoundary {
    int ndirs = 0;
    std::vector<double> support;
    std::vector<Complex> bndpoints;

    double theta(int u) const { return 2.0 * std::numbers::pi * u / ndirs; }
};

inline NRBoundary nr_boundary(const Eigen::MatrixXcd& M, int ndirs = 256) {
    if (M.rows() != M.cols())
        throw std::invalid_argument("nr_boundary: matrix must be square");
    if (ndirs < 16)
        throw std::invalid_argument("nr_boundary: need at least 16 directions");
    NRBoundary nb;
    nb.ndirs = ndirs;
    nb.support.resize(ndirs);
    nb.bndpoints.resize(ndirs);
    for (int u = 0; u < ndirs; ++u) {
        double th = nb.theta(u);
        Complex e(std::cos(th), -std::sin(th)); // e^{-i theta}
        Eigen::MatrixXcd H = 0.5 * (e * M + std::conj(e) * M.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
        int last = (int)es.eigenvalues().size() - 1;
        nb.support[u] = es.eigenvalues()(last);
        Eigen::VectorXcd x = es.eigenvectors().col(last);
        nb.bndpoints[u] = (x.adjoint() * (M * x))(0, 0);
    }
    return nb;
}

/// Outer test for 0 in W(M): 0 lies in every supporting half-plane iff the
/// support function stays nonnegative.  `min_support` is the margin.
struct ZeroLocation {
    bool inside = false;
    double min_support = 0.0;
};

inline ZeroLocation zero_in_nr(const Eigen::MatrixXcd& M, int ndirs = 256,
                               double tol = 1e-10) {
    NRBoundary nb = nr_boundary(M, ndirs);
    double mn = nb.support[0];
    for (double h : nb.support) mn = std::min(mn, h);
    return ZeroLocation{mn >= -tol, mn};
}

/// Disjointness of W(M) from the closed ray {x <= 0}: requires 0 outside
/// W(M) and the boundary polygon to clear the ray by more than `slack`.
struct RayDisjointness {
    bool disjoint = false;
    double margin = 0.0; // distance from the boundary polygon to the ray
};

inline RayDisjointness ray_disjoint(const Eigen::MatrixXcd& M, int ndirs = 256,
                                    double slack = 1e-10, double zero_tol = 1e-10) {
    NRBoundary nb = nr_boundary(M, ndirs);
    double mn_support = nb.support[0];
    for (double h : nb.support) mn_support = std::min(mn_support, h);
    bool zero_inside = mn_support >= -zero_tol;
    double dist = std::numeric_limits<double>::infinity();
    for (int u = 0; u < nb.ndirs; ++u) {
        Complex a = nb.bndpoints[u];
        Complex b = nb.bndpoints[(u + 1) % nb.ndirs];
        dist = std::min(dist, detail::dist_segment_negray(a, b));
    }
    if (zero_inside) dist = 0.0;
    return RayDisjointness{!zero_inside && dist > slack, dist};
}

/// Minimal sector with vertex 0 containing all boundary points of W(M)
/// (optionally together with the positive real direction).  Refuses when 0
/// lies in W(M) or when the argument spread reaches pi.
inline Sector min_sector(const Eigen::MatrixXcd& M, bool include_positive_ray,
                         int ndirs = 256, double zero_tol = 1e-10) {
    const double pi = std::numbers::pi;
    ZeroLocation z = zero_in_nr(M, ndirs, zero_tol);
    if (z.inside) {
        std::ostringstream os;
        os << "min_sector: no sector with vertex 0, the numerical range touches 0"
           << " (min support " << z.min_support << ")";
        throw std::domain_error(os.str());
    }
    NRBoundary nb = nr_boundary(M, ndirs);
    std::vector<double> args;
    args.reserve(nb.ndirs + 1);
    for (Complex p : nb.bndpoints) args.push_back(std::arg(p));
    if (include_positive_ray) args.push_back(0.0);
    std::sort(args.begin(), args.end());
    // minimal covering arc = complement of the largest gap between
    // consecutive arguments on the circle
    int n = (int)args.size();
    double max_gap = 2.0 * pi - (args[n - 1] - args[0]);
    int gap_at = n - 1; // arc starts at args[(gap_at+1) % n]
    for (int i = 0; i + 1 < n; ++i) {
        double g = args[i + 1] - args[i];
        if (g > max_gap) {
            max_gap = g;
            gap_at = i;
        }
    }
    double spread = 2.0 * pi - max_gap;
    if (spread >= pi) {
        std::ostringstream os;
        os << "min_sector: argument spread " << spread
           << " reaches pi, no sectorial bound exists";
        throw std::domain_error(os.str());
    }
    double start = args[(gap_at + 1) % n];
    Sector s;
    s.bisector = detail::wrap_angle(start + spread / 2.0);
    s.halfangle = spread / 2.0;
    return s;
}

/// Winding of a per-node field of sector bisectors around the circle.
struct WindingResult {
    int winding = 0;
    std::vector<double> bisectors; // continuous (unwrapped) selection
    double maxjump = 0.0;
};

inline WindingResult winding_of_sectors(const std::vector<std::optional<double>>& bisectors) {
    const double pi = std::numbers::pi;
    int N = (int)bisectors.size();
    if (N == 0)
        throw std::invalid_argument("winding_of_sectors: empty bisector field");
    for (int j = 0; j < N; ++j) {
        if (!bisectors[j].has_value()) {
            std::ostringstream os;
            os << "winding_of_sectors: not locally sectorial at node " << j;
            throw std::domain_error(os.str());
        }
    }
    WindingResult wr;
    wr.bisectors.resize(N);
    wr.bisectors[0] = *bisectors[0];
    double total = 0.0;
    for (int j = 0; j < N; ++j) {
        double next = *bisectors[(j + 1) % N];
        double jump = detail::wrap_angle(next - *bisectors[j]);
        if (!(std::abs(jump) < pi / 2)) {
            std::ostringstream os;
            os << "winding_of_sectors: grid too coarse, bisector jump "
               << std::abs(jump) << " at node " << j << " reaches pi/2";
            throw std::domain_error(os.str());
        }
        wr.maxjump = std::max(wr.maxjump, std::abs(jump));
        total += jump;
        if (j + 1 < N) wr.bisectors[j + 1] = wr.bisectors[j] + jump;
    }
    double w = total / (2.0 * pi);
    long long k = std::llround(w);
    if (std::abs(w - (double)k) > 1e-6)
        throw std::domain_error("winding_of_sectors: accumulated increment is not a"
                                " multiple of 2*pi");
    wr.winding = (int)k;
    return wr;
}

inline WindingResult winding_of_sectors(const std::vector<double>& bisectors) {
    std::vector<std::optional<double>> opt(bisectors.begin(), bisectors.end());
    return winding_of_sectors(opt);
}

} // namespace whc

#endif // WHC_NUMRANGE_HPP
