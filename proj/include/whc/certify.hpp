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

/// Certificate producers for factorability and canonicity of structured
/// block symbols [[A, B*], [B, D]] on the unit circle.
///
/// Each certifier checks one sufficient criterion on a finite grid and emits
/// an immutable Certificate carrying the verdict, the margins actually
/// measured, and machine-readable claims that the factorization engine can
/// confirm or contradict independently.  Grid checks cannot observe behavior
/// between nodes, so certificates record the grid size and the margins rather
/// than asserting the continuum statement outright.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "whc/blockstruct.hpp"
#include "whc/hankel.hpp"
#include "whc/numrange.hpp"
#include "whc/trigpoly.hpp"

namespace whc {

enum class Verdict { Pass, Fail, Inapplicable, Boundary };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Inapplicable: return "inapplicable";
        case Verdict::Boundary: return "boundary";
    }
    return "?";
}

/// Open interval of exponents p for which a sectoriality angle alpha yields
/// factorization: (2*pi/(2*pi - alpha), 2*pi/alpha).  The endpoints are
/// conjugate, 1/plo + 1/phi = 1, and the interval contains 2 whenever
/// alpha < pi.
struct PInterval {
    double plo = 1.0;
    double phi = std::numeric_limits<double>::infinity();
    double alpha = 0.0;
};

inline PInterval p_interval(double alpha) {
    const double pi = std::numbers::pi;
    if (alpha < 0.0)
        throw std::invalid_argument("p_interval: angle must be nonnegative");
    if (alpha >= pi)
        throw std::domain_error("p_interval: no interval for angle >= pi");
    if (alpha == 0.0) return PInterval{};
    return PInterval{2.0 * pi / (2.0 * pi - alpha), 2.0 * pi / alpha, alpha};
}

/// Outcome of one certification attempt.  Every value in `details` whose key
/// contains "margin" is strictly positive when the verdict is pass.  `claims`
/// is the machine-readable list the factorization engine knows how to check:
///   total_index=0, all_partial_indices=0, canonical_Lp_in_interval,
///   canonical_Lp_all, L2_factorable, canonical_L2, not_canonical,
///   not_L2_factorable.
struct Certificate {
    std::string theorem; // thcan | thcir | thneg | cok1 | exact_gamma
    Verdict verdict = Verdict::Inapplicable;
    std::optional<PInterval> pinterval;
    std::optional<int> winding;
    std::map<std::string, double> details;
    std::vector<std::string> claims;
    std::string note;
    int grid = 0;
};

namespace detail {

inline int certify_grid(const BlockSymbol& bs, int npoints) {
    if (npoints != 0) return npoints;
    return default_grid_size(assemble(bs).bandwidth());
}

inline bool block_a_is_identity(const BlockSymbol& bs, double tol = 1e-12) {
    auto diff = subtract(bs.A, LaurentMatrixPoly::identity(bs.m()));
    return std::sqrt(diff.coeff_sq_norm()) <= tol;
}

} // namespace detail

/// Local sectoriality of the Schur complement with every sector containing
/// the positive ray.  On success the common opening alpha (maximum over
/// nodes, plus a safety margin for the discretization) stays below pi, the
/// sector bisector field has winding zero, and the symbol is certified
/// canonically factorable for every exponent in p_interval(alpha).
inline Certificate certify_thcan(const BlockSymbol& bs, int npoints = 0,
                                 int ndirs = 256, double safety_margin = 0.01) {
    const double pi = std::numbers::pi;
    Certificate cert;
    cert.theorem = "thcan";
    cert.grid = detail::certify_grid(bs, npoints);

    auto gG = eval_grid(assemble(bs), cert.grid);
    double mindet = std::numeric_limits<double>::infinity();
    for (const Complex& d : determinants(gG)) mindet = std::min(mindet, std::abs(d));
    if (mindet <= 1e-10) {
        std::ostringstream os;
        os << "certify_thcan: symbol numerically singular on the grid, min |det| = "
           << mindet;
        throw std::domain_error(os.str());
    }

    auto sg = schur_on_grid(bs, cert.grid);
    std::vector<double> bisectors(sg.gammas.size());
    double max_opening = 0.0;
    // The support minimum of W(Gamma) is negative exactly when 0 lies
    // outside; its magnitude is the distance from the vertex.  Track the
    // worst node.
    double max_minsupport = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < sg.gammas.size(); ++j) {
        Sector s;
        try {
            s = min_sector(sg.gammas[j], /*include_positive_ray=*/true, ndirs);
        } catch (const std::domain_error& e) {
            cert.verdict = Verdict::Fail;
            std::ostringstream os;
            os << "node " << j << ": " << e.what();
            cert.note = os.str();
            cert.details["failed_node"] = (double)j;
            return cert;
        }
        bisectors[j] = s.bisector;
        max_opening = std::max(max_opening, s.opening());
        max_minsupport = std::max(max_minsupport,
                                  zero_in_nr(sg.gammas[j], ndirs).min_support);
    }

    auto w = winding_of_sectors(bisectors);
    cert.winding = w.winding;
    double alpha = max_opening + safety_margin;
    cert.details["max_opening"] = max_opening;
    cert.details["alpha"] = alpha;
    cert.details["vertex_margin"] = -max_minsupport;
    cert.details["margin_to_pi"] = pi - alpha;
    if (w.winding != 0) {
        cert.verdict = Verdict::Fail;
        std::ostringstream os;
        os << "sector bisector field winds " << w.winding
           << " times; a sectorial symbol must have winding 0";
        cert.note = os.str();
        return cert;
    }
    if (alpha >= pi) {
        cert.verdict = Verdict::Fail;
        cert.note = "common sector opening reaches pi";
        return cert;
    }
    cert.pinterval = p_interval(alpha);
    cert.verdict = Verdict::Pass;
    cert.claims = {"total_index=0", "all_partial_indices=0",
                   "canonical_Lp_in_interval"};
    return cert;
}

/// Strict separation of the Schur complement's numerical range from the
/// closed ray (-inf, 0] at every node.  Passing certifies that all partial
/// indices vanish and the factorization is canonical for every p in (1, inf).
inline Certificate certify_thcir(const BlockSymbol& bs, int npoints = 0,
                                 int ndirs = 256) {
    Certificate cert;
    cert.theorem = "thcir";
    cert.grid = detail::certify_grid(bs, npoints);
    auto sg = schur_on_grid(bs, cert.grid);
    double minmargin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < sg.gammas.size(); ++j) {
        auto rd = ray_disjoint(sg.gammas[j], ndirs);
        if (!rd.disjoint) {
            cert.verdict = Verdict::Fail;
            std::ostringstream os;
            os << "numerical range meets the closed negative ray at node " << j;
            cert.note = os.str();
            cert.details["failed_node"] = (double)j;
            cert.details["ray_distance"] = rd.margin;
            return cert;
        }
        minmargin = std::min(minmargin, rd.margin);
    }
    cert.details["min_ray_margin"] = minmargin;
    cert.pinterval = p_interval(0.0); // all p in (1, inf)
    cert.verdict = Verdict::Pass;
    cert.claims = {"total_index=0", "all_partial_indices=0", "canonical_Lp_all"};
    return cert;
}

/// Uniform negativity of Re Gamma + B1 B1* for a caller-chosen analytic
/// approximant B1 (default: the analytic part of B).  Requires A = I.  When
/// B - B1 is itself analytic the pass additionally forces all partial indices
/// to zero; otherwise only L2-factorability is claimed.
inline Certificate certify_thneg(const BlockSymbol& bs,
                                 std::optional<LaurentMatrixPoly> B1 = std::nullopt,
                                 int npoints = 0, double delta = 1e-8) {
    Certificate cert;
    cert.theorem = "thneg";
    if (!detail::block_a_is_identity(bs)) {
        cert.verdict = Verdict::Inapplicable;
        cert.note = "A block is not the identity";
        return cert;
    }
    LaurentMatrixPoly b1 = B1 ? *B1 : project_plus(bs.B);
    if (b1.rows() != bs.B.rows() || b1.cols() != bs.B.cols())
        throw std::invalid_argument("certify_thneg: B1 shape differs from B");

    double anti_sq = 0.0;
    auto diff = subtract(bs.B, b1);
    for (int k = diff.kmin(); k <= -1; ++k) anti_sq += diff.coeff(k).squaredNorm();
    const bool analytic_gap = std::sqrt(anti_sq) <= 1e-12;
    cert.details["setting"] = analytic_gap ? 2.0 : 1.0;

    cert.grid = npoints != 0
                    ? npoints
                    : default_grid_size(std::max(assemble(bs).bandwidth(),
                                                 b1.bandwidth()));
    auto sg = schur_on_grid(bs, cert.grid);
    auto g1 = eval_grid(b1, cert.grid);
    double smax = -std::numeric_limits<double>::infinity();
    std::size_t worst = 0;
    for (std::size_t j = 0; j < sg.gammas.size(); ++j) {
        Eigen::MatrixXcd M =
            0.5 * (sg.gammas[j] + sg.gammas[j].adjoint()) +
            g1.values[j] * g1.values[j].adjoint();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
        double lm = es.eigenvalues()(es.eigenvalues().size() - 1);
        if (lm > smax) {
            smax = lm;
            worst = j;
        }
    }
    cert.details["max_lambda"] = smax;
    cert.details["negativity_margin"] = -smax - delta;
    if (-smax - delta > 0.0) {
        cert.verdict = Verdict::Pass;
        if (analytic_gap) {
            cert.claims = {"L2_factorable", "all_partial_indices=0",
                           "total_index=0"};
            cert.note = "B - B1 analytic: index conclusion active";
        } else {
            cert.claims = {"L2_factorable"};
            cert.note = "B - B1 not analytic: factorability claim only";
        }
    } else {
        cert.verdict = Verdict::Fail;
        std::ostringstream os;
        os << "Re Gamma + B1 B1* not uniformly negative, largest eigenvalue "
           << smax << " at node " << worst;
        cert.note = os.str();
    }
    return cert;
}

/// Scalar-D criterion: sup over the circle of (Re D - sum |b_j|^2) must drop
/// below minus the summed squared distances of the b_j to the analytic
/// functions.  Requires A = I and a 1x1 D block.  Passing certifies a
/// canonical L2 factorization.
inline Certificate certify_cok1(const BlockSymbol& bs, int npoints = 0) {
    Certificate cert;
    cert.theorem = "cok1";
    if (bs.k() != 1) {
        cert.verdict = Verdict::Inapplicable;
        cert.note = "D block is not scalar (k != 1)";
        return cert;
    }
    if (!detail::block_a_is_identity(bs)) {
        cert.verdict = Verdict::Inapplicable;
        cert.note = "A block is not the identity";
        return cert;
    }
    cert.grid = detail::certify_grid(bs, npoints);
    auto gD = eval_grid(bs.D, cert.grid);
    auto gB = eval_grid(bs.B, cert.grid);
    double s = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < cert.grid; ++j)
        s = std::max(s, gD.values[j](0, 0).real() - gB.values[j].squaredNorm());
    double d = 0.0;
    for (int c = 0; c < bs.m(); ++c) {
        double nd = nehari_distance(entry_poly(bs.B, 0, c));
        d += nd * nd;
    }
    cert.details["sup_value"] = s;
    cert.details["dist_sq_sum"] = d;
    cert.details["margin"] = -d - s;
    if (s < -d) {
        cert.verdict = Verdict::Pass;
        cert.claims = {"L2_factorable", "canonical_L2", "all_partial_indices=0",
                       "total_index=0"};
    } else {
        cert.verdict = Verdict::Fail;
        std::ostringstream os;
        os << "sup(Re D - |B|^2) = " << s << " does not drop below " << -d;
        cert.note = os.str();
    }
    return cert;
}

/// Exact factorability criterion for the family D = B B* + gamma I: the
/// symbol is L2-factorable iff gamma != 0, and the factorization is canonical
/// iff -gamma avoids the spectrum of H_B H_B*.  For polynomial B that
/// spectrum is finite and computed exactly, so this is an if-and-only-if
/// verdict rather than a sufficient condition -- except within a narrow
/// boundary band around the spectrum, where no verdict is asserted.
inline Certificate exact_gamma_criterion(const LaurentMatrixPoly& B,
                                         Complex gamma) {
    Certificate cert;
    cert.theorem = "exact_gamma";
    auto spec = hankel_sq_spectrum(B);
    auto pts = spec.sq_spectrum();
    double scale = std::max(1.0, pts.front());
    double dmin = std::numeric_limits<double>::infinity();
    double nearest = 0.0;
    for (double x : pts) {
        double dist = std::abs(gamma + x); // |(-gamma) - x|
        if (dist < dmin) {
            dmin = dist;
            nearest = x;
        }
    }
    cert.details["spectrum_distance"] = dmin;
    cert.details["nearest_point"] = nearest;
    const double member_tol = 1e-13 * scale;
    const double boundary_tol = 1e-9 * scale;
    if (dmin <= member_tol) {
        cert.verdict = Verdict::Fail;
        if (nearest == 0.0 || std::abs(gamma) <= member_tol) {
            cert.claims = {"not_L2_factorable"};
            cert.note = "-gamma lies in the essential spectrum point 0";
        } else {
            cert.claims = {"L2_factorable", "not_canonical"};
            std::ostringstream os;
            os << "-gamma matches the spectrum point " << nearest
               << ": factorable but not canonical";
            cert.note = os.str();
        }
    } else if (dmin <= boundary_tol) {
        cert.verdict = Verdict::Boundary;
        std::ostringstream os;
        os << "distance " << dmin << " to the spectrum of H_B H_B* is inside "
           << "the ill-conditioned band; no verdict asserted";
        cert.note = os.str();
    } else {
        cert.verdict = Verdict::Pass;
        cert.claims = {"L2_factorable", "canonical_L2", "all_partial_indices=0",
                       "total_index=0"};
    }
    return cert;
}

/// Recognize the D = B B* + gamma I structure inside a block symbol and
/// apply the exact criterion.  Inapplicable when A is not the identity or
/// D - B B* is not a constant multiple of the identity.
inline Certificate certify_exact(const BlockSymbol& bs, double struct_tol = 1e-12) {
    Certificate cert;
    cert.theorem = "exact_gamma";
    if (!detail::block_a_is_identity(bs)) {
        cert.verdict = Verdict::Inapplicable;
        cert.note = "A block is not the identity";
        return cert;
    }
    auto R = subtract(bs.D, multiply(bs.B, adjoint_symbol(bs.B)));
    Complex gamma = R.coeff(0).trace() / (double)bs.k();
    auto R0 = subtract(R, LaurentMatrixPoly::constant(
                              gamma * Eigen::MatrixXcd::Identity(bs.k(), bs.k())));
    double rscale = std::max(1.0, std::sqrt(R.coeff_sq_norm()));
    if (std::sqrt(R0.coeff_sq_norm()) > struct_tol * rscale) {
        cert.verdict = Verdict::Inapplicable;
        cert.note = "D - B B* is not a constant multiple of the identity";
        return cert;
    }
    return exact_gamma_criterion(bs.B, gamma);
}

} // namespace whc
