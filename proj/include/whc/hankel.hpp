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

/// Block Hankel matrices built from the anti-analytic Fourier coefficients of
/// a symbol, their singular values, and scalar Nehari distances.
///
/// For a Laurent polynomial B the Hankel operator P_- B P_+ has finite rank,
/// so a finite section already equals the full operator once the truncation
/// covers the band: everything here is exact rather than asymptotic as soon
/// as N >= |kmin|.

#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <stdexcept>
#include <string>
#include <vector>

#include "whc/trigpoly.hpp"

namespace whc {

/// Singular values of a truncated block Hankel matrix.
struct HankelSpectrum {
    /// Number of block rows and block columns retained.
    int truncation = 0;
    /// Nonincreasing singular values.
    std::vector<double> singvals;
    /// True when the truncation covers the whole band of the symbol, in which
    /// case the finite matrix coincides with the full operator on its support.
    bool exact = false;

    /// Squared singular values with 0 adjoined: the spectrum of the
    /// (finite-rank) product of the Hankel operator with its adjoint.
    std::vector<double> sq_spectrum() const {
        std::vector<double> sq;
        sq.reserve(singvals.size() + 1);
        for (double s : singvals) sq.push_back(s * s);
        sq.push_back(0.0);
        return sq;
    }
};

/// Matrix of P_- B P_+ in the monomial bases {t^j}_{j>=0} and
/// {t^{-i-1}}_{i>=0}: block (i, j) holds the coefficient c_{-(i+j+1)},
/// i, j = 0 .. N-1.
inline Eigen::MatrixXcd hankel_matrix(const LaurentMatrixPoly& B, int N) {
    if (N < 1) throw std::invalid_argument("hankel_matrix: truncation must be >= 1");
    const int k = B.rows(), m = B.cols();
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(N * k, N * m);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            H.block(i * k, j * m, k, m) = B.coeff(-(i + j + 1));
    return H;
}

inline HankelSpectrum hankel_sq_spectrum(const LaurentMatrixPoly& B, int N = 0) {
    // Default exposes the exactness plateau: a few block rows past the band.
    if (N == 0) N = -B.kmin() + 8;
    Eigen::MatrixXcd H = hankel_matrix(B, N);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(H);
    HankelSpectrum spec;
    spec.truncation = N;
    spec.exact = (N >= -B.kmin());
    const auto& sv = svd.singularValues();
    spec.singvals.assign(sv.data(), sv.data() + sv.size());
    return spec;
}

/// Operator norm of the truncated Hankel matrix (the exact Hankel operator
/// norm once N covers the band).
inline double hankel_norm(const LaurentMatrixPoly& B, int N = 0) {
    auto spec = hankel_sq_spectrum(B, N);
    return spec.singvals.empty() ? 0.0 : spec.singvals.front();
}

/// Distance from a scalar symbol to the analytic functions, computed as the
/// norm of its Hankel operator (exact for polynomial symbols).
inline double nehari_distance(const LaurentMatrixPoly& b) {
    if (b.rows() != 1 || b.cols() != 1)
        throw std::invalid_argument("nehari_distance: symbol must be scalar (1x1)");
    return hankel_norm(b, std::max(1, -b.kmin()));
}

/// Essential spectrum of the product of the Hankel operator with its adjoint.
struct EssSpectrumNote {
    std::vector<double> points;
    std::string justification;
};

/// For Laurent polynomial symbols the Hankel operator has finite rank, so
/// compact perturbations see only {0}.
inline EssSpectrumNote ess_spectrum_note(const LaurentMatrixPoly& B) {
    (void)B;
    return EssSpectrumNote{{0.0}, "finite-rank Hankel operator"};
}

} // namespace whc
