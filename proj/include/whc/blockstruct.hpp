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

#ifndef WHC_BLOCKSTRUCT_HPP
#define WHC_BLOCKSTRUCT_HPP

#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "whc/trigpoly.hpp"

namespace whc {

/// Structured block symbol
///
///     G(t) = [ A(t)   B(t)* ]
///            [ B(t)   D(t)  ]
///
/// with A an m x m Hermitian-valued symbol that is uniformly positive
/// definite on the circle, B a k x m symbol and D a k x k symbol.  The
/// Hermitian structure of A is a coefficient-level property
/// (adjoint_symbol(A) == A); positive definiteness is checked on working
/// grids where it is needed.
struct BlockSymbol {
    LaurentMatrixPoly A, B, D;

    int m() const { return A.rows(); }
    int k() const { return D.rows(); }

    static BlockSymbol make(LaurentMatrixPoly A, LaurentMatrixPoly B,
                            LaurentMatrixPoly D, double herm_tol = 1e-12) {
        BlockSymbol bs{std::move(A), std::move(B), std::move(D)};
        bs.validate(herm_tol);
        return bs;
    }

    void validate(double herm_tol = 1e-12) const {
        if (A.rows() != A.cols())
            throw std::invalid_argument("BlockSymbol: A must be square");
        if (D.rows() != D.cols())
            throw std::invalid_argument("BlockSymbol: D must be square");
        if (B.cols() != A.rows() || B.rows() != D.rows())
            throw std::invalid_argument("BlockSymbol: B must map the A block to the D block");
        auto diff = subtract(adjoint_symbol(A), A);
        double scale = std::max(1.0, std::sqrt(A.coeff_sq_norm()));
        if (std::sqrt(diff.coeff_sq_norm()) > herm_tol * scale)
            throw std::invalid_argument("BlockSymbol: A is not Hermitian-valued to tolerance");
    }
};

/// Schur complements D - B A^{-1} B* along a grid, with the smallest
/// eigenvalue of A met anywhere on the grid.
struct SchurGrid {
    int npoints = 0;
    std::vector<Eigen::MatrixXcd> gammas;
    double deltamin = 0.0;
};

/// The full (m+k) x (m+k) symbol with blocks [[A, B*], [B, D]].
inline LaurentMatrixPoly assemble(const BlockSymbol& bs) {
    bs.validate();
    const int m = bs.m(), k = bs.k();
    auto Bstar = adjoint_symbol(bs.B);
    int kmin = std::min({bs.A.kmin(), bs.B.kmin(), Bstar.kmin(), bs.D.kmin()});
    int kmax = std::max({bs.A.kmax(), bs.B.kmax(), Bstar.kmax(), bs.D.kmax()});
    std::vector<Eigen::MatrixXcd> cs;
    cs.reserve(kmax - kmin + 1);
    for (int kk = kmin; kk <= kmax; ++kk) {
        Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(m + k, m + k);
        c.topLeftCorner(m, m) = bs.A.coeff(kk);
        c.topRightCorner(m, k) = Bstar.coeff(kk);
        c.bottomLeftCorner(k, m) = bs.B.coeff(kk);
        c.bottomRightCorner(k, k) = bs.D.coeff(kk);
        cs.push_back(std::move(c));
    }
    return LaurentMatrixPoly(m + k, m + k, kmin, kmax, std::move(cs));
}

inline SchurGrid schur_on_grid(const BlockSymbol& bs, int npoints,
                               double delta0 = 1e-8, double herm_tol = 1e-12) {
    bs.validate(herm_tol);
    auto gA = eval_grid(bs.A, npoints);
    auto gB = eval_grid(bs.B, npoints);
    auto gD = eval_grid(bs.D, npoints);
    SchurGrid sg;
    sg.npoints = npoints;
    sg.gammas.resize(npoints);
    sg.deltamin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < npoints; ++j) {
        Eigen::MatrixXcd Aj = 0.5 * (gA.values[j] + gA.values[j].adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Aj);
        double lmin = es.eigenvalues()(0);
        if (!(lmin >= delta0)) {
            std::ostringstream os;
            os << "schur_on_grid: A is not uniformly positive definite, lambda_min = "
               << lmin << " at node " << j << " (threshold " << delta0 << ")";
            throw std::domain_error(os.str());
        }
        sg.deltamin = std::min(sg.deltamin, lmin);
        Eigen::LLT<Eigen::MatrixXcd> llt(Aj);
        sg.gammas[j] = gD.values[j] - gB.values[j] * llt.solve(gB.values[j].adjoint());
    }
    return sg;
}

/// Residual of the congruence G = L diag(I, Gamma) L* with
/// L = [[A^{1/2}, 0], [B A^{-1/2}, I]], largest over the grid.  The square
/// root comes from the Hermitian eigendecomposition; negative eigenvalues are
/// a hard error, never clamped.
struct CongruenceReport {
    double max_residual = 0.0;
    double tol = 0.0;
    bool pass = false;
};

inline CongruenceReport congruence_check(const BlockSymbol& bs, int npoints,
                                         double tol = 1e-10) {
    const int m = bs.m(), k = bs.k();
    auto sg = schur_on_grid(bs, npoints);
    auto gG = eval_grid(assemble(bs), npoints);
    auto gA = eval_grid(bs.A, npoints);
    auto gB = eval_grid(bs.B, npoints);
    double worst = 0.0;
    for (int j = 0; j < npoints; ++j) {
        Eigen::MatrixXcd Aj = 0.5 * (gA.values[j] + gA.values[j].adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Aj);
        if (es.eigenvalues()(0) < 0) {
            std::ostringstream os;
            os << "congruence_check: negative eigenvalue " << es.eigenvalues()(0)
               << " of A at node " << j;
            throw std::domain_error(os.str());
        }
        Eigen::VectorXd rt = es.eigenvalues().cwiseSqrt();
        Eigen::MatrixXcd S = es.eigenvectors() * rt.asDiagonal() *
                             es.eigenvectors().adjoint();
        Eigen::MatrixXcd Si = es.eigenvectors() * rt.cwiseInverse().asDiagonal() *
                              es.eigenvectors().adjoint();
        Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(m + k, m + k);
        L.topLeftCorner(m, m) = S;
        L.bottomLeftCorner(k, m) = gB.values[j] * Si;
        L.bottomRightCorner(k, k) = Eigen::MatrixXcd::Identity(k, k);
        Eigen::MatrixXcd mid = Eigen::MatrixXcd::Identity(m + k, m + k);
        mid.bottomRightCorner(k, k) = sg.gammas[j];
        double resid = (gG.values[j] - L * mid * L.adjoint()).norm();
        worst = std::max(worst, resid);
    }
    return CongruenceReport{worst, tol, worst <= tol};
}

} // namespace whc

#endif // WHC_BLOCKSTRUCT_HPP
