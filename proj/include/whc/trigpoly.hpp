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

#ifndef WHC_TRIGPOLY_HPP
#define WHC_TRIGPOLY_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

namespace whc {

using Complex = std::complex<double>;

namespace detail {

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline int next_pow2(int n) {
    int p = 1;
    while (p < n) p *= 2;
    return p;
}

inline int mod_index(int k, int n) { return ((k % n) + n) % n; }

} // namespace detail

/// Matrix-valued Laurent polynomial f(t) = sum_{k=kmin..kmax} c_k t^k on the
/// unit circle.  The coefficient band always contains 0 (kmin <= 0 <= kmax);
/// trimming removes all-zero extreme coefficients but never shrinks the band
/// past k = 0, so the zero polynomial has the canonical band [0, 0].
class LaurentMatrixPoly {
  public:
    LaurentMatrixPoly() : LaurentMatrixPoly(1, 1) {}

    LaurentMatrixPoly(int rows, int cols)
        : rows_(rows), cols_(cols), kmin_(0), kmax_(0) {
        if (rows <= 0 || cols <= 0)
            throw std::invalid_argument("LaurentMatrixPoly: rows and cols must be positive");
        coeffs_.push_back(Eigen::MatrixXcd::Zero(rows, cols));
    }

    LaurentMatrixPoly(int rows, int cols, int kmin, int kmax,
                      std::vector<Eigen::MatrixXcd> coeffs)
        : rows_(rows), cols_(cols), kmin_(kmin), kmax_(kmax),
          coeffs_(std::move(coeffs)) {
        if (rows <= 0 || cols <= 0)
            throw std::invalid_argument("LaurentMatrixPoly: rows and cols must be positive");
        if (kmin > 0 || kmax < 0)
            throw std::invalid_argument("LaurentMatrixPoly: band must contain 0 (kmin <= 0 <= kmax)");
        if ((int)coeffs_.size() != kmax - kmin + 1)
            throw std::invalid_argument("LaurentMatrixPoly: coefficient count does not match band");
        for (const auto& c : coeffs_)
            if (c.rows() != rows || c.cols() != cols)
                throw std::invalid_argument("LaurentMatrixPoly: coefficient shape mismatch");
        trim();
    }

    static LaurentMatrixPoly identity(int n) {
        LaurentMatrixPoly f(n, n);
        f.coeffs_[0] = Eigen::MatrixXcd::Identity(n, n);
        return f;
    }

    static LaurentMatrixPoly constant(const Eigen::MatrixXcd& c) {
        LaurentMatrixPoly f((int)c.rows(), (int)c.cols());
        f.coeffs_[0] = c;
        return f;
    }

    /// c * t^k
    static LaurentMatrixPoly monomial(int k, const Eigen::MatrixXcd& c) {
        int kmin = std::min(k, 0), kmax = std::max(k, 0);
        std::vector<Eigen::MatrixXcd> cs(kmax - kmin + 1,
                                         Eigen::MatrixXcd::Zero(c.rows(), c.cols()));
        cs[k - kmin] = c;
        return LaurentMatrixPoly((int)c.rows(), (int)c.cols(), kmin, kmax, std::move(cs));
    }

    /// v * t^k as a 1x1 symbol
    static LaurentMatrixPoly scalar_monomial(int k, Complex v = 1.0) {
        Eigen::MatrixXcd c(1, 1);
        c(0, 0) = v;
        return monomial(k, c);
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int kmin() const { return kmin_; }
    int kmax() const { return kmax_; }
    int bandwidth() const { return kmax_ - kmin_ + 1; }

    /// Coefficient at k; zero matrix outside the band.
    Eigen::MatrixXcd coeff(int k) const {
        if (k < kmin_ || k > kmax_) return Eigen::MatrixXcd::Zero(rows_, cols_);
        return coeffs_[k - kmin_];
    }

    const Eigen::MatrixXcd& at(int k) const {
        if (k < kmin_ || k > kmax_)
            throw std::out_of_range("LaurentMatrixPoly::at: index outside band");
        return coeffs_[k - kmin_];
    }

    Eigen::MatrixXcd& at(int k) {
        if (k < kmin_ || k > kmax_)
            throw std::out_of_range("LaurentMatrixPoly::at: index outside band");
        return coeffs_[k - kmin_];
    }

    /// Direct summation at one point of the circle (|t| = 1 expected).
    Eigen::MatrixXcd eval(Complex t) const {
        Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(rows_, cols_);
        Complex p = std::pow(t, kmin_);
        for (int k = kmin_; k <= kmax_; ++k) {
            v += coeffs_[k - kmin_] * p;
            p *= t;
        }
        return v;
    }

    double coeff_sq_norm() const {
        double s = 0;
        for (const auto& c : coeffs_) s += c.squaredNorm();
        return s;
    }

    bool is_zero() const { return coeff_sq_norm() == 0.0; }

  private:
    void trim() {
        while (kmax_ > 0 && coeffs_.back().squaredNorm() == 0.0) {
            coeffs_.pop_back();
            --kmax_;
        }
        while (kmin_ < 0 && coeffs_.front().squaredNorm() == 0.0) {
            coeffs_.erase(coeffs_.begin());
            ++kmin_;
        }
    }

    int rows_, cols_;
    int kmin_, kmax_;
    std::vector<Eigen::MatrixXcd> coeffs_;
};

/// Values of a symbol at the N-th roots of unity t_j = exp(2*pi*i*j/N),
/// j = 0..N-1, with N a power of two.
struct GridSample {
    int npoints = 0;
    std::vector<Eigen::MatrixXcd> values;

    GridSample() = default;
    GridSample(int n, std::vector<Eigen::MatrixXcd> vals)
        : npoints(n), values(std::move(vals)) {
        if (!detail::is_pow2(npoints))
            throw std::invalid_argument("GridSample: npoints must be a power of two");
        if ((int)values.size() != npoints)
            throw std::invalid_argument("GridSample: value count does not match npoints");
        for (const auto& v : values)
            if (v.rows() != values[0].rows() || v.cols() != values[0].cols())
                throw std::invalid_argument("GridSample: inconsistent value shapes");
    }

    int rows() const { return values.empty() ? 0 : (int)values[0].rows(); }
    int cols() const { return values.empty() ? 0 : (int)values[0].cols(); }
    Complex node(int j) const {
        const double pi = std::numbers::pi;
        double a = 2.0 * pi * (double)j / (double)npoints;
        return Complex(std::cos(a), std::sin(a));
    }
};

/// Grid size used when the caller does not fix one: four times the bandwidth
/// rounded up to a power of two, never below 256.
inline int default_grid_size(int bandwidth) {
    return std::max(256, detail::next_pow2(4 * std::max(bandwidth, 1)));
}

/// Sample f at all N-th roots of unity via an FFT per matrix entry.
inline GridSample eval_grid(const LaurentMatrixPoly& f, int npoints) {
    if (!detail::is_pow2(npoints))
        throw std::invalid_argument("eval_grid: npoints must be a power of two");
    if (npoints < f.bandwidth()) {
        std::ostringstream os;
        os << "eval_grid: grid of " << npoints << " points cannot resolve bandwidth "
           << f.bandwidth() << "; need at least " << detail::next_pow2(f.bandwidth())
           << " points";
        throw std::invalid_argument(os.str());
    }
    const int N = npoints;
    Eigen::FFT<double> fft;
    std::vector<Eigen::MatrixXcd> vals(N, Eigen::MatrixXcd::Zero(f.rows(), f.cols()));
    std::vector<Complex> spec(N), out(N);
    for (int r = 0; r < f.rows(); ++r) {
        for (int c = 0; c < f.cols(); ++c) {
            std::fill(spec.begin(), spec.end(), Complex(0, 0));
            for (int k = f.kmin(); k <= f.kmax(); ++k)
                spec[detail::mod_index(k, N)] = f.at(k)(r, c);
            fft.inv(out, spec); // unscaled inverse DFT / N
            for (int j = 0; j < N; ++j)
                vals[j](r, c) = out[j] * (double)N;
        }
    }
    return GridSample(N, std::move(vals));
}

/// Band-limited reconstruction from grid values.  `discarded` is the squared
/// Frobenius coefficient mass falling outside [kmin, kmax] (Parseval).
struct BandProjection {
    LaurentMatrixPoly poly;
    double discarded = 0.0;
};

inline BandProjection from_grid(const GridSample& s, int kmin, int kmax) {
    if (kmin > 0 || kmax < 0)
        throw std::invalid_argument("from_grid: band must contain 0 (kmin <= 0 <= kmax)");
    const int N = s.npoints;
    if (kmax - kmin + 1 > N)
        throw std::invalid_argument("from_grid: requested band is wider than the grid");
    const int rows = s.rows(), cols = s.cols();
    Eigen::FFT<double> fft;
    std::vector<Eigen::MatrixXcd> cs(kmax - kmin + 1, Eigen::MatrixXcd::Zero(rows, cols));
    std::vector<char> kept(N, 0);
    for (int k = kmin; k <= kmax; ++k) kept[detail::mod_index(k, N)] = 1;
    double discarded = 0.0;
    std::vector<Complex> vals(N), spec(N);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            for (int j = 0; j < N; ++j) vals[j] = s.values[j](r, c);
            fft.fwd(spec, vals);
            for (int m = 0; m < N; ++m) {
                Complex ck = spec[m] / (double)N;
                if (!kept[m]) discarded += std::norm(ck);
            }
            for (int k = kmin; k <= kmax; ++k)
                cs[k - kmin](r, c) = spec[detail::mod_index(k, N)] / (double)N;
        }
    }
    return BandProjection{LaurentMatrixPoly(rows, cols, kmin, kmax, std::move(cs)), discarded};
}

/// Exact coefficient convolution.
inline LaurentMatrixPoly multiply(const LaurentMatrixPoly& f, const LaurentMatrixPoly& h) {
    if (f.cols() != h.rows())
        throw std::invalid_argument("multiply: inner dimensions do not match");
    int kmin = f.kmin() + h.kmin();
    int kmax = f.kmax() + h.kmax();
    std::vector<Eigen::MatrixXcd> cs(kmax - kmin + 1,
                                     Eigen::MatrixXcd::Zero(f.rows(), h.cols()));
    for (int i = f.kmin(); i <= f.kmax(); ++i)
        for (int j = h.kmin(); j <= h.kmax(); ++j)
            cs[i + j - kmin] += f.at(i) * h.at(j);
    return LaurentMatrixPoly(f.rows(), h.cols(), kmin, kmax, std::move(cs));
}

inline LaurentMatrixPoly add(const LaurentMatrixPoly& f, const LaurentMatrixPoly& h) {
    if (f.rows() != h.rows() || f.cols() != h.cols())
        throw std::invalid_argument("add: shapes do not match");
    int kmin = std::min(f.kmin(), h.kmin());
    int kmax = std::max(f.kmax(), h.kmax());
    std::vector<Eigen::MatrixXcd> cs(kmax - kmin + 1);
    for (int k = kmin; k <= kmax; ++k)
        cs[k - kmin] = f.coeff(k) + h.coeff(k);
    return LaurentMatrixPoly(f.rows(), f.cols(), kmin, kmax, std::move(cs));
}

inline LaurentMatrixPoly scale(const LaurentMatrixPoly& f, Complex a) {
    std::vector<Eigen::MatrixXcd> cs;
    cs.reserve(f.bandwidth());
    for (int k = f.kmin(); k <= f.kmax(); ++k) cs.push_back(a * f.at(k));
    return LaurentMatrixPoly(f.rows(), f.cols(), f.kmin(), f.kmax(), std::move(cs));
}

inline LaurentMatrixPoly subtract(const LaurentMatrixPoly& f, const LaurentMatrixPoly& h) {
    return add(f, scale(h, -1.0));
}

/// Pointwise adjoint on the circle: f*(t) = f(t)^H, so coefficients map to
/// c'_k = (c_{-k})^H.  Hermitian-valued symbols are the fixed points.
inline LaurentMatrixPoly adjoint_symbol(const LaurentMatrixPoly& f) {
    int kmin = -f.kmax(), kmax = -f.kmin();
    std::vector<Eigen::MatrixXcd> cs;
    cs.reserve(f.bandwidth());
    for (int k = kmin; k <= kmax; ++k)
        cs.push_back(f.at(-k).adjoint());
    return LaurentMatrixPoly(f.cols(), f.rows(), kmin, kmax, std::move(cs));
}

/// Keep coefficients with k >= 0 (constants land on the plus side).
inline LaurentMatrixPoly project_plus(const LaurentMatrixPoly& f) {
    std::vector<Eigen::MatrixXcd> cs;
    for (int k = 0; k <= f.kmax(); ++k) cs.push_back(f.coeff(k));
    return LaurentMatrixPoly(f.rows(), f.cols(), 0, f.kmax(), std::move(cs));
}

/// The (r, c) entry as a scalar symbol.
inline LaurentMatrixPoly entry_poly(const LaurentMatrixPoly& f, int r, int c) {
    if (r < 0 || r >= f.rows() || c < 0 || c >= f.cols())
        throw std::out_of_range("entry_poly: entry outside the matrix");
    std::vector<Eigen::MatrixXcd> cs;
    cs.reserve(f.bandwidth());
    for (int k = f.kmin(); k <= f.kmax(); ++k) {
        Eigen::MatrixXcd e(1, 1);
        e(0, 0) = f.at(k)(r, c);
        cs.push_back(e);
    }
    return LaurentMatrixPoly(1, 1, f.kmin(), f.kmax(), std::move(cs));
}

/// Keep coefficients with k <= -1.
inline LaurentMatrixPoly project_minus(const LaurentMatrixPoly& f) {
    if (f.kmin() >= 0) return LaurentMatrixPoly(f.rows(), f.cols());
    std::vector<Eigen::MatrixXcd> cs;
    for (int k = f.kmin(); k <= -1; ++k) cs.push_back(f.at(k));
    cs.push_back(Eigen::MatrixXcd::Zero(f.rows(), f.cols()));
    return LaurentMatrixPoly(f.rows(), f.cols(), f.kmin(), 0, std::move(cs));
}

/// Pointwise inverse of a grid sample together with the worst condition
/// number met along the grid.
struct PointwiseInverse {
    GridSample grid;
    double worst_cond = 0.0;
};

inline PointwiseInverse inverse_on_grid(const GridSample& s, double cond_limit = 1e12) {
    if (s.rows() != s.cols())
        throw std::invalid_argument("inverse_on_grid: values must be square");
    std::vector<Eigen::MatrixXcd> inv(s.npoints);
    double worst = 0.0;
    for (int j = 0; j < s.npoints; ++j) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s.values[j]);
        double smax = svd.singularValues()(0);
        double smin = svd.singularValues()(svd.singularValues().size() - 1);
        double cond = (smin > 0.0) ? smax / smin : std::numeric_limits<double>::infinity();
        worst = std::max(worst, cond);
        if (!(cond <= cond_limit)) {
            std::ostringstream os;
            os << "inverse_on_grid: symbol is numerically singular at node " << j
               << " (condition number " << cond << ")";
            throw std::domain_error(os.str());
        }
        inv[j] = s.values[j].partialPivLu().inverse();
    }
    return PointwiseInverse{GridSample(s.npoints, std::move(inv)), worst};
}

inline std::vector<Complex> determinants(const GridSample& s) {
    if (s.rows() != s.cols())
        throw std::invalid_argument("determinants: values must be square");
    std::vector<Complex> d(s.npoints);
    for (int j = 0; j < s.npoints; ++j) d[j] = s.values[j].determinant();
    return d;
}

/// Winding number of det f around 0, from accumulated argument increments.
/// Refuses when the determinant comes too close to 0 or when consecutive
/// argument jumps reach pi/2 (grid too coarse to track the winding).
inline int det_winding(const GridSample& s, double min_abs_det = 1e-10) {
    const double pi = std::numbers::pi;
    std::vector<Complex> d = determinants(s);
    for (int j = 0; j < s.npoints; ++j) {
        if (!(std::abs(d[j]) > min_abs_det)) {
            std::ostringstream os;
            os << "det_winding: winding undefined, |det| = " << std::abs(d[j])
               << " at node " << j << " (threshold " << min_abs_det << ")";
            throw std::domain_error(os.str());
        }
    }
    double total = 0.0;
    for (int j = 0; j < s.npoints; ++j) {
        Complex ratio = d[(j + 1) % s.npoints] / d[j];
        double jump = std::arg(ratio);
        if (!(std::abs(jump) < pi / 2)) {
            std::ostringstream os;
            os << "det_winding: grid too coarse, argument jump " << std::abs(jump)
               << " at node " << j << " reaches pi/2";
            throw std::domain_error(os.str());
        }
        total += jump;
    }
    double w = total / (2.0 * pi);
    long long k = std::llround(w);
    if (std::abs(w - (double)k) > 1e-6) {
        std::ostringstream os;
        os << "det_winding: accumulated winding " << w << " is not an integer";
        throw std::domain_error(os.str());
    }
    return (int)k;
}

inline GridSample pointwise_product(const GridSample& a, const GridSample& b) {
    if (a.npoints != b.npoints)
        throw std::invalid_argument("pointwise_product: grids differ");
    if (a.cols() != b.rows())
        throw std::invalid_argument("pointwise_product: inner dimensions do not match");
    std::vector<Eigen::MatrixXcd> vals(a.npoints);
    for (int j = 0; j < a.npoints; ++j) vals[j] = a.values[j] * b.values[j];
    return GridSample(a.npoints, std::move(vals));
}

} // namespace whc

#endif // WHC_TRIGPOLY_HPP
