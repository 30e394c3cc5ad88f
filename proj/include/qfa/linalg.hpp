#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

// Dense complex vector/matrix kernel: span-membership tests via modified
// Gram-Schmidt, orthonormal frames, and unitary completion from partial
// isometry constraints. Everything is double precision and deterministic.

namespace qfa {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

inline constexpr double kTolRank = 1e-9;
inline constexpr double kTolIso = 1e-8;
inline constexpr double kTolOrtho = 1e-10;

// Thrown when requested images cannot come from any single unitary map
// (their Gram matrix differs from the domain's beyond tolerance).
struct IsometryViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// <a,b> = sum_i conj(a_i) b_i  (conjugate-linear in the first argument)
inline Complex inner(const CVector& a, const CVector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("inner: dimension mismatch");
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

inline double norm_sq(const CVector& v) {
    double s = 0.0;
    for (const Complex& c : v) s += std::norm(c);
    return s;
}

inline double norm(const CVector& v) { return std::sqrt(norm_sq(v)); }

inline void scale(CVector& v, Complex s) {
    for (Complex& c : v) c *= s;
}

// y += s * x
inline void axpy(CVector& y, Complex s, const CVector& x) {
    if (y.size() != x.size())
        throw std::invalid_argument("axpy: dimension mismatch");
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += s * x[i];
}

inline CVector basis_vector(std::size_t dim, std::size_t index) {
    CVector v(dim, Complex{0.0, 0.0});
    v.at(index) = Complex{1.0, 0.0};
    return v;
}

// Dense row-major complex matrix. Entry (i,j) carries amplitude from basis
// state j to basis state i under left multiplication on column vectors.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, Complex{0.0, 0.0}) {}

    static CMatrix identity(std::size_t n) {
        CMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = Complex{1.0, 0.0};
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const std::vector<Complex>& data() const { return a_; }
    std::vector<Complex>& data() { return a_; }

    // y = M x
    CVector apply(const CVector& x) const {
        if (x.size() != cols_)
            throw std::invalid_argument("CMatrix::apply: dimension mismatch");
        CVector y(rows_, Complex{0.0, 0.0});
        for (std::size_t i = 0; i < rows_; ++i) {
            Complex s{0.0, 0.0};
            const Complex* row = a_.data() + i * cols_;
            for (std::size_t j = 0; j < cols_; ++j) s += row[j] * x[j];
            y[i] = s;
        }
        return y;
    }

    CMatrix operator*(const CMatrix& rhs) const {
        if (cols_ != rhs.rows_)
            throw std::invalid_argument("CMatrix::operator*: dimension mismatch");
        CMatrix out(rows_, rhs.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                Complex aik = (*this)(i, k);
                if (aik == Complex{0.0, 0.0}) continue;
                for (std::size_t j = 0; j < rhs.cols_; ++j)
                    out(i, j) += aik * rhs(k, j);
            }
        return out;
    }

    CMatrix adjoint() const {
        CMatrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                out(j, i) = std::conj((*this)(i, j));
        return out;
    }

    bool operator==(const CMatrix& rhs) const {
        return rows_ == rhs.rows_ && cols_ == rhs.cols_ && a_ == rhs.a_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> a_;
};

// ||M^dagger M - I||_F. Zero exactly when M is unitary.
inline double unitarity_defect(const CMatrix& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("unitarity_defect: matrix must be square");
    const std::size_t n = m.rows();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            // (M^dagger M)_{ij} = <col_i, col_j>
            Complex g{0.0, 0.0};
            for (std::size_t k = 0; k < n; ++k)
                g += std::conj(m(k, i)) * m(k, j);
            if (i == j) g -= Complex{1.0, 0.0};
            s += std::norm(g);
        }
    return std::sqrt(s);
}

// A (possibly empty) list of pairwise-orthonormal vectors in C^dim.
struct OrthoFrame {
    std::size_t dim = 0;
    std::vector<CVector> basis;

    OrthoFrame() = default;
    explicit OrthoFrame(std::size_t d) : dim(d) {}

    std::size_t size() const { return basis.size(); }
    const CVector& operator[](std::size_t j) const { return basis[j]; }
};

struct ResidualResult {
    CVector vec;                        // v - sum_j <f_j,v> f_j
    double norm = 0.0;                  // ||vec||
    std::vector<Complex> coefficients;  // <f_j,v> in frame order
};

// Modified Gram-Schmidt with one re-orthogonalization pass. Coefficients are
// accumulated across both passes, so v = sum_j coeff_j f_j + vec holds to
// working precision.
inline ResidualResult residual(const CVector& v, const OrthoFrame& frame) {
    if (v.size() != frame.dim)
        throw std::invalid_argument("residual: dimension mismatch");
    ResidualResult r;
    r.vec = v;
    r.coefficients.assign(frame.size(), Complex{0.0, 0.0});
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < frame.size(); ++j) {
            Complex c = inner(frame[j], r.vec);
            axpy(r.vec, -c, frame[j]);
            r.coefficients[j] += c;
        }
    }
    r.norm = norm(r.vec);
    return r;
}

// Appends the normalized residual of v when it exceeds tol_rank; otherwise
// leaves the frame unchanged. The frame never grows past its ambient
// dimension.
inline bool extend_frame(OrthoFrame& frame, const CVector& v, double tol_rank = kTolRank) {
    if (v.size() != frame.dim)
        throw std::invalid_argument("extend_frame: dimension mismatch");
    if (tol_rank <= 0.0)
        throw std::invalid_argument("extend_frame: tol_rank must be positive");
    if (frame.size() == frame.dim) return false;
    ResidualResult r = residual(v, frame);
    if (r.norm <= tol_rank) return false;
    scale(r.vec, Complex{1.0 / r.norm, 0.0});
    frame.basis.push_back(std::move(r.vec));
    return true;
}

namespace detail {

// Extends the frame to a full orthonormal basis of C^dim by sweeping the
// standard basis in index order and keeping candidates whose residual
// exceeds tol_rank. One sweep always completes the frame: any e_i skipped
// earlier stays within tol_rank of the final span.
inline std::vector<CVector> complement_frame(OrthoFrame& frame, double tol_rank) {
    std::vector<CVector> added;
    for (std::size_t i = 0; i < frame.dim && frame.size() < frame.dim; ++i) {
        if (extend_frame(frame, basis_vector(frame.dim, i), tol_rank))
            added.push_back(frame.basis.back());
    }
    if (frame.size() != frame.dim)
        throw std::logic_error("complement_frame: frame incomplete after sweep");
    return added;
}

}  // namespace detail

// Builds the n x n unitary V with V * domain[j] = images[j]. The required
// images must form an (approximate) orthonormal system matching the domain's
// Gram matrix; otherwise no unitary exists and IsometryViolation is thrown.
// The action on the orthogonal complement of the domain is a deterministic
// completion: both complements are drawn from the standard basis in index
// order and paired off.
inline CMatrix complete_isometry(const OrthoFrame& domain,
                                 const std::vector<CVector>& images,
                                 double tol_iso = kTolIso,
                                 double tol_rank = kTolRank) {
    const std::size_t n = domain.dim;
    const std::size_t m = domain.size();
    if (images.size() != m)
        throw std::invalid_argument("complete_isometry: one image per domain vector required");
    for (const CVector& y : images)
        if (y.size() != n)
            throw std::invalid_argument("complete_isometry: image dimension mismatch");

    // No unitary can change the Gram matrix.
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            Complex gd = inner(domain[i], domain[j]);
            Complex gy = inner(images[i], images[j]);
            if (std::abs(gd - gy) > tol_iso)
                throw IsometryViolation(
                    "complete_isometry: image Gram matrix deviates by " +
                    std::to_string(std::abs(gd - gy)));
        }

    // Orthonormalize the images (they are already orthonormal up to tol_iso,
    // so every image extends the frame) and pair complements.
    OrthoFrame image_frame(n);
    for (const CVector& y : images)
        if (!extend_frame(image_frame, y, tol_rank))
            throw IsometryViolation("complete_isometry: images are linearly dependent");

    OrthoFrame domain_full(n);
    domain_full.basis = domain.basis;
    std::vector<CVector> dom_extra = detail::complement_frame(domain_full, tol_rank);
    std::vector<CVector> img_extra = detail::complement_frame(image_frame, tol_rank);

    CMatrix v(n, n);
    auto add_pair = [&v, n](const CVector& image, const CVector& dom) {
        for (std::size_t i = 0; i < n; ++i) {
            if (image[i] == Complex{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < n; ++j)
                v(i, j) += image[i] * std::conj(dom[j]);
        }
    };
    for (std::size_t j = 0; j < m; ++j) add_pair(image_frame[j], domain[j]);
    for (std::size_t k = 0; k < dom_extra.size(); ++k) add_pair(img_extra[k], dom_extra[k]);

    if (unitarity_defect(v) > tol_iso)
        throw IsometryViolation("complete_isometry: completion is not unitary");
    for (std::size_t j = 0; j < m; ++j) {
        CVector got = v.apply(domain[j]);
        axpy(got, Complex{-1.0, 0.0}, images[j]);
        if (norm(got) > tol_iso)
            throw IsometryViolation("complete_isometry: constraint reconstruction failed");
    }
    return v;
}

}  // namespace qfa
