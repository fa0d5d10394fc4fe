#ifndef QRF_LINALG_HPP
#define QRF_LINALG_HPP

// Dense complex matrices, row-major storage.
//
// Composite index convention used throughout the library: for a tensor
// factorization [d0, d1, ..., dk] the flat index is
//   i = i0*(d1*...*dk) + i1*(d2*...*dk) + ... + ik,
// i.e. the first factor is the major index, matching kron(a, b) with `a`
// as the left (major) factor.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qrf {

using cplx = std::complex<double>;

struct unsupported_operation : std::logic_error {
    using std::logic_error::logic_error;
};

class Matrix {
  public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative dimension");
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    static Matrix zero(int rows, int cols) { return Matrix(rows, cols); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    size_t size() const { return a_.size(); }

    cplx& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
    const cplx& operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

    cplx* data() { return a_.data(); }
    const cplx* data() const { return a_.data(); }
    const std::vector<cplx>& entries() const { return a_; }

    Matrix& operator+=(const Matrix& o) {
        check_same_shape(o, "operator+=");
        for (size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same_shape(o, "operator-=");
        for (size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }
    Matrix& operator*=(cplx s) {
        for (auto& v : a_) v *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, cplx s) { return a *= s; }
    friend Matrix operator*(cplx s, Matrix a) { return a *= s; }
    friend Matrix operator*(Matrix a, double s) { return a *= cplx(s, 0); }
    friend Matrix operator*(double s, Matrix a) { return a *= cplx(s, 0); }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_)
            throw std::invalid_argument("Matrix multiply: inner dimensions differ");
        Matrix c(a.rows_, b.cols_);
        c.map() = a.map() * b.map();
        return c;
    }

    Matrix dagger() const {
        Matrix m(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }
    Matrix transpose() const {
        Matrix m(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }
    Matrix conjugate() const {
        Matrix m(rows_, cols_);
        for (size_t k = 0; k < a_.size(); ++k) m.a_[k] = std::conj(a_[k]);
        return m;
    }

    cplx trace() const {
        if (!is_square()) throw std::invalid_argument("trace: non-square matrix");
        cplx t = 0;
        for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0;
        for (const auto& v : a_) s += std::norm(v);
        return std::sqrt(s);
    }

    double max_abs() const {
        double s = 0;
        for (const auto& v : a_) s = std::max(s, std::abs(v));
        return s;
    }

    bool all_finite() const {
        for (const auto& v : a_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }

    using EigenMap = Eigen::Map<Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
    using ConstEigenMap =
        Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
    EigenMap map() { return EigenMap(a_.data(), rows_, cols_); }
    ConstEigenMap map() const { return ConstEigenMap(a_.data(), rows_, cols_); }

  private:
    void check_same_shape(const Matrix& o, const char* who) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument(std::string(who) + ": shape mismatch");
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<cplx> a_;
};

// Tensor-factor dimensions annotating a flat index space.
struct DimFactorization {
    std::vector<int> dims;

    DimFactorization(std::initializer_list<int> d) : dims(d) { validate(); }
    explicit DimFactorization(std::vector<int> d) : dims(std::move(d)) { validate(); }

    int total() const {
        return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
    }

  private:
    void validate() const {
        if (dims.empty()) throw std::invalid_argument("DimFactorization: empty");
        for (int d : dims)
            if (d <= 0) throw std::invalid_argument("DimFactorization: nonpositive factor");
    }
};

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx(0)) continue;
            for (int k = 0; k < b.rows(); ++k)
                for (int l = 0; l < b.cols(); ++l)
                    c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return c;
}

// Traces out every factor except `keep`.
inline Matrix partial_trace(const Matrix& m, const DimFactorization& dims, int keep) {
    if (!m.is_square()) throw std::invalid_argument("partial_trace: non-square matrix");
    if (dims.total() != m.rows())
        throw std::invalid_argument("partial_trace: factor dimensions do not match matrix");
    const int nf = int(dims.dims.size());
    if (keep < 0 || keep >= nf) throw std::invalid_argument("partial_trace: keep index out of range");

    std::vector<int> stride(nf, 1);
    for (int f = nf - 2; f >= 0; --f) stride[f] = stride[f + 1] * dims.dims[f + 1];

    const int dk = dims.dims[keep];
    const int sk = stride[keep];
    // Enumerate the traced-out composite index by walking all flat indices
    // with the kept factor pinned to zero.
    std::vector<int> rest;
    const int total = m.rows();
    rest.reserve(size_t(total) / dk);
    for (int idx = 0; idx < total; ++idx) {
        if ((idx / sk) % dk == 0) rest.push_back(idx);
    }

    Matrix out(dk, dk);
    for (int i = 0; i < dk; ++i)
        for (int j = 0; j < dk; ++j) {
            cplx s = 0;
            for (int r : rest) s += m(r + i * sk, r + j * sk);
            out(i, j) = s;
        }
    return out;
}

inline std::vector<double> hermitian_eigenvalues(const Matrix& m) {
    if (!m.is_square()) throw std::invalid_argument("hermitian_eigenvalues: non-square matrix");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m.map(), Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    return std::vector<double>(ev.data(), ev.data() + ev.size());
}

// Eigenvalues ascending; eigenvectors as matching columns.
inline std::pair<std::vector<double>, Matrix> hermitian_eig(const Matrix& m) {
    if (!m.is_square()) throw std::invalid_argument("hermitian_eig: non-square matrix");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m.map());
    const auto& ev = solver.eigenvalues();
    Matrix vecs(m.rows(), m.cols());
    vecs.map() = solver.eigenvectors();
    return {std::vector<double>(ev.data(), ev.data() + ev.size()), vecs};
}

inline double trace_distance(const Matrix& a, const Matrix& b) {
    if (!a.is_square() || !b.is_square())
        throw std::invalid_argument("trace_distance: non-square input");
    if (a.rows() != b.rows()) throw std::invalid_argument("trace_distance: dimension mismatch");
    Matrix d = a - b;
    // Inputs are Hermitian by contract; symmetrize away rounding.
    d = (d + d.dagger()) * 0.5;
    double s = 0;
    for (double ev : hermitian_eigenvalues(d)) s += std::abs(ev);
    return 0.5 * s;
}

// True iff `m` is Hermitian within tol and its spectrum is >= -tol.
inline bool assert_psd(const Matrix& m, double tol) {
    if (!m.is_square()) throw std::invalid_argument("assert_psd: non-square matrix");
    if ((m - m.dagger()).max_abs() > tol) return false;
    Matrix h = (m + m.dagger()) * 0.5;
    auto ev = hermitian_eigenvalues(h);
    return ev.empty() || ev.front() >= -tol;
}

}  // namespace qrf

#endif
