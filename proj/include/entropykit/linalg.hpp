#ifndef ENTROPYKIT_LINALG_HPP
#define ENTROPYKIT_LINALG_HPP

#include <cstddef>
#include <vector>

namespace entropykit {

// Small dense row-major matrix. Everything in this project is tiny
// (state alphabets, day-by-day correlation matrices, MLP layers), so a
// plain contiguous buffer is all we need.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    Matrix transposed() const;

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_, cols_;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

double frobenius_norm(const Matrix& a);

// Largest singular value, computed as sqrt(lambda_max(A^T A)).
double spectral_norm(const Matrix& a);

// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
// Eigenvalues ascending; vectors(i, k) is component i of eigenvector k.
struct SymmetricEigen {
    std::vector<double> values;
    Matrix vectors;
};

SymmetricEigen eigen_symmetric(const Matrix& a);

} // namespace entropykit

#endif
