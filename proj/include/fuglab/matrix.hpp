#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>

namespace fuglab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Incompatible matrix dimensions.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// NaN or Inf entry reached a public operation.
class NonFiniteError : public Error {
public:
    using Error::Error;
};

/// Input failed the normality gate; carries the measured residual.
class NormalityError : public Error {
public:
    NormalityError(const std::string& msg, double residual) : Error(msg), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

/// Eigenvalue clustering could not produce well-separated clusters at the
/// requested tolerance.
class ClusterAmbiguityError : public Error {
public:
    using Error::Error;
};

/// A value table does not cover a required spectral point.
class SpectrumCoverageError : public Error {
public:
    SpectrumCoverageError(const std::string& msg, Complex point) : Error(msg), point_(point) {}
    Complex point() const { return point_; }

private:
    Complex point_;
};

/// Interpolation nodes collide but carry conflicting values.
class NodeConflictError : public Error {
public:
    using Error::Error;
};

/// A matrix required to be unitary is not; carries the defect norm.
class NotUnitaryError : public Error {
public:
    NotUnitaryError(const std::string& msg, double defect) : Error(msg), defect_(defect) {}
    double defect() const { return defect_; }

private:
    double defect_;
};

/// Invalid suite configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// File read/write failure.
class IoError : public Error {
public:
    using Error::Error;
};

inline bool is_finite(const CMatrix& m) {
    return m.allFinite();
}

inline void require_finite(const CMatrix& m, const char* what) {
    if (!is_finite(m)) {
        throw NonFiniteError(std::string(what) + ": matrix contains NaN or Inf entries");
    }
}

inline void require_square(const CMatrix& m, const char* what) {
    if (m.rows() != m.cols()) {
        std::ostringstream msg;
        msg << what << ": expected square matrix, got " << m.rows() << "x" << m.cols();
        throw ShapeError(msg.str());
    }
}

/// Conjugate transpose.
inline CMatrix adjoint(const CMatrix& m) {
    require_finite(m, "adjoint");
    return m.adjoint();
}

/// Matrix product; throws ShapeError on incompatible inner dimensions.
inline CMatrix multiply(const CMatrix& a, const CMatrix& b) {
    require_finite(a, "multiply");
    require_finite(b, "multiply");
    if (a.cols() != b.rows()) {
        std::ostringstream msg;
        msg << "multiply: incompatible shapes " << a.rows() << "x" << a.cols() << " and "
            << b.rows() << "x" << b.cols();
        throw ShapeError(msg.str());
    }
    return a * b;
}

/// Kronecker product, (a.rows*b.rows) x (a.cols*b.cols).
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
    require_finite(a, "kron");
    require_finite(b, "kron");
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

/// Column-stacking vectorization. The convention is fixed so that
/// vec(A X B) = kron(B^T, A) vec(X).
inline CVector vec(const CMatrix& m) {
    require_finite(m, "vec");
    return m.reshaped();
}

/// Inverse of vec; v must hold exactly rows*cols entries.
inline CMatrix unvec(const CVector& v, Index rows, Index cols) {
    if (v.size() != rows * cols) {
        std::ostringstream msg;
        msg << "unvec: vector of length " << v.size() << " cannot fill a " << rows << "x" << cols
            << " matrix";
        throw ShapeError(msg.str());
    }
    CMatrix m = v.reshaped(rows, cols);
    require_finite(m, "unvec");
    return m;
}

inline double frobenius_norm(const CMatrix& m) {
    require_finite(m, "frobenius_norm");
    return m.norm();
}

/// ||X - Y||_F / max(1, ||X||_F, ||Y||_F). The floor at 1 keeps verdicts
/// stable near the zero matrix.
inline double relative_residual(const CMatrix& x, const CMatrix& y) {
    require_finite(x, "relative_residual");
    require_finite(y, "relative_residual");
    if (x.rows() != y.rows() || x.cols() != y.cols()) {
        std::ostringstream msg;
        msg << "relative_residual: shape mismatch " << x.rows() << "x" << x.cols() << " vs "
            << y.rows() << "x" << y.cols();
        throw ShapeError(msg.str());
    }
    const double denom = std::max({1.0, x.norm(), y.norm()});
    return (x - y).norm() / denom;
}

/// Frobenius inner product <X, Y> = sum conj(x_ij) y_ij.
inline Complex frobenius_inner(const CMatrix& x, const CMatrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) {
        throw ShapeError("frobenius_inner: shape mismatch");
    }
    return (x.conjugate().cwiseProduct(y)).sum();
}

}  // namespace fuglab
