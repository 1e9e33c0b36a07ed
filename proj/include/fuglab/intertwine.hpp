#pragma once

#include <Eigen/SVD>

#include <algorithm>
#include <string>
#include <vector>

#include "fuglab/funcalc.hpp"
#include "fuglab/matrix.hpp"
#include "fuglab/report.hpp"
#include "fuglab/spectral.hpp"

namespace fuglab {

/// Relative singular-value cutoff for null-space decisions.
inline constexpr double default_rank_tol = 1e-10;

/// Orthonormal basis of { X : L X = X R }, the space of operators carrying
/// L into R.
struct IntertwinerSpace {
    CMatrix left;
    CMatrix right;
    std::vector<CMatrix> basis;  // Frobenius-orthonormal
    double rank_tol = default_rank_tol;
    double max_basis_residual = 0.0;  // max over basis of relative_residual(LX, XR)

    std::size_t dimension() const { return basis.size(); }
};

/// Solves L X - X R = 0 by taking the numerical null space of the
/// vectorized operator kron(I, L) - kron(R^T, I). Right singular vectors
/// whose singular value falls below rank_tol * max(sigma_max, 1, ||L||_F,
/// ||R||_F) span the solution space; they unvec to a Frobenius-orthonormal
/// basis. The cutoff is floored at the scale of the inputs because when the
/// spectra coincide entirely the whole system is rounding noise and
/// sigma_max alone would classify nothing as zero. Inputs are expected at
/// O(1) scale. An empty basis is a valid result.
inline IntertwinerSpace intertwiner_space(const CMatrix& l, const CMatrix& r,
                                          double rank_tol = default_rank_tol) {
    require_finite(l, "intertwiner_space");
    require_finite(r, "intertwiner_space");
    require_square(l, "intertwiner_space");
    require_square(r, "intertwiner_space");
    if (rank_tol <= 0.0) throw Error("intertwiner_space: rank_tol must be positive");

    const Index n = l.rows();
    const Index m = r.rows();
    const CMatrix system =
        kron(CMatrix::Identity(m, m), l) - kron(CMatrix(r.transpose()), CMatrix::Identity(n, n));

    // Two-sided Jacobi: slowest of Eigen's SVDs but the most accurate, and
    // immune to the BDCSVD deflation defect that the heavily degenerate
    // spectra of these Kronecker systems trigger in Eigen 3.4.
    Eigen::JacobiSVD<CMatrix> svd(system, Eigen::ComputeFullV);
    const Eigen::VectorXd sigma = svd.singularValues();
    const CMatrix& v = svd.matrixV();

    const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
    const double threshold = rank_tol * std::max({sigma_max, 1.0, l.norm(), r.norm()});

    IntertwinerSpace space;
    space.left = l;
    space.right = r;
    space.rank_tol = rank_tol;
    for (Index i = 0; i < sigma.size(); ++i) {
        if (sigma(i) <= threshold) {
            space.basis.push_back(unvec(v.col(i), n, m));
        }
    }
    for (const CMatrix& x : space.basis) {
        space.max_basis_residual =
            std::max(space.max_basis_residual, relative_residual(l * x, x * r));
    }
    return space;
}

/// Independent dimension count for normal operators: intertwiners live
/// exactly on eigenvalue coincidences, one multiplicity product per
/// coincident pair. Eigenvalues match within the larger of the two
/// clustering tolerances.
inline std::size_t expected_dimension(const SpectralDecomp& left, const SpectralDecomp& right) {
    const double match_tol = std::max(left.cluster_tol, right.cluster_tol);
    std::size_t dim = 0;
    for (std::size_t i = 0; i < left.eigenvalues.size(); ++i) {
        for (std::size_t j = 0; j < right.eigenvalues.size(); ++j) {
            if (std::abs(left.eigenvalues[i] - right.eigenvalues[j]) <= match_tol) {
                dim += static_cast<std::size_t>(left.multiplicities[i]) *
                       static_cast<std::size_t>(right.multiplicities[j]);
            }
        }
    }
    return dim;
}

/// Orthogonal projector onto the vectorized solution space, as an
/// (nm) x (nm) matrix. Useful for comparing two spaces directly.
inline CMatrix space_projector(const IntertwinerSpace& space) {
    const Index size = space.left.rows() * space.right.rows();
    CMatrix p = CMatrix::Zero(size, size);
    for (const CMatrix& x : space.basis) {
        const CVector vx = vec(x);
        p += vx * vx.adjoint();
    }
    return p;
}

namespace detail {

inline void require_normal(const CMatrix& b, const char* what) {
    const double nres = normality_residual(b);
    if (nres > normal_gate) {
        std::ostringstream msg;
        msg << what << ": matrix is not normal (residual " << nres << " > gate " << normal_gate
            << ")";
        throw NormalityError(msg.str(), nres);
    }
}

}  // namespace detail

/// B A = A f(B)  =>  g(B) A = A (g o f)(B), for normal B with the
/// composition realized as a value table on the spectrum. A positive
/// cluster_tol overrides the per-matrix default.
inline ImplicationReport theorem_check(const CMatrix& b, const SpectrumFunction& f,
                                       const SpectrumFunction& g, const CMatrix& a,
                                       const CheckTolerances& tols = {},
                                       double cluster_tol = 0.0) {
    const SpectralDecomp d = cluster_tol > 0.0 ? decompose(b, cluster_tol) : decompose(b);
    const CMatrix fb = apply_function(d, f);
    const CMatrix gb = apply_function(d, g);
    const CMatrix gof_b = apply_function(d, compose_on_spectrum(d, f, g));
    const double hyp = relative_residual(multiply(b, a), multiply(a, fb));
    const double conc = relative_residual(multiply(gb, a), multiply(a, gof_b));
    return classify_implication("theorem21", hyp, conc, tols, a);
}

/// B A = A B*  =>  B* A = A B, for normal B. The conjugate calculus of a
/// normal matrix is its adjoint, so both sides are formed directly.
inline ImplicationReport flip_check(const CMatrix& b, const CMatrix& a,
                                    const CheckTolerances& tols = {}) {
    require_finite(a, "flip_check");
    detail::require_normal(b, "flip_check");
    const CMatrix bs = b.adjoint();
    const double hyp = relative_residual(multiply(b, a), multiply(a, bs));
    const double conc = relative_residual(multiply(bs, a), multiply(a, b));
    return classify_implication("flip", hyp, conc, tols, a);
}

/// B A = A B  =>  B* A = A B*. Normality of B is deliberately not required:
/// non-normal inputs exhibit the failure of the implication, and a FAIL
/// verdict on them is a finding, not an error.
inline ImplicationReport fuglede_check(const CMatrix& b, const CMatrix& a,
                                       const CheckTolerances& tols = {}) {
    require_finite(b, "fuglede_check");
    require_finite(a, "fuglede_check");
    require_square(b, "fuglede_check");
    const CMatrix bs = b.adjoint();
    const double hyp = relative_residual(multiply(b, a), multiply(a, b));
    const double conc = relative_residual(multiply(bs, a), multiply(a, bs));
    return classify_implication("fuglede", hyp, conc, tols, a);
}

/// B A = A C  =>  B* A = A C*, for normal B and C; A may be rectangular.
inline ImplicationReport putnam_check(const CMatrix& b, const CMatrix& c, const CMatrix& a,
                                      const CheckTolerances& tols = {}) {
    require_finite(a, "putnam_check");
    detail::require_normal(b, "putnam_check");
    detail::require_normal(c, "putnam_check");
    const double hyp = relative_residual(multiply(b, a), multiply(a, c));
    const double conc = relative_residual(multiply(b.adjoint(), a), multiply(a, c.adjoint()));
    return classify_implication("putnam", hyp, conc, tols, a);
}

/// B A = A C  =>  C A* = A* B, for normal B and C.
inline ImplicationReport adjoint_transport_check(const CMatrix& b, const CMatrix& c,
                                                 const CMatrix& a,
                                                 const CheckTolerances& tols = {}) {
    require_finite(a, "adjoint_transport_check");
    detail::require_normal(b, "adjoint_transport_check");
    detail::require_normal(c, "adjoint_transport_check");
    const CMatrix as = a.adjoint();
    const double hyp = relative_residual(multiply(b, a), multiply(a, c));
    const double conc = relative_residual(multiply(c, as), multiply(as, b));
    return classify_implication("adjoint_transport", hyp, conc, tols, a);
}

/// Columnwise comparison of ||B* T x|| and ||B T x|| over the standard
/// basis. For normal B the two norms coincide.
struct NormIdentityReport {
    double max_discrepancy = 0.0;
    bool normal = false;
};

inline NormIdentityReport norm_identity_check(const CMatrix& b, const CMatrix& t) {
    require_finite(t, "norm_identity_check");
    const CMatrix bt = multiply(b, t);
    const CMatrix bst = multiply(CMatrix(b.adjoint()), t);
    NormIdentityReport out;
    out.normal = is_normal(b);
    for (Index i = 0; i < t.cols(); ++i) {
        out.max_discrepancy =
            std::max(out.max_discrepancy, std::abs(bst.col(i).norm() - bt.col(i).norm()));
    }
    return out;
}

/// For normal B and Hermitian T: self-adjointness of B T transfers to B* T.
/// The hypothesis residual measures the Hermiticity of B T, the conclusion
/// residual that of B* T.
inline ImplicationReport selfadjoint_product_check(const CMatrix& b, const CMatrix& t,
                                                   double hermitian_tol = 1e-8,
                                                   const CheckTolerances& tols = {}) {
    require_finite(t, "selfadjoint_product_check");
    detail::require_normal(b, "selfadjoint_product_check");
    const double t_defect = relative_residual(t, t.adjoint());
    if (t_defect > hermitian_tol) {
        std::ostringstream msg;
        msg << "selfadjoint_product_check: T is not Hermitian (residual " << t_defect << " > "
            << hermitian_tol << ")";
        throw Error(msg.str());
    }
    const CMatrix bt = multiply(b, t);
    const CMatrix bst = multiply(CMatrix(b.adjoint()), t);
    const double hyp = relative_residual(bt, bt.adjoint());
    const double conc = relative_residual(bst, bst.adjoint());
    return classify_implication("selfadjoint_product", hyp, conc, tols, t);
}

}  // namespace fuglab
