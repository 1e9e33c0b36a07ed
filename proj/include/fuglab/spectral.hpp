#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>
#include <sstream>
#include <vector>

#include "fuglab/matrix.hpp"

namespace fuglab {

/// Anything above this normality residual is rejected by decompose().
inline constexpr double normal_gate = 1e-8;

/// ||B B* - B* B||_F / max(1, ||B||_F^2). Zero (to machine precision) iff B
/// is normal.
inline double normality_residual(const CMatrix& b) {
    require_finite(b, "normality_residual");
    require_square(b, "normality_residual");
    const CMatrix bs = b.adjoint();
    const double defect = (b * bs - bs * b).norm();
    const double nb = b.norm();
    return defect / std::max(1.0, nb * nb);
}

inline bool is_normal(const CMatrix& b, double gate = normal_gate) {
    return normality_residual(b) <= gate;
}

/// Default clustering tolerance: noise-level eigenvalue splitting at double
/// precision scales with ||B||_F.
inline double default_cluster_tol(const CMatrix& b) {
    return std::max(1e-10, 1e-8 * b.norm());
}

/// One cluster of machine eigenvalues treated as a single spectral point.
struct EigenCluster {
    Complex representative;            // mean of the members
    std::vector<std::size_t> members;  // indices into the input list
};

namespace detail {

inline std::string format_complex(Complex z) {
    std::ostringstream os;
    os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    return os.str();
}

}  // namespace detail

/// Partitions eigenvalues into clusters by single linkage at `tol`. Any two
/// members of a cluster must themselves be within `tol` and distinct cluster
/// representatives must be separated by more than `tol`; a chain that links
/// points farther apart than `tol` is reported as ambiguous rather than
/// silently merged, because downstream constructions depend on the
/// distinctness of the cluster representatives.
inline std::vector<EigenCluster> cluster_eigenvalues(const std::vector<Complex>& values,
                                                     double tol) {
    if (tol <= 0.0) {
        throw Error("cluster_eigenvalues: tolerance must be positive");
    }
    const std::size_t n = values.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(values[i] - values[j]) <= tol) {
                parent[find(i)] = find(j);
            }
        }
    }

    std::vector<EigenCluster> clusters;
    for (std::size_t root = 0; root < n; ++root) {
        if (find(root) != root) continue;
        EigenCluster c;
        Complex sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (find(i) == root) {
                c.members.push_back(i);
                sum += values[i];
            }
        }
        c.representative = sum / static_cast<double>(c.members.size());
        clusters.push_back(std::move(c));
    }

    for (const auto& c : clusters) {
        for (std::size_t a = 0; a < c.members.size(); ++a) {
            for (std::size_t b = a + 1; b < c.members.size(); ++b) {
                const double gap = std::abs(values[c.members[a]] - values[c.members[b]]);
                if (gap > tol) {
                    std::ostringstream msg;
                    msg << "cluster_eigenvalues: values "
                        << detail::format_complex(values[c.members[a]]) << " and "
                        << detail::format_complex(values[c.members[b]])
                        << " are chained through intermediate values but lie " << gap
                        << " apart (> tol " << tol << "); choose a different tolerance";
                    throw ClusterAmbiguityError(msg.str());
                }
            }
        }
    }
    for (std::size_t a = 0; a < clusters.size(); ++a) {
        for (std::size_t b = a + 1; b < clusters.size(); ++b) {
            const double gap = std::abs(clusters[a].representative - clusters[b].representative);
            if (gap <= tol) {
                std::ostringstream msg;
                msg << "cluster_eigenvalues: cluster representatives "
                    << detail::format_complex(clusters[a].representative) << " and "
                    << detail::format_complex(clusters[b].representative) << " are only " << gap
                    << " apart (<= tol " << tol << "); choose a different tolerance";
                throw ClusterAmbiguityError(msg.str());
            }
        }
    }

    std::sort(clusters.begin(), clusters.end(), [](const EigenCluster& a, const EigenCluster& b) {
        if (a.representative.real() != b.representative.real()) {
            return a.representative.real() < b.representative.real();
        }
        return a.representative.imag() < b.representative.imag();
    });
    return clusters;
}

/// Spectral data of a normal matrix: pairwise-distinct eigenvalues with
/// orthogonal eigenprojectors summing to the identity.
struct SpectralDecomp {
    Index dim = 0;
    std::vector<Complex> eigenvalues;
    std::vector<CMatrix> projectors;
    std::vector<Index> multiplicities;
    double cluster_tol = 0.0;
    double normality_residual = 0.0;

    std::size_t distinct_count() const { return eigenvalues.size(); }
};

/// Worst-case defects of the projector family; all should sit at rounding
/// level for a decomposition produced by decompose().
struct SpectralDefects {
    double completeness = 0.0;   // ||sum E_j - I||_F relative
    double orthogonality = 0.0;  // max ||E_j E_k - delta_jk E_j||_F
    double hermiticity = 0.0;    // max ||E_j* - E_j||_F
    double trace = 0.0;          // max |trace(E_j) - multiplicity_j|
};

inline SpectralDefects projector_defects(const SpectralDecomp& d) {
    SpectralDefects out;
    CMatrix sum = CMatrix::Zero(d.dim, d.dim);
    for (std::size_t j = 0; j < d.projectors.size(); ++j) {
        const CMatrix& e = d.projectors[j];
        sum += e;
        out.hermiticity = std::max(out.hermiticity, (e.adjoint() - e).norm());
        out.trace = std::max(out.trace,
                             std::abs(e.trace() - Complex(static_cast<double>(d.multiplicities[j]))));
        for (std::size_t k = 0; k < d.projectors.size(); ++k) {
            const CMatrix prod = e * d.projectors[k];
            const CMatrix expect = (j == k) ? e : CMatrix(CMatrix::Zero(d.dim, d.dim));
            out.orthogonality = std::max(out.orthogonality, (prod - expect).norm());
        }
    }
    out.completeness = relative_residual(sum, CMatrix::Identity(d.dim, d.dim));
    return out;
}

/// Decomposes a normal matrix into distinct eigenvalues and orthogonal
/// eigenprojectors. Projectors are assembled from Schur vectors, which makes
/// them Hermitian and idempotent by construction; for normal input the Schur
/// form is diagonal up to rounding.
inline SpectralDecomp decompose(const CMatrix& b, double cluster_tol) {
    require_finite(b, "decompose");
    require_square(b, "decompose");
    if (cluster_tol <= 0.0) {
        throw Error("decompose: cluster_tol must be positive");
    }
    const double nres = normality_residual(b);
    if (nres > normal_gate) {
        std::ostringstream msg;
        msg << "decompose: input is not normal (residual " << nres << " > gate " << normal_gate
            << ")";
        throw NormalityError(msg.str(), nres);
    }

    const Index n = b.rows();
    Eigen::ComplexSchur<CMatrix> schur(b, /*computeU=*/true);
    if (schur.info() != Eigen::Success) {
        throw Error("decompose: Schur iteration failed to converge");
    }
    const CMatrix& u = schur.matrixU();
    std::vector<Complex> raw(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) raw[static_cast<std::size_t>(i)] = schur.matrixT()(i, i);

    SpectralDecomp d;
    d.dim = n;
    d.cluster_tol = cluster_tol;
    d.normality_residual = nres;
    for (const EigenCluster& c : cluster_eigenvalues(raw, cluster_tol)) {
        CMatrix e = CMatrix::Zero(n, n);
        for (std::size_t idx : c.members) {
            const auto col = u.col(static_cast<Index>(idx));
            e += col * col.adjoint();
        }
        d.eigenvalues.push_back(c.representative);
        d.projectors.push_back(std::move(e));
        d.multiplicities.push_back(static_cast<Index>(c.members.size()));
    }
    return d;
}

inline SpectralDecomp decompose(const CMatrix& b) {
    return decompose(b, default_cluster_tol(b));
}

/// Rebuilds sum_j lambda_j E_j.
inline CMatrix reconstruct(const SpectralDecomp& d) {
    CMatrix out = CMatrix::Zero(d.dim, d.dim);
    for (std::size_t j = 0; j < d.eigenvalues.size(); ++j) {
        out += d.eigenvalues[j] * d.projectors[j];
    }
    return out;
}

}  // namespace fuglab
