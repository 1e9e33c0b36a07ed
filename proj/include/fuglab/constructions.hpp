#pragma once

#include <Eigen/QR>

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "fuglab/intertwine.hpp"
#include "fuglab/matrix.hpp"
#include "fuglab/spectral.hpp"

namespace fuglab {

/// SplitMix64 mixing step; the basis for all seed derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic per-stream seed from a base seed. Each (base, stream) pair
/// maps to an independent-looking 64-bit seed, so whole campaigns replay
/// from a single integer.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64(splitmix64(base) ^ splitmix64(stream + 0x9e3779b97f4a7c15ULL));
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
    return std::mt19937_64(splitmix64(seed));
}

inline Complex gaussian_complex(std::mt19937_64& engine) {
    std::normal_distribution<double> dist(0.0, 1.0);
    const double re = dist(engine);
    const double im = dist(engine);
    return Complex(re, im);
}

/// Matrix with independent standard complex Gaussian entries.
inline CMatrix gaussian_matrix(Index rows, Index cols, std::mt19937_64& engine) {
    CMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) {
            m(i, j) = gaussian_complex(engine);
        }
    }
    return m;
}

/// Haar-like random unitary: QR of a complex Gaussian matrix with the
/// column phases fixed so the factorization is unique (diagonal of R made
/// real positive). Deterministic for a fixed seed.
inline CMatrix random_unitary(Index n, std::uint64_t seed) {
    if (n < 1) throw Error("random_unitary: dimension must be positive");
    std::mt19937_64 engine = make_engine(seed);
    const CMatrix g = gaussian_matrix(n, n, engine);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j) {
        const Complex d = r(j, j);
        const double mod = std::abs(d);
        q.col(j) *= (mod > 0.0) ? d / mod : Complex(1.0, 0.0);
    }
    return q;
}

/// Normal matrix with an exactly prescribed spectrum: U diag(spectrum) U*
/// for a seeded random unitary U. Eigenvalues must be pairwise separated by
/// at least 1e-6 so the decomposition can recover them.
inline CMatrix random_normal_with_spectrum(const std::vector<Complex>& eigenvalues,
                                           const std::vector<Index>& multiplicities,
                                           std::uint64_t seed) {
    if (eigenvalues.size() != multiplicities.size()) {
        throw ShapeError("random_normal_with_spectrum: eigenvalue and multiplicity lists differ");
    }
    if (eigenvalues.empty()) {
        throw Error("random_normal_with_spectrum: spectrum must be non-empty");
    }
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        if (multiplicities[i] < 1) {
            throw Error("random_normal_with_spectrum: multiplicities must be positive");
        }
        for (std::size_t j = i + 1; j < eigenvalues.size(); ++j) {
            if (std::abs(eigenvalues[i] - eigenvalues[j]) < 1e-6) {
                throw Error("random_normal_with_spectrum: eigenvalues " +
                            detail::format_complex(eigenvalues[i]) + " and " +
                            detail::format_complex(eigenvalues[j]) +
                            " are separated by less than 1e-6");
            }
        }
    }
    Index n = 0;
    for (Index m : multiplicities) n += m;
    CVector diag(n);
    Index pos = 0;
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        for (Index k = 0; k < multiplicities[i]; ++k) diag(pos++) = eigenvalues[i];
    }
    const CMatrix u = random_unitary(n, seed);
    return u * diag.asDiagonal() * u.adjoint();
}

/// Random Frobenius-unit-norm element of the span of an orthonormal basis.
/// Falls back to the zero matrix of the right shape when the span is
/// trivial.
inline CMatrix random_space_element(const IntertwinerSpace& space, std::mt19937_64& engine) {
    const Index rows = space.left.rows();
    const Index cols = space.right.rows();
    if (space.basis.empty()) return CMatrix::Zero(rows, cols);
    CMatrix a = CMatrix::Zero(rows, cols);
    for (const CMatrix& x : space.basis) a += gaussian_complex(engine) * x;
    const double norm = a.norm();
    if (norm == 0.0) return space.basis.front();
    return a / norm;
}

/// Random unit-norm element of the commutant of B. The commutant always
/// contains the identity, so the result is never zero.
inline CMatrix random_commutant_element(const CMatrix& b, std::uint64_t seed,
                                        double rank_tol = default_rank_tol) {
    require_square(b, "random_commutant_element");
    const IntertwinerSpace commutant = intertwiner_space(b, b, rank_tol);
    std::mt19937_64 engine = make_engine(seed);
    return random_space_element(commutant, engine);
}

/// Block-diagonal direct sum [[B, 0], [0, C]]. Zero blocks are exact zeros.
/// Normal iff both blocks are normal.
inline CMatrix berberian_double(const CMatrix& b, const CMatrix& c) {
    require_finite(b, "berberian_double");
    require_finite(c, "berberian_double");
    require_square(b, "berberian_double");
    require_square(c, "berberian_double");
    if (b.rows() != c.rows()) {
        std::ostringstream msg;
        msg << "berberian_double: blocks differ in size (" << b.rows() << " vs " << c.rows()
            << ")";
        throw ShapeError(msg.str());
    }
    const Index n = b.rows();
    CMatrix out = CMatrix::Zero(2 * n, 2 * n);
    out.topLeftCorner(n, n) = b;
    out.bottomRightCorner(n, n) = c;
    return out;
}

/// Corner embedding [[0, A], [0, 0]]. Together with berberian_double this
/// turns a two-operator intertwining relation into a one-operator one:
/// double(B,C) * embed(A) has B A in its upper-right block, while
/// embed(A) * double(B,C) has A C there.
inline CMatrix berberian_embed(const CMatrix& a) {
    require_finite(a, "berberian_embed");
    require_square(a, "berberian_embed");
    const Index n = a.rows();
    CMatrix out = CMatrix::Zero(2 * n, 2 * n);
    out.topRightCorner(n, n) = a;
    return out;
}

enum class BlockProvenance { berberian, prop25, jordan, random };

inline std::string_view to_string(BlockProvenance p) {
    switch (p) {
        case BlockProvenance::berberian: return "berberian";
        case BlockProvenance::prop25: return "prop25";
        case BlockProvenance::jordan: return "jordan";
        case BlockProvenance::random: return "random";
    }
    return "?";
}

/// A matched operator pair built from blocks. block_dim is the constituent
/// block size for the 2x2-block constructions and the full size for the
/// single-block jordan witness.
struct BlockPair {
    CMatrix big_b;
    CMatrix big_a;
    Index block_dim = 0;
    BlockProvenance provenance = BlockProvenance::random;
};

/// The unitary/self-adjoint pair big_B = [[U, 0], [0, U*]],
/// big_A = [[0, A], [A*, 0]]. big_B is unitary and big_A Hermitian by
/// construction; both are verified before returning. With
/// project_to_commutant set, A is first replaced by its orthogonal
/// projection onto the commutant of U, which enforces U A = A U for
/// arbitrary input.
inline BlockPair prop25_pair(const CMatrix& u, const CMatrix& a,
                             bool project_to_commutant = false) {
    require_finite(u, "prop25_pair");
    require_finite(a, "prop25_pair");
    require_square(u, "prop25_pair");
    require_square(a, "prop25_pair");
    if (u.rows() != a.rows()) {
        throw ShapeError("prop25_pair: U and A must have the same size");
    }
    const Index n = u.rows();
    const double unitary_defect = (u.adjoint() * u - CMatrix::Identity(n, n)).norm();
    if (unitary_defect > 1e-10) {
        std::ostringstream msg;
        msg << "prop25_pair: U is not unitary (||U*U - I||_F = " << unitary_defect << ")";
        throw NotUnitaryError(msg.str(), unitary_defect);
    }

    CMatrix a_used = a;
    if (project_to_commutant) {
        const IntertwinerSpace commutant = intertwiner_space(u, u);
        CMatrix projected = CMatrix::Zero(n, n);
        for (const CMatrix& x : commutant.basis) projected += frobenius_inner(x, a) * x;
        a_used = projected;
    }

    BlockPair pair;
    pair.block_dim = n;
    pair.provenance = BlockProvenance::prop25;
    pair.big_b = CMatrix::Zero(2 * n, 2 * n);
    pair.big_b.topLeftCorner(n, n) = u;
    pair.big_b.bottomRightCorner(n, n) = u.adjoint();
    pair.big_a = CMatrix::Zero(2 * n, 2 * n);
    pair.big_a.topRightCorner(n, n) = a_used;
    pair.big_a.bottomLeftCorner(n, n) = a_used.adjoint();

    const double big_unitary_defect =
        (pair.big_b.adjoint() * pair.big_b - CMatrix::Identity(2 * n, 2 * n)).norm();
    if (big_unitary_defect > 1e-9) {
        throw NotUnitaryError("prop25_pair: assembled block matrix is not unitary",
                              big_unitary_defect);
    }
    if ((pair.big_a.adjoint() - pair.big_a).norm() > 1e-12) {
        throw Error("prop25_pair: assembled block matrix is not Hermitian");
    }
    return pair;
}

/// The nilpotent Jordan block paired with itself: B = A = the n x n shift.
/// B commutes with A while B* does not, so this pair defeats the
/// commutation-transport implication and shows its normality hypothesis is
/// not removable.
inline BlockPair jordan_witness(Index n) {
    if (n < 2) throw Error("jordan_witness: need n >= 2");
    CMatrix j = CMatrix::Zero(n, n);
    for (Index i = 0; i + 1 < n; ++i) j(i, i + 1) = 1.0;
    BlockPair pair;
    pair.big_b = j;
    pair.big_a = j;
    pair.block_dim = n;
    pair.provenance = BlockProvenance::jordan;
    return pair;
}

}  // namespace fuglab
