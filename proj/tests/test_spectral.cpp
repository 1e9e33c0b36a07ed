#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "fuglab/constructions.hpp"
#include "fuglab/spectral.hpp"
#include "helpers.hpp"

using namespace fuglab;
using testutil::from_rows;

namespace {

CMatrix diag3(double a, double b, double c) {
    CMatrix m = CMatrix::Zero(3, 3);
    m.diagonal() << a, b, c;
    return m;
}

// Seeded corpus of normal matrices with known spectra, shared by the
// round-trip properties below.
struct NormalInstance {
    CMatrix matrix;
    std::vector<Complex> eigenvalues;
    std::vector<Index> multiplicities;
};

NormalInstance random_normal_instance(std::mt19937_64& engine, std::uint64_t seed, Index max_dim) {
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    const Index n = 2 + static_cast<Index>(engine() % static_cast<std::uint64_t>(max_dim - 1));
    const Index distinct = 1 + static_cast<Index>(engine() % std::min<std::uint64_t>(4, n));
    std::vector<Complex> eigs;
    while (static_cast<Index>(eigs.size()) < distinct) {
        const Complex z(coord(engine), coord(engine));
        bool ok = true;
        for (Complex e : eigs) {
            if (std::abs(z - e) < 1e-3) ok = false;
        }
        if (ok) eigs.push_back(z);
    }
    std::vector<Index> mults(eigs.size(), 1);
    for (Index extra = n - distinct; extra > 0; --extra) mults[engine() % mults.size()] += 1;
    return {random_normal_with_spectrum(eigs, mults, seed), eigs, mults};
}

}  // namespace

TEST_CASE("normality_residual") {
    REQUIRE(normality_residual(diag3(1, 2, 3)) == 0.0);
    REQUIRE(normality_residual(from_rows({{0.0, -1.0}, {1.0, 0.0}})) <= 1e-15);

    const CMatrix jordan = from_rows({{0.0, 1.0}, {0.0, 0.0}});
    REQUIRE(normality_residual(jordan) == Catch::Approx(std::sqrt(2.0)).epsilon(1e-14));

    REQUIRE_THROWS_AS(normality_residual(CMatrix::Zero(2, 3)), ShapeError);
}

TEST_CASE("cluster_eigenvalues") {
    SECTION("merges values at rounding distance") {
        const auto clusters = cluster_eigenvalues({1.0, 1.0 + 1e-13, 5.0}, 1e-8);
        REQUIRE(clusters.size() == 2);
        REQUIRE(clusters[0].members.size() == 2);
        REQUIRE(std::abs(clusters[0].representative - Complex(1.0)) <= 1e-12);
        REQUIRE(clusters[1].members.size() == 1);
        REQUIRE(clusters[1].representative == Complex(5.0));
    }
    SECTION("keeps separated values apart") {
        const auto clusters = cluster_eigenvalues({1.0, 2.0, 3.0}, 1e-8);
        REQUIRE(clusters.size() == 3);
    }
    SECTION("rejects a chain whose endpoints exceed the tolerance") {
        REQUIRE_THROWS_AS(cluster_eigenvalues({0.0, 1e-9, 2e-9}, 1.5e-9), ClusterAmbiguityError);
    }
}

TEST_CASE("decompose on fixed instances") {
    SECTION("identity") {
        const SpectralDecomp d = decompose(CMatrix::Identity(2, 2));
        REQUIRE(d.distinct_count() == 1);
        REQUIRE(std::abs(d.eigenvalues[0] - Complex(1.0)) <= 1e-12);
        REQUIRE(d.multiplicities[0] == 2);
        REQUIRE(relative_residual(d.projectors[0], CMatrix::Identity(2, 2)) <= 1e-12);
    }
    SECTION("diagonal with a repeated eigenvalue") {
        const SpectralDecomp d = decompose(diag3(2, 2, 5));
        REQUIRE(d.distinct_count() == 2);
        REQUIRE(std::abs(d.eigenvalues[0] - Complex(2.0)) <= 1e-12);
        REQUIRE(std::abs(d.eigenvalues[1] - Complex(5.0)) <= 1e-12);
        REQUIRE(d.multiplicities == std::vector<Index>{2, 1});
        REQUIRE(relative_residual(d.projectors[0], diag3(1, 1, 0)) <= 1e-12);
        REQUIRE(relative_residual(d.projectors[1], diag3(0, 0, 1)) <= 1e-12);
    }
    SECTION("symmetric involution splits into (I +/- B)/2") {
        const CMatrix b = from_rows({{0.0, 1.0}, {1.0, 0.0}});
        const SpectralDecomp d = decompose(b);
        REQUIRE(d.distinct_count() == 2);
        REQUIRE(std::abs(d.eigenvalues[0] - Complex(-1.0)) <= 1e-12);
        REQUIRE(std::abs(d.eigenvalues[1] - Complex(1.0)) <= 1e-12);
        const CMatrix minus = 0.5 * (CMatrix::Identity(2, 2) - b);
        const CMatrix plus = 0.5 * (CMatrix::Identity(2, 2) + b);
        REQUIRE(relative_residual(d.projectors[0], minus) <= 1e-12);
        REQUIRE(relative_residual(d.projectors[1], plus) <= 1e-12);
    }
    SECTION("rejects the nilpotent shift") {
        const CMatrix jordan = from_rows({{0.0, 1.0}, {0.0, 0.0}});
        REQUIRE_THROWS_AS(decompose(jordan), NormalityError);
        try {
            decompose(jordan);
        } catch (const NormalityError& e) {
            REQUIRE(e.residual() == Catch::Approx(std::sqrt(2.0)).epsilon(1e-14));
        }
    }
}

TEST_CASE("decompose/reconstruct round trip on a random normal corpus") {
    std::mt19937_64 engine = make_engine(90);
    for (int rep = 0; rep < 40; ++rep) {
        const NormalInstance inst = random_normal_instance(engine, derive_seed(90, rep), 16);
        const SpectralDecomp d = decompose(inst.matrix);
        REQUIRE(relative_residual(reconstruct(d), inst.matrix) <= 1e-9);

        // recovered spectrum matches the prescription
        REQUIRE(d.distinct_count() == inst.eigenvalues.size());
        for (std::size_t j = 0; j < d.distinct_count(); ++j) {
            double best = 1e9;
            std::size_t best_idx = 0;
            for (std::size_t k = 0; k < inst.eigenvalues.size(); ++k) {
                const double gap = std::abs(d.eigenvalues[j] - inst.eigenvalues[k]);
                if (gap < best) {
                    best = gap;
                    best_idx = k;
                }
            }
            REQUIRE(best <= d.cluster_tol);
            REQUIRE(d.multiplicities[j] == inst.multiplicities[best_idx]);
        }

        const SpectralDefects defects = projector_defects(d);
        REQUIRE(defects.completeness <= 1e-10);
        REQUIRE(defects.orthogonality <= 1e-10);
        REQUIRE(defects.hermiticity <= 1e-10);
        REQUIRE(defects.trace <= 1e-8);

        // projectors commute with the matrix
        for (const CMatrix& e : d.projectors) {
            REQUIRE((inst.matrix * e - e * inst.matrix).norm() <= 1e-9 * inst.matrix.norm());
        }
    }
}
