#pragma once

#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fuglab/matrix.hpp"
#include "fuglab/report.hpp"
#include "fuglab/spectral.hpp"

namespace fuglab {

/// Nodes closer than this are considered the same table entry.
inline constexpr double table_match_tol = 1e-12;
/// Values attached to merged interpolation nodes must agree to this.
inline constexpr double node_value_tol = 1e-9;
/// Hard cap on interpolation node count. Monomial-form interpolation loses
/// accuracy well before this; beyond well_conditioned_nodes expect the node
/// residual guarantee only for benign spacings.
inline constexpr std::size_t max_interpolation_nodes = 16;
inline constexpr std::size_t well_conditioned_nodes = 8;

/// Polynomial over the complex field, coefficients in ascending degree
/// order. Trailing exact zeros are trimmed on construction; the zero
/// polynomial keeps a single zero coefficient.
class CPolynomial {
public:
    explicit CPolynomial(std::vector<Complex> coefficients) : coefficients_(std::move(coefficients)) {
        if (coefficients_.empty()) {
            throw Error("CPolynomial: coefficient list must be non-empty");
        }
        while (coefficients_.size() > 1 && coefficients_.back() == Complex(0.0, 0.0)) {
            coefficients_.pop_back();
        }
    }

    const std::vector<Complex>& coefficients() const { return coefficients_; }
    std::size_t degree() const { return coefficients_.size() - 1; }

private:
    std::vector<Complex> coefficients_;
};

enum class BuiltinFunction { identity, conjugate, square, modulus_squared, exponential };

inline std::string_view to_string(BuiltinFunction f) {
    switch (f) {
        case BuiltinFunction::identity: return "identity";
        case BuiltinFunction::conjugate: return "conjugate";
        case BuiltinFunction::square: return "square";
        case BuiltinFunction::modulus_squared: return "modulus_squared";
        case BuiltinFunction::exponential: return "exponential";
    }
    return "?";
}

inline BuiltinFunction builtin_from_string(std::string_view name) {
    if (name == "identity") return BuiltinFunction::identity;
    if (name == "conjugate") return BuiltinFunction::conjugate;
    if (name == "square") return BuiltinFunction::square;
    if (name == "modulus_squared") return BuiltinFunction::modulus_squared;
    if (name == "exponential") return BuiltinFunction::exponential;
    throw Error("unknown builtin function: " + std::string(name));
}

/// A function C -> C as it enters the spectral calculus. On a finite
/// spectrum only the values at the spectral points matter, so a finite value
/// table represents any continuous function without loss.
class SpectrumFunction {
public:
    enum class Kind { builtin, polynomial, table };

    static SpectrumFunction builtin(BuiltinFunction f) { return SpectrumFunction(f); }

    static SpectrumFunction polynomial(std::vector<Complex> coefficients) {
        return SpectrumFunction(CPolynomial(std::move(coefficients)));
    }

    static SpectrumFunction polynomial(CPolynomial p) { return SpectrumFunction(std::move(p)); }

    static SpectrumFunction table(std::vector<Complex> nodes, std::vector<Complex> values) {
        if (nodes.size() != values.size()) {
            throw ShapeError("SpectrumFunction::table: nodes and values differ in length");
        }
        if (nodes.empty()) {
            throw Error("SpectrumFunction::table: table must be non-empty");
        }
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            for (std::size_t j = i + 1; j < nodes.size(); ++j) {
                if (std::abs(nodes[i] - nodes[j]) <= table_match_tol) {
                    throw Error("SpectrumFunction::table: nodes " +
                                detail::format_complex(nodes[i]) + " and " +
                                detail::format_complex(nodes[j]) + " are not distinct");
                }
            }
        }
        return SpectrumFunction(Table{std::move(nodes), std::move(values)});
    }

    Kind kind() const { return static_cast<Kind>(repr_.index()); }

    /// Evaluates at a point. Table functions only know their nodes; a query
    /// off every node is a coverage error.
    Complex operator()(Complex z) const {
        if (const auto* b = std::get_if<BuiltinFunction>(&repr_)) {
            switch (*b) {
                case BuiltinFunction::identity: return z;
                case BuiltinFunction::conjugate: return std::conj(z);
                case BuiltinFunction::square: return z * z;
                case BuiltinFunction::modulus_squared: return z * std::conj(z);
                case BuiltinFunction::exponential: return std::exp(z);
            }
        }
        if (const auto* p = std::get_if<CPolynomial>(&repr_)) {
            Complex acc = 0.0;
            for (auto it = p->coefficients().rbegin(); it != p->coefficients().rend(); ++it) {
                acc = acc * z + *it;
            }
            return acc;
        }
        const Table& t = std::get<Table>(repr_);
        for (std::size_t i = 0; i < t.nodes.size(); ++i) {
            if (std::abs(t.nodes[i] - z) <= table_match_tol) return t.values[i];
        }
        throw SpectrumCoverageError(
            "table function has no node for spectral point " + detail::format_complex(z), z);
    }

    BuiltinFunction builtin_name() const { return std::get<BuiltinFunction>(repr_); }
    const CPolynomial& as_polynomial() const { return std::get<CPolynomial>(repr_); }
    const std::vector<Complex>& table_nodes() const { return std::get<Table>(repr_).nodes; }
    const std::vector<Complex>& table_values() const { return std::get<Table>(repr_).values; }

private:
    struct Table {
        std::vector<Complex> nodes;
        std::vector<Complex> values;
    };

    explicit SpectrumFunction(BuiltinFunction f) : repr_(f) {}
    explicit SpectrumFunction(CPolynomial p) : repr_(std::move(p)) {}
    explicit SpectrumFunction(Table t) : repr_(std::move(t)) {}

    std::variant<BuiltinFunction, CPolynomial, Table> repr_;
};

/// f(B) = sum_j f(lambda_j) E_j on a spectral decomposition.
inline CMatrix apply_function(const SpectralDecomp& d, const SpectrumFunction& f) {
    CMatrix out = CMatrix::Zero(d.dim, d.dim);
    for (std::size_t j = 0; j < d.eigenvalues.size(); ++j) {
        out += f(d.eigenvalues[j]) * d.projectors[j];
    }
    return out;
}

/// The composition g(f(.)) restricted to the spectrum, as a value table on
/// the eigenvalues of `d`.
inline SpectrumFunction compose_on_spectrum(const SpectralDecomp& d, const SpectrumFunction& f,
                                            const SpectrumFunction& g) {
    std::vector<Complex> values;
    values.reserve(d.eigenvalues.size());
    for (Complex lambda : d.eigenvalues) values.push_back(g(f(lambda)));
    return SpectrumFunction::table(d.eigenvalues, std::move(values));
}

/// Interpolating polynomial through (node, value) pairs via Newton divided
/// differences, expanded to monomial coefficients. Nodes within dedup_tol
/// are merged first; merged nodes must carry values that agree to
/// node_value_tol, or the data is rejected as contradictory. Expect full
/// node accuracy only up to well_conditioned_nodes nodes; the hard cap is
/// max_interpolation_nodes.
inline CPolynomial build_interpolating_polynomial(const std::vector<Complex>& nodes,
                                                  const std::vector<Complex>& values,
                                                  double dedup_tol) {
    if (nodes.size() != values.size()) {
        throw ShapeError("build_interpolating_polynomial: nodes and values differ in length");
    }
    if (nodes.empty()) {
        throw Error("build_interpolating_polynomial: need at least one node");
    }
    if (dedup_tol <= 0.0) {
        throw Error("build_interpolating_polynomial: dedup_tol must be positive");
    }

    std::vector<Complex> xs, ys;
    for (const EigenCluster& c : cluster_eigenvalues(nodes, dedup_tol)) {
        Complex value_sum = 0.0;
        for (std::size_t a = 0; a < c.members.size(); ++a) {
            for (std::size_t b = a + 1; b < c.members.size(); ++b) {
                const double gap = std::abs(values[c.members[a]] - values[c.members[b]]);
                if (gap > node_value_tol) {
                    std::ostringstream msg;
                    msg << "build_interpolating_polynomial: nodes near "
                        << detail::format_complex(c.representative)
                        << " collide but carry conflicting values (differ by " << gap << ")";
                    throw NodeConflictError(msg.str());
                }
            }
            value_sum += values[c.members[a]];
        }
        xs.push_back(c.representative);
        ys.push_back(value_sum / static_cast<double>(c.members.size()));
    }

    const std::size_t k = xs.size();
    if (k > max_interpolation_nodes) {
        std::ostringstream msg;
        msg << "build_interpolating_polynomial: " << k << " distinct nodes exceed the cap of "
            << max_interpolation_nodes;
        throw Error(msg.str());
    }

    // Divided-difference coefficients d_i in place of the values.
    std::vector<Complex> dd = ys;
    for (std::size_t j = 1; j < k; ++j) {
        for (std::size_t i = k - 1; i >= j; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
        }
    }

    // Horner-style expansion of the Newton form into monomial coefficients.
    std::vector<Complex> coeffs{dd[k - 1]};
    for (std::size_t i = k - 1; i-- > 0;) {
        std::vector<Complex> next(coeffs.size() + 1, Complex(0.0, 0.0));
        for (std::size_t m = 0; m < coeffs.size(); ++m) {
            next[m + 1] += coeffs[m];
            next[m] -= xs[i] * coeffs[m];
        }
        next[0] += dd[i];
        coeffs = std::move(next);
    }
    return CPolynomial(std::move(coeffs));
}

/// Horner evaluation at a scalar.
inline Complex evaluate_polynomial_scalar(const CPolynomial& p, Complex z) {
    Complex acc = 0.0;
    for (auto it = p.coefficients().rbegin(); it != p.coefficients().rend(); ++it) {
        acc = acc * z + *it;
    }
    return acc;
}

/// Horner evaluation at a square matrix.
inline CMatrix evaluate_polynomial_matrix(const CPolynomial& p, const CMatrix& b) {
    require_finite(b, "evaluate_polynomial_matrix");
    require_square(b, "evaluate_polynomial_matrix");
    const Index n = b.rows();
    const auto& c = p.coefficients();
    CMatrix acc = c.back() * CMatrix::Identity(n, n);
    for (std::size_t i = c.size() - 1; i-- > 0;) {
        acc = acc * b + c[i] * CMatrix::Identity(n, n);
    }
    return acc;
}

/// Integer matrix power by repeated multiplication; m >= 0.
inline CMatrix matrix_power(const CMatrix& b, int m) {
    require_square(b, "matrix_power");
    if (m < 0) throw Error("matrix_power: exponent must be nonnegative");
    CMatrix acc = CMatrix::Identity(b.rows(), b.rows());
    for (int i = 0; i < m; ++i) acc = acc * b;
    return acc;
}

/// Checks that B A = A f(B) propagates to B^m A = A f(B)^m. The hypothesis
/// residual compares B A with A f(B); the conclusion residual compares the
/// m-th powers.
inline ImplicationReport power_relation_check(const CMatrix& b, const CMatrix& a,
                                              const SpectrumFunction& f, int m,
                                              const CheckTolerances& tols = {},
                                              double cluster_tol = 0.0) {
    if (m < 1) throw Error("power_relation_check: m must be positive");
    const SpectralDecomp d = cluster_tol > 0.0 ? decompose(b, cluster_tol) : decompose(b);
    const CMatrix fb = apply_function(d, f);
    const double hyp = relative_residual(multiply(b, a), multiply(a, fb));
    const double conc = relative_residual(multiply(matrix_power(b, m), a),
                                          multiply(a, matrix_power(fb, m)));
    return classify_implication("power_relation", hyp, conc, tols, a);
}

}  // namespace fuglab
