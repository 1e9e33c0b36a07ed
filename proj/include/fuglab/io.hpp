#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fuglab/funcalc.hpp"
#include "fuglab/matrix.hpp"
#include "fuglab/report.hpp"

namespace fuglab {

using json = nlohmann::json;

inline json complex_to_json(Complex z) {
    return json::array({z.real(), z.imag()});
}

inline Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw IoError("expected a complex number as [re, im]");
    }
    return Complex(j[0].get<double>(), j[1].get<double>());
}

inline json complex_list_to_json(const std::vector<Complex>& zs) {
    json out = json::array();
    for (Complex z : zs) out.push_back(complex_to_json(z));
    return out;
}

inline std::vector<Complex> complex_list_from_json(const json& j) {
    if (!j.is_array()) throw IoError("expected an array of complex numbers");
    std::vector<Complex> out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(complex_from_json(e));
    return out;
}

/// {"rows": n, "cols": m, "entries": [[re, im], ...]} with entries in
/// row-major order. The shared on-disk matrix format.
inline json matrix_to_json(const CMatrix& m) {
    json entries = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            entries.push_back(complex_to_json(m(i, j)));
        }
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

namespace detail {

// Narrows nlohmann's exceptions (missing keys, wrong types) to IoError so
// callers and the CLI handle one error family.
template <typename F>
auto parse_guard(const char* what, F&& body) {
    try {
        return body();
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string(what) + ": " + e.what());
    }
}

}  // namespace detail

inline CMatrix matrix_from_json(const json& j) {
    return detail::parse_guard("matrix object", [&]() -> CMatrix {
        if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
            !j.contains("entries")) {
            throw IoError("matrix object needs fields rows, cols, entries");
        }
        const Index rows = j.at("rows").get<Index>();
        const Index cols = j.at("cols").get<Index>();
        if (rows < 1 || cols < 1) throw IoError("matrix dimensions must be positive");
        const auto& entries = j.at("entries");
        if (!entries.is_array() || static_cast<Index>(entries.size()) != rows * cols) {
            throw IoError("matrix entries length does not equal rows*cols");
        }
        CMatrix m(rows, cols);
        Index k = 0;
        for (Index i = 0; i < rows; ++i) {
            for (Index jj = 0; jj < cols; ++jj) {
                m(i, jj) = complex_from_json(entries[static_cast<std::size_t>(k++)]);
            }
        }
        require_finite(m, "matrix_from_json");
        return m;
    });
}

inline CMatrix load_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open matrix file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("cannot parse matrix file " + path.string() + ": " + e.what());
    }
    return matrix_from_json(j);
}

inline void save_matrix(const std::filesystem::path& path, const CMatrix& m) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write matrix file: " + path.string());
    out << matrix_to_json(m).dump(2) << '\n';
}

/// {"kind": "builtin", "name": ...} | {"kind": "polynomial",
/// "coefficients": [[re, im], ...]} | {"kind": "table", "nodes": [...],
/// "values": [...]}.
inline json function_to_json(const SpectrumFunction& f) {
    switch (f.kind()) {
        case SpectrumFunction::Kind::builtin:
            return json{{"kind", "builtin"}, {"name", std::string(to_string(f.builtin_name()))}};
        case SpectrumFunction::Kind::polynomial:
            return json{{"kind", "polynomial"},
                        {"coefficients", complex_list_to_json(f.as_polynomial().coefficients())}};
        case SpectrumFunction::Kind::table:
            return json{{"kind", "table"},
                        {"nodes", complex_list_to_json(f.table_nodes())},
                        {"values", complex_list_to_json(f.table_values())}};
    }
    throw IoError("unreachable function kind");
}

inline SpectrumFunction function_from_json(const json& j) {
    return detail::parse_guard("function object", [&]() -> SpectrumFunction {
        if (!j.is_object() || !j.contains("kind")) {
            throw IoError("function object needs a kind field");
        }
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "builtin") {
            return SpectrumFunction::builtin(builtin_from_string(j.at("name").get<std::string>()));
        }
        if (kind == "polynomial") {
            return SpectrumFunction::polynomial(complex_list_from_json(j.at("coefficients")));
        }
        if (kind == "table") {
            return SpectrumFunction::table(complex_list_from_json(j.at("nodes")),
                                           complex_list_from_json(j.at("values")));
        }
        throw IoError("unknown function kind: " + kind);
    });
}

inline json implication_to_json(const ImplicationReport& r) {
    json j{{"instance_id", r.instance_id},
           {"check", r.check},
           {"hypothesis_residual", r.hypothesis_residual},
           {"conclusion_residual", r.conclusion_residual},
           {"hypothesis_tol", r.hypothesis_tol},
           {"conclusion_tol", r.conclusion_tol},
           {"verdict", std::string(to_string(r.verdict))}};
    if (r.witness) j["witness"] = matrix_to_json(*r.witness);
    return j;
}

inline ImplicationReport implication_from_json(const json& j) {
    return detail::parse_guard("instance report", [&]() -> ImplicationReport {
        ImplicationReport r;
        r.instance_id = j.at("instance_id").get<std::string>();
        r.check = j.at("check").get<std::string>();
        r.hypothesis_residual = j.at("hypothesis_residual").get<double>();
        r.conclusion_residual = j.at("conclusion_residual").get<double>();
        r.hypothesis_tol = j.at("hypothesis_tol").get<double>();
        r.conclusion_tol = j.at("conclusion_tol").get<double>();
        r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
        if (j.contains("witness")) r.witness = matrix_from_json(j.at("witness"));
        return r;
    });
}

}  // namespace fuglab
