#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "fuglab/matrix.hpp"

namespace fuglab {

/// Outcome of one implication instance. Implications are tested as
/// conditionals: a failed hypothesis makes the instance vacuous, never a
/// failure.
enum class Verdict { pass, fail, vacuous };

inline std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "PASS";
        case Verdict::fail: return "FAIL";
        case Verdict::vacuous: return "VACUOUS";
    }
    return "?";
}

inline Verdict verdict_from_string(std::string_view s) {
    if (s == "PASS") return Verdict::pass;
    if (s == "FAIL") return Verdict::fail;
    if (s == "VACUOUS") return Verdict::vacuous;
    throw Error("unknown verdict: " + std::string(s));
}

/// Residual thresholds for implication checks. The conclusion tolerance is
/// one order looser than the hypothesis tolerance by default, absorbing
/// amplification through the extra multiplications on the conclusion side.
struct CheckTolerances {
    double hypothesis = 1e-8;
    double conclusion = 1e-7;
};

/// Per-instance record of an implication check.
struct ImplicationReport {
    std::string instance_id;
    std::string check;
    double hypothesis_residual = 0.0;
    double conclusion_residual = 0.0;
    double hypothesis_tol = 0.0;
    double conclusion_tol = 0.0;
    Verdict verdict = Verdict::pass;
    std::optional<CMatrix> witness;  // stored on FAIL
};

/// Applies the verdict rules and attaches the witness on failure.
inline ImplicationReport classify_implication(std::string check, double hypothesis_residual,
                                              double conclusion_residual,
                                              const CheckTolerances& tols,
                                              const CMatrix& witness_candidate) {
    ImplicationReport r;
    r.check = std::move(check);
    r.hypothesis_residual = hypothesis_residual;
    r.conclusion_residual = conclusion_residual;
    r.hypothesis_tol = tols.hypothesis;
    r.conclusion_tol = tols.conclusion;
    if (hypothesis_residual > tols.hypothesis) {
        r.verdict = Verdict::vacuous;
    } else if (conclusion_residual > tols.conclusion) {
        r.verdict = Verdict::fail;
        r.witness = witness_candidate;
    } else {
        r.verdict = Verdict::pass;
    }
    return r;
}

}  // namespace fuglab
