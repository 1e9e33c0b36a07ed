#pragma once

#include <initializer_list>

#include "fuglab/matrix.hpp"

namespace testutil {

inline fuglab::CMatrix from_rows(
    std::initializer_list<std::initializer_list<fuglab::Complex>> rows) {
    const auto nrows = static_cast<fuglab::Index>(rows.size());
    const auto ncols = static_cast<fuglab::Index>(rows.begin()->size());
    fuglab::CMatrix m(nrows, ncols);
    fuglab::Index i = 0;
    for (const auto& row : rows) {
        fuglab::Index j = 0;
        for (const auto& entry : row) m(i, j++) = entry;
        ++i;
    }
    return m;
}

inline bool bitwise_equal(const fuglab::CMatrix& a, const fuglab::CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (fuglab::Index j = 0; j < a.cols(); ++j) {
        for (fuglab::Index i = 0; i < a.rows(); ++i) {
            if (a(i, j) != b(i, j)) return false;
        }
    }
    return true;
}

inline const fuglab::Complex I{0.0, 1.0};

}  // namespace testutil
