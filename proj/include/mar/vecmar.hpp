#pragma once

// "vec-MAR": fit VAR(1) on vec(X_t), then take the nearest Kronecker
// product of the coefficient as (B, A).

#include "mar/model.hpp"
#include "mar/var.hpp"

namespace mar {

enum class VarMethod { kYuleWalker, kBurg };

inline MarModel fit_vecmar_nkp(const MatrixSeries& s, VarMethod method) {
    const VarModel var = method == VarMethod::kYuleWalker ? fit_var1_yw(s) : fit_var1_burg(s);
    NkpResult k = nkp(var.phi, s.m(), s.n());
    MarModel model;
    model.m = s.m();
    model.n = s.n();
    model.mean = s.mean();
    model.terms.push_back({std::move(k.right), std::move(k.left)});
    model.sigma = var.sigma;
    model.info = var.info;
    model.info.nkp_residuals.push_back(k.residual_fro);
    return model;
}

} // namespace mar
