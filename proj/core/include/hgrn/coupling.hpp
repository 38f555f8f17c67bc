#pragma once

#include <cstddef>
#include <vector>

#include "hgrn/grid.hpp"
#include "hgrn/model.hpp"

namespace hgrn {

//! Per-cell switching rates, collocated at cell centers. Cell i carries the
//! generator [[-nu_i, mu_i], [nu_i, -mu_i]] acting on (u1, u2).
struct SwitchingMatrixField
{
    std::vector<double> nu;
    std::vector<double> mu;

    static SwitchingMatrixField from_model(const CanonicalModel& model, std::size_t n);
    static SwitchingMatrixField constant(double nu, double mu, std::size_t n);

    std::size_t cells() const { return nu.size(); }
};

//! Cellwise matrix-vector product. Throws SizeMismatch.
GridDensity apply_B(const SwitchingMatrixField& field, const GridDensity& u);

//! Cellwise closed-form matrix exponential e^{tM_i}. Exactly conserves
//! u1 + u2 per cell and keeps nonnegative data nonnegative.
//! Throws NegativeTime and SizeMismatch.
GridDensity exp_B(const SwitchingMatrixField& field, double t, const GridDensity& u);
void exp_B_inplace(const SwitchingMatrixField& field, double t, GridDensity& u);

} // namespace hgrn
