#include "ldg/dst_poisson.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>

namespace ldg {

DirichletSpectralSolver::DirichletSpectralSolver(int L, double h) : L_(L), h_(h) {
    if (L < 3) throw std::invalid_argument("DirichletSpectralSolver: L < 3");
    buf_ = fftw_alloc_real(static_cast<std::size_t>(L) * L);
    // In-place 2D DST-I. RODFT00 of length L has logical period 2(L+1); a
    // forward+backward pair multiplies by (2(L+1))^2 per dimension.
    plan_ = fftw_plan_r2r_2d(L, L, buf_, buf_, FFTW_RODFT00, FFTW_RODFT00, FFTW_ESTIMATE);
    sin_eig_.resize(L);
    for (int k = 0; k < L; ++k) {
        double s = std::sin(std::numbers::pi * (k + 1) / (2.0 * (L + 1)));
        sin_eig_[k] = 4.0 / (h * h) * s * s;
    }
}

DirichletSpectralSolver::~DirichletSpectralSolver() {
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    fftw_free(buf_);
}

void DirichletSpectralSolver::solve(std::vector<double>& rhs, double c0, double c1) const {
    const std::size_t total = static_cast<std::size_t>(L_) * L_;
    if (rhs.size() != total) throw std::invalid_argument("DirichletSpectralSolver: rhs size");
    std::memcpy(buf_, rhs.data(), total * sizeof(double));
    fftw_execute(static_cast<fftw_plan>(plan_));
    const double norm = 1.0 / (4.0 * (L_ + 1) * (L_ + 1));
    for (int j = 0; j < L_; ++j) {
        const double ly = sin_eig_[j];
        double* row = buf_ + static_cast<std::size_t>(j) * L_;
        for (int i = 0; i < L_; ++i) {
            row[i] *= norm / (c0 + c1 * (sin_eig_[i] + ly));
        }
    }
    fftw_execute(static_cast<fftw_plan>(plan_));
    std::memcpy(rhs.data(), buf_, total * sizeof(double));
}

}  // namespace ldg
