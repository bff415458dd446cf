#pragma once
// Exact solver for (c0 I - c1 Delta_h) on the interior of a uniform grid with
// homogeneous Dirichlet boundary, by diagonalization in the discrete sine
// basis (FFTW DST-I). Boundary data is folded into the right-hand side by the
// callers. Plans use FFTW_ESTIMATE only: plan selection must not depend on
// runtime timing races, or bitwise reproducibility is lost.

#include <vector>

namespace ldg {

class DirichletSpectralSolver {
  public:
    // L = number of interior nodes per side (grid n minus 2), h = spacing.
    DirichletSpectralSolver(int L, double h);
    ~DirichletSpectralSolver();
    DirichletSpectralSolver(const DirichletSpectralSolver&) = delete;
    DirichletSpectralSolver& operator=(const DirichletSpectralSolver&) = delete;

    int size() const { return L_; }

    // Solves (c0 I - c1 Delta_h) x = rhs; rhs is row-major L*L, overwritten
    // with x. Requires c0 + c1*lam > 0 for all eigenvalues lam of -Delta_h
    // (any c0 > 0, c1 >= 0; or c0 = 0, c1 > 0 for the pure Poisson problem).
    void solve(std::vector<double>& rhs, double c0, double c1) const;

  private:
    int L_;
    double h_;
    double* buf_;                 // fftw-aligned L*L workspace
    void* plan_;                  // fftw_plan (in-place RODFT00 x RODFT00)
    std::vector<double> sin_eig_;  // 1D eigenvalues of -d^2/dx^2: (4/h^2) sin^2(...)
};

}  // namespace ldg
