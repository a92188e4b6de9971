#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace squeezelab {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Per-mode occupation numbers; also used as multi-indices into power series.
using MultiIndex = std::vector<int>;

inline double max_abs(const CMat& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double max_abs(const CVec& v) {
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

// Largest entrywise deviation between two matrices of equal shape.
inline double max_abs_diff(const CMat& a, const CMat& b) {
    return max_abs(CMat(a - b));
}

// Residual of a against its own adjoint, relative to max(1, |a|).
inline double hermiticity_residual(const CMat& a) {
    return max_abs(CMat(a - a.adjoint())) / std::max(1.0, max_abs(a));
}

// Residual of a against its own transpose, relative to max(1, |a|).
inline double symmetry_residual(const CMat& a) {
    return max_abs(CMat(a - a.transpose())) / std::max(1.0, max_abs(a));
}

inline int total_degree(const MultiIndex& n) {
    int t = 0;
    for (int k : n) t += k;
    return t;
}

}  // namespace squeezelab
