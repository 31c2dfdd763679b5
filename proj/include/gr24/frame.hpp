#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>

#include "gr24/errors.hpp"

namespace gr24 {

using Mat42 = Eigen::Matrix<double, 4, 2>;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;

/// Two principal angles between planes, sorted 0 <= theta1 <= theta2 <= pi/2.
struct PrincipalAngles {
    double theta1;
    double theta2;
};

/// (xi_plus, xi_minus) = (cos(theta1+theta2), cos(theta1-theta2)).
struct XiPair {
    double plus;
    double minus;
};

/// A point of Gr(2,4): a 4x2 matrix with orthonormal columns spanning the
/// plane. Two frames with the same column span are the same point.
class Frame {
public:
    /// Orthonormalize an arbitrary rank-2 matrix by thin QR with the diagonal
    /// of R forced positive, which fixes a deterministic representative.
    static Frame orthonormalize(const Mat42& raw) {
        Eigen::JacobiSVD<Mat42> svd(raw);
        if (svd.singularValues()(1) <= 1e-10)
            throw RankDeficientError("Frame::orthonormalize: input has rank < 2");
        Eigen::HouseholderQR<Mat42> qr(raw);
        Mat42 q = qr.householderQ() * Mat42::Identity();
        Eigen::Matrix2d r = qr.matrixQR().topRows<2>().template triangularView<Eigen::Upper>();
        for (int j = 0; j < 2; ++j)
            if (r(j, j) < 0.0) q.col(j) = -q.col(j);
        return Frame(q);
    }

    /// Wrap a matrix that is already orthonormal to 1e-12.
    static Frame from_orthonormal(const Mat42& m) {
        Frame f(m);
        if (f.gram_deviation() > 1e-12)
            throw InvalidParameterError("Frame::from_orthonormal: columns not orthonormal");
        return f;
    }

    const Mat42& matrix() const { return m_; }

    /// max |X^T X - I|
    double gram_deviation() const {
        Mat2 g = m_.transpose() * m_ - Mat2::Identity();
        return g.cwiseAbs().maxCoeff();
    }

private:
    explicit Frame(const Mat42& m) : m_(m) {}
    Mat42 m_;
};

/// Principal angles from the singular values of X^T Y (clamped into [0,1]
/// so round-off cannot push arccos out of domain).
inline PrincipalAngles principal_angles(const Frame& x, const Frame& y) {
    Mat2 m = x.matrix().transpose() * y.matrix();
    Eigen::JacobiSVD<Mat2> svd(m);
    double s1 = std::clamp(svd.singularValues()(0), 0.0, 1.0);
    double s2 = std::clamp(svd.singularValues()(1), 0.0, 1.0);
    return {std::acos(s1), std::acos(s2)};
}

inline XiPair xi_pair(const PrincipalAngles& a) {
    return {std::cos(a.theta1 + a.theta2), std::cos(a.theta1 - a.theta2)};
}

/// Fast xi pair straight from the 2x2 cross-Gram invariants:
/// cos t1 cos t2 = |det M| and (1-cos^2 t1)(1-cos^2 t2) = 1 - |M|_F^2 + det^2.
inline XiPair xi_pair(const Frame& x, const Frame& y) {
    Mat2 m = x.matrix().transpose() * y.matrix();
    const double det = std::abs(m.determinant());
    const double fro2 = m.squaredNorm();
    const double sinprod = std::sqrt(std::max(0.0, 1.0 - fro2 + det * det));
    double xm = std::min(1.0, det + sinprod);
    double xp = det - sinprod;
    if (xp > xm) xp = xm;
    if (xp < -xm) xp = -xm;
    return {xp, xm};
}

/// Chordal distance sqrt(sin^2 t1 + sin^2 t2), computed as the projector
/// Frobenius distance |X X^T - Y Y^T|_F / sqrt(2). This route stays accurate
/// for nearly identical spans, where 2 - |X^T Y|_F^2 cancels to roundoff.
inline double chordal_distance(const Frame& x, const Frame& y) {
    const Mat4 diff = x.matrix() * x.matrix().transpose() - y.matrix() * y.matrix().transpose();
    return diff.norm() / std::sqrt(2.0);
}

/// Squared chordal distance: 2 - |X^T Y|_F^2 on the fast path, switching to
/// the cancellation-free projector route once the difference drops into the
/// roundoff regime.
inline double chordal_distance_sq(const Frame& x, const Frame& y) {
    const double fro2 = (x.matrix().transpose() * y.matrix()).squaredNorm();
    double u = 2.0 - fro2;
    if (u < 1e-8) {
        const Mat4 diff = x.matrix() * x.matrix().transpose() - y.matrix() * y.matrix().transpose();
        u = 0.5 * diff.squaredNorm();
    }
    return std::max(0.0, u);
}

/// Rank-2 orthogonal projector Pi = X X^T; the isometric embedding into R^9
/// sends chordal distance to |Pi_X - Pi_Y|_F / sqrt(2).
inline Mat4 projector_embedding(const Frame& x) { return x.matrix() * x.matrix().transpose(); }

} // namespace gr24
