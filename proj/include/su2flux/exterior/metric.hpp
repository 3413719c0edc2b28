#pragma once

#include <vector>

#include "su2flux/exterior/form.hpp"

namespace su2flux {

ScalarMatrix identity_matrix(int n);
ScalarMatrix multiply(const ScalarMatrix& a, const ScalarMatrix& b);
ScalarMatrix transpose(const ScalarMatrix& a);
bool is_diagonal(const ScalarMatrix& a);

/// Gaussian elimination over the scalar field. Pivots prefer rational
/// constants; a pivot that cannot be inverted in the context raises
/// DomainError.
Scalar determinant(const ScalarMatrix& a);
/// Throws DomainError when singular.
ScalarMatrix inverse(const ScalarMatrix& a);
/// Basis of {x : a x = 0}.
std::vector<std::vector<Scalar>> kernel(const ScalarMatrix& a);

/// Symmetric invertible matrix of the metric on the coframe, g_ij = g(e_i, e_j).
class Metric {
public:
    /// Throws ShapeError for non-square input, DomainError when not symmetric
    /// or singular.
    explicit Metric(ScalarMatrix g);
    static Metric diagonal(const std::vector<Scalar>& entries);
    static Metric euclidean(int n);

    int dim() const { return static_cast<int>(g_.size()); }
    const ScalarMatrix& matrix() const { return g_; }
    const ScalarMatrix& inverse_matrix() const { return inv_; }
    const Scalar& det() const { return det_; }
    /// Exact root when det is a square in the tower, otherwise a new quadratic
    /// parameter `sqrt_det_g` adjoined over the det's context.
    const Scalar& sqrt_det() const { return sqrt_det_; }
    bool is_diagonal() const { return diagonal_; }

    friend bool operator==(const Metric& a, const Metric& b) { return a.g_ == b.g_; }

private:
    ScalarMatrix g_;
    ScalarMatrix inv_;
    Scalar det_;
    Scalar sqrt_det_;
    bool diagonal_ = false;
};

/// vol = sign * sqrt(det g) * e^{1...n}.
struct Orientation {
    int sign = 1;
};

Form volume_form(const Metric& g, const Orientation& o);

/// Complex-linear Hodge star, a ^ *b = g(a, b) vol.
Form hodge_star(const Metric& g, const Orientation& o, const Form& a);

/// Bilinear extension of g^{-1} to forms.
Scalar inner_product(const Metric& g, const Form& a, const Form& b);

/// Components of the vector g^{-1} a for a 1-form a (bilinear).
std::vector<Scalar> sharp(const Metric& g, const Form& a);

}  // namespace su2flux
