#pragma once

#include <optional>
#include <string>
#include <vector>

#include "su2flux/exterior/form.hpp"
#include "su2flux/exterior/metric.hpp"
#include "su2flux/liealg/lie_algebra.hpp"

namespace su2flux {

/// One identity checked by a validator; `residual` is lhs - rhs.
struct Check {
    std::string identity;
    bool holds = true;
    Form residual;
    std::string note;
};

struct Report {
    bool pass = true;
    std::vector<Check> checks;

    void add(std::string identity, const Form& residual, std::string note = "");
    void add_check(Check c);
    /// Records a failed check that has no residual form.
    void fail(std::string identity, int dim, std::string note);
    const Check* first_failure() const;
};

/// Pullback action on covectors: J e^a = sum_b matrix[a][b] e^b.
/// A 1-form theta has type (1,0) iff J theta = i theta.
struct AlmostComplexStructure {
    ScalarMatrix matrix;

    int dim() const { return static_cast<int>(matrix.size()); }
    bool squares_to_minus_one() const;
    Form apply(const Form& a) const;
    bool is_type_10(const Form& theta) const;
    /// Basis of the vectors v with theta(v) = 0 for every (1,0)-form theta.
    std::vector<std::vector<Scalar>> antiholomorphic_vectors() const;
};

/// Antisymmetric coefficient matrix m[a][b] = F(e_a, e_b) of a 2-form.
ScalarMatrix two_form_matrix(const Form& f);

struct SU3Structure {
    AlmostComplexStructure J;
    Metric g;
    Form F;
    Form Psi;
};

/// J and g determined by a compatible pair: the (1,0)-forms span the
/// annihilator of Psi under wedge, and g = F(., J .).
struct InducedStructure {
    AlmostComplexStructure J;
    Metric g;
};

/// Throws DomainError when Psi does not determine a complex structure or
/// the induced bilinear form is not a metric.
InducedStructure induce_from_su3(const Form& F, const Form& Psi);

SU3Structure make_su3(const Form& F, const Form& Psi);

/// J^2 = -1, g = F(., J .), F of type (1,1), F ^ Psi = 0,
/// (4/3) F^3 = i Psi ^ conj(Psi) != 0, Psi of type (3,0).
Report validate_su3(const SU3Structure& s);

/// SU(2) datum on a 6-dimensional space. Missing J or g are induced from the
/// associated SU(3) structure when needed.
struct SU2Structure6 {
    Form alpha;
    Form omega;
    Form Omega;
    std::optional<AlmostComplexStructure> J;
    std::optional<Metric> g;
};

/// omega^2 = (1/2) Omega ^ conj(Omega) != 0, omega ^ Omega = 0,
/// Omega ^ Omega = 0, contractions of Omega and omega with the dual of alpha
/// vanish, |alpha|^2 = 2, alpha of type (1,0) when J is known.
Report validate_su2(const SU2Structure6& s);

/// F = omega + (i/2) alpha ^ conj(alpha), Psi = alpha ^ Omega.
Form embedded_fundamental_form(const SU2Structure6& s);
Form embedded_calibration(const SU2Structure6& s);
/// Throws DomainError when J or g cannot be supplied or induced.
SU3Structure embed_su2(const SU2Structure6& s);

/// omega = F - (i/2) alpha ^ conj(alpha), Omega = (1/2) i_{conj(alpha)#} Psi.
/// Throws DomainError when |alpha|^2 != 2 or alpha is not of type (1,0).
SU2Structure6 reduce_su3(const SU3Structure& s, const Form& alpha);

enum class StructureClass { HalfFlat, SymplecticHalfFlat, HermitianBalanced };

std::string class_name(StructureClass c);
/// Accepts "half-flat", "symplectic-half-flat", "hermitian-balanced".
std::optional<StructureClass> parse_class_name(const std::string& name);

/// Differential conditions only: d(F^2) = 0 always; d Re Psi = 0 (half-flat),
/// plus dF = 0 (symplectic) or d Re Psi = d Im Psi = 0 (balanced).
Report classify(const LieAlgebra& L, const Form& F, const Form& Psi, StructureClass c);
Report classify(const LieAlgebra& L, const SU3Structure& s, StructureClass c);
Report classify(const LieAlgebra& L, const SU2Structure6& s, StructureClass c);

struct HypoStructure5 {
    Form eta;
    Form omega1;
    Form omega2;
    Form omega3;
};

/// eta ^ omega1^2 != 0, (omega2 + i omega3)^2 = 0,
/// omega1 ^ (omega2 + i omega3) = 0, (omega2 + i omega3) ^ (omega2 - i omega3) = 2 omega1^2.
Report validate_hypo(const HypoStructure5& h);
/// d omega1 = d(omega2 ^ eta) = d(omega3 ^ eta) = 0.
Report is_hypo(const LieAlgebra& L, const HypoStructure5& h);

/// omega' = c omega + s Re Omega, Omega' = -s omega + c Re Omega + i Im Omega
/// with c = cos 2phi, s = sin 2phi. Keeps alpha and g; J is re-induced.
/// Throws DomainError unless c^2 + s^2 = 1.
SU2Structure6 rotate_su2(const SU2Structure6& s, const Scalar& cos2phi, const Scalar& sin2phi);

}  // namespace su2flux
