#pragma once

#include <optional>
#include <string>
#include <vector>

#include "su2flux/exterior/form.hpp"
#include "su2flux/exterior/metric.hpp"
#include "su2flux/gstruct/structures.hpp"
#include "su2flux/liealg/lie_algebra.hpp"

namespace su2flux {

enum class SusyKind { IIA, IIB };
enum class OPlane { O5, O6 };

std::string kind_name(SusyKind k);
std::optional<SusyKind> parse_kind_name(const std::string& name);
std::string plane_name(OPlane p);
std::optional<OPlane> parse_plane_name(const std::string& name);
/// O6 for IIA, O5 for IIB.
OPlane default_plane(SusyKind k);

/// Spinor-angle data with kpar^2 + kperp^2 = 1. The string coupling and the
/// phase e^{i theta} only label the stored fluxes.
struct SUSYParams {
    Scalar kpar;
    Scalar kperp;
    OPlane plane = OPlane::O6;
};

/// Throws DomainError unless kpar^2 + kperp^2 = 1.
SUSYParams make_params(const Scalar& kpar, const Scalar& kperp, OPlane plane);

/// cos 2phi and sin 2phi of the projection branch.
/// O5: (kpar^2 - kperp^2, 2 kpar kperp); O6: (kperp^2 - kpar^2, -2 kpar kperp).
struct ProjectionTrig {
    Scalar cos2phi;
    Scalar sin2phi;
};
ProjectionTrig projection_trig(const SUSYParams& p);

/// omega_par + omega_perp = omega, re_Omega_par + re_Omega_perp = Re Omega,
/// and the parts are +1 / -1 eigenvectors of sigma.
struct ProjectionData {
    Form omega_par;
    Form omega_perp;
    Form re_Omega_par;
    Form re_Omega_perp;
    ProjectionTrig trig;
};

/// Throws DomainError unless cos^2 + sin^2 = 1.
ProjectionData projection_split(const Form& omega, const Form& re_Omega, const ProjectionTrig& trig);

/// Coefficients of a combination a omega + b Re Omega + c Im Omega.
struct SpanVector {
    Scalar omega;
    Scalar re_Omega;
    Scalar im_Omega;
    friend bool operator==(const SpanVector&, const SpanVector&) = default;
};

/// sigma(omega) = c omega + s Re Omega, sigma(Re Omega) = s omega - c Re Omega,
/// sigma(Im Omega) = -Im Omega; an involution when c^2 + s^2 = 1.
SpanVector sigma_action(const SpanVector& v, const ProjectionTrig& trig);
Form realize(const SpanVector& v, const Form& omega, const Form& re_Omega, const Form& im_Omega);

struct SUSYSolution {
    LieAlgebra algebra;
    std::optional<Metric> g;
    Orientation orientation;
    Form alpha;
    Form re_Omega_par;
    Form re_Omega_perp;
    Form im_Omega;
    SUSYParams params;
    SusyKind kind = SusyKind::IIA;
};

/// H = (kperp/kpar) d Im Omega.
Form derived_H(const SUSYSolution& sol);

/// omega = ((1 + c) Re Omega_par - (1 - c) Re Omega_perp) / s, Omega = Re Omega_par
/// + Re Omega_perp + i Im Omega, with the supplied metric if any.
SU2Structure6 underlying_su2(const SUSYSolution& sol);

/// Supplied metric, or the one induced by the underlying SU(2) datum.
Metric solution_metric(const SUSYSolution& sol);

/// IIA: 4 equations; IIB: 6 equations; fixed order, H substituted.
Report verify_susy(const SUSYSolution& sol);

struct LabeledForm {
    std::string label;
    Form form;
};

/// Starred RR fluxes in the displayed normalization; `unstarred` is filled by
/// unstar_fluxes.
struct FluxSet {
    SusyKind kind = SusyKind::IIA;
    Form H;
    std::vector<LabeledForm> starred;
    std::vector<LabeledForm> unstarred;

    const Form* find(const std::string& label) const;
};

/// Throws InvalidSolutionError when verify_susy fails.
FluxSet compute_fluxes(const SUSYSolution& sol);
/// Flux formulas without the verification step.
FluxSet evaluate_flux_formulas(const SUSYSolution& sol);
/// F_k = (-1)^{k(6-k)} * (*F_k) for a Riemannian 6-dimensional metric.
FluxSet unstar_fluxes(FluxSet fluxes, const Metric& g, const Orientation& o);

/// IIA starred fluxes read off from (d - H^) Im Phi_- = (1/8) * lambda(F)
/// with the pure spinor of the underlying datum.
FluxSet iia_fluxes_from_pure_spinor(const SUSYSolution& sol);

/// Left-hand sides of the Bianchi identities: dH, and (d - H^) F in each degree.
Report bianchi_residuals(const SUSYSolution& sol, const FluxSet& unstarred_fluxes);

/// d(* Re alpha) and d(* Im alpha) with the solution metric.
Report betti_witnesses(const SUSYSolution& sol);

/// IIA: one structure (alpha^, omega^, Omega^); IIB: two structures sharing
/// omega^ and Omega^ with alpha^_1 = kpar Re alpha + i Im alpha and
/// alpha^_2 = kpar Im alpha - i Re alpha.
struct HatData {
    SusyKind kind = SusyKind::IIA;
    std::vector<SU2Structure6> structures;
};

/// Pure change of variables. Throws DomainError when kpar or kperp is zero.
HatData hat_structures(const SUSYSolution& sol);

/// IIA: symplectic half-flat and d Re alpha^ = 0.
/// IIB: both structures half-flat and d alpha^_1 = 0.
Report hat_certificate(const LieAlgebra& L, const HatData& hat);

/// Throws InvalidSolutionError when verification or the certificate fails.
HatData hat_from_solution(const SUSYSolution& sol);

/// Inverse change of variables without checks; for IIB only the first
/// structure is read.
SUSYSolution assemble_from_hat(const LieAlgebra& L, const SU2Structure6& hat, const SUSYParams& params,
                               SusyKind kind);

/// IIB second structure alpha^_2 = kpar Im alpha^_1 - (i/kpar) Re alpha^_1.
SU2Structure6 iib_partner(const SU2Structure6& hat1, const Scalar& kpar);

/// Checks the converse hypotheses, then assembles. Throws InvalidSolutionError
/// naming the failing identity and its residual.
SUSYSolution solution_from_hat(const LieAlgebra& L, const SU2Structure6& hat, const SUSYParams& params,
                               SusyKind kind);

/// alpha^_t = kpar sin t Re alpha + kpar cos t Im alpha + i sin t Im alpha - i cos t Re alpha.
SU2Structure6 rotated_hat(const SUSYSolution& sol, const Scalar& cos_t, const Scalar& sin_t);

enum class LambdaVariant { Balanced1, Balanced };

struct LambdaFamilyResult {
    bool half_flat = false;
    SU2Structure6 structure;
    Report report;
};

/// beta = lambda Im alpha - (i/lambda) Re alpha paired with (omega, Omega)
/// (Balanced1) or (omega, i Omega) (Balanced), tested for half-flatness.
/// Throws DomainError when lambda is zero or the hypotheses fail.
LambdaFamilyResult lambda_family_halfflat(const LieAlgebra& L, const SU2Structure6& s, const Scalar& lambda,
                                          LambdaVariant variant);

/// Same words read in a larger coframe.
Form extend_dimension(const Form& a, int dim);
/// L plus `extra` abelian generators appended at the end.
LieAlgebra direct_sum_abelian(const LieAlgebra& L, int extra);

struct HyperKahlerTorusData {
    LieAlgebra base;  // 4-dimensional
    Form omega_I;
    Form omega_J;
    Form omega_K;
};

struct HypoCircleData {
    LieAlgebra base;  // 5-dimensional
    HypoStructure5 hypo;
};

/// Product with T^2 (generators 5, 6) or S^1 (generator 6). Throws DomainError
/// when the source hypotheses fail.
SUSYSolution build_product_solution(const HyperKahlerTorusData& src, const SUSYParams& params, SusyKind kind);
SUSYSolution build_product_solution(const HypoCircleData& src, const SUSYParams& params, SusyKind kind);

/// Phase e^{-i theta} and |a|^2 are fixed to 1.
struct PureSpinorPair {
    Form plus;
    Form minus;
    /// kpar exp((1/2) alpha conj(alpha) - i omega - i (kperp/kpar) Omega) / 8.
    Form plus_rewrite;
    /// -kperp alpha ^ exp(-i omega + i (kpar/kperp) Omega) / 8.
    Form minus_rewrite;
    bool rewrites_agree = false;
};

/// Both rewrites need kpar and kperp nonzero; when one vanishes the
/// corresponding rewrite is left zero and `rewrites_agree` is false.
PureSpinorPair pure_spinor_pair(const Form& alpha, const Form& omega, const Form& Omega, const Scalar& kpar,
                                const Scalar& kperp);

}  // namespace su2flux
