//! Property identifiers, the statements they check and their check functions.

use crate::error::{Error, Result};
use crate::properties::checks::{invariance as inv, operators as ops, paired, transposed as tr};
use crate::properties::runner::CheckFn;

pub struct PropertySpec {
    pub id: &'static str,
    /// The statement under test, in formula form.
    pub anchor: &'static str,
    pub check: CheckFn,
}

const REGISTRY: &[PropertySpec] = &[
    PropertySpec { id: "P_NORM", anchor: "m ≤ ‖S_{a,b}‖ ≤ min(‖a‖∞ + ‖b‖∞, √2 m), m = max(‖a‖∞, ‖b‖∞)", check: ops::p_norm },
    PropertySpec { id: "P_ZERO", anchor: "S_{a,b} = 0 ⟺ Σ_{a,b} = 0 ⟺ a = b = 0", check: ops::p_zero },
    PropertySpec { id: "P_PROD", anchor: "S_{a,b} S_{ã,b̃} = S_{aã,bb̃} for ã ∈ H∞, b̃ ∈ conj H∞", check: ops::p_prod },
    PropertySpec { id: "P_PRODRES", anchor: "S_{a,b} S_{ã,b̃} − S_{aã,bb̃} = (a − b)(P⁺ b̃ P⁻ − P⁻ ã P⁺)", check: ops::p_prodres },
    PropertySpec { id: "P_COMMEXP", anchor: "[S_{a,b}, S_{ã,b̃}] in terms of Hankel-type operators", check: ops::p_commexp },
    PropertySpec { id: "P_FINRANK", anchor: "rational symbols give finite-rank remainders and commutators", check: ops::p_finrank },
    PropertySpec { id: "P_COMMUTANT", anchor: "[S_{a,b}, S_{ã,b̃}] = 0 ⟺ a = b, ã = b̃ or a, ã ∈ H∞, b, b̃ ∈ conj H∞ or a = λã + μ, b = λb̃ + μ", check: ops::p_commutant },
    PropertySpec { id: "P_CONSTCOMM", anchor: "S_{a,b} η = η S_{a,b} ⟺ η ∈ ℂ", check: ops::p_constcomm },
    PropertySpec { id: "P_KERCOMM_S", anchor: "ker [S_{a,b}, ηI] = ker H_η ⊕ ker H̃_η", check: ops::p_kercomm_s },
    PropertySpec { id: "P_KERCOMM_SIG", anchor: "Σ_{a,b} η f = η Σ_{a,b} f ⟺ (a − b) f ∈ ker [S_{a,b}, ηI]", check: ops::p_kercomm_sig },
    PropertySpec { id: "P_ADJ", anchor: "S*_{a,b} is a paired operator ⟺ a − b ∈ ℂ", check: ops::p_adj },
    PropertySpec { id: "P_JMAP", anchor: "ψ ↦ (a − b)ψ maps ker Σ_{a,b} into ker S_{a,b}", check: paired::p_jmap },
    PropertySpec { id: "P_RANK1", anchor: "[S_{a,b}, M_z] f = (a − b) f̂(−1), [Σ_{a,b}, M_z] f = [z P⁻(a − b) f](∞)", check: ops::p_rank1 },
    PropertySpec { id: "P_EQUIV", anchor: "P⁺a + P⁻b = [(I + P⁺ab⁻¹P⁻)a](b⁻¹P⁺ + a⁻¹P⁻)[(I − P⁻ab⁻¹P⁺)b]", check: ops::p_equiv },
    PropertySpec { id: "P_RH", anchor: "φ ∈ ker S_{a,b} ⟺ a φ₊ + b φ₋ = 0", check: paired::p_rh },
    PropertySpec { id: "P_SCALE", anchor: "ker S_{a,b} = ker S_{aη,bη}", check: paired::p_scale },
    PropertySpec { id: "P_KEREQ", anchor: "ker S_{a,b} = ker S_{ã,b̃} ⟺ a b̃ = ã b", check: paired::p_kereq },
    PropertySpec { id: "P_UNIQUE", anchor: "each nonzero φ ∈ L² lies in exactly one paired kernel", check: paired::p_unique },
    PropertySpec { id: "P_NONTRIV_S", anchor: "ker S_{a,b} ≠ {0} ⟺ a/b = I₋ O₋ O₊⁻¹", check: paired::p_nontriv_s },
    PropertySpec { id: "P_COBURN_S", anchor: "ker S_{a,b} = {0} or ker S_{b,a} = {0}", check: paired::p_coburn_s },
    PropertySpec { id: "P_SIGMA_STRUCT", anchor: "ker Σ_{a,b} = (b⁻¹ ker T_{a/b}) ∩ L², ker Σ_{h̄,θ} = θ̄ K_θ", check: tr::p_sigma_struct },
    PropertySpec { id: "P_NONTRIV_SIG", anchor: "ker Σ_{a,b} ≠ {0} ⟺ a/b = I₋ O₋ O₊⁻¹ with O₋/a, O₊/b ∈ L²", check: tr::p_nontriv_sig },
    PropertySpec { id: "P_SIGMA_INCL", anchor: "ker Σ_{a,b} ⊆ ker Σ_{ah₋,bh₊}, equal iff h₋, h₊ outer", check: tr::p_sigma_incl },
    PropertySpec { id: "P_COBURN_SIG", anchor: "ker Σ_{a,b} = {0} or ker Σ_{b,a} = {0}", check: tr::p_coburn_sig },
    PropertySpec { id: "P_INV", anchor: "ker S_{a,b} is S_{ã,b̃}-invariant for a, ã ∈ H∞, b, b̃ ∈ conj H∞", check: inv::p_inv },
    PropertySpec { id: "P_MODELINV", anchor: "Σ_{ã,b̃} K_θ ⊆ K_θ for ã ∈ conj H∞, b̃ ∈ H∞", check: inv::p_modelinv },
    PropertySpec { id: "P_ALMOST", anchor: "X ker T ⊆ ker T ⊕ F with dim F ≤ rank [X, T]", check: inv::p_almost },
    PropertySpec { id: "P_DEFECT1", anchor: "z ker S_{a,b} ⊆ ker S_{a,b} ⊕ F with dim F ≤ 1", check: inv::p_defect1 },
    PropertySpec { id: "P_STAB", anchor: "f ∈ ker S_{a,b}, H_η f₊ = 0, H̃_η f₋ = 0 ⟹ η f ∈ ker S_{a,b}", check: inv::p_stab },
    PropertySpec { id: "P_FPLUS0", anchor: "every nonzero paired kernel has elements with f₊(0) ≠ 0 and f̂(−1) ≠ 0", check: inv::p_fplus0 },
];

pub fn registry() -> &'static [PropertySpec] {
    REGISTRY
}

pub fn lookup(id: &str) -> Result<&'static PropertySpec> {
    REGISTRY.iter().find(|p| p.id == id).ok_or_else(|| Error::UnknownProperty(id.to_string()))
}
