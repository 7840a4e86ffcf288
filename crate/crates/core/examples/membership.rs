//! Exact membership tests for the exceptional set 𝒜(Q,M) = 𝒜₁ ∪ 𝒜₂ and the
//! constant K(Q,M,α).

use hurwitz_dense::algebraic::{family_height, kappa_constant, membership_a, AlgebraicParameter, FamilyCaps};

fn main() -> hurwitz_dense::Result<()> {
    let caps = FamilyCaps::default();
    println!("H(2,1) = {}", family_height(2, 1, &caps)?);
    let params = [
        ("sqrt2-1", AlgebraicParameter::sqrt2_minus_1()),
        ("golden", AlgebraicParameter::golden_conjugate()),
        ("cubic", AlgebraicParameter::cubic_root()),
        ("quartic", AlgebraicParameter::quartic_root()),
    ];
    for (name, alpha) in &params {
        let m = membership_a(alpha, 2, 1, &caps)?;
        let k = kappa_constant(2, 1, alpha, &caps)?;
        println!(
            "{name:8} d = {}: A1 {}, A2 {} (failing triple {:?}), pairs decided {}, float-only {}, ln K = {:.4}",
            alpha.degree(),
            m.in_a1,
            m.in_a2,
            m.witness,
            m.pairs_decided,
            m.float_only_conclusions,
            k.ln_k
        );
    }
    Ok(())
}
