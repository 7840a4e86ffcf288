//! Liouville-type lower bounds for |P(α)| and Güting's bound at zeros of
//! higher order.

use hurwitz_dense::algebraic::{guting_bound, liouville_bound, AlgebraicParameter, IntegerPolynomial};

fn main() -> hurwitz_dense::Result<()> {
    let params = [
        ("sqrt2-1", AlgebraicParameter::sqrt2_minus_1()),
        ("golden", AlgebraicParameter::golden_conjugate()),
        ("cubic", AlgebraicParameter::cubic_root()),
    ];
    let polys = [vec![1, 1], vec![-3, 7], vec![1, -5, 2], vec![2, 0, -7, 1]];
    for (name, alpha) in &params {
        for c in &polys {
            let p = IntegerPolynomial::from_i64(c);
            let r = liouville_bound(&p, alpha)?;
            println!(
                "{name:8} P = {p}: |P(alpha)| = {:.6e} >= {:.6e}: {}",
                r.value, r.bound, r.holds
            );
        }
    }

    let p = IntegerPolynomial::from_i64(&[1, -2, 1]);
    let q = IntegerPolynomial::from_i64(&[-1, 1]);
    for t in 1..=2 {
        println!("Guting bound for (X-1)^2 at the zero of X-1, t = {t}: {:.6}", guting_bound(&p, &q, t, 1.0)?);
    }
    Ok(())
}
