//! Jordan–Wigner images of ladder operators and a few identities they obey.

use eom_adapt::ops::{jordan_wigner, FermionOperator, Ladder};
use num_complex::Complex64;

fn main() -> eom_adapt::Result<()> {
    let n = 4;
    let a1 = jordan_wigner(&FermionOperator::annihilation(1), n)?;
    let c3 = jordan_wigner(&FermionOperator::creation(3), n)?;
    println!("a_1   = {a1}");
    println!("a†_3  = {c3}");
    println!("{{a_1, a†_3}} = {}", a1.anticommutator(&c3)?);
    println!("{{a_1, a†_1}} = {}", a1.anticommutator(&a1.adjoint())?);

    // a hopping term and its Hermitian partner
    let hop = FermionOperator::term(
        Complex64::new(-1.0, 0.0),
        vec![Ladder::create(0), Ladder::annihilate(2)],
    );
    let hop = &hop + &hop.adjoint();
    let q = jordan_wigner(&hop, n)?;
    println!("hopping 0<->2 = {q}");
    println!("Hermitian: {}", q.is_hermitian(1e-14));

    let number = (0..n).fold(FermionOperator::zero(), |acc, m| {
        &acc + &FermionOperator::number(m)
    });
    let nq = jordan_wigner(&number, n)?;
    println!("[hop, N] vanishes: {}", q.commutator(&nq)?.is_zero(1e-14));
    Ok(())
}
