//! Abelianizations: presentation matrices, coinvariants of free kernels and
//! semidirect towers.

pub mod matrix;

use num_bigint::BigInt;

use crate::combing::{
    keromega_basis, ln_generators, rewrite_keromega, ActionTable, Comber, KernelBasis,
};
use crate::error::{Error, Result};
use crate::free::FreeAut;
use crate::presentations::{Presentation, Surface};
use crate::words::{Generator, Word};
use crate::{AbelianInvariants, IntMatrix};

pub use matrix::{smith_diagonal, snf, Invariants, Matrix, Scalar};

/// Exponent-sum vector of `w` over `generators`.
fn exponent_vector(generators: &[Generator], w: &Word) -> Result<Vec<BigInt>> {
    let mut v = vec![BigInt::from(0); generators.len()];
    for l in w.letters() {
        let k = generators
            .binary_search(&l.gen)
            .map_err(|_| Error::AlphabetMismatch {
                gen: l.gen,
                context: "the presentation".into(),
            })?;
        v[k] += l.exp;
    }
    Ok(v)
}

/// The relation matrix: generators index rows, relators index columns.
pub fn relation_matrix(p: &Presentation) -> Result<IntMatrix> {
    let cols = p
        .relator_words()
        .map(|r| exponent_vector(&p.generators, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(IntMatrix::from_columns(p.generators.len(), &cols))
}

pub fn abelianize_presentation(p: &Presentation) -> AbelianInvariants {
    snf(&relation_matrix(p).expect("relators use presentation generators"))
}

/// Whether `w` dies in the abelianization of `p`.
///
/// Adding a column `v` to the relation matrix leaves the cokernel unchanged
/// exactly when `v` is already in the column lattice, because finitely
/// generated abelian groups are not isomorphic to proper quotients of
/// themselves.
pub fn abelian_image_trivial(p: &Presentation, w: &Word) -> Result<bool> {
    let mut cols = p
        .relator_words()
        .map(|r| exponent_vector(&p.generators, r))
        .collect::<Result<Vec<_>>>()?;
    let base = snf(&IntMatrix::from_columns(p.generators.len(), &cols));
    cols.push(exponent_vector(&p.generators, w)?);
    Ok(snf(&IntMatrix::from_columns(p.generators.len(), &cols)) == base)
}

/// `K / <[K,K], phi(h)(b) b^-1>` for a free group `K` of the given rank.
pub fn delta_coinvariants(rank: usize, actions: &[FreeAut]) -> Result<AbelianInvariants> {
    let mut cols = Vec::new();
    for phi in actions {
        if phi.rank() != rank || phi.images().iter().any(|w| w.support_rank() > rank) {
            return Err(Error::NotAutomorphism { rank });
        }
        for (b, img) in phi.images().iter().enumerate() {
            let mut v: Vec<BigInt> = img.abelianize(rank).into_iter().map(BigInt::from).collect();
            v[b] -= 1;
            cols.push(v);
        }
    }
    Ok(snf(&IntMatrix::from_columns(rank, &cols)))
}

/// One free factor of a semidirect tower with the automorphisms by which
/// the generators of the group below act on it.
#[derive(Clone, Debug)]
pub struct TowerLevel {
    pub rank: usize,
    pub actions: Vec<FreeAut>,
}

/// Sum of the coinvariants of every level. The bottom level carries no
/// action and contributes its full abelianization.
pub fn tower_abelianization(levels: &[TowerLevel]) -> Result<AbelianInvariants> {
    let mut acc = AbelianInvariants::free(0);
    for level in levels {
        acc = acc.direct_sum(&delta_coinvariants(level.rank, &level.actions)?);
    }
    Ok(acc)
}

fn check_ln(n: usize) -> Result<usize> {
    if n < 3 {
        return Err(Error::Parameter(format!("needs n >= 3, got {n}")));
    }
    Ok(n - 2)
}

fn gamma_level(table: &ActionTable) -> TowerLevel {
    TowerLevel {
        rank: table.basis().rank(),
        actions: table.forward_twisted().cloned().collect(),
    }
}

/// The tower `Omega_{m+1} ⋊ (... ⋊ Omega_2)` of `Gamma_{m,2}(RP^2)`, top first.
pub fn gamma_tower(m: usize) -> Result<Vec<TowerLevel>> {
    let comber = Comber::shared(m)?;
    Ok((2..=m + 1)
        .rev()
        .map(|l| gamma_level(comber.table(l)))
        .collect())
}

/// The action of the `L`-generators on strands `3..=l` on the basis of
/// `ker(iota-hat | Omega_l)`.
fn ln_level(table: &ActionTable) -> Result<TowerLevel> {
    let l = table.level();
    let basis = table.basis();
    let kernel: Vec<_> = keromega_basis(l)?
        .iter()
        .map(|b| basis.to_free(b))
        .collect::<Result<_>>()?;
    let acting: Vec<Word> = if l >= 3 {
        ln_generators(l)?
    } else {
        Vec::new()
    };
    let mut actions = Vec::with_capacity(acting.len());
    for h in &acting {
        let images = kernel
            .iter()
            .map(|b| rewrite_keromega(l, &table.act(h, b)?))
            .collect::<Result<Vec<_>>>()?;
        actions.push(FreeAut::from_images(images));
    }
    Ok(TowerLevel {
        rank: kernel.len(),
        actions,
    })
}

/// The tower of `L_n`, top first.
pub fn ln_tower(n: usize) -> Result<Vec<TowerLevel>> {
    let m = check_ln(n)?;
    let comber = Comber::shared(m)?;
    (2..=m + 1)
        .rev()
        .map(|l| ln_level(comber.table(l)))
        .collect()
}

/// `Delta(Omega_n)` under the twisted action of `Gamma_{n-2,2}`.
pub fn delta_omega(n: usize) -> Result<AbelianInvariants> {
    check_ln(n)?;
    let level = gamma_level(&ActionTable::build(n)?);
    delta_coinvariants(level.rank, &level.actions)
}

/// `Delta(ker(iota-hat | Omega_n))` under the action of `L_n`.
pub fn delta_ker(n: usize) -> Result<AbelianInvariants> {
    check_ln(n)?;
    let level = ln_level(&ActionTable::build(n)?)?;
    delta_coinvariants(level.rank, &level.actions)
}

/// Coinvariants of the free kernel of forgetting the last strand of
/// `Gamma_{m+1,l}(S)`, under conjugation by the generators of
/// `Gamma_{m,l}(S)` on strands `l+1..=m+l`.
pub fn fn_kernel_coinvariants(surface: Surface, m: usize, l: usize) -> Result<AbelianInvariants> {
    let min_l = match surface {
        Surface::S2 => 3,
        Surface::RP2 => 2,
    };
    if m < 1 || l < min_l {
        return Err(Error::Parameter(format!(
            "fn_kernel_coinvariants({surface}) needs m >= 1, l >= {min_l}"
        )));
    }
    let basis = KernelBasis::new(surface, m + l + 1)?;
    let mut actions = Vec::new();
    for j in l + 1..=m + l {
        for i in 1..j {
            actions.push(basis.raw_action(Generator::A(i, j))?);
        }
        if surface == Surface::RP2 {
            actions.push(basis.raw_action(Generator::Rho(j))?);
        }
    }
    delta_coinvariants(basis.rank(), &actions)
}

/// `log_2` of the number of subgroups complementing the full twist in
/// `K_n`: the dimension of `H_1(L_n; Z_2)`, computed from the tower.
pub fn subgroup_count_exponent(n: usize) -> Result<usize> {
    Ok(tower_abelianization(&ln_tower(n)?)?.rank_mod2())
}

/// Length of the free-factor tower of the finite-index torsion-free
/// subgroup used for `P_n(S)`: `Gamma_{n-2,2}(RP^2)` or `Gamma_{n-3,3}(S^2)`.
pub fn vcd_report(surface: Surface, n: usize) -> Result<usize> {
    match surface {
        Surface::RP2 => {
            check_ln(n)?;
            Ok((2..=n - 1)
                .map(KernelBasis::omega)
                .collect::<Result<Vec<_>>>()?
                .len())
        }
        Surface::S2 => {
            if n < 4 {
                return Err(Error::Parameter(format!(
                    "vcd of P_n(S2) needs n >= 4, got {n}"
                )));
            }
            // One free factor per strand 4..=n, each of positive rank.
            let factors = (4..=n)
                .map(|t| KernelBasis::new(Surface::S2, t))
                .collect::<Result<Vec<_>>>()?;
            debug_assert!(factors.iter().all(|b| b.rank() >= 1));
            Ok(factors.len())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free::FreeWord;
    use crate::presentations::{build_gamma_rp2, build_gamma_s2, build_pn_rp2};

    fn inv(free_rank: usize, torsion: &[u32]) -> AbelianInvariants {
        Invariants {
            free_rank,
            torsion: torsion.iter().map(|&d| BigInt::from(d)).collect(),
        }
    }

    #[test]
    fn presentation_examples() {
        assert_eq!(
            abelianize_presentation(&build_pn_rp2(3).unwrap()),
            inv(0, &[2, 2, 2])
        );
        assert_eq!(
            abelianize_presentation(&build_gamma_rp2(2, 2).unwrap()),
            inv(4, &[])
        );
        assert_eq!(
            abelianize_presentation(&build_gamma_s2(1, 1).unwrap()),
            inv(0, &[])
        );
        assert_eq!(
            abelianize_presentation(&build_gamma_s2(1, 3).unwrap()),
            inv(2, &[])
        );
    }

    #[test]
    fn abelian_image_membership() {
        let p = build_pn_rp2(2).unwrap();
        assert!(abelian_image_trivial(&p, &"tau[1]^2".parse().unwrap()).unwrap());
        assert!(!abelian_image_trivial(&p, &"tau[1]".parse().unwrap()).unwrap());
        assert!(abelian_image_trivial(&p, &"A[1,2]".parse().unwrap()).unwrap());
    }

    #[test]
    fn trivial_action_is_free() {
        assert_eq!(
            delta_coinvariants(3, &[FreeAut::identity(3)]).unwrap(),
            inv(3, &[])
        );
        assert_eq!(
            tower_abelianization(&[TowerLevel {
                rank: 3,
                actions: vec![]
            }])
            .unwrap(),
            inv(3, &[])
        );
        // x0 -> x0 x1^2: kills 2 x1
        let phi = FreeAut::from_images(vec![FreeWord::from_letters([1, 2, 2]), FreeWord::basis(1)]);
        assert_eq!(delta_coinvariants(2, &[phi]).unwrap(), inv(1, &[2]));
        let bad = FreeAut::from_images(vec![FreeWord::basis(2), FreeWord::basis(1)]);
        assert!(delta_coinvariants(2, &[bad]).is_err());
    }

    #[test]
    fn towers_small() {
        assert_eq!(
            tower_abelianization(&gamma_tower(2).unwrap()).unwrap(),
            inv(4, &[])
        );
        assert_eq!(
            tower_abelianization(&ln_tower(4).unwrap()).unwrap(),
            inv(8, &[])
        );
        assert_eq!(delta_omega(3).unwrap(), inv(2, &[]));
        assert_eq!(delta_ker(3).unwrap(), inv(5, &[]));
    }

    #[test]
    fn coinvariant_examples() {
        assert_eq!(
            fn_kernel_coinvariants(Surface::RP2, 2, 2).unwrap(),
            inv(2, &[])
        );
        assert_eq!(
            fn_kernel_coinvariants(Surface::RP2, 1, 2).unwrap(),
            inv(2, &[])
        );
        assert_eq!(
            fn_kernel_coinvariants(Surface::S2, 1, 3).unwrap(),
            inv(3, &[])
        );
        assert!(fn_kernel_coinvariants(Surface::S2, 1, 2).is_err());
    }

    #[test]
    fn counts_and_vcd() {
        assert_eq!(subgroup_count_exponent(3).unwrap(), 3);
        assert_eq!(vcd_report(Surface::RP2, 3).unwrap(), 1);
        assert_eq!(vcd_report(Surface::S2, 4).unwrap(), 1);
        assert!(vcd_report(Surface::S2, 3).is_err());
    }
}
