//! Finitely generated subgroups of the value group.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Exponent, ExponentError};

/// The subgroup `Z g_1 + ... + Z g_k` of the value group.
#[derive(Clone, Debug)]
pub struct ValueLattice {
    generators: Vec<Exponent>,
}

/// Group index of a sublattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeIndex::Finite(n) => write!(f, "{n}"),
            LatticeIndex::Infinite => write!(f, "infinite"),
        }
    }
}

type Row = Vec<BigInt>;

/// Row echelon form over Z with positive pivots; zero rows removed.
fn echelon(mut rows: Vec<Row>, ncols: usize) -> Vec<Row> {
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        loop {
            let pivot = (r..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let Some(pivot) = pivot else { break };
            rows.swap(r, pivot);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[r][col]);
                let (head, tail) = rows.split_at_mut(i);
                for (x, y) in tail[0].iter_mut().zip(&head[r]) {
                    *x -= &q * y;
                }
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !rows[r][col].is_zero() {
            if rows[r][col].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -&*x;
                }
            }
            r += 1;
        }
    }
    rows.truncate(r);
    rows
}

fn pivot_col(row: &Row) -> usize {
    row.iter().position(|x| !x.is_zero()).expect("echelon rows are nonzero")
}

/// Reduces `x` against echelon rows; returns the multipliers when `x` lies
/// in their span over Z.
fn reduce(basis: &[Row], x: &Row) -> Option<Vec<BigInt>> {
    let mut x = x.clone();
    let mut coeffs = Vec::with_capacity(basis.len());
    for row in basis {
        let c = pivot_col(row);
        let (q, rem) = x[c].div_rem(&row[c]);
        if !rem.is_zero() {
            return None;
        }
        for (xi, ri) in x.iter_mut().zip(row) {
            *xi -= &q * ri;
        }
        coeffs.push(q);
    }
    if x.iter().all(|v| v.is_zero()) {
        Some(coeffs)
    } else {
        None
    }
}

impl ValueLattice {
    pub fn new(generators: Vec<Exponent>) -> Self {
        ValueLattice { generators }
    }

    pub fn generators(&self) -> &[Exponent] {
        &self.generators
    }

    /// Integer coordinate rows for `self`'s generators and `extra`, over a
    /// common denominator.
    fn integer_rows(&self, extra: &[&Exponent]) -> Result<(Vec<Row>, Vec<Row>), ExponentError> {
        let all: Vec<&Exponent> = self.generators.iter().chain(extra.iter().copied()).collect();
        let Some(first) = all.first() else {
            return Ok((Vec::new(), Vec::new()));
        };
        let ctx = first.context().clone();
        if all.iter().any(|e| !e.same_context(first)) {
            return Err(ExponentError::ContextMismatch);
        }
        let mut denom = BigInt::one();
        for e in &all {
            for (_, q) in e.coords() {
                denom = denom.lcm(q.denom());
            }
        }
        let ncols = ctx.rank();
        let to_row = |e: &Exponent| -> Row {
            let mut row = vec![BigInt::zero(); ncols];
            for (i, q) in e.coords() {
                row[*i] = q.numer() * (&denom / q.denom());
            }
            row
        };
        let gens = self.generators.iter().map(to_row).collect();
        let xs = extra.iter().map(|e| to_row(e)).collect();
        Ok((gens, xs))
    }

    /// Whether `x` is an integer combination of the generators.
    pub fn contains(&self, x: &Exponent) -> Result<bool, ExponentError> {
        if x.is_zero() {
            return Ok(true);
        }
        if self.generators.is_empty() {
            return Ok(false);
        }
        let (gens, xs) = self.integer_rows(&[x])?;
        let ncols = gens[0].len();
        let basis = echelon(gens, ncols);
        Ok(reduce(&basis, &xs[0]).is_some())
    }

    /// Rank of the lattice (number of independent generators).
    pub fn rank(&self) -> Result<usize, ExponentError> {
        if self.generators.is_empty() {
            return Ok(0);
        }
        let (gens, _) = self.integer_rows(&[])?;
        let ncols = gens[0].len();
        Ok(echelon(gens, ncols).len())
    }

    /// The index `(self : small)`; `small` must be contained in `self`.
    pub fn index_of(&self, small: &ValueLattice) -> Result<LatticeIndex, ExponentError> {
        for g in small.generators() {
            if !self.contains(g)? {
                return Err(ExponentError::NotContained(g.to_string()));
            }
        }
        let big_rank = self.rank()?;
        if small.rank()? != big_rank {
            return Ok(LatticeIndex::Infinite);
        }
        if big_rank == 0 {
            return Ok(LatticeIndex::Finite(BigInt::one()));
        }
        let extra: Vec<&Exponent> = small.generators().iter().collect();
        let (gens, xs) = self.integer_rows(&extra)?;
        let ncols = gens[0].len();
        let basis = echelon(gens, ncols);
        let coords: Vec<Row> = xs
            .iter()
            .map(|x| reduce(&basis, x).expect("containment checked"))
            .collect();
        let reduced = echelon(coords, basis.len());
        let mut index = BigInt::one();
        for row in &reduced {
            index *= &row[pivot_col(row)];
        }
        Ok(LatticeIndex::Finite(index))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{rat, BasisContext, RFamily};
    use super::*;

    fn ell_lattice(ctx: &std::sync::Arc<super::super::BasisContext>, p: i64, l: u32) -> ValueLattice {
        let d = p.pow(l);
        ValueLattice::new(vec![
            Exponent::rational(ctx, rat(1, d)),
            Exponent::symbol(ctx, "pi", rat(1, d)).unwrap(),
        ])
    }

    #[test]
    fn membership_monster_generators() {
        // G_1 = (pi/3)Z + (1/3)Z + (3/r2)Z for p = 3
        let ctx = BasisContext::builder().pi().r_family(3, 3, RFamily::Geometric).build();
        let g1 = ValueLattice::new(vec![
            ctx.parse("pi/3").unwrap(),
            ctx.parse("1/r1").unwrap(),
            ctx.parse("3/r2").unwrap(),
        ]);
        assert!(g1.contains(&ctx.parse("pi/3").unwrap()).unwrap());
        assert!(!g1.contains(&ctx.parse("pi/9").unwrap()).unwrap());
        assert!(!g1.contains(&ctx.parse("1/r2").unwrap()).unwrap());
        assert!(g1.contains(&Exponent::zero(&ctx)).unwrap());
        assert!(g1.contains(&ctx.parse("-2*pi/3 + 5/3 - 6/r2").unwrap()).unwrap());
    }

    #[test]
    fn index_of_refined_lattices() {
        let ctx = BasisContext::with_pi();
        for l in 1..4 {
            let small = ell_lattice(&ctx, 3, l);
            let big = ell_lattice(&ctx, 3, l + 1);
            assert_eq!(big.index_of(&small).unwrap(), LatticeIndex::Finite(9.into()));
            assert_eq!(small.index_of(&small).unwrap(), LatticeIndex::Finite(1.into()));
        }
    }

    #[test]
    fn index_of_thirds_over_integers() {
        let ctx = BasisContext::rational();
        let thirds = ValueLattice::new(vec![Exponent::rational(&ctx, rat(1, 3))]);
        let ints = ValueLattice::new(vec![Exponent::int(&ctx, 1)]);
        assert_eq!(thirds.index_of(&ints).unwrap(), LatticeIndex::Finite(3.into()));
        assert!(matches!(ints.index_of(&thirds), Err(ExponentError::NotContained(_))));
    }

    #[test]
    fn rank_mismatch_gives_infinite_index() {
        let ctx = BasisContext::with_pi();
        let big = ell_lattice(&ctx, 3, 1);
        let small = ValueLattice::new(vec![Exponent::int(&ctx, 1)]);
        assert_eq!(big.index_of(&small).unwrap(), LatticeIndex::Infinite);
    }

    #[test]
    fn unimodular_recombination_preserves_membership() {
        let ctx = BasisContext::with_pi();
        let a = ctx.parse("pi/9 + 1/3").unwrap();
        let b = ctx.parse("1/9").unwrap();
        let l1 = ValueLattice::new(vec![a.clone(), b.clone()]);
        // (a, b) -> (a + 2b, a + 3b) has determinant 1
        let l2 = ValueLattice::new(vec![&a + &b.scale(&rat(2, 1)), &a + &b.scale(&rat(3, 1))]);
        for x in ["pi/9", "pi/9 + 4/9", "2*pi/9 - 1/3", "1/27", "pi/3"] {
            let x = ctx.parse(x).unwrap();
            assert_eq!(l1.contains(&x).unwrap(), l2.contains(&x).unwrap(), "{x}");
        }
    }
}
