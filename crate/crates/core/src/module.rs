use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::ring::{AmbientRing, Exponent};

/// A monomial submodule `E ⊆ F = R^n`, stored as the coefficient ideal of
/// each basis vector: `E = ⊕ I_i e_i`.
///
/// Equivalently `E` is the ideal of `k[x, y_1..y_n]` generated in `y`-degree
/// one by `x^a y_i` for `x^a ∈ I_i`; the `y`-degree `k` part of its `k`-th
/// power is `E^k ⊆ F^k = Sym^k(R^n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialModule {
    ring: Arc<AmbientRing>,
    components: Vec<MonomialIdeal>,
}

/// Graded piece of `E^k`: for each `y`-multidegree of total degree `k`, the
/// ideal of `x`-exponents of monomials in that component.
pub type ModulePiece = BTreeMap<Vec<u32>, MonomialIdeal>;

impl MonomialModule {
    pub fn new(ring: &Arc<AmbientRing>, components: Vec<MonomialIdeal>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::MalformedSpec("free module rank must be positive".into()));
        }
        if components.iter().any(|c| **c.ring() != **ring) {
            return Err(Error::RingMismatch);
        }
        Ok(Self { ring: Arc::clone(ring), components })
    }

    /// Builds the module from generators `(x-exponent, basis index)`.
    pub fn from_generators(ring: &Arc<AmbientRing>, rank: usize, gens: Vec<(Exponent, usize)>) -> Result<Self> {
        let mut per: Vec<Vec<Exponent>> = vec![Vec::new(); rank];
        for (a, i) in gens {
            if i >= rank {
                return Err(Error::DimensionMismatch { expected: rank, found: i + 1 });
            }
            per[i].push(a);
        }
        let components = per
            .into_iter()
            .map(|g| MonomialIdeal::minimalize(ring, g))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ring, components)
    }

    /// `E = F`.
    pub fn free(ring: &Arc<AmbientRing>, rank: usize) -> Result<Self> {
        Self::new(ring, vec![MonomialIdeal::unit(ring); rank])
    }

    pub fn ring(&self) -> &Arc<AmbientRing> {
        &self.ring
    }

    pub fn free_rank(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[MonomialIdeal] {
        &self.components
    }

    /// Rank of `E`: the dimension of the span of the `y`-degrees of its
    /// generators, i.e. `dim R[E] - d`. Each nonzero component contributes one.
    pub fn rank(&self) -> usize {
        self.components.iter().filter(|c| !c.is_zero()).count()
    }

    /// The module as a monomial ideal in `d + n` variables.
    pub fn as_ideal(&self) -> Result<MonomialIdeal> {
        let d = self.ring.dim();
        let n = self.free_rank();
        let mut names: Vec<String> = self.ring.names().to_vec();
        for i in 1..=n {
            let mut name = format!("y{i}");
            while names.contains(&name) {
                name.insert(0, '_');
            }
            names.push(name);
        }
        let big = AmbientRing::new(&names)?;
        let mut gens = Vec::new();
        for (i, c) in self.components.iter().enumerate() {
            for g in c.gens() {
                let mut v = g.0.clone();
                v.resize(d + n, 0);
                v[d + i] = 1;
                gens.push(Exponent(v));
            }
        }
        MonomialIdeal::minimalize(&big, gens)
    }

    /// The next graded piece: `(E^{k+1})_β = Σ_{β_i > 0} (E^k)_{β - e_i} · I_i`.
    pub fn next_piece(&self, piece: &ModulePiece) -> ModulePiece {
        let n = self.free_rank();
        let mut out: ModulePiece = BTreeMap::new();
        for (beta, ideal) in piece {
            for (i, comp) in self.components.iter().enumerate() {
                let mut b = beta.clone();
                b[i] += 1;
                let prod = ideal.multiply(comp).expect("same ring");
                let entry = out.entry(b).or_insert_with(|| MonomialIdeal::zero(&self.ring));
                *entry = entry.sum(&prod).expect("same ring");
            }
        }
        debug_assert!(out.keys().all(|b| b.len() == n));
        out
    }

    /// `E^0 = R` in `y`-degree zero.
    pub fn zeroth_piece(&self) -> ModulePiece {
        let mut out = BTreeMap::new();
        out.insert(vec![0; self.free_rank()], MonomialIdeal::unit(&self.ring));
        out
    }

    /// Components of `E^k` for every `y`-multidegree of total degree `k`.
    pub fn piece(&self, k: u32) -> ModulePiece {
        let mut p = self.zeroth_piece();
        for _ in 0..k {
            p = self.next_piece(&p);
        }
        p
    }
}

/// Same as [`MonomialModule::piece`].
pub fn module_piece(module: &MonomialModule, k: u32) -> ModulePiece {
    module.piece(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_ideal;

    #[test]
    fn degree_one_piece_is_the_module() {
        let r = AmbientRing::standard(2).unwrap();
        let i = parse_ideal(&r, "x^2, x*y").unwrap();
        let e = MonomialModule::new(&r, vec![i.clone(), MonomialIdeal::unit(&r)]).unwrap();
        let p1 = e.piece(1);
        assert_eq!(p1[&vec![1, 0]], i);
        assert!(p1[&vec![0, 1]].is_unit());
        let p2 = e.piece(2);
        assert_eq!(p2.len(), 3);
        assert_eq!(p2[&vec![2, 0]], i.power(2));
        assert_eq!(p2[&vec![1, 1]], i);
        assert!(p2[&vec![0, 2]].is_unit());
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn pieces_agree_with_powers_of_the_big_ideal() {
        let r = AmbientRing::standard(2).unwrap();
        let e = MonomialModule::new(
            &r,
            vec![parse_ideal(&r, "x^2, y").unwrap(), parse_ideal(&r, "x*y, y^3").unwrap()],
        )
        .unwrap();
        let big = e.as_ideal().unwrap();
        for k in 0..4u32 {
            let pw = big.power(k);
            let piece = e.piece(k);
            // Regroup the generators of the big power by y-part.
            let mut grouped: BTreeMap<Vec<u32>, Vec<Exponent>> = BTreeMap::new();
            for g in pw.gens() {
                grouped.entry(g.0[2..].to_vec()).or_default().push(Exponent(g.0[..2].to_vec()));
            }
            for (beta, gens) in grouped {
                assert_eq!(piece[&beta], MonomialIdeal::minimalize(&r, gens).unwrap(), "k={k} beta={beta:?}");
            }
        }
    }

    #[test]
    fn free_module_pieces_are_unit() {
        let r = AmbientRing::standard(3).unwrap();
        let f = MonomialModule::free(&r, 2).unwrap();
        assert!(f.piece(3).values().all(|c| c.is_unit()));
        assert_eq!(f.piece(3).len(), 4);
    }
}
