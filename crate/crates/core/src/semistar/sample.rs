//! Seeded samplers for property runs. Sample `i` of a run draws from its own
//! ChaCha stream, so parallel runs reproduce sequential ones exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::domains::{Domain, FractionalIdeal, KElem};
use crate::exact::MultiPoly;

pub struct Sampler<'a> {
    d: &'a Domain,
    rng: ChaCha8Rng,
    atoms: Vec<MultiPoly>,
    /// Maximal number of atoms in a product.
    pub depth: usize,
}

impl<'a> Sampler<'a> {
    pub fn new(d: &'a Domain, seed: u64, stream: u64) -> Sampler<'a> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Sampler {
            d,
            rng,
            atoms: d.atoms(),
            depth: 2,
        }
    }

    /// Replaces the building blocks of sampled elements.
    pub fn with_atoms(mut self, atoms: Vec<MultiPoly>) -> Sampler<'a> {
        assert!(!atoms.is_empty(), "empty atom list");
        self.atoms = atoms;
        self
    }

    pub fn domain(&self) -> &'a Domain {
        self.d
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Product of between `min` and `depth` atoms.
    pub fn atom_product(&mut self, min: usize) -> MultiPoly {
        let k = self.rng.gen_range(min..=self.depth.max(min));
        (0..k).fold(self.d.one(), |acc, _| {
            let a = &self.atoms[self.rng.gen_range(0..self.atoms.len())];
            self.d.mul(&acc, a)
        })
    }

    /// A nonzero element of `D`: an atom product, sometimes plus another.
    pub fn element_d(&mut self) -> MultiPoly {
        loop {
            let mut x = self.atom_product(0);
            if self.rng.gen_bool(0.25) {
                let y = self.atom_product(1);
                x = &x + &y;
            }
            if !x.is_zero() {
                return x;
            }
        }
    }

    pub fn element(&mut self) -> KElem {
        let num = self.element_d();
        let den = self.atom_product(0);
        self.d.k(num, den).expect("nonzero denominator")
    }

    /// Atom-product quotient `u/w`.
    pub fn monomial_element(&mut self) -> KElem {
        let num = self.atom_product(0);
        let den = self.atom_product(0);
        self.d.k(num, den).expect("nonzero denominator")
    }

    /// An integral ideal with one to three atom-product generators.
    pub fn integral_ideal(&mut self) -> FractionalIdeal {
        let k = self.rng.gen_range(1..=3);
        let gens: Vec<MultiPoly> = (0..k).map(|_| self.atom_product(1)).collect();
        FractionalIdeal::integral(self.d, gens).expect("nonzero ideal").normalize(self.d)
    }

    pub fn ideal(&mut self) -> FractionalIdeal {
        let i = self.integral_ideal();
        if self.rng.gen_bool(0.3) {
            let den = self.atom_product(1);
            FractionalIdeal::new(self.d, i.gens, den).expect("nonzero").normalize(self.d)
        } else {
            i
        }
    }
}

/// Runs `f` on samples `0..n` in parallel; sample `i` uses stream `i`.
pub fn seeded_map<T, F>(d: &Domain, seed: u64, n: usize, atoms: Option<&[MultiPoly]>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut Sampler) -> T + Sync,
{
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut s = Sampler::new(d, seed, i as u64);
            if let Some(a) = atoms {
                s = s.with_atoms(a.to_vec());
            }
            f(i, &mut s)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::Center;

    #[test]
    fn sampling_is_reproducible() {
        let d = Domain::poly(vec!["X".into(), "Y".into()], Center::Origin).unwrap();
        let a: Vec<_> = seeded_map(&d, 7, 20, None, |_, s| (s.ideal(), s.element()));
        let b: Vec<_> = seeded_map(&d, 7, 20, None, |_, s| (s.ideal(), s.element()));
        assert_eq!(a, b);
        let c: Vec<_> = seeded_map(&d, 8, 20, None, |_, s| (s.ideal(), s.element()));
        assert_ne!(a, c);
    }
}
