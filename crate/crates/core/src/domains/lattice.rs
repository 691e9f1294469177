//! Rank-2 integer lattices in Hermite normal form, the ideal model of a
//! quadratic order `Z[ω]` over the basis `{1, ω}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Vec2 = (BigInt, BigInt);

/// Lattice with basis rows `(a, 0)` and `(b, c)`, `a, c > 0`, `0 <= b < a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl Lattice {
    pub fn full() -> Lattice {
        Lattice {
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::one(),
        }
    }

    /// `k·Z²`.
    pub fn scalar(k: &BigInt) -> Lattice {
        Lattice {
            a: k.abs(),
            b: BigInt::zero(),
            c: k.abs(),
        }
    }

    /// Hermite normal form of the Z-span of `rows`; `None` below rank 2.
    pub fn from_rows(rows: &[Vec2]) -> Option<Lattice> {
        let mut rows: Vec<Vec2> = rows
            .iter()
            .filter(|(x, y)| !(x.is_zero() && y.is_zero()))
            .cloned()
            .collect();
        // clear the second column down to one pivot row
        loop {
            let nonzero: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i].1.is_zero()).collect();
            if nonzero.len() <= 1 {
                break;
            }
            let piv = *nonzero.iter().min_by_key(|&&i| rows[i].1.abs()).unwrap();
            let (px, py) = rows[piv].clone();
            for &i in &nonzero {
                if i != piv {
                    let q = rows[i].1.div_floor(&py);
                    rows[i].0 -= &q * &px;
                    rows[i].1 -= &q * &py;
                }
            }
        }
        let piv = (0..rows.len()).find(|&i| !rows[i].1.is_zero())?;
        let (mut b, mut c) = rows[piv].clone();
        if c.is_negative() {
            b = -b;
            c = -c;
        }
        let a = rows
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != piv)
            .fold(BigInt::zero(), |g, (_, (x, _))| g.gcd(x));
        if a.is_zero() {
            return None;
        }
        let b = b.mod_floor(&a);
        Some(Lattice { a, b, c })
    }

    pub fn basis(&self) -> [Vec2; 2] {
        [
            (self.a.clone(), BigInt::zero()),
            (self.b.clone(), self.c.clone()),
        ]
    }

    /// `[Z² : L]`.
    pub fn index(&self) -> BigInt {
        &self.a * &self.c
    }

    pub fn contains(&self, v: &Vec2) -> bool {
        if !v.1.is_multiple_of(&self.c) {
            return false;
        }
        let k = &v.1 / &self.c;
        (&v.0 - &k * &self.b).is_multiple_of(&self.a)
    }

    pub fn is_subset(&self, other: &Lattice) -> bool {
        self.basis().iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let mut rows = self.basis().to_vec();
        rows.extend(other.basis());
        Lattice::from_rows(&rows).expect("sum of full-rank lattices")
    }

    /// gcd of all coordinates; `L = content · L'` with `L'` primitive.
    pub fn content(&self) -> BigInt {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    /// `L / k`; `k` must divide the content.
    pub fn div_scalar(&self, k: &BigInt) -> Lattice {
        Lattice {
            a: &self.a / k,
            b: &self.b / k,
            c: &self.c / k,
        }
    }

    pub fn mul_scalar(&self, k: &BigInt) -> Lattice {
        let k = k.abs();
        Lattice {
            a: &self.a * &k,
            b: &self.b * &k,
            c: &self.c * &k,
        }
    }

    /// `L1 ∩ L2 = (L1* + L2*)*` with duals taken for the standard pairing.
    pub fn intersect(&self, other: &Lattice) -> Lattice {
        if self.is_subset(other) {
            return self.clone();
        }
        if other.is_subset(self) {
            return other.clone();
        }
        // L* = (1/(ac)) · span{(c, -b), (0, a)}
        let m = self.index().lcm(&other.index());
        let dual_rows = |l: &Lattice| {
            let k = &m / l.index();
            [
                (&l.c * &k, -(&l.b * &k)),
                (BigInt::zero(), &l.a * &k),
            ]
        };
        let mut rows = dual_rows(self).to_vec();
        rows.extend(dual_rows(other));
        let s = Lattice::from_rows(&rows).expect("dual lattices have full rank");
        // ((1/m) S)* = (m / det S) · span{(c_S, -b_S), (0, a_S)}
        let det = s.index();
        let scale = |x: BigInt| {
            let num = x * &m;
            debug_assert!(num.is_multiple_of(&det));
            num / &det
        };
        Lattice::from_rows(&[
            (scale(s.c.clone()), scale(-s.b.clone())),
            (BigInt::zero(), scale(s.a.clone())),
        ])
        .expect("intersection of full-rank lattices has full rank")
    }

    /// Preimage `{z ∈ Z² : z·M ∈ L}` for an invertible integer matrix given by
    /// rows `m = [r0, r1]`.
    pub fn preimage(&self, m: &[Vec2; 2]) -> Lattice {
        let det = &m[0].0 * &m[1].1 - &m[0].1 * &m[1].0;
        assert!(!det.is_zero(), "singular multiplication matrix");
        // adj(M) = [[m11, -m01], [-m10, m00]]
        let adj = [
            (m[1].1.clone(), -m[0].1.clone()),
            (-m[1].0.clone(), m[0].0.clone()),
        ];
        let rows: Vec<Vec2> = self
            .basis()
            .iter()
            .map(|(x, y)| (x * &adj[0].0 + y * &adj[1].0, x * &adj[0].1 + y * &adj[1].1))
            .collect();
        // L·M^{-1} = (1/det)·span(rows); intersect with Z²
        let lp = Lattice::from_rows(&rows).expect("invertible image");
        let d = det.abs();
        lp.intersect(&Lattice::scalar(&d)).div_scalar(&d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(x: i64, y: i64) -> Vec2 {
        (BigInt::from(x), BigInt::from(y))
    }

    #[test]
    fn hnf_of_simple_rows() {
        let l = Lattice::from_rows(&[v(2, 0), v(1, 1), v(-3, 1)]).unwrap();
        assert_eq!(l, Lattice::from_rows(&[v(2, 0), v(1, 1)]).unwrap());
        assert_eq!(l.index(), BigInt::from(2));
        assert!(Lattice::from_rows(&[v(1, 2), v(2, 4)]).is_none());
    }

    #[test]
    fn intersection_of_coordinate_scalings() {
        let a = Lattice::from_rows(&[v(2, 0), v(0, 1)]).unwrap();
        let b = Lattice::from_rows(&[v(1, 0), v(0, 3)]).unwrap();
        let m = a.intersect(&b);
        assert_eq!(m, Lattice::from_rows(&[v(2, 0), v(0, 3)]).unwrap());
    }

    fn lattice() -> impl Strategy<Value = Lattice> {
        (1i64..7, 0i64..7, 1i64..7).prop_map(|(a, b, c)| Lattice {
            a: a.into(),
            b: BigInt::from(b).mod_floor(&BigInt::from(a)),
            c: c.into(),
        })
    }

    proptest! {
        #[test]
        fn intersection_is_the_common_part(l1 in lattice(), l2 in lattice(), x in -30i64..30, y in -30i64..30) {
            let m = l1.intersect(&l2);
            let p = v(x, y);
            prop_assert_eq!(m.contains(&p), l1.contains(&p) && l2.contains(&p));
        }

        #[test]
        fn preimage_matches_pointwise(l in lattice(), p in -4i64..5, q in -4i64..5, x in -12i64..12, y in -12i64..12) {
            prop_assume!(p != 0 || q != 0);
            let d = -3i64;
            let m = [v(p, q), v(q * d, p)];
            let pre = l.preimage(&m);
            let image = (BigInt::from(x * p + y * q * d), BigInt::from(x * q + y * p));
            prop_assert_eq!(pre.contains(&v(x, y)), l.contains(&image));
        }
    }
}
