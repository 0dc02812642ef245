//! Finite abelian groups `Z_{n1} x ... x Z_{nd}` with a fixed row-major
//! enumeration of elements, and their dual groups realized through the
//! characters `chi_k(x) = exp(2 pi i sum_j k_j x_j / n_j)`.
//!
//! The dual group shares the index set of the group itself: index `k`
//! names the character with frequency tuple `element(k)`.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default cap on the group order, keeping dense `N x N` matrices feasible.
pub const DEFAULT_ORDER_CAP: usize = 4096;

/// A product of cyclic groups with canonical row-major enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    orders: Vec<usize>,
    strides: Vec<usize>,
    order: usize,
}

/// Element of a [`FiniteAbelianGroup`]: one residue per cyclic factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    residues: Vec<usize>,
}

/// Character of a [`FiniteAbelianGroup`]: one frequency per cyclic factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Character {
    frequencies: Vec<usize>,
}

impl GroupElement {
    pub fn residues(&self) -> &[usize] {
        &self.residues
    }
}

impl Character {
    pub fn frequencies(&self) -> &[usize] {
        &self.frequencies
    }
}

impl FiniteAbelianGroup {
    /// Builds the group `Z_{orders[0]} x ... x Z_{orders[d-1]}` under the
    /// default order cap.
    pub fn new(orders: &[usize]) -> Result<Self> {
        Self::with_cap(orders, DEFAULT_ORDER_CAP)
    }

    /// Builds the group with an explicit cap on the total order.
    pub fn with_cap(orders: &[usize], cap: usize) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::InvalidGroup("empty list of cyclic orders".into()));
        }
        if let Some(&bad) = orders.iter().find(|&&n| n == 0) {
            return Err(Error::InvalidGroup(format!("cyclic order {bad} must be >= 1")));
        }
        let mut order = 1usize;
        for &n in orders {
            order = order
                .checked_mul(n)
                .ok_or_else(|| Error::SizeCap { order: usize::MAX, cap })?;
        }
        if order > cap {
            return Err(Error::SizeCap { order, cap });
        }
        // Row-major strides: the last coordinate varies fastest.
        let mut strides = vec![1usize; orders.len()];
        for j in (0..orders.len().saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * orders[j + 1];
        }
        Ok(Self {
            orders: orders.to_vec(),
            strides,
            order,
        })
    }

    /// Total order `N = prod n_j`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Cyclic factor orders `(n_1, ..., n_d)`.
    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    /// Number of cyclic factors.
    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// The identity element (all-zero residues).
    pub fn identity(&self) -> GroupElement {
        GroupElement {
            residues: vec![0; self.orders.len()],
        }
    }

    /// Decodes index `i` in `{0, ..., N-1}` to its residue tuple.
    pub fn element(&self, index: usize) -> GroupElement {
        debug_assert!(index < self.order);
        let residues = self
            .orders
            .iter()
            .zip(&self.strides)
            .map(|(&n, &s)| (index / s) % n)
            .collect();
        GroupElement { residues }
    }

    /// Decodes index `k` to the character with frequency tuple `element(k)`.
    pub fn character(&self, index: usize) -> Character {
        Character {
            frequencies: self.element(index).residues,
        }
    }

    /// Encodes an element back to its row-major index.
    pub fn index(&self, a: &GroupElement) -> Result<usize> {
        self.check_residues(&a.residues)?;
        Ok(self.encode(&a.residues))
    }

    /// Encodes a character back to its row-major index.
    pub fn character_index(&self, chi: &Character) -> Result<usize> {
        self.check_residues(&chi.frequencies)?;
        Ok(self.encode(&chi.frequencies))
    }

    fn encode(&self, residues: &[usize]) -> usize {
        residues
            .iter()
            .zip(&self.strides)
            .map(|(&r, &s)| r * s)
            .sum()
    }

    fn check_residues(&self, residues: &[usize]) -> Result<()> {
        if residues.len() != self.orders.len() {
            return Err(Error::InvalidElement(format!(
                "rank mismatch: element has {} coordinates, group has {}",
                residues.len(),
                self.orders.len()
            )));
        }
        for (j, (&r, &n)) in residues.iter().zip(&self.orders).enumerate() {
            if r >= n {
                return Err(Error::InvalidElement(format!(
                    "coordinate {j} holds {r}, outside Z_{n}"
                )));
            }
        }
        Ok(())
    }

    /// Componentwise sum mod `n_j`.
    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check_residues(&a.residues)?;
        self.check_residues(&b.residues)?;
        let residues = a
            .residues
            .iter()
            .zip(&b.residues)
            .zip(&self.orders)
            .map(|((&x, &y), &n)| (x + y) % n)
            .collect();
        Ok(GroupElement { residues })
    }

    /// Componentwise negation mod `n_j`.
    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check_residues(&a.residues)?;
        let residues = a
            .residues
            .iter()
            .zip(&self.orders)
            .map(|(&x, &n)| (n - x) % n)
            .collect();
        Ok(GroupElement { residues })
    }

    /// Index-level group law; both operands interpreted through `element`.
    pub fn add_indices(&self, i: usize, j: usize) -> usize {
        let mut out = 0usize;
        for (&n, &s) in self.orders.iter().zip(&self.strides) {
            let x = (i / s) % n;
            let y = (j / s) % n;
            out += ((x + y) % n) * s;
        }
        out
    }

    /// Index-level negation.
    pub fn neg_index(&self, i: usize) -> usize {
        let mut out = 0usize;
        for (&n, &s) in self.orders.iter().zip(&self.strides) {
            let x = (i / s) % n;
            out += ((n - x) % n) * s;
        }
        out
    }

    /// Index-level subtraction `i - j`.
    pub fn sub_indices(&self, i: usize, j: usize) -> usize {
        self.add_indices(i, self.neg_index(j))
    }

    /// Evaluates `chi(x) = exp(2 pi i sum_j k_j x_j / n_j)`.
    pub fn character_eval(&self, chi: &Character, x: &GroupElement) -> Result<Complex64> {
        self.check_residues(&chi.frequencies)?;
        self.check_residues(&x.residues)?;
        let k = self.encode(&chi.frequencies);
        let xi = self.encode(&x.residues);
        Ok(self.character_eval_indices(k, xi))
    }

    /// Index-level character evaluation.
    pub fn character_eval_indices(&self, k: usize, x: usize) -> Complex64 {
        // Reduce k_j * x_j mod n_j before dividing, so the phase stays in
        // [0, 2 pi d) and cos/sin keep full precision.
        let mut phase = 0.0f64;
        for (&n, &s) in self.orders.iter().zip(&self.strides) {
            let kj = (k / s) % n;
            let xj = (x / s) % n;
            phase += ((kj * xj) % n) as f64 / n as f64;
        }
        Complex64::from_polar(1.0, TAU * phase)
    }

    /// Iterates all elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(|i| self.element(i))
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let spec: Vec<String> = self.orders.iter().map(|n| n.to_string()).collect();
        write!(f, "{}", spec.join("x"))
    }
}

impl FromStr for FiniteAbelianGroup {
    type Err = Error;

    /// Parses the `"n1xn2x...xnd"` group specification, e.g. `"2x3x4"`.
    fn from_str(s: &str) -> Result<Self> {
        let orders: Vec<usize> = s
            .split('x')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidGroup(format!("bad group spec token {tok:?}")))
            })
            .collect::<Result<_>>()?;
        FiniteAbelianGroup::new(&orders)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng as _, SeedableRng as _};

    #[test]
    fn orders_and_enumeration() {
        let g = FiniteAbelianGroup::new(&[4]).unwrap();
        assert_eq!(g.order(), 4);
        let elems: Vec<_> = g.elements().map(|e| e.residues()[0]).collect();
        assert_eq!(elems, vec![0, 1, 2, 3]);

        let klein = FiniteAbelianGroup::new(&[2, 2]).unwrap();
        assert_eq!(klein.order(), 4);

        let g = FiniteAbelianGroup::new(&[2, 3]).unwrap();
        assert_eq!(g.order(), 6);
        let e = GroupElement {
            residues: vec![1, 2],
        };
        assert_eq!(g.index(&e).unwrap(), 5);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            FiniteAbelianGroup::new(&[]),
            Err(Error::InvalidGroup(_))
        ));
        assert!(matches!(
            FiniteAbelianGroup::new(&[3, 0]),
            Err(Error::InvalidGroup(_))
        ));
        assert!(matches!(
            FiniteAbelianGroup::with_cap(&[64, 64, 2], 4096),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn group_law() {
        let g = FiniteAbelianGroup::new(&[4]).unwrap();
        let sum = g.add(&g.element(3), &g.element(2)).unwrap();
        assert_eq!(g.index(&sum).unwrap(), 1);

        let g = FiniteAbelianGroup::new(&[2, 3]).unwrap();
        let a = GroupElement {
            residues: vec![1, 2],
        };
        let s = g.add(&a, &a).unwrap();
        assert_eq!(s.residues(), &[0, 1]);

        // identity case
        for i in 0..g.order() {
            let a = g.element(i);
            let s = g.add(&a, &g.identity()).unwrap();
            assert_eq!(s, a);
        }
    }

    #[test]
    fn rank_mismatch_is_rejected() {
        let g = FiniteAbelianGroup::new(&[2, 3]).unwrap();
        let alien = GroupElement {
            residues: vec![1],
        };
        assert!(matches!(
            g.add(&alien, &g.identity()),
            Err(Error::InvalidElement(_))
        ));
        assert!(matches!(g.index(&alien), Err(Error::InvalidElement(_))));
    }

    #[test]
    fn character_values() {
        // Z_4, k=1, x=3 -> exp(3 pi i / 2) = -i
        let g = FiniteAbelianGroup::new(&[4]).unwrap();
        let v = g.character_eval(&g.character(1), &g.element(3)).unwrap();
        assert!((v - Complex64::new(0.0, -1.0)).norm() < 1e-14);

        // trivial character
        for i in 0..4 {
            let v = g.character_eval(&g.character(0), &g.element(i)).unwrap();
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }

        // Z_2 x Z_2, k=(1,1), x=(1,0) -> -1
        let g = FiniteAbelianGroup::new(&[2, 2]).unwrap();
        let k = g.character_index(&Character {
            frequencies: vec![1, 1],
        })
        .unwrap();
        let x = g
            .index(&GroupElement {
                residues: vec![1, 0],
            })
            .unwrap();
        let v = g.character_eval_indices(k, x);
        assert!((v - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn character_orthogonality_small_orders() {
        // (1/N) sum_x chi_k(x) conj(chi_l(x)) = delta_{k,l} for all orders <= 64
        let groups = [vec![2], vec![3], vec![8], vec![2, 2], vec![2, 3], vec![4, 4], vec![2, 3, 4], vec![64]];
        for orders in groups {
            let g = FiniteAbelianGroup::new(&orders).unwrap();
            let n = g.order();
            for k in 0..n {
                for l in 0..n {
                    let mut acc = Complex64::default();
                    for x in 0..n {
                        acc += g.character_eval_indices(k, x)
                            * g.character_eval_indices(l, x).conj();
                    }
                    acc /= n as f64;
                    let expect = if k == l { 1.0 } else { 0.0 };
                    assert!(
                        (acc - Complex64::new(expect, 0.0)).norm() < 1e-12,
                        "orthogonality failed at {orders:?} k={k} l={l}: {acc}"
                    );
                }
            }
        }
    }

    #[test]
    fn character_homomorphism_random_triples() {
        let g = FiniteAbelianGroup::new(&[3, 4, 5]).unwrap();
        let n = g.order();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let k = rng.gen_range(0..n);
            let x = rng.gen_range(0..n);
            let y = rng.gen_range(0..n);
            let lhs = g.character_eval_indices(k, g.add_indices(x, y));
            let rhs = g.character_eval_indices(k, x) * g.character_eval_indices(k, y);
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn spec_string_round_trip() {
        let g: FiniteAbelianGroup = "2x3x4".parse().unwrap();
        assert_eq!(g.orders(), &[2, 3, 4]);
        assert_eq!(g.to_string(), "2x3x4");
        assert!("2xky".parse::<FiniteAbelianGroup>().is_err());
    }

    proptest! {
        #[test]
        fn index_round_trip(orders in prop::collection::vec(1usize..6, 1..4)) {
            let g = FiniteAbelianGroup::new(&orders).unwrap();
            for i in 0..g.order() {
                prop_assert_eq!(g.index(&g.element(i)).unwrap(), i);
            }
        }

        #[test]
        fn addition_is_commutative(orders in prop::collection::vec(1usize..6, 1..4), a in 0usize..1000, b in 0usize..1000) {
            let g = FiniteAbelianGroup::new(&orders).unwrap();
            let (a, b) = (a % g.order(), b % g.order());
            prop_assert_eq!(g.add_indices(a, b), g.add_indices(b, a));
            prop_assert_eq!(g.add_indices(a, g.neg_index(a)), 0);
        }
    }
}
