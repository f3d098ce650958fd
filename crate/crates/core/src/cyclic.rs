//! Cyclic quotient singularities `1/n(q,1)`.
//!
//! The germ is `C^2/Z_n` acting with weights `(q,1)` on coordinates `(x,y)`;
//! the distinguished branch (the one a boundary curve `C` lies on, when
//! present) is `{x = 0}`, i.e. the weight-`q` coordinate. Provided are:
//!
//! - the minimal-resolution chain via the continued fraction of `n/q`
//!   (entries as self-intersections `<= -2`, first entry adjacent to the
//!   strict transform of `{x = 0}`), and its inverse;
//! - crepant coefficients of a chain with boundary multiplicities at the two
//!   ends (the numbers printed below resolution diagrams, i.e. negated
//!   discrepancies);
//! - log discrepancies of lattice valuations: for a point `v = (x,y)` of the
//!   lattice `Z^2 + Z(q/n, 1/n)` in the open positive quadrant,
//!   `l(v) = x(1 - d1) + y(1 - d2)` where `d1, d2` are the boundary
//!   coefficients along `{x=0}`, `{y=0}`; the discrepancy of the associated
//!   divisor is `l(v) - 1`;
//! - complete enumeration of the valuations with `l(v)` below a threshold.

use crate::affine::AffineForm;
use crate::excgraph::{ExcError, ExcGraph};
use crate::rat::{int, rat, Rat};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclicQuot {
    pub n: u64,
    pub q: u64,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CyclicError {
    #[error("invalid quotient type 1/{n}({q},1)")]
    InvalidType { n: u64, q: u64 },
    #[error("nothing to resolve: the point is smooth")]
    SmoothPoint,
    #[error("not a minimal chain: entry {0} is >= -1")]
    NotMinimal(i64),
    #[error("({x}, {y}) is not a point of the lattice of 1/{n}({q},1)")]
    NotInLattice { n: u64, q: u64, x: String, y: String },
    #[error("coefficient along an axis is >= 1: enumeration unbounded")]
    NotKltAlongAxis,
    #[error(transparent)]
    Exc(#[from] ExcError),
}

impl CyclicQuot {
    /// `1/n(q,1)`; `n = 1` encodes a smooth point (then `q = 0`).
    pub fn new(n: u64, q: u64) -> Result<Self, CyclicError> {
        let ok = if n == 1 {
            q == 0
        } else {
            q > 0 && q < n && gcd(n, q) == 1
        };
        if ok {
            Ok(CyclicQuot { n, q })
        } else {
            Err(CyclicError::InvalidType { n, q })
        }
    }

    pub fn smooth() -> Self {
        CyclicQuot { n: 1, q: 0 }
    }

    pub fn is_smooth(&self) -> bool {
        self.n == 1
    }

    /// The same singularity with the two coordinate axes swapped:
    /// `1/n(q',1)` with `q q' = 1 (mod n)`.
    pub fn swapped(&self) -> Self {
        if self.n == 1 {
            *self
        } else {
            CyclicQuot {
                n: self.n,
                q: mod_inverse(self.q, self.n),
            }
        }
    }

    /// Lattice membership of `(x, y)` in `Z^2 + Z(q/n, 1/n)`.
    pub fn contains(&self, v: &LatticeValuation) -> bool {
        let n = int(self.n as i64);
        let nx = &v.x * &n;
        let ny = &v.y * &n;
        if !crate::rat::is_integer(&nx) || !crate::rat::is_integer(&ny) {
            return false;
        }
        let i = nx.to_integer();
        let j = ny.to_integer();
        let m = num_bigint::BigInt::from(self.n);
        ((&i - num_bigint::BigInt::from(self.q) * &j) % &m).is_zero()
    }

    /// Primitivity in the lattice: no `v/k` with `k >= 2` is a lattice point.
    pub fn is_primitive(&self, v: &LatticeValuation) -> bool {
        let n = int(self.n as i64);
        let i = (&v.x * &n).to_integer();
        let j = (&v.y * &n).to_integer();
        let g = i.gcd(&j);
        let g = match u64::try_from(g.abs()) {
            Ok(g) => g,
            Err(_) => return false,
        };
        for k in 2..=g {
            if g % k == 0 {
                let w = LatticeValuation {
                    x: &v.x / int(k as i64),
                    y: &v.y / int(k as i64),
                };
                if self.contains(&w) {
                    return false;
                }
            }
        }
        true
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn mod_inverse(q: u64, n: u64) -> u64 {
    for k in 1..n {
        if (q * k) % n == 1 {
            return k;
        }
    }
    unreachable!("gcd(q, n) = 1 guaranteed by construction")
}

/// Minimal-resolution chain: self-intersections, all `<= -2`, first entry
/// adjacent to the strict transform of `{x = 0}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionChain(pub Vec<i64>);

impl ResolutionChain {
    pub fn new(selfints: Vec<i64>) -> Result<Self, CyclicError> {
        if let Some(&bad) = selfints.iter().find(|&&c| c >= -1) {
            return Err(CyclicError::NotMinimal(bad));
        }
        Ok(ResolutionChain(selfints))
    }

    pub fn graph(&self) -> ExcGraph {
        ExcGraph::chain(&self.0)
    }
}

/// Hirzebruch-Jung expansion: the unique chain of self-intersections
/// `<= -2` whose continued fraction `c1 - 1/(c2 - 1/...)` equals `n/q`.
pub fn hj_expand(s: CyclicQuot) -> Result<ResolutionChain, CyclicError> {
    if s.n < 2 {
        return Err(CyclicError::SmoothPoint);
    }
    let mut out = Vec::new();
    let (mut n, mut q) = (s.n, s.q);
    while q > 0 {
        let a = n.div_ceil(q);
        out.push(-(a as i64));
        let next = (a * q - n, q);
        n = next.1;
        q = next.0;
    }
    Ok(ResolutionChain(out))
}

/// Inverse of `hj_expand`: evaluate the continued fraction.
pub fn hj_reconstruct(chain: &ResolutionChain) -> Result<CyclicQuot, CyclicError> {
    if let Some(&bad) = chain.0.iter().find(|&&c| c >= -1) {
        return Err(CyclicError::NotMinimal(bad));
    }
    let mut value: Option<Rat> = None;
    for &c in chain.0.iter().rev() {
        let a = int(-c);
        value = Some(match value {
            None => a,
            Some(v) => &a - &(crate::rat::one() / v),
        });
    }
    let v = value.ok_or(CyclicError::SmoothPoint)?;
    let n = u64::try_from(v.numer().clone()).expect("positive by construction");
    let q = u64::try_from(v.denom().clone()).expect("positive by construction");
    CyclicQuot::new(n, q)
}

/// Crepant coefficients (negated discrepancies) of a resolution chain whose
/// ends meet strict transforms of boundary multiplicity `left_mult` (at the
/// first entry, the `{x=0}` side) and `right_mult` (at the last entry).
pub fn chain_discrepancies(
    chain: &ResolutionChain,
    left_mult: &AffineForm,
    right_mult: &AffineForm,
) -> Result<Vec<AffineForm>, CyclicError> {
    let g = chain.graph();
    let mut attach = vec![(0usize, left_mult.clone(), 1u64)];
    if !g.is_empty() {
        attach.push((g.len() - 1, right_mult.clone(), 1));
    }
    Ok(g.crepant_coefficients(&attach)?)
}

/// A point of the valuation lattice, in the closed positive quadrant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeValuation {
    #[serde(with = "crate::affine::rat_str")]
    pub x: Rat,
    #[serde(with = "crate::affine::rat_str")]
    pub y: Rat,
}

impl LatticeValuation {
    pub fn new(x: Rat, y: Rat) -> Self {
        LatticeValuation { x, y }
    }
}

/// The lattice points of the chain curves, in chain order: `v_1 = (q/n, 1/n)`
/// and `v_{i+1} = -c_i v_i - v_{i-1}` with `v_0 = (1, 0)`.
pub fn chain_valuations(s: CyclicQuot) -> Result<Vec<LatticeValuation>, CyclicError> {
    let chain = hj_expand(s)?;
    let n = int(s.n as i64);
    let mut prev = (crate::rat::one(), crate::rat::zero());
    let mut cur = (rat(s.q as i64, 1) / n.clone(), crate::rat::one() / n);
    let mut out = Vec::with_capacity(chain.0.len());
    for &c in &chain.0 {
        out.push(LatticeValuation::new(cur.0.clone(), cur.1.clone()));
        let next = (
            &int(-c) * &cur.0 - &prev.0,
            &int(-c) * &cur.1 - &prev.1,
        );
        prev = cur;
        cur = next;
    }
    debug_assert_eq!(cur, (crate::rat::zero(), crate::rat::one()));
    Ok(out)
}

/// Log discrepancy `l(v) = x(1-d1) + y(1-d2)` of the lattice valuation `v`
/// with boundary coefficients `d1` on `{x=0}` and `d2` on `{y=0}`, as a form
/// in the boundary parameter. The discrepancy of the divisor is `l(v) - 1`.
pub fn toric_log_discrepancy(
    s: CyclicQuot,
    d1: &AffineForm,
    d2: &AffineForm,
    v: &LatticeValuation,
) -> Result<AffineForm, CyclicError> {
    if !s.contains(v) {
        return Err(CyclicError::NotInLattice {
            n: s.n,
            q: s.q,
            x: crate::rat::fmt_rat(&v.x),
            y: crate::rat::fmt_rat(&v.y),
        });
    }
    let one = AffineForm::constant_form(crate::rat::one());
    let fx = (&one - d1).scale(&v.x);
    let fy = (&one - d2).scale(&v.y);
    Ok(&fx + &fy)
}

/// All primitive lattice valuations in the open positive quadrant with
/// `l(v) <= threshold` at parameter value `p`, with their `l` values.
///
/// Finite because `x(1-d1(p)) <= threshold` and `y(1-d2(p)) <= threshold`
/// bound both coordinates once the axis coefficients are `< 1`.
pub fn enumerate_deep_valuations(
    s: CyclicQuot,
    d1: &AffineForm,
    d2: &AffineForm,
    p: &Rat,
    threshold: &Rat,
) -> Result<Vec<(LatticeValuation, Rat)>, CyclicError> {
    let c1 = d1.eval(p);
    let c2 = d2.eval(p);
    let one = crate::rat::one();
    if c1 >= one || c2 >= one || c1 < crate::rat::zero() || c2 < crate::rat::zero() {
        return Err(CyclicError::NotKltAlongAxis);
    }
    let n = s.n;
    let nr = int(n as i64);
    // i/n <= threshold / (1 - c1), so i <= n * threshold / (1 - c1).
    let imax = crate::rat::floor_int(&(&(&nr * threshold) / &(&one - &c1)));
    let jmax = crate::rat::floor_int(&(&(&nr * threshold) / &(&one - &c2)));
    let imax = crate::rat::to_i64(&imax).max(0);
    let jmax = crate::rat::to_i64(&jmax).max(0);
    let mut out = Vec::new();
    for i in 1..=imax {
        for j in 1..=jmax {
            // Lattice condition: i = q*j (mod n).
            if n > 1 && (i as u128 % n as u128) != (s.q as u128 * j as u128) % n as u128 {
                continue;
            }
            let v = LatticeValuation::new(rat(i, n as i64), rat(j, n as i64));
            if !s.is_primitive(&v) {
                continue;
            }
            let l = &(&v.x * &(&one - &c1)) + &(&v.y * &(&one - &c2));
            if l <= *threshold {
                out.push((v, l));
            }
        }
    }
    out.sort_by(|a, b| (a.0.y.clone(), a.0.x.clone()).cmp(&(b.0.y.clone(), b.0.x.clone())));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::{af, AffineForm};

    fn cq(n: u64, q: u64) -> CyclicQuot {
        CyclicQuot::new(n, q).unwrap()
    }

    /// Brute-force oracle: evaluate the continued fraction of a chain.
    fn cf_value(chain: &[i64]) -> Rat {
        let mut v: Option<Rat> = None;
        for &c in chain.iter().rev() {
            let a = int(-c);
            v = Some(match v {
                None => a,
                Some(x) => &a - &(crate::rat::one() / x),
            });
        }
        v.unwrap()
    }

    #[test]
    fn hj_examples() {
        assert_eq!(hj_expand(cq(2, 1)).unwrap().0, vec![-2]);
        assert_eq!(hj_expand(cq(5, 4)).unwrap().0, vec![-2, -2, -2, -2]);
        assert_eq!(hj_expand(cq(7, 4)).unwrap().0, vec![-2, -4]);
        assert_eq!(cf_value(&[-2, -4]), rat(7, 4));
        assert!(matches!(
            hj_expand(CyclicQuot::smooth()),
            Err(CyclicError::SmoothPoint)
        ));
    }

    #[test]
    fn hj_reconstruct_examples() {
        assert_eq!(
            hj_reconstruct(&ResolutionChain(vec![-2])).unwrap(),
            cq(2, 1)
        );
        assert_eq!(
            hj_reconstruct(&ResolutionChain(vec![-2, -4])).unwrap(),
            cq(7, 4)
        );
        // 3 - 1/3 = 8/3.
        assert_eq!(
            hj_reconstruct(&ResolutionChain(vec![-3, -3])).unwrap(),
            cq(8, 3)
        );
        assert!(matches!(
            hj_reconstruct(&ResolutionChain(vec![-1, -2])),
            Err(CyclicError::NotMinimal(-1))
        ));
    }

    #[test]
    fn roundtrip_small() {
        for n in 2..=60u64 {
            for q in 1..n {
                if gcd(n, q) != 1 {
                    continue;
                }
                let s = cq(n, q);
                let chain = hj_expand(s).unwrap();
                assert_eq!(cf_value(&chain.0), rat(n as i64, q as i64));
                assert_eq!(hj_reconstruct(&chain).unwrap(), s);
            }
        }
    }

    #[test]
    fn chain_discrepancy_examples() {
        let zero = AffineForm::zero();
        let m = af(6, 1, -6, 1);
        assert_eq!(
            chain_discrepancies(&ResolutionChain(vec![-2]), &m, &zero).unwrap(),
            vec![af(3, 1, -3, 1)]
        );
        assert_eq!(
            chain_discrepancies(&ResolutionChain(vec![-2, -2]), &zero, &zero).unwrap(),
            vec![AffineForm::zero(), AffineForm::zero()]
        );
        assert_eq!(
            chain_discrepancies(&ResolutionChain(vec![-2, -2]), &m, &zero).unwrap(),
            vec![af(4, 1, -4, 1), af(2, 1, -2, 1)]
        );
    }

    #[test]
    fn du_val_iff_crepant() {
        for n in 2..=12u64 {
            for q in 1..n {
                if gcd(n, q) != 1 {
                    continue;
                }
                let chain = hj_expand(cq(n, q)).unwrap();
                let a = chain_discrepancies(&chain, &AffineForm::zero(), &AffineForm::zero())
                    .unwrap();
                let crepant = a.iter().all(|f| *f == AffineForm::zero());
                let du_val = chain.0.iter().all(|&c| c == -2);
                assert_eq!(crepant, du_val, "1/{n}({q},1)");
            }
        }
    }

    #[test]
    fn toric_log_discrepancy_examples() {
        // Weights (q/n, 1/n) with d1 = b on {x=0}: l = ((1-b)q + 1)/n.
        // At n=2, q=1, b=6/7: l = 4/7, discrepancy -3/7.
        let b = AffineForm::param();
        let l = toric_log_discrepancy(
            cq(2, 1),
            &b,
            &AffineForm::zero(),
            &LatticeValuation::new(rat(1, 2), rat(1, 2)),
        )
        .unwrap();
        assert_eq!(l.eval(&rat(6, 7)), rat(4, 7));

        // Smooth point, ordinary blow-up: l = 2, discrepancy 1.
        let l = toric_log_discrepancy(
            CyclicQuot::smooth(),
            &AffineForm::zero(),
            &AffineForm::zero(),
            &LatticeValuation::new(int(1), int(1)),
        )
        .unwrap();
        assert_eq!(l, AffineForm::constant_form(int(2)));

        // (2,1) with d1 = 6-6b at v = (5/2, 1/2): l = 15b - 12.
        let l = toric_log_discrepancy(
            cq(2, 1),
            &af(6, 1, -6, 1),
            &AffineForm::zero(),
            &LatticeValuation::new(rat(5, 2), rat(1, 2)),
        )
        .unwrap();
        assert_eq!(l, af(-12, 1, 15, 1));

        // Off-lattice point is rejected.
        assert!(toric_log_discrepancy(
            cq(4, 1),
            &AffineForm::zero(),
            &AffineForm::zero(),
            &LatticeValuation::new(rat(1, 4), rat(1, 2)),
        )
        .is_err());
    }

    #[test]
    fn l_is_additive_on_the_lattice() {
        let s = cq(7, 4);
        let d1 = af(1, 2, 0, 1);
        let d2 = af(2, 3, 0, 1);
        let vs = chain_valuations(s).unwrap();
        for v in &vs {
            for w in &vs {
                let sum = LatticeValuation::new(&v.x + &w.x, &v.y + &w.y);
                let a = toric_log_discrepancy(s, &d1, &d2, v).unwrap();
                let b = toric_log_discrepancy(s, &d1, &d2, w).unwrap();
                let c = toric_log_discrepancy(s, &d1, &d2, &sum).unwrap();
                assert_eq!(&a + &b, c);
            }
        }
    }

    /// The linear-system route and the toric route compute the same chain
    /// coefficients: a_i = 1 - l(v_i).
    #[test]
    fn chain_vs_toric_agreement() {
        let one = AffineForm::constant_form(crate::rat::one());
        for n in 2..=30u64 {
            for q in 1..n {
                if gcd(n, q) != 1 {
                    continue;
                }
                let s = cq(n, q);
                let d1 = af(0, 1, 1, 1); // coefficient b on {x=0}
                let d2 = af(1, 2, 0, 1); // 1/2 on {y=0}
                let chain = hj_expand(s).unwrap();
                let forms = chain_discrepancies(&chain, &d1, &d2).unwrap();
                let vs = chain_valuations(s).unwrap();
                assert_eq!(forms.len(), vs.len());
                for (f, v) in forms.iter().zip(&vs) {
                    let l = toric_log_discrepancy(s, &d1, &d2, v).unwrap();
                    assert_eq!(*f, &one - &l, "1/{n}({q},1) at ({:?})", v);
                }
            }
        }
    }

    #[test]
    fn enumerate_examples() {
        // (2,1) with d1 = 6-6b at b = 8/9: no deep valuations.
        let got = enumerate_deep_valuations(
            cq(2, 1),
            &af(6, 1, -6, 1),
            &AffineForm::zero(),
            &rat(8, 9),
            &rat(1, 7),
        )
        .unwrap();
        assert!(got.is_empty());

        // Smooth point with 6/7 and 1/2: minimum l is 9/14, empty.
        let got = enumerate_deep_valuations(
            CyclicQuot::smooth(),
            &af(6, 7, 0, 1),
            &af(1, 2, 0, 1),
            &rat(0, 1),
            &rat(1, 7),
        )
        .unwrap();
        assert!(got.is_empty());

        // The germ of the family with the deep endpoint: 1/3(1,1) carrying
        // t on {x=0} and 2/3 on {y=0}; at t = 19/21 exactly one valuation
        // reaches l = 1/7, namely (1/3, 1/3).
        let got = enumerate_deep_valuations(
            cq(3, 1),
            &AffineForm::param(),
            &af(2, 3, 0, 1),
            &rat(19, 21),
            &rat(1, 7),
        )
        .unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].0, LatticeValuation::new(rat(1, 3), rat(1, 3)));
        assert_eq!(got[0].1, rat(1, 7));
        // Just below the endpoint the germ is shallow.
        let got = enumerate_deep_valuations(
            cq(3, 1),
            &AffineForm::param(),
            &af(2, 3, 0, 1),
            &rat(37, 42),
            &rat(1, 7),
        )
        .unwrap();
        assert!(got.is_empty());

        // Non-klt axis coefficient is rejected.
        assert!(enumerate_deep_valuations(
            cq(2, 1),
            &AffineForm::constant_form(crate::rat::one()),
            &AffineForm::zero(),
            &rat(0, 1),
            &rat(1, 7),
        )
        .is_err());
    }

    /// Swapping the axes (and inverting q) relabels the same valuations.
    #[test]
    fn enumerate_swap_symmetry() {
        let s = cq(7, 4);
        let d1 = af(6, 7, 0, 1);
        let d2 = af(1, 2, 0, 1);
        let p = rat(0, 1);
        let thr = rat(1, 2);
        let a = enumerate_deep_valuations(s, &d1, &d2, &p, &thr).unwrap();
        let b = enumerate_deep_valuations(s.swapped(), &d2, &d1, &p, &thr).unwrap();
        let mut b_swapped: Vec<(LatticeValuation, Rat)> = b
            .into_iter()
            .map(|(v, l)| (LatticeValuation::new(v.y, v.x), l))
            .collect();
        b_swapped.sort_by(|x, y| (x.0.y.clone(), x.0.x.clone()).cmp(&(y.0.y.clone(), y.0.x.clone())));
        assert_eq!(a, b_swapped);
    }
}
